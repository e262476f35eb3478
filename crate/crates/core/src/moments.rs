//! Tables of normally ordered single-mode moments `⟨a†^p a^q⟩`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfn::{falling_ratio, to_f64};
use crate::states::StateSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Analytic,
    Oracle,
    Both,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Oracle => "oracle",
            Provenance::Both => "both",
        }
    }
}

/// Immutable table of `⟨a†^p a^q⟩` for every `p + q <= 2 * max_order`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    /// `None` for reference tables (coherent, Fock) not tied to a family.
    pub spec: Option<StateSpec>,
    pub max_order: u32,
    pub provenance: Provenance,
    /// Estimated absolute error of the entries.
    pub est_error: f64,
    /// Truncation used by the oracle, if any.
    pub cutoff: Option<usize>,
    /// Row-major `(2*max_order + 1)^2` grid; entries with `p + q` above the
    /// limit are unused.
    entries: Vec<C64>,
}

impl MomentTable {
    pub(crate) fn from_fn(
        spec: Option<StateSpec>,
        max_order: u32,
        provenance: Provenance,
        mut f: impl FnMut(u32, u32) -> Result<C64>,
    ) -> Result<Self> {
        let dim = Self::dim(max_order);
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for p in 0..dim as u32 {
            for q in 0..dim as u32 - p {
                entries[p as usize * dim + q as usize] = f(p, q)?;
            }
        }
        Ok(MomentTable { spec, max_order, provenance, est_error: 0.0, cutoff: None, entries })
    }

    fn dim(max_order: u32) -> usize {
        2 * max_order as usize + 1
    }

    /// Exact table of a coherent state `|γ⟩`: `γ*^p γ^q`.
    pub fn coherent(gamma: C64, max_order: u32) -> Self {
        Self::from_fn(None, max_order, Provenance::Analytic, |p, q| {
            Ok(gamma.conj().powu(p) * gamma.powu(q))
        })
        .expect("infallible")
    }

    /// Exact table of the number state `|k⟩`: `δ_pq k!/(k-p)!`.
    pub fn fock_number(k: u32, max_order: u32) -> Self {
        Self::from_fn(None, max_order, Provenance::Analytic, |p, q| {
            let v = if p == q && p <= k { to_f64(&falling_ratio(k, k - p)) } else { 0.0 };
            Ok(C64::new(v, 0.0))
        })
        .expect("infallible")
    }

    /// `⟨a†^p a^q⟩`, or `None` outside the table.
    pub fn get(&self, p: u32, q: u32) -> Option<C64> {
        if p + q > 2 * self.max_order {
            return None;
        }
        let dim = Self::dim(self.max_order);
        Some(self.entries[p as usize * dim + q as usize])
    }

    pub fn entry(&self, p: u32, q: u32) -> Result<C64> {
        self.get(p, q).ok_or(Error::TableTooSmall {
            have: self.max_order,
            need: (p + q).div_ceil(2),
        })
    }

    /// `⟨a†a⟩`.
    pub fn mean_photon(&self) -> f64 {
        self.get(1, 1).map(|z| z.re).unwrap_or(0.0)
    }

    pub fn require_order(&self, l: u32) -> Result<()> {
        if self.max_order < l {
            return Err(Error::TableTooSmall { have: self.max_order, need: l });
        }
        Ok(())
    }

    /// Largest violation of the Hermiticity, normalization and diagonal
    /// positivity invariants.
    pub fn invariant_residual(&self) -> f64 {
        let lim = 2 * self.max_order;
        let mut worst = (self.get(0, 0).unwrap() - C64::new(1.0, 0.0)).norm();
        for p in 0..=lim {
            for q in 0..=lim - p {
                let z = self.get(p, q).unwrap();
                let zt = self.get(q, p).unwrap();
                worst = worst.max((z - zt.conj()).norm());
                if p == q {
                    worst = worst.max(z.im.abs()).max((-z.re).max(0.0));
                }
            }
        }
        worst
    }

    /// Iterate over `((p, q), value)` for every stored entry.
    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), C64)> + '_ {
        let lim = 2 * self.max_order;
        (0..=lim).flat_map(move |p| (0..=lim - p).map(move |q| ((p, q), self.get(p, q).unwrap())))
    }
}
