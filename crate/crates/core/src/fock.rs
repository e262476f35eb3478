//! Truncated two-mode Fock-space oracle.
//!
//! States are built directly from the coherent-state number expansion and
//! explicit creation-operator action; expectation values come from ladder
//! operators applied to the amplitude grid. Nothing in this module calls
//! into [`crate::analytic`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::moments::{MomentTable, Provenance};
use crate::numeric::rel_dev;
use crate::states::StateSpec;

/// `e^(-|γ|²/2) γ^j / √(j!)` for `j < cutoff`, by the ratio recurrence.
pub fn coherent_amplitudes(gamma: C64, cutoff: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(cutoff);
    if cutoff == 0 {
        return out;
    }
    let mut c = C64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    out.push(c);
    for j in 0..cutoff - 1 {
        c = c * gamma / ((j + 1) as f64).sqrt();
        out.push(c);
    }
    out
}

/// `√((j+1)(j+2)...(j+k))`.
fn ladder_factor(j: usize, k: u32) -> f64 {
    (1..=k as usize).map(|i| ((j + i) as f64).sqrt()).product()
}

/// Dense complex amplitude grid `c[j][k]` over mode a (rows) and mode b
/// (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Grid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Grid { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        if j < self.rows && k < self.cols {
            self.data[j * self.cols + k]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    fn set(&mut self, j: usize, k: usize, v: C64) {
        self.data[j * self.cols + k] = v;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`, zero-padding the smaller grid.
    pub fn inner(&self, other: &Grid) -> C64 {
        let rows = self.rows.min(other.rows);
        let cols = self.cols.min(other.cols);
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..rows {
            for k in 0..cols {
                acc += self.get(j, k).conj() * other.get(j, k);
            }
        }
        acc
    }

    pub fn lower_a(&self, q: u32) -> Grid {
        let mut out = Grid::zeros(self.rows, self.cols);
        for j in 0..self.rows.saturating_sub(q as usize) {
            let f = ladder_factor(j, q);
            for k in 0..self.cols {
                out.set(j, k, self.get(j + q as usize, k) * f);
            }
        }
        out
    }

    pub fn lower_b(&self, q: u32) -> Grid {
        let mut out = Grid::zeros(self.rows, self.cols);
        for k in 0..self.cols.saturating_sub(q as usize) {
            let f = ladder_factor(k, q);
            for j in 0..self.rows {
                out.set(j, k, self.get(j, k + q as usize) * f);
            }
        }
        out
    }

    /// `a†^p`, growing the grid so nothing is truncated.
    pub fn raise_a(&self, p: u32) -> Grid {
        let mut out = Grid::zeros(self.rows + p as usize, self.cols);
        for j in 0..self.rows {
            let f = ladder_factor(j, p);
            for k in 0..self.cols {
                out.set(j + p as usize, k, self.get(j, k) * f);
            }
        }
        out
    }

    pub fn raise_b(&self, p: u32) -> Grid {
        let mut out = Grid::zeros(self.rows, self.cols + p as usize);
        for k in 0..self.cols {
            let f = ladder_factor(k, p);
            for j in 0..self.rows {
                out.set(j, k + p as usize, self.get(j, k) * f);
            }
        }
        out
    }

    /// `(X - shift)` on mode a with `X = (a + a†)/√2`; grows by one row.
    pub fn apply_quadrature_a(&self, shift: f64) -> Grid {
        let mut out = Grid::zeros(self.rows + 1, self.cols);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..self.rows + 1 {
            for k in 0..self.cols {
                // ⟨j|a|ψ⟩ = √(j+1) ψ[j+1], ⟨j|a†|ψ⟩ = √j ψ[j-1]
                let mut v = self.get(j + 1, k) * ((j + 1) as f64).sqrt() * s;
                if j > 0 {
                    v += self.get(j - 1, k) * (j as f64).sqrt() * s;
                }
                v -= self.get(j, k) * shift;
                out.set(j, k, v);
            }
        }
        out
    }
}

/// Truncated two-mode state.
#[derive(Debug, Clone)]
pub struct FockStateTwoMode {
    pub spec: Option<StateSpec>,
    pub cutoff_a: usize,
    pub cutoff_b: usize,
    /// Normalized amplitudes, `cutoff_a x cutoff_b`.
    pub amplitudes: Grid,
    /// Squared norm of the unnormalized photon-added superposition.
    pub norm_sq_pre: f64,
    /// Upper estimate of the normalized probability outside the grid.
    pub tail_mass: f64,
}

/// Default probability allowed beyond the cutoff.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;
/// Default relative change tolerated when cutoffs grow by 25%.
pub const DEFAULT_CONVERGENCE_TOLERANCE: f64 = 1e-10;

/// Weighted coherent series `Σ_j |c_j|² (j+added)!/j!` split at `cutoff`:
/// returns `(inside, tail)`.
fn weighted_mass(gamma: C64, added: u32, cutoff: usize) -> (f64, f64) {
    let x = gamma.norm_sqr();
    let mut term = (-x).exp() * ladder_factor(0, added).powi(2);
    let mut inside = 0.0;
    let mut tail = 0.0;
    let mut j = 0usize;
    loop {
        if j < cutoff {
            inside += term;
        } else {
            tail += term;
            if term <= 1e-40 * inside.max(f64::MIN_POSITIVE) && (j as f64) > x {
                break;
            }
            if j > cutoff + 4000 {
                break;
            }
        }
        // ratio t_{j+1}/t_j = x (j+1+added) / ((j+1)(j+1))... for weight (j+added)!/j!
        term *= x * ((j + 1 + added as usize) as f64) / ((j + 1) as f64).powi(2);
        j += 1;
        if term == 0.0 && j >= cutoff {
            break;
        }
    }
    (inside, tail)
}

impl FockStateTwoMode {
    /// `N a†^m b†^n (|γ, sγ⟩ ± |-γ, -sγ⟩)` on a `cutoff_a x cutoff_b` grid.
    pub fn build(spec: &StateSpec, cutoff_a: usize, cutoff_b: usize) -> Result<Self> {
        spec.validate()?;
        let (m, n) = (spec.m as usize, spec.n as usize);
        if cutoff_a <= m || cutoff_b <= n {
            return Err(Error::InvalidArgument(format!(
                "cutoffs ({cutoff_a}, {cutoff_b}) must exceed the added photons ({m}, {n})"
            )));
        }
        let (ka, kb) = (cutoff_a - m, cutoff_b - n);
        let mut grid = Grid::zeros(cutoff_a, cutoff_b);
        let g = spec.gamma;
        let s = spec.family.b_sign();
        let sigma = spec.family.superposition_sign();
        let a_plus = coherent_amplitudes(g, ka);
        let a_minus = coherent_amplitudes(-g, ka);
        let b_plus = coherent_amplitudes(g * s, kb);
        let b_minus = coherent_amplitudes(-g * s, kb);
        for j in 0..ka {
            let fa = ladder_factor(j, spec.m);
            for k in 0..kb {
                let fb = ladder_factor(k, spec.n);
                let amp = a_plus[j] * b_plus[k] + a_minus[j] * b_minus[k] * sigma;
                grid.set(j + m, k + n, amp * fa * fb);
            }
        }
        let norm_sq_pre = grid.norm_sqr();
        if norm_sq_pre < 1e-30 {
            return Err(Error::DegenerateState { norm_sq: norm_sq_pre });
        }
        let (fa, ta) = weighted_mass(g, spec.m, ka);
        let (fb, tb) = weighted_mass(g, spec.n, kb);
        let tail_mass = 4.0 * (ta * fb + fa * tb + ta * tb) / norm_sq_pre;
        let inv = 1.0 / norm_sq_pre.sqrt();
        grid.data.iter_mut().for_each(|z| *z *= inv);
        Ok(FockStateTwoMode {
            spec: Some(*spec),
            cutoff_a,
            cutoff_b,
            amplitudes: grid,
            norm_sq_pre,
            tail_mass,
        })
    }

    /// Product coherent state `|α⟩|β⟩`, normalized on the grid.
    pub fn coherent_product(alpha: C64, beta: C64, cutoff_a: usize, cutoff_b: usize) -> Self {
        let ca = coherent_amplitudes(alpha, cutoff_a);
        let cb = coherent_amplitudes(beta, cutoff_b);
        let mut grid = Grid::zeros(cutoff_a, cutoff_b);
        for j in 0..cutoff_a {
            for k in 0..cutoff_b {
                grid.set(j, k, ca[j] * cb[k]);
            }
        }
        let norm_sq_pre = grid.norm_sqr();
        let inv = 1.0 / norm_sq_pre.sqrt();
        grid.data.iter_mut().for_each(|z| *z *= inv);
        FockStateTwoMode { spec: None, cutoff_a, cutoff_b, amplitudes: grid, norm_sq_pre, tail_mass: 1.0 - norm_sq_pre }
    }

    /// Number state `|j, k⟩`.
    pub fn number_state(j: usize, k: usize) -> Self {
        let mut grid = Grid::zeros(j + 1, k + 1);
        grid.set(j, k, C64::new(1.0, 0.0));
        FockStateTwoMode { spec: None, cutoff_a: j + 1, cutoff_b: k + 1, amplitudes: grid, norm_sq_pre: 1.0, tail_mass: 0.0 }
    }

    /// Mode-a reduced density matrix `ρ[r][s] = Σ_k c[r][k] c*[s][k]`.
    pub fn reduced_density_a(&self) -> Vec<Vec<C64>> {
        let d = self.cutoff_a;
        let mut rho = vec![vec![C64::new(0.0, 0.0); d]; d];
        for (r, row) in rho.iter_mut().enumerate() {
            for (s, entry) in row.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..self.cutoff_b {
                    acc += self.amplitudes.get(r, k) * self.amplitudes.get(s, k).conj();
                }
                *entry = acc;
            }
        }
        rho
    }

    /// Mode-a photon-number distribution.
    pub fn photon_distribution_a(&self) -> Vec<f64> {
        (0..self.cutoff_a)
            .map(|j| (0..self.cutoff_b).map(|k| self.amplitudes.get(j, k).norm_sqr()).sum())
            .collect()
    }

    /// `⟨a†^p a^q⟩` on this truncation, without convergence checking.
    pub fn expect_normal(&self, p: u32, q: u32) -> C64 {
        self.amplitudes.lower_a(p).inner(&self.amplitudes.lower_a(q))
    }

    /// `⟨a^p a†^q⟩` on this truncation.
    pub fn expect_antinormal(&self, p: u32, q: u32) -> C64 {
        self.amplitudes.raise_a(p).inner(&self.amplitudes.raise_a(q))
    }

    /// `⟨a^p b^p a†^q b†^q⟩` on this truncation.
    pub fn expect_paired_antinormal(&self, p: u32, q: u32) -> C64 {
        let left = self.amplitudes.raise_a(p).raise_b(p);
        let right = self.amplitudes.raise_a(q).raise_b(q);
        left.inner(&right)
    }

    /// `⟨(X - ⟨X⟩)^l⟩` by repeated application of the tridiagonal
    /// quadrature to the state vector.
    pub fn quadrature_central_by_operator(&self, l: u32) -> f64 {
        let mean = self.expect_normal(0, 1).re * std::f64::consts::SQRT_2;
        let half = l / 2;
        let mut left = self.amplitudes.clone();
        for _ in 0..half {
            left = left.apply_quadrature_a(mean);
        }
        let right = if l % 2 == 0 { left.clone() } else { left.apply_quadrature_a(mean) };
        left.inner(&right).re
    }

    /// `⟨(X - ⟨X⟩)^l⟩` from the reduced density matrix via normally ordered
    /// moments, `(a + a†)^r = Σ_i C(r,2i) (2i-1)!! :(a + a†)^(r-2i):`.
    pub fn quadrature_central_by_moments(&self, l: u32) -> f64 {
        let rho = self.reduced_density_a();
        let d = self.cutoff_a;
        let moment = |p: u32, q: u32| -> C64 {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..d {
                let (rp, rq) = (j + p as usize, j + q as usize);
                if rp >= d || rq >= d {
                    break;
                }
                acc += rho[rq][rp] * ladder_factor(j, p) * ladder_factor(j, q);
            }
            acc
        };
        let mean = moment(0, 1).re * std::f64::consts::SQRT_2;
        let binom = |n: u32, k: u32| -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        };
        let dfact = |n: i64| -> f64 {
            let mut acc = 1.0;
            let mut j = n;
            while j > 1 {
                acc *= j as f64;
                j -= 2;
            }
            acc
        };
        let mut total = 0.0;
        for r in 0..=l {
            let mut raw = 0.0;
            for i in 0..=r / 2 {
                let rest = r - 2 * i;
                let mut normal = 0.0;
                for k in 0..=rest {
                    normal += binom(rest, k) * moment(k, rest - k).re;
                }
                raw += binom(r, 2 * i) * dfact(2 * i as i64 - 1) * normal;
            }
            raw /= 2f64.powf(r as f64 / 2.0);
            total += binom(l, r) * (-mean).powi((l - r) as i32) * raw;
        }
        total
    }
}

/// Adaptive truncation policy for the oracle.
#[derive(Debug, Clone, Copy)]
pub struct CutoffPolicy {
    pub tail_tolerance: f64,
    pub convergence_tolerance: f64,
    pub max_cutoff: usize,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        CutoffPolicy {
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
            convergence_tolerance: DEFAULT_CONVERGENCE_TOLERANCE,
            max_cutoff: 512,
        }
    }
}

/// Result of a cutoff-converged oracle evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converged<T> {
    pub value: T,
    /// Mode-a cutoff of the accepted evaluation.
    pub cutoff: usize,
    /// Change observed against the 25% larger truncation.
    pub est_error: f64,
}

fn grow(c: usize) -> usize {
    (c as f64 * 1.25).ceil() as usize
}

impl CutoffPolicy {
    /// Coherent-series length before photon addition, with `headroom` extra
    /// levels for operators of order up to `headroom / 2`.
    pub fn base_series_len(gamma: C64, headroom: u32) -> usize {
        let g = gamma.norm();
        let spread = (g * g + 8.0 * g).ceil() as usize;
        24.max(spread) + headroom as usize
    }

    /// Smallest policy-compliant state whose tail mass is within tolerance.
    pub fn build(&self, spec: &StateSpec, headroom: u32) -> Result<FockStateTwoMode> {
        let mut len = Self::base_series_len(spec.gamma, headroom);
        loop {
            let (ca, cb) = (len + spec.m as usize, len + spec.n as usize);
            let state = FockStateTwoMode::build(spec, ca, cb)?;
            if state.tail_mass <= self.tail_tolerance {
                return Ok(state);
            }
            len = grow(len);
            if len + (spec.m.max(spec.n) as usize) > self.max_cutoff {
                return Err(Error::Unconverged(format!(
                    "tail mass {:e} above {:e} at the maximum cutoff {}",
                    state.tail_mass, self.tail_tolerance, self.max_cutoff
                )));
            }
        }
    }

    /// Evaluate `f` on successively larger truncations until growing both
    /// cutoffs by 25% changes every output by less than the convergence
    /// tolerance (relative).
    pub fn converge<T, F>(&self, spec: &StateSpec, headroom: u32, f: F) -> Result<Converged<T>>
    where
        F: Fn(&FockStateTwoMode) -> Result<Vec<C64>>,
        T: From<Vec<C64>>,
    {
        let mut state = self.build(spec, headroom)?;
        let mut current = f(&state)?;
        loop {
            let (ca, cb) = (grow(state.cutoff_a), grow(state.cutoff_b));
            if ca.max(cb) > self.max_cutoff {
                return Err(Error::Unconverged(format!(
                    "no agreement within {:e} below cutoff {}",
                    self.convergence_tolerance, self.max_cutoff
                )));
            }
            let bigger = FockStateTwoMode::build(spec, ca, cb)?;
            let next = f(&bigger)?;
            let change = current
                .iter()
                .zip(&next)
                .map(|(a, b)| rel_dev(*a, *b, 1e-13))
                .fold(0.0, f64::max);
            if change <= self.convergence_tolerance {
                let abs_change = current
                    .iter()
                    .zip(&next)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                return Ok(Converged { value: T::from(current), cutoff: state.cutoff_a, est_error: abs_change });
            }
            state = bigger;
            current = next;
        }
    }
}

/// Thin wrapper so `converge` can return a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar(pub C64);

impl From<Vec<C64>> for Scalar {
    fn from(v: Vec<C64>) -> Self {
        Scalar(v[0])
    }
}

/// Cutoff-converged `⟨a†^p a^q⟩` of mode a.
pub fn moment_numeric(spec: &StateSpec, p: u32, q: u32, policy: &CutoffPolicy) -> Result<Converged<C64>> {
    let c = policy.converge::<Scalar, _>(spec, 2 * p.max(q), |s| Ok(vec![s.expect_normal(p, q)]))?;
    Ok(Converged { value: c.value.0, cutoff: c.cutoff, est_error: c.est_error })
}

/// Cutoff-converged `⟨(X - ⟨X⟩)^l⟩` of mode a. Both internal routes
/// (operator application and moment expansion) must agree to `1e-10`.
pub fn quadrature_central_moment(spec: &StateSpec, l: u32, policy: &CutoffPolicy) -> Result<Converged<f64>> {
    if l == 0 || l > 12 {
        return Err(Error::InvalidArgument(format!("quadrature order must be in 1..=12, got {l}")));
    }
    let c = policy.converge::<Scalar, _>(spec, 2 * l, |s| {
        let by_op = s.quadrature_central_by_operator(l);
        let by_mom = s.quadrature_central_by_moments(l);
        let dev = rel_dev(C64::new(by_op, 0.0), C64::new(by_mom, 0.0), 1e-13);
        if dev > 1e-10 {
            return Err(Error::Unconverged(format!(
                "quadrature routes disagree: {by_op} vs {by_mom}"
            )));
        }
        Ok(vec![C64::new(by_op, 0.0)])
    })?;
    Ok(Converged { value: c.value.0.re, cutoff: c.cutoff, est_error: c.est_error })
}

/// Table of values computed by `converge`.
struct Entries(Vec<C64>);

impl From<Vec<C64>> for Entries {
    fn from(v: Vec<C64>) -> Self {
        Entries(v)
    }
}

/// Oracle counterpart of [`crate::analytic::Analytic::moment_table`].
pub fn moment_table_oracle(spec: &StateSpec, max_order: u32, policy: &CutoffPolicy) -> Result<MomentTable> {
    let lim = 2 * max_order;
    let index: Vec<(u32, u32)> = (0..=lim).flat_map(|p| (0..=lim - p).map(move |q| (p, q))).collect();
    let c = policy.converge::<Entries, _>(spec, 2 * lim, |s| {
        let lowered: Vec<Grid> = (0..=lim).map(|k| s.amplitudes.lower_a(k)).collect();
        Ok(index.iter().map(|&(p, q)| lowered[p as usize].inner(&lowered[q as usize])).collect())
    })?;
    let values = c.value.0;
    let mut it = values.into_iter();
    let mut table = MomentTable::from_fn(Some(*spec), max_order, Provenance::Oracle, |_, _| {
        Ok(it.next().expect("same iteration order"))
    })?;
    table.est_error = c.est_error;
    table.cutoff = Some(c.cutoff);
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::Family;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn coherent_amplitude_cases() {
        assert_eq!(coherent_amplitudes(c(0.0), 4), vec![c(1.0), c(0.0), c(0.0), c(0.0)]);
        let amps = coherent_amplitudes(c(1.0), 30);
        let total: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let amps = coherent_amplitudes(c(2.0), 40);
        assert!((amps[2] / amps[0] - c(2.0 * 2f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn photon_added_vacuum_is_number_state() {
        let spec = StateSpec { family: Family::Psi1, gamma: c(0.0), m: 1, n: 3 };
        let s = FockStateTwoMode::build(&spec, 8, 8).unwrap();
        assert!((s.amplitudes.get(1, 3) - c(1.0)).norm() < 1e-15);
        assert!((s.amplitudes.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((s.expect_normal(1, 1) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn even_cat_norm_before_normalization() {
        let spec = StateSpec { family: Family::Psi1, gamma: c(1.0), m: 0, n: 0 };
        let s = FockStateTwoMode::build(&spec, 40, 40).unwrap();
        let expect = 2.0 * (1.0 + (-4f64).exp());
        assert!((s.norm_sq_pre - expect).abs() < 1e-12 * expect);
        assert!(s.tail_mass < 1e-12);
    }

    #[test]
    fn even_cat_mean_photon() {
        let spec = StateSpec { family: Family::Psi1, gamma: c(0.9), m: 0, n: 0 };
        let v = moment_numeric(&spec, 1, 1, &CutoffPolicy::default()).unwrap();
        let expect = 0.81 * 1.62f64.tanh();
        assert!((v.value.re - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn vacuum_quadrature_moments() {
        let vac = FockStateTwoMode::number_state(0, 0);
        assert!((vac.quadrature_central_by_operator(2) - 0.5).abs() < 1e-15);
        assert!((vac.quadrature_central_by_operator(4) - 0.75).abs() < 1e-15);
        assert!((vac.quadrature_central_by_moments(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadrature_routes_agree() {
        let spec = StateSpec { family: Family::Psi2, gamma: C64::new(0.7, 0.4), m: 1, n: 2 };
        let s = CutoffPolicy::default().build(&spec, 12).unwrap();
        for l in 1..=6 {
            let a = s.quadrature_central_by_operator(l);
            let b = s.quadrature_central_by_moments(l);
            assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "l={l}: {a} vs {b}");
        }
    }

    #[test]
    fn degenerate_and_invalid_builds() {
        let spec = StateSpec { family: Family::Psi2, gamma: c(1e-20), m: 0, n: 0 };
        assert!(matches!(FockStateTwoMode::build(&spec, 30, 30), Err(Error::DegenerateState { .. })));
        let spec = StateSpec { family: Family::Psi1, gamma: c(1.0), m: 3, n: 0 };
        assert!(FockStateTwoMode::build(&spec, 3, 10).is_err());
    }

    #[test]
    fn small_cutoff_reports_large_tail() {
        let spec = StateSpec { family: Family::Psi1, gamma: c(2.0), m: 0, n: 0 };
        let s = FockStateTwoMode::build(&spec, 6, 6).unwrap();
        assert!(s.tail_mass > 1e-3);
    }
}
