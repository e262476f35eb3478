//! Lower- and higher-order nonclassicality witnesses evaluated from a
//! [`MomentTable`]. Every witness is negative exactly when it certifies
//! nonclassicality.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{MomentTable, Provenance};
use crate::numeric::compensated_sum;
use crate::specfn::{binomial, double_factorial, squeezing_threshold, stirling2, to_f64};

/// Negative values closer to zero than this are flagged as marginal.
pub const MARGINAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    MandelQ,
    Antibunching,
    SubPoissonian,
    Squeezing,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 4] =
        [WitnessKind::MandelQ, WitnessKind::Antibunching, WitnessKind::SubPoissonian, WitnessKind::Squeezing];

    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::MandelQ => "mandel_q",
            WitnessKind::Antibunching => "antibunching",
            WitnessKind::SubPoissonian => "subpoissonian",
            WitnessKind::Squeezing => "squeezing",
        }
    }

    /// Table order needed to evaluate this witness at order `l`.
    pub fn required_order(self, l: u32) -> u32 {
        match self {
            WitnessKind::Squeezing => l.div_ceil(2),
            _ => l,
        }
    }

    /// Depends only on diagonal moments `⟨a†^k a^k⟩`.
    pub fn is_diagonal(self) -> bool {
        !matches!(self, WitnessKind::Squeezing)
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "mandel_q" | "mandel" | "q" => Ok(WitnessKind::MandelQ),
            "antibunching" | "d" => Ok(WitnessKind::Antibunching),
            "subpoissonian" | "sub_poissonian" | "dh" => Ok(WitnessKind::SubPoissonian),
            "squeezing" | "s" => Ok(WitnessKind::Squeezing),
            other => Err(Error::InvalidArgument(format!("unknown witness {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub order_l: u32,
    pub value: f64,
    pub nonclassical: bool,
    /// Negative but within [`MARGINAL`] of zero.
    pub marginal: bool,
    pub provenance: Provenance,
    /// Analytic-vs-oracle gap when `provenance` is `Both`.
    pub discrepancy: f64,
}

impl WitnessReport {
    fn new(kind: WitnessKind, order_l: u32, value: f64, provenance: Provenance) -> Self {
        WitnessReport {
            kind,
            order_l,
            value,
            nonclassical: value < 0.0,
            marginal: value < 0.0 && value > -MARGINAL,
            provenance,
            discrepancy: 0.0,
        }
    }

    /// Merge an analytic and an oracle evaluation of the same witness. The
    /// analytic value is kept.
    pub fn combine(analytic: &WitnessReport, oracle: &WitnessReport) -> WitnessReport {
        debug_assert_eq!((analytic.kind, analytic.order_l), (oracle.kind, oracle.order_l));
        WitnessReport {
            provenance: Provenance::Both,
            discrepancy: (analytic.value - oracle.value).abs(),
            ..*analytic
        }
    }
}

fn real_entry(table: &MomentTable, p: u32, q: u32) -> Result<f64> {
    let z: C64 = table.entry(p, q)?;
    if z.im.abs() > 1e-12 * z.re.abs().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "diagonal moment ({p},{q}) has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `⟨(a†a)^r⟩ = Σ_f S(r,f) ⟨a†^f a^f⟩`.
pub fn number_power(table: &MomentTable, r: u32) -> Result<f64> {
    let mut terms = Vec::with_capacity(r as usize + 1);
    for f in 0..=r {
        terms.push(to_f64(&stirling2(r, f)) * real_entry(table, f, f)?);
    }
    Ok(compensated_sum(&mut terms))
}

/// `⟨(ΔN)^l⟩ = Σ_k C(l,k) (-1)^k ⟨N^(l-k)⟩ ⟨N⟩^k`.
pub fn number_central_moment(table: &MomentTable, l: u32) -> Result<f64> {
    let mean = real_entry(table, 1, 1)?;
    let mut terms = Vec::with_capacity(l as usize + 1);
    for k in 0..=l {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(sign * to_f64(&binomial(l, k)) * number_power(table, l - k)? * mean.powi(k as i32));
    }
    Ok(compensated_sum(&mut terms))
}

/// Higher-order Mandel parameter `Q^(l) = ⟨(ΔN)^l⟩ / ⟨N⟩ - 1`.
pub fn mandel_q(table: &MomentTable, l: u32) -> Result<WitnessReport> {
    check_order(l)?;
    table.require_order(l)?;
    let mean = real_entry(table, 1, 1)?;
    if mean < 1e-300 {
        return Err(Error::ZeroMeanPhoton);
    }
    let value = number_central_moment(table, l)? / mean - 1.0;
    Ok(WitnessReport::new(WitnessKind::MandelQ, l, value, table.provenance))
}

/// `d(k) = ⟨a†^(k+1) a^(k+1)⟩ - ⟨a†a⟩^(k+1)`.
fn antibunching_value(table: &MomentTable, l: u32) -> Result<f64> {
    let mean = real_entry(table, 1, 1)?;
    Ok(real_entry(table, l, l)? - mean.powi(l as i32))
}

/// Antibunching `d(l-1) = ⟨a†^l a^l⟩ - ⟨a†a⟩^l`.
pub fn antibunching_d(table: &MomentTable, l: u32) -> Result<WitnessReport> {
    check_order(l)?;
    table.require_order(l)?;
    let value = antibunching_value(table, l)?;
    Ok(WitnessReport::new(WitnessKind::Antibunching, l, value, table.provenance))
}

/// Higher-order sub-Poissonian witness
/// `D(l-1) = Σ_{e=0}^{l} Σ_{f=1}^{e} S(e,f) C(l,e) (-1)^(l-e) d(f-1) ⟨N⟩^(l-e)`,
/// which equals `⟨(ΔN)^l⟩` minus its Poissonian value at the same mean.
pub fn subpoissonian_d(table: &MomentTable, l: u32) -> Result<WitnessReport> {
    check_order(l)?;
    table.require_order(l)?;
    let mean = real_entry(table, 1, 1)?;
    let mut terms = Vec::new();
    for e in 0..=l {
        let sign = if (l - e) % 2 == 0 { 1.0 } else { -1.0 };
        let outer = sign * to_f64(&binomial(l, e)) * mean.powi((l - e) as i32);
        for f in 1..=e {
            let s = to_f64(&stirling2(e, f));
            if s == 0.0 {
                continue;
            }
            terms.push(outer * s * antibunching_value(table, f)?);
        }
    }
    let value = compensated_sum(&mut terms);
    Ok(WitnessReport::new(WitnessKind::SubPoissonian, l, value, table.provenance))
}

/// `⟨(X - ⟨X⟩)^l⟩` with `X = (a + a†)/√2`, expanded through normally
/// ordered moments:
///
/// ```text
/// ⟨(ΔX)^l⟩ = Σ_r C(l,r) (-⟨X⟩)^(l-r) 2^(-r/2)
///            Σ_i C(r,2i) (2i-1)!! Σ_k C(r-2i,k) ⟨a†^k a^(r-2i-k)⟩
/// ```
pub fn quadrature_central_from_table(table: &MomentTable, l: u32) -> Result<f64> {
    table.require_order(l.div_ceil(2))?;
    let mean = (table.entry(0, 1)? + table.entry(1, 0)?).re * std::f64::consts::FRAC_1_SQRT_2;
    let mut outer = Vec::with_capacity(l as usize + 1);
    for r in 0..=l {
        let mut raw = Vec::new();
        for i in 0..=r / 2 {
            let rest = r - 2 * i;
            let weight = to_f64(&(binomial(r, 2 * i) * double_factorial(2 * i as i64 - 1)?));
            for k in 0..=rest {
                let w = weight * to_f64(&binomial(rest, k));
                raw.push(w * table.entry(k, rest - k)?.re);
            }
        }
        let raw = compensated_sum(&mut raw) / 2f64.powf(r as f64 / 2.0);
        outer.push(to_f64(&binomial(l, r)) * (-mean).powi((l - r) as i32) * raw);
    }
    Ok(compensated_sum(&mut outer))
}

/// Hong-Mandel squeezing `S(l) = ⟨(ΔX)^l⟩ / ((l-1)!!/2^(l/2)) - 1`, `l` even.
pub fn squeezing_s(table: &MomentTable, l: u32) -> Result<WitnessReport> {
    let threshold = squeezing_threshold(l)?;
    let central = quadrature_central_from_table(table, l)?;
    let value = (central - threshold) / threshold;
    Ok(WitnessReport::new(WitnessKind::Squeezing, l, value, table.provenance))
}

fn check_order(l: u32) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!("witness order must be at least 2, got {l}")));
    }
    Ok(())
}

/// Dispatch on `kind`.
pub fn evaluate(kind: WitnessKind, table: &MomentTable, l: u32) -> Result<WitnessReport> {
    match kind {
        WitnessKind::MandelQ => mandel_q(table, l),
        WitnessKind::Antibunching => antibunching_d(table, l),
        WitnessKind::SubPoissonian => subpoissonian_d(table, l),
        WitnessKind::Squeezing => squeezing_s(table, l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coherent(g: f64) -> MomentTable {
        MomentTable::coherent(C64::new(g, 0.0), 4)
    }

    #[test]
    fn coherent_table_is_classical_boundary() {
        let t = coherent(1.3);
        assert!(mandel_q(&t, 2).unwrap().value.abs() < 1e-10);
        assert!(mandel_q(&t, 3).unwrap().value.abs() < 1e-10);
        for l in 2..=4 {
            assert!(antibunching_d(&t, l).unwrap().value.abs() < 1e-10);
            assert!(subpoissonian_d(&t, l).unwrap().value.abs() < 1e-9);
        }
        assert!(squeezing_s(&t, 2).unwrap().value.abs() < 1e-10);
        assert!(squeezing_s(&t, 4).unwrap().value.abs() < 1e-10);
    }

    #[test]
    fn single_photon_limits() {
        let t = MomentTable::fock_number(1, 4);
        let q = mandel_q(&t, 2).unwrap();
        assert_eq!(q.value, -1.0);
        assert!(q.nonclassical && !q.marginal);
        assert_eq!(antibunching_d(&t, 2).unwrap().value, -1.0);
        // ⟨(ΔN)²⟩ - ⟨N⟩ = 0 - 1 on |1⟩
        assert_eq!(subpoissonian_d(&t, 2).unwrap().value, -1.0);
    }

    #[test]
    fn squeezing_rejects_odd_order() {
        let t = coherent(0.5);
        assert_eq!(squeezing_s(&t, 3), Err(Error::OddOrder(3)));
    }

    #[test]
    fn zero_mean_photon_guard() {
        let t = MomentTable::fock_number(0, 3);
        assert_eq!(mandel_q(&t, 2), Err(Error::ZeroMeanPhoton));
    }

    #[test]
    fn table_coverage_is_checked() {
        let t = MomentTable::coherent(C64::new(1.0, 0.0), 2);
        assert!(matches!(mandel_q(&t, 3), Err(Error::TableTooSmall { .. })));
        assert!(squeezing_s(&t, 4).is_ok());
        assert!(matches!(squeezing_s(&t, 6), Err(Error::TableTooSmall { .. })));
    }

    #[test]
    fn marginal_flag() {
        let r = WitnessReport::new(WitnessKind::MandelQ, 2, -1e-12, Provenance::Oracle);
        assert!(r.nonclassical && r.marginal);
        let r = WitnessReport::new(WitnessKind::MandelQ, 2, 0.0, Provenance::Oracle);
        assert!(!r.nonclassical && !r.marginal);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in WitnessKind::ALL {
            assert_eq!(k.name().parse::<WitnessKind>().unwrap(), k);
        }
    }
}
