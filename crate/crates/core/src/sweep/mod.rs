//! Batch evaluation of witnesses over γ grids, figure datasets and
//! analytic-vs-oracle verification.

pub mod config;
pub mod figures;
pub mod output;
pub mod plot;
pub mod verify;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::Analytic;
use crate::error::{Error, Result};
use crate::fock::{moment_table_oracle, CutoffPolicy};
use crate::moments::{MomentTable, Provenance};
use crate::states::{Family, StateSpec};
use crate::witness::{self, WitnessKind, WitnessReport};

pub use config::{ConfigOverrides, Engine, Format, GammaGrid, Spacing, SweepConfig};

/// Error code for rows whose analytic and oracle values differ by more than
/// the agreement tolerance.
pub const DISAGREEMENT: &str = "Disagreement";

/// Assumptions recorded with every sweep.
pub const ASSUMPTIONS: &[&str] = &[
    "the amplitude z in the closed-form moments is identified with gamma",
    "states carry explicit photon addition a^dag^m b^dag^n on both superposition branches",
    "cross terms of the closed-form moments include the coherent overlap exp(-4|gamma|^2)",
    "witnesses use single-mode (mode a) moments; mode b is traced out",
    "sub-Poissonian witness uses standard Stirling numbers S(e,f) with sign (-1)^(l-e)",
    "quadrature central moments use X = (a + a^dag)/sqrt(2) with the binomial normal-ordered expansion",
];

/// One output record. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub family: Family,
    pub m: u32,
    pub n: u32,
    pub gamma: f64,
    pub witness: WitnessKind,
    pub l: u32,
    pub value: Option<f64>,
    pub nonclassical: Option<bool>,
    pub provenance: &'static str,
    pub discrepancy: Option<f64>,
    pub cutoff: Option<usize>,
    pub error: Option<&'static str>,
}

impl Row {
    /// Errors that mean the point could not be computed. `OddOrder` marks a
    /// requested-but-undefined squeezing order and is not a failure.
    pub fn failed(&self) -> bool {
        matches!(self.error, Some(code) if code != "OddOrder")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: SweepConfig,
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub rows: Vec<Row>,
    pub metadata: Metadata,
}

impl SweepResult {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.failed()).count()
    }
}

pub(crate) fn metadata(config: &SweepConfig, notes: Vec<String>) -> Metadata {
    Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        notes,
    }
}

/// One `(family, m, n, γ)` grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub family: Family,
    pub m: u32,
    pub n: u32,
    pub gamma: f64,
}

impl Point {
    pub fn spec(&self) -> StateSpec {
        StateSpec { family: self.family, gamma: C64::new(self.gamma, 0.0), m: self.m, n: self.n }
    }
}

/// Grid points in output order: family, then (m, n) pair, then γ.
pub fn points(config: &SweepConfig) -> Vec<Point> {
    let gammas = config.gamma.points();
    let mut out = Vec::new();
    for &family in &config.families {
        for &(m, n) in &config.pairs {
            for &gamma in &gammas {
                out.push(Point { family, m, n, gamma });
            }
        }
    }
    out
}

/// Moment tables for a point, per engine.
pub(crate) struct PointTables {
    pub analytic: Option<Result<MomentTable>>,
    pub oracle: Option<Result<MomentTable>>,
}

pub(crate) fn point_tables(
    spec: &StateSpec,
    max_order: u32,
    engine: Engine,
    analytic: &Analytic,
    policy: &CutoffPolicy,
) -> PointTables {
    let run_a = matches!(engine, Engine::Analytic | Engine::Both);
    let run_o = matches!(engine, Engine::Oracle | Engine::Both);
    PointTables {
        analytic: run_a.then(|| analytic.moment_table(spec, max_order)),
        oracle: run_o.then(|| moment_table_oracle(spec, max_order, policy)),
    }
}

fn evaluate_on(table: &Option<Result<MomentTable>>, kind: WitnessKind, l: u32) -> Option<Result<WitnessReport>> {
    table.as_ref().map(|t| match t {
        Ok(t) => witness::evaluate(kind, t, l),
        Err(e) => Err(e.clone()),
    })
}

fn row_for(
    point: &Point,
    kind: WitnessKind,
    l: u32,
    tables: &PointTables,
    tol_agreement: f64,
) -> Row {
    let cutoff = tables.oracle.as_ref().and_then(|t| t.as_ref().ok()).and_then(|t| t.cutoff);
    let mut row = Row {
        family: point.family,
        m: point.m,
        n: point.n,
        gamma: point.gamma,
        witness: kind,
        l,
        value: None,
        nonclassical: None,
        provenance: Provenance::Analytic.name(),
        discrepancy: None,
        cutoff,
        error: None,
    };
    let a = evaluate_on(&tables.analytic, kind, l);
    let o = evaluate_on(&tables.oracle, kind, l);
    let report: Result<WitnessReport> = match (a, o) {
        (Some(a), Some(o)) => match (a, o) {
            (Ok(a), Ok(o)) => Ok(WitnessReport::combine(&a, &o)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        },
        (Some(r), None) | (None, Some(r)) => r,
        (None, None) => Err(Error::InvalidArgument("no engine selected".into())),
    };
    match report {
        Ok(r) => {
            row.value = Some(r.value);
            row.nonclassical = Some(r.nonclassical);
            row.provenance = r.provenance.name();
            if r.provenance == Provenance::Both {
                row.discrepancy = Some(r.discrepancy);
                if r.discrepancy > tol_agreement {
                    row.error = Some(DISAGREEMENT);
                }
            }
        }
        Err(e) => {
            row.provenance = match (&tables.analytic, &tables.oracle) {
                (Some(_), Some(_)) => Provenance::Both.name(),
                (None, Some(_)) => Provenance::Oracle.name(),
                _ => Provenance::Analytic.name(),
            };
            row.error = Some(e.code());
        }
    }
    row
}

/// All rows of one grid point, in (witness, order) config order.
pub(crate) fn evaluate_point(
    point: &Point,
    config: &SweepConfig,
    analytic: &Analytic,
    policy: &CutoffPolicy,
) -> Vec<Row> {
    let max_order = config
        .witnesses
        .iter()
        .flat_map(|k| config.orders_for(*k).iter().map(move |&l| k.required_order(l)))
        .max()
        .unwrap_or(1)
        .max(1);
    let tables = point_tables(&point.spec(), max_order, config.engine, analytic, policy);
    let mut rows = Vec::new();
    for &kind in &config.witnesses {
        for &l in config.orders_for(kind) {
            rows.push(row_for(point, kind, l, &tables, config.tol_agreement));
        }
    }
    rows
}

pub(crate) fn policy_for(config: &SweepConfig) -> CutoffPolicy {
    CutoffPolicy { convergence_tolerance: config.tol_convergence, ..CutoffPolicy::default() }
}

/// Run `f` on a dedicated pool when a thread count is configured.
pub(crate) fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Evaluate every (point, witness, order) combination of `config`.
///
/// Point failures become row-level error markers; only an invalid config
/// aborts the sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    run_sweep_with(config, &Analytic::default())
}

pub fn run_sweep_with(config: &SweepConfig, analytic: &Analytic) -> Result<SweepResult> {
    config.validate()?;
    let policy = policy_for(config);
    let pts = points(config);
    let rows: Vec<Row> = with_threads(config.threads, || {
        pts.par_iter()
            .map(|p| evaluate_point(p, config, analytic, &policy))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    })?;
    debug_assert_eq!(rows.len(), config.row_count());
    Ok(SweepResult { rows, metadata: metadata(config, Vec::new()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_oracle_smoke() {
        let mut cfg = SweepConfig::default();
        cfg.gamma = GammaGrid::linear(1.0, 1.0, 1);
        cfg.families = vec![Family::Psi1];
        cfg.pairs = vec![(0, 0)];
        cfg.engine = Engine::Oracle;
        for k in WitnessKind::ALL {
            cfg.orders.insert(k, vec![2]);
        }
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.rows.len(), 4);
        assert!(res.rows.iter().all(|r| r.value.unwrap().is_finite() && r.error.is_none()));
        assert!(res.rows.iter().all(|r| r.provenance == "oracle" && r.cutoff.is_some()));
    }

    #[test]
    fn odd_squeezing_order_is_marked_not_failed() {
        let mut cfg = SweepConfig::default();
        cfg.gamma = GammaGrid::linear(0.5, 0.5, 1);
        cfg.families = vec![Family::Psi3];
        cfg.pairs = vec![(1, 3)];
        cfg.witnesses = vec![WitnessKind::Squeezing];
        cfg.orders.insert(WitnessKind::Squeezing, vec![2, 3, 4]);
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.rows.len(), 3);
        assert_eq!(res.rows[1].error, Some("OddOrder"));
        assert!(res.rows[1].value.is_none());
        assert_eq!(res.failed_rows(), 0);
    }

    #[test]
    fn degenerate_points_are_row_errors() {
        let mut cfg = SweepConfig::default();
        cfg.gamma = GammaGrid::linear(1e-6, 1e-6, 1);
        cfg.families = vec![Family::Psi2];
        cfg.pairs = vec![(1, 3)];
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.rows.len(), cfg.row_count());
        assert!(res.rows.iter().all(|r| r.error == Some("DegenerateState")));
    }
}
