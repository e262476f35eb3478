//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use photon_ecs::fock::{moment_table_oracle, quadrature_central_moment};
use photon_ecs::numeric::rel_dev;
use photon_ecs::sweep::figures::{figure_config, sign_table};
use photon_ecs::sweep::verify::verify;
use photon_ecs::sweep::{run_sweep, GammaGrid, SweepConfig};
use photon_ecs::witness::{self, antibunching_d, mandel_q, quadrature_central_from_table, squeezing_s};
use photon_ecs::{Analytic, Complex64, CutoffPolicy, Family, MomentTable, StateSpec, WitnessKind};

const MOMENT_REL_TOL: f64 = 1e-9;
const NULLITY_TOL: f64 = 1e-9;
const FOCK_LIMIT_TOL: f64 = 1e-6;
const DEGENERACY_TOL: f64 = 1e-10;
const QUADRATURE_REL_TOL: f64 = 1e-10;
/// Absolute floor below which two moments count as equal (both are zero
/// by parity up to rounding).
const ZERO_FLOOR: f64 = 1e-13;
const MOMENT_GRID_BUDGET: Duration = Duration::from_secs(60);
const FIGURES_BUDGET: Duration = Duration::from_secs(300);

const GAMMAS: [f64; 5] = [0.2, 0.5, 1.0, 1.5, 2.0];
const PAIRS: [(u32, u32); 3] = [(0, 0), (1, 3), (2, 6)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn moment_grid() -> impl Iterator<Item = StateSpec> {
    Family::ALL.into_iter().flat_map(|f| {
        PAIRS.into_iter().flat_map(move |(m, n)| GAMMAS.into_iter().map(move |g| StateSpec::new(f, g, m, n).unwrap()))
    })
}

fn oracle_agreement() -> Outcome {
    let analytic = Analytic::default();
    let policy = CutoffPolicy::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let mut count = 0;
    for spec in moment_grid() {
        let a = analytic.moment_table(&spec, 4).expect("analytic table");
        let o = moment_table_oracle(&spec, 4, &policy).expect("oracle table");
        for p in 0..=4 {
            for q in 0..=4 {
                let d = rel_dev(a.get(p, q).unwrap(), o.get(p, q).unwrap(), ZERO_FLOOR);
                count += 1;
                if d > worst {
                    worst = d;
                    worst_at = format!("{} m={} n={} gamma={} (p,q)=({p},{q})", spec.family, spec.m, spec.n, spec.gamma.re);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= MOMENT_REL_TOL && elapsed < MOMENT_GRID_BUDGET,
        format!("{count} moments, max rel dev {worst:.2e} at {worst_at}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn coherent_nullity() -> Outcome {
    let mut worst = 0.0f64;
    let mut checks = 0;
    for g in [Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.7, 0.0), Complex64::new(0.6, 0.8)] {
        let t = MomentTable::coherent(g, 4);
        let mut cases: Vec<(WitnessKind, u32)> = WitnessKind::ALL.iter().map(|k| (*k, 2)).collect();
        cases.extend([(WitnessKind::MandelQ, 3), (WitnessKind::Antibunching, 3), (WitnessKind::Squeezing, 4)]);
        for (kind, l) in cases {
            let v = witness::evaluate(kind, &t, l).expect("witness").value;
            worst = worst.max(v.abs());
            checks += 1;
        }
    }
    outcome(worst <= NULLITY_TOL, format!("{checks} witness values, max |value| {worst:.2e}"))
}

fn fock_limit() -> Outcome {
    let spec = StateSpec::new(Family::Psi1, 1e-8, 1, 3).unwrap();
    let a = Analytic::default().moment_table(&spec, 2).expect("analytic table");
    let o = moment_table_oracle(&spec, 2, &CutoffPolicy::default()).expect("oracle table");
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, t) in [("analytic", &a), ("oracle", &o)] {
        let q = mandel_q(t, 2).unwrap().value;
        let d = antibunching_d(t, 2).unwrap().value;
        pass &= (q + 1.0).abs() <= FOCK_LIMIT_TOL && (d + 1.0).abs() <= FOCK_LIMIT_TOL;
        lines.push(format!("{name}: Q(2)={q:.9} d(1)={d:.9}"));
    }
    outcome(pass, lines.join(", "))
}

fn partner_degeneracy() -> Outcome {
    let analytic = Analytic::default();
    let mut worst = 0.0f64;
    let mut checks = 0;
    for spec in moment_grid().filter(|s| matches!(s.family, Family::Psi1 | Family::Psi2)) {
        let partner = StateSpec { family: spec.family.partner(), ..spec };
        let a = analytic.moment_table(&spec, 3).unwrap();
        let b = analytic.moment_table(&partner, 3).unwrap();
        for kind in [WitnessKind::MandelQ, WitnessKind::Antibunching, WitnessKind::SubPoissonian] {
            for l in [2, 3] {
                let x = witness::evaluate(kind, &a, l).unwrap().value;
                let y = witness::evaluate(kind, &b, l).unwrap().value;
                worst = worst.max((x - y).abs() / x.abs().max(1.0));
                checks += 1;
            }
        }
    }
    outcome(worst <= DEGENERACY_TOL, format!("{checks} pairs, max deviation {worst:.2e}"))
}

fn figure_claims() -> Outcome {
    let mut cfg = figure_config();
    cfg.families = vec![Family::Psi1, Family::Psi2];
    cfg.witnesses = vec![WitnessKind::MandelQ, WitnessKind::Antibunching, WitnessKind::SubPoissonian];
    let report = verify(&cfg).expect("verify runs");
    let claims: Vec<_> = report
        .claims
        .iter()
        .filter(|c| c.reading == "single_mode" && !c.claim.starts_with("squeezing") && !c.claim.starts_with("diagonal"))
        .collect();
    let violated: Vec<String> = claims
        .iter()
        .filter(|c| !c.holds)
        .map(|c| format!("[{} ({}/{})]", c.claim, c.violations, c.checked))
        .collect();
    let detail = if violated.is_empty() {
        format!("{} claims hold", claims.len())
    } else {
        format!("{} of {} claims violated: {}", violated.len(), claims.len(), violated.join(" "))
    };
    outcome(violated.is_empty(), detail)
}

fn quadrature_cross_check() -> Outcome {
    let analytic = Analytic::default();
    let policy = CutoffPolicy::default();
    let mut worst = 0.0f64;
    let mut checks = 0;
    for spec in moment_grid() {
        let t = analytic.moment_table(&spec, 3).unwrap();
        for l in [2, 4, 6] {
            let a = quadrature_central_from_table(&t, l).unwrap();
            let o = quadrature_central_moment(&spec, l, &policy).unwrap().value;
            worst = worst.max(rel_dev(a.into(), o.into(), ZERO_FLOOR));
            checks += 1;
        }
    }
    outcome(worst <= QUADRATURE_REL_TOL, format!("{checks} moments, max rel dev {worst:.2e}"))
}

fn lower_order_squeezing() -> Outcome {
    let analytic = Analytic::default();
    let gammas = GammaGrid::linear(0.05, 2.0, 40).points();
    let mut parts = Vec::new();
    let mut pass = true;
    for family in Family::ALL {
        let mut least = f64::INFINITY;
        for (m, n) in [(1, 3), (2, 6)] {
            for &g in &gammas {
                let t = analytic.moment_table(&StateSpec::new(family, g, m, n).unwrap(), 1).unwrap();
                least = least.min(squeezing_s(&t, 2).unwrap().value);
            }
        }
        pass &= least < 0.0;
        parts.push(format!("{family} min S(2)={least:.4}"));
    }
    outcome(pass, parts.join(", "))
}

fn sign_table_archived() -> Outcome {
    let mut cfg = figure_config();
    cfg.witnesses = vec![WitnessKind::Squeezing];
    let rows = run_sweep(&cfg).expect("sweep").rows;
    let table = sign_table(&rows);
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("squeezing_sign_table.csv");
    let mut csv = String::from("family,m,n,l,pattern,negative,total\n");
    for r in &table {
        csv.push_str(&format!("{},{},{},{},{},{},{}\n", r.family, r.m, r.n, r.l, r.pattern(), r.negative, r.total));
    }
    std::fs::write(&path, csv).unwrap();
    let complete = table.len() == 4 * 2 * 3
        && table.iter().filter(|r| r.l == 3).all(|r| r.pattern() == "undefined")
        && table.iter().filter(|r| r.l != 3).all(|r| r.total == 40);
    outcome(complete, format!("{} entries archived at {}", table.len(), path.display()))
}

fn stirling_sign_identity() -> Outcome {
    let mut cfg = SweepConfig::default();
    cfg.witnesses = vec![WitnessKind::MandelQ, WitnessKind::SubPoissonian];
    cfg.orders.insert(WitnessKind::MandelQ, vec![2]);
    cfg.orders.insert(WitnessKind::SubPoissonian, vec![2]);
    cfg.pairs = vec![(0, 0), (1, 3), (2, 6)];
    let rows = run_sweep(&cfg).expect("sweep").rows;
    let mut mismatches = 0;
    let mut checks = 0;
    for pair in rows.chunks(2) {
        let (q, d) = (pair[0].value.unwrap(), pair[1].value.unwrap());
        checks += 1;
        if q.signum() != d.signum() {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0 && checks > 0, format!("{checks} grid points, {mismatches} sign mismatches"))
}

fn run_figures(cwd: &Path) -> (bool, Duration) {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_photon-ecs"))
        .args(["repro-figures", "--out", "figs"])
        .current_dir(cwd)
        .status()
        .expect("binary runs");
    (status.success(), start.elapsed())
}

fn read_tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn figures_determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ok_a, t_a) = run_figures(a.path());
    let (ok_b, t_b) = run_figures(b.path());
    let ta = read_tree(&a.path().join("figs"));
    let tb = read_tree(&b.path().join("figs"));
    let csvs = ta.iter().filter(|(n, _)| n.ends_with(".csv")).count();
    let identical = ta == tb;
    let slowest = t_a.max(t_b);
    outcome(
        ok_a && ok_b && identical && csvs >= 16 && slowest < FIGURES_BUDGET,
        format!(
            "{} files ({csvs} CSV), byte-identical={identical}, slowest run {:.2}s",
            ta.len(),
            slowest.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1  analytic moments match the oracle", oracle_agreement),
        ("2  coherent states give zero witnesses", coherent_nullity),
        ("3  Fock limit of psi1 (1,3)", fock_limit),
        ("4  psi1/psi3 and psi2/psi4 witnesses coincide", partner_degeneracy),
        ("5  figure 1-3 sign claims (positive, l=3 >= l=2, psi1 <= psi2)", figure_claims),
        ("6a quadrature moments from the table match the oracle", quadrature_cross_check),
        ("6b S(2) < 0 somewhere for every family", lower_order_squeezing),
        ("6c squeezing sign table emitted", sign_table_archived),
        ("7  sign of D(1) equals sign of Q(2)", stirling_sign_identity),
        ("8  repro-figures is fast and byte-identical", figures_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
