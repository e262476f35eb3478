//! Figure datasets: one CSV and one SVG per panel.
//!
//! Layout under `outdir`:
//!
//! ```text
//! fig1_mandel_q/      psi{1,2}_m{1,2}_n{3,6}.{csv,svg}
//! fig2_antibunching/  psi{1,2}_m{1,2}_n{3,6}.{csv,svg}
//! fig3_subpoissonian/ psi{1,2}_m{1,2}_n{3,6}.{csv,svg}
//! fig4_squeezing/     psi{1..4}_m{1,2}_n{3,6}.{csv,svg}, sign_table.csv
//! metadata.json
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::output::to_csv;
use super::plot::{line_plot, Curve};
use super::{metadata, run_sweep_with, GammaGrid, Metadata, Row, SweepConfig};
use crate::analytic::Analytic;
use crate::error::Result;
use crate::states::Family;
use crate::witness::WitnessKind;

pub const PAIRS: [(u32, u32); 2] = [(1, 3), (2, 6)];

const CAPTION_NOTE: &str = "the squeezing figure caption labels panels (a)-(d) twice for two \
parameter sets and names a state psi_14 that does not exist; the datasets are emitted as eight \
panels named by family and (m, n), covering psi1..psi4 x {(1,3),(2,6)}";
const ORDER_NOTE: &str = "squeezing is requested at l in {2,3,4}; odd l has no defined threshold, \
so l=3 rows carry the OddOrder marker and no value";
const SIGN_NOTE: &str = "the text attributes psi3 nonclassicality to l=4 while the squeezing \
caption sweeps l in {2,3}; fig4_squeezing/sign_table.csv records the sign of S(l) for every \
family, pair and l instead of asserting either statement";

/// One plotted panel.
#[derive(Debug, Clone, Serialize)]
pub struct Panel {
    pub figure: u8,
    pub dir: &'static str,
    pub name: String,
    pub witness: WitnessKind,
    pub family: Family,
    pub m: u32,
    pub n: u32,
    pub orders: Vec<u32>,
}

impl Panel {
    pub fn csv_path(&self, outdir: &Path) -> PathBuf {
        outdir.join(self.dir).join(format!("{}.csv", self.name))
    }

    pub fn svg_path(&self, outdir: &Path) -> PathBuf {
        outdir.join(self.dir).join(format!("{}.svg", self.name))
    }

    fn title(&self) -> String {
        let what = match self.witness {
            WitnessKind::MandelQ => "Mandel Q",
            WitnessKind::Antibunching => "antibunching d(l-1)",
            WitnessKind::SubPoissonian => "sub-Poissonian D(l-1)",
            WitnessKind::Squeezing => "squeezing S(l)",
        };
        format!("Fig. {}: {what}, {} m={} n={}", self.figure, self.family, self.m, self.n)
    }

    fn matches(&self, r: &Row) -> bool {
        r.witness == self.witness && r.family == self.family && r.m == self.m && r.n == self.n
    }
}

fn figure_dir(kind: WitnessKind) -> (u8, &'static str) {
    match kind {
        WitnessKind::MandelQ => (1, "fig1_mandel_q"),
        WitnessKind::Antibunching => (2, "fig2_antibunching"),
        WitnessKind::SubPoissonian => (3, "fig3_subpoissonian"),
        WitnessKind::Squeezing => (4, "fig4_squeezing"),
    }
}

/// All panels in output order.
pub fn panels() -> Vec<Panel> {
    let mut out = Vec::new();
    for kind in WitnessKind::ALL {
        let (figure, dir) = figure_dir(kind);
        let (families, orders): (&[Family], Vec<u32>) = if kind == WitnessKind::Squeezing {
            (&Family::ALL, vec![2, 3, 4])
        } else {
            (&[Family::Psi1, Family::Psi2], vec![2, 3])
        };
        for &family in families {
            for (m, n) in PAIRS {
                out.push(Panel {
                    figure,
                    dir,
                    name: format!("{family}_m{m}_n{n}"),
                    witness: kind,
                    family,
                    m,
                    n,
                    orders: orders.clone(),
                });
            }
        }
    }
    out
}

/// The sweep behind every panel: γ ∈ linear(0.05, 2.0, 40), both engines.
pub fn figure_config() -> SweepConfig {
    let mut cfg = SweepConfig::default();
    cfg.gamma = GammaGrid::linear(0.05, 2.0, 40);
    cfg.families = Family::ALL.to_vec();
    cfg.pairs = PAIRS.to_vec();
    cfg.witnesses = WitnessKind::ALL.to_vec();
    for kind in WitnessKind::ALL {
        let ls = if kind == WitnessKind::Squeezing { vec![2, 3, 4] } else { vec![2, 3] };
        cfg.orders.insert(kind, ls);
    }
    cfg
}

/// Sign summary of S(l) over the γ grid.
#[derive(Debug, Clone, Serialize)]
pub struct SignRow {
    pub family: Family,
    pub m: u32,
    pub n: u32,
    pub l: u32,
    pub negative: usize,
    pub total: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub marker: Option<&'static str>,
}

impl SignRow {
    /// `all`, `none`, `some`, or `undefined` (odd l).
    pub fn pattern(&self) -> &'static str {
        match (self.marker, self.negative) {
            (Some(_), _) => "undefined",
            (None, 0) => "none",
            (None, k) if k == self.total => "all",
            _ => "some",
        }
    }
}

pub fn sign_table(rows: &[Row]) -> Vec<SignRow> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for (m, n) in PAIRS {
            for l in [2, 3, 4] {
                let sel: Vec<&Row> = rows
                    .iter()
                    .filter(|r| r.witness == WitnessKind::Squeezing && r.family == family)
                    .filter(|r| r.m == m && r.n == n && r.l == l)
                    .collect();
                let vals: Vec<f64> = sel.iter().filter_map(|r| r.value).collect();
                let marker = sel.iter().find_map(|r| r.error.filter(|e| *e == "OddOrder"));
                out.push(SignRow {
                    family,
                    m,
                    n,
                    l,
                    negative: vals.iter().filter(|v| **v < 0.0).count(),
                    total: vals.len(),
                    min: vals.iter().copied().reduce(f64::min),
                    max: vals.iter().copied().reduce(f64::max),
                    marker,
                });
            }
        }
    }
    out
}

fn sign_table_csv(table: &[SignRow]) -> String {
    let mut s = String::from("family,m,n,l,pattern,negative,total,min,max,error\n");
    let f = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
    for r in table {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.family,
            r.m,
            r.n,
            r.l,
            r.pattern(),
            r.negative,
            r.total,
            f(r.min),
            f(r.max),
            r.marker.unwrap_or("")
        );
    }
    s
}

fn panel_svg(panel: &Panel, rows: &[&Row]) -> String {
    let curves: Vec<Curve> = panel
        .orders
        .iter()
        .map(|&l| {
            let pts: Vec<(f64, Option<f64>)> = rows.iter().filter(|r| r.l == l).map(|r| (r.gamma, r.value)).collect();
            let undefined = pts.iter().all(|p| p.1.is_none());
            let label = if undefined { format!("l={l} (undefined)") } else { format!("l={l}") };
            Curve { label, points: pts }
        })
        .collect();
    line_plot(&panel.title(), "gamma", panel.witness.name(), &curves)
}

#[derive(Debug, Clone, Serialize)]
struct FigureMetadata<'a> {
    #[serde(flatten)]
    sweep: &'a Metadata,
    panels: &'a [Panel],
}

/// What `repro_figures` wrote.
#[derive(Debug, Clone)]
pub struct FiguresOutput {
    pub files: Vec<PathBuf>,
    pub rows: Vec<Row>,
    pub signs: Vec<SignRow>,
}

impl FiguresOutput {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.failed()).count()
    }
}

/// Write every panel dataset, plot, the squeezing sign table and metadata.
pub fn repro_figures(outdir: &Path) -> Result<FiguresOutput> {
    repro_figures_with(outdir, &figure_config(), &Analytic::default())
}

/// As [`repro_figures`], taking the γ grid, engine, tolerances and thread
/// count from `config`. Families, pairs, witnesses and orders are fixed by
/// the panel list.
pub fn repro_figures_with(outdir: &Path, config: &SweepConfig, analytic: &Analytic) -> Result<FiguresOutput> {
    let base = figure_config();
    let cfg = SweepConfig {
        families: base.families,
        pairs: base.pairs,
        witnesses: base.witnesses,
        orders: base.orders,
        out: Some(outdir.to_path_buf()),
        ..config.clone()
    };
    let result = run_sweep_with(&cfg, analytic)?;
    let panels = panels();
    let mut files = Vec::new();
    for p in &panels {
        std::fs::create_dir_all(outdir.join(p.dir))?;
        let rows: Vec<Row> = result.rows.iter().filter(|r| p.matches(r)).cloned().collect();
        let csv = p.csv_path(outdir);
        std::fs::write(&csv, to_csv(&rows))?;
        files.push(csv);
        let svg = p.svg_path(outdir);
        std::fs::write(&svg, panel_svg(p, &rows.iter().collect::<Vec<_>>()))?;
        files.push(svg);
    }
    let signs = sign_table(&result.rows);
    let sign_path = outdir.join("fig4_squeezing").join("sign_table.csv");
    std::fs::write(&sign_path, sign_table_csv(&signs))?;
    files.push(sign_path);

    let meta = metadata(&cfg, vec![CAPTION_NOTE.into(), ORDER_NOTE.into(), SIGN_NOTE.into()]);
    let doc = FigureMetadata { sweep: &meta, panels: &panels };
    let meta_path = outdir.join("metadata.json");
    std::fs::write(&meta_path, serde_json::to_string_pretty(&doc).expect("metadata serializes") + "\n")?;
    files.push(meta_path);
    Ok(FiguresOutput { files, rows: result.rows, signs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_inventory() {
        let ps = panels();
        assert_eq!(ps.len(), 20);
        assert_eq!(ps.iter().filter(|p| p.figure == 4).count(), 8);
        let mut names: Vec<String> = ps.iter().map(|p| format!("{}/{}", p.dir, p.name)).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 20);
    }

    #[test]
    fn small_grid_writes_everything() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = figure_config();
        cfg.gamma = GammaGrid::linear(0.5, 1.0, 2);
        let out = repro_figures_with(dir.path(), &cfg, &Analytic::default()).unwrap();
        assert_eq!(out.files.len(), 42);
        assert_eq!(out.failed_rows(), 0);
        let csv = std::fs::read_to_string(dir.path().join("fig4_squeezing/psi3_m1_n3.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1 + 2 * 3);
        assert!(csv.contains("OddOrder"));
        assert_eq!(out.signs.len(), 4 * 2 * 3);
    }
}
