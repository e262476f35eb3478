//! Sweep configuration: built-in defaults, overridden by a flat TOML file,
//! overridden by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::Family;
use crate::witness::WitnessKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Analytic,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

macro_rules! parse_lower {
    ($ty:ty, $($name:literal => $val:expr),+) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok($val),)+
                    other => Err(Error::Config(format!(
                        concat!("unknown ", stringify!($ty), " {:?}"), other
                    ))),
                }
            }
        }
    };
}

parse_lower!(Spacing, "linear" => Spacing::Linear, "log" => Spacing::Log);
parse_lower!(Engine, "analytic" => Engine::Analytic, "oracle" => Engine::Oracle, "both" => Engine::Both);
parse_lower!(Format, "csv" => Format::Csv, "json" => Format::Json);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GammaGrid {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        GammaGrid { start, stop, count, spacing: Spacing::Linear }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

/// Fully resolved sweep description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub gamma: GammaGrid,
    pub families: Vec<Family>,
    pub pairs: Vec<(u32, u32)>,
    pub witnesses: Vec<WitnessKind>,
    pub orders: BTreeMap<WitnessKind, Vec<u32>>,
    pub engine: Engine,
    pub tol_convergence: f64,
    pub tol_agreement: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let mut orders = BTreeMap::new();
        for kind in WitnessKind::ALL {
            let ls = if kind == WitnessKind::Squeezing { vec![2, 4] } else { vec![2, 3] };
            orders.insert(kind, ls);
        }
        SweepConfig {
            gamma: GammaGrid::linear(0.1, 2.0, 39),
            families: Family::ALL.to_vec(),
            pairs: vec![(1, 3), (2, 6)],
            witnesses: WitnessKind::ALL.to_vec(),
            orders,
            engine: Engine::Both,
            tol_convergence: 1e-10,
            tol_agreement: 1e-8,
            out: None,
            format: Format::Csv,
            threads: None,
        }
    }
}

impl SweepConfig {
    pub fn orders_for(&self, kind: WitnessKind) -> &[u32] {
        self.orders.get(&kind).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of rows a sweep over this config produces.
    pub fn row_count(&self) -> usize {
        let per_point: usize = self.witnesses.iter().map(|k| self.orders_for(*k).len()).sum();
        self.gamma.count * self.families.len() * self.pairs.len() * per_point
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.gamma;
        if !(g.start.is_finite() && g.stop.is_finite()) {
            return Err(Error::Config("gamma bounds must be finite".into()));
        }
        if g.count == 0 {
            return Err(Error::Config("gamma_count must be at least 1".into()));
        }
        if g.start < 0.0 || g.stop < g.start {
            return Err(Error::Config(format!(
                "gamma grid needs 0 <= start <= stop, got {}..{}",
                g.start, g.stop
            )));
        }
        if g.spacing == Spacing::Log && g.start <= 0.0 {
            return Err(Error::Config("log spacing needs gamma_start > 0".into()));
        }
        if g.start <= 0.0 && self.families.iter().any(|f| f.is_odd()) {
            return Err(Error::Config(
                "gamma_start must be > 0 when psi2 or psi4 is selected (the state vanishes at gamma = 0)".into(),
            ));
        }
        if self.families.is_empty() || self.pairs.is_empty() || self.witnesses.is_empty() {
            return Err(Error::Config("families, (m, n) pairs and witnesses must be non-empty".into()));
        }
        for kind in &self.witnesses {
            let ls = self.orders_for(*kind);
            if ls.is_empty() {
                return Err(Error::Config(format!("no orders given for witness {kind}")));
            }
            if let Some(l) = ls.iter().find(|&&l| !(2..=12).contains(&l)) {
                return Err(Error::Config(format!("witness order {l} outside 2..=12")));
            }
        }
        if !(self.tol_convergence > 0.0 && self.tol_agreement > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Apply one layer of overrides (config file or flags).
    pub fn apply(&mut self, o: &ConfigOverrides) -> Result<()> {
        if let Some(f) = &o.family {
            self.families = f.iter().map(|s| s.parse().map_err(config_err)).collect::<Result<_>>()?;
        }
        if let Some(v) = o.gamma_start {
            self.gamma.start = v;
        }
        if let Some(v) = o.gamma_stop {
            self.gamma.stop = v;
        }
        if let Some(v) = o.gamma_count {
            self.gamma.count = v;
        }
        if let Some(s) = &o.spacing {
            self.gamma.spacing = s.parse()?;
        }
        match (&o.m, &o.n) {
            (Some(ms), Some(ns)) => {
                let (ms, ns) = (ms.to_vec(), ns.to_vec());
                if ms.len() != ns.len() {
                    return Err(Error::Config(format!(
                        "m and n lists must have equal length ({} vs {})",
                        ms.len(),
                        ns.len()
                    )));
                }
                self.pairs = ms.into_iter().zip(ns).collect();
            }
            (None, None) => {}
            _ => return Err(Error::Config("m and n must be given together".into())),
        }
        if let Some(w) = &o.witness {
            self.witnesses = w.iter().map(|s| s.parse().map_err(config_err)).collect::<Result<_>>()?;
        }
        if let Some(ls) = &o.order {
            for kind in WitnessKind::ALL {
                self.orders.insert(kind, ls.to_vec());
            }
        }
        for (kind, ls) in [
            (WitnessKind::MandelQ, &o.order_mandel_q),
            (WitnessKind::Antibunching, &o.order_antibunching),
            (WitnessKind::SubPoissonian, &o.order_subpoissonian),
            (WitnessKind::Squeezing, &o.order_squeezing),
        ] {
            if let Some(ls) = ls {
                self.orders.insert(kind, ls.to_vec());
            }
        }
        if let Some(e) = &o.engine {
            self.engine = e.parse()?;
        }
        if let Some(v) = o.tol_convergence {
            self.tol_convergence = v;
        }
        if let Some(v) = o.tol_agreement {
            self.tol_agreement = v;
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if let Some(f) = &o.format {
            self.format = f.parse()?;
        }
        if let Some(t) = o.threads {
            self.threads = Some(t);
        }
        Ok(())
    }

    /// Defaults, then `file` (if any), then `flags`; validated.
    pub fn resolve(file: Option<&Path>, flags: &ConfigOverrides) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        if let Some(path) = file {
            cfg.apply(&ConfigOverrides::from_file(path)?)?;
        }
        cfg.apply(flags)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::InvalidArgument(msg) => Error::Config(msg),
        other => other,
    }
}

/// A scalar or a list in the config file (`m = 1` or `m = [1, 2]`).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        match self {
            OneOrMany::One(v) => std::slice::from_ref(v).iter(),
            OneOrMany::Many(v) => v.iter(),
        }
    }
}

impl<T> From<Vec<T>> for OneOrMany<T> {
    fn from(v: Vec<T>) -> Self {
        OneOrMany::Many(v)
    }
}

/// Partial configuration. Keys mirror the command-line flag names with
/// dashes replaced by underscores.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub family: Option<OneOrMany<String>>,
    pub gamma_start: Option<f64>,
    pub gamma_stop: Option<f64>,
    pub gamma_count: Option<usize>,
    pub spacing: Option<String>,
    pub m: Option<OneOrMany<u32>>,
    pub n: Option<OneOrMany<u32>>,
    pub order: Option<OneOrMany<u32>>,
    pub order_mandel_q: Option<OneOrMany<u32>>,
    pub order_antibunching: Option<OneOrMany<u32>>,
    pub order_subpoissonian: Option<OneOrMany<u32>>,
    pub order_squeezing: Option<OneOrMany<u32>>,
    pub witness: Option<OneOrMany<String>>,
    pub engine: Option<String>,
    pub tol_convergence: Option<f64>,
    pub tol_agreement: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub threads: Option<usize>,
}

impl ConfigOverrides {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = GammaGrid::linear(0.1, 2.0, 39);
        let pts = g.points();
        assert_eq!(pts.len(), 39);
        assert_eq!(pts[0], 0.1);
        assert!((pts[38] - 2.0).abs() < 1e-15);
        let g = GammaGrid { start: 0.01, stop: 1.0, count: 3, spacing: Spacing::Log };
        let pts = g.points();
        assert!((pts[1] - 0.1).abs() < 1e-15);
        assert_eq!(GammaGrid::linear(0.7, 3.0, 1).points(), vec![0.7]);
    }

    #[test]
    fn odd_family_at_zero_rejected() {
        let mut cfg = SweepConfig::default();
        cfg.families = vec![Family::Psi2];
        cfg.gamma.start = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.families = vec![Family::Psi1];
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn precedence_flags_over_file_over_defaults() {
        let file = ConfigOverrides::from_toml(
            "family = [\"psi1\", \"psi3\"]\ngamma_count = 5\nm = [1]\nn = [3]\nengine = \"oracle\"\n",
        )
        .unwrap();
        let flags = ConfigOverrides { gamma_count: Some(7), ..Default::default() };
        let mut cfg = SweepConfig::default();
        cfg.apply(&file).unwrap();
        cfg.apply(&flags).unwrap();
        assert_eq!(cfg.gamma.count, 7);
        assert_eq!(cfg.families, vec![Family::Psi1, Family::Psi3]);
        assert_eq!(cfg.pairs, vec![(1, 3)]);
        assert_eq!(cfg.engine, Engine::Oracle);
        assert_eq!(cfg.gamma.stop, 2.0);
    }

    #[test]
    fn unknown_keys_and_values_rejected() {
        assert!(ConfigOverrides::from_toml("gamma_begin = 1.0").is_err());
        let o = ConfigOverrides { engine: Some("gpu".into()), ..Default::default() };
        assert!(SweepConfig::default().apply(&o).is_err());
        let o = ConfigOverrides { m: Some(OneOrMany::One(1)), ..Default::default() };
        assert!(SweepConfig::default().apply(&o).is_err());
    }

    #[test]
    fn row_count_is_cartesian_product() {
        let cfg = SweepConfig::default();
        // 39 points x 4 families x 2 pairs x (4 kinds x 2 orders)
        assert_eq!(cfg.row_count(), 39 * 4 * 2 * 8);
    }
}
