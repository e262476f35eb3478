//! Analytic-vs-oracle verification over a reduced grid.

use photon_ecs::sweep::{verify::verify, GammaGrid, SweepConfig};

fn main() -> photon_ecs::Result<()> {
    let mut config = SweepConfig::default();
    config.gamma = GammaGrid::linear(0.2, 2.0, 10);
    let report = verify(&config)?;
    print!("{}", report.to_text());
    Ok(())
}
