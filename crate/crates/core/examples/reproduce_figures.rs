//! Write all figure datasets and plots. Usage: `reproduce_figures [outdir]`.

use std::path::PathBuf;

use photon_ecs::sweep::figures::repro_figures;

fn main() -> photon_ecs::Result<()> {
    let outdir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("figures"));
    let out = repro_figures(&outdir)?;
    for f in &out.files {
        println!("{}", f.display());
    }
    for s in out.signs.iter().filter(|s| s.marker.is_none()) {
        eprintln!("S({}) {} m={} n={}: {} negative of {}", s.l, s.family, s.m, s.n, s.negative, s.total);
    }
    Ok(())
}
