//! The four nonclassicality witnesses at one state.

use photon_ecs::witness::evaluate;
use photon_ecs::{Analytic, Family, MomentTable, StateSpec, WitnessKind};

fn show(label: &str, table: &MomentTable) {
    println!("{label}");
    for kind in WitnessKind::ALL {
        for l in [2, 3, 4] {
            match evaluate(kind, table, l) {
                Ok(r) => println!("  {:<14} l={l}: {:>14.8} nonclassical={}", kind.name(), r.value, r.nonclassical),
                Err(e) => println!("  {:<14} l={l}: {}", kind.name(), e.code()),
            }
        }
    }
}

fn main() -> photon_ecs::Result<()> {
    show("coherent state |1.2>", &MomentTable::coherent(1.2.into(), 4));
    show("number state |1>", &MomentTable::fock_number(1, 4));
    let spec = StateSpec::new(Family::Psi1, 1.0, 1, 3)?;
    show("psi1, gamma=1, m=1, n=3", &Analytic::default().moment_table(&spec, 4)?);
    Ok(())
}
