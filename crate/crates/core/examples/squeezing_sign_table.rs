//! Sign of the squeezing witness S(l) for every family across γ.

use photon_ecs::witness::squeezing_s;
use photon_ecs::{Analytic, Family, StateSpec};

fn main() -> photon_ecs::Result<()> {
    let analytic = Analytic::default();
    let gammas: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
    println!("{:<6} {:>5} {:>3} {:>12} {:>12} {:>10}", "family", "m,n", "l", "min S", "max S", "negative");
    for family in Family::ALL {
        for (m, n) in [(1, 3), (2, 6)] {
            for l in [2, 4] {
                let mut vals = Vec::new();
                for &g in &gammas {
                    let t = analytic.moment_table(&StateSpec::new(family, g, m, n)?, l)?;
                    vals.push(squeezing_s(&t, l)?.value);
                }
                let neg = vals.iter().filter(|v| **v < 0.0).count();
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                println!("{family:<6} {:>5} {l:>3} {lo:>12.5} {hi:>12.5} {:>10}", format!("{m},{n}"), format!("{neg}/{}", vals.len()));
            }
        }
    }
    Ok(())
}
