//! Build a state in a truncated two-mode Fock basis and inspect it.

use photon_ecs::fock::{moment_numeric, quadrature_central_moment};
use photon_ecs::{CutoffPolicy, Family, StateSpec};

fn main() -> photon_ecs::Result<()> {
    let spec = StateSpec::new(Family::Psi2, 0.8, 1, 3)?;
    let policy = CutoffPolicy::default();
    let state = policy.build(&spec, 8)?;
    println!("{spec:?}");
    println!("cutoffs: a={} b={}", state.cutoff_a, state.cutoff_b);
    println!("unnormalized norm^2: {:.12}", state.norm_sq_pre);
    println!("tail mass bound: {:.3e}", state.tail_mass);

    println!("\nmode-a photon distribution");
    for (k, p) in state.photon_distribution_a().iter().enumerate().take(10) {
        println!("  P({k}) = {p:.6}");
    }

    let n = moment_numeric(&spec, 1, 1, &policy)?;
    println!("\n<a†a> = {:.12} (cutoff {}, est. error {:.1e})", n.value.re, n.cutoff, n.est_error);
    for l in [2, 4] {
        let q = quadrature_central_moment(&spec, l, &policy)?;
        println!("<(dX)^{l}> = {:.12}", q.value);
    }
    Ok(())
}
