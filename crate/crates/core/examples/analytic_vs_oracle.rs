//! Closed-form moments next to the Fock-space oracle.

use photon_ecs::fock::moment_table_oracle;
use photon_ecs::numeric::rel_dev;
use photon_ecs::{Analytic, CutoffPolicy, Family, StateSpec};

fn main() -> photon_ecs::Result<()> {
    let analytic = Analytic::default();
    let policy = CutoffPolicy::default();
    for family in Family::ALL {
        let spec = StateSpec::new(family, 0.7, 1, 3)?;
        println!("{family}: N^-2 = {:.12}", analytic.norm_const_sq_inv(&spec)?);
        let a = analytic.moment_table(&spec, 3)?;
        let o = moment_table_oracle(&spec, 3, &policy)?;
        let worst = a
            .iter()
            .map(|((p, q), v)| rel_dev(v, o.get(p, q).unwrap(), 1e-13))
            .fold(0.0, f64::max);
        println!("  <a†a>   analytic {:.12}  oracle {:.12}", a.mean_photon(), o.mean_photon());
        println!("  <a†²a²> analytic {:.12}  oracle {:.12}", a.get(2, 2).unwrap().re, o.get(2, 2).unwrap().re);
        println!("  largest relative gap over the table: {worst:.2e}");
    }
    Ok(())
}
