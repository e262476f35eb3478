//! A small sweep configured in code and printed as CSV.

use photon_ecs::sweep::{output, run_sweep, ConfigOverrides, SweepConfig};

fn main() -> photon_ecs::Result<()> {
    let flags = ConfigOverrides::from_toml(
        r#"
family = "psi1"
m = 1
n = 3
witness = "mandel_q"
order = [2, 3]
gamma_start = 0.1
gamma_stop = 2.0
gamma_count = 39
engine = "both"
"#,
    )?;
    let config = SweepConfig::resolve(None, &flags)?;
    let result = run_sweep(&config)?;
    print!("{}", output::to_csv(&result.rows));
    eprintln!("{} rows, {} with errors", result.rows.len(), result.failed_rows());
    Ok(())
}
