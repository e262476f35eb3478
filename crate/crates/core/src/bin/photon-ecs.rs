use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use photon_ecs::sweep::{self, figures, output, verify, ConfigOverrides, SweepConfig};
use photon_ecs::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_PARTIAL: u8 = 4;

#[derive(Parser)]
#[command(name = "photon-ecs", version, about = "Nonclassicality witnesses of photon-added entangled coherent states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate witnesses over a γ grid and write CSV or JSON rows.
    Sweep(Flags),
    /// Compare closed forms against the Fock-space oracle and print a report.
    Verify(Flags),
    /// Write the figure datasets and plots into a directory (--out).
    ReproFigures(Flags),
    /// Evaluate witnesses at a single γ.
    Witness(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Flat TOML file; flags override its keys.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,
    #[arg(long, alias = "gamma", allow_negative_numbers = true)]
    gamma_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_stop: Option<f64>,
    #[arg(long)]
    gamma_count: Option<usize>,
    /// linear or log
    #[arg(long)]
    spacing: Option<String>,
    #[arg(long, value_delimiter = ',')]
    m: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    /// Witness orders l, applied to every selected witness.
    #[arg(long, value_delimiter = ',')]
    order: Vec<u32>,
    /// mandel_q, antibunching, subpoissonian, squeezing
    #[arg(long, value_delimiter = ',')]
    witness: Vec<String>,
    /// analytic, oracle or both
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    tol_convergence: Option<f64>,
    #[arg(long)]
    tol_agreement: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
}

fn list<T: Clone>(v: &[T]) -> Option<sweep::config::OneOrMany<T>> {
    (!v.is_empty()).then(|| v.to_vec().into())
}

impl Flags {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            family: list(&self.family),
            gamma_start: self.gamma_start,
            gamma_stop: self.gamma_stop,
            gamma_count: self.gamma_count,
            spacing: self.spacing.clone(),
            m: list(&self.m),
            n: list(&self.n),
            order: list(&self.order),
            witness: list(&self.witness),
            engine: self.engine.clone(),
            tol_convergence: self.tol_convergence,
            tol_agreement: self.tol_agreement,
            out: self.out.clone(),
            format: self.format.clone(),
            threads: self.threads,
            ..Default::default()
        }
    }

    fn resolve(&self) -> photon_ecs::Result<SweepConfig> {
        SweepConfig::resolve(self.config.as_deref(), &self.overrides())
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) | Error::InvalidArgument(_) => ExitCode::from(EXIT_CONFIG),
        _ => ExitCode::FAILURE,
    }
}

fn emit_rows(config: &SweepConfig, result: &sweep::SweepResult) -> photon_ecs::Result<()> {
    match &config.out {
        Some(path) => output::write(path, &result.rows, &result.metadata, config.format),
        None => {
            print!("{}", output::render(&result.rows, config.format));
            Ok(())
        }
    }
}

fn run_sweep(config: SweepConfig) -> photon_ecs::Result<ExitCode> {
    let result = sweep::run_sweep(&config)?;
    emit_rows(&config, &result)?;
    let failed = result.failed_rows();
    if failed > 0 {
        eprintln!("{failed} of {} rows carry an error marker", result.rows.len());
        return Ok(ExitCode::from(EXIT_PARTIAL));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> photon_ecs::Result<ExitCode> {
    match cli.command {
        Command::Sweep(flags) => run_sweep(flags.resolve()?),
        Command::Witness(flags) => {
            let mut config = flags.resolve()?;
            config.gamma.stop = config.gamma.start;
            config.gamma.count = 1;
            run_sweep(config)
        }
        Command::Verify(flags) => {
            let config = flags.resolve()?;
            let report = verify::verify(&config)?;
            let json = flags.format.as_deref().is_some_and(|f| f.eq_ignore_ascii_case("json"));
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if let Some(path) = &config.out {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(path, report.to_json())?;
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY) })
        }
        Command::ReproFigures(flags) => {
            let mut layered = figures::figure_config();
            if let Some(path) = &flags.config {
                layered.apply(&ConfigOverrides::from_file(path)?)?;
            }
            layered.apply(&flags.overrides())?;
            layered.validate()?;
            let outdir = layered.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
            let out = figures::repro_figures_with(&outdir, &layered, &Default::default())?;
            eprintln!("wrote {} files to {}", out.files.len(), outdir.display());
            let failed = out.failed_rows();
            if failed > 0 {
                eprintln!("{failed} of {} rows carry an error marker", out.rows.len());
                return Ok(ExitCode::from(EXIT_PARTIAL));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}
