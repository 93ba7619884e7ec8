use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rnwarp_cli::output::{self, to_csv, to_json};
use rnwarp_cli::{cmd_curvature, cmd_fluid, cmd_horizons, cmd_transform, cmd_verify, CliError, Format, RunConfig};

/// Interior of a charged black hole as a multiply warped product.
/// Geometrized units (G = c = 1); plain decimal numbers only.
#[derive(Parser)]
#[command(name = "rnwarp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    mass: f64,
    /// Sign is ignored.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    charge: f64,
    #[arg(long, default_value_t = RunConfig::DEFAULT_GRID)]
    grid: usize,
    /// Fraction of r_plus - r_minus excluded next to each horizon.
    #[arg(long, default_value_t = RunConfig::DEFAULT_GUARD)]
    guard: f64,
    /// Absolute and relative tolerance for quadrature and root finding.
    #[arg(long)]
    tol: Option<f64>,
    /// Default: json for horizons, transform and verify; csv for the tables.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    theta: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Horizon radii.
    Horizons(Common),
    /// Convert r to mu or mu to r.
    Transform {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "mu", required_unless_present = "mu")]
        r: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Ricci components on the guarded radial grid.
    Curvature(Common),
    /// Perfect-fluid density, pressure and balance residuals on the grid.
    Fluid(Common),
    /// Run the verification suite; exit status 1 if any check fails.
    Verify(Common),
}

fn config(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(c.mass, c.charge)?
        .with_grid(c.grid)?
        .with_guard(c.guard)?
        .with_theta(c.theta)?
        .with_format(c.format);
    if let Some(tol) = c.tol {
        cfg = cfg.with_tol(tol)?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    Ok(match cli.command {
        Command::Horizons(c) => {
            let cfg = config(&c)?;
            let out = cmd_horizons(&cfg);
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => (to_json(&out), true),
                Format::Csv => (to_csv(&[out]), true),
            }
        }
        Command::Transform { common, r, mu } => {
            let cfg = config(&common)?;
            let out = cmd_transform(&cfg, r, mu)?;
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => (to_json(&out), true),
                Format::Csv => (to_csv(&[out]), true),
            }
        }
        Command::Curvature(c) => {
            let cfg = config(&c)?;
            let rows = cmd_curvature(&cfg)?;
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Json => (to_json(&rows), true),
                Format::Csv => (to_csv(&rows), true),
            }
        }
        Command::Fluid(c) => {
            let cfg = config(&c)?;
            let rows = cmd_fluid(&cfg)?;
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Json => (to_json(&rows), true),
                Format::Csv => (to_csv(&rows), true),
            }
        }
        Command::Verify(c) => {
            let cfg = config(&c)?;
            let report = cmd_verify(&cfg)?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: {:e} > {:e}", c.name, c.max_abs_residual, c.threshold);
            }
            let text = match cfg.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => {
                    for n in &report.notes {
                        eprintln!("note: {n}");
                    }
                    output::verify_csv(&report)
                }
            };
            (text, report.pass)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((text, pass)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
