//! `csqs-lab`: command-line front-end for the single-mode superposed-state
//! toolkit. Subcommands evaluate Wigner fields, nonclassicality measures,
//! parameter sweeps, photon-loss evolution, closed-form-vs-oracle audits, and
//! canned figure-data reproduction.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical-domain error,
//! 4 comparison failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ComplexArg;

#[derive(Parser)]
#[command(
    name = "csqs-lab",
    version,
    about = "Phase-space toolkit for coherent states superposed with their photon-added/subtracted forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Wigner function on a grid and write a field file
    Wigner(FieldCmd),
    /// Report the nonclassicality and non-Gaussianity measures of one state
    Measures(MeasuresCmd),
    /// Tabulate all measures over an (alpha, r) lattice as CSV
    Sweep(SweepCmd),
    /// Evolve the state through a photon-loss channel and write the field
    Loss(LossCmd),
    /// Audit closed forms against their independent oracles
    Compare(CompareCmd),
    /// Emit the data files behind one of the canned figures
    Reproduce(ReproduceCmd),
}

/// State-selection flags shared by every state-based subcommand.
#[derive(Args, Clone, Default)]
struct StateArgs {
    /// Coherent amplitude as `RE` or `RE,IM`
    #[arg(long, value_parser = config::parse_complex, allow_hyphen_values = true,
          conflicts_with_all = ["alpha_re", "alpha_im"])]
    alpha: Option<ComplexArg>,
    /// Real part of the coherent amplitude
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    /// Imaginary part of the coherent amplitude
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    /// Annihilation weight t (r is derived as +sqrt(1-t^2))
    #[arg(long, allow_hyphen_values = true, conflicts_with = "r")]
    t: Option<f64>,
    /// Creation weight r (t is derived as +sqrt(1-r^2); see --negative-t)
    #[arg(long)]
    r: Option<f64>,
    /// With --r, take the branch t = -sqrt(1-r^2)
    #[arg(long)]
    negative_t: bool,
    /// Fock-space cutoff override for oracle evaluations
    #[arg(long)]
    cutoff: Option<usize>,
    /// JSON config file; keys are the long flag names, flags win over file values
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Phase-space grid flags. Defaults to 401x401 on [-6,6]^2, re-centered on
/// the state when that box would clip it.
#[derive(Args, Clone, Default)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y_max: Option<f64>,
    /// Grid points along the real axis (odd, >= 3)
    #[arg(long)]
    nx: Option<usize>,
    /// Grid points along the imaginary axis (odd, >= 3)
    #[arg(long)]
    ny: Option<usize>,
}

#[derive(Args, Clone, Default)]
struct OutputArgs {
    /// Output file path (default depends on the subcommand)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct FieldCmd {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MeasuresCmd {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Also evaluate the independent oracles and report deltas
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct SweepCmd {
    /// Smallest real alpha in the sweep
    #[arg(long)]
    alpha_min: Option<f64>,
    /// Largest real alpha in the sweep
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Alpha increment (> 0)
    #[arg(long)]
    alpha_step: Option<f64>,
    /// Smallest r in the sweep
    #[arg(long)]
    r_min: Option<f64>,
    /// Largest r in the sweep
    #[arg(long)]
    r_max: Option<f64>,
    /// r increment (> 0)
    #[arg(long)]
    r_step: Option<f64>,
    /// Take the branch t = -sqrt(1-r^2)
    #[arg(long)]
    negative_t: bool,
    /// JSON config file; keys are the long flag names, flags win over file values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct LossCmd {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Rescaled interaction time of the loss channel (>= 0)
    #[arg(long)]
    kappa_t: Option<f64>,
}

#[derive(Args)]
struct CompareCmd {
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ReproduceCmd {
    /// Figure id: fig2, fig3, fig4, fig5, fig6, or fig7
    figure: String,
    /// Directory for the emitted data files
    #[arg(long, default_value = "figures")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// Caps the rayon worker count from `CSQS_LAB_THREADS` before any parallel
/// region runs. Ignored (with a warning) when unparseable.
fn init_thread_pool() {
    if let Ok(raw) = std::env::var("CSQS_LAB_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: CSQS_LAB_THREADS={raw} is not a positive integer; ignored"),
        }
    }
}

fn run(cli: Cli) -> Result<(), config::CliError> {
    match cli.command {
        Command::Wigner(cmd) => commands::cmd_wigner(&cmd),
        Command::Measures(cmd) => commands::cmd_measures(&cmd),
        Command::Sweep(cmd) => commands::cmd_sweep(&cmd),
        Command::Loss(cmd) => commands::cmd_loss(&cmd),
        Command::Compare(cmd) => commands::cmd_compare(&cmd),
        Command::Reproduce(cmd) => commands::cmd_reproduce(&cmd),
    }
}
