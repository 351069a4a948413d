use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use hier_jacobi_cli::{cmd_resources, cmd_solve, cmd_sweep, AppError, ExperimentSpec, Mode};

/// Convergence experiments for classic and block-synchronous Jacobi
/// iteration on 1D/2D Poisson grids.
#[derive(Parser)]
#[command(name = "hier-jacobi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and print a convergence summary.
    Solve(CommonArgs),
    /// Run every (k, overlap) combination and write one CSV row each.
    Sweep(CommonArgs),
    /// Tabulate operational blocks/threads and shared bytes, no solving.
    Resources(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Problem dimensionality (1 or 2).
    #[arg(long, default_value_t = 1)]
    dim: u8,

    /// Interior DOFs (per direction in 2D unless --ny is given).
    #[arg(long)]
    n: usize,

    /// Interior DOFs in the y direction (2D only; defaults to --n).
    #[arg(long)]
    ny: Option<usize>,

    /// Solver family (solve mode only; sweep always runs hier).
    #[arg(long, value_enum, default_value_t = Mode::Hier)]
    mode: Mode,

    /// Interior subdomain width (threads-per-block in the GPU model).
    #[arg(long)]
    tpb: Option<usize>,

    /// Subdomain width in the y direction (2D only; defaults to --tpb).
    #[arg(long)]
    tpb_y: Option<usize>,

    /// Subiterations per cycle; comma-separated list in sweep mode.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    subiterations: Vec<usize>,

    /// Interior overlap points per direction; comma-separated list in
    /// sweep mode.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    overlap: Vec<usize>,

    /// Overlap override for the y direction (solve/resources, 2D only).
    #[arg(long)]
    overlap_y: Option<usize>,

    /// Relative residual-reduction target.
    #[arg(long, default_value_t = 1e-4)]
    tol_factor: f64,

    /// Safety cap on cycles (hier) or iterations (classic).
    #[arg(long, default_value_t = 1_000_000)]
    max_cycles: usize,

    /// Output CSV path (required for sweep, optional for resources).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Reserved for future randomized right-hand sides; currently unused.
    #[arg(long)]
    seed: Option<u64>,
}

impl CommonArgs {
    fn into_spec(self, needs_tpb: bool) -> Result<ExperimentSpec, AppError> {
        if self.dim == 1 {
            for (flag, present) in [
                ("--ny", self.ny.is_some()),
                ("--tpb-y", self.tpb_y.is_some()),
                ("--overlap-y", self.overlap_y.is_some()),
            ] {
                if present {
                    return Err(AppError::Usage(format!("{flag} only applies to --dim 2")));
                }
            }
        }
        let tpb_x = match self.tpb {
            Some(t) => t,
            None if needs_tpb => {
                return Err(AppError::Usage(
                    "--tpb is required for this command".into(),
                ))
            }
            None => 0,
        };
        Ok(ExperimentSpec {
            dim: self.dim,
            nx: self.n,
            ny: self.ny.unwrap_or(self.n),
            mode: self.mode,
            tpb_x,
            tpb_y: self.tpb_y.unwrap_or(tpb_x),
            k_list: self.subiterations,
            overlap_list: self.overlap,
            overlap_y: self.overlap_y,
            tolerance_factor: self.tol_factor,
            max_cycles: self.max_cycles,
            out: self.out,
            seed: self.seed,
        })
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => args.into_spec(false).and_then(|spec| {
            let needs_tpb = spec.mode == Mode::Hier;
            if needs_tpb && spec.tpb_x == 0 {
                return Err(AppError::Usage("--tpb is required in hier mode".into()));
            }
            let report = cmd_solve(&spec)?;
            Ok(if report.converged { 0 } else { 2 })
        }),
        Command::Sweep(args) => args
            .into_spec(true)
            .and_then(|spec| cmd_sweep(&spec).map(|_| 0)),
        Command::Resources(args) => args
            .into_spec(true)
            .and_then(|spec| cmd_resources(&spec).map(|_| 0)),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
