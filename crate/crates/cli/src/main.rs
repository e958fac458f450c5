use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bsys_cli::commands::{self, ReduceTarget};
use bsys_cli::report::OutputFormat;

/// Feasibility analysis and parametrization for discrete-time systems built
/// from equalities and inequalities over shift operators.
#[derive(Parser)]
#[command(name = "bsys", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide feasibility of a model: exit 0 feasible, 1 infeasible,
    /// 3 unknown. Writes the witness or certificate next to the model.
    Check {
        model: PathBuf,
        /// Largest dual support half-window to try (schedule doubles up to
        /// it). Env fallback: BSYS_WINDOW_MAX.
        #[arg(long)]
        window_max: Option<u32>,
        /// Comma-separated witness periods, e.g. `1,2,4`.
        /// Env fallback: BSYS_PERIODS.
        #[arg(long)]
        periods: Option<String>,
        /// Worker threads for budget points; the verdict is independent of
        /// this setting.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Unimodular staircase reduction: prints rank, pivots, T, and U.
    Reduce {
        model: Option<PathBuf>,
        /// Matrix literal instead of a model, e.g. `s^-1 + 1 | 1 ; 1 | s^-1`.
        #[arg(long)]
        matrix: Option<String>,
        /// Which block of the model to reduce.
        #[arg(long, value_enum, default_value_t = ReduceTarget::Slack)]
        target: ReduceTarget,
    },
    /// Roll the slack recurrences of an inequality model forward.
    Rollout {
        model: PathBuf,
        /// CSV of `variable,time,value` initial conditions.
        #[arg(long)]
        initial: Option<PathBuf>,
        /// Trajectory CSV of slack values (componentwise nonnegative).
        #[arg(long)]
        slack: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        start: i64,
        #[arg(long)]
        horizon: u32,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-step displacement field of a two-state dynamics model as CSV.
    Quiver {
        model: PathBuf,
        /// Grid `lo:hi:steps,lo:hi:steps`; defaults to the state box.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact linear cost of one trajectory component under per-instant
    /// weights.
    Cost {
        model: PathBuf,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        cost: PathBuf,
        /// Component name or 1-based index; defaults to `u`.
        #[arg(long)]
        component: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { model, window_max, periods, jobs, format } => {
            commands::cmd_check(model, *window_max, periods.as_deref(), *jobs, *format)
        }
        Command::Reduce { model, matrix, target } => {
            commands::cmd_reduce(model.as_deref(), matrix.as_deref(), *target)
        }
        Command::Rollout { model, initial, slack, start, horizon, out } => commands::cmd_rollout(
            model,
            initial.as_deref(),
            slack.as_deref(),
            *start,
            *horizon,
            out.as_deref(),
        ),
        Command::Quiver { model, grid, out } => {
            commands::cmd_quiver(model, grid.as_deref(), out.as_deref())
        }
        Command::Cost { model, trajectory, cost, component } => {
            commands::cmd_cost(model, trajectory, cost, component.as_deref())
        }
    };
    match result {
        Ok(code) => ExitCode::from(u8::try_from(code).unwrap_or(2)),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
