//! Implementations behind the `bsys` subcommands. Each returns the process
//! exit code: 0 feasible/success, 1 infeasible, 3 unknown; usage and parse
//! problems surface as errors and exit 2.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use bsys_core::{
    build_recursive_form, express_rows, linear_cost, parse_matrix, parse_model, reduce,
    stacked_adjoint, verify_certificate, verify_witness, Budget, PolyMatrix, RolloutError,
    Trajectory, Verdict,
};

use crate::csvio;
use crate::quiver;
use crate::report::{digest, exit_code, OutputFormat, RunReport};
use crate::runner::decide_with_jobs;

pub const WINDOW_MAX_ENV: &str = "BSYS_WINDOW_MAX";
pub const PERIODS_ENV: &str = "BSYS_PERIODS";

fn load_model(path: &Path) -> Result<(bsys_core::BehavioralSystem, String)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read model file {}", path.display()))?;
    let sys = parse_model(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((sys, text))
}

fn parse_period_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| anyhow!("invalid period `{p}`"))
                .and_then(|v| {
                    if v == 0 {
                        Err(anyhow!("periods must be positive"))
                    } else {
                        Ok(v)
                    }
                })
        })
        .collect()
}

/// Budget from flags, falling back to the environment, then the defaults.
pub fn resolve_budget(window_max: Option<u32>, periods: Option<&str>) -> Result<Budget> {
    let window_max = match window_max {
        Some(v) => Some(v),
        None => match std::env::var(WINDOW_MAX_ENV) {
            Ok(text) => Some(
                text.parse::<u32>()
                    .map_err(|_| anyhow!("invalid {WINDOW_MAX_ENV} value `{text}`"))?,
            ),
            Err(_) => None,
        },
    };
    let periods = match periods {
        Some(text) => Some(parse_period_list(text)?),
        None => match std::env::var(PERIODS_ENV) {
            Ok(text) => Some(parse_period_list(&text)?),
            Err(_) => None,
        },
    };
    let default = Budget::default();
    Ok(match (window_max, periods) {
        (None, None) => default,
        (Some(w), None) => Budget::with_window_max(w, default.periods),
        (None, Some(p)) => Budget { windows: default.windows, periods: p },
        (Some(w), Some(p)) => Budget::with_window_max(w, p),
    })
}

pub fn cmd_check(
    model_path: &Path,
    window_max: Option<u32>,
    periods: Option<&str>,
    jobs: usize,
    format: OutputFormat,
) -> Result<i32> {
    let (sys, text) = load_model(model_path)?;
    let budget = resolve_budget(window_max, periods)?;
    let started = Instant::now();
    let outcome = decide_with_jobs(&sys, &budget, jobs);
    let elapsed_ms = started.elapsed().as_millis();

    // Every artifact the command writes is read back and re-verified before
    // the verdict is reported.
    let artifact: Option<PathBuf> = match &outcome.verdict {
        Verdict::Infeasible { certificate } => {
            let path = model_path.with_extension("certificate.csv");
            fs::write(&path, csvio::write_certificate(certificate))
                .with_context(|| format!("cannot write {}", path.display()))?;
            let replayed = csvio::read_certificate(&fs::read_to_string(&path)?)?;
            if !verify_certificate(&sys, &replayed) {
                bail!("internal error: written certificate failed re-verification");
            }
            Some(path)
        }
        Verdict::Feasible { witness } => {
            let names: Option<Vec<String>> = sys.variable_names().map(<[String]>::to_vec);
            let path = model_path.with_extension("witness.csv");
            fs::write(&path, csvio::write_trajectory(witness, names.as_deref()))
                .with_context(|| format!("cannot write {}", path.display()))?;
            let replayed = csvio::read_trajectory(&fs::read_to_string(&path)?)?;
            if !verify_witness(&sys, &replayed) {
                bail!("internal error: written witness failed re-verification");
            }
            Some(path)
        }
        Verdict::Unknown { .. } => None,
    };

    let report = RunReport {
        command: "check".to_string(),
        model_path: model_path.display().to_string(),
        digest: digest(text.as_bytes()),
        verdict: outcome.verdict.kind(),
        artifact,
        windows_used: outcome.windows_tried,
        periods_used: outcome.periods_tried,
        elapsed_ms,
    };
    print!("{}", report.render(format));
    if let Verdict::Unknown { infeasibility_ruled_out: true, .. } = &outcome.verdict {
        eprintln!(
            "note: the stacked adjoint has full column rank, so no infeasibility \
             certificate exists; only the witness search remained open"
        );
    }
    Ok(exit_code(outcome.verdict.kind()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReduceTarget {
    /// The equality block `R`.
    Eq,
    /// The inequality block `H`.
    Ineq,
    /// The stacked adjoint `[adjoint(R) adjoint(H)]`.
    Adjoint,
    /// The slack-augmented inequality block `[H I]`.
    Slack,
}

pub fn cmd_reduce(
    model_path: Option<&Path>,
    matrix_literal: Option<&str>,
    target: ReduceTarget,
) -> Result<i32> {
    let matrix: PolyMatrix = match (model_path, matrix_literal) {
        (_, Some(literal)) => parse_matrix(literal).map_err(|e| anyhow!("{e}"))?,
        (Some(path), None) => {
            let (sys, _) = load_model(path)?;
            match target {
                ReduceTarget::Eq => sys
                    .equality()
                    .ok_or_else(|| anyhow!("model has no equality block"))?
                    .matrix
                    .clone(),
                ReduceTarget::Ineq => sys
                    .inequality()
                    .ok_or_else(|| anyhow!("model has no inequality block"))?
                    .matrix
                    .clone(),
                ReduceTarget::Adjoint => stacked_adjoint(&sys),
                ReduceTarget::Slack => {
                    let part = sys
                        .inequality()
                        .ok_or_else(|| anyhow!("model has no inequality block"))?;
                    bsys_core::augment_slack(&part.matrix, &part.rhs).0
                }
            }
        }
        (None, None) => bail!("pass a model file or --matrix"),
    };
    let form = reduce(&matrix);
    println!("rank: {}", form.rank);
    let pivots: Vec<String> = form.pivot_cols.iter().map(|c| (c + 1).to_string()).collect();
    println!("pivots: {{{}}}", pivots.join(","));
    println!("T:");
    print!("{}", form.t);
    println!("U:");
    print!("{}", form.u);
    // Self-check: U * M = T and the transform is reversible.
    debug_assert_eq!(form.u.mul(&matrix).unwrap(), form.t);
    debug_assert!(express_rows(&matrix, &form.t, &form.pivot_cols).is_some());
    Ok(0)
}

pub fn cmd_rollout(
    model_path: &Path,
    initial_path: Option<&Path>,
    slack_path: Option<&Path>,
    start: i64,
    horizon: u32,
    out: Option<&Path>,
) -> Result<i32> {
    let (sys, _) = load_model(model_path)?;
    if sys.equality().is_some() {
        bail!("rollout operates on inequality-only models; fold equalities first");
    }
    let part = sys
        .inequality()
        .ok_or_else(|| anyhow!("model has no inequality block"))?;
    let form = build_recursive_form(&part.matrix, &part.rhs).map_err(|e| anyhow!("{e}"))?;

    let names: Vec<String> = (0..sys.q()).map(|i| sys.var_name(i)).collect();
    let initial = match initial_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            csvio::read_initials(&text, &names)?
        }
        None => bsys_core::InitialConditions::new(),
    };
    let slack = match slack_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            csvio::read_trajectory(&text)?
        }
        None => Trajectory::constant(vec![bsys_core::rat(0); form.slack_count]),
    };

    let trajectory = match bsys_core::rollout(&form, &initial, &slack, start, horizon) {
        Ok(t) => t,
        Err(err @ (RolloutError::MissingInitial { .. } | RolloutError::UnexpectedInitial { .. })) => {
            let footprint = form.required_initials(start);
            let mut hint = String::from("required initial footprint:");
            if footprint.is_empty() {
                hint.push_str(" (empty)");
            }
            for (var, (lo, hi)) in footprint {
                hint.push_str(&format!(" {}@[{lo},{hi}]", names[var]));
            }
            bail!("{err}\n{hint}");
        }
        Err(err) => bail!("{err}"),
    };
    let rendered = csvio::write_trajectory(&trajectory, Some(&names));
    match out {
        Some(path) => fs::write(path, rendered)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(0)
}

pub fn cmd_quiver(model_path: &Path, grid: Option<&str>, out: Option<&Path>) -> Result<i32> {
    let (sys, _) = load_model(model_path)?;
    let grid = grid.map(quiver::parse_grid).transpose()?;
    let data = quiver::quiver(&sys, grid)?;
    let rendered = quiver::write_quiver(&data);
    match out {
        Some(path) => fs::write(path, rendered)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(0)
}

pub fn cmd_cost(
    model_path: &Path,
    trajectory_path: &Path,
    cost_path: &Path,
    component: Option<&str>,
) -> Result<i32> {
    let (sys, _) = load_model(model_path)?;
    let names: Vec<String> = (0..sys.q()).map(|i| sys.var_name(i)).collect();
    let trajectory = csvio::read_trajectory(
        &fs::read_to_string(trajectory_path)
            .with_context(|| format!("cannot read {}", trajectory_path.display()))?,
    )?;
    let weights = csvio::read_trajectory(
        &fs::read_to_string(cost_path)
            .with_context(|| format!("cannot read {}", cost_path.display()))?,
    )?;
    if trajectory.dim() != sys.q() {
        bail!(
            "trajectory has {} components but the model has {} variables",
            trajectory.dim(),
            sys.q()
        );
    }
    let component = match component {
        Some(name) => names
            .iter()
            .position(|n| n == name)
            .or_else(|| name.parse::<usize>().ok().and_then(|i| i.checked_sub(1)))
            .ok_or_else(|| anyhow!("unknown component `{name}`; model variables: {names:?}"))?,
        None => names
            .iter()
            .position(|n| n == "u")
            .ok_or_else(|| anyhow!("no component named `u`; pass --component"))?,
    };
    let total = linear_cost(&trajectory, &weights, component).map_err(|e| anyhow!("{e}"))?;
    println!("{total}");
    Ok(0)
}
