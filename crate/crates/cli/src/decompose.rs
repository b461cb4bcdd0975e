use derange_core::experiments::inverse_e;
use derange_core::graph::{p4_decompose_with, parse_edge_list, perfect_matching, BipartiteGraph, P4Config, Side, Walk};
use derange_core::trial::{monte_carlo, run_pipeline, Strategy, HOST_DEGREE};
use derange_core::{Exec, GraphError};
use serde_json::{json, Value};

use crate::args::{DecomposeCmd, DemoArgs, Format, MonteCarloArgs};
use crate::report::{Builder, CliError, Report, Table};

/// Reference band for the single-shot success fraction.
pub const SINGLE_BAND: (f64, f64) = (0.28, 0.46);
/// Floor for the ten-option success fraction.
pub const ALL_TEN_FLOOR: f64 = 0.90;
/// Share of trials in which the path search must finish.
pub const SOLVER_COMPLETION_FLOOR: f64 = 0.99;

pub fn run(cmd: &DecomposeCmd, seed: u64, format: Format) -> Result<Report, CliError> {
    match cmd {
        DecomposeCmd::Demo(a) => demo(a, seed, format),
        DecomposeCmd::Montecarlo(a) => montecarlo(a, seed, format),
    }
}

fn load_host(args: &DemoArgs) -> Result<(String, BipartiteGraph), CliError> {
    let (source, g) = match &args.edges {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let g = parse_edge_list(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            (path.display().to_string(), g)
        }
        None => ("K5,5".to_string(), BipartiteGraph::complete(HOST_DEGREE)),
    };
    if g.degree() != HOST_DEGREE {
        return Err(CliError::usage(format!(
            "{source}: host must be {HOST_DEGREE}-regular, got degree {}",
            g.degree()
        )));
    }
    Ok((source, g))
}

fn walk_string(w: &Walk) -> String {
    w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// `x -> y` labels; undefined items are skipped.
fn arrows(images: impl Iterator<Item = Option<usize>>) -> Vec<String> {
    images
        .enumerate()
        .filter_map(|(x, y)| y.map(|y| format!("x{x}->y{y}")))
        .collect()
}

fn demo(args: &DemoArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let (source, g) = load_host(args)?;
    let mut b = Builder::new("decompose demo", seed, args);
    let mut trace: Vec<(&str, Value)> = vec![
        ("host", json!(source)),
        ("n", json!(g.n())),
        ("edges", json!(g.edge_count())),
    ];
    let run = perfect_matching(&g).and_then(|m| {
        let g4 = g.without_matching(&m)?;
        let paths = p4_decompose_with(&g4, seed, P4Config::default())?;
        run_pipeline(&g, &m, &paths, Side::Start)
    });
    match run {
        Ok(run) => {
            b.require(run.equivalence_ok(), || {
                format!(
                    "verifier says {} but f-derangement test says {}",
                    run.success(),
                    run.is_f_derangement
                )
            });
            trace.extend([
                (
                    "paths",
                    json!(run.paths.paths().iter().map(|p| p.to_string()).collect::<Vec<_>>()),
                ),
                ("side", json!(run.side.to_string())),
                ("avoidance_f", json!(arrows(run.avoidance.images().iter().copied()))),
                (
                    "matching_g",
                    json!(arrows(run.permutation.images().iter().map(|&y| Some(y)))),
                ),
                ("walks", json!(run.walks.iter().map(walk_string).collect::<Vec<_>>())),
                ("verified", json!(run.success())),
                ("defect", json!(run.verification.defect.as_ref().map(|d| d.to_string()))),
                ("is_f_derangement", json!(run.is_f_derangement)),
                ("equivalence_ok", json!(run.equivalence_ok())),
            ]);
        }
        Err(e) => b.fail(e.to_string()),
    }
    let result: serde_json::Map<String, Value> = trace.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    Ok(b.finish(format, Value::Object(result), || {
        let mut t = Table::new(["field", "value"]);
        for (k, v) in &trace {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Array(items) => items
                    .iter()
                    .map(|i| match i {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join("; "),
                other => other.to_string(),
            };
            t.push([k.to_string(), v]);
        }
        t
    }))
}

fn montecarlo(args: &MonteCarloArgs, seed: u64, format: Format) -> Result<Report, CliError> {
    let strategy: Strategy = args.strategy.parse().map_err(CliError::Usage)?;
    let stats = match monte_carlo(args.n, args.trials, strategy, seed, Exec::default()) {
        Ok(s) => s,
        Err(e @ (GraphError::DegreeTooLarge { .. } | GraphError::InvalidArgument(_))) => {
            return Err(CliError::usage(e))
        }
        Err(e) => {
            let mut b = Builder::new("decompose montecarlo", seed, args);
            b.fail(e.to_string());
            return Ok(b.finish(format, Value::Null, Table::default));
        }
    };
    let mut b = Builder::new("decompose montecarlo", seed, args);
    b.require(stats.equivalence_violations == 0, || {
        format!(
            "{} trials where the verifier and the f-derangement test disagree",
            stats.equivalence_violations
        )
    });
    if stats.solver_completion_rate() < SOLVER_COMPLETION_FLOOR {
        b.warn(format!(
            "path search finished in {:.4} of trials, below {SOLVER_COMPLETION_FLOOR}",
            stats.solver_completion_rate()
        ));
    }
    let reference = match strategy {
        Strategy::SingleShot => inverse_e(),
        Strategy::AllTenOptions => 1.0 - (1.0 - inverse_e()).powi(10),
    };
    match strategy {
        Strategy::SingleShot if !(SINGLE_BAND.0..=SINGLE_BAND.1).contains(&stats.fraction) => b.warn(format!(
            "success fraction {:.4} outside the reference band [{}, {}] around 1/e",
            stats.fraction, SINGLE_BAND.0, SINGLE_BAND.1
        )),
        Strategy::AllTenOptions if stats.fraction < ALL_TEN_FLOOR => b.warn(format!(
            "success fraction {:.4} below {ALL_TEN_FLOOR} (independence estimate {reference:.4})",
            stats.fraction
        )),
        _ => {}
    }
    let result = json!({
        "n": stats.n,
        "trials": stats.trials,
        "strategy": stats.strategy.to_string(),
        "completed": stats.completed,
        "successes": stats.successes,
        "fraction": stats.fraction,
        "wilson_low": stats.wilson_low,
        "wilson_high": stats.wilson_high,
        "reference": reference,
        "equivalence_violations": stats.equivalence_violations,
        "solver_failures": stats.solver_failures,
        "solver_retries": stats.solver_retries,
        "solver_completion_rate": stats.solver_completion_rate(),
        "first_try_rate": stats.first_try_rate(),
        "options_tried": stats.options_tried,
    });
    Ok(b.finish(format, result, || {
        let mut t = Table::new([
            "n",
            "trials",
            "strategy",
            "completed",
            "successes",
            "fraction",
            "wilson_low",
            "wilson_high",
            "reference",
            "equivalence_violations",
            "solver_failures",
            "solver_retries",
        ]);
        t.push([
            stats.n.to_string(),
            stats.trials.to_string(),
            stats.strategy.to_string(),
            stats.completed.to_string(),
            stats.successes.to_string(),
            stats.fraction.to_string(),
            stats.wilson_low.to_string(),
            stats.wilson_high.to_string(),
            reference.to_string(),
            stats.equivalence_violations.to_string(),
            stats.solver_failures.to_string(),
            stats.solver_retries.to_string(),
        ]);
        t
    }))
}
