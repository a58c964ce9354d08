//! `mismatch`: scan the protected branch class of a commuting qubit model
//! over a small mismatch between the two window durations, tabulating the
//! measured deficit `1 - |C|^2` against its quadratic prediction, with the
//! fitted log-log slope in a footer comment.

use telsim::factors::{mismatch_scan, timing_variance};
use telsim::models::{commuting_model, random_mixed_env};

use crate::config::ScenarioConfig;
use crate::csvout::{fmt_sig12, Csv};
use crate::opts::RunOptions;

pub fn run(config: &ScenarioConfig, opts: &RunOptions) -> Result<i32, String> {
    let env_dim = config.model.env_dim.unwrap_or(4);
    let tau = config.protocol.tau1.unwrap_or(0.7);
    let model = commuting_model(2, env_dim, opts.seed).map_err(|e| e.to_string())?;
    let env = random_mixed_env(env_dim, opts.seed + 1).map_err(|e| e.to_string())?;

    let grid = &config.grid;
    let deltas = delta_grid(
        grid.delta_min.unwrap_or(1e-3),
        grid.delta_max.unwrap_or(1e-2),
        grid.delta_count.unwrap_or(13),
    )?;
    let points = mismatch_scan(&model, &env, tau, &deltas).map_err(|e| e.to_string())?;

    let mut csv = Csv::new("delta_tau,one_minus_mod2,predicted");
    for p in &points {
        csv.row(&[
            fmt_sig12(p.delta),
            fmt_sig12(p.infidelity),
            fmt_sig12(p.quadratic_prediction),
        ]);
    }
    let slope = fitted_slope(&points);
    csv.comment(&format!("slope = {}", fmt_sig12(slope)));
    let variance = timing_variance(&model, &env).map_err(|e| e.to_string())?;
    csv.comment(&format!("variance = {}", fmt_sig12(variance)));
    if let Some(name) = &config.scenario.name {
        csv.comment(&format!("scenario = {name}"));
    }

    let rows = csv.rows();
    let path = opts.resolve_out("mismatch.csv");
    opts.write_file(&path, &csv.finish(), rows)?;
    Ok(0)
}

/// A zero-mismatch anchor row followed by `count` log-spaced mismatches from
/// `lo` to `hi` inclusive.
fn delta_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, String> {
    if !(lo > 0.0 && hi >= lo) {
        return Err(format!("mismatch range [{lo}, {hi}] must be positive and ordered"));
    }
    if count == 0 {
        return Err("delta_count must be at least 1".into());
    }
    let mut deltas = vec![0.0];
    if count == 1 {
        deltas.push(lo);
        return Ok(deltas);
    }
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    deltas.extend(
        (0..count).map(|i| (ln_lo + (ln_hi - ln_lo) * (i as f64) / ((count - 1) as f64)).exp()),
    );
    Ok(deltas)
}

/// Least-squares slope of `ln(deficit)` against `ln(delta)` over the
/// positive-mismatch points.
fn fitted_slope(points: &[telsim::factors::MismatchPoint]) -> f64 {
    let samples: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.delta > 0.0 && p.infidelity > 0.0)
        .map(|p| (p.delta.ln(), p.infidelity.ln()))
        .collect();
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = samples.iter().map(|(_, y)| y).sum::<f64>() / n;
    let cov: f64 = samples.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let var: f64 = samples.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    cov / var
}
