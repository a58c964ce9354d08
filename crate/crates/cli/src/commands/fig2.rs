//! `fig2`: tabulate the spin-boson fidelity benchmark curves — one-step and
//! two-step average fidelities plus the three per-class component
//! fidelities — over a grid of dephasing durations.

use telsim::spinboson::SpinBosonParams;

use crate::config::ScenarioConfig;
use crate::csvout::{fmt_sig12, Csv};
use crate::opts::RunOptions;

pub fn run(config: &ScenarioConfig, opts: &RunOptions) -> Result<i32, String> {
    let sb = &config.spinboson;
    let mut params = SpinBosonParams::new(
        sb.s.unwrap_or(3.0),
        sb.lambda.unwrap_or(1.0),
        sb.temperature.unwrap_or(0.1),
        sb.t_bar.unwrap_or(3.0),
    )
    .map_err(|e| e.to_string())?;
    if sb.omega_max_factor.is_some() || sb.quad_points.is_some() {
        params = params
            .with_resolution(
                sb.omega_max_factor.unwrap_or(50.0),
                sb.quad_points.unwrap_or(8192),
            )
            .map_err(|e| e.to_string())?;
    }
    let amp_sq = sb.amp_sq.unwrap_or(0.25);

    let grid = &config.grid;
    let taus = linear_grid(
        grid.tau_min.unwrap_or(0.0),
        grid.tau_max.unwrap_or(20.0),
        grid.tau_count.unwrap_or(400),
    )?;
    let points = params
        .fidelity_curves(&taus, amp_sq)
        .map_err(|e| e.to_string())?;

    let mut csv = Csv::new("tau,F1,F2,F_cphi,F_cprime,F_const");
    for p in &points {
        csv.row(&[
            fmt_sig12(p.tau),
            fmt_sig12(p.one_step),
            fmt_sig12(p.two_step),
            fmt_sig12(p.aligned_class),
            fmt_sig12(p.crossed_class),
            fmt_sig12(p.purified_class),
        ]);
    }
    if let Some(name) = &config.scenario.name {
        csv.comment(&format!("scenario = {name}"));
    }
    let rows = csv.rows();
    let path = opts.resolve_out("fig2.csv");
    opts.write_file(&path, &csv.finish(), rows)?;
    Ok(0)
}

/// `count` evenly spaced points from `lo` to `hi` inclusive; a single-point
/// grid is just `[lo]`.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>, String> {
    if count == 0 {
        return Err("tau_count must be at least 1".into());
    }
    if hi < lo {
        return Err(format!("grid upper end {hi} is below lower end {lo}"));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * (i as f64) / ((count - 1) as f64))
        .collect())
}
