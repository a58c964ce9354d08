//! `oracle`: the self-check battery. Each check compares two independent
//! routes to the same number — closed-form factor against full simulation,
//! truncated register against the continuum formula — and reports the worst
//! deviation. Any deviation above its threshold fails the run with exit
//! code 2.

use num_complex::Complex64;
use telsim::factors::coherence_factor_table;
use telsim::linalg::PureState;
use telsim::models::{
    analytic_pair_coherence, commuting_model, random_mixed_env, random_model, register_model,
    thermal_env, BosonMode, BosonRegisterSpec, DephasingModel,
};
use telsim::protocol::{coherence_ratios, run_protocol, BellIndex};

use crate::config::ScenarioConfig;
use crate::opts::RunOptions;

/// Closed-form factors and the exact simulation must agree to round-off;
/// this leaves two orders of magnitude of slack over the observed 1e-14.
const FACTOR_TOL: f64 = 1e-9;
/// The truncated register's agreement with the continuum closed form is
/// limited by the Fock cutoff, not round-off.
const TRUNCATION_TOL: f64 = 1e-6;

struct Check {
    name: &'static str,
    deviation: f64,
    threshold: f64,
}

pub fn run(_config: &ScenarioConfig, opts: &RunOptions) -> Result<i32, String> {
    // The pinned scenario seeds keep the default battery reproducible; a
    // caller-supplied seed shifts every scenario at once.
    let base = opts.seed;
    let checks = vec![
        purified_class_identity(base)?,
        factor_vs_simulation(2, 7 + base, BellIndex::SYMMETRIC)?,
        factor_vs_simulation(3, 7 + base, BellIndex::SHIFTED)?,
        boson_closed_form()?,
    ];

    let mut lines = Vec::new();
    let mut failures = 0usize;
    for check in &checks {
        let verdict = if check.deviation <= check.threshold {
            "OK"
        } else {
            failures += 1;
            "FAIL"
        };
        lines.push(format!(
            "check {}: max deviation {:.3e} (threshold {:e}) {verdict}",
            check.name, check.deviation, check.threshold
        ));
    }
    for line in &lines {
        println!("{line}");
    }
    if !opts.quiet {
        if failures == 0 {
            println!("all {} oracle checks passed", checks.len());
        } else {
            println!("{failures} of {} oracle checks failed", checks.len());
        }
    }
    if let Some(path) = &opts.out {
        let text = lines.join("\n") + "\n";
        opts.write_file(path, &text, lines.len())?;
    }
    Ok(if failures == 0 { 0 } else { 2 })
}

/// For a commuting qubit model at equal window durations, every entry of the
/// protected branch class's factor table must be exactly 1.
fn purified_class_identity(base: u64) -> Result<Check, String> {
    let model = commuting_model(2, 4, 42 + base).map_err(|e| e.to_string())?;
    let env = random_mixed_env(4, 43 + base).map_err(|e| e.to_string())?;
    let w = model.conditional_evolutions(0.9).map_err(|e| e.to_string())?;
    let table = coherence_factor_table(&w, &w, &env, 0, 0, 1).map_err(|e| e.to_string())?;
    let mut deviation = 0.0f64;
    for row in &table {
        for entry in row {
            deviation = deviation.max((entry - Complex64::ONE).norm());
        }
    }
    Ok(Check {
        name: "purified_class_identity",
        deviation,
        threshold: FACTOR_TOL,
    })
}

/// Every branch of a full two-step run on a seeded random model must
/// reproduce the closed-form coherence-factor table.
fn factor_vs_simulation(d: usize, seed: u64, resource: BellIndex) -> Result<Check, String> {
    let model = random_model(d, 3, seed).map_err(|e| e.to_string())?;
    let env = random_mixed_env(3, seed + 1).map_err(|e| e.to_string())?;
    let psi = reference_input(d)?;
    let (tau1, tau2) = (0.45, 0.8);
    let run = run_protocol(&psi, &model, &env, tau1, tau2, resource).map_err(|e| e.to_string())?;
    let w1 = model.conditional_evolutions(tau1).map_err(|e| e.to_string())?;
    let w2 = model.conditional_evolutions(tau2).map_err(|e| e.to_string())?;
    let mut deviation = 0.0f64;
    for branch in &run.branches {
        let Some(output) = &branch.output else { continue };
        let table = coherence_factor_table(&w1, &w2, &env, resource.m, branch.first.m, branch.second.m)
            .map_err(|e| e.to_string())?;
        let ratios = coherence_ratios(output, &psi).map_err(|e| e.to_string())?;
        for (j, row) in ratios.iter().enumerate() {
            for (j_prime, ratio) in row.iter().enumerate() {
                if let Some(ratio) = ratio {
                    deviation = deviation.max((ratio - table[j][j_prime]).norm());
                }
            }
        }
    }
    Ok(Check {
        name: match d {
            2 => "factor_vs_simulation_d2",
            _ => "factor_vs_simulation_d3",
        },
        deviation,
        threshold: FACTOR_TOL,
    })
}

/// The truncated single-mode register must reach the continuum closed form
/// for the pair coherence once the cutoff is generous.
fn boson_closed_form() -> Result<Check, String> {
    let spec = BosonRegisterSpec::single_mode(BosonMode::with_delay(1.0, 0.3, 2.0), 30, 10.0);
    let model: DephasingModel = register_model(&spec).map_err(|e| e.to_string())?;
    let env = thermal_env(&spec).map_err(|e| e.to_string())?;
    let mut deviation = 0.0f64;
    for tau in [0.5, 1.0, 2.0] {
        let w = model.conditional_evolutions(tau).map_err(|e| e.to_string())?;
        let simulated =
            (&(w.evolution(0, 0) * env.matrix()) * &w.evolution(1, 1).dagger()).trace();
        let analytic = analytic_pair_coherence(&spec, tau).map_err(|e| e.to_string())?;
        deviation = deviation.max((simulated - Complex64::new(analytic, 0.0)).norm());
    }
    Ok(Check {
        name: "boson_closed_form",
        deviation,
        threshold: TRUNCATION_TOL,
    })
}

/// A fixed, fully spread input state with non-trivial phases: amplitudes
/// proportional to `(j + 1) e^{2 pi i j / d}`.
fn reference_input(d: usize) -> Result<PureState, String> {
    let amps = (0..d)
        .map(|j| {
            let phase = 2.0 * std::f64::consts::PI * j as f64 / d as f64;
            Complex64::from_polar((j + 1) as f64, phase)
        })
        .collect();
    PureState::normalized(amps).map_err(|e| e.to_string())
}
