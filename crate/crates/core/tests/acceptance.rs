//! Acceptance gate: nine end-to-end claims about this workspace, one test
//! and one printed verdict line each. Every tolerance is pinned here, next
//! to the claim it guards; runtime caps are asserted where the claim
//! includes one. Run with `--nocapture` to see the PASS lines.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use telsim::factors::{
    coherence_factor_table, mismatch_scan, one_step_equivalent_factor, predicted_fidelity,
    second_step_factor, timing_variance,
};
use telsim::linalg::{fidelity_pure, hermitian_eigen, ComplexMatrix, DensityMatrix, PureState};
use telsim::models::{
    analytic_pair_coherence, commuting_model, random_mixed_env, random_model, random_pure_env,
    register_model, thermal_env, BosonMode, BosonRegisterSpec, DephasingModel,
};
use telsim::protocol::{
    coherence_ratios, run_first_step, run_protocol, run_second_step, BellIndex,
};
use telsim::spinboson::{CouplingWeight, SpinBosonParams};

fn random_input(d: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..d)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    PureState::normalized(amps).unwrap()
}

/// Claim 1: for compatible (mutually commuting) couplings and a symmetric
/// resource, every branch whose outcomes shift by (0, 1) returns the input
/// exactly, regardless of the environment state, and those branches carry
/// exactly a quarter of the probability. 20 seeded models with qubit
/// carriers and environment dimensions {2, 4, 8}, three environment-state
/// families, five durations, under a 5 s cap.
#[test]
fn criterion_1_protected_class_purifies_exactly() {
    let start = Instant::now();
    let env_dims = [2usize, 4, 8];
    let taus = [0.3, 0.8, 1.7, 2.6, 4.0];
    let mut worst_fidelity_gap = 0.0f64;
    let mut worst_mass_gap = 0.0f64;
    for seed in 0..20u64 {
        let e = env_dims[(seed % 3) as usize];
        let model = commuting_model(2, e, seed).unwrap();
        let envs = [
            random_pure_env(e, seed + 100).unwrap(),
            random_mixed_env(e, seed + 200).unwrap(),
            DensityMatrix::maximally_mixed(e).unwrap(),
        ];
        let psi = random_input(2, seed + 300);
        for env in &envs {
            for &tau in &taus {
                let run =
                    run_protocol(&psi, &model, env, tau, tau, BellIndex::SYMMETRIC).unwrap();
                let mut mass = 0.0;
                for b in run
                    .branches
                    .iter()
                    .filter(|b| b.first.m == 0 && b.second.m == 1)
                {
                    mass += b.probability;
                    let f = fidelity_pure(b.output.as_ref().unwrap(), &psi).unwrap();
                    worst_fidelity_gap = worst_fidelity_gap.max((f - 1.0).abs());
                }
                worst_mass_gap = worst_mass_gap.max((mass - 0.25).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        worst_fidelity_gap < 1e-10,
        "acceptance 1: FAIL — protected-class fidelity off by {worst_fidelity_gap:.3e}"
    );
    assert!(
        worst_mass_gap < 1e-10,
        "acceptance 1: FAIL — protected-class mass off by {worst_mass_gap:.3e}"
    );
    assert!(
        elapsed < Duration::from_secs(5),
        "acceptance 1: FAIL — took {elapsed:?}, cap 5 s"
    );
    println!(
        "acceptance 1: PASS — fidelity gap {worst_fidelity_gap:.2e}, \
         mass gap {worst_mass_gap:.2e}, {elapsed:?}"
    );
}

/// Claim 2: on unstructured random models the closed-form factor tables
/// reproduce every simulated branch coherence, and the predicted fidelities
/// reproduce the simulated ones, to 1e-10; 50 seeded models per carrier
/// dimension in {2, 3, 4}, under a 60 s cap.
#[test]
fn criterion_2_factor_formulas_match_the_exact_simulation() {
    let start = Instant::now();
    let mut worst_factor_gap = 0.0f64;
    let mut worst_fidelity_gap = 0.0f64;
    for &d in &[2usize, 3, 4] {
        for seed in 0..50u64 {
            let model = random_model(d, 3, 1000 + seed).unwrap();
            let env = if seed % 2 == 0 {
                random_mixed_env(3, 2000 + seed).unwrap()
            } else {
                random_pure_env(3, 2000 + seed).unwrap()
            };
            let psi = random_input(d, 3000 + seed);
            let resource = if seed % 2 == 0 {
                BellIndex::SYMMETRIC
            } else {
                BellIndex::SHIFTED
            };
            let (tau1, tau2) = (0.45, 0.8);
            let w1 = model.conditional_evolutions(tau1).unwrap();
            let w2 = model.conditional_evolutions(tau2).unwrap();
            let first = run_first_step(&psi, &model, &env, tau1, resource).unwrap();
            for branch in &first {
                let outcomes = run_second_step(branch, &model, tau2).unwrap();
                for out in &outcomes {
                    let table = coherence_factor_table(
                        &w1,
                        &w2,
                        &env,
                        resource.m,
                        branch.outcome.m,
                        out.outcome.m,
                    )
                    .unwrap();
                    let rho = out.output.as_ref().unwrap();
                    let ratios = coherence_ratios(rho, &psi).unwrap();
                    for q in 0..d {
                        for qp in 0..d {
                            let gap = (ratios[q][qp].unwrap() - table[q][qp]).norm();
                            worst_factor_gap = worst_factor_gap.max(gap);
                        }
                    }
                    let f_sim = fidelity_pure(rho, &psi).unwrap();
                    let f_pred = predicted_fidelity(&table, &psi).unwrap();
                    worst_fidelity_gap = worst_fidelity_gap.max((f_sim - f_pred).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        worst_factor_gap < 1e-10,
        "acceptance 2: FAIL — factor deviation {worst_factor_gap:.3e}"
    );
    assert!(
        worst_fidelity_gap < 1e-10,
        "acceptance 2: FAIL — fidelity deviation {worst_fidelity_gap:.3e}"
    );
    assert!(
        elapsed < Duration::from_secs(60),
        "acceptance 2: FAIL — took {elapsed:?}, cap 60 s"
    );
    println!(
        "acceptance 2: PASS — factor gap {worst_factor_gap:.2e}, \
         fidelity gap {worst_fidelity_gap:.2e}, {elapsed:?}"
    );
}

/// A model whose exchanged off-diagonal couplings share an eigenbasis while
/// the diagonal ones stay generic.
fn exchanged_pair_compatible_model(e: usize, seed: u64) -> DephasingModel {
    let base = random_model(2, e, seed).unwrap();
    let eig = hermitian_eigen(base.coupling(0, 1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed + 7777);
    let spectrum: Vec<Complex64> = (0..e)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    let diag = ComplexMatrix::from_diagonal(&spectrum);
    let rebuilt = &(&eig.vectors * &diag) * &eig.vectors.dagger();
    let v10 = (&rebuilt + &rebuilt.dagger()).scale(Complex64::new(0.5, 0.0));
    DephasingModel::new(
        2,
        e,
        vec![
            base.coupling(0, 0).clone(),
            base.coupling(0, 1).clone(),
            v10,
            base.coupling(1, 1).clone(),
        ],
    )
    .unwrap()
}

/// Claim 3: with a shift resource (either sign) and a model whose two
/// exchanged off-diagonal couplings commute — diagonals left generic — the
/// branches whose outcomes shift by (1, 1) return the input exactly and
/// carry a quarter of the probability; generic models get no such class.
#[test]
fn criterion_3_shift_resource_variant_purifies() {
    let mut worst_fidelity_gap = 0.0f64;
    let mut worst_mass_gap = 0.0f64;
    for seed in 0..3u64 {
        let model = exchanged_pair_compatible_model(4, 400 + seed);
        assert!(model.exchanged_pair_commutation_defect() < 1e-10);
        assert!(model.diagonal_commutation_defect() > 1e-2);
        let env = random_mixed_env(4, 500 + seed).unwrap();
        let psi = random_input(2, 600 + seed);
        for resource in [BellIndex::SHIFTED, BellIndex::SHIFTED_ANTISYMMETRIC] {
            let run = run_protocol(&psi, &model, &env, 0.9, 0.9, resource).unwrap();
            let mut mass = 0.0;
            for b in run
                .branches
                .iter()
                .filter(|b| b.first.m == 1 && b.second.m == 1)
            {
                mass += b.probability;
                let f = fidelity_pure(b.output.as_ref().unwrap(), &psi).unwrap();
                worst_fidelity_gap = worst_fidelity_gap.max((f - 1.0).abs());
            }
            worst_mass_gap = worst_mass_gap.max((mass - 0.25).abs());
        }
    }

    // Contrast: with fully generic couplings the same class is unprotected.
    let generic = random_model(2, 4, 9).unwrap();
    let env = random_mixed_env(4, 10).unwrap();
    let psi = random_input(2, 11);
    let run = run_protocol(&psi, &generic, &env, 0.9, 0.9, BellIndex::SHIFTED).unwrap();
    let generic_worst = run
        .branches
        .iter()
        .filter(|b| b.first.m == 1 && b.second.m == 1)
        .map(|b| fidelity_pure(b.output.as_ref().unwrap(), &psi).unwrap())
        .fold(1.0f64, f64::min);

    assert!(
        worst_fidelity_gap < 1e-10,
        "acceptance 3: FAIL — protected-class fidelity off by {worst_fidelity_gap:.3e}"
    );
    assert!(
        worst_mass_gap < 1e-10,
        "acceptance 3: FAIL — protected-class mass off by {worst_mass_gap:.3e}"
    );
    assert!(
        generic_worst < 1.0 - 1e-3,
        "acceptance 3: FAIL — generic model unexpectedly protected ({generic_worst})"
    );
    println!(
        "acceptance 3: PASS — fidelity gap {worst_fidelity_gap:.2e}, \
         mass gap {worst_mass_gap:.2e}, generic contrast {generic_worst:.3}"
    );
}

/// Claim 4: for compatible couplings at equal durations, every protected
/// qudit pair's two-step factor collapses to a one-step factor (d = 3), the
/// half-shift classes of d = 4 restore coherence exactly, and unprotected
/// classes stay visibly decohered; under a 30 s cap.
#[test]
fn criterion_4_qudit_pattern_matches_the_exact_factors() {
    let start = Instant::now();
    let tau = 0.9;

    // d = 3: all three protected pairs per second shift reduce to one step.
    let model3 = commuting_model(3, 4, 21).unwrap();
    let env3 = random_mixed_env(4, 22).unwrap();
    let w3 = model3.conditional_evolutions(tau).unwrap();
    let mut worst_reduction_gap = 0.0f64;
    for m_prime in 0..3 {
        let shift = (3 - m_prime) % 3;
        for j in 0..3 {
            let j_prime = (j + shift) % 3;
            let two = second_step_factor(&w3, &w3, &env3, 0, 0, m_prime, j, j_prime).unwrap();
            let one = one_step_equivalent_factor(&w3, &env3, m_prime, j).unwrap();
            worst_reduction_gap = worst_reduction_gap.max((two - one).norm());
        }
    }

    // d = 4: the half-shift second outcome restores both protected pairs.
    let model4 = commuting_model(4, 3, 23).unwrap();
    let env4 = random_mixed_env(3, 24).unwrap();
    let w4 = model4.conditional_evolutions(tau).unwrap();
    let mut worst_restore_gap = 0.0f64;
    for j in 0..2 {
        let c = second_step_factor(&w4, &w4, &env4, 0, 0, 2, j, j + 2).unwrap();
        worst_restore_gap = worst_restore_gap.max((c - Complex64::ONE).norm());
    }

    // Unprotected classes keep a visible deficit on the same models; the
    // probed pair must be off-diagonal, since diagonal entries are 1 by
    // probability conservation no matter the class.
    let mut smallest_deficit = f64::INFINITY;
    for m in 1..3 {
        for m_prime in 0..3 {
            let shift = (3 - m_prime) % 3;
            let j_prime = if shift == 0 { 1 } else { shift };
            let c = second_step_factor(&w3, &w3, &env3, 0, m, m_prime, 0, j_prime).unwrap();
            smallest_deficit = smallest_deficit.min((c - Complex64::ONE).norm());
        }
    }

    let elapsed = start.elapsed();
    assert!(
        worst_reduction_gap < 1e-10,
        "acceptance 4: FAIL — one-step reduction off by {worst_reduction_gap:.3e}"
    );
    assert!(
        worst_restore_gap < 1e-10,
        "acceptance 4: FAIL — half-shift restoration off by {worst_restore_gap:.3e}"
    );
    assert!(
        smallest_deficit > 1e-3,
        "acceptance 4: FAIL — an unprotected class looks protected ({smallest_deficit:.3e})"
    );
    assert!(
        elapsed < Duration::from_secs(30),
        "acceptance 4: FAIL — took {elapsed:?}, cap 30 s"
    );
    println!(
        "acceptance 4: PASS — reduction gap {worst_reduction_gap:.2e}, restoration gap \
         {worst_restore_gap:.2e}, unprotected deficit {smallest_deficit:.2e}, {elapsed:?}"
    );
}

/// Claim 5: along a 200-point duration grid the assembled four-operator
/// traces satisfy the closed-form identities: the aligned class is the
/// fourth power of the one-window factor (1e-10 on logs), the two crossed
/// classes coincide (1e-12), every class factor is real (1e-10), and the
/// assembler reproduces the dedicated closed forms (1e-10).
#[test]
fn criterion_5_branch_class_identities_hold_along_the_grid() {
    let params = SpinBosonParams::new(3.0, 1.0, 0.1, 3.0).unwrap();
    let w00 = CouplingWeight::for_basis_pair(0, 0).unwrap();
    let w01 = CouplingWeight::for_basis_pair(0, 1).unwrap();
    let w10 = CouplingWeight::for_basis_pair(1, 0).unwrap();
    let w11 = CouplingWeight::for_basis_pair(1, 1).unwrap();

    let mut worst_log_gap = 0.0f64;
    let mut worst_cross_gap = 0.0f64;
    let mut worst_imag = 0.0f64;
    let mut worst_closed_gap = 0.0f64;
    for i in 1..=200 {
        let tau = 0.1 * i as f64;
        let ln_single = params.ln_single_factor(tau).unwrap();
        let ln_aligned = params
            .ln_four_operator_trace(tau, [w00, w00], [w11, w11])
            .unwrap();
        worst_log_gap = worst_log_gap.max((ln_aligned.re - 4.0 * ln_single).abs());

        let crossed_a = params.four_operator_trace(tau, [w11, w10], [w00, w01]).unwrap();
        let crossed_b = params.four_operator_trace(tau, [w11, w01], [w00, w10]).unwrap();
        worst_cross_gap = worst_cross_gap.max((crossed_a - crossed_b).norm());

        let purified = params.four_operator_trace(tau, [w00, w11], [w11, w00]).unwrap();
        let aligned = ln_aligned.exp();
        for z in [aligned, purified, crossed_a, crossed_b] {
            worst_imag = worst_imag.max(z.im.abs());
        }

        let closed_aligned = (4.0 * ln_single).exp();
        let closed_crossed = params.crossed_factor(tau).unwrap();
        worst_closed_gap = worst_closed_gap
            .max((aligned - Complex64::new(closed_aligned, 0.0)).norm())
            .max((crossed_a - Complex64::new(closed_crossed, 0.0)).norm())
            .max((purified - Complex64::ONE).norm());
    }

    assert!(
        worst_log_gap < 1e-10,
        "acceptance 5: FAIL — aligned class deviates from the fourth power by {worst_log_gap:.3e}"
    );
    assert!(
        worst_cross_gap < 1e-12,
        "acceptance 5: FAIL — crossed classes differ by {worst_cross_gap:.3e}"
    );
    assert!(
        worst_imag < 1e-10,
        "acceptance 5: FAIL — a class factor has imaginary part {worst_imag:.3e}"
    );
    assert!(
        worst_closed_gap < 1e-10,
        "acceptance 5: FAIL — assembler deviates from closed forms by {worst_closed_gap:.3e}"
    );
    println!(
        "acceptance 5: PASS — log gap {worst_log_gap:.2e}, crossed gap {worst_cross_gap:.2e}, \
         imag {worst_imag:.2e}, closed-form gap {worst_closed_gap:.2e}"
    );
}

/// Claim 6: the benchmark fidelity curves (s = 3, T = 0.1, delay 3) show a
/// one-step recoherence peak at the delay, the stated late-time plateaus
/// (one-step 0.500 +- 0.01, two-step 0.625 +- 0.01 at duration 20), the
/// short-time ordering two-step < one-step up to 0.2, and the late-time
/// reversal from 15 on; under a 10 s cap.
///
/// KNOWN RED: the one-step plateau claim is not attainable. At these bath
/// parameters the one-window factor tends to a finite limit (about 1/7, set
/// by the convergent integral of J(w)(1+cos(w*delay))coth(w/2T)/w^2), so the
/// one-step fidelity plateaus near 0.571, outside the demanded 0.500 band.
/// Every other subcheck passes; the plateau value itself is cross-checked
/// against an independent integrator in the reference tests.
#[test]
fn criterion_6_benchmark_curves_show_the_stated_shape() {
    let start = Instant::now();
    let params = SpinBosonParams::new(3.0, 1.0, 0.1, 3.0).unwrap();
    let taus: Vec<f64> = (0..=200).map(|i| 0.1 * i as f64).collect();
    let curve = params.fidelity_curves(&taus, 0.25).unwrap();
    let elapsed = start.elapsed();

    let mut failures: Vec<String> = Vec::new();

    // Recoherence peak within one grid step of the delay.
    let window: Vec<&_> = curve
        .iter()
        .filter(|p| (2.0..=4.0).contains(&p.tau))
        .collect();
    let peak = window
        .iter()
        .max_by(|a, b| a.one_step.total_cmp(&b.one_step))
        .unwrap();
    if (peak.tau - 3.0).abs() > 0.1 + 1e-12 {
        failures.push(format!("one-step peak at {:.2}, expected 3.0 +- 0.1", peak.tau));
    }

    let last = curve.last().unwrap();
    if (last.one_step - 0.500).abs() > 0.01 {
        failures.push(format!(
            "one-step plateau {:.4} outside 0.500 +- 0.01",
            last.one_step
        ));
    }
    if (last.two_step - 0.625).abs() > 0.01 {
        failures.push(format!(
            "two-step plateau {:.4} outside 0.625 +- 0.01",
            last.two_step
        ));
    }

    for p in curve.iter().filter(|p| p.tau > 0.0 && p.tau <= 0.2) {
        if p.two_step >= p.one_step {
            failures.push(format!("ordering broken at tau {:.2}", p.tau));
        }
    }
    for p in curve.iter().filter(|p| p.tau >= 15.0) {
        if p.two_step <= p.one_step {
            failures.push(format!("reversal broken at tau {:.2}", p.tau));
        }
    }
    if elapsed >= Duration::from_secs(10) {
        failures.push(format!("took {elapsed:?}, cap 10 s"));
    }

    assert!(
        failures.is_empty(),
        "acceptance 6: FAIL — {} (the one-step plateau band presumes full late-time \
         dephasing, which this bath does not reach; see the test doc comment)",
        failures.join("; ")
    );
    println!("acceptance 6: PASS — all curve-shape subchecks hold, {elapsed:?}");
}

/// Claim 7: the truncated single-mode register reproduces the closed-form
/// one-window factor to 1e-6 at cutoff 30, and doubling the cutoff at least
/// halves the deviation (unless both sit at round-off).
#[test]
fn criterion_7_truncated_register_converges_to_the_closed_form() {
    // The coupling and duration put the displacement high enough that the
    // cutoff-30 truncation error sits well above round-off (~5e-11), so the
    // halving claim is exercised for real rather than floor-to-floor.
    let mode = BosonMode::with_delay(1.0, 1.40, 0.0);
    let tau = std::f64::consts::PI;
    let deviation_at = |n_max: usize| -> f64 {
        let spec = BosonRegisterSpec::single_mode(mode.clone(), n_max, 10.0);
        let model = register_model(&spec).unwrap();
        let env = thermal_env(&spec).unwrap();
        let w = model.conditional_evolutions(tau).unwrap();
        let trace = (&(w.evolution(0, 0) * env.matrix()) * &w.evolution(1, 1).dagger()).trace();
        let analytic = analytic_pair_coherence(&spec, tau).unwrap();
        (trace - Complex64::new(analytic, 0.0)).norm()
    };
    let coarse = deviation_at(30);
    let fine = deviation_at(60);
    assert!(
        coarse < 1e-6,
        "acceptance 7: FAIL — cutoff-30 deviation {coarse:.3e} exceeds 1e-6"
    );
    assert!(
        fine <= 0.5 * coarse || (coarse < 1e-12 && fine < 1e-12),
        "acceptance 7: FAIL — doubling the cutoff did not halve the deviation \
         ({coarse:.3e} -> {fine:.3e})"
    );
    println!("acceptance 7: PASS — deviation {coarse:.2e} at cutoff 30, {fine:.2e} at 60");
}

/// Claim 8: for compatible couplings, the infidelity of the timing-echo
/// class grows quadratically in the duration mismatch: log-log slope
/// 2.00 +- 0.05 over offsets in [1e-3, 1e-2], with the coefficient within
/// 5% of the environment variance of the coupling difference.
#[test]
fn criterion_8_mismatch_infidelity_is_quadratic() {
    let model = commuting_model(2, 6, 3).unwrap();
    let env = random_mixed_env(6, 5).unwrap();
    let deltas: Vec<f64> = (0..10)
        .map(|k| 1e-3 * 10f64.powf(k as f64 / 9.0))
        .collect();
    let points = mismatch_scan(&model, &env, 0.7, &deltas).unwrap();

    // Least-squares line through (ln delta, ln infidelity).
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.delta.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.infidelity.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let coefficient = intercept.exp();
    let variance = timing_variance(&model, &env).unwrap();

    assert!(
        (slope - 2.0).abs() < 0.05,
        "acceptance 8: FAIL — log-log slope {slope:.4}"
    );
    assert!(
        (coefficient / variance - 1.0).abs() < 0.05,
        "acceptance 8: FAIL — coefficient {coefficient:.6e} vs variance {variance:.6e}"
    );
    println!(
        "acceptance 8: PASS — slope {slope:.3}, coefficient/variance {:.4}",
        coefficient / variance
    );
}

/// Claim 9: every measurement in the protocol is uniform — all first-step
/// probabilities and all second-step conditional probabilities equal 1/d^2
/// within 1e-8 — for every carrier dimension in {2, 3, 4} and every tested
/// model family.
#[test]
fn criterion_9_branch_statistics_are_uniform() {
    let mut worst = 0.0f64;
    for &d in &[2usize, 3, 4] {
        let models = [
            random_model(d, 3, 81).unwrap(),
            commuting_model(d, 2, 82).unwrap(),
        ];
        for model in &models {
            let e = model.env_dim();
            let envs = [
                random_mixed_env(e, 83).unwrap(),
                random_pure_env(e, 84).unwrap(),
            ];
            let psi = random_input(d, 85);
            let uniform = 1.0 / (d * d) as f64;
            for env in &envs {
                for resource in [BellIndex::SYMMETRIC, BellIndex::SHIFTED] {
                    let first = run_first_step(&psi, model, env, 0.6, resource).unwrap();
                    for branch in &first {
                        worst = worst.max((branch.probability - uniform).abs());
                        let outcomes = run_second_step(branch, model, 0.8).unwrap();
                        for out in &outcomes {
                            worst = worst.max((out.probability - uniform).abs());
                        }
                    }
                }
            }
        }
    }
    assert!(
        worst < 1e-8,
        "acceptance 9: FAIL — probability deviates from uniform by {worst:.3e}"
    );
    println!("acceptance 9: PASS — worst probability deviation {worst:.2e}");
}
