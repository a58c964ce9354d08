use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    fidelity_pure, tensor_chain, tensor_product, ComplexMatrix, DensityMatrix, PureState,
};
use crate::models::DephasingModel;
use crate::protocol::bell::{bell_state, correction_unitary, second_correction, BellIndex};
use crate::protocol::multistate::{
    apply_local, controlled_pair_evolution, project_pair, trace_out_env,
};

/// Input coherences smaller than this cannot be divided out to a meaningful
/// ratio; [`coherence_ratios`] reports `None` for them. The floor is far
/// above round-off (1e-16-scale) yet far below any amplitude product a
/// deliberately chosen input state produces.
pub const COHERENCE_INPUT_FLOOR: f64 = 1e-8;

/// One outcome of the first measurement, carrying the conditioned joint
/// state of the carrier system and the environment.
pub struct FirstStepBranch {
    pub outcome: BellIndex,
    /// Born probability of this outcome.
    pub probability: f64,
    pub qudit_dim: usize,
    pub env_dim: usize,
    /// Normalized state on carrier (x) environment after the
    /// outcome-conditioned correction; `None` for an empty branch.
    pub state: Option<ComplexMatrix>,
}

impl FirstStepBranch {
    /// Reduced carrier state with the environment traced out.
    pub fn carrier_state(&self) -> Result<Option<DensityMatrix>> {
        match &self.state {
            None => Ok(None),
            Some(joint) => {
                let reduced = trace_out_env(joint, &[self.qudit_dim, self.env_dim])?;
                Ok(Some(DensityMatrix::new(reduced)?))
            }
        }
    }
}

/// One outcome of the second measurement within a fixed first-step branch.
pub struct SecondStepOutcome {
    pub outcome: BellIndex,
    /// Probability conditioned on the first-step branch.
    pub probability: f64,
    /// Corrected joint state of the receiver and the environment.
    pub joint: Option<ComplexMatrix>,
    /// Receiver's reduced state.
    pub output: Option<DensityMatrix>,
}

/// One complete branch of the two-step protocol.
pub struct ProtocolBranch {
    pub first: BellIndex,
    pub second: BellIndex,
    /// Joint probability of the two outcomes.
    pub probability: f64,
    /// Receiver's reduced output state.
    pub output: Option<DensityMatrix>,
}

/// All branches of a two-step run, with the input kept for bookkeeping.
pub struct ProtocolRun {
    pub qudit_dim: usize,
    pub branches: Vec<ProtocolBranch>,
}

impl ProtocolRun {
    /// Outcome-averaged output state `sum_b p_b rho_b`.
    pub fn average_state(&self) -> Result<DensityMatrix> {
        let d = self.qudit_dim;
        let mut acc = ComplexMatrix::zeros(d, d);
        for b in &self.branches {
            if let Some(rho) = &b.output {
                acc = &acc + &rho.matrix().scale(Complex64::new(b.probability, 0.0));
            }
        }
        DensityMatrix::new(acc)
    }

    /// Probability-weighted fidelity of the outputs against a pure target;
    /// equal to the fidelity of [`ProtocolRun::average_state`] because the
    /// fidelity with a pure state is linear in the state.
    pub fn average_fidelity(&self, target: &PureState) -> Result<f64> {
        fidelity_pure(&self.average_state()?, target)
    }

    /// Largest deviation of any joint branch probability from the uniform
    /// value `1/d^4`.
    pub fn max_probability_deviation(&self) -> f64 {
        let uniform = 1.0 / (self.qudit_dim as f64).powi(4);
        self.branches
            .iter()
            .map(|b| (b.probability - uniform).abs())
            .fold(0.0, f64::max)
    }
}

/// Largest deviation of first-step branch probabilities from `1/d^2`.
pub fn first_step_probability_deviation(branches: &[FirstStepBranch]) -> f64 {
    branches
        .iter()
        .map(|b| {
            let uniform = 1.0 / (b.qudit_dim * b.qudit_dim) as f64;
            (b.probability - uniform).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest deviation of second-step conditional probabilities from `1/d^2`.
pub fn second_step_probability_deviation(d: usize, outcomes: &[SecondStepOutcome]) -> f64 {
    let uniform = 1.0 / (d * d) as f64;
    outcomes
        .iter()
        .map(|o| (o.probability - uniform).abs())
        .fold(0.0, f64::max)
}

/// First teleportation step: the input rides on system A, the entangled
/// resource pair (B, C) dephases against the environment for a time `tau`,
/// then (A, B) is measured in the entangled basis and the outcome-labeled
/// correction is applied to the carrier C.
///
/// Every one of the `d^2` outcomes is returned with its exact probability
/// and the conditioned carrier-environment state; the environment is NOT
/// discarded, because the second step couples to it again.
pub fn run_first_step(
    psi: &PureState,
    model: &DephasingModel,
    env: &DensityMatrix,
    tau: f64,
    resource: BellIndex,
) -> Result<Vec<FirstStepBranch>> {
    let d = model.qudit_dim();
    let e = model.env_dim();
    if psi.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: psi.dim(),
        });
    }
    if env.dim() != e {
        return Err(Error::DimensionMismatch {
            expected: e,
            actual: env.dim(),
        });
    }
    resource.validate(d)?;

    let w = model.conditional_evolutions(tau)?;
    let input = psi.density();
    let pair = bell_state(d, resource)?.density();
    let rho0 = tensor_chain(&[input.matrix(), pair.matrix(), env.matrix()])?;
    let dims = [d, d, d, e];

    // Resource dephasing: (B, C) are subsystems 1 and 2, environment last.
    let rho1 = controlled_pair_evolution(&rho0, &dims, 1, 2, &w)?;

    let mut branches = Vec::with_capacity(d * d);
    for outcome in BellIndex::all(d) {
        let chi = bell_state(d, outcome)?;
        let (p, remainder, rem_dims) = project_pair(&rho1, &dims, 0, 1, &chi)?;
        let state = match remainder {
            None => None,
            Some(rem) => {
                // Outcome (n, m) against a resource (n0, m0) is undone by
                // U_{n - n0, m + m0} on the carrier.
                let corr = BellIndex {
                    n: (outcome.n + d - resource.n) % d,
                    m: (outcome.m + resource.m) % d,
                };
                let u = correction_unitary(d, corr)?;
                Some(apply_local(&rem, &rem_dims, 0, &u)?)
            }
        };
        branches.push(FirstStepBranch {
            outcome,
            probability: p,
            qudit_dim: d,
            env_dim: e,
            state,
        });
    }
    Ok(branches)
}

/// Second teleportation step: a fresh pair (A', B') is prepared in the very
/// entangled state found by the first measurement, dephases for `tau`
/// against the SAME environment the first resource talked to, then (B', C)
/// is measured and the combined correction is applied to the receiver A'.
pub fn run_second_step(
    branch: &FirstStepBranch,
    model: &DephasingModel,
    tau: f64,
) -> Result<Vec<SecondStepOutcome>> {
    let d = model.qudit_dim();
    let e = model.env_dim();
    if branch.qudit_dim != d || branch.env_dim != e {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: branch.qudit_dim,
        });
    }
    let carrier_env = branch.state.as_ref().ok_or(Error::InvalidParameter {
        name: "branch",
        reason: "cannot continue from an empty branch".into(),
    })?;

    let w = model.conditional_evolutions(tau)?;
    let pair = bell_state(d, branch.outcome)?.density();
    let rho0 = tensor_product(pair.matrix(), carrier_env)?;
    let dims = [d, d, d, e];

    // Resource dephasing now acts on (A', B') = subsystems 0 and 1.
    let rho1 = controlled_pair_evolution(&rho0, &dims, 0, 1, &w)?;

    let mut outcomes = Vec::with_capacity(d * d);
    for outcome in BellIndex::all(d) {
        let chi = bell_state(d, outcome)?;
        let (p, remainder, rem_dims) = project_pair(&rho1, &dims, 1, 2, &chi)?;
        let (joint, output) = match remainder {
            None => (None, None),
            Some(rem) => {
                let corr = second_correction(d, branch.outcome, outcome);
                let u = correction_unitary(d, corr)?;
                let corrected = apply_local(&rem, &rem_dims, 0, &u)?;
                let reduced = trace_out_env(&corrected, &rem_dims)?;
                (Some(corrected), Some(DensityMatrix::new(reduced)?))
            }
        };
        outcomes.push(SecondStepOutcome {
            outcome,
            probability: p,
            joint,
            output,
        });
    }
    Ok(outcomes)
}

/// Run both steps for every outcome combination.
pub fn run_protocol(
    psi: &PureState,
    model: &DephasingModel,
    env: &DensityMatrix,
    tau1: f64,
    tau2: f64,
    resource: BellIndex,
) -> Result<ProtocolRun> {
    let first = run_first_step(psi, model, env, tau1, resource)?;
    let mut branches = Vec::with_capacity(first.len() * first.len());
    for fb in &first {
        if fb.state.is_none() {
            for outcome in BellIndex::all(model.qudit_dim()) {
                branches.push(ProtocolBranch {
                    first: fb.outcome,
                    second: outcome,
                    probability: 0.0,
                    output: None,
                });
            }
            continue;
        }
        for so in run_second_step(fb, model, tau2)? {
            branches.push(ProtocolBranch {
                first: fb.outcome,
                second: so.outcome,
                probability: fb.probability * so.probability,
                output: so.output,
            });
        }
    }
    Ok(ProtocolRun {
        qudit_dim: model.qudit_dim(),
        branches,
    })
}

/// Ratio of each output coherence to the corresponding input coherence:
/// `ratio[j][j'] = rho_{j j'} / (psi_j conj(psi_j'))`, or `None` where the
/// input coherence is below [`COHERENCE_INPUT_FLOOR`].
///
/// Pure dephasing multiplies each input coherence by an input-independent
/// factor, so these ratios are exactly the environment-trace factors the
/// closed-form machinery predicts.
pub fn coherence_ratios(
    rho: &DensityMatrix,
    psi: &PureState,
) -> Result<Vec<Vec<Option<Complex64>>>> {
    let d = psi.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: rho.dim(),
        });
    }
    let amps = psi.amplitudes();
    let mut out = vec![vec![None; d]; d];
    for j in 0..d {
        for jp in 0..d {
            let denom = amps[j] * amps[jp].conj();
            if denom.norm() < COHERENCE_INPUT_FLOOR {
                continue;
            }
            out[j][jp] = Some(rho.matrix()[(j, jp)] / denom);
        }
    }
    Ok(out)
}
