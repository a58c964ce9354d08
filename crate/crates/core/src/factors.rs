//! Closed-form coherence factors for every measurement branch of the
//! two-step protocol, derived by tracing the conditional environment
//! evolutions against the initial environment state. These are the exact
//! values the full density-matrix simulation must reproduce, so they double
//! as its oracle and as the cheap path for parameter scans.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, PureState};
use crate::models::{ConditionalEvolutions, DephasingModel};
use crate::protocol::second_correction_shift;

/// Largest generator commutator defect below which a model is treated as
/// mutually commuting, enabling the closed-form reductions that assume a
/// shared eigenbasis. Models built with a common eigenbasis land at
/// round-off scale (~1e-13); anything larger is genuinely non-commuting.
pub const COMMUTING_MODEL_TOL: f64 = 1e-10;

fn check_pair(d: usize, j: usize, j_prime: usize) -> Result<()> {
    if j >= d {
        return Err(Error::IndexOutOfRange { index: j, bound: d });
    }
    if j_prime >= d {
        return Err(Error::IndexOutOfRange {
            index: j_prime,
            bound: d,
        });
    }
    Ok(())
}

fn check_shift(d: usize, name: &'static str, value: usize) -> Result<()> {
    if value >= d {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("outcome shift {value} out of range for dimension {d}"),
        });
    }
    Ok(())
}

fn check_env(w: &ConditionalEvolutions, env: &DensityMatrix) -> Result<()> {
    if w.env_dim() != env.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.env_dim(),
            actual: env.dim(),
        });
    }
    Ok(())
}

/// Coherence factor of the carrier pair `(j, j')` after the FIRST step only,
/// for a resource with index shift `resource_shift` and a first outcome with
/// shift `m`:
///
/// `Tr[ w_{j+m, j+m+m0} R w_{j'+m, j'+m+m0}^dagger ]` (indices mod d).
pub fn first_step_factor(
    w: &ConditionalEvolutions,
    env: &DensityMatrix,
    resource_shift: usize,
    m: usize,
    j: usize,
    j_prime: usize,
) -> Result<Complex64> {
    let d = w.qudit_dim();
    check_pair(d, j, j_prime)?;
    check_shift(d, "resource_shift", resource_shift)?;
    check_shift(d, "m", m)?;
    check_env(w, env)?;
    let ket = w.evolution((j + m) % d, (j + m + resource_shift) % d);
    let bra = w.evolution((j_prime + m) % d, (j_prime + m + resource_shift) % d);
    Ok((&(ket * env.matrix()) * &bra.dagger()).trace())
}

/// Coherence factor of the receiver pair `(j, j')` after BOTH steps, for a
/// branch with first outcome shift `m` and second outcome shift `m'`:
///
/// `Tr[ w2_{j+M, j+M+m} w1_{j+m, j+m+m0} R w1_{j'+m, j'+m+m0}^dagger w2_{j'+M, j'+M+m}^dagger ]`
///
/// with `M = -(m + m') mod d` the correction shift. `w1` and `w2` are the
/// conditional evolutions of the two dephasing windows (they may differ in
/// duration or even come from different frames).
#[allow(clippy::too_many_arguments)] // one argument per index of the trace formula above
pub fn second_step_factor(
    w1: &ConditionalEvolutions,
    w2: &ConditionalEvolutions,
    env: &DensityMatrix,
    resource_shift: usize,
    m: usize,
    m_prime: usize,
    j: usize,
    j_prime: usize,
) -> Result<Complex64> {
    let d = w1.qudit_dim();
    if w2.qudit_dim() != d || w2.env_dim() != w1.env_dim() {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: w2.qudit_dim(),
        });
    }
    check_pair(d, j, j_prime)?;
    check_shift(d, "resource_shift", resource_shift)?;
    check_shift(d, "m", m)?;
    check_shift(d, "m_prime", m_prime)?;
    check_env(w1, env)?;
    let mm = second_correction_shift(d, m, m_prime);

    let ket2 = w2.evolution((j + mm) % d, (j + mm + m) % d);
    let ket1 = w1.evolution((j + m) % d, (j + m + resource_shift) % d);
    let bra1 = w1.evolution((j_prime + m) % d, (j_prime + m + resource_shift) % d);
    let bra2 = w2.evolution((j_prime + mm) % d, (j_prime + mm + m) % d);

    let mut acc = ket2 * ket1;
    acc = &acc * env.matrix();
    acc = &acc * &bra1.dagger();
    acc = &acc * &bra2.dagger();
    Ok(acc.trace())
}

/// Full `d x d` table of two-step coherence factors for one `(m, m')`
/// branch class; entry `[j][j']` multiplies the input coherence
/// `psi_j conj(psi_j')`. Diagonal entries are 1 by trace preservation.
pub fn coherence_factor_table(
    w1: &ConditionalEvolutions,
    w2: &ConditionalEvolutions,
    env: &DensityMatrix,
    resource_shift: usize,
    m: usize,
    m_prime: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let d = w1.qudit_dim();
    let mut table = vec![vec![Complex64::ZERO; d]; d];
    for (j, row) in table.iter_mut().enumerate() {
        for (j_prime, entry) in row.iter_mut().enumerate() {
            *entry = second_step_factor(w1, w2, env, resource_shift, m, m_prime, j, j_prime)?;
        }
    }
    Ok(table)
}

/// Same as [`coherence_factor_table`] but for the first step only.
pub fn first_step_factor_table(
    w: &ConditionalEvolutions,
    env: &DensityMatrix,
    resource_shift: usize,
    m: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let d = w.qudit_dim();
    let mut table = vec![vec![Complex64::ZERO; d]; d];
    for (j, row) in table.iter_mut().enumerate() {
        for (j_prime, entry) in row.iter_mut().enumerate() {
            *entry = first_step_factor(w, env, resource_shift, m, j, j_prime)?;
        }
    }
    Ok(table)
}

/// Output fidelity predicted from a coherence-factor table:
/// `F = sum_{j j'} |psi_j|^2 |psi_j'|^2 C_{j j'}`.
pub fn predicted_fidelity(table: &[Vec<Complex64>], psi: &PureState) -> Result<f64> {
    let d = psi.dim();
    if table.len() != d || table.iter().any(|row| row.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: table.len(),
        });
    }
    let probs: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let mut acc = Complex64::ZERO;
    for j in 0..d {
        for jp in 0..d {
            acc += table[j][jp] * (probs[j] * probs[jp]);
        }
    }
    if acc.im.abs() > 1e-9 {
        return Err(Error::NonRealResult {
            imag: acc.im,
            context: "predicted fidelity",
        });
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

/// Qubit fidelity from a single off-diagonal coherence factor:
/// `F = 1 - 2 |psi_0 psi_1|^2 (1 - Re C)`.
pub fn qubit_fidelity(coherence: Complex64, psi: &PureState) -> Result<f64> {
    if psi.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            actual: psi.dim(),
        });
    }
    let amp2 = (psi.amplitudes()[0] * psi.amplitudes()[1]).norm_sqr();
    Ok((1.0 - 2.0 * amp2 * (1.0 - coherence.re)).clamp(0.0, 1.0))
}

/// The five coherence factors that determine every qubit branch: the single
/// one-step factor plus the four `(m, m')` branch classes. Outcome phase
/// labels (`n`, `n'`) never enter the factors, so this is the complete set.
pub struct QubitFactorSet {
    /// One-step factor for the aligned first outcome (m = 0); the shifted
    /// outcome's factor is its complex conjugate.
    pub one_step: Complex64,
    /// `two_step[m][m_prime]`: factor of the (0,1) output coherence for the
    /// branch class with outcome shifts `(m, m')`.
    pub two_step: [[Complex64; 2]; 2],
    /// Resource index shift the set was computed for (0 = symmetric pair,
    /// 1 = shifted pair).
    pub resource_shift: usize,
}

impl QubitFactorSet {
    /// Branch class `(m, m')` whose second step exactly echoes the first
    /// step's environment operators: with mutually commuting generators its
    /// factor is identically 1.
    pub fn purifying_class(&self) -> (usize, usize) {
        // The echo requires the second window to replay the first window's
        // operator pair against the opposite branch: the first shift must
        // equal the resource shift and the second must displace the pair,
        // which for qubits pins m' = 1.
        (self.resource_shift, 1)
    }

    /// Average factor over the four equally likely branch classes; the
    /// outcome-averaged output state carries exactly this coherence factor.
    pub fn two_step_average(&self) -> Complex64 {
        (self.two_step[0][0] + self.two_step[0][1] + self.two_step[1][0] + self.two_step[1][1])
            * 0.25
    }

    /// Fidelity after the first step only.
    pub fn one_step_fidelity(&self, psi: &PureState) -> Result<f64> {
        qubit_fidelity(self.one_step, psi)
    }

    /// Fidelity of the outcome-averaged two-step output.
    pub fn two_step_fidelity(&self, psi: &PureState) -> Result<f64> {
        qubit_fidelity(self.two_step_average(), psi)
    }
}

/// Compute the qubit factor set for a model, environment state and the two
/// dephasing durations, under a resource with the given index shift.
pub fn qubit_factor_set(
    model: &DephasingModel,
    env: &DensityMatrix,
    tau1: f64,
    tau2: f64,
    resource_shift: usize,
) -> Result<QubitFactorSet> {
    if model.qudit_dim() != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            actual: model.qudit_dim(),
        });
    }
    check_shift(2, "resource_shift", resource_shift)?;
    let w1 = model.conditional_evolutions(tau1)?;
    let w2 = model.conditional_evolutions(tau2)?;
    let one_step = first_step_factor(&w1, env, resource_shift, 0, 0, 1)?;
    let mut two_step = [[Complex64::ZERO; 2]; 2];
    for (m, row) in two_step.iter_mut().enumerate() {
        for (m_prime, entry) in row.iter_mut().enumerate() {
            *entry = second_step_factor(&w1, &w2, env, resource_shift, m, m_prime, 0, 1)?;
        }
    }
    Ok(QubitFactorSet {
        one_step,
        two_step,
        resource_shift,
    })
}

/// How a coherence pair fares after the two-step protocol with a mutually
/// commuting model, relative to a single dephasing step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PurificationKind {
    /// The two-step factor collapses to a one-step factor of a partner
    /// pair: the second step has effectively erased one dephasing window.
    OneStep,
    /// The factor collapses all the way to 1: the pair is restored exactly.
    FullRestore,
    /// No closed-form protection for this pair in this branch class.
    Unprotected,
}

/// One row of the purification pattern: in branch class `(m, m')`, the
/// output coherence `(j, j')` enjoys the stated protection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternEntry {
    pub d: usize,
    pub m: usize,
    pub m_prime: usize,
    pub j: usize,
    pub j_prime: usize,
    pub kind: PurificationKind,
}

/// Classify one coherence pair within one branch class (symmetric resource,
/// mutually commuting model assumed). Protection exists only in the aligned
/// first-outcome class (m = 0), for the pairs `(j, j + M)` singled out by
/// the correction shift `M = -m' mod d`; among those, the pairs with
/// `2M = 0 (mod d)` and `M != 0` are restored exactly.
pub fn classify_pair(
    d: usize,
    m: usize,
    m_prime: usize,
    j: usize,
    j_prime: usize,
) -> PurificationKind {
    if d < 2 || m >= d || m_prime >= d || j >= d || j_prime >= d {
        return PurificationKind::Unprotected;
    }
    if m != 0 {
        return PurificationKind::Unprotected;
    }
    let mm = second_correction_shift(d, m, m_prime);
    if j_prime != (j + mm) % d {
        return PurificationKind::Unprotected;
    }
    if mm != 0 && (2 * mm).is_multiple_of(d) {
        PurificationKind::FullRestore
    } else {
        PurificationKind::OneStep
    }
}

/// Enumerate every protected pair for each second outcome `m'` (first
/// outcome aligned, `m = 0`). Fully restored pairs are listed once
/// (`j < d/2`); one-step pairs are listed for every `j`, including the
/// trivial diagonal entries of the `m' = 0` class.
pub fn purification_pattern(d: usize) -> Result<Vec<PatternEntry>> {
    if d < 2 {
        return Err(Error::InvalidDimension { dim: d });
    }
    let mut entries = Vec::new();
    for m_prime in 0..d {
        let mm = second_correction_shift(d, 0, m_prime);
        let full_restore = mm != 0 && (2 * mm).is_multiple_of(d);
        let span = if full_restore { d / 2 } else { d };
        for j in 0..span {
            entries.push(PatternEntry {
                d,
                m: 0,
                m_prime,
                j,
                j_prime: (j + mm) % d,
                kind: if full_restore {
                    PurificationKind::FullRestore
                } else {
                    PurificationKind::OneStep
                },
            });
        }
    }
    Ok(entries)
}

/// Predicted value of a protected pair's two-step factor under a commuting
/// model at equal window durations: the one-step factor of the partner pair
/// `(j, j + 2M)`.
pub fn one_step_equivalent_factor(
    w: &ConditionalEvolutions,
    env: &DensityMatrix,
    m_prime: usize,
    j: usize,
) -> Result<Complex64> {
    let d = w.qudit_dim();
    let mm = second_correction_shift(d, 0, m_prime);
    first_step_factor(w, env, 0, 0, j, (j + 2 * mm) % d)
}

/// One sampled point of the timing-mismatch scan.
#[derive(Clone, Copy, Debug)]
pub struct MismatchPoint {
    /// Duration mismatch between the two dephasing windows.
    pub delta: f64,
    /// `1 - |C|^2` of the purifying-class factor at windows
    /// `(tau, tau + delta)`.
    pub infidelity: f64,
    /// Small-mismatch prediction `delta^2 * Var(V_11 - V_00)`.
    pub quadratic_prediction: f64,
}

/// Variance of the generator difference `D = V_11 - V_00` in the
/// environment state: `Tr[R D^2] - Tr[R D]^2`. This coefficient governs the
/// quadratic growth of the purifying factor's deficit under a timing
/// mismatch.
pub fn timing_variance(model: &DephasingModel, env: &DensityMatrix) -> Result<f64> {
    if model.qudit_dim() != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            actual: model.qudit_dim(),
        });
    }
    if model.env_dim() != env.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.env_dim(),
            actual: env.dim(),
        });
    }
    let d_op = model.coupling(1, 1) - model.coupling(0, 0);
    let mean = (&d_op * env.matrix()).trace().re;
    let second = (&(&d_op * &d_op) * env.matrix()).trace().re;
    Ok(second - mean * mean)
}

/// Evaluate the purifying-class factor for a commuting qubit model at
/// mismatched window durations `(tau, tau + delta)` and compare its deficit
/// `1 - |C|^2` against the quadratic prediction.
///
/// The closed-form reduction behind the prediction needs the same-index
/// generators to commute; a model whose defect exceeds
/// [`COMMUTING_MODEL_TOL`] is rejected.
pub fn mismatch_scan(
    model: &DephasingModel,
    env: &DensityMatrix,
    tau: f64,
    deltas: &[f64],
) -> Result<Vec<MismatchPoint>> {
    if model.qudit_dim() != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            actual: model.qudit_dim(),
        });
    }
    let defect = model.diagonal_commutation_defect();
    if defect > COMMUTING_MODEL_TOL {
        return Err(Error::NonCommuting {
            defect,
            tolerance: COMMUTING_MODEL_TOL,
        });
    }
    let variance = timing_variance(model, env)?;
    let w1 = model.conditional_evolutions(tau)?;
    let mut points = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let w2 = model.conditional_evolutions(tau + delta)?;
        let c = second_step_factor(&w1, &w2, env, 0, 0, 1, 0, 1)?;
        points.push(MismatchPoint {
            delta,
            infidelity: 1.0 - c.norm_sqr(),
            quadratic_prediction: delta * delta * variance,
        });
    }
    Ok(points)
}
