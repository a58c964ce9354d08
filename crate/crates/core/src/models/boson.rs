use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_exp, ComplexMatrix, DensityMatrix};
use crate::models::dephasing::{ConditionalEvolutions, DephasingModel};

/// Hard cap on the truncated environment dimension, matching the tensor-size
/// budget of the rest of the crate (a 1024 x 1024 operator is the largest
/// the dense machinery is allowed to build).
pub const MAX_BOSON_DIM: usize = 1 << 10;

/// One harmonic mode coupled twice to the register, once per entangled
/// subsystem, with independent coupling phases.
///
/// The two phases encode the delay between the interactions: a register
/// whose second subsystem couples a time `t_bar` after the first sees
/// `theta_second - theta_first = omega * t_bar`.
#[derive(Clone, Debug, PartialEq)]
pub struct BosonMode {
    /// Mode frequency (must be positive).
    pub omega: f64,
    /// Coupling magnitude shared by both interactions.
    pub coupling: f64,
    /// Phase of the first interaction's coupling.
    pub theta_first: f64,
    /// Phase of the second interaction's coupling.
    pub theta_second: f64,
}

impl BosonMode {
    /// Mode whose two interactions are separated by a delay `t_bar`.
    pub fn with_delay(omega: f64, coupling: f64, t_bar: f64) -> Self {
        BosonMode {
            omega,
            coupling,
            theta_first: 0.0,
            theta_second: omega * t_bar,
        }
    }

    /// Phase difference between the two interactions.
    pub fn phase_delay(&self) -> f64 {
        self.theta_second - self.theta_first
    }
}

/// Truncated multi-mode bosonic environment for a pair of qubits, with a
/// thermal initial state.
///
/// Each mode keeps Fock levels `0..=n_max`; the basis-pair generators are
/// `V_ij = e_i B_1 + e_j B_2 + H_free` with `e_0 = -1/2`, `e_1 = +1/2`,
/// `B_m = sum_k (g_mk a_k^dagger + conj(g_mk) a_k)` and
/// `g_mk = coupling_k exp(-i theta_mk)`.
#[derive(Clone, Debug)]
pub struct BosonRegisterSpec {
    pub modes: Vec<BosonMode>,
    /// Highest Fock level kept per mode.
    pub n_max: usize,
    /// Inverse temperature of the initial thermal state (finite, positive).
    pub beta: f64,
}

impl BosonRegisterSpec {
    pub fn single_mode(mode: BosonMode, n_max: usize, beta: f64) -> Self {
        BosonRegisterSpec {
            modes: vec![mode],
            n_max,
            beta,
        }
    }

    /// Truncated environment dimension `(n_max + 1)^modes`.
    pub fn env_dim(&self) -> usize {
        (self.n_max + 1).pow(self.modes.len() as u32)
    }

    fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidParameter {
                name: "modes",
                reason: "at least one mode is required".into(),
            });
        }
        for m in &self.modes {
            if !(m.omega > 0.0 && m.omega.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "omega",
                    reason: format!("must be positive and finite, got {}", m.omega),
                });
            }
            if !(m.coupling >= 0.0 && m.coupling.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "coupling",
                    reason: format!("must be non-negative and finite, got {}", m.coupling),
                });
            }
        }
        if self.n_max < 1 {
            return Err(Error::InvalidParameter {
                name: "n_max",
                reason: "truncation must keep at least two levels".into(),
            });
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be positive and finite, got {}", self.beta),
            });
        }
        let levels = self.n_max + 1;
        let mut dim = 1usize;
        for _ in 0..self.modes.len() {
            dim = dim.saturating_mul(levels);
            if dim > MAX_BOSON_DIM {
                return Err(Error::SizeLimit {
                    entries: dim,
                    max: MAX_BOSON_DIM,
                });
            }
        }
        Ok(())
    }
}

/// Annihilation operator truncated to `levels` Fock states.
fn annihilation(levels: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(levels, levels);
    for n in 1..levels {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Embed a single-mode operator at position `k` of the multi-mode space.
fn embed(op: &ComplexMatrix, k: usize, modes: usize, levels: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for pos in 0..modes {
        let factor = if pos == k {
            op.clone()
        } else {
            ComplexMatrix::identity(levels)
        };
        out = crate::linalg::tensor_product(&out, &factor)
            .expect("mode embedding within the validated size cap");
    }
    out
}

/// Free Hamiltonian `sum_k omega_k a_k^dagger a_k` of the truncated register.
pub fn free_hamiltonian(spec: &BosonRegisterSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let levels = spec.n_max + 1;
    let modes = spec.modes.len();
    let a = annihilation(levels);
    let number = &a.dagger() * &a;
    let mut h = ComplexMatrix::zeros(spec.env_dim(), spec.env_dim());
    for (k, mode) in spec.modes.iter().enumerate() {
        let nk = embed(&number, k, modes, levels).scale(Complex64::new(mode.omega, 0.0));
        h = &h + &nk;
    }
    Ok(h)
}

/// Interaction operator `B_m = sum_k (g_mk a_k^dagger + conj(g_mk) a_k)` for
/// interaction slot `m` (0 = first, 1 = second).
fn interaction_operator(spec: &BosonRegisterSpec, slot: usize) -> ComplexMatrix {
    let levels = spec.n_max + 1;
    let modes = spec.modes.len();
    let a = annihilation(levels);
    let adag = a.dagger();
    let mut b = ComplexMatrix::zeros(spec.env_dim(), spec.env_dim());
    for (k, mode) in spec.modes.iter().enumerate() {
        let theta = if slot == 0 {
            mode.theta_first
        } else {
            mode.theta_second
        };
        let g = Complex64::from_polar(mode.coupling, -theta);
        let up = embed(&adag, k, modes, levels).scale(g);
        let down = embed(&a, k, modes, levels).scale(g.conj());
        b = &(&b + &up) + &down;
    }
    b
}

/// Basis weight of qubit level `j`: -1/2 for `|0>`, +1/2 for `|1>`.
fn level_weight(j: usize) -> f64 {
    if j == 0 {
        -0.5
    } else {
        0.5
    }
}

/// Dephasing model of a qubit pair coupled to the truncated register:
/// `V_ij = e_i B_1 + e_j B_2 + H_free`.
pub fn register_model(spec: &BosonRegisterSpec) -> Result<DephasingModel> {
    spec.validate()?;
    let h = free_hamiltonian(spec)?;
    let b1 = interaction_operator(spec, 0);
    let b2 = interaction_operator(spec, 1);
    let mut couplings = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            let wi = Complex64::new(level_weight(i), 0.0);
            let wj = Complex64::new(level_weight(j), 0.0);
            let v = &(&b1.scale(wi) + &b2.scale(wj)) + &h;
            couplings.push(v);
        }
    }
    DephasingModel::new(2, spec.env_dim(), couplings)
}

/// Gibbs state `exp(-beta H) / Z` of a Hermitian Hamiltonian, computed in
/// its eigenbasis with the spectrum shifted so the weights never overflow.
pub fn thermal_state(h: &ComplexMatrix, beta: f64) -> Result<DensityMatrix> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be positive and finite, got {beta}"),
        });
    }
    let eig = hermitian_eigen(h)?;
    let ground = eig.values[0];
    let weights: Vec<f64> = eig
        .values
        .iter()
        .map(|&ev| (-beta * (ev - ground)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let diag: Vec<Complex64> = weights
        .iter()
        .map(|&w| Complex64::new(w / z, 0.0))
        .collect();
    let d = ComplexMatrix::from_diagonal(&diag);
    let rho = &(&eig.vectors * &d) * &eig.vectors.dagger();
    DensityMatrix::new(rho)
}

/// Thermal initial state of the register's free Hamiltonian.
pub fn thermal_env(spec: &BosonRegisterSpec) -> Result<DensityMatrix> {
    let h = free_hamiltonian(spec)?;
    thermal_state(&h, spec.beta)
}

/// Conditional evolutions with the free rotation removed:
/// `exp(+i tau H_free) exp(-i tau V_ij)`.
///
/// In this frame the same-index evolutions of the qubit pair commute and the
/// closed-form coherence identities of the register hold exactly; the
/// literal evolutions `exp(-i tau V_ij)` (from
/// [`DephasingModel::conditional_evolutions`]) do not share that property.
pub fn interaction_picture_evolutions(
    spec: &BosonRegisterSpec,
    tau: f64,
) -> Result<ConditionalEvolutions> {
    let model = register_model(spec)?;
    let h = free_hamiltonian(spec)?;
    let free_undo = hermitian_exp(&h, -tau)?;
    let mut unitaries = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            let w = hermitian_exp(model.coupling(i, j), tau)?;
            unitaries.push(&free_undo * &w);
        }
    }
    ConditionalEvolutions::new(2, spec.env_dim(), unitaries)
}

/// Closed-form coherence of the register pair after one dephasing step of
/// length `tau` on the symmetric-resource branch: the trace
/// `Tr[w_11^dagger w_00 R]` evaluates per mode to
/// `exp(-2 g^2 (1 + cos(phase_delay)) (1 - cos(omega tau)) coth(beta omega / 2) / omega^2)`.
pub fn analytic_pair_coherence(spec: &BosonRegisterSpec, tau: f64) -> Result<f64> {
    spec.validate()?;
    let mut ln_c = 0.0f64;
    for mode in &spec.modes {
        let g2 = mode.coupling * mode.coupling;
        let occupancy = 1.0 / (0.5 * spec.beta * mode.omega).tanh();
        ln_c -= 2.0 * g2 * (1.0 + mode.phase_delay().cos()) * (1.0 - (mode.omega * tau).cos())
            / (mode.omega * mode.omega)
            * occupancy;
    }
    Ok(ln_c.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_spec() -> BosonRegisterSpec {
        BosonRegisterSpec::single_mode(BosonMode::with_delay(1.0, 0.3, 2.0), 12, 10.0)
    }

    #[test]
    fn number_operator_counts_quanta() {
        let a = annihilation(4);
        let n = &a.dagger() * &a;
        for k in 0..4 {
            assert!((n[(k, k)].re - k as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn thermal_state_has_geometric_populations() {
        let spec = test_spec();
        let rho = thermal_env(&spec).unwrap();
        let ratio = (-spec.beta * spec.modes[0].omega).exp();
        for n in 0..4 {
            let p0 = rho.matrix()[(n, n)].re;
            let p1 = rho.matrix()[(n + 1, n + 1)].re;
            assert!((p1 / p0 - ratio).abs() < 1e-10);
        }
    }

    #[test]
    fn register_couplings_are_hermitian_and_sized() {
        let spec = test_spec();
        let model = register_model(&spec).unwrap();
        assert_eq!(model.qudit_dim(), 2);
        assert_eq!(model.env_dim(), 13);
        for i in 0..2 {
            for j in 0..2 {
                assert!(model.coupling(i, j).hermiticity_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn truncated_pair_coherence_matches_closed_form() {
        let spec = test_spec();
        let model = register_model(&spec).unwrap();
        let env = thermal_env(&spec).unwrap();
        for &tau in &[0.4, 0.9, 1.7] {
            let w = model.conditional_evolutions(tau).unwrap();
            let c = (&(&w.evolution(1, 1).dagger() * w.evolution(0, 0)) * env.matrix()).trace();
            let analytic = analytic_pair_coherence(&spec, tau).unwrap();
            assert!(
                (c.re - analytic).abs() < 1e-10 && c.im.abs() < 1e-10,
                "tau={tau}: trace {c:?} vs closed form {analytic}"
            );
        }
    }

    #[test]
    fn pair_coherence_is_frame_independent() {
        // The free rotation cancels inside the two-operator trace, so the
        // literal and rotated-frame evolutions must give the same coherence.
        let spec = test_spec();
        let model = register_model(&spec).unwrap();
        let env = thermal_env(&spec).unwrap();
        let tau = 0.8;
        let lit = model.conditional_evolutions(tau).unwrap();
        let rot = interaction_picture_evolutions(&spec, tau).unwrap();
        let c_lit = (&(&lit.evolution(1, 1).dagger() * lit.evolution(0, 0)) * env.matrix()).trace();
        let c_rot = (&(&rot.evolution(1, 1).dagger() * rot.evolution(0, 0)) * env.matrix()).trace();
        assert!((c_lit - c_rot).norm() < 1e-10);
    }

    #[test]
    fn rotated_frame_same_index_evolutions_commute() {
        // In the rotated frame the echoed four-operator string collapses to
        // the identity trace; with the literal evolutions it does not.
        let spec = test_spec();
        let env = thermal_env(&spec).unwrap();
        let tau = 0.7;
        let rot = interaction_picture_evolutions(&spec, tau).unwrap();
        let w00 = rot.evolution(0, 0);
        let w11 = rot.evolution(1, 1);
        let echo = &(&(&w11.dagger() * &w00.dagger()) * &(w11 * w00)) * env.matrix();
        assert!((echo.trace() - Complex64::ONE).norm() < 1e-10);

        let model = register_model(&spec).unwrap();
        let lit = model.conditional_evolutions(tau).unwrap();
        let l00 = lit.evolution(0, 0);
        let l11 = lit.evolution(1, 1);
        let echo_lit = &(&(&l11.dagger() * &l00.dagger()) * &(l11 * l00)) * env.matrix();
        assert!((echo_lit.trace() - Complex64::ONE).norm() > 1e-3);
    }

    #[test]
    fn rejects_invalid_parameters() {
        let mut spec = test_spec();
        spec.beta = -1.0;
        assert!(matches!(
            register_model(&spec),
            Err(Error::InvalidParameter { .. })
        ));
        let mut spec = test_spec();
        spec.modes[0].omega = 0.0;
        assert!(matches!(
            register_model(&spec),
            Err(Error::InvalidParameter { .. })
        ));
        let spec = BosonRegisterSpec {
            modes: vec![
                BosonMode::with_delay(1.0, 0.1, 1.0),
                BosonMode::with_delay(2.0, 0.1, 1.0),
            ],
            n_max: 40,
            beta: 1.0,
        };
        assert!(matches!(
            register_model(&spec),
            Err(Error::SizeLimit { .. })
        ));
    }
}
