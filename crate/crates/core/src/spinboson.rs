//! Continuum-limit analytics for a qubit pair dephased by a common bosonic
//! bath. Every branch coherence factor of the protocol reduces, for this
//! model, to a trace of up to four displacement operators over a thermal
//! state; those traces have closed-form logarithms that only require one
//! frequency integral over the spectral density. This module evaluates them
//! with a composite Gauss-Legendre rule, and exposes the same kernel for a
//! single discrete mode so the truncated-Fock simulation can cross-check
//! every sign.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::BosonMode;

/// Nodes per quadrature panel.
const PANEL_ORDER: usize = 16;

/// Hard cap on total quadrature nodes; a scan over thousands of durations
/// stays interactive well below this.
pub const MAX_QUAD_POINTS: usize = 1 << 22;

/// Per-mode coupling weights of one conditional evolution operator: the
/// prefactors multiplying the early and late interaction operators in its
/// generator. Basis level 0 carries weight -1/2 and level 1 carries +1/2,
/// so the four operators of a qubit pair are the sign combinations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingWeight {
    pub early: f64,
    pub late: f64,
}

impl CouplingWeight {
    pub const ZERO: CouplingWeight = CouplingWeight {
        early: 0.0,
        late: 0.0,
    };

    pub fn new(early: f64, late: f64) -> Self {
        CouplingWeight { early, late }
    }

    /// Weights of the conditional evolution selected by basis levels
    /// `(i, j)` of the dephasing pair.
    pub fn for_basis_pair(i: usize, j: usize) -> Result<Self> {
        let weight = |level: usize| -> Result<f64> {
            match level {
                0 => Ok(-0.5),
                1 => Ok(0.5),
                _ => Err(Error::IndexOutOfRange {
                    index: level,
                    bound: 2,
                }),
            }
        };
        Ok(CouplingWeight {
            early: weight(i)?,
            late: weight(j)?,
        })
    }

    fn add(self, other: Self) -> Self {
        CouplingWeight {
            early: self.early + other.early,
            late: self.late + other.late,
        }
    }

    fn sub(self, other: Self) -> Self {
        CouplingWeight {
            early: self.early - other.early,
            late: self.late - other.late,
        }
    }

    /// Quadratic form `x1^2 + x2^2 + 2 x1 x2 cos(delay)` — the squared
    /// effective coupling of one operator at a given interaction delay
    /// phase.
    fn quad(self, cos_delay: f64) -> f64 {
        self.early * self.early
            + self.late * self.late
            + 2.0 * self.early * self.late * cos_delay
    }

    /// Antisymmetric pairing `x1 y2 - x2 y1` between two weight vectors.
    fn cross(self, other: Self) -> f64 {
        self.early * other.late - self.late * other.early
    }
}

/// `|alpha|^2 = 2 (1 - cos(omega tau)) / omega^2`, the squared displacement
/// amplitude accumulated by one mode over a window of length `tau`,
/// evaluated through `4 sin^2(omega tau / 2) / omega^2` to avoid
/// cancellation at small arguments.
fn displacement_weight(omega: f64, tau: f64) -> f64 {
    let s = (0.5 * omega * tau).sin();
    4.0 * s * s / (omega * omega)
}

/// `xi = (omega tau - sin(omega tau)) / omega^2`, the free-evolution phase
/// drift of one mode, with a series expansion where the difference would
/// cancel catastrophically.
fn drift_phase(omega: f64, tau: f64) -> f64 {
    let x = omega * tau;
    if x.abs() < 1e-2 {
        let x2 = x * x;
        x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0)) / (omega * omega)
    } else {
        (x - x.sin()) / (omega * omega)
    }
}

/// Per-unit-coupling logarithm of the four-operator trace
/// `Tr[w(d)^+ w(c)^+ w(b) w(a) R]` for one mode, in the rotated frame where
/// each operator is a pure displacement with a quadratic phase. `a` and `b`
/// are applied in the first and second window on the ket side; `d` and `c`
/// are their bra-side counterparts.
fn ln_trace_kernel(
    omega: f64,
    tau: f64,
    delay: f64,
    coth: f64,
    ket: [CouplingWeight; 2],
    bra: [CouplingWeight; 2],
) -> Complex64 {
    let (a, b) = (ket[0], ket[1]);
    let (d, c) = (bra[0], bra[1]);
    let cos_delay = delay.cos();
    let alpha2 = displacement_weight(omega, tau);

    let v = a.add(b).sub(c.add(d));
    let modulus = -0.5 * v.quad(cos_delay) * alpha2 * coth;

    let dq = a.quad(cos_delay) + b.quad(cos_delay) - c.quad(cos_delay) - d.quad(cos_delay);
    let cross_sum = b.cross(a) - c.cross(d) - c.add(d).cross(a.add(b));
    let phase = drift_phase(omega, tau) * dq + alpha2 * delay.sin() * cross_sum;

    Complex64::new(modulus, phase)
}

/// Log-coherence kernel of the fully unrotated echo class: the factor the
/// literal (lab-frame) evolution produces where the rotated frame would
/// give exactly 1.
fn lab_echo_kernel(omega: f64, tau: f64, cos_delay: f64, coth: f64) -> f64 {
    let s = (0.5 * omega * tau).sin();
    let one_minus_cos = 2.0 * s * s;
    -4.0 * (1.0 + cos_delay) * one_minus_cos * one_minus_cos * coth / (omega * omega)
}

/// Four-operator trace of a single discrete mode with coupling magnitude
/// `mode.coupling`, thermal at inverse temperature `beta`. Shares
/// [`ln_trace_kernel`] with the continuum integrand, so the truncated-Fock
/// simulation of one mode validates the whole family.
pub fn single_mode_four_operator_ln(
    mode: &BosonMode,
    beta: f64,
    tau: f64,
    ket: [CouplingWeight; 2],
    bra: [CouplingWeight; 2],
) -> Result<Complex64> {
    check_mode(mode, beta, tau)?;
    let coth = 1.0 / (0.5 * beta * mode.omega).tanh();
    let g2 = mode.coupling * mode.coupling;
    Ok(ln_trace_kernel(mode.omega, tau, mode.phase_delay(), coth, ket, bra) * g2)
}

/// Log of the lab-frame echo-class factor for a single discrete mode.
pub fn single_mode_lab_echo_ln(mode: &BosonMode, beta: f64, tau: f64) -> Result<f64> {
    check_mode(mode, beta, tau)?;
    let coth = 1.0 / (0.5 * beta * mode.omega).tanh();
    let g2 = mode.coupling * mode.coupling;
    Ok(g2 * lab_echo_kernel(mode.omega, tau, mode.phase_delay().cos(), coth))
}

fn check_mode(mode: &BosonMode, beta: f64, tau: f64) -> Result<()> {
    if !(mode.omega > 0.0 && mode.omega.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "omega",
            reason: format!("must be positive and finite, got {}", mode.omega),
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "beta",
            reason: format!("must be positive and finite, got {beta}"),
        });
    }
    check_tau(tau)
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tau",
            reason: format!("must be finite, got {tau}"),
        });
    }
    Ok(())
}

/// Continuous bath of oscillator modes with spectral density
/// `J(omega) = omega (omega / lambda)^(s-1) exp(-omega / lambda)`, thermal
/// at the given temperature, whose two interaction slots are separated by a
/// propagation delay `t_bar`.
#[derive(Clone, Debug)]
pub struct SpinBosonParams {
    /// Spectral exponent; exponents below 1 make the coherence integrals
    /// diverge at low frequency and are rejected.
    pub s: f64,
    /// Cutoff frequency of the exponential roll-off (positive).
    pub lambda: f64,
    /// Bath temperature (non-negative; 0 selects the vacuum weight).
    pub temperature: f64,
    /// Propagation delay between the two interaction slots.
    pub t_bar: f64,
    /// Upper integration limit in units of `lambda`.
    pub omega_max_factor: f64,
    /// Total quadrature nodes, rounded up to whole panels of 16.
    pub quad_points: usize,
}

impl SpinBosonParams {
    /// Bath with the default integration window (`50 lambda`) and
    /// resolution (8192 nodes).
    pub fn new(s: f64, lambda: f64, temperature: f64, t_bar: f64) -> Result<Self> {
        let params = SpinBosonParams {
            s,
            lambda,
            temperature,
            t_bar,
            omega_max_factor: 50.0,
            quad_points: 8192,
        };
        params.validate()?;
        Ok(params)
    }

    /// Same bath with a custom integration window and node count.
    pub fn with_resolution(mut self, omega_max_factor: f64, quad_points: usize) -> Result<Self> {
        self.omega_max_factor = omega_max_factor;
        self.quad_points = quad_points;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::InvalidParameter {
                name: "s",
                reason: format!("must be finite, got {}", self.s),
            });
        }
        if self.s < 1.0 {
            return Err(Error::InfraredDivergent { s: self.s });
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be positive and finite, got {}", self.lambda),
            });
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: format!("must be non-negative and finite, got {}", self.temperature),
            });
        }
        if !self.t_bar.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t_bar",
                reason: format!("must be finite, got {}", self.t_bar),
            });
        }
        if !(self.omega_max_factor >= 1.0 && self.omega_max_factor.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega_max_factor",
                reason: format!("must be at least 1, got {}", self.omega_max_factor),
            });
        }
        if self.quad_points < PANEL_ORDER {
            return Err(Error::InvalidParameter {
                name: "quad_points",
                reason: format!("need at least {PANEL_ORDER} nodes, got {}", self.quad_points),
            });
        }
        if self.quad_points > MAX_QUAD_POINTS {
            return Err(Error::SizeLimit {
                entries: self.quad_points,
                max: MAX_QUAD_POINTS,
            });
        }
        Ok(())
    }

    /// Spectral density `J(omega)` of the bath.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        omega * (omega / self.lambda).powf(self.s - 1.0) * (-omega / self.lambda).exp()
    }

    /// `coth(omega / (2 T))` with the vacuum (`T = 0`) limit 1, a series
    /// for the classical regime, and saturation deep in the quantum one.
    fn coth_half(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            return 1.0;
        }
        let x = 0.5 * omega / self.temperature;
        if x > 30.0 {
            1.0
        } else if x < 1e-3 {
            1.0 / x + x / 3.0 - x * x * x / 45.0
        } else {
            1.0 / x.tanh()
        }
    }

    fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        let (nodes, weights) = self.quadrature_grid();
        let mut acc = Complex64::ZERO;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += f(*x) * *w;
        }
        acc
    }

    /// Composite grid: the 16-point Gauss-Legendre rule on uniform panels
    /// covering `[0, omega_max_factor * lambda]`.
    fn quadrature_grid(&self) -> (Vec<f64>, Vec<f64>) {
        let (base_x, base_w) = gauss_legendre(PANEL_ORDER);
        let panels = self.quad_points.div_ceil(PANEL_ORDER).max(1);
        let width = self.omega_max_factor * self.lambda / panels as f64;
        let half = 0.5 * width;
        let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for k in 0..PANEL_ORDER {
                nodes.push(mid + half * base_x[k]);
                weights.push(half * base_w[k]);
            }
        }
        (nodes, weights)
    }

    /// Log of the one-window pair coherence factor
    /// `c(tau) = exp(-int J (1 + cos(omega t_bar)) |alpha|^2 coth domega)`.
    pub fn ln_single_factor(&self, tau: f64) -> Result<f64> {
        self.validate()?;
        check_tau(tau)?;
        let value = self.integrate(|omega| {
            let weight = -self.spectral_density(omega)
                * (1.0 + (omega * self.t_bar).cos())
                * displacement_weight(omega, tau)
                * self.coth_half(omega);
            Complex64::new(weight, 0.0)
        });
        Ok(value.re)
    }

    /// One-window pair coherence factor `c(tau)`.
    pub fn single_factor(&self, tau: f64) -> Result<f64> {
        Ok(self.ln_single_factor(tau)?.exp())
    }

    /// Log of the crossed-class factor
    /// `C' = exp(-4 int J (1 - cos(omega tau)) coth / omega^2 domega)`,
    /// shared by both `(m, m') = (1, 0)` and `(1, 1)` branch classes. The
    /// delay between the two coupling windows drops out of this class, so
    /// the integrand never references `t_bar`; the multiply order matches
    /// `ln_single_factor` so the two agree bitwise when `t_bar = 0`.
    pub fn ln_crossed_factor(&self, tau: f64) -> Result<f64> {
        self.validate()?;
        check_tau(tau)?;
        let value = self.integrate(|omega| {
            let weight = -self.spectral_density(omega)
                * 2.0
                * displacement_weight(omega, tau)
                * self.coth_half(omega);
            Complex64::new(weight, 0.0)
        });
        Ok(value.re)
    }

    /// Crossed-class factor `C'(tau)`.
    pub fn crossed_factor(&self, tau: f64) -> Result<f64> {
        Ok(self.ln_crossed_factor(tau)?.exp())
    }

    /// Log of the general four-operator trace
    /// `Tr[w(d)^+ w(c)^+ w(b) w(a) R]` in the rotated frame, where
    /// `ket = [a, b]` are the first- and second-window operators on the ket
    /// side and `bra = [d, c]` their bra-side counterparts.
    pub fn ln_four_operator_trace(
        &self,
        tau: f64,
        ket: [CouplingWeight; 2],
        bra: [CouplingWeight; 2],
    ) -> Result<Complex64> {
        self.validate()?;
        check_tau(tau)?;
        Ok(self.integrate(|omega| {
            ln_trace_kernel(
                omega,
                tau,
                omega * self.t_bar,
                self.coth_half(omega),
                ket,
                bra,
            ) * self.spectral_density(omega)
        }))
    }

    /// The four-operator trace itself.
    pub fn four_operator_trace(
        &self,
        tau: f64,
        ket: [CouplingWeight; 2],
        bra: [CouplingWeight; 2],
    ) -> Result<Complex64> {
        Ok(self.ln_four_operator_trace(tau, ket, bra)?.exp())
    }

    /// Log of the echo-class factor evaluated with the literal lab-frame
    /// evolution instead of the rotated frame; the rotated value is exactly
    /// 1, and this quantifies what dropping the rotation costs.
    pub fn ln_lab_frame_echo_factor(&self, tau: f64) -> Result<f64> {
        self.validate()?;
        check_tau(tau)?;
        let value = self.integrate(|omega| {
            let k = lab_echo_kernel(
                omega,
                tau,
                (omega * self.t_bar).cos(),
                self.coth_half(omega),
            ) * self.spectral_density(omega);
            Complex64::new(k, 0.0)
        });
        Ok(value.re)
    }

    /// The five coherence factors governing a qubit pair's branches at
    /// equal window durations, in the rotated frame: the one-window factor
    /// plus the four `(m, m')` branch classes of the symmetric resource.
    pub fn standard_branch_factors(&self, tau: f64) -> Result<BranchFactors> {
        let one_step = self.single_factor(tau)?;
        let mut two_step = [[Complex64::ZERO; 2]; 2];
        for (m, m_prime, ket, bra) in branch_class_configs() {
            two_step[m][m_prime] = self.four_operator_trace(tau, ket, bra)?;
        }
        Ok(BranchFactors { one_step, two_step })
    }

    /// Teleportation fidelities along a duration grid for an input with
    /// coherence weight `amp_sq = |psi_0 psi_1|^2` (at most 1/4):
    /// the one-step fidelity, the branch-averaged two-step fidelity, and
    /// the per-class fidelities.
    pub fn fidelity_curves(&self, taus: &[f64], amp_sq: f64) -> Result<Vec<FidelityCurvePoint>> {
        if !(0.0..=0.25).contains(&amp_sq) {
            return Err(Error::InvalidParameter {
                name: "amp_sq",
                reason: format!("coherence weight must lie in [0, 1/4], got {amp_sq}"),
            });
        }
        let fid = |c: f64| (1.0 - 2.0 * amp_sq * (1.0 - c)).clamp(0.0, 1.0);
        let mut out = Vec::with_capacity(taus.len());
        for &tau in taus {
            let f = self.standard_branch_factors(tau)?;
            let aligned = f.two_step[0][0].re;
            let purified = f.two_step[0][1].re;
            let crossed = 0.5 * (f.two_step[1][0].re + f.two_step[1][1].re);
            let average = 0.25 * (aligned + purified + 2.0 * crossed);
            out.push(FidelityCurvePoint {
                tau,
                one_step: fid(f.one_step),
                two_step: fid(average),
                aligned_class: fid(aligned),
                crossed_class: fid(crossed),
                purified_class: fid(purified),
            });
        }
        Ok(out)
    }
}

/// Branch coherence factors of a qubit pair at one duration.
#[derive(Clone, Copy, Debug)]
pub struct BranchFactors {
    /// One-window pair factor `c`.
    pub one_step: f64,
    /// `two_step[m][m_prime]`: factor of the output coherence in the branch
    /// class with outcome shifts `(m, m')` (symmetric resource).
    pub two_step: [[Complex64; 2]; 2],
}

/// Fidelities along the duration grid produced by
/// [`SpinBosonParams::fidelity_curves`].
#[derive(Clone, Copy, Debug)]
pub struct FidelityCurvePoint {
    pub tau: f64,
    /// Fidelity after a single teleportation step.
    pub one_step: f64,
    /// Branch-averaged fidelity after both steps.
    pub two_step: f64,
    /// Fidelity of the aligned class `(m, m') = (0, 0)`.
    pub aligned_class: f64,
    /// Shared fidelity of the two shifted-first-outcome classes.
    pub crossed_class: f64,
    /// Fidelity of the purified class `(m, m') = (0, 1)` — identically 1.
    pub purified_class: f64,
}

const W00: CouplingWeight = CouplingWeight {
    early: -0.5,
    late: -0.5,
};
const W01: CouplingWeight = CouplingWeight {
    early: -0.5,
    late: 0.5,
};
const W10: CouplingWeight = CouplingWeight {
    early: 0.5,
    late: -0.5,
};
const W11: CouplingWeight = CouplingWeight {
    early: 0.5,
    late: 0.5,
};

/// Operator configurations of the four `(m, m')` branch classes for the
/// symmetric resource and the representative coherence pair `(0, 1)`.
fn branch_class_configs() -> [(usize, usize, [CouplingWeight; 2], [CouplingWeight; 2]); 4] {
    [
        (0, 0, [W00, W00], [W11, W11]),
        (0, 1, [W00, W11], [W11, W00]),
        (1, 0, [W11, W10], [W00, W01]),
        (1, 1, [W11, W01], [W00, W10]),
    ]
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// found by Newton iteration from the standard cosine initial guesses.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n` and its derivative at `x` via the three-term
/// recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut curr = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * curr - (kf - 1.0) * prev) / kf;
        prev = curr;
        curr = next;
    }
    let dp = n as f64 * (x * curr - prev) / (x * x - 1.0);
    (curr, dp)
}
