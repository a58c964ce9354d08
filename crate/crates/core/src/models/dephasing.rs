use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_exp, ComplexMatrix, DensityMatrix, PureState, HERMITICITY_TOL,
};

/// Entrywise tolerance for the unitarity check on conditional-evolution
/// tables. Evolutions come out of an eigendecomposition (or products of
/// such), so genuine round-off sits near 1e-14; a table that is not unitary
/// to 1e-9 was built from a non-Hermitian generator.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Pure-dephasing coupling of an entangled pair of `d`-level systems to an
/// `e`-dimensional environment.
///
/// The joint generator is block diagonal in the pair's computational basis:
/// each basis pair `|i j>` evolves the environment with its own Hermitian
/// generator `V_ij`, so populations of the pair are untouched while its
/// coherences pick up environment-dependent factors.
#[derive(Clone)]
pub struct DephasingModel {
    qudit_dim: usize,
    env_dim: usize,
    couplings: Vec<ComplexMatrix>, // row-major over (i, j), each env_dim x env_dim
}

impl DephasingModel {
    /// Assemble a model from explicit generators, one per basis pair `(i, j)`
    /// of the entangled pair, listed row-major (`i * d + j`).
    pub fn new(qudit_dim: usize, env_dim: usize, couplings: Vec<ComplexMatrix>) -> Result<Self> {
        if qudit_dim < 2 {
            return Err(Error::InvalidDimension { dim: qudit_dim });
        }
        if env_dim < 1 {
            return Err(Error::InvalidDimension { dim: env_dim });
        }
        if couplings.len() != qudit_dim * qudit_dim {
            return Err(Error::DimensionMismatch {
                expected: qudit_dim * qudit_dim,
                actual: couplings.len(),
            });
        }
        for v in &couplings {
            if v.rows() != env_dim || v.cols() != env_dim {
                return Err(Error::DimensionMismatch {
                    expected: env_dim,
                    actual: v.rows(),
                });
            }
            let defect = v.hermiticity_defect();
            if defect > HERMITICITY_TOL {
                return Err(Error::NotHermitian { defect });
            }
        }
        Ok(DephasingModel {
            qudit_dim,
            env_dim,
            couplings,
        })
    }

    pub fn qudit_dim(&self) -> usize {
        self.qudit_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// Generator attached to the basis pair `|i j>`.
    pub fn coupling(&self, i: usize, j: usize) -> &ComplexMatrix {
        assert!(i < self.qudit_dim && j < self.qudit_dim);
        &self.couplings[i * self.qudit_dim + j]
    }

    /// Environment evolutions `w_ij = exp(-i tau V_ij)` for every basis pair.
    pub fn conditional_evolutions(&self, tau: f64) -> Result<ConditionalEvolutions> {
        let mut unitaries = Vec::with_capacity(self.couplings.len());
        for v in &self.couplings {
            unitaries.push(hermitian_exp(v, tau)?);
        }
        ConditionalEvolutions::new(self.qudit_dim, self.env_dim, unitaries)
    }

    /// Largest entrywise commutator norm among the same-index generators
    /// `V_ii`; zero means every branch of a symmetric resource sees mutually
    /// compatible environment dynamics.
    pub fn diagonal_commutation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.qudit_dim {
            for j in (i + 1)..self.qudit_dim {
                let c = self.coupling(i, i).commutator(self.coupling(j, j));
                worst = worst.max(c.max_abs());
            }
        }
        worst
    }

    /// Largest entrywise commutator norm over all generator pairs.
    pub fn full_commutation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.couplings.len() {
            for b in (a + 1)..self.couplings.len() {
                let c = self.couplings[a].commutator(&self.couplings[b]);
                worst = worst.max(c.max_abs());
            }
        }
        worst
    }

    /// Largest entrywise commutator norm among index-exchanged generator
    /// pairs `(V_ij, V_ji)` with `i != j`; zero is the compatibility
    /// condition under which a shift-only resource gains its own protected
    /// branch class.
    pub fn exchanged_pair_commutation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.qudit_dim {
            for j in (i + 1)..self.qudit_dim {
                let c = self.coupling(i, j).commutator(self.coupling(j, i));
                worst = worst.max(c.max_abs());
            }
        }
        worst
    }
}

/// Table of environment unitaries `w_ij`, one per basis pair of the
/// entangled resource, at a fixed evolution time.
#[derive(Clone)]
pub struct ConditionalEvolutions {
    qudit_dim: usize,
    env_dim: usize,
    unitaries: Vec<ComplexMatrix>,
}

impl ConditionalEvolutions {
    /// Wrap a full `d*d` table of `e x e` unitaries (row-major over `(i, j)`).
    pub fn new(qudit_dim: usize, env_dim: usize, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        if unitaries.len() != qudit_dim * qudit_dim {
            return Err(Error::DimensionMismatch {
                expected: qudit_dim * qudit_dim,
                actual: unitaries.len(),
            });
        }
        let id = ComplexMatrix::identity(env_dim);
        for u in &unitaries {
            if u.rows() != env_dim || u.cols() != env_dim {
                return Err(Error::DimensionMismatch {
                    expected: env_dim,
                    actual: u.rows(),
                });
            }
            let gram = &u.dagger() * u;
            let defect = gram.max_abs_diff(&id);
            if defect > UNITARITY_TOL {
                return Err(Error::InvalidParameter {
                    name: "unitaries",
                    reason: format!("entry departs from unitarity by {defect:.3e}"),
                });
            }
        }
        Ok(ConditionalEvolutions {
            qudit_dim,
            env_dim,
            unitaries,
        })
    }

    pub fn qudit_dim(&self) -> usize {
        self.qudit_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// Evolution attached to the basis pair `|i j>`.
    pub fn evolution(&self, i: usize, j: usize) -> &ComplexMatrix {
        assert!(i < self.qudit_dim && j < self.qudit_dim);
        &self.unitaries[i * self.qudit_dim + j]
    }
}

fn standard_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Random Hermitian matrix with O(1) spectral radius: `(G + G^dagger) / (2 sqrt(n))`
/// for `G` with independent standard complex Gaussian entries.
fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| standard_complex(rng));
    let scale = Complex64::new(0.5 / (n as f64).sqrt(), 0.0);
    (&g + &g.dagger()).scale(scale)
}

/// Model with an independent random Hermitian generator per basis pair.
/// Generators generically share no eigenbasis, so nothing commutes.
pub fn random_model(qudit_dim: usize, env_dim: usize, seed: u64) -> Result<DephasingModel> {
    if qudit_dim < 2 {
        return Err(Error::InvalidDimension { dim: qudit_dim });
    }
    if env_dim < 1 {
        return Err(Error::InvalidDimension { dim: env_dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let couplings = (0..qudit_dim * qudit_dim)
        .map(|_| random_hermitian(env_dim, &mut rng))
        .collect();
    DephasingModel::new(qudit_dim, env_dim, couplings)
}

/// Model whose generators all share one random eigenbasis, so every pair of
/// conditional evolutions commutes (up to round-off) at all times.
pub fn commuting_model(qudit_dim: usize, env_dim: usize, seed: u64) -> Result<DephasingModel> {
    if qudit_dim < 2 {
        return Err(Error::InvalidDimension { dim: qudit_dim });
    }
    if env_dim < 1 {
        return Err(Error::InvalidDimension { dim: env_dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = hermitian_eigen(&random_hermitian(env_dim, &mut rng))?.vectors;
    let basis_dag = basis.dagger();
    let mut couplings = Vec::with_capacity(qudit_dim * qudit_dim);
    for _ in 0..qudit_dim * qudit_dim {
        let spectrum: Vec<Complex64> = (0..env_dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
            .collect();
        let d = ComplexMatrix::from_diagonal(&spectrum);
        couplings.push(&(&basis * &d) * &basis_dag);
    }
    DephasingModel::new(qudit_dim, env_dim, couplings)
}

/// Random pure environment state (Gaussian amplitudes, normalized), as a
/// density matrix.
pub fn random_pure_env(env_dim: usize, seed: u64) -> Result<DensityMatrix> {
    if env_dim < 1 {
        return Err(Error::InvalidDimension { dim: env_dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..env_dim).map(|_| standard_complex(&mut rng)).collect();
    Ok(PureState::normalized(amps)?.density())
}

/// Random full-rank mixed environment state: `G G^dagger` normalized to unit
/// trace, for `G` with standard complex Gaussian entries.
pub fn random_mixed_env(env_dim: usize, seed: u64) -> Result<DensityMatrix> {
    if env_dim < 1 {
        return Err(Error::InvalidDimension { dim: env_dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(env_dim, env_dim, |_, _| standard_complex(&mut rng));
    let gram = &g * &g.dagger();
    let trace = gram.trace().re;
    DensityMatrix::validated(gram.scale(Complex64::new(1.0 / trace, 0.0)))
}
