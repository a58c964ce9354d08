use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::eigen::hermitian_eigen;
use crate::linalg::matrix::ComplexMatrix;

/// Maximum deviation of a pure-state norm from one. States are produced by
/// unitary maps of normalized inputs, so anything beyond accumulated
/// round-off indicates a construction bug rather than noise.
pub const NORM_TOL: f64 = 1e-12;

/// Hermiticity / trace tolerance for density matrices, slightly looser than
/// [`NORM_TOL`] because density matrices pass through longer product chains
/// (evolution, projection, renormalization) before validation.
pub const DENSITY_TOL: f64 = 1e-10;

/// Most negative eigenvalue tolerated by the positive-semidefiniteness check.
/// Exact zero eigenvalues of projected states land at round-off scale below
/// zero; genuine negativity from a bug is orders of magnitude larger.
pub const PSD_TOL: f64 = 1e-10;

/// Normalized pure state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wrap amplitudes that must already be normalized to within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension { dim: 0 });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState { amplitudes })
    }

    /// Normalize arbitrary non-zero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::NotNormalized { norm });
        }
        let scaled = amplitudes.into_iter().map(|z| z / norm).collect();
        PureState::new(scaled)
    }

    /// Computational basis state `|index>` in a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim });
        }
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, bound: dim });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        PureState::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Outer product `|psi><psi|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let n = self.dim();
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityMatrix::new(m).expect("outer product of a normalized state is a valid density")
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product of mismatched dims");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Density matrix: Hermitian, unit trace, and (on request) positive
/// semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate Hermiticity and unit trace (both O(n^2)); positivity is
    /// deferred to [`DensityMatrix::validated`] since it needs a spectrum.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotDensity {
                reason: format!("hermiticity defect {defect:.3e}"),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::NotDensity {
                reason: format!("trace {:.12e}{:+.3e}i differs from one", tr.re, tr.im),
            });
        }
        Ok(DensityMatrix { matrix })
    }

    /// Full validation including positive semidefiniteness via the spectrum.
    pub fn validated(matrix: ComplexMatrix) -> Result<Self> {
        let rho = DensityMatrix::new(matrix)?;
        let eig = hermitian_eigen(&rho.matrix)?;
        if let Some(&lowest) = eig.values.first() {
            if lowest < -PSD_TOL {
                return Err(Error::NotDensity {
                    reason: format!("negative eigenvalue {lowest:.3e}"),
                });
            }
        }
        Ok(rho)
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { dim });
        }
        let m = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        DensityMatrix::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Purity `Tr[rho^2]`, real by construction.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Largest imaginary part accepted from a nominally real expectation value.
/// `<psi|rho|psi>` is exactly real for Hermitian `rho`; the tolerance guards
/// against accumulated round-off only.
pub const REAL_EXPECTATION_TOL: f64 = 1e-9;

/// Fidelity of a mixed state with respect to a pure target:
/// `F = <psi|rho|psi>`, clamped into [0, 1] against round-off.
pub fn fidelity_pure(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: psi.dim(),
        });
    }
    let image = rho.matrix().mul_vec(psi.amplitudes());
    let value: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(&image)
        .map(|(a, b)| a.conj() * b)
        .sum();
    if value.im.abs() > REAL_EXPECTATION_TOL {
        return Err(Error::NonRealResult {
            imag: value.im,
            context: "pure-state fidelity",
        });
    }
    Ok(value.re.clamp(0.0, 1.0))
}
