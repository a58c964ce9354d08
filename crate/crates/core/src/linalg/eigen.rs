use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

/// Maximum entrywise Hermiticity defect accepted by the eigensolver and by
/// [`hermitian_exp`]. Inputs are built from sums and products of exactly
/// Hermitian pieces, so honest round-off sits many orders below this while a
/// genuinely non-Hermitian operand (a bug) lands far above it.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal threshold at which a Jacobi sweep is declared converged,
/// relative to the largest entry of the input. Quadratic convergence of the
/// cyclic sweep makes the last iteration overshoot this comfortably.
const JACOBI_REL_TOL: f64 = 1e-14;

/// Upper bound on full sweeps before giving up; cyclic Jacobi on Hermitian
/// input converges in well under this for any size this crate constructs.
const MAX_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix: `matrix = V diag(values) V^dagger`
/// with real eigenvalues sorted ascending and orthonormal eigenvector columns.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation zeroes one off-diagonal pair `(p, q)` exactly; repeated
/// sweeps drive the off-diagonal mass to zero quadratically. Returns
/// [`Error::NotHermitian`] if the input fails the Hermiticity check and
/// [`Error::EigenNoConvergence`] in the (never observed) case the sweep
/// budget is exhausted.
pub fn hermitian_eigen(matrix: &ComplexMatrix) -> Result<HermitianEigen> {
    if !matrix.is_square() {
        return Err(Error::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let defect = matrix.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian { defect });
    }

    let n = matrix.rows();
    // Work on the exactly-Hermitian average (M + M^dagger)/2 so round-off in
    // the input cannot leak imaginary parts into the eigenvalues.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5
    });
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let stop = JACOBI_REL_TOL * scale;

    let off_diag_max = |m: &ComplexMatrix| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max(m[(i, j)].norm());
            }
        }
        worst
    };

    let mut sweeps = 0;
    while off_diag_max(&a) > stop {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::EigenNoConvergence {
                sweeps,
                residual: off_diag_max(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let b = beta.norm();
                if b <= stop {
                    continue;
                }
                // Unitary 2x2 rotation annihilating the (p, q) entry of the
                // Hermitian block [[alpha, beta], [conj(beta), gamma]].
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let u = beta / b; // phase of the off-diagonal entry
                let tau = (alpha - gamma) / (2.0 * b);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let su = s * u;
                let su_conj = s * u.conj();

                // A <- J^dagger A J applied as column then row updates.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * su_conj;
                    a[(k, q)] = -akp * su + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * su;
                    a[(q, k)] = -apk * su_conj + aqk * c;
                }
                // Rotated diagonal entries are real up to round-off; pin them.
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;

                // Accumulate V <- V J.
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * su_conj;
                    v[(k, q)] = -vkp * su + vkq * c;
                }
            }
        }
    }

    // Sort eigenpairs ascending by eigenvalue.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    Ok(HermitianEigen { values, vectors })
}

/// Unitary evolution `exp(-i t H)` of a Hermitian generator `H`, computed
/// through its eigendecomposition: `V diag(exp(-i t lambda)) V^dagger`.
pub fn hermitian_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h)?;
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -t * lambda))
        .collect();
    let d = ComplexMatrix::from_diagonal(&phases);
    Ok(&(&eig.vectors * &d) * &eig.vectors.dagger())
}

/// Apply a real scalar function to a Hermitian matrix through its spectrum:
/// `V diag(f(lambda)) V^dagger`.
pub fn hermitian_map(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h)?;
    let mapped: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&lambda| Complex64::new(f(lambda), 0.0))
        .collect();
    let d = ComplexMatrix::from_diagonal(&mapped);
    Ok(&(&eig.vectors * &d) * &eig.vectors.dagger())
}
