use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState};

/// Label `(n, m)` of a maximally entangled basis state of two `d`-level
/// systems: `n` indexes the phase winding, `m` the index shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellIndex {
    pub n: usize,
    pub m: usize,
}

impl BellIndex {
    /// Symmetric pair `(1/sqrt d) sum_j |j, j>`.
    pub const SYMMETRIC: BellIndex = BellIndex { n: 0, m: 0 };
    /// Shifted pair `(1/sqrt d) sum_j |j, j+1>`.
    pub const SHIFTED: BellIndex = BellIndex { n: 0, m: 1 };
    /// Shifted pair with alternating signs (for qubits, the singlet up to a
    /// global phase).
    pub const SHIFTED_ANTISYMMETRIC: BellIndex = BellIndex { n: 1, m: 1 };

    pub fn validate(&self, d: usize) -> Result<()> {
        if self.n >= d {
            return Err(Error::IndexOutOfRange {
                index: self.n,
                bound: d,
            });
        }
        if self.m >= d {
            return Err(Error::IndexOutOfRange {
                index: self.m,
                bound: d,
            });
        }
        Ok(())
    }

    /// All `d*d` labels in lexicographic order.
    pub fn all(d: usize) -> Vec<BellIndex> {
        let mut out = Vec::with_capacity(d * d);
        for n in 0..d {
            for m in 0..d {
                out.push(BellIndex { n, m });
            }
        }
        out
    }
}

/// Phase factor `exp(2 pi i j n / d)`.
fn winding(j: usize, n: usize, d: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (j * n % d) as f64 / d as f64)
}

/// Maximally entangled basis state
/// `|B_nm> = (1/sqrt d) sum_j exp(2 pi i j n / d) |j, j+m mod d>`
/// on a `d*d`-dimensional pair, first subsystem most significant.
pub fn bell_state(d: usize, index: BellIndex) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidDimension { dim: d });
    }
    index.validate(d)?;
    let scale = 1.0 / (d as f64).sqrt();
    let mut amps = vec![Complex64::ZERO; d * d];
    for j in 0..d {
        let partner = (j + index.m) % d;
        amps[j * d + partner] = winding(j, index.n, d) * scale;
    }
    PureState::new(amps)
}

/// Single-system unitary
/// `U_nm = sum_j exp(2 pi i j n / d) |j><j+m mod d|`
/// that undoes the transformation labeled by a measurement outcome `(n, m)`.
pub fn correction_unitary(d: usize, index: BellIndex) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension { dim: d });
    }
    index.validate(d)?;
    let mut u = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        u[(j, (j + index.m) % d)] = winding(j, index.n, d);
    }
    Ok(u)
}

/// Outcome-dependent correction label for the second measurement: with a
/// resource prepared in `B_nm` and a second outcome `B_n'm'`, the receiver
/// applies `U_NM` with `N = n' - n (mod d)` and `M = -(m + m') (mod d)`.
pub fn second_correction(d: usize, first: BellIndex, second: BellIndex) -> BellIndex {
    let n = (second.n % d + d - first.n % d) % d;
    let m = (d - (first.m + second.m) % d) % d;
    BellIndex { n, m }
}

/// Shift part `M = -(m + m') mod d` of the second correction; the pair
/// `(j, j + M)` of output coherences is the one each branch singles out.
pub fn second_correction_shift(d: usize, m: usize, m_prime: usize) -> usize {
    (d - (m + m_prime) % d) % d
}
