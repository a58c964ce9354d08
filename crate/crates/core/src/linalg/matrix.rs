use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the number of entries a tensor product may produce.
///
/// Composite spaces grow multiplicatively; this bound (2^20 entries, i.e.
/// a 1024x1024 complex matrix) keeps accidental dimension explosions from
/// exhausting memory while leaving ample room for every supported scenario.
pub const MAX_TENSOR_ENTRIES: usize = 1 << 20;

/// Dense complex matrix in row-major storage.
///
/// This is the single workhorse type shared by the model builders, the
/// protocol engine and the factor engine. Composite-system indices are
/// lexicographic with the leftmost tensor factor most significant, matching
/// the Kronecker-product convention of [`tensor_product`].
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build a matrix by evaluating `f(row, col)` for every entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build a square diagonal matrix from complex diagonal entries.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Immutable view of the raw row-major storage.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Sum of diagonal entries. Panics if the matrix is not square.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Entrywise maximum modulus; the norm used for all defect measurements.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise maximum modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff of mismatched shapes"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Rescale every entry by a complex factor.
    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= factor;
        }
        out
    }

    /// Largest modulus among entries of `self - self^dagger`; zero for an
    /// exactly Hermitian matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square(), "hermiticity of a non-square matrix");
        let mut defect = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                defect = defect.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        defect
    }

    pub fn is_hermitian_within(&self, tolerance: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tolerance
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "mul_vec with mismatched length");
        if self.cols == 0 {
            // chunks_exact rejects a zero chunk size
            return vec![Complex64::ZERO; self.rows];
        }
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self * other` with explicit shape checking.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                let lhs_row = i * other.cols;
                let rhs_row = k * other.cols;
                for j in 0..other.cols {
                    out.data[lhs_row + j] += aik * other.data[rhs_row + j];
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        let ab = self * other;
        let ba = other * self;
        &ab - &ba
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(other)
            .expect("matrix product with incompatible shapes")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a (x) b` with the leftmost factor most significant:
/// `out[(i*p + k, j*q + l)] = a[(i, j)] * b[(k, l)]` for `b` of shape `p x q`.
///
/// Returns [`Error::SizeLimit`] when the result would exceed
/// [`MAX_TENSOR_ENTRIES`] entries.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let entries = rows.saturating_mul(cols);
    if entries > MAX_TENSOR_ENTRIES {
        return Err(Error::SizeLimit {
            entries,
            max: MAX_TENSOR_ENTRIES,
        });
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a list of square factors, left to right.
pub fn tensor_chain(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::identity(1);
    for f in factors {
        out = tensor_product(&out, f)?;
    }
    Ok(out)
}

/// Trace out every subsystem not listed in `keep` from an operator on the
/// composite space described by `dims` (leftmost factor most significant).
///
/// `keep` must be strictly increasing and in range; the result lives on the
/// kept subsystems in their original order. The full trace is preserved.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let total: usize = dims.iter().product();
    if total != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            actual: total,
        });
    }
    for (pos, &k) in keep.iter().enumerate() {
        if k >= dims.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                bound: dims.len(),
            });
        }
        if pos > 0 && keep[pos - 1] >= k {
            return Err(Error::InvalidParameter {
                name: "keep",
                reason: "subsystem indices must be strictly increasing".into(),
            });
        }
    }

    // Strides of each subsystem within the composite index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();

    // Enumerate base offsets of all kept and all traced multi-indices.
    let offsets = |subsys: &[usize]| -> Vec<usize> {
        let mut offs = vec![0usize];
        for &s in subsys {
            let mut next = Vec::with_capacity(offs.len() * dims[s]);
            for &o in &offs {
                for x in 0..dims[s] {
                    next.push(o + x * strides[s]);
                }
            }
            offs = next;
        }
        offs
    };
    let kept_offsets = offsets(keep);
    let traced_offsets = offsets(&traced);

    let n = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (a, &ra) in kept_offsets.iter().enumerate() {
        for (b, &rb) in kept_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for &t in &traced_offsets {
                acc += m[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}
