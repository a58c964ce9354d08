//! Dense complex linear algebra: matrices, Hermitian eigendecomposition,
//! and quantum state containers.

mod eigen;
mod matrix;
mod state;

pub use eigen::{hermitian_eigen, hermitian_exp, hermitian_map, HermitianEigen, HERMITICITY_TOL};
pub use matrix::{partial_trace, tensor_chain, tensor_product, ComplexMatrix, MAX_TENSOR_ENTRIES};
pub use state::{
    fidelity_pure, DensityMatrix, PureState, DENSITY_TOL, NORM_TOL, PSD_TOL, REAL_EXPECTATION_TOL,
};
