//! Exact simulation and analytic evaluation of two-step quantum
//! teleportation with an environment that dephases the entangled resources.
//!
//! The crate is organized in layers:
//!
//! - [`linalg`]: dense complex matrices, a Hermitian eigensolver, and
//!   state containers with validity checks.
//! - [`models`]: environment couplings — seeded random conditional
//!   evolutions (general and mutually commuting) and a truncated bosonic
//!   register with thermal initial states.
//! - [`protocol`]: the two-step teleportation engine itself, tracking the
//!   environment exactly through both steps, with Bell measurements and
//!   conditional corrections.
//! - [`factors`]: closed-form coherence factors for every measurement
//!   branch, fidelity formulas, the purification classifier, and the
//!   timing-mismatch scan.
//! - [`spinboson`]: analytic decoherence factors of the bosonic register
//!   in the continuum limit, evaluated by adaptive-order quadrature.

pub mod error;
pub mod factors;
pub mod linalg;
pub mod models;
pub mod protocol;
pub mod spinboson;

pub use error::{Error, Result};
