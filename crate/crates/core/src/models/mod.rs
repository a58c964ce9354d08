//! Environment models: seeded random dephasing couplings (general and
//! mutually commuting) and a truncated bosonic register with thermal
//! initial states.

mod boson;
mod dephasing;

pub use boson::{
    analytic_pair_coherence, free_hamiltonian, interaction_picture_evolutions, register_model,
    thermal_env, thermal_state, BosonMode, BosonRegisterSpec, MAX_BOSON_DIM,
};
pub use dephasing::{
    commuting_model, random_mixed_env, random_model, random_pure_env, ConditionalEvolutions,
    DephasingModel, UNITARITY_TOL,
};
