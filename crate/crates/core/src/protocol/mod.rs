//! Exact two-step teleportation with the environment tracked through both
//! steps: entangled-basis states and corrections, composite-state
//! operations, and the branch-by-branch protocol engine.

mod bell;
mod engine;
mod multistate;

pub use bell::{
    bell_state, correction_unitary, second_correction, second_correction_shift, BellIndex,
};
pub use engine::{
    coherence_ratios, first_step_probability_deviation, run_first_step, run_protocol,
    run_second_step, second_step_probability_deviation, FirstStepBranch, ProtocolBranch,
    ProtocolRun, SecondStepOutcome, COHERENCE_INPUT_FLOOR,
};
pub use multistate::{
    apply_local, controlled_pair_evolution, controlled_pair_evolution_dense, project_pair,
    trace_out_env, BRANCH_PROBABILITY_FLOOR,
};
