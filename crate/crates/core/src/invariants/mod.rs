//! Monoid-level invariants: elasticity, sets of elasticities, the
//! stable/unstable structure of primary monoids and density witnesses.

mod density;
mod elasticity;
mod structure;

pub use density::{density_witness, ratio_at, DensityOutcome, IntSequence, SearchBudget};
pub use elasticity::{
    elasticity_set, elasticity_witnesses, is_accepted, monoid_elasticity, Acceptance, ElasticityMode, ElasticityReport,
};
pub use structure::{
    absolutely_unstable_elements, bf_ff_status, decompose_stable_unstable, predicted_r_finite_unstable,
    shifted_lengths, Decomposition, FactorizationStatus, ShiftReport, StatusReport,
};
