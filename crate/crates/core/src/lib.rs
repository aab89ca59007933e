//! Exact factorization invariants of Puiseux monoids.
//!
//! A Puiseux monoid is an additive submonoid of the nonnegative rationals.
//! This crate works with finitely generated snapshots ("truncations") of
//! such monoids, optionally described symbolically by generator families,
//! and computes atoms, factorization sets, length sets, elasticities and
//! the stable/unstable structure of primary monoids, all in exact
//! arithmetic.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! anything touching IO live in the companion `puiseux` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod constructions;
pub mod error;
pub mod expr;
pub mod factor;
pub mod invariants;
pub mod monoid;
pub mod primes;
pub mod rational;
mod search;
pub mod spec;
pub mod valuation;

pub use error::{Error, Result};
pub use expr::NumeratorExpr;
pub use factor::{
    element_elasticity, factorization_count, factorizations, for_each_length_profile, length_profile, length_set,
    valuation_coefficient_check, CoefficientCheck, ElementLengths, Factorization, LengthSet, DEFAULT_CAP,
};

pub use constructions::{
    bifurcus_build, bifurcus_verify, catalog, AddedPair, BifurcusReport, CatalogName, StagedMonoid,
};
pub use invariants::{
    absolutely_unstable_elements, bf_ff_status, decompose_stable_unstable, density_witness, elasticity_set,
    elasticity_witnesses, is_accepted, monoid_elasticity, predicted_r_finite_unstable, ratio_at, shifted_lengths,
    Acceptance, Decomposition, DensityOutcome, ElasticityMode, ElasticityReport, FactorizationStatus, IntSequence,
    SearchBudget, ShiftReport, StatusReport,
};
pub use monoid::{classify_stability, is_primary, truncate, PrimaryReport, Stability, TruncatedMonoid};
pub use primes::{is_prime, primality, prime_seq, Primality, PrimeFilter};
pub use rational::{ExtRational, PosRational};
pub use spec::{GeneratorFamily, Metadata, MonoidSpec, SymbolicFamily};
pub use valuation::{padic_val, Valuation};
