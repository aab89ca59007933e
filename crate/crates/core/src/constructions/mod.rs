//! Named example monoids and the iterative bifurcus construction.

mod bifurcus;
mod catalog;

pub use bifurcus::{bifurcus_build, bifurcus_verify, AddedPair, BifurcusReport, StagedMonoid};
pub use catalog::{catalog, unstablenotbf_primes, CatalogName};
