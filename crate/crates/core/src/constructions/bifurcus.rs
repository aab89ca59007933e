use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::factor::for_each_length_profile;
use crate::monoid::TruncatedMonoid;
use crate::primes::{is_prime, next_prime_from};
use crate::rational::PosRational;

/// The two atoms `reducible/2 -+ 1/prime` added for one reducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddedPair {
    pub reducible: PosRational,
    pub prime: u64,
    pub minus: PosRational,
    pub plus: PosRational,
}

impl AddedPair {
    pub fn new(reducible: PosRational, prime: u64) -> Result<Self> {
        let half = reducible.checked_div(&PosRational::integer(2)).expect("2 is nonzero");
        let shift = PosRational::from_u64s(1, prime)?;
        let minus = half
            .checked_sub(&shift)
            .filter(|m| !m.is_zero())
            .ok_or_else(|| Error::Validation(format!("{reducible}/2 - 1/{prime} is not positive")))?;
        let plus = &half + &shift;
        Ok(AddedPair { reducible, prime, minus, plus })
    }
}

/// Stages `M_0 ⊆ M_1 ⊆ ...` of the bifurcus construction, each truncated
/// to the reducibles found below `value_bound`.
#[derive(Clone, Debug)]
pub struct StagedMonoid {
    pub stages: Vec<TruncatedMonoid>,
    /// `added[j - 1]` lists the pairs introduced in stage `j`.
    pub added: Vec<Vec<AddedPair>>,
    pub value_bound: PosRational,
    pub warnings: Vec<String>,
}

fn base_generators() -> Vec<PosRational> {
    vec![PosRational::from_u64s(1, 2).expect("1/2"), PosRational::from_u64s(1, 3).expect("1/3")]
}

fn min_prime(stage: usize) -> u64 {
    let pow = u32::try_from(stage).ok().and_then(|s| 1u64.checked_shl(s)).unwrap_or(u64::MAX);
    pow.max(13)
}

/// Reducibles of `tm` up to `bound` whose shortest factorization has
/// length at least 3, ascending.
fn reducibles_without_length_two(tm: &TruncatedMonoid, bound: &PosRational, cap: u64) -> Result<Vec<PosRational>> {
    let mut out = Vec::new();
    for_each_length_profile(tm, bound, cap, |e| {
        if e.min > 2 {
            out.push(e.element);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn next_stage(prev: &TruncatedMonoid, pairs: &[AddedPair]) -> Result<TruncatedMonoid> {
    let mut gens = prev.atoms().to_vec();
    gens.extend(pairs.iter().flat_map(|p| [p.minus.clone(), p.plus.clone()]));
    TruncatedMonoid::from_generators(&gens)
}

/// Builds `num_stages` stages starting from `<1/2, 1/3>`. Stage `j`
/// assigns to the reducibles of stage `j - 1` below `value_bound` that
/// lack a length-2 factorization, in increasing order, the smallest
/// unused primes `>= max(13, 2^j)`.
pub fn bifurcus_build(num_stages: usize, value_bound: &PosRational, cap: u64) -> Result<StagedMonoid> {
    if num_stages == 0 {
        return Err(Error::Validation("at least one stage is required".into()));
    }
    let mut stages = vec![TruncatedMonoid::from_generators(&base_generators())?];
    let mut added = Vec::new();
    let mut warnings = Vec::new();
    let mut used = BTreeSet::new();
    for j in 1..=num_stages {
        let prev = stages.last().expect("stage 0 exists");
        let reducibles = reducibles_without_length_two(prev, value_bound, cap)?;
        if reducibles.is_empty() {
            warnings.push(format!("stage {j}: no reducible without a length-2 factorization up to {value_bound}"));
        }
        let mut pairs = Vec::with_capacity(reducibles.len());
        let mut lower = min_prime(j);
        for r in reducibles {
            let p = next_prime_from(lower, |p| !used.contains(&p)).ok_or(Error::Overflow("prime assignment"))?;
            used.insert(p);
            lower = p + 1;
            pairs.push(AddedPair::new(r, p)?);
        }
        let next = next_stage(prev, &pairs)?;
        stages.push(next);
        added.push(pairs);
    }
    Ok(StagedMonoid { stages, added, value_bound: value_bound.clone(), warnings })
}

impl StagedMonoid {
    /// Rebuilds the stages from recorded pairs, checking every recorded
    /// value and the prime constraints.
    pub fn from_records(value_bound: PosRational, added: Vec<Vec<AddedPair>>) -> Result<Self> {
        let mut stages = vec![TruncatedMonoid::from_generators(&base_generators())?];
        let mut used = BTreeSet::new();
        for (i, pairs) in added.iter().enumerate() {
            let j = i + 1;
            for pair in pairs {
                if !is_prime(pair.prime) || pair.prime < min_prime(j) || !used.insert(pair.prime) {
                    return Err(Error::Validation(format!(
                        "stage {j}: prime {} is not a fresh prime >= {}",
                        pair.prime,
                        min_prime(j)
                    )));
                }
                if AddedPair::new(pair.reducible.clone(), pair.prime)? != *pair {
                    return Err(Error::Validation(format!(
                        "stage {j}: atoms recorded for {} do not equal {0}/2 -+ 1/{}",
                        pair.reducible, pair.prime
                    )));
                }
                if !stages[i].contains(&pair.reducible) {
                    return Err(Error::Validation(format!(
                        "stage {j}: {} is not an element of the previous stage",
                        pair.reducible
                    )));
                }
            }
            let next = next_stage(&stages[i], pairs)?;
            stages.push(next);
        }
        Ok(StagedMonoid { stages, added, value_bound, warnings: Vec::new() })
    }

    pub fn final_stage(&self) -> &TruncatedMonoid {
        self.stages.last().expect("stage 0 always exists")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BifurcusReport {
    /// Smallest nonzero element of the final stage, if it is `<= bound`.
    pub min_nonzero: Option<PosRational>,
    pub min_is_one_third: bool,
    /// Recorded atoms of earlier stages that are no longer atoms.
    pub lost_atoms: Vec<PosRational>,
    /// `(stage, element)` reducibles of the previous stage with no
    /// length-2 factorization in `stage`.
    pub missing_length_two: Vec<(usize, PosRational)>,
    /// Number of reducibles checked for a length-2 factorization.
    pub reducibles_checked: usize,
}

impl BifurcusReport {
    pub fn passed(&self) -> bool {
        self.min_is_one_third && self.lost_atoms.is_empty() && self.missing_length_two.is_empty()
    }
}

fn has_length_two(tm: &TruncatedMonoid, x: &PosRational) -> bool {
    tm.atoms().iter().take_while(|a| a.mul_int(2) <= *x).any(|a| x.checked_sub(a).is_some_and(|rest| tm.is_atom(&rest)))
}

/// Checks, up to `bound`: the least nonzero element of the final stage is
/// 1/3; atoms of every stage are atoms of the final stage; every
/// reducible of stage `j - 1` has a length-2 factorization in stage `j`.
pub fn bifurcus_verify(sm: &StagedMonoid, bound: &PosRational, cap: u64) -> Result<BifurcusReport> {
    if bound > &sm.value_bound {
        return Err(Error::Validation(format!("bound {bound} exceeds the construction bound {}", sm.value_bound)));
    }
    let last = sm.final_stage();
    let min_nonzero = last.min_atom().filter(|a| *a <= bound).cloned();
    let third = PosRational::from_u64s(1, 3)?;
    let min_is_one_third = min_nonzero.as_ref() == Some(&third);

    let mut lost = BTreeSet::new();
    for stage in &sm.stages {
        for a in stage.atoms() {
            if !last.is_atom(a) {
                lost.insert(a.clone());
            }
        }
    }

    let mut missing = Vec::new();
    let mut checked = 0;
    for j in 1..sm.stages.len() {
        let (prev, cur) = (&sm.stages[j - 1], &sm.stages[j]);
        let mut reducibles = Vec::new();
        for_each_length_profile(prev, bound, cap, |e| {
            if e.min >= 2 {
                reducibles.push(e.element);
            }
            ControlFlow::Continue(())
        })?;
        for r in reducibles {
            checked += 1;
            if !has_length_two(cur, &r) {
                missing.push((j, r));
            }
        }
    }
    Ok(BifurcusReport {
        min_nonzero,
        min_is_one_third,
        lost_atoms: lost.into_iter().collect(),
        missing_length_two: missing,
        reducibles_checked: checked,
    })
}
