use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::factor::for_each_length_profile;
use crate::monoid::TruncatedMonoid;
use crate::rational::{ExtRational, PosRational};
use crate::spec::MonoidSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElasticityMode {
    /// Computed from the atoms of a finite truncation.
    TruncatedExact,
    /// Computed from declared metadata of the full monoid.
    Symbolic,
}

impl fmt::Display for ElasticityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElasticityMode::TruncatedExact => "truncated-exact",
            ElasticityMode::Symbolic => "symbolic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Acceptance {
    Accepted,
    NotAccepted,
    Unknown,
    /// The elasticity is infinite, so acceptance is not defined.
    Inapplicable,
}

impl fmt::Display for Acceptance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Acceptance::Accepted => "true",
            Acceptance::NotAccepted => "false",
            Acceptance::Unknown => "unknown",
            Acceptance::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElasticityReport {
    pub mode: ElasticityMode,
    pub value: ExtRational,
    pub accepted: Acceptance,
    pub witness_rule: String,
    /// Metadata keys the answer relied on (empty in truncated mode).
    pub metadata_used: Vec<&'static str>,
}

fn witness_rule_for(min: &PosRational, max: &PosRational) -> Result<String> {
    let step = min.common_multiple(max)?;
    Ok(format!("integer multiples of {step}, the common multiples of {min} and {max}"))
}

/// `rho(M)`.
///
/// In truncated mode this is `max A / min A` over the truncation's atoms.
/// In symbolic mode it is infinite when zero is a declared limit point and
/// `sup A / inf A` from the declared bounds otherwise.
pub fn monoid_elasticity(
    spec: Option<&MonoidSpec>,
    tm: Option<&TruncatedMonoid>,
    mode: ElasticityMode,
) -> Result<ElasticityReport> {
    match mode {
        ElasticityMode::TruncatedExact => {
            let tm = tm.ok_or(Error::InsufficientMetadata("truncated mode needs a truncation"))?;
            let (Some(min), Some(max)) = (tm.min_atom(), tm.max_atom()) else {
                return Err(Error::Semantic("the truncation has no atoms".into()));
            };
            Ok(ElasticityReport {
                mode,
                value: ExtRational::Finite(max.checked_div(min).expect("atoms are positive")),
                accepted: Acceptance::Accepted,
                witness_rule: witness_rule_for(min, max)?,
                metadata_used: Vec::new(),
            })
        }
        ElasticityMode::Symbolic => {
            let spec = spec.ok_or(Error::InsufficientMetadata("symbolic mode needs a spec"))?;
            let meta = &spec.metadata;
            let zero_limit =
                meta.zero_limit_point.ok_or(Error::InsufficientMetadata("zero_limit_point is not declared"))?;
            if zero_limit {
                return Ok(ElasticityReport {
                    mode,
                    value: ExtRational::Infinite,
                    accepted: Acceptance::Inapplicable,
                    witness_rule: "n(a_k) * n(a_1) for atoms a_k decreasing to 0".into(),
                    metadata_used: vec!["zero_limit_point"],
                });
            }
            let inf = meta.atom_inf.as_ref().ok_or(Error::InsufficientMetadata("atom_inf is not declared"))?;
            let sup = meta.atom_sup.as_ref().ok_or(Error::InsufficientMetadata("atom_sup is not declared"))?;
            if inf.is_zero() {
                return Err(Error::Validation("atom_inf = 0 contradicts zero_limit_point = false".into()));
            }
            let mut used = vec!["zero_limit_point", "atom_inf", "atom_sup"];
            let value = match sup {
                ExtRational::Infinite => ExtRational::Infinite,
                ExtRational::Finite(sup) => ExtRational::Finite(sup.checked_div(inf).expect("inf > 0")),
            };
            let accepted = is_accepted(spec);
            if matches!(accepted, Acceptance::Accepted | Acceptance::NotAccepted) && !spec.is_finite() {
                used.extend(["inf_attained", "sup_attained"]);
            }
            let witness_rule = match (&accepted, sup) {
                (Acceptance::Accepted, ExtRational::Finite(sup)) => witness_rule_for(inf, sup)?,
                (_, ExtRational::Infinite) => "n(b_k) * n(c_k) for atoms b_k -> inf A and c_k -> infinity".into(),
                _ => format!("not attained; approached by n(b_k) * n(c_k) for atoms b_k -> {inf} and c_k -> {sup}"),
            };
            Ok(ElasticityReport { mode, value, accepted, witness_rule, metadata_used: used })
        }
    }
}

/// Whether `rho(M)` is attained, i.e. `A(M)` has both a maximum and a
/// minimum.
pub fn is_accepted(spec: &MonoidSpec) -> Acceptance {
    if spec.is_finite() {
        return Acceptance::Accepted;
    }
    let meta = &spec.metadata;
    match meta.zero_limit_point {
        Some(true) => return Acceptance::Inapplicable,
        None => return Acceptance::Unknown,
        Some(false) => {}
    }
    if meta.atom_sup == Some(ExtRational::Infinite) {
        return Acceptance::Inapplicable;
    }
    match (meta.inf_attained, meta.sup_attained) {
        (Some(true), Some(true)) => Acceptance::Accepted,
        (Some(false), _) | (_, Some(false)) => Acceptance::NotAccepted,
        _ => Acceptance::Unknown,
    }
}

fn truncated_rho(tm: &TruncatedMonoid) -> Result<(PosRational, PosRational, PosRational)> {
    let (Some(min), Some(max)) = (tm.min_atom(), tm.max_atom()) else {
        return Err(Error::Semantic("the truncation has no atoms".into()));
    };
    Ok((max.checked_div(min).expect("positive"), min.clone(), max.clone()))
}

/// Nonzero elements `<= bound` whose elasticity equals `max A / min A`.
///
/// Each witness is checked to be a common integer multiple of the smallest
/// and largest atom.
pub fn elasticity_witnesses(tm: &TruncatedMonoid, bound: &PosRational, cap: u64) -> Result<Vec<PosRational>> {
    let (rho, min, max) = truncated_rho(tm)?;
    let mut out = Vec::new();
    for_each_length_profile(tm, bound, cap, |e| {
        if e.elasticity().as_ref() == Some(&rho) {
            out.push(e.element);
        }
        ControlFlow::Continue(())
    })?;
    if let Some(bad) = out.iter().find(|x| !x.is_multiple_of(&min) || !x.is_multiple_of(&max)) {
        return Err(Error::Invariant(format!("witness {bad} is not a multiple of both {min} and {max}")));
    }
    Ok(out)
}

/// `{rho(x) : 0 < x <= bound}`.
pub fn elasticity_set(tm: &TruncatedMonoid, bound: &PosRational, cap: u64) -> Result<BTreeSet<PosRational>> {
    let mut out = BTreeSet::new();
    for_each_length_profile(tm, bound, cap, |e| {
        if let Some(r) = e.elasticity() {
            out.insert(r);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::DEFAULT_CAP;
    use crate::primes::PrimeFilter;
    use crate::spec::{GeneratorFamily, Metadata, SymbolicFamily};

    fn q(s: &str) -> PosRational {
        s.parse().unwrap()
    }

    fn tm(gens: &[&str]) -> TruncatedMonoid {
        TruncatedMonoid::from_generators(&gens.iter().map(|s| q(s)).collect::<Vec<_>>()).unwrap()
    }

    fn qs(list: &[&str]) -> Vec<PosRational> {
        list.iter().map(|s| q(s)).collect()
    }

    fn bfplot(meta: Metadata) -> MonoidSpec {
        MonoidSpec::new(
            vec![
                GeneratorFamily::Explicit(vec![q("1/2")]),
                GeneratorFamily::Symbolic(SymbolicFamily::new("p+1", PrimeFilter::All, 2).unwrap()),
            ],
            meta,
        )
        .unwrap()
    }

    #[test]
    fn truncated_mode() {
        let r = monoid_elasticity(None, Some(&tm(&["1/2", "1/3"])), ElasticityMode::TruncatedExact).unwrap();
        assert_eq!(r.value, ExtRational::Finite(q("3/2")));
        assert_eq!(r.accepted, Acceptance::Accepted);
        assert!(r.metadata_used.is_empty());
        assert!(monoid_elasticity(None, None, ElasticityMode::TruncatedExact).is_err());
    }

    #[test]
    fn symbolic_mode() {
        let m1 = MonoidSpec::new(
            vec![GeneratorFamily::Symbolic(SymbolicFamily::new("n", PrimeFilter::All, 1).unwrap())],
            Metadata { zero_limit_point: Some(true), ..Metadata::default() },
        )
        .unwrap();
        let r = monoid_elasticity(Some(&m1), None, ElasticityMode::Symbolic).unwrap();
        assert_eq!(r.value, ExtRational::Infinite);
        assert_eq!(r.metadata_used, ["zero_limit_point"]);

        let spec = bfplot(Metadata {
            zero_limit_point: Some(false),
            atom_inf: Some(q("1/2")),
            inf_attained: Some(true),
            atom_sup: Some(ExtRational::Finite(q("4/3"))),
            sup_attained: Some(true),
        });
        let r = monoid_elasticity(Some(&spec), None, ElasticityMode::Symbolic).unwrap();
        assert_eq!(r.value, ExtRational::Finite(q("8/3")));
        assert_eq!(r.accepted, Acceptance::Accepted);
        assert!(r.witness_rule.contains("multiples of 4"), "{}", r.witness_rule);

        let bare = bfplot(Metadata::default());
        assert!(matches!(
            monoid_elasticity(Some(&bare), None, ElasticityMode::Symbolic),
            Err(Error::InsufficientMetadata(_))
        ));
    }

    #[test]
    fn acceptance() {
        let attained = bfplot(Metadata {
            zero_limit_point: Some(false),
            atom_inf: Some(q("1/2")),
            inf_attained: Some(true),
            atom_sup: Some(ExtRational::Finite(q("4/3"))),
            sup_attained: Some(true),
        });
        assert_eq!(is_accepted(&attained), Acceptance::Accepted);
        let decreasing = MonoidSpec::new(
            vec![GeneratorFamily::Symbolic(SymbolicFamily::new("p+1", PrimeFilter::All, 2).unwrap())],
            Metadata {
                zero_limit_point: Some(false),
                atom_inf: Some(q("1")),
                inf_attained: Some(false),
                atom_sup: Some(ExtRational::Finite(q("4/3"))),
                sup_attained: Some(true),
            },
        )
        .unwrap();
        assert_eq!(is_accepted(&decreasing), Acceptance::NotAccepted);
        assert_eq!(is_accepted(&MonoidSpec::explicit(qs(&["1/2", "5/7"])).unwrap()), Acceptance::Accepted);
        assert_eq!(is_accepted(&bfplot(Metadata::default())), Acceptance::Unknown);
    }

    #[test]
    fn decreasing_family_never_attains_its_infimum() {
        // (p_n + 1)/p_n over the first 100 primes from 3 on strictly decreases
        let f = SymbolicFamily::new("p+1", PrimeFilter::All, 2).unwrap();
        let vals: Vec<PosRational> = f.instantiate(100).unwrap().into_iter().map(|(_, _, v)| v).collect();
        assert!(vals.windows(2).all(|w| w[0] > w[1]));
        assert!(vals.iter().all(|v| *v > PosRational::one()));
    }

    #[test]
    fn witnesses() {
        let m = tm(&["1/2", "4/3", "6/5", "8/7"]);
        assert_eq!(elasticity_witnesses(&m, &q("13"), DEFAULT_CAP).unwrap(), qs(&["4", "8", "12"]));
        assert_eq!(elasticity_witnesses(&tm(&["1/2", "1/3"]), &q("2"), DEFAULT_CAP).unwrap(), qs(&["1", "2"]));
        assert_eq!(elasticity_witnesses(&tm(&["1/2"]), &q("2"), DEFAULT_CAP).unwrap(), qs(&["1/2", "1", "3/2", "2"]));
    }

    #[test]
    fn elasticity_sets() {
        let set = elasticity_set(&tm(&["1/2", "1/3"]), &q("2"), DEFAULT_CAP).unwrap();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), qs(&["1", "5/4", "4/3", "3/2"]));
        let set = elasticity_set(&tm(&["1/2"]), &q("5"), DEFAULT_CAP).unwrap();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), qs(&["1"]));
    }
}
