use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::factor::{factorization_count, for_each_length_profile, length_set, LengthSet};
use crate::monoid::{is_primary, stable_numerators, truncate, TruncatedMonoid};
use crate::rational::PosRational;
use crate::spec::MonoidSpec;

/// `x = stable_part + unstable_part`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub stable_part: PosRational,
    pub unstable_part: PosRational,
    /// Exactly one splitting had a uniquely factorable stable part.
    pub unique: bool,
    /// Number of splittings with `s` stable and `u` unstable that were
    /// found, whether or not `s` factors uniquely.
    pub splittings: usize,
}

fn split_atoms(spec: &MonoidSpec, tm: &TruncatedMonoid) -> Result<(TruncatedMonoid, TruncatedMonoid)> {
    let stable = stable_numerators(spec)?;
    Ok((tm.restrict(|a| stable.contains(a.numer())), tm.restrict(|a| !stable.contains(a.numer()))))
}

fn require_primary(tm: &TruncatedMonoid) -> Result<BTreeMap<PosRational, u64>> {
    let report = is_primary(tm);
    if !report.is_primary {
        return Err(Error::Validation(format!("a primary monoid is required: {}", report.reason.unwrap_or_default())));
    }
    Ok(report.prime_of_atom)
}

/// Splits `x` into a stable part `s` and an unstable part `u`, preferring
/// the splitting whose `s` has a unique factorization.
///
/// Every stable element `s <= x` is tried. When exactly one splitting has
/// a uniquely factorable `s` it is returned with `unique = true`; several
/// such splittings, or none, are reported with `unique = false`.
pub fn decompose_stable_unstable(
    spec: &MonoidSpec,
    tm: &TruncatedMonoid,
    x: &PosRational,
    cap: u64,
) -> Result<Decomposition> {
    require_primary(tm)?;
    if !tm.contains(x) {
        return Err(Error::NotAMember(x.clone()));
    }
    let (stable, unstable) = split_atoms(spec, tm)?;
    let mut splittings = Vec::new();
    let mut failure = None;
    for_each_length_profile(&stable, x, cap, |e| {
        let u = x.checked_sub(&e.element).expect("s <= x");
        if unstable.contains(&u) {
            match factorization_count(tm, &e.element, cap) {
                Ok(n) => splittings.push((e.element, u, n == 1)),
                Err(err) => {
                    failure = Some(err);
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(err) = failure {
        return Err(err);
    }
    let count = splittings.len();
    let factorial: Vec<_> = splittings.iter().filter(|s| s.2).collect();
    let (s, u, unique) = match factorial.as_slice() {
        [only] => (only.0.clone(), only.1.clone(), true),
        [first, ..] => (first.0.clone(), first.1.clone(), false),
        [] => match splittings.first() {
            Some(first) => (first.0.clone(), first.1.clone(), false),
            None => return Err(Error::NotDecomposable(x.clone())),
        },
    };
    Ok(Decomposition { stable_part: s, unstable_part: u, unique, splittings: count })
}

/// Outcome of comparing `L(x + a)` with `L(x) + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftReport {
    Inapplicable(String),
    Compared { base: LengthSet, shifted: LengthSet, passed: bool },
}

impl ShiftReport {
    pub fn passed(&self) -> Option<bool> {
        match self {
            ShiftReport::Compared { passed, .. } => Some(*passed),
            ShiftReport::Inapplicable(_) => None,
        }
    }
}

/// Checks `L(x + a) = L(x) + 1` for an atom `a = q/p` of a primary
/// truncation with `p` not dividing `d(x)`.
pub fn shifted_lengths(tm: &TruncatedMonoid, x: &PosRational, a: &PosRational, cap: u64) -> Result<ShiftReport> {
    let primary = is_primary(tm);
    if !primary.is_primary {
        return Ok(ShiftReport::Inapplicable(format!("monoid is not primary: {}", primary.reason.unwrap_or_default())));
    }
    let Some(&p) = primary.prime_of_atom.get(a) else {
        return Ok(ShiftReport::Inapplicable(format!("{a} is not an atom")));
    };
    if (x.denom() % p).is_zero() {
        return Ok(ShiftReport::Inapplicable(format!("{p} divides the denominator of {x}")));
    }
    let base = length_set(tm, x, cap)?;
    let shifted = length_set(tm, &(x + a), cap)?;
    let passed = shifted == base.shifted(1);
    Ok(ShiftReport::Compared { base, shifted, passed })
}

/// `{(L_i + k) / (l_i + k) : i, 1 <= k <= k_max}` for caller-supplied
/// `(min L(u_i), max L(u_i))` pairs.
pub fn predicted_r_finite_unstable(base_lengths: &[(u64, u64)], k_max: u64) -> Result<BTreeSet<PosRational>> {
    if k_max == 0 {
        return Err(Error::Validation("k_max must be at least 1".into()));
    }
    let mut out = BTreeSet::new();
    for &(lo, hi) in base_lengths {
        if lo > hi {
            return Err(Error::Validation(format!("min length {lo} exceeds max length {hi}")));
        }
        for k in 1..=k_max {
            out.insert(PosRational::from_u64s(hi + k, lo + k)?);
        }
    }
    Ok(out)
}

/// Unstable elements `<= bound` with no nonzero stable divisor, with
/// their min and max factorization lengths.
///
/// Any nonzero stable element is divisible by a stable atom, so `u`
/// qualifies when `u - s` lies outside the monoid for every stable atom
/// `s <= u`.
pub fn absolutely_unstable_elements(
    spec: &MonoidSpec,
    tm: &TruncatedMonoid,
    bound: &PosRational,
    cap: u64,
) -> Result<Vec<(PosRational, u64, u64)>> {
    let (stable, unstable) = split_atoms(spec, tm)?;
    let mut out = Vec::new();
    for_each_length_profile(&unstable, bound, cap, |e| {
        if e.element.is_zero() {
            return ControlFlow::Continue(());
        }
        let divisible = stable.atoms().iter().any(|s| e.element.checked_sub(s).is_some_and(|rest| tm.contains(&rest)));
        if !divisible {
            out.push((e.element, e.min, e.max));
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationStatus {
    Ff,
    /// Bounded factorization; finite factorization not decided.
    Bf,
    BfNotFf,
    NotBf,
    Unknown,
}

impl fmt::Display for FactorizationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorizationStatus::Ff => "FF",
            FactorizationStatus::Bf => "BF",
            FactorizationStatus::BfNotFf => "BF-not-FF",
            FactorizationStatus::NotBf => "not-BF",
            FactorizationStatus::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatusReport {
    pub status: FactorizationStatus,
    pub reason: String,
}

/// Depths at which an FF-failure witness must show strictly more
/// factorizations.
const WITNESS_DEPTHS: [usize; 3] = [2, 4, 8];

/// FF/BF classification from the symbolic description.
///
/// Finitely generated monoids are FF. Primary monoids are FF exactly when
/// no atom is stable and not BF otherwise. Other monoids are BF when zero
/// is declared not to be a limit point, and BF-not-FF when `witness` has
/// strictly more factorizations at each of the truncation depths 2, 4, 8.
/// Primality of a symbolic spec is judged on its depth-`probe_depth`
/// truncation.
pub fn bf_ff_status(
    spec: &MonoidSpec,
    witness: Option<&PosRational>,
    probe_depth: usize,
    cap: u64,
) -> Result<StatusReport> {
    let report = |status, reason: &str| Ok(StatusReport { status, reason: reason.into() });
    if spec.is_finite() {
        return report(FactorizationStatus::Ff, "finitely generated");
    }
    let stable = stable_numerators(spec)?;
    let probe = truncate(spec, probe_depth)?;
    if is_primary(&probe).is_primary {
        return if stable.is_empty() {
            report(FactorizationStatus::Ff, "primary with every atom unstable")
        } else {
            report(FactorizationStatus::NotBf, "primary with a stable atom")
        };
    }
    if spec.metadata.zero_limit_point != Some(false) {
        return report(FactorizationStatus::Unknown, "not primary and 0 is not declared to be a non-limit point");
    }
    let Some(w) = witness else {
        return report(FactorizationStatus::Bf, "0 is not a limit point");
    };
    let mut counts = Vec::new();
    for depth in WITNESS_DEPTHS {
        let tm = truncate(spec, depth)?;
        counts.push(if tm.contains(w) { factorization_count(&tm, w, cap)? } else { 0 });
    }
    if counts.windows(2).all(|c| c[0] < c[1]) {
        Ok(StatusReport {
            status: FactorizationStatus::BfNotFf,
            reason: format!("0 is not a limit point; |Z({w})| grows as {counts:?} over depths {WITNESS_DEPTHS:?}"),
        })
    } else {
        Ok(StatusReport {
            status: FactorizationStatus::Bf,
            reason: format!("0 is not a limit point; witness {w} not confirmed ({counts:?})"),
        })
    }
}
