//! Factorizations, length sets and element elasticities.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::monoid::{is_primary, TruncatedMonoid};
use crate::rational::PosRational;

/// Default hard cap on `|Z(x)|` and on profiled elements.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// A formal sum of atoms, as atom -> positive multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factorization {
    multiplicities: BTreeMap<PosRational, u64>,
}

impl Factorization {
    /// Drops zero multiplicities.
    pub fn new(terms: impl IntoIterator<Item = (PosRational, u64)>) -> Self {
        let mut multiplicities = BTreeMap::new();
        for (atom, m) in terms {
            if m > 0 {
                *multiplicities.entry(atom).or_insert(0) += m;
            }
        }
        Factorization { multiplicities }
    }

    pub fn multiplicities(&self) -> &BTreeMap<PosRational, u64> {
        &self.multiplicities
    }

    pub fn multiplicity(&self, atom: &PosRational) -> u64 {
        self.multiplicities.get(atom).copied().unwrap_or(0)
    }

    /// `|z|`, the number of formal summands.
    pub fn len(&self) -> u64 {
        self.multiplicities.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    /// The element this formal sum evaluates to.
    pub fn value(&self) -> PosRational {
        self.multiplicities.iter().map(|(a, m)| a.mul_int(*m)).sum()
    }

    /// `"m x a/b"` terms in ascending atom order.
    pub fn terms(&self) -> Vec<String> {
        self.multiplicities.iter().map(|(a, m)| format!("{m} x {a}")).collect()
    }
}

/// Terms joined by `" + "`; the empty factorization prints as `0`.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms().iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(t)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LengthSet(BTreeSet<u64>);

impl LengthSet {
    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, l: u64) -> bool {
        self.0.contains(&l)
    }

    /// `{l + k : l in self}`.
    pub fn shifted(&self, k: u64) -> LengthSet {
        LengthSet(self.0.iter().map(|l| l + k).collect())
    }
}

impl FromIterator<u64> for LengthSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        LengthSet(iter.into_iter().collect())
    }
}

/// `{2, 3, 5}`.
impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// Runs `visit` on the multiplicity vector (in atom order) of every
/// factorization of `x`, failing once more than `cap` have been seen.
fn walk(tm: &TruncatedMonoid, x: &PosRational, cap: u64, mut visit: impl FnMut(&[u64])) -> Result<()> {
    if !tm.contains(x) {
        return Err(Error::NotAMember(x.clone()));
    }
    let mut count = 0u64;
    let mut over = false;
    tm.grid().for_each_factorization(x, &mut |m| {
        if count == cap {
            over = true;
            return ControlFlow::Break(());
        }
        count += 1;
        visit(m);
        ControlFlow::Continue(())
    })?;
    if over {
        return Err(Error::ResourceCap { limit: cap, during: "enumerating factorizations" });
    }
    Ok(())
}

/// The complete set `Z(x)`, ordered lexicographically by printed form.
pub fn factorizations(tm: &TruncatedMonoid, x: &PosRational, cap: u64) -> Result<Vec<Factorization>> {
    let mut out = Vec::new();
    walk(tm, x, cap, |m| {
        out.push(Factorization::new(tm.atoms().iter().cloned().zip(m.iter().copied())));
    })?;
    let mut keyed: Vec<(String, Factorization)> = out.into_iter().map(|z| (z.to_string(), z)).collect();
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, z)| z).collect())
}

/// Number of factorizations, without materializing them.
pub fn factorization_count(tm: &TruncatedMonoid, x: &PosRational, cap: u64) -> Result<u64> {
    let mut n = 0;
    walk(tm, x, cap, |_| n += 1)?;
    Ok(n)
}

/// `L(x)`; `L(0) = {0}`.
pub fn length_set(tm: &TruncatedMonoid, x: &PosRational, cap: u64) -> Result<LengthSet> {
    let mut lengths = BTreeSet::new();
    walk(tm, x, cap, |m| {
        lengths.insert(m.iter().sum());
    })?;
    Ok(LengthSet(lengths))
}

/// `max L(x) / min L(x)` for nonzero `x`.
pub fn element_elasticity(tm: &TruncatedMonoid, x: &PosRational, cap: u64) -> Result<PosRational> {
    if x.is_zero() {
        return Err(Error::ZeroRational);
    }
    let l = length_set(tm, x, cap)?;
    let (lo, hi) = (l.min().expect("members have a factorization"), l.max().expect("nonempty"));
    PosRational::from_u64s(hi, lo)
}

/// Shortest and longest factorization length of one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementLengths {
    pub element: PosRational,
    pub min: u64,
    pub max: u64,
}

impl ElementLengths {
    /// `None` at zero.
    pub fn elasticity(&self) -> Option<PosRational> {
        (self.min > 0).then(|| PosRational::from_u64s(self.max, self.min).expect("min > 0"))
    }
}

/// Streams min/max lengths of every element `<= bound` in ascending order,
/// by dynamic programming over the element grid rather than by
/// enumerating factorizations. Fails after `cap` elements; everything
/// streamed before the failure is exact.
pub fn for_each_length_profile(
    tm: &TruncatedMonoid,
    bound: &PosRational,
    cap: u64,
    mut visit: impl FnMut(ElementLengths) -> ControlFlow<()>,
) -> Result<()> {
    tm.grid().profile(bound, cap, &mut |element, min, max| visit(ElementLengths { element, min, max }))
}

pub fn length_profile(tm: &TruncatedMonoid, bound: &PosRational, cap: u64) -> Result<Vec<ElementLengths>> {
    let mut out = Vec::new();
    for_each_length_profile(tm, bound, cap, |e| {
        out.push(e);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEntry {
    pub atom: PosRational,
    pub prime: u64,
    pub multiplicity: u64,
    pub divides: bool,
}

/// Outcome of checking that `p | multiplicity` for each atom `a/p` used in
/// a factorization of an integer in a primary monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientCheck {
    Inapplicable(String),
    Checked { entries: Vec<CoefficientEntry>, passed: bool },
}

impl CoefficientCheck {
    pub fn passed(&self) -> Option<bool> {
        match self {
            CoefficientCheck::Checked { passed, .. } => Some(*passed),
            CoefficientCheck::Inapplicable(_) => None,
        }
    }
}

pub fn valuation_coefficient_check(tm: &TruncatedMonoid, x: &PosRational, z: &Factorization) -> CoefficientCheck {
    let primary = is_primary(tm);
    if !primary.is_primary {
        return CoefficientCheck::Inapplicable(format!(
            "monoid is not primary: {}",
            primary.reason.unwrap_or_default()
        ));
    }
    if !x.is_integer() {
        return CoefficientCheck::Inapplicable(format!("{x} is not an integer"));
    }
    if let Some(a) = z.multiplicities().keys().find(|a| !tm.is_atom(a)) {
        return CoefficientCheck::Inapplicable(format!("{a} is not an atom"));
    }
    if z.value() != *x {
        return CoefficientCheck::Inapplicable(format!("factorization sums to {}, not {x}", z.value()));
    }
    let entries: Vec<CoefficientEntry> = z
        .multiplicities()
        .iter()
        .map(|(a, &m)| {
            let p = primary.prime_of_atom[a];
            CoefficientEntry { atom: a.clone(), prime: p, multiplicity: m, divides: m % p == 0 }
        })
        .collect();
    let passed = entries.iter().all(|e| e.divides);
    CoefficientCheck::Checked { entries, passed }
}
