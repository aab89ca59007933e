//! Finitely generated truncations and their structure.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::rational::{ExtRational, PosRational};
use crate::search::Grid;
use crate::spec::{GeneratorFamily, MonoidSpec};

/// Where a truncation came from.
#[derive(Clone, Debug)]
pub enum Origin {
    Generators,
    Spec { spec: Arc<MonoidSpec>, depth: usize },
}

/// A finitely generated Puiseux monoid given by its atoms.
///
/// `scaled_gens[i] = atoms[i] * denom_lcm`, an exact integer.
#[derive(Clone, Debug)]
pub struct TruncatedMonoid {
    atoms: Vec<PosRational>,
    denom_lcm: BigUint,
    scaled_gens: Vec<BigUint>,
    origin: Origin,
    grid: Arc<Grid>,
}

impl PartialEq for TruncatedMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl TruncatedMonoid {
    /// The monoid generated by `gens`; redundant generators are dropped.
    pub fn from_generators(gens: &[PosRational]) -> Result<Self> {
        if gens.iter().any(PosRational::is_zero) {
            return Err(Error::Semantic("generators must be positive".into()));
        }
        Ok(Self::from_atoms_unchecked(atoms_of(gens), Origin::Generators))
    }

    fn from_atoms_unchecked(atoms: Vec<PosRational>, origin: Origin) -> Self {
        let denom_lcm = atoms.iter().fold(BigUint::one(), |acc, a| acc.lcm(a.denom()));
        let scaled_gens = atoms.iter().map(|a| a.numer() * (&denom_lcm / a.denom())).collect();
        let grid = Arc::new(Grid::new(&atoms));
        TruncatedMonoid { atoms, denom_lcm, scaled_gens, origin, grid }
    }

    /// The submonoid generated by the atoms satisfying `keep`. Atoms of a
    /// monoid stay atoms in any submonoid containing them.
    pub fn restrict(&self, mut keep: impl FnMut(&PosRational) -> bool) -> Self {
        let atoms = self.atoms.iter().filter(|a| keep(a)).cloned().collect();
        Self::from_atoms_unchecked(atoms, self.origin.clone())
    }

    /// Sorted ascending, pairwise distinct.
    pub fn atoms(&self) -> &[PosRational] {
        &self.atoms
    }

    pub fn denom_lcm(&self) -> &BigUint {
        &self.denom_lcm
    }

    pub fn scaled_gens(&self) -> &[BigUint] {
        &self.scaled_gens
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn min_atom(&self) -> Option<&PosRational> {
        self.atoms.first()
    }

    pub fn max_atom(&self) -> Option<&PosRational> {
        self.atoms.last()
    }

    pub fn is_atom(&self, x: &PosRational) -> bool {
        self.atoms.binary_search(x).is_ok()
    }

    pub(crate) fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Membership of `x`.
    pub fn contains(&self, x: &PosRational) -> bool {
        self.grid.contains(x)
    }

    /// Every element `<= bound`, ascending, each once.
    pub fn elements_up_to(&self, bound: &PosRational) -> Vec<PosRational> {
        let mut out = Vec::new();
        self.grid
            .profile(bound, u64::MAX, &mut |v, _, _| {
                out.push(v);
                ControlFlow::Continue(())
            })
            .expect("uncapped");
        out
    }
}

/// The atoms among `gens`: generators that are not sums of smaller ones.
///
/// Any decomposition of `g` only uses elements below `g`, so scanning in
/// ascending order and testing against the atoms kept so far reaches the
/// fixed point in one pass.
pub fn atoms_of(gens: &[PosRational]) -> Vec<PosRational> {
    let sorted: BTreeSet<PosRational> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut kept: Vec<PosRational> = Vec::new();
    for g in sorted {
        if kept.is_empty() || !Grid::new(&kept).contains(&g) {
            kept.push(g);
        }
    }
    kept
}

/// Instantiates the first `depth` indices of every family and reduces to
/// atoms.
pub fn truncate(spec: &MonoidSpec, depth: usize) -> Result<TruncatedMonoid> {
    if depth == 0 {
        return Err(Error::Semantic("truncation depth must be at least 1".into()));
    }
    spec.validate()?;
    let mut gens = Vec::new();
    for family in &spec.families {
        match family {
            GeneratorFamily::Explicit(list) => gens.extend(list.iter().cloned()),
            GeneratorFamily::Symbolic(f) => gens.extend(f.instantiate(depth)?.into_iter().map(|(_, _, v)| v)),
        }
    }
    let atoms = atoms_of(&gens);
    if let Some(inf) = &spec.metadata.atom_inf {
        if let Some(bad) = atoms.iter().find(|a| *a < inf) {
            return Err(Error::Validation(format!("atom {bad} lies below the declared infimum {inf}")));
        }
    }
    if let Some(ExtRational::Finite(sup)) = &spec.metadata.atom_sup {
        if let Some(bad) = atoms.iter().find(|a| *a > sup) {
            return Err(Error::Validation(format!("atom {bad} exceeds the declared supremum {sup}")));
        }
    }
    Ok(TruncatedMonoid::from_atoms_unchecked(atoms, Origin::Spec { spec: Arc::new(spec.clone()), depth }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryReport {
    pub is_primary: bool,
    pub prime_of_atom: BTreeMap<PosRational, u64>,
    /// Why the check failed, when it did.
    pub reason: Option<String>,
}

/// Whether the atoms are `a_p / p` with distinct primes `p` not dividing
/// `a_p`.
pub fn is_primary(tm: &TruncatedMonoid) -> PrimaryReport {
    let fail =
        |reason: String| PrimaryReport { is_primary: false, prime_of_atom: BTreeMap::new(), reason: Some(reason) };
    let mut prime_of_atom = BTreeMap::new();
    let mut used = BTreeMap::new();
    for a in tm.atoms() {
        let Some(p) = a.denom().to_u64().filter(|&d| is_prime(d)) else {
            return fail(format!("denominator of {a} is not prime"));
        };
        if (a.numer() % p).to_u64() == Some(0) {
            return fail(format!("{p} divides the numerator of {a}"));
        }
        if let Some(other) = used.insert(p, a.clone()) {
            return fail(format!("{other} and {a} share the prime {p}"));
        }
        prime_of_atom.insert(a.clone(), p);
    }
    PrimaryReport { is_primary: true, prime_of_atom, reason: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stability {
    Stable,
    Unstable,
}

/// Numerators shared by infinitely many atoms of the full monoid: the
/// values of constant numerator expressions on unbounded families.
pub(crate) fn stable_numerators(spec: &MonoidSpec) -> Result<BTreeSet<BigUint>> {
    let mut out = BTreeSet::new();
    for (i, family) in spec.families.iter().enumerate() {
        let GeneratorFamily::Symbolic(f) = family else { continue };
        let constant = f.numerator.is_constant();
        if f.declared_stable && !constant {
            return Err(Error::Validation(format!(
                "family {i} is declared stable but its numerator '{}' is not constant",
                f.numerator
            )));
        }
        if f.declared_stable && !f.is_unbounded() {
            return Err(Error::Validation(format!("family {i} is declared stable but its index range is bounded")));
        }
        if constant && f.is_unbounded() {
            let c = f.numerator.eval(0, 0)?;
            if c > 0 {
                out.insert(BigUint::from(c as u128));
            }
        }
    }
    Ok(out)
}

/// Stability of every atom of the depth-`depth` truncation, decided from
/// the symbolic description rather than the finite snapshot.
pub fn classify_stability(spec: &MonoidSpec, depth: usize) -> Result<BTreeMap<PosRational, Stability>> {
    let stable = stable_numerators(spec)?;
    let tm = truncate(spec, depth)?;
    Ok(tm
        .atoms()
        .iter()
        .map(|a| {
            let s = if stable.contains(a.numer()) { Stability::Stable } else { Stability::Unstable };
            (a.clone(), s)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::PrimeFilter;
    use crate::spec::{Metadata, SymbolicFamily};
    use alloc::vec;

    fn q(s: &str) -> PosRational {
        s.parse().unwrap()
    }

    fn qs(list: &[&str]) -> Vec<PosRational> {
        list.iter().map(|s| q(s)).collect()
    }

    fn symbolic(expr: &str, filter: PrimeFilter, start: u64) -> MonoidSpec {
        MonoidSpec::new(
            vec![GeneratorFamily::Symbolic(SymbolicFamily::new(expr, filter, start).unwrap())],
            Metadata::default(),
        )
        .unwrap()
    }

    #[test]
    fn truncate_examples() {
        let m1 = symbolic("n", PrimeFilter::All, 1);
        assert_eq!(truncate(&m1, 3).unwrap().atoms(), qs(&["1/2", "3/5", "2/3"]).as_slice());
        let bfplot = MonoidSpec::new(
            vec![
                GeneratorFamily::Explicit(qs(&["1/2"])),
                GeneratorFamily::Symbolic(SymbolicFamily::new("p+1", PrimeFilter::All, 2).unwrap()),
            ],
            Metadata::default(),
        )
        .unwrap();
        assert_eq!(truncate(&bfplot, 2).unwrap().atoms(), qs(&["1/2", "6/5", "4/3"]).as_slice());
        let explicit = MonoidSpec::explicit(qs(&["1/2", "1/3", "5/6"])).unwrap();
        let tm = truncate(&explicit, 1).unwrap();
        assert_eq!(tm.atoms(), qs(&["1/3", "1/2"]).as_slice());
        assert_eq!(tm.denom_lcm(), &BigUint::from(6u8));
        assert_eq!(tm.scaled_gens(), &[BigUint::from(2u8), BigUint::from(3u8)]);
        assert!(truncate(&explicit, 0).is_err());
    }

    #[test]
    fn removal_cascades() {
        // 1 = 1/2 + 1/2 and 3/2 = 1 + 1/2 are both redundant
        assert_eq!(atoms_of(&qs(&["3/2", "1", "1/2"])), qs(&["1/2"]));
        assert_eq!(atoms_of(&qs(&["1/2"])), qs(&["1/2"]));
        assert_eq!(atoms_of(&qs(&["1/2", "1/3", "5/6"])), qs(&["1/3", "1/2"]));
    }

    #[test]
    fn unstablenotbf_first_rows() {
        // n/p_n, (n+1)/p_n with p_n = 5, 11, 17: 2/5 = 1/5 + 1/5 is reducible
        let gens = qs(&["1/5", "2/5", "2/11", "3/11", "3/17", "4/17"]);
        assert_eq!(atoms_of(&gens), qs(&["3/17", "2/11", "1/5", "4/17", "3/11"]));
        // from n = 2 on every displayed generator is an atom
        let gens = qs(&["2/11", "3/11", "3/17", "4/17", "4/29", "5/29"]);
        assert_eq!(atoms_of(&gens).len(), 6);
    }

    #[test]
    fn membership() {
        let tm = TruncatedMonoid::from_generators(&qs(&["1/2", "1/3"])).unwrap();
        assert!(tm.contains(&q("7/6")));
        assert!(!tm.contains(&q("1/6")));
        assert!(tm.contains(&PosRational::zero()));
        assert!(!tm.contains(&q("1/5")));
    }

    #[test]
    fn elements_examples() {
        let tm = TruncatedMonoid::from_generators(&qs(&["1/2", "1/3"])).unwrap();
        assert_eq!(tm.elements_up_to(&q("1")), qs(&["0", "1/3", "1/2", "2/3", "5/6", "1"]));
        assert_eq!(tm.elements_up_to(&q("1/4")), qs(&["0"]));
        let half = TruncatedMonoid::from_generators(&qs(&["1/2"])).unwrap();
        assert_eq!(half.elements_up_to(&q("2")), qs(&["0", "1/2", "1", "3/2", "2"]));
    }

    #[test]
    fn primary_checks() {
        let m1 = truncate(&symbolic("n", PrimeFilter::All, 1), 6).unwrap();
        let report = is_primary(&m1);
        assert!(report.is_primary);
        assert_eq!(report.prime_of_atom[&q("5/11")], 11);
        let two_per_prime = MonoidSpec::new(
            vec![
                GeneratorFamily::Symbolic(SymbolicFamily::new("p//2", PrimeFilter::Odd, 1).unwrap()),
                GeneratorFamily::Symbolic(SymbolicFamily::new("p - p//2", PrimeFilter::Odd, 1).unwrap()),
            ],
            Metadata::default(),
        )
        .unwrap();
        assert!(!is_primary(&truncate(&two_per_prime, 3).unwrap()).is_primary);
        let quarter = TruncatedMonoid::from_generators(&qs(&["1/2", "1/4"])).unwrap();
        assert!(!is_primary(&quarter).is_primary);
        let integer = TruncatedMonoid::from_generators(&qs(&["3"])).unwrap();
        assert!(!is_primary(&integer).is_primary);
    }

    #[test]
    fn stability_is_symbolic() {
        let stable = MonoidSpec::new(
            vec![GeneratorFamily::Symbolic(SymbolicFamily::new("30", PrimeFilter::All, 13).unwrap())],
            Metadata::default(),
        )
        .unwrap();
        let c = classify_stability(&stable, 4).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.values().all(|s| *s == Stability::Stable));

        let m1 = symbolic("n", PrimeFilter::All, 1);
        assert!(classify_stability(&m1, 5).unwrap().values().all(|s| *s == Stability::Unstable));

        let explicit = MonoidSpec::explicit(qs(&["1/2"])).unwrap();
        assert_eq!(classify_stability(&explicit, 1).unwrap()[&q("1/2")], Stability::Unstable);

        let bounded = MonoidSpec::new(
            vec![GeneratorFamily::Symbolic(SymbolicFamily::new("7", PrimeFilter::Min(11), 1).unwrap().ending_at(3))],
            Metadata::default(),
        )
        .unwrap();
        assert!(classify_stability(&bounded, 5).unwrap().values().all(|s| *s == Stability::Unstable));
    }

    #[test]
    fn bogus_stability_declarations() {
        let f = SymbolicFamily::new("n", PrimeFilter::All, 1).unwrap().stable();
        let spec = MonoidSpec::new(vec![GeneratorFamily::Symbolic(f)], Metadata::default()).unwrap();
        assert!(matches!(classify_stability(&spec, 3), Err(Error::Validation(_))));
        let f = SymbolicFamily::new("5", PrimeFilter::Min(7), 1).unwrap().ending_at(4).stable();
        let spec = MonoidSpec::new(vec![GeneratorFamily::Symbolic(f)], Metadata::default()).unwrap();
        assert!(matches!(classify_stability(&spec, 3), Err(Error::Validation(_))));
    }

    #[test]
    fn metadata_bounds_checked() {
        let mut spec = symbolic("n", PrimeFilter::All, 1);
        spec.metadata.atom_sup = Some(ExtRational::Finite(q("1/2")));
        assert!(matches!(truncate(&spec, 3), Err(Error::Validation(_))));
        spec.metadata.atom_sup = Some(ExtRational::Finite(q("2/3")));
        spec.metadata.atom_inf = Some(q("1/2"));
        assert!(truncate(&spec, 4).is_ok());
        assert!(matches!(truncate(&spec, 5), Err(Error::Validation(_))));
    }
}
