//! Library-level properties checked against naive oracles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use proptest::prelude::*;
use puiseux_core::{
    catalog, elasticity_set, elasticity_witnesses, element_elasticity, factorizations, length_profile, length_set,
    monoid_elasticity, truncate, valuation_coefficient_check, CatalogName, ElasticityMode, ExtRational,
    GeneratorFamily, Metadata, MonoidSpec, PosRational, PrimeFilter, SymbolicFamily, TruncatedMonoid, DEFAULT_CAP,
};

fn q(s: &str) -> PosRational {
    s.parse().unwrap()
}

fn ratio(n: u64, d: u64) -> PosRational {
    PosRational::from_u64s(n, d).unwrap()
}

/// Every multiplicity vector over `atoms` summing to `x`, by plain
/// recursion over rationals.
fn naive_factorizations(atoms: &[PosRational], x: &PosRational) -> BTreeSet<Vec<u64>> {
    fn go(atoms: &[PosRational], rest: &PosRational, acc: &mut Vec<u64>, out: &mut BTreeSet<Vec<u64>>) {
        let Some((first, tail)) = atoms.split_first() else {
            if rest.is_zero() {
                out.insert(acc.clone());
            }
            return;
        };
        let mut m = 0u64;
        let mut left = rest.clone();
        loop {
            acc.push(m);
            go(tail, &left, acc, out);
            acc.pop();
            match left.checked_sub(first) {
                Some(next) => left = next,
                None => break,
            }
            m += 1;
        }
    }
    let mut out = BTreeSet::new();
    go(atoms, x, &mut Vec::new(), &mut out);
    out
}

/// Elements `<= bound` by closing `{0}` under adding generators.
fn naive_elements(gens: &[PosRational], bound: &PosRational) -> BTreeSet<PosRational> {
    let mut seen = BTreeSet::from([PosRational::zero()]);
    let mut frontier = vec![PosRational::zero()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = &x + g;
            if &y <= bound && seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Generators that are not sums of two nonzero elements.
fn naive_atoms(gens: &[PosRational]) -> Vec<PosRational> {
    let max = gens.iter().max().unwrap().clone();
    let elems = naive_elements(gens, &max);
    let mut out: Vec<PosRational> = gens
        .iter()
        .filter(|g| {
            !elems.iter().any(|e| !e.is_zero() && e < g && g.checked_sub(e).is_some_and(|r| elems.contains(&r)))
        })
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

fn small_gens() -> impl Strategy<Value = Vec<PosRational>> {
    prop::collection::vec((1u64..=12, 1u64..=12), 2..=4).prop_map(|v| v.into_iter().map(|(n, d)| ratio(n, d)).collect())
}

fn monoid(gens: &[PosRational]) -> TruncatedMonoid {
    TruncatedMonoid::from_generators(gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn atoms_match_naive(gens in small_gens()) {
        prop_assert_eq!(monoid(&gens).atoms().to_vec(), naive_atoms(&gens));
    }

    #[test]
    fn elements_match_naive(gens in small_gens(), bound in 1u64..=6) {
        let tm = monoid(&gens);
        let b = PosRational::integer(bound);
        let ours: BTreeSet<_> = tm.elements_up_to(&b).into_iter().collect();
        prop_assert_eq!(ours, naive_elements(&gens, &b));
        for x in tm.elements_up_to(&b) {
            prop_assert!(tm.contains(&x));
        }
    }

    #[test]
    fn factorizations_complete_and_sound(gens in small_gens(), bound in 1u64..=4) {
        let tm = monoid(&gens);
        for x in tm.elements_up_to(&PosRational::integer(bound)) {
            let ours: BTreeSet<Vec<u64>> = factorizations(&tm, &x, DEFAULT_CAP)
                .unwrap()
                .iter()
                .map(|z| tm.atoms().iter().map(|a| z.multiplicity(a)).collect())
                .collect();
            prop_assert_eq!(&ours, &naive_factorizations(tm.atoms(), &x), "x = {}", x);
            let lengths: BTreeSet<u64> = ours.iter().map(|v| v.iter().sum()).collect();
            prop_assert_eq!(length_set(&tm, &x, DEFAULT_CAP).unwrap().iter().collect::<BTreeSet<_>>(), lengths);
        }
    }

    #[test]
    fn closure_under_addition(gens in small_gens(), i in 0usize..40, j in 0usize..40) {
        let tm = monoid(&gens);
        let elems = tm.elements_up_to(&PosRational::integer(3));
        let (x, y) = (&elems[i % elems.len()], &elems[j % elems.len()]);
        prop_assert!(tm.contains(&(x + y)));
    }

    #[test]
    fn profile_matches_length_sets(gens in small_gens()) {
        let tm = monoid(&gens);
        for e in length_profile(&tm, &PosRational::integer(3), DEFAULT_CAP).unwrap() {
            let l = length_set(&tm, &e.element, DEFAULT_CAP).unwrap();
            prop_assert_eq!((l.min(), l.max()), (Some(e.min), Some(e.max)));
        }
    }

    #[test]
    fn elasticity_bounded_by_atom_ratio(gens in small_gens()) {
        let tm = monoid(&gens);
        let rho = tm.max_atom().unwrap().checked_div(tm.min_atom().unwrap()).unwrap();
        for r in elasticity_set(&tm, &PosRational::integer(4), DEFAULT_CAP).unwrap() {
            prop_assert!(r >= PosRational::one() && r <= rho);
        }
    }

    #[test]
    fn elasticity_reached_by_bound(gens in small_gens()) {
        let tm = monoid(&gens);
        let (min, max) = (tm.min_atom().unwrap(), tm.max_atom().unwrap());
        let rho = max.checked_div(min).unwrap();
        let bound = PosRational::from_biguint(min.numer() * max.numer());
        let set = elasticity_set(&tm, &bound, DEFAULT_CAP).unwrap();
        prop_assert_eq!(set.last(), Some(&rho));
        let report = monoid_elasticity(None, Some(&tm), ElasticityMode::TruncatedExact).unwrap();
        prop_assert_eq!(report.value, ExtRational::Finite(rho));
    }

    #[test]
    fn witnesses_are_the_common_multiples(gens in small_gens()) {
        let tm = monoid(&gens);
        let (min, max) = (tm.min_atom().unwrap(), tm.max_atom().unwrap());
        let step = min.common_multiple(max).unwrap();
        let bound = step.mul_int(3);
        let expected: Vec<_> = (1..=3).map(|k| step.mul_int(k)).collect();
        prop_assert_eq!(elasticity_witnesses(&tm, &bound, DEFAULT_CAP).unwrap(), expected);
    }
}

#[test]
fn coefficient_law_on_primary_catalogs() {
    for name in [CatalogName::PrimaryDense, CatalogName::InfiniteUnstable, CatalogName::BfPlot] {
        let tm = truncate(&catalog(name, 1).unwrap(), 5).unwrap();
        let mut checked = 0;
        for x in 1..=4 {
            let x = PosRational::integer(x);
            for z in factorizations(&tm, &x, DEFAULT_CAP).unwrap() {
                assert_eq!(valuation_coefficient_check(&tm, &x, &z).passed(), Some(true), "{name} {z}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn stable_numerator_length_sets_grow() {
    let specs = [
        (catalog(CatalogName::Factorial, 1).unwrap(), q("1")),
        (
            MonoidSpec::new(
                vec![GeneratorFamily::Symbolic(SymbolicFamily::new("2", PrimeFilter::Odd, 1).unwrap().stable())],
                Metadata::default(),
            )
            .unwrap(),
            q("2"),
        ),
    ];
    for (spec, x) in specs {
        let sizes: Vec<usize> = [2, 4, 8]
            .iter()
            .map(|&d| length_set(&truncate(&spec, d).unwrap(), &x, DEFAULT_CAP).unwrap().len())
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
    }
}

/// min/max of `sum p_i k_i` subject to `sum i k_i = x`: the lengths of
/// the integer `x` in `<n/p_n | n <= depth>`, whose integer factorizations
/// use each atom `n/p_n` a multiple of `p_n` times.
fn partition_oracle(primes: &[u64], x: u64) -> (u64, u64) {
    let mut lo = vec![u64::MAX; x as usize + 1];
    let mut hi = vec![0u64; x as usize + 1];
    let mut reach = vec![false; x as usize + 1];
    lo[0] = 0;
    reach[0] = true;
    for t in 1..=x as usize {
        for (i, &p) in primes.iter().enumerate() {
            let n = i + 1;
            if n <= t && reach[t - n] {
                reach[t] = true;
                lo[t] = lo[t].min(lo[t - n] + p);
                hi[t] = hi[t].max(hi[t - n] + p);
            }
        }
    }
    (lo[x as usize], hi[x as usize])
}

#[test]
fn integer_elasticities_match_partition_oracle() {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19];
    let tm = truncate(&catalog(CatalogName::PrimaryDense, 1).unwrap(), 8).unwrap();
    for x in 1..=5 {
        let (lo, hi) = partition_oracle(&primes, x);
        let l = length_set(&tm, &PosRational::integer(x), DEFAULT_CAP).unwrap();
        assert_eq!((l.min(), l.max()), (Some(lo), Some(hi)), "x = {x}");
    }
    let expected: BTreeMap<u64, PosRational> =
        [(2, ratio(4, 3)), (3, ratio(6, 5)), (4, ratio(4, 3)), (5, ratio(11, 8))].into_iter().collect();
    for (x, r) in expected {
        assert_eq!(element_elasticity(&tm, &PosRational::integer(x), DEFAULT_CAP).unwrap(), r);
    }
}

#[test]
fn large_denominators_use_wide_arithmetic() {
    let big = BigUint::from(1u64 << 40) * BigUint::from(1u64 << 40) + BigUint::from(1u8);
    let a = PosRational::new(BigUint::from(1u8), big.clone()).unwrap();
    let b = PosRational::new(BigUint::from(2u8), big).unwrap();
    let tm = TruncatedMonoid::from_generators(&[a.clone(), b.clone(), q("1/3")]).unwrap();
    assert_eq!(tm.atoms().len(), 2);
    let x = &b + &q("1/3");
    assert_eq!(length_set(&tm, &x, DEFAULT_CAP).unwrap().iter().collect::<Vec<_>>(), [3]);
}

#[test]
fn types_are_thread_safe() {
    fn check<T: Send + Sync>() {}
    check::<TruncatedMonoid>();
    check::<MonoidSpec>();
    check::<PosRational>();
    check::<puiseux_core::StagedMonoid>();
    check::<puiseux_core::Error>();
}
