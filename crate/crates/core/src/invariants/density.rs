use alloc::format;
use alloc::string::String;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expr::NumeratorExpr;
use crate::primes::PrimeFilter;
use crate::rational::PosRational;

/// An integer sequence `n -> expr(n, p_n)`, `p_n` the `n`-th prime of
/// `filter`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSequence {
    pub expr: NumeratorExpr,
    pub filter: PrimeFilter,
}

impl IntSequence {
    pub fn new(expr: &str, filter: PrimeFilter) -> Result<Self> {
        Ok(IntSequence { expr: NumeratorExpr::parse(expr)?, filter })
    }

    pub fn at(&self, n: u64) -> Result<i128> {
        let p = self
            .filter
            .nth(usize::try_from(n).map_err(|_| Error::Overflow("sequence index"))?)
            .ok_or(Error::Overflow("prime enumeration"))?;
        self.expr.eval(n, p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_n: u64,
    pub max_k: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_n: 10_000, max_k: 10_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityOutcome {
    Found { n: u64, k: u64, ratio: PosRational },
    NotFound { diagnostics: String },
}

/// `(a_n + k) / (b_n + k)`.
pub fn ratio_at(a: &IntSequence, b: &IntSequence, n: u64, k: u64) -> Result<PosRational> {
    let (an, bn) = (a.at(n)?, b.at(n)?);
    ratio_of(an, bn, k)
}

fn ratio_of(an: i128, bn: i128, k: u64) -> Result<PosRational> {
    let num = BigInt::from(an) + BigInt::from(k);
    let den = BigInt::from(bn) + BigInt::from(k);
    match (num.to_biguint(), den.to_biguint()) {
        (Some(num), Some(den)) if !den.is_zero() => PosRational::new(num, den),
        _ => Err(Error::Validation(format!("ratio ({an} + {k})/({bn} + {k}) is not a positive rational"))),
    }
}

fn distance(x: &PosRational, y: &PosRational) -> PosRational {
    x.checked_sub(y).or_else(|| y.checked_sub(x)).expect("one difference is nonnegative")
}

fn to_int(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

/// Searches `n <= max_n`, `1 <= k <= max_k` with
/// `|(a_n + k)/(b_n + k) - target| < epsilon`.
///
/// For each `n` with `a_n > b_n >= 1` the ratio `1 + c/(b_n + k)`,
/// `c = a_n - b_n`, decreases in `k`, so only the two values of `k`
/// around the exact solution of `(a_n + k)/(b_n + k) = target` are
/// tried. The first hit in increasing `n` is returned.
pub fn density_witness(
    a: &IntSequence,
    b: &IntSequence,
    target: &PosRational,
    epsilon: &PosRational,
    budget: SearchBudget,
) -> Result<DensityOutcome> {
    if target < &PosRational::one() {
        return Err(Error::Validation(format!("target {target} is below 1")));
    }
    if epsilon.is_zero() {
        return Err(Error::Validation("epsilon must be positive".into()));
    }
    if budget.max_k == 0 {
        return Err(Error::Validation("max_k must be at least 1".into()));
    }
    let (tn, td) = (to_int(target.numer()), to_int(target.denom()));
    let (en, ed) = (to_int(epsilon.numer()), to_int(epsilon.denom()));
    let max_k = BigInt::from(budget.max_k);
    let one = BigInt::one();
    let mut p_iter_a = a.filter.iter();
    let mut p_iter_b = b.filter.iter();
    let mut usable = 0u64;
    let mut best: Option<(PosRational, u64, u64)> = None;
    for n in 1..=budget.max_n {
        let (Some(pa), Some(pb)) = (p_iter_a.next(), p_iter_b.next()) else { break };
        let (an, bn) = match (a.expr.eval(n, pa), b.expr.eval(n, pb)) {
            (Ok(an), Ok(bn)) => (an, bn),
            _ => break,
        };
        if !(an > bn && bn >= 1) {
            continue;
        }
        usable += 1;
        let bi = BigInt::from(bn);
        let c = BigInt::from(an) - &bi;
        // k* = c*td/(tn - td) - b for target > 1; k > c/eps - b for target 1
        let k_floor =
            if tn == td { (&c * &ed).div_floor(&en) - &bi + &one } else { (&c * &td).div_floor(&(&tn - &td)) - &bi };
        for k in [k_floor.clone(), &k_floor + &one] {
            let k = k.clamp(one.clone(), max_k.clone()).to_u64().expect("clamped to max_k");
            let ratio = ratio_of(an, bn, k)?;
            let miss = distance(&ratio, target);
            if &miss < epsilon {
                return Ok(DensityOutcome::Found { n, k, ratio });
            }
            if best.as_ref().is_none_or(|(m, _, _)| &miss < m) {
                best = Some((miss, n, k));
            }
        }
    }
    let diagnostics = match best {
        Some((miss, n, k)) => format!(
            "no witness within {epsilon} of {target} for n <= {}, k <= {}; {usable} usable indices; closest miss {miss} at n = {n}, k = {k}",
            budget.max_n, budget.max_k
        ),
        None => format!("no index n <= {} with a_n > b_n >= 1", budget.max_n),
    };
    Ok(DensityOutcome::NotFound { diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> PosRational {
        s.parse().unwrap()
    }

    fn seq(e: &str) -> IntSequence {
        IntSequence::new(e, PrimeFilter::All).unwrap()
    }

    fn found(o: DensityOutcome) -> (u64, u64, PosRational) {
        match o {
            DensityOutcome::Found { n, k, ratio } => (n, k, ratio),
            DensityOutcome::NotFound { diagnostics } => panic!("{diagnostics}"),
        }
    }

    #[test]
    fn exact_solutions() {
        let (a, b) = (seq("n*n"), seq("n"));
        assert_eq!(ratio_at(&a, &b, 100, 9800).unwrap(), q("2"));
        let (n, k, r) = found(density_witness(&a, &b, &q("2"), &q("1/100"), SearchBudget::default()).unwrap());
        assert_eq!(r, q("2"));
        assert_eq!(ratio_at(&a, &b, n, k).unwrap(), r);

        let (a, b) = (seq("2*n - 1"), seq("n"));
        assert_eq!(ratio_at(&a, &b, 10, 8).unwrap(), q("3/2"));
        let (n, k, r) = found(density_witness(&a, &b, &q("3/2"), &q("1/100"), SearchBudget::default()).unwrap());
        assert!(distance(&r, &q("3/2")) < q("1/100"));
        assert_eq!(ratio_at(&a, &b, n, k).unwrap(), r);
    }

    #[test]
    fn primes_skipping_three() {
        let a = IntSequence::new("p", PrimeFilter::Exclude(alloc::vec![3])).unwrap();
        let b = seq("2*n");
        let (n, k, r) = found(density_witness(&a, &b, &q("5/4"), &q("1/100"), SearchBudget::default()).unwrap());
        assert!(n <= 100 && k <= 100_000);
        assert!(distance(&r, &q("5/4")) < q("1/100"));
        assert_eq!(ratio_at(&a, &b, n, k).unwrap(), r);
    }

    #[test]
    fn target_one_and_endpoint() {
        let (a, b) = (seq("2*n - 1"), seq("n"));
        let (_, _, r) = found(density_witness(&a, &b, &q("1"), &q("1/100"), SearchBudget::default()).unwrap());
        assert!(r >= q("1") && r < q("101/100"));
        let (_, _, r) = found(density_witness(&a, &b, &q("2"), &q("1/100"), SearchBudget::default()).unwrap());
        assert!(distance(&r, &q("2")) < q("1/100"));
    }

    #[test]
    fn budget_exhaustion_and_errors() {
        let (a, b) = (seq("2*n - 1"), seq("n"));
        let tight = SearchBudget { max_n: 5, max_k: 10 };
        match density_witness(&a, &b, &q("2"), &q("1/1000"), tight).unwrap() {
            DensityOutcome::NotFound { diagnostics } => assert!(diagnostics.contains("closest miss")),
            other => panic!("{other:?}"),
        }
        assert!(density_witness(&a, &b, &q("1/2"), &q("1/100"), SearchBudget::default()).is_err());
        assert!(density_witness(&a, &b, &q("3/2"), &q("0"), SearchBudget::default()).is_err());
        let flat = (seq("n"), seq("n"));
        assert!(matches!(
            density_witness(&flat.0, &flat.1, &q("3/2"), &q("1/100"), SearchBudget::default()).unwrap(),
            DensityOutcome::NotFound { .. }
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn witnesses_are_within_epsilon(num in 100u64..=1000, den in 1u64..=100) {
            let (a, b) = (seq("n*n"), seq("n"));
            let t = PosRational::from_u64s(num, 100).unwrap();
            let eps = PosRational::from_u64s(1, den).unwrap();
            if let DensityOutcome::Found { n, k, ratio } =
                density_witness(&a, &b, &t, &eps, SearchBudget::default()).unwrap()
            {
                prop_assert!(distance(&ratio, &t) < eps);
                prop_assert_eq!(ratio_at(&a, &b, n, k).unwrap(), ratio);
            } else {
                prop_assert!(false, "n^2/n is unbounded, every target is reachable");
            }
        }
    }
}
