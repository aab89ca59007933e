//! Symbolic monoid descriptions.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::NumeratorExpr;
use crate::primes::PrimeFilter;
use crate::rational::{ExtRational, PosRational};

/// A family `numerator(n, p_n) / p_n` indexed by `n` in a range, where
/// `p_n` is the `n`-th prime accepted by `prime_filter`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicFamily {
    pub numerator: NumeratorExpr,
    pub prime_filter: PrimeFilter,
    pub index_start: u64,
    pub index_end: Option<u64>,
    pub declared_stable: bool,
}

impl SymbolicFamily {
    pub fn new(numerator: &str, prime_filter: PrimeFilter, index_start: u64) -> Result<Self> {
        Ok(SymbolicFamily {
            numerator: NumeratorExpr::parse(numerator)?,
            prime_filter,
            index_start,
            index_end: None,
            declared_stable: false,
        })
    }

    pub fn ending_at(mut self, end: u64) -> Self {
        self.index_end = Some(end);
        self
    }

    pub fn stable(mut self) -> Self {
        self.declared_stable = true;
        self
    }

    pub fn is_unbounded(&self) -> bool {
        self.index_end.is_none()
    }

    /// The first `depth` indices of the family (fewer if the range ends).
    pub fn indices(&self, depth: usize) -> impl Iterator<Item = u64> + '_ {
        let end = self.index_end.unwrap_or(u64::MAX);
        (self.index_start..=end).take(depth)
    }

    /// `(n, p_n, value)` for the first `depth` indices.
    pub fn instantiate(&self, depth: usize) -> Result<Vec<(u64, u64, PosRational)>> {
        let mut out = Vec::new();
        let mut primes = self.prime_filter.iter();
        let mut position = 0u64;
        for n in self.indices(depth) {
            // advance the prime iterator to the n-th prime
            let mut p = None;
            while position < n {
                p = primes.next();
                position += 1;
            }
            let p = p.ok_or(Error::Overflow("enumerating primes"))?;
            let a = self.numerator.eval(n, p)?;
            if a <= 0 {
                return Err(Error::Semantic(format!(
                    "numerator '{}' evaluates to {a} at index n = {n} (p = {p})",
                    self.numerator
                )));
            }
            let a = u64::try_from(a).map_err(|_| Error::Overflow("instantiating a family"))?;
            out.push((n, p, PosRational::from_u64s(a, p)?));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorFamily {
    Explicit(Vec<PosRational>),
    Symbolic(SymbolicFamily),
}

/// User-declared limit behaviour of the full (untruncated) monoid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub zero_limit_point: Option<bool>,
    pub atom_inf: Option<PosRational>,
    pub inf_attained: Option<bool>,
    pub atom_sup: Option<ExtRational>,
    pub sup_attained: Option<bool>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }
}

/// An additive submonoid of the nonnegative rationals, described by
/// generator families and optional metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidSpec {
    pub families: Vec<GeneratorFamily>,
    pub metadata: Metadata,
}

impl MonoidSpec {
    pub fn new(families: Vec<GeneratorFamily>, metadata: Metadata) -> Result<Self> {
        let spec = MonoidSpec { families, metadata };
        spec.validate()?;
        Ok(spec)
    }

    pub fn explicit(generators: Vec<PosRational>) -> Result<Self> {
        Self::new(alloc::vec![GeneratorFamily::Explicit(generators)], Metadata::default())
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::Semantic("a monoid spec needs at least one family".into()));
        }
        for (i, family) in self.families.iter().enumerate() {
            match family {
                GeneratorFamily::Explicit(gens) => {
                    if gens.is_empty() {
                        return Err(Error::Semantic(format!("family {i}: empty generator list")));
                    }
                    if gens.iter().any(PosRational::is_zero) {
                        return Err(Error::Semantic(format!("family {i}: generators must be positive")));
                    }
                }
                GeneratorFamily::Symbolic(f) => {
                    if f.index_start == 0 {
                        return Err(Error::Semantic(format!("family {i}: index_start must be at least 1")));
                    }
                    if let Some(end) = f.index_end {
                        if end < f.index_start {
                            return Err(Error::Semantic(format!(
                                "family {i}: index_end {end} precedes index_start {}",
                                f.index_start
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every family contributes finitely many generators.
    pub fn is_finite(&self) -> bool {
        self.families.iter().all(|f| match f {
            GeneratorFamily::Explicit(_) => true,
            GeneratorFamily::Symbolic(s) => !s.is_unbounded(),
        })
    }
}
