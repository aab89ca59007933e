use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::primes::{next_prime_from, PrimeFilter};
use crate::rational::{ExtRational, PosRational};
use crate::spec::{GeneratorFamily, Metadata, MonoidSpec, SymbolicFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogName {
    /// `<1/2, (p_n + 1)/p_n | n >= 2>`.
    BfPlot,
    /// `<1/p | p prime>`.
    Factorial,
    /// `<floor(p/2)/p, (p - floor(p/2))/p | p odd prime>`.
    BfNotFf,
    /// `<n/p_n, (n + 1)/p_n>` with `p_n > (n + 1)^2` increasing.
    UnstableNotBf,
    /// `<n/p_n>`.
    PrimaryDense,
    /// `<n/p_n | n <= 12> + <30/p_n | n > 12>`.
    PrimaryStable,
    /// `<n/p_n>` over the primes other than 3.
    InfiniteUnstable,
}

impl CatalogName {
    pub const ALL: [CatalogName; 7] = [
        CatalogName::BfPlot,
        CatalogName::Factorial,
        CatalogName::BfNotFf,
        CatalogName::UnstableNotBf,
        CatalogName::PrimaryDense,
        CatalogName::PrimaryStable,
        CatalogName::InfiniteUnstable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogName::BfPlot => "bfplot",
            CatalogName::Factorial => "factorial",
            CatalogName::BfNotFf => "bfnotff",
            CatalogName::UnstableNotBf => "unstablenotbf",
            CatalogName::PrimaryDense => "primarydense",
            CatalogName::PrimaryStable => "primarystable",
            CatalogName::InfiniteUnstable => "infiniteunstable",
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| Error::UnknownCatalog(s.into()))
    }
}

fn q(n: u64, d: u64) -> PosRational {
    PosRational::from_u64s(n, d).expect("nonzero denominator")
}

fn family(expr: &str, filter: PrimeFilter, start: u64) -> SymbolicFamily {
    SymbolicFamily::new(expr, filter, start).expect("catalog expressions parse")
}

/// `p_1 < p_2 < ...` with `p_n` the smallest prime above
/// `max((n + 1)^2, p_{n-1})`.
pub fn unstablenotbf_primes(count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    for n in 1..=count as u64 {
        let floor = ((n + 1) * (n + 1)).max(out.last().copied().unwrap_or(0));
        out.push(next_prime_from(floor + 1, |_| true).expect("prime below 2^64"));
    }
    out
}

/// The spec of a named monoid. `depth` only matters for `unstablenotbf`,
/// whose prime sequence is not a filter of the primes and is therefore
/// listed explicitly for `n <= depth`.
pub fn catalog(name: CatalogName, depth: usize) -> Result<MonoidSpec> {
    if depth == 0 {
        return Err(Error::Validation("catalog depth must be at least 1".into()));
    }
    let zero_limit = Metadata { zero_limit_point: Some(true), ..Metadata::default() };
    let (families, metadata) = match name {
        CatalogName::BfPlot => (
            vec![
                GeneratorFamily::Explicit(vec![q(1, 2)]),
                GeneratorFamily::Symbolic(family("p + 1", PrimeFilter::All, 2)),
            ],
            Metadata {
                zero_limit_point: Some(false),
                atom_inf: Some(q(1, 2)),
                inf_attained: Some(true),
                atom_sup: Some(ExtRational::Finite(q(4, 3))),
                sup_attained: Some(true),
            },
        ),
        CatalogName::Factorial => (
            vec![GeneratorFamily::Symbolic(family("1", PrimeFilter::All, 1).stable())],
            Metadata { atom_sup: Some(ExtRational::Finite(q(1, 2))), sup_attained: Some(true), ..zero_limit },
        ),
        CatalogName::BfNotFf => (
            vec![
                GeneratorFamily::Symbolic(family("p//2", PrimeFilter::Odd, 1)),
                GeneratorFamily::Symbolic(family("p - p//2", PrimeFilter::Odd, 1)),
            ],
            Metadata {
                zero_limit_point: Some(false),
                atom_inf: Some(q(1, 3)),
                inf_attained: Some(true),
                // 2/3 = 1/3 + 1/3 is not an atom; the largest atom is 3/5
                atom_sup: Some(ExtRational::Finite(q(3, 5))),
                sup_attained: Some(true),
            },
        ),
        CatalogName::UnstableNotBf => {
            let gens =
                unstablenotbf_primes(depth).into_iter().zip(1u64..).flat_map(|(p, n)| [q(n, p), q(n + 1, p)]).collect();
            (vec![GeneratorFamily::Explicit(gens)], zero_limit)
        }
        CatalogName::PrimaryDense => (vec![GeneratorFamily::Symbolic(family("n", PrimeFilter::All, 1))], zero_limit),
        CatalogName::PrimaryStable => (
            vec![
                GeneratorFamily::Symbolic(family("n", PrimeFilter::All, 1).ending_at(12)),
                GeneratorFamily::Symbolic(family("30", PrimeFilter::All, 13).stable()),
            ],
            zero_limit,
        ),
        CatalogName::InfiniteUnstable => {
            (vec![GeneratorFamily::Symbolic(family("n", PrimeFilter::Exclude(vec![3]), 1))], zero_limit)
        }
    };
    MonoidSpec::new(families, metadata).map_err(|e| Error::Invariant(format!("catalog {name}: {e}")))
}
