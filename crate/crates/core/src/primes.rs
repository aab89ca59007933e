//! Primality and filtered prime sequences.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which primes a sequence draws from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimeFilter {
    All,
    /// Every prime except 2.
    Odd,
    /// Every prime not in the list.
    Exclude(Vec<u64>),
    /// Every prime `>=` the bound.
    Min(u64),
}

impl PrimeFilter {
    pub fn accepts(&self, p: u64) -> bool {
        match self {
            PrimeFilter::All => true,
            PrimeFilter::Odd => p != 2,
            PrimeFilter::Exclude(list) => !list.contains(&p),
            PrimeFilter::Min(b) => p >= *b,
        }
    }

    fn start(&self) -> u64 {
        match self {
            PrimeFilter::Min(b) => (*b).max(2),
            _ => 2,
        }
    }

    /// Iterator over the accepted primes in increasing order.
    pub fn iter(&self) -> FilteredPrimes<'_> {
        FilteredPrimes { filter: self, next: self.start() }
    }

    /// The `n`-th accepted prime, 1-based.
    pub fn nth(&self, n: usize) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.iter().nth(n - 1)
    }
}

/// `all`, `odd`, `exclude:[3,5]` or `min:13`.
impl fmt::Display for PrimeFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeFilter::All => f.write_str("all"),
            PrimeFilter::Odd => f.write_str("odd"),
            PrimeFilter::Exclude(list) => {
                f.write_str("exclude:[")?;
                for (i, p) in list.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
            PrimeFilter::Min(b) => write!(f, "min:{b}"),
        }
    }
}

impl FromStr for PrimeFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::Semantic(format!("unknown prime filter {s:?}; expected all, odd, exclude:[..] or min:<int>"));
        let s = s.trim();
        match s {
            "all" => return Ok(PrimeFilter::All),
            "odd" => return Ok(PrimeFilter::Odd),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("min:") {
            return rest.trim().parse().map(PrimeFilter::Min).map_err(|_| bad());
        }
        let list = s
            .strip_prefix("exclude:")
            .and_then(|r| r.trim().strip_prefix('['))
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let primes = list
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrimeFilter::Exclude(primes))
    }
}

pub struct FilteredPrimes<'a> {
    filter: &'a PrimeFilter,
    next: u64,
}

impl Iterator for FilteredPrimes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let c = self.next;
            self.next = c.checked_add(if c == 2 { 1 } else { 2 })?;
            if is_prime(c) && self.filter.accepts(c) {
                return Some(c);
            }
        }
    }
}

/// The first `count` primes accepted by `filter`.
pub fn prime_seq(filter: &PrimeFilter, count: usize) -> Vec<u64> {
    filter.iter().take(count).collect()
}

/// Smallest prime `>= lower` for which `usable` holds.
pub fn next_prime_from(lower: u64, mut usable: impl FnMut(u64) -> bool) -> Option<u64> {
    let mut c = lower.max(2);
    loop {
        if is_prime(c) && usable(c) {
            return Some(c);
        }
        c = c.checked_add(1)?;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Deterministic for every n < 3.3 * 10^24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Outcome of a primality test, with the evidence used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primality {
    /// Proven by the deterministic 64-bit test.
    Prime,
    /// Passed Miller-Rabin for every listed base.
    ProbablePrime {
        bases: Vec<u64>,
    },
    Composite,
}

impl Primality {
    pub fn is_prime(&self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

/// Primality of an arbitrary-size integer.
///
/// Inputs below 2^64 are decided exactly. Larger inputs run `rounds`
/// Miller-Rabin rounds over the first `rounds` primes as bases and report
/// those bases as the certificate.
pub fn primality(n: &BigUint, rounds: usize) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime(small) { Primality::Prime } else { Primality::Composite };
    }
    if n.is_even() {
        return Primality::Composite;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let bases: Vec<u64> = PrimeFilter::All.iter().take(rounds.max(1)).collect();
    'witness: for &a in &bases {
        let a = BigUint::from(a);
        if (&a % n).is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u8), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Primality::Composite;
    }
    Primality::ProbablePrime { bases }
}
