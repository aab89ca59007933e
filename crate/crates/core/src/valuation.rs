//! p-adic valuations of rationals.

use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::primes::primality;
use crate::rational::PosRational;

/// Value of `v_p`; `Infinite` only at zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of the largest power of `p` dividing `n > 0`.
pub(crate) fn multiplicity(p: &BigUint, n: &BigUint) -> i64 {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `v_p(r) = v_p(n(r)) - v_p(d(r))`, with `v_p(0) = inf`.
pub fn padic_val(p: &BigUint, r: &PosRational) -> Result<Valuation> {
    if !primality(p, 32).is_prime() {
        return Err(Error::NotPrime(p.clone()));
    }
    if r.is_zero() {
        return Ok(Valuation::Infinite);
    }
    Ok(Valuation::Finite(multiplicity(p, r.numer()) - multiplicity(p, r.denom())))
}
