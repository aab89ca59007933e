//! Integer search machinery behind membership, enumeration and length
//! profiles.
//!
//! Atoms are scaled by the lcm of their denominators and divided by the gcd
//! of the results, so every monoid element becomes a nonnegative integer
//! index on a grid of step `unit = gcd / lcm`. Small problems run in `u128`,
//! anything wider in `BigUint`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::PosRational;

/// Grids with at most this many points use the dense tables.
pub(crate) const DENSE_LIMIT: usize = 1 << 22;

pub(crate) trait Word: Clone + Ord + Integer + Debug {
    fn from_big(v: &BigUint) -> Self;
    fn as_u64(&self) -> Option<u64>;
    fn to_big(&self) -> BigUint;
    /// Inverse of `self` modulo `m`; both coprime, `m > 1`.
    fn inv_mod(&self, m: &Self) -> Self;
}

impl Word for u128 {
    fn from_big(v: &BigUint) -> Self {
        v.to_u128().expect("checked by the caller")
    }
    fn as_u64(&self) -> Option<u64> {
        u64::try_from(*self).ok()
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn inv_mod(&self, m: &Self) -> Self {
        let e = (*self as i128).extended_gcd(&(*m as i128));
        e.x.rem_euclid(*m as i128) as u128
    }
}

impl Word for BigUint {
    fn from_big(v: &BigUint) -> Self {
        v.clone()
    }
    fn as_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(self)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn inv_mod(&self, m: &Self) -> Self {
        let a = BigInt::from(self.clone());
        let mb = BigInt::from(m.clone());
        let e = a.extended_gcd(&mb);
        let mut x = e.x % &mb;
        if x.is_negative() {
            x += &mb;
        }
        x.to_biguint().expect("nonnegative")
    }
}

/// Values below this fit the `u128` path with room for products.
const NARROW_BITS: u64 = 63;

/// Scaled integer view of an atom list (ascending order preserved).
#[derive(Debug)]
pub(crate) struct Grid {
    lcm: BigUint,
    unit: BigUint,
    gens: Vec<BigUint>,
}

impl Grid {
    pub(crate) fn new(atoms: &[PosRational]) -> Grid {
        let lcm = atoms.iter().fold(BigUint::one(), |acc, a| acc.lcm(a.denom()));
        let scaled: Vec<BigUint> = atoms.iter().map(|a| a.numer() * (&lcm / a.denom())).collect();
        let unit = scaled.iter().fold(BigUint::zero(), |acc, g| acc.gcd(g));
        let unit = if unit.is_zero() { BigUint::one() } else { unit };
        let gens = scaled.iter().map(|g| g / &unit).collect();
        Grid { lcm, unit, gens }
    }

    /// `x / unit` when it is an integer.
    pub(crate) fn index_of(&self, x: &PosRational) -> Option<BigUint> {
        let scaled = x.numer() * &self.lcm;
        let (q, r) = scaled.div_rem(x.denom());
        if !r.is_zero() {
            return None;
        }
        let (k, r) = q.div_rem(&self.unit);
        r.is_zero().then_some(k)
    }

    /// `floor(x / unit)`.
    pub(crate) fn floor_index(&self, x: &PosRational) -> BigUint {
        (x.numer() * &self.lcm) / (x.denom() * &self.unit)
    }

    pub(crate) fn value(&self, k: &BigUint) -> PosRational {
        PosRational::new(k * &self.unit, self.lcm.clone()).expect("lcm is positive")
    }

    fn narrow(&self, target: &BigUint) -> bool {
        target.bits() <= NARROW_BITS && self.gens.iter().all(|g| g.bits() <= NARROW_BITS)
    }

    fn words<W: Word>(&self) -> Vec<W> {
        self.gens.iter().map(W::from_big).collect()
    }

    /// Visits every multiplicity vector (in atom order) whose weighted sum
    /// is `x`. Elements off the grid have no factorizations.
    pub(crate) fn for_each_factorization(
        &self,
        x: &PosRational,
        visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    ) -> Result<()> {
        let Some(target) = self.index_of(x) else { return Ok(()) };
        if self.gens.is_empty() {
            if target.is_zero() {
                let _ = visit(&[]);
            }
            return Ok(());
        }
        if self.narrow(&target) {
            enumerate::<u128>(&self.words(), u128::from_big(&target), visit)
        } else {
            enumerate::<BigUint>(&self.gens, target, visit)
        }
    }

    pub(crate) fn contains(&self, x: &PosRational) -> bool {
        let Some(target) = self.index_of(x) else { return false };
        if target.is_zero() {
            return true;
        }
        if self.gens.is_empty() {
            return false;
        }
        // a reach table costs O(n) per query, so only tiny targets use it
        if let Some(n) = target.to_usize().filter(|n| *n < SMALL_REACH) {
            let gens: Option<Vec<usize>> = self.gens.iter().map(|g| g.to_usize()).collect();
            if let Some(gens) = gens {
                return dense_reach(&gens, n)[n];
            }
        }
        let mut found = false;
        let mut stop = |_: &[u64]| {
            found = true;
            ControlFlow::Break(())
        };
        // multiplicity overflow cannot happen before the first visit returns
        let _ = self.for_each_factorization(x, &mut stop);
        found
    }

    /// Visits every element `<= bound` in ascending order together with its
    /// minimum and maximum factorization length. Stops with a resource
    /// error after `cap` elements.
    pub(crate) fn profile(
        &self,
        bound: &PosRational,
        cap: u64,
        visit: &mut dyn FnMut(PosRational, u64, u64) -> ControlFlow<()>,
    ) -> Result<()> {
        let n = self.floor_index(bound);
        if self.gens.is_empty() {
            let _ = visit(PosRational::zero(), 0, 0);
            return Ok(());
        }
        if let Some(limit) = n.to_usize().filter(|n| *n < DENSE_LIMIT) {
            let gens: Option<Vec<usize>> = self.gens.iter().map(|g| g.to_usize()).collect();
            if let Some(gens) = gens {
                return self.dense_profile(&gens, limit, cap, visit);
            }
        }
        if self.narrow(&n) {
            self.sparse_profile::<u128>(&self.words(), u128::from_big(&n), cap, visit)
        } else {
            self.sparse_profile::<BigUint>(&self.gens, n, cap, visit)
        }
    }

    fn dense_profile(
        &self,
        gens: &[usize],
        n: usize,
        cap: u64,
        visit: &mut dyn FnMut(PosRational, u64, u64) -> ControlFlow<()>,
    ) -> Result<()> {
        const NONE: u32 = u32::MAX;
        let mut min = vec![NONE; n + 1];
        let mut max = vec![0u32; n + 1];
        min[0] = 0;
        let mut seen = 0u64;
        for v in 0..=n {
            if min[v] == NONE {
                continue;
            }
            if seen == cap {
                return Err(Error::ResourceCap { limit: cap, during: "profiling elements" });
            }
            seen += 1;
            if visit(self.value(&BigUint::from(v)), min[v] as u64, max[v] as u64).is_break() {
                return Ok(());
            }
            for &g in gens {
                let w = v + g;
                if w > n {
                    continue;
                }
                if min[w] == NONE || min[v] + 1 < min[w] {
                    min[w] = min[v] + 1;
                }
                if max[v] + 1 > max[w] {
                    max[w] = max[v] + 1;
                }
            }
        }
        Ok(())
    }

    fn sparse_profile<W: Word>(
        &self,
        gens: &[W],
        n: W,
        cap: u64,
        visit: &mut dyn FnMut(PosRational, u64, u64) -> ControlFlow<()>,
    ) -> Result<()> {
        // popping in ascending order finalizes each value: all of its
        // predecessors are strictly smaller
        let mut pending: BTreeMap<W, (u64, u64)> = BTreeMap::new();
        pending.insert(W::zero(), (0, 0));
        let mut seen = 0u64;
        while let Some((v, (lo, hi))) = pending.pop_first() {
            if seen == cap {
                return Err(Error::ResourceCap { limit: cap, during: "profiling elements" });
            }
            seen += 1;
            if visit(self.value(&v.to_big()), lo, hi).is_break() {
                return Ok(());
            }
            for g in gens {
                let w = v.clone() + g.clone();
                if w > n {
                    continue;
                }
                let slot = pending.entry(w).or_insert((u64::MAX, 0));
                slot.0 = slot.0.min(lo + 1);
                slot.1 = slot.1.max(hi + 1);
            }
        }
        Ok(())
    }
}

/// Reachability table of `sum k_i g_i` for `0..=n`.
const SMALL_REACH: usize = 1 << 12;

pub(crate) fn dense_reach(gens: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for v in 0..=n {
        if !reach[v] {
            continue;
        }
        for &g in gens {
            if v + g <= n {
                reach[v + g] = true;
            }
        }
    }
    reach
}

struct Dfs<'a, W: Word> {
    gens: Vec<W>,
    suffix_gcd: Vec<W>,
    order: Vec<usize>,
    mults: Vec<W>,
    out: Vec<u64>,
    visit: &'a mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    overflow: bool,
}

/// Depth-first enumeration over generators in descending order.
///
/// At level `i` the residual must be divisible by the gcd of the remaining
/// generators, so admissible multiplicities form one residue class modulo
/// `gcd(g_{i+1..}) / gcd(g_{i..})` and are stepped through directly.
fn enumerate<W: Word>(gens: &[W], target: W, visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>) -> Result<()> {
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by(|&a, &b| gens[b].cmp(&gens[a]));
    let sorted: Vec<W> = order.iter().map(|&i| gens[i].clone()).collect();
    let mut suffix_gcd = vec![W::zero(); sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        suffix_gcd[i] = sorted[i].gcd(&suffix_gcd[i + 1]);
    }
    if !target.is_multiple_of(&suffix_gcd[0]) {
        return Ok(());
    }
    let mut dfs = Dfs {
        mults: vec![W::zero(); sorted.len()],
        out: vec![0; sorted.len()],
        gens: sorted,
        suffix_gcd,
        order,
        visit,
        overflow: false,
    };
    let _ = dfs.rec(0, target);
    if dfs.overflow {
        return Err(Error::Overflow("recording factorization multiplicities"));
    }
    Ok(())
}

impl<W: Word> Dfs<'_, W> {
    fn emit(&mut self) -> ControlFlow<()> {
        for (k, &atom) in self.order.iter().enumerate() {
            match self.mults[k].as_u64() {
                Some(m) => self.out[atom] = m,
                None => {
                    self.overflow = true;
                    return ControlFlow::Break(());
                }
            }
        }
        (self.visit)(&self.out)
    }

    fn rec(&mut self, i: usize, residual: W) -> ControlFlow<()> {
        let g = self.gens[i].clone();
        if i + 1 == self.gens.len() {
            if residual.is_multiple_of(&g) {
                self.mults[i] = residual.div_floor(&g);
                let flow = self.emit();
                self.mults[i] = W::zero();
                return flow;
            }
            return ControlFlow::Continue(());
        }
        let d = self.suffix_gcd[i].clone();
        let modulus = self.suffix_gcd[i + 1].div_floor(&d);
        let start = if modulus.is_one() {
            W::zero()
        } else {
            let r = residual.div_floor(&d).mod_floor(&modulus);
            let step = g.div_floor(&d).mod_floor(&modulus);
            (r * step.inv_mod(&modulus)).mod_floor(&modulus)
        };
        let max_m = residual.div_floor(&g);
        let mut m = start;
        while m <= max_m {
            let rest = residual.clone() - m.clone() * g.clone();
            self.mults[i] = m.clone();
            self.rec(i + 1, rest)?;
            m = m + modulus.clone();
        }
        self.mults[i] = W::zero();
        ControlFlow::Continue(())
    }
}
