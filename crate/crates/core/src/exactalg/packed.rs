//! Integer polynomials with the exponent vector packed into one `u64`.
//!
//! Variable 0 sits in the most significant field, so numeric order of keys is
//! lexicographic order of exponents as long as no field overflows. Every
//! operation returns `None` when a field or an `i128` coefficient would
//! overflow; callers fall back to [`ColoredPoly`] arithmetic.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{ColoredPoly, Rational};

pub(crate) type IntTerms = Vec<(u64, i128)>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Packing {
    nvars: usize,
    bits: u32,
}

impl Packing {
    pub fn new(nvars: usize) -> Option<Packing> {
        let bits = if nvars == 0 { 16 } else { (64 / nvars as u32).min(16) };
        (bits >= 4).then_some(Packing { nvars, bits })
    }

    /// Largest total degree whose monomials are safe to pack.
    pub fn max_degree(&self) -> u32 {
        (1u32 << self.bits) - 1
    }

    fn shift(&self, v: usize) -> u32 {
        self.bits * (self.nvars - 1 - v) as u32
    }

    /// Pack `e`, sending variable `v` to slot `map[v]`.
    pub fn pack_mapped(&self, e: &[u32], map: &[usize]) -> u64 {
        e.iter()
            .zip(map)
            .map(|(&x, &v)| (x as u64) << self.shift(v))
            .sum()
    }

    pub fn pack(&self, e: &[u32]) -> u64 {
        e.iter()
            .enumerate()
            .map(|(v, &x)| (x as u64) << self.shift(v))
            .sum()
    }

    pub fn unpack(&self, key: u64) -> Vec<u32> {
        let mask = (1u64 << self.bits) - 1;
        (0..self.nvars).map(|v| ((key >> self.shift(v)) & mask) as u32).collect()
    }

    fn divides(&self, small: u64, big: u64) -> bool {
        let mask = (1u64 << self.bits) - 1;
        (0..self.nvars).all(|v| (small >> self.shift(v)) & mask <= (big >> self.shift(v)) & mask)
    }
}

/// Integer terms of `den · p`, where `den` is the least common denominator.
pub(crate) fn integer_terms(p: &ColoredPoly, packing: &Packing, map: &[usize]) -> Option<(IntTerms, BigInt)> {
    let den = p
        .terms()
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let terms = p
        .terms()
        .iter()
        .map(|(e, c)| Some((packing.pack_mapped(e, map), (c.numer() * (&den / c.denom())).to_i128()?)))
        .collect::<Option<IntTerms>>()?;
    Some((terms, den))
}

/// `acc += a · b · c`.
pub(crate) fn mul3_into(acc: &mut HashMap<u64, i128>, a: &IntTerms, b: &IntTerms, c: &IntTerms) -> Option<()> {
    let mut ab: HashMap<u64, i128> = HashMap::with_capacity(a.len() * b.len());
    for &(ka, ca) in a {
        for &(kb, cb) in b {
            let x = ab.entry(ka + kb).or_insert(0);
            *x = x.checked_add(ca.checked_mul(cb)?)?;
        }
    }
    for (&k, &v) in &ab {
        if v == 0 {
            continue;
        }
        for &(kc, cc) in c {
            let x = acc.entry(k + kc).or_insert(0);
            *x = x.checked_add(v.checked_mul(cc)?)?;
        }
    }
    Some(())
}

/// Exact quotient by lexicographic division; `None` if the division is not
/// exact over the integers or anything overflows.
pub(crate) fn divide(num: HashMap<u64, i128>, den: &IntTerms, packing: &Packing) -> Option<IntTerms> {
    let mut rem: BTreeMap<u64, i128> = num.into_iter().filter(|(_, c)| *c != 0).collect();
    let (&(dlead, dc), rest) = den.split_last()?;
    let mut quot = Vec::new();
    while let Some((k, c)) = rem.pop_last() {
        if !packing.divides(dlead, k) || c % dc != 0 {
            return None;
        }
        let q = c / dc;
        let base = k - dlead;
        for &(kd, cd) in rest {
            let m = base + kd;
            let x = rem.entry(m).or_insert(0);
            *x = x.checked_sub(q.checked_mul(cd)?)?;
            if *x == 0 {
                rem.remove(&m);
            }
        }
        quot.push((base, q));
    }
    Some(quot)
}

/// Sorted integer terms of a polynomial with integer coefficients.
pub(crate) fn sorted_terms(p: &ColoredPoly, packing: &Packing) -> Option<IntTerms> {
    let mut t = p
        .terms()
        .iter()
        .map(|(e, c)| {
            if !c.is_integer() {
                return None;
            }
            Some((packing.pack(e), c.to_integer().to_i128()?))
        })
        .collect::<Option<IntTerms>>()?;
    t.sort_unstable_by_key(|&(k, _)| k);
    Some(t)
}

pub(crate) fn to_poly(
    gamma: &crate::DimVector,
    terms: impl IntoIterator<Item = (u64, i128)>,
    packing: &Packing,
    den: &BigInt,
) -> ColoredPoly {
    ColoredPoly::from_terms(
        gamma,
        terms
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (packing.unpack(k), Rational::new(BigInt::from(c), den.clone()))),
    )
    .expect("unpacked exponents have the right length")
}
