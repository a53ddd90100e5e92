//! Truncated Laurent series in `q^{1/2}` and multi-series over dimension
//! vectors.
//!
//! Exponents count half-powers of `q`: exponent `3` is `q^{3/2}`. A
//! [`HalfSeries`] carries a window `[lo, hi]`: every coefficient below `lo`
//! is zero, and every coefficient up to `hi` is exact. Above `hi` nothing is
//! known. `hi = None` marks an exact finite Laurent polynomial.
//!
//! Window rules:
//! * sum: `lo = min(lo_a, lo_b)`, `hi = min(hi_a, hi_b)`;
//! * product: `lo = v_a + v_b`, `hi = min(hi_a + v_b, hi_b + v_a)`, where `v`
//!   is the valuation (first possibly non-zero exponent).
//!
//! Coefficients outside the exact range are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};
use crate::quiver::{sort_graded, DimVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSeries {
    coeffs: BTreeMap<i64, Rational>,
    lo: i64,
    hi: Option<i64>,
}

fn min_hi(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl HalfSeries {
    /// Exact Laurent polynomial.
    pub fn exact(coeffs: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let coeffs: BTreeMap<i64, Rational> =
            coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let lo = coeffs.keys().next().copied().unwrap_or(0);
        HalfSeries { coeffs, lo, hi: None }
    }

    /// Series known to be zero below `lo` and exact up to `hi`; coefficients
    /// outside `[lo, hi]` are rejected.
    pub fn windowed(
        coeffs: impl IntoIterator<Item = (i64, Rational)>,
        lo: i64,
        hi: i64,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in coeffs {
            if c.is_zero() {
                continue;
            }
            if e < lo || e > hi {
                return Err(Error::Domain(format!(
                    "coefficient at q^({e}/2) outside window [{lo}, {hi}]"
                )));
            }
            map.insert(e, c);
        }
        Ok(HalfSeries {
            coeffs: map,
            lo,
            hi: Some(hi),
        })
    }

    pub fn zero() -> Self {
        HalfSeries::exact([])
    }

    pub fn one() -> Self {
        HalfSeries::monomial(0, Rational::one())
    }

    pub fn monomial(e: i64, c: Rational) -> Self {
        HalfSeries::exact([(e, c)])
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> Option<i64> {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.hi.is_none()
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Rational> {
        &self.coeffs
    }

    /// Coefficient of `q^{e/2}`, or `None` if it lies above the window.
    pub fn coeff(&self, e: i64) -> Option<Rational> {
        match self.hi {
            Some(h) if e > h => None,
            _ => Some(self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)),
        }
    }

    /// First exponent that may carry a non-zero coefficient; `None` for the
    /// exact zero series.
    pub fn valuation(&self) -> Option<i64> {
        match (self.coeffs.keys().next(), self.hi) {
            (Some(&e), _) => Some(e),
            (None, Some(h)) => Some(h + 1),
            (None, None) => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.hi.is_none()
    }

    /// Some coefficient inside the exact range is non-zero.
    pub fn has_nonzero(&self) -> bool {
        !self.coeffs.is_empty()
    }

    fn normalized(coeffs: BTreeMap<i64, Rational>, lo: i64, hi: Option<i64>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && hi.map_or(true, |h| *e <= h))
            .collect();
        HalfSeries { coeffs, lo, hi }
    }

    pub fn add(&self, other: &HalfSeries) -> HalfSeries {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            *coeffs.entry(*e).or_insert_with(Rational::zero) += c;
        }
        let lo = match (self.is_exact_zero(), other.is_exact_zero()) {
            (true, _) => other.lo,
            (_, true) => self.lo,
            _ => self.lo.min(other.lo),
        };
        HalfSeries::normalized(coeffs, lo, min_hi(self.hi, other.hi))
    }

    pub fn neg(&self) -> HalfSeries {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &HalfSeries) -> HalfSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> HalfSeries {
        let coeffs = self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect();
        HalfSeries::normalized(coeffs, self.lo, self.hi)
    }

    /// Multiply by `q^{e/2}`.
    pub fn shift(&self, e: i64) -> HalfSeries {
        HalfSeries {
            coeffs: self.coeffs.iter().map(|(k, c)| (k + e, c.clone())).collect(),
            lo: self.lo + e,
            hi: self.hi.map(|h| h + e),
        }
    }

    /// Forget everything above `hi`.
    pub fn truncate(&self, hi: i64) -> HalfSeries {
        let hi = min_hi(self.hi, Some(hi));
        HalfSeries::normalized(self.coeffs.clone(), self.lo, hi)
    }

    pub fn mul(&self, other: &HalfSeries) -> HalfSeries {
        let (va, vb) = match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => (a, b),
            _ => return HalfSeries::zero(),
        };
        let hi = min_hi(self.hi.map(|h| h + vb), other.hi.map(|h| h + va));
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if hi.is_some_and(|h| e > h) {
                    break;
                }
                *coeffs.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        HalfSeries::normalized(coeffs, va + vb, hi)
    }

    /// Multiplicative inverse, exact up to `min(prec, hi − 2v)`. The inverse
    /// of an exact monomial is exact.
    pub fn inverse(&self, prec: i64) -> Result<HalfSeries> {
        let (&v, lead) = self
            .coeffs
            .iter()
            .next()
            .ok_or_else(|| Error::Domain("inverse of a series with no known leading term".into()))?;
        let lead_inv = lead.recip();
        if self.hi.is_none() && self.coeffs.len() == 1 {
            return Ok(HalfSeries::monomial(-v, lead_inv));
        }
        let hi = min_hi(Some(prec), self.hi.map(|h| h - 2 * v)).expect("bounded");
        let span = hi + v;
        let mut out: Vec<Rational> = Vec::with_capacity(span.max(0) as usize + 1);
        for m in 0..=span.max(-1) {
            if m == 0 {
                out.push(lead_inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for (&e, c) in self.coeffs.range(v + 1..=v + m) {
                let i = e - v;
                let b = &out[(m - i) as usize];
                if !b.is_zero() {
                    acc += c * b;
                }
            }
            out.push(-acc * &lead_inv);
        }
        let coeffs = out
            .into_iter()
            .enumerate()
            .map(|(m, c)| (m as i64 - v, c))
            .collect();
        Ok(HalfSeries::normalized(coeffs, -v, Some(hi)))
    }

    /// Coefficient-wise agreement on the common exact range (and below).
    pub fn agrees_with(&self, other: &HalfSeries) -> bool {
        let hi = min_hi(self.hi, other.hi);
        let keys = self.coeffs.keys().chain(other.coeffs.keys());
        keys.filter(|&&e| hi.map_or(true, |h| e <= h))
            .all(|&e| self.coeff(e) == other.coeff(e))
    }
}

impl fmt::Display for HalfSeries {
    /// `c*q^{k/2}` terms in increasing exponent, then `+ O(q^{(hi+1)/2})`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            let negative = c.is_negative();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let abs = c.abs();
            if abs.is_one() {
                write!(f, "q^{{{e}/2}}")?;
            } else {
                write!(f, "{abs}*q^{{{e}/2}}")?;
            }
        }
        match (first, self.hi) {
            (true, None) => write!(f, "0"),
            (true, Some(h)) => write!(f, "O(q^{{{}/2}})", h + 1),
            (false, Some(h)) => write!(f, " + O(q^{{{}/2}})", h + 1),
            (false, None) => Ok(()),
        }
    }
}

/// Series `Σ_γ A_γ(q) x^γ` over dimension vectors `γ <= bound`, optionally
/// also `|γ| <= total_max`. Absent entries are exactly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    bound: DimVector,
    total_max: Option<u32>,
    entries: BTreeMap<DimVector, HalfSeries>,
}

impl MultiSeries {
    pub fn new(bound: DimVector, total_max: Option<u32>) -> Self {
        MultiSeries {
            bound,
            total_max,
            entries: BTreeMap::new(),
        }
    }

    pub fn one(bound: DimVector, total_max: Option<u32>) -> Self {
        let mut s = MultiSeries::new(bound, total_max);
        let zero = DimVector::zero(s.bound.len());
        s.entries.insert(zero, HalfSeries::one());
        s
    }

    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn total_max(&self) -> Option<u32> {
        self.total_max
    }

    pub fn contains(&self, g: &DimVector) -> bool {
        g.le(&self.bound) && self.total_max.map_or(true, |t| g.total() <= t)
    }

    /// Every `γ` in range, in graded order.
    pub fn support(&self) -> Vec<DimVector> {
        let mut all: Vec<DimVector> = DimVector::all_below(&self.bound)
            .into_iter()
            .filter(|g| self.contains(g))
            .collect();
        sort_graded(&mut all);
        all
    }

    pub fn get(&self, g: &DimVector) -> HalfSeries {
        self.entries.get(g).cloned().unwrap_or_else(HalfSeries::zero)
    }

    pub fn entry(&self, g: &DimVector) -> Option<&HalfSeries> {
        self.entries.get(g)
    }

    pub fn set(&mut self, g: DimVector, s: HalfSeries) -> Result<()> {
        if !self.contains(&g) {
            return Err(Error::Dimension(format!("{g} outside the truncation box")));
        }
        if s.is_exact_zero() {
            self.entries.remove(&g);
        } else {
            self.entries.insert(g, s);
        }
        Ok(())
    }

    fn check_same_box(&self, other: &MultiSeries) -> Result<()> {
        if self.bound == other.bound && self.total_max == other.total_max {
            Ok(())
        } else {
            Err(Error::Dimension("multi-series truncated differently".into()))
        }
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_same_box(other)?;
        let mut out = MultiSeries::new(self.bound.clone(), self.total_max);
        for (ga, a) in &self.entries {
            for (gb, b) in &other.entries {
                let g = ga + gb;
                if !out.contains(&g) {
                    continue;
                }
                let term = a.mul(b);
                let acc = out.get(&g).add(&term);
                out.set(g, acc)?;
            }
        }
        Ok(out)
    }

    /// Inverse, requiring an invertible `γ = 0` coefficient. `prec` caps the
    /// q-precision of every coefficient.
    pub fn inverse(&self, prec: i64) -> Result<MultiSeries> {
        let zero = DimVector::zero(self.bound.len());
        let c0 = self.get(&zero);
        let c0_inv = c0.inverse(prec)?;
        let mut out = MultiSeries::new(self.bound.clone(), self.total_max);
        out.set(zero.clone(), c0_inv.clone())?;
        for d in self.support().into_iter().skip(1) {
            let mut acc = HalfSeries::zero();
            for (g, a) in &self.entries {
                if g.is_zero() || !g.le(&d) {
                    continue;
                }
                let rest = &d - g;
                acc = acc.add(&a.mul(&out.get(&rest)));
            }
            let val = acc.mul(&c0_inv).neg().truncate(prec);
            out.set(d, val)?;
        }
        Ok(out)
    }

    /// Agreement of every coefficient series on its common exact range.
    pub fn agrees_with(&self, other: &MultiSeries) -> bool {
        self.support()
            .iter()
            .all(|g| self.get(g).agrees_with(&other.get(g)))
    }
}
