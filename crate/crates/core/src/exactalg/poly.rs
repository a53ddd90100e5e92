//! Sparse polynomials in colored variables `x_{i,r}`.
//!
//! A dimension vector `γ` declares `γⁱ` variables of color `i`. Variables are
//! laid out flat in `(vertex, slot)` order, so `x_{i,r}` has index
//! `γ⁰ + … + γⁱ⁻¹ + r − 1`. Terms are kept in a `BTreeMap` keyed by the
//! exponent vector, which makes iteration follow lexicographic order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{parse_rational, Rational};
use crate::error::{Error, Result};
use crate::quiver::DimVector;

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredPoly {
    gamma: DimVector,
    terms: BTreeMap<Exponents, Rational>,
}

impl ColoredPoly {
    pub fn zero(gamma: &DimVector) -> Self {
        ColoredPoly {
            gamma: gamma.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(gamma: &DimVector, c: Rational) -> Self {
        let mut p = ColoredPoly::zero(gamma);
        if !c.is_zero() {
            p.terms.insert(vec![0; gamma.total() as usize], c);
        }
        p
    }

    pub fn one(gamma: &DimVector) -> Self {
        ColoredPoly::constant(gamma, Rational::one())
    }

    /// The variable `x_{vertex,slot}`; `slot` is 1-based.
    pub fn var(gamma: &DimVector, vertex: usize, slot: u32) -> Result<Self> {
        let idx = var_index(gamma, vertex, slot)?;
        let mut e = vec![0; gamma.total() as usize];
        e[idx] = 1;
        Ok(ColoredPoly::monomial(gamma, e, Rational::one()))
    }

    pub fn monomial(gamma: &DimVector, exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), gamma.total() as usize, "exponent vector length");
        let mut p = ColoredPoly::zero(gamma);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Build from raw terms; zero coefficients are dropped and duplicates add.
    pub fn from_terms(
        gamma: &DimVector,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let n = gamma.total() as usize;
        let mut p = ColoredPoly::zero(gamma);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::Dimension(format!(
                    "exponent vector of length {}, expected {n}",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn gamma(&self) -> &DimVector {
        &self.gamma
    }

    pub fn nvars(&self) -> usize {
        self.gamma.total() as usize
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// `Some(d)` if every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// Split into homogeneous components, keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, ColoredPoly> {
        let mut out: BTreeMap<u32, ColoredPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.iter().sum();
            out.entry(d)
                .or_insert_with(|| ColoredPoly::zero(&self.gamma))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &ColoredPoly) -> Result<()> {
        if self.gamma == other.gamma {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "variable sets differ: {} vs {}",
                self.gamma, other.gamma
            )))
        }
    }

    pub fn add(&self, other: &ColoredPoly) -> Result<ColoredPoly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ColoredPoly) -> Result<ColoredPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ColoredPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> ColoredPoly {
        if c.is_zero() {
            return ColoredPoly::zero(&self.gamma);
        }
        ColoredPoly {
            gamma: self.gamma.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &ColoredPoly) -> Result<ColoredPoly> {
        self.check_same_vars(other)?;
        let mut acc: HashMap<Exponents, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Ok(ColoredPoly {
            gamma: self.gamma.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Rename variables into the variable set of `target`: variable `v` of
    /// `self` becomes variable `map[v]`. The map must be injective.
    pub fn substitute(&self, target: &DimVector, map: &[usize]) -> Result<ColoredPoly> {
        let n = target.total() as usize;
        if map.len() != self.nvars() {
            return Err(Error::Dimension(format!(
                "substitution has {} entries for {} variables",
                map.len(),
                self.nvars()
            )));
        }
        let mut seen = vec![false; n];
        for &m in map {
            if m >= n || std::mem::replace(&mut seen[m], true) {
                return Err(Error::Dimension(format!(
                    "substitution is not an injection into {n} variables"
                )));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; n];
                for (v, &x) in e.iter().enumerate() {
                    f[map[v]] = x;
                }
                (f, c.clone())
            })
            .collect();
        Ok(ColoredPoly {
            gamma: target.clone(),
            terms,
        })
    }

    /// Exact quotient `self / den`, or [`Error::NotDivisible`] carrying the
    /// remainder of lexicographic division.
    pub fn exact_divide(&self, den: &ColoredPoly) -> Result<ColoredPoly> {
        self.check_same_vars(den)?;
        let (lead_e, lead_c) = den
            .terms
            .iter()
            .next_back()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        let mut leftover = ColoredPoly::zero(&self.gamma);
        while let Some((e, c)) = rem.pop_last() {
            let divides = e.iter().zip(lead_e).all(|(a, b)| a >= b);
            if !divides {
                leftover.terms.insert(e, c);
                continue;
            }
            let qe: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            for (de, dc) in den.terms.iter().rev().skip(1) {
                let m: Exponents = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                let delta = &qc * dc;
                match rem.get_mut(&m) {
                    Some(x) => {
                        *x -= delta;
                        if x.is_zero() {
                            rem.remove(&m);
                        }
                    }
                    None => {
                        rem.insert(m, -delta);
                    }
                }
            }
            quot.insert(qe, qc);
        }
        if !leftover.is_zero() {
            return Err(Error::NotDivisible {
                remainder: leftover.to_string(),
            });
        }
        Ok(ColoredPoly {
            gamma: self.gamma.clone(),
            terms: quot,
        })
    }

    /// Index ranges of each color block in the flat variable layout.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        blocks(&self.gamma)
    }

    /// Invariance under all permutations of variables inside each color
    /// block, tested on adjacent transpositions (which generate).
    pub fn is_block_symmetric(&self) -> bool {
        for block in self.blocks() {
            for v in block.start..block.end.saturating_sub(1) {
                for (e, c) in &self.terms {
                    let mut f = e.clone();
                    f.swap(v, v + 1);
                    if self.terms.get(&f) != Some(c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Representative exponent for a block-symmetric orbit: exponents sorted
    /// in decreasing order inside every block.
    pub fn canonical_exponents(gamma: &DimVector, e: &[u32]) -> Exponents {
        let mut f = e.to_vec();
        for b in blocks(gamma) {
            f[b].sort_unstable_by(|x, y| y.cmp(x));
        }
        f
    }

    /// Parse the canonical rendering (terms like `3/2*x0_1^2*x1_1`, joined by
    /// `+`/`-`). A bare `x` is accepted when there is exactly one variable.
    pub fn parse(gamma: &DimVector, text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::parse("polynomial", "empty input"));
        }
        let n = gamma.total() as usize;
        let mut p = ColoredPoly::zero(gamma);
        let mut pos = 0usize;
        let bytes = s.as_bytes();
        while pos < bytes.len() {
            let mut sign = Rational::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos > 0 {
                return Err(Error::parse(format!("offset {pos}"), "expected `+` or `-`"));
            }
            let end = s[pos..]
                .find(['+', '-'])
                .map(|i| pos + i)
                .unwrap_or(bytes.len());
            let term = &s[pos..end];
            if term.is_empty() {
                return Err(Error::parse(format!("offset {pos}"), "empty term"));
            }
            let mut coeff = sign;
            let mut exps = vec![0u32; n];
            for factor in term.split('*') {
                let (base, power) = match factor.split_once('^') {
                    Some((b, pw)) => (
                        b,
                        pw.parse::<u32>().map_err(|_| {
                            Error::parse(format!("offset {pos}"), format!("bad exponent in `{factor}`"))
                        })?,
                    ),
                    None => (factor, 1),
                };
                if base.starts_with('x') {
                    let idx = parse_var(gamma, base)
                        .map_err(|m| Error::parse(format!("offset {pos}"), m))?;
                    exps[idx] += power;
                } else {
                    let c = parse_rational(base)
                        .map_err(|_| Error::parse(format!("offset {pos}"), format!("bad factor `{factor}`")))?;
                    for _ in 0..power {
                        coeff *= &c;
                    }
                }
            }
            p.add_term(exps, coeff);
            pos = end;
        }
        Ok(p)
    }
}

fn parse_var(gamma: &DimVector, name: &str) -> std::result::Result<usize, String> {
    if name == "x" {
        return if gamma.total() == 1 {
            Ok(0)
        } else {
            Err("bare `x` needs exactly one variable".into())
        };
    }
    let (v, r) = name[1..]
        .split_once('_')
        .ok_or_else(|| format!("variable `{name}` is not of the form x<vertex>_<slot>"))?;
    let v: usize = v.parse().map_err(|_| format!("bad vertex in `{name}`"))?;
    let r: u32 = r.parse().map_err(|_| format!("bad slot in `{name}`"))?;
    var_index(gamma, v, r).map_err(|e| e.to_string())
}

pub(crate) fn blocks(gamma: &DimVector) -> Vec<std::ops::Range<usize>> {
    let mut start = 0usize;
    gamma
        .entries()
        .iter()
        .map(|&g| {
            let r = start..start + g as usize;
            start += g as usize;
            r
        })
        .collect()
}

pub(crate) fn var_index(gamma: &DimVector, vertex: usize, slot: u32) -> Result<usize> {
    let g = gamma.entries();
    if vertex >= g.len() || slot == 0 || slot > g[vertex] {
        return Err(Error::Dimension(format!(
            "no variable x{vertex}_{slot} for dimension vector {gamma}"
        )));
    }
    Ok(g[..vertex].iter().sum::<u32>() as usize + slot as usize - 1)
}

fn var_names(gamma: &DimVector) -> Vec<String> {
    let mut names = Vec::new();
    for (i, &g) in gamma.entries().iter().enumerate() {
        for r in 1..=g {
            names.push(format!("x{i}_{r}"));
        }
    }
    names
}

impl fmt::Display for ColoredPoly {
    /// Terms from the lexicographically largest exponent down.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = var_names(&self.gamma);
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(abs.to_string());
            }
            for (v, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{x}", names[v])),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
