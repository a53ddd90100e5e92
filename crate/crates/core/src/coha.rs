//! The cohomological Hall algebra of a symmetric quiver as a shuffle algebra.
//!
//! `H_γ` is the ring of polynomials in `γⁱ` variables of each color `i` that
//! are symmetric inside every color. For `a ∈ H_{γ₁}`, `b ∈ H_{γ₂}` the
//! product is
//!
//! ```text
//! a·b = Σ_S a(x′) b(x″) ∏_{i,j} ∏_{r∈Sᵢ, s∉Sⱼ} (x″_{j,s} − x′_{i,r})^{a_ij}
//!                     / ∏_i ∏_{r∈Sᵢ, s∉Sᵢ} (x″_{i,s} − x′_{i,r})
//! ```
//!
//! summed over slot choices `Sᵢ ⊆ {1..γⁱ}` with `|Sᵢ| = γ₁ⁱ`; `x′` are the
//! chosen slots in increasing order and `x″` the rest. Summands are put over
//! the Vandermonde `∏_{r<s} (x_{i,s} − x_{i,r})` of the colors that need it,
//! and the summed numerator is divided exactly at the end.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::poly::blocks;
use crate::exactalg::packed::{divide, integer_terms, mul3_into, sorted_terms, to_poly, IntTerms, Packing};
use crate::exactalg::{ColoredPoly, Rational};
use crate::quiver::{DimVector, Quiver, SignForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohaElement {
    quiver: Arc<Quiver>,
    poly: ColoredPoly,
}

impl CohaElement {
    pub fn new(quiver: Arc<Quiver>, poly: ColoredPoly) -> Result<Self> {
        quiver.ensure_symmetric()?;
        quiver.check_dim(poly.gamma())?;
        if !poly.is_block_symmetric() {
            return Err(Error::Domain(format!(
                "polynomial {poly} is not symmetric within color blocks"
            )));
        }
        Ok(CohaElement { quiver, poly })
    }

    /// The unit `1 ∈ H_0`.
    pub fn unit(quiver: Arc<Quiver>) -> Result<Self> {
        let zero = DimVector::zero(quiver.vertex_count());
        CohaElement::new(quiver, ColoredPoly::one(&zero))
    }

    pub fn parse(quiver: Arc<Quiver>, gamma: &DimVector, text: &str) -> Result<Self> {
        quiver.check_dim(gamma)?;
        let poly = ColoredPoly::parse(gamma, text)?;
        CohaElement::new(quiver, poly)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn gamma(&self) -> &DimVector {
        self.poly.gamma()
    }

    pub fn poly(&self) -> &ColoredPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `(γ, k)` with `k = 2·deg + χ(γ,γ)`, for non-zero homogeneous elements.
    pub fn bidegree(&self) -> Option<(DimVector, i64)> {
        let d = self.poly.homogeneous_degree()?;
        let g = self.gamma().clone();
        let chi = self.quiver.euler_unchecked(&g, &g);
        Some((g, 2 * d as i64 + chi))
    }

    pub fn scale(&self, c: &Rational) -> CohaElement {
        CohaElement {
            quiver: self.quiver.clone(),
            poly: self.poly.scale(c),
        }
    }

    pub fn add(&self, other: &CohaElement) -> Result<CohaElement> {
        self.check_quiver(other)?;
        Ok(CohaElement {
            quiver: self.quiver.clone(),
            poly: self.poly.add(&other.poly)?,
        })
    }

    fn check_quiver(&self, other: &CohaElement) -> Result<()> {
        if self.quiver == other.quiver {
            Ok(())
        } else {
            Err(Error::Domain("elements belong to different quivers".into()))
        }
    }
}

/// Precomputed shuffle data for a fixed pair `(γ₁, γ₂)`: one entry per slot
/// choice, holding the two variable embeddings and a polynomial factor.
///
/// At a vertex with loops one loop factor cancels the mixed denominator. At
/// the other vertices shared by both sides the factor carries
/// `Vandermonde / denominator` instead, and the summed numerator is divided
/// by that partial Vandermonde.
#[derive(Clone, Debug)]
pub struct ShuffleKernel {
    quiver: Arc<Quiver>,
    left: DimVector,
    right: DimVector,
    target: DimVector,
    summands: Vec<Summand>,
    vandermonde: ColoredPoly,
    packed: Option<PackedKernel>,
}

/// Integer copy of the kernel for the fast path.
#[derive(Clone, Debug)]
struct PackedKernel {
    packing: Packing,
    factors: Vec<IntTerms>,
    divisor: IntTerms,
    factor_degree: u32,
}

#[derive(Clone, Debug)]
struct Summand {
    left_map: Vec<usize>,
    right_map: Vec<usize>,
    factor: ColoredPoly,
}

fn linear_difference(target: &DimVector, plus: usize, minus: usize) -> ColoredPoly {
    let n = target.total() as usize;
    let mut e1 = vec![0; n];
    e1[plus] = 1;
    let mut e2 = vec![0; n];
    e2[minus] = 1;
    ColoredPoly::from_terms(target, [(e1, Rational::one()), (e2, -Rational::one())])
        .expect("well-formed exponents")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Per-color Vandermonde `∏ᵢ ∏_{r<s} (x_{i,s} − x_{i,r})`.
pub fn vandermonde(gamma: &DimVector) -> ColoredPoly {
    partial_vandermonde(gamma, &vec![true; gamma.len()])
}

/// The Vandermonde restricted to the colors `i` with `colors[i]`.
fn partial_vandermonde(gamma: &DimVector, colors: &[bool]) -> ColoredPoly {
    let mut v = ColoredPoly::one(gamma);
    for (b, _) in blocks(gamma).into_iter().zip(colors).filter(|(_, &c)| c) {
        for r in b.clone() {
            for s in r + 1..b.end {
                v = v.mul(&linear_difference(gamma, s, r)).expect("same variables");
            }
        }
    }
    v
}

impl ShuffleKernel {
    pub fn new(quiver: Arc<Quiver>, left: &DimVector, right: &DimVector) -> Result<Self> {
        quiver.ensure_symmetric()?;
        quiver.check_dim(left)?;
        quiver.check_dim(right)?;
        let target = left + right;
        let n = quiver.vertex_count();
        let tblocks = blocks(&target);
        let has_loops: Vec<bool> = (0..n).map(|i| quiver.arrows(i, i) > 0).collect();
        // Colors whose mixed denominator is non-empty and not cancelled.
        let split: Vec<bool> = (0..n)
            .map(|i| !has_loops[i] && left.entries()[i] > 0 && right.entries()[i] > 0)
            .collect();

        // Cartesian product of per-vertex slot choices.
        let mut choices: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for i in 0..n {
            let size = target.entries()[i] as usize;
            let pick = left.entries()[i] as usize;
            let options = combinations(size, pick);
            choices = choices
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |o| {
                        let mut p = prefix.clone();
                        p.push(o.clone());
                        p
                    })
                })
                .collect();
        }

        let mut summands = Vec::with_capacity(choices.len());
        for choice in choices {
            let mut left_map = Vec::new();
            let mut right_map = Vec::new();
            // flat indices of x′ and x″, per color
            let mut primed: Vec<Vec<usize>> = Vec::with_capacity(n);
            let mut doubled: Vec<Vec<usize>> = Vec::with_capacity(n);
            let mut sign_flips = 0usize;
            for i in 0..n {
                let base = tblocks[i].start;
                let size = target.entries()[i] as usize;
                let chosen = &choice[i];
                let rest: Vec<usize> = (0..size).filter(|s| !chosen.contains(s)).collect();
                if split[i] {
                    for &r in chosen {
                        sign_flips += rest.iter().filter(|&&s| s < r).count();
                    }
                }
                primed.push(chosen.iter().map(|r| base + r).collect());
                doubled.push(rest.iter().map(|s| base + s).collect());
                left_map.extend(primed[i].iter().copied());
                right_map.extend(doubled[i].iter().copied());
            }

            let mut factor = ColoredPoly::one(&target);
            if sign_flips % 2 == 1 {
                factor = factor.neg();
            }
            for i in 0..n {
                for j in 0..n {
                    let mut a = quiver.arrows(i, j);
                    if i == j && has_loops[i] {
                        a -= 1;
                    }
                    if a == 0 {
                        continue;
                    }
                    for &r in &primed[i] {
                        for &s in &doubled[j] {
                            let lin = linear_difference(&target, s, r);
                            for _ in 0..a {
                                factor = factor.mul(&lin)?;
                            }
                        }
                    }
                }
                if split[i] {
                    // Vandermonde over the mixed denominator leaves the
                    // same-side differences.
                    for side in [&primed[i], &doubled[i]] {
                        for (p, &r) in side.iter().enumerate() {
                            for &s in &side[p + 1..] {
                                factor = factor.mul(&linear_difference(&target, s, r))?;
                            }
                        }
                    }
                }
            }
            summands.push(Summand {
                left_map,
                right_map,
                factor,
            });
        }

        let vandermonde = partial_vandermonde(&target, &split);
        let packed = Packing::new(target.total() as usize).and_then(|packing| {
            Some(PackedKernel {
                factors: summands
                    .iter()
                    .map(|s| sorted_terms(&s.factor, &packing))
                    .collect::<Option<Vec<_>>>()?,
                divisor: sorted_terms(&vandermonde, &packing)?,
                factor_degree: summands.iter().filter_map(|s| s.factor.degree()).max().unwrap_or(0),
                packing,
            })
        });
        Ok(ShuffleKernel {
            vandermonde,
            quiver,
            left: left.clone(),
            right: right.clone(),
            target,
            summands,
            packed,
        })
    }

    /// Integer arithmetic on packed exponents; `None` sends the caller to the
    /// exact rational path.
    fn apply_packed(&self, a: &ColoredPoly, b: &ColoredPoly) -> Option<ColoredPoly> {
        let pk = self.packed.as_ref()?;
        if a.degree()? + b.degree()? + pk.factor_degree > pk.packing.max_degree() {
            return None;
        }
        let mut acc = HashMap::new();
        let mut den = BigInt::one();
        for (s, f) in self.summands.iter().zip(&pk.factors) {
            let (ta, da) = integer_terms(a, &pk.packing, &s.left_map)?;
            let (tb, db) = integer_terms(b, &pk.packing, &s.right_map)?;
            den = da * db;
            mul3_into(&mut acc, &ta, &tb, f)?;
        }
        let quot = if pk.divisor == [(0, 1)] {
            acc.into_iter().collect()
        } else {
            divide(acc, &pk.divisor, &pk.packing)?
        };
        Some(to_poly(&self.target, quot, &pk.packing, &den))
    }

    pub fn target(&self) -> &DimVector {
        &self.target
    }

    /// Untwisted product of polynomials living at `left` and `right`.
    pub fn apply(&self, a: &ColoredPoly, b: &ColoredPoly) -> Result<ColoredPoly> {
        if a.gamma() != &self.left || b.gamma() != &self.right {
            return Err(Error::Dimension(format!(
                "kernel built for {} x {}, got {} x {}",
                self.left,
                self.right,
                a.gamma(),
                b.gamma()
            )));
        }
        let mut numerator = ColoredPoly::zero(&self.target);
        if a.is_zero() || b.is_zero() {
            return Ok(numerator);
        }
        if let Some(p) = self.apply_packed(a, b) {
            return Ok(p);
        }
        for s in &self.summands {
            let a_s = a.substitute(&self.target, &s.left_map)?;
            let b_s = b.substitute(&self.target, &s.right_map)?;
            numerator = numerator.add(&a_s.mul(&b_s)?.mul(&s.factor)?)?;
        }
        numerator.exact_divide(&self.vandermonde)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }
}

/// The untwisted product `a·b`.
pub fn shuffle_product(a: &CohaElement, b: &CohaElement) -> Result<CohaElement> {
    a.check_quiver(b)?;
    let kernel = ShuffleKernel::new(a.quiver.clone(), a.gamma(), b.gamma())?;
    Ok(CohaElement {
        quiver: a.quiver.clone(),
        poly: kernel.apply(&a.poly, &b.poly)?,
    })
}

/// `(−1)^{ψ(γ̄₁,γ̄₂)}`.
pub fn twist_sign(psi: &SignForm, g1: &DimVector, g2: &DimVector) -> Rational {
    if psi.eval(g1, g2) == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// The twisted product `a * b = (−1)^{ψ(γ̄₁,γ̄₂)} a·b` with the canonical sign
/// form of the quiver.
pub fn twisted_product(a: &CohaElement, b: &CohaElement) -> Result<CohaElement> {
    let psi = a.quiver.sign_form()?;
    twisted_product_with(&psi, a, b)
}

pub fn twisted_product_with(psi: &SignForm, a: &CohaElement, b: &CohaElement) -> Result<CohaElement> {
    let prod = shuffle_product(a, b)?;
    Ok(prod.scale(&twist_sign(psi, a.gamma(), b.gamma())))
}

/// Partitions of `d` into at most `max_parts` parts, each in non-increasing
/// order, largest first part first.
pub fn partitions(d: u32, max_parts: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, cap: u32, parts_left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Distinct permutations of a multiset, in lexicographic order.
fn multiset_permutations(items: &[u32]) -> Vec<Vec<u32>> {
    let mut cur: Vec<u32> = items.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Compositions `d = d₀ + … + d_{n−1}` into `n` non-negative parts, in
/// lexicographic order.
fn compositions(d: u32, n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in compositions(d - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All index tuples `(i₀, …)` with `iₖ < sizes[k]`, last index fastest.
fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    sizes.iter().fold(vec![Vec::new()], |acc, &s| {
        acc.into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect()
    })
}

/// Monomial-symmetric basis of `H_{γ,k}`: products over vertices of `m_λ`
/// in that vertex's variables. Empty when `k` has the wrong parity or lies
/// below `χ(γ,γ)`.
pub fn basis(quiver: &Arc<Quiver>, gamma: &DimVector, k: i64) -> Result<Vec<CohaElement>> {
    Ok(basis_polys(quiver, gamma, k)?
        .into_iter()
        .map(|poly| CohaElement {
            quiver: quiver.clone(),
            poly,
        })
        .collect())
}

pub(crate) fn basis_polys(quiver: &Quiver, gamma: &DimVector, k: i64) -> Result<Vec<ColoredPoly>> {
    quiver.ensure_symmetric()?;
    quiver.check_dim(gamma)?;
    let chi = quiver.euler_unchecked(gamma, gamma);
    if k < chi || (k - chi) % 2 != 0 {
        return Ok(Vec::new());
    }
    let d = ((k - chi) / 2) as u32;
    let g = gamma.entries();
    let n = g.len();
    let nvars = gamma.total() as usize;
    let bl = blocks(gamma);
    let mut out = Vec::new();
    for comp in compositions(d, n) {
        // exponent patterns per vertex
        let mut per_vertex: Vec<Vec<Vec<Vec<u32>>>> = Vec::with_capacity(n);
        let mut empty = false;
        for i in 0..n {
            let parts = partitions(comp[i], g[i]);
            if parts.is_empty() {
                empty = true;
                break;
            }
            per_vertex.push(
                parts
                    .into_iter()
                    .map(|mut lam| {
                        lam.resize(g[i] as usize, 0);
                        multiset_permutations(&lam)
                    })
                    .collect(),
            );
        }
        if empty {
            continue;
        }
        // one basis element per choice of partition at each vertex
        let sizes: Vec<usize> = per_vertex.iter().map(|v| v.len()).collect();
        for index in cartesian(&sizes) {
            let mut poly = ColoredPoly::one(gamma);
            for i in 0..n {
                let terms = per_vertex[i][index[i]].iter().map(|p| {
                    let mut e = vec![0u32; nvars];
                    e[bl[i].clone()].copy_from_slice(p);
                    (e, Rational::one())
                });
                poly = poly.mul(&ColoredPoly::from_terms(gamma, terms)?)?;
            }
            out.push(poly);
        }
    }
    Ok(out)
}

/// Coordinates of a block-symmetric polynomial of degree `d` against the
/// monomial-symmetric basis of that degree: the coefficient of each orbit's
/// canonical representative.
pub(crate) fn symmetric_coordinates(p: &ColoredPoly, basis: &[ColoredPoly]) -> Vec<Rational> {
    basis
        .iter()
        .map(|b| {
            let rep = b.terms().keys().next_back().expect("basis element is non-zero");
            let canon = ColoredPoly::canonical_exponents(p.gamma(), rep);
            p.terms().get(&canon).cloned().unwrap_or_else(Rational::zero)
        })
        .collect()
}
