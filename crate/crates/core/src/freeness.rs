//! Generator counts of the CoHA by exact linear algebra.
//!
//! `dim V_{γ,k}` is the dimension of `H_{γ,k}` modulo decomposables, the span
//! of all products `H_{γ₁,k₁} * H_{γ₂,k₂}` with `γ₁, γ₂ ≠ 0`. Primitive
//! counts follow from `V = V^prim ⊗ Q[x]` with `x` of bidegree `(0, 2)`:
//! `c_{γ,k} = dim V_{γ,k} − dim V_{γ,k−2}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coha::{basis_polys, symmetric_coordinates, twist_sign, ShuffleKernel};
use crate::error::{Error, Result};
use crate::exactalg::linalg::row_echelon;
use crate::exactalg::{ColoredPoly, Rational};
use crate::quiver::{DimVector, Quiver, SignForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    /// Generators, `dim V_{γ,k}`.
    V,
    /// Primitive generators, `c_{γ,k}`.
    Vprim,
}

/// Table of non-negative integers indexed by bidegree `(γ, k)`. Each `γ`
/// carries an inclusive window `[k_lo, k_hi]`; values outside it are
/// unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenTable {
    flavor: Flavor,
    windows: BTreeMap<DimVector, (i64, i64)>,
    values: BTreeMap<(DimVector, i64), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenCell {
    pub gamma: DimVector,
    pub k: i64,
    pub dim: u64,
}

impl GenTable {
    pub fn new(flavor: Flavor) -> Self {
        GenTable {
            flavor,
            windows: BTreeMap::new(),
            values: BTreeMap::new(),
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Record the column for `γ`: `values[i]` is the entry at `k_lo + i`.
    pub fn set_column(&mut self, gamma: DimVector, k_lo: i64, values: &[u64]) {
        let k_hi = k_lo + values.len() as i64 - 1;
        self.values.retain(|(g, _), _| g != &gamma);
        for (i, &v) in values.iter().enumerate() {
            if v != 0 {
                self.values.insert((gamma.clone(), k_lo + i as i64), v);
            }
        }
        self.windows.insert(gamma, (k_lo, k_hi));
    }

    pub fn window(&self, gamma: &DimVector) -> Option<(i64, i64)> {
        self.windows.get(gamma).copied()
    }

    pub fn gammas(&self) -> Vec<DimVector> {
        let mut g: Vec<DimVector> = self.windows.keys().cloned().collect();
        crate::quiver::sort_graded(&mut g);
        g
    }

    /// `None` outside the window.
    pub fn get(&self, gamma: &DimVector, k: i64) -> Option<u64> {
        let (lo, hi) = self.window(gamma)?;
        if k < lo || k > hi {
            return None;
        }
        Some(self.values.get(&(gamma.clone(), k)).copied().unwrap_or(0))
    }

    /// Non-zero entries in the column of `γ`.
    pub fn nonzero(&self, gamma: &DimVector) -> Vec<(i64, u64)> {
        self.values
            .iter()
            .filter(|((g, _), _)| g == gamma)
            .map(|((_, k), v)| (*k, *v))
            .collect()
    }

    /// Every cell inside the windows, sorted by `(|γ|, γ, k)`.
    pub fn cells(&self) -> Vec<GenCell> {
        let mut out = Vec::new();
        for gamma in self.gammas() {
            let (lo, hi) = self.windows[&gamma];
            for k in lo..=hi {
                out.push(GenCell {
                    gamma: gamma.clone(),
                    k,
                    dim: self.get(&gamma, k).unwrap_or(0),
                });
            }
        }
        out
    }

    /// JSON rendering `[{"gamma": [...], "k": int, "dim": int}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.cells()).expect("cells serialize")
    }
}

/// Caches shuffle kernels and graded bases for one quiver.
pub struct Freeness {
    quiver: Arc<Quiver>,
    psi: SignForm,
    kernels: HashMap<(DimVector, DimVector), ShuffleKernel>,
    bases: HashMap<(DimVector, i64), Vec<ColoredPoly>>,
    twisted: bool,
}

impl Freeness {
    pub fn new(quiver: Arc<Quiver>) -> Result<Self> {
        let psi = quiver.sign_form()?;
        Ok(Freeness {
            quiver,
            psi,
            kernels: HashMap::new(),
            bases: HashMap::new(),
            twisted: true,
        })
    }

    /// Span decomposables with the untwisted product instead.
    pub fn untwisted(mut self) -> Self {
        self.twisted = false;
        self
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    fn chi(&self, g: &DimVector) -> i64 {
        self.quiver.euler_unchecked(g, g)
    }

    fn basis(&mut self, gamma: &DimVector, k: i64) -> Result<&Vec<ColoredPoly>> {
        let key = (gamma.clone(), k);
        if !self.bases.contains_key(&key) {
            let b = basis_polys(&self.quiver, gamma, k)?;
            self.bases.insert(key.clone(), b);
        }
        Ok(&self.bases[&key])
    }

    fn kernel(&mut self, g1: &DimVector, g2: &DimVector) -> Result<&ShuffleKernel> {
        let key = (g1.clone(), g2.clone());
        if !self.kernels.contains_key(&key) {
            let kern = ShuffleKernel::new(self.quiver.clone(), g1, g2)?;
            self.kernels.insert(key.clone(), kern);
        }
        Ok(&self.kernels[&key])
    }

    /// Dimension of the decomposable subspace of `H_{γ,k}`, with a basis of it.
    pub fn decomposable(&mut self, gamma: &DimVector, k: i64) -> Result<(usize, Vec<ColoredPoly>)> {
        self.quiver.check_dim(gamma)?;
        let target = self.basis(gamma, k)?.clone();
        if target.is_empty() {
            return Ok((0, Vec::new()));
        }
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (g1, g2) in gamma.proper_splits() {
            let (c1, c2) = (self.chi(&g1), self.chi(&g2));
            let sign = if self.twisted {
                twist_sign(&self.psi, &g1, &g2)
            } else {
                num_traits::One::one()
            };
            let mut k1 = c1;
            while k1 + c2 <= k {
                let k2 = k - k1;
                let left = self.basis(&g1, k1)?.clone();
                let right = self.basis(&g2, k2)?.clone();
                if !left.is_empty() && !right.is_empty() {
                    let kernel = self.kernel(&g1, &g2)?;
                    for a in &left {
                        for b in &right {
                            let p = kernel.apply(a, b)?.scale(&sign);
                            debug_assert!(p.is_block_symmetric());
                            rows.push(symmetric_coordinates(&p, &target));
                        }
                    }
                }
                k1 += 2;
            }
        }
        let echelon = row_echelon(&rows);
        let span = echelon
            .iter()
            .map(|row| {
                let mut p = ColoredPoly::zero(gamma);
                for (c, b) in row.iter().zip(&target) {
                    p = p.add(&b.scale(&BigRational::from_integer(c.clone())))?;
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((span.len(), span))
    }

    /// `dim V_{γ,k}` for `k` in `[χ(γ,γ), kmax]`.
    pub fn generator_column(&mut self, gamma: &DimVector, kmax: i64) -> Result<Vec<u64>> {
        self.quiver.check_dim(gamma)?;
        if gamma.is_zero() {
            return Err(Error::Domain("generators live in non-zero dimension vectors".into()));
        }
        let chi = self.chi(gamma);
        if kmax < chi {
            return Err(Error::Domain(format!("kmax {kmax} below χ(γ,γ) = {chi}")));
        }
        let mut out = Vec::new();
        for k in chi..=kmax {
            let total = self.basis(gamma, k)?.len();
            let (dec, _) = self.decomposable(gamma, k)?;
            out.push((total - dec) as u64);
        }
        Ok(out)
    }

    /// `c_{γ,k}` for `k` in `[χ(γ,γ), kmax]`.
    pub fn primitive_column(&mut self, gamma: &DimVector, kmax: i64) -> Result<Vec<u64>> {
        let v = self.generator_column(gamma, kmax)?;
        primitive_from_generators(gamma, self.chi(gamma), &v)
    }

    pub fn generator_dims(&mut self, gamma: &DimVector, kmax: i64) -> Result<GenTable> {
        let v = self.generator_column(gamma, kmax)?;
        let mut t = GenTable::new(Flavor::V);
        t.set_column(gamma.clone(), self.chi(gamma), &v);
        Ok(t)
    }

    pub fn prim_dims(&mut self, gamma: &DimVector, kmax: i64) -> Result<GenTable> {
        let c = self.primitive_column(gamma, kmax)?;
        let mut t = GenTable::new(Flavor::Vprim);
        t.set_column(gamma.clone(), self.chi(gamma), &c);
        Ok(t)
    }

    /// Primitive table over several `γ`, each with its own `kmax`.
    pub fn prim_table(&mut self, columns: &[(DimVector, i64)]) -> Result<GenTable> {
        let mut t = GenTable::new(Flavor::Vprim);
        for (gamma, kmax) in columns {
            let c = self.primitive_column(gamma, *kmax)?;
            t.set_column(gamma.clone(), self.chi(gamma), &c);
        }
        Ok(t)
    }
}

fn primitive_from_generators(gamma: &DimVector, k_lo: i64, v: &[u64]) -> Result<Vec<u64>> {
    (0..v.len())
        .map(|i| {
            let below = if i >= 2 { v[i - 2] } else { 0 };
            v[i].checked_sub(below).ok_or_else(|| {
                Error::Structural(format!(
                    "dim V at ({gamma}, {}) is smaller than at k−2",
                    k_lo + i as i64
                ))
            })
        })
        .collect()
}

/// Dimension of the decomposables in `H_{γ,k}` and a basis of them.
pub fn decomposable_dim(
    quiver: &Arc<Quiver>,
    gamma: &DimVector,
    k: i64,
) -> Result<(usize, Vec<ColoredPoly>)> {
    Freeness::new(quiver.clone())?.decomposable(gamma, k)
}

pub fn generator_dims(quiver: &Arc<Quiver>, gamma: &DimVector, kmax: i64) -> Result<GenTable> {
    Freeness::new(quiver.clone())?.generator_dims(gamma, kmax)
}

pub fn prim_dims(quiver: &Arc<Quiver>, gamma: &DimVector, kmax: i64) -> Result<GenTable> {
    Freeness::new(quiver.clone())?.prim_dims(gamma, kmax)
}
