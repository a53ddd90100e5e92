//! Quivers, dimension vectors and the Euler form.
//!
//! Vertices are numbered `0..n` in input order. A quiver is stored as its
//! arrow-multiplicity matrix, `arrows[i][j]` being the number of arrows
//! `i -> j`.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// The `i`-th coordinate vector `e_i` in `n` vertices.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|γ|`, the sum of the entries.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&g| g == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scaled(&self, r: u32) -> DimVector {
        DimVector(self.0.iter().map(|g| g * r).collect())
    }

    /// Parity vector `γ̄` in `(Z/2)^I`.
    pub fn parity(&self) -> Vec<u8> {
        self.0.iter().map(|g| (g % 2) as u8).collect()
    }

    /// Key for the canonical enumeration order: by `|γ|`, then lexicographic.
    pub fn graded_key(&self) -> (u32, &[u32]) {
        (self.total(), &self.0)
    }

    /// All `γ` with `0 <= γ <= bound` componentwise, in graded order.
    /// Includes the zero vector.
    pub fn all_below(bound: &DimVector) -> Vec<DimVector> {
        let mut out = vec![Vec::with_capacity(bound.len())];
        for &b in &bound.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=b).map(move |g| {
                        let mut v = prefix.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
        }
        let mut out: Vec<DimVector> = out.into_iter().map(DimVector).collect();
        sort_graded(&mut out);
        out
    }

    /// All decompositions `self = a + b` with `a, b` non-zero, `a` running
    /// in graded order.
    pub fn proper_splits(&self) -> Vec<(DimVector, DimVector)> {
        DimVector::all_below(self)
            .into_iter()
            .filter(|a| !a.is_zero() && a != self)
            .map(|a| {
                let b = self.checked_sub(&a).expect("a <= self");
                (a, b)
            })
            .collect()
    }
}

pub fn sort_graded(v: &mut [DimVector]) {
    v.sort_by(|a, b| a.graded_key().cmp(&b.graded_key()));
}

impl Add for &DimVector {
    type Output = DimVector;

    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len(), "dimension vectors of different length");
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DimVector {
    type Output = DimVector;

    fn sub(self, rhs: &DimVector) -> DimVector {
        self.checked_sub(rhs).expect("dimension vector subtraction underflow")
    }
}

impl From<Vec<u32>> for DimVector {
    fn from(v: Vec<u32>) -> Self {
        DimVector(v)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// A finite quiver given by its arrow-multiplicity matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    arrows: Vec<Vec<u32>>,
}

impl Quiver {
    pub fn from_matrix(arrows: Vec<Vec<u32>>) -> Result<Self> {
        let n = arrows.len();
        if n == 0 {
            return Err(Error::Domain("a quiver needs at least one vertex".into()));
        }
        if let Some(row) = arrows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "arrow matrix row {row} has length {}, expected {n}",
                arrows[row].len()
            )));
        }
        Ok(Quiver { arrows })
    }

    /// Quiver with `n` vertices and arrows given as `(source, target,
    /// multiplicity)` triples; repeated pairs add up.
    pub fn from_arrows(n: usize, list: &[(usize, usize, u32)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a quiver needs at least one vertex".into()));
        }
        let mut arrows = vec![vec![0; n]; n];
        for &(i, j, m) in list {
            if i >= n || j >= n {
                return Err(Error::Dimension(format!(
                    "arrow ({i},{j}) out of range for {n} vertices"
                )));
            }
            arrows[i][j] += m;
        }
        Ok(Quiver { arrows })
    }

    /// One vertex carrying `m` loops.
    pub fn loops(m: u32) -> Self {
        Quiver { arrows: vec![vec![m]] }
    }

    pub fn vertex_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self, i: usize, j: usize) -> u32 {
        self.arrows[i][j]
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.arrows
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.vertex_count();
        (0..n).all(|i| (0..n).all(|j| self.arrows[i][j] == self.arrows[j][i]))
    }

    pub fn ensure_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::Domain("quiver is not symmetric".into()))
        }
    }

    pub fn check_dim(&self, g: &DimVector) -> Result<()> {
        if g.len() == self.vertex_count() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "dimension vector {g} has {} entries, quiver has {} vertices",
                g.len(),
                self.vertex_count()
            )))
        }
    }

    /// The Euler form `χ_Q(g1, g2) = Σ g1ⁱ g2ⁱ − Σ a_ij g1ⁱ g2ʲ`.
    pub fn euler_form(&self, g1: &DimVector, g2: &DimVector) -> Result<i64> {
        self.check_dim(g1)?;
        self.check_dim(g2)?;
        Ok(self.euler_unchecked(g1, g2))
    }

    pub(crate) fn euler_unchecked(&self, g1: &DimVector, g2: &DimVector) -> i64 {
        let (a, b) = (g1.entries(), g2.entries());
        let n = self.vertex_count();
        let mut chi = 0i64;
        for i in 0..n {
            chi += a[i] as i64 * b[i] as i64;
            for j in 0..n {
                chi -= self.arrows[i][j] as i64 * a[i] as i64 * b[j] as i64;
            }
        }
        chi
    }

    /// The doubled quiver: every arrow together with its reverse.
    pub fn double(&self) -> Quiver {
        let n = self.vertex_count();
        let arrows = (0..n)
            .map(|i| (0..n).map(|j| self.arrows[i][j] + self.arrows[j][i]).collect())
            .collect();
        Quiver { arrows }
    }

    /// Canonical mod-2 sign form: `psi[i][j] = χ(eᵢ,eⱼ) + χ(eᵢ,eᵢ)χ(eⱼ,eⱼ) mod 2`
    /// for `i < j`, zero on and below the diagonal.
    pub fn sign_form(&self) -> Result<SignForm> {
        self.ensure_symmetric()?;
        let n = self.vertex_count();
        let e: Vec<DimVector> = (0..n).map(|i| DimVector::unit(n, i)).collect();
        let rhs = |i: usize, j: usize| -> u8 {
            let v = self.euler_unchecked(&e[i], &e[j])
                + self.euler_unchecked(&e[i], &e[i]) * self.euler_unchecked(&e[j], &e[j]);
            v.rem_euclid(2) as u8
        };
        for i in 0..n {
            if rhs(i, i) != 0 {
                return Err(Error::Structural(format!(
                    "sign-form right-hand side is odd on the diagonal at vertex {i}"
                )));
            }
        }
        let psi = (0..n)
            .map(|i| (0..n).map(|j| if i < j { rhs(i, j) } else { 0 }).collect())
            .collect();
        Ok(SignForm { psi })
    }

    /// `(dim M_γ, dim G_γ, d_γ)` with `d_γ = dim M_γ − dim G_γ + 1`.
    pub fn moduli_dimensions(&self, g: &DimVector) -> Result<(i64, i64, i64)> {
        self.check_dim(g)?;
        let e = g.entries();
        let n = self.vertex_count();
        let mut dim_m = 0i64;
        for i in 0..n {
            for j in 0..n {
                dim_m += self.arrows[i][j] as i64 * e[i] as i64 * e[j] as i64;
            }
        }
        let dim_g: i64 = e.iter().map(|&x| (x as i64) * (x as i64)).sum();
        Ok((dim_m, dim_g, dim_m - dim_g + 1))
    }

    pub fn to_spec(&self) -> QuiverSpec {
        let n = self.vertex_count();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.arrows[i][j] > 0 {
                    arrows.push([i as u64, j as u64, self.arrows[i][j] as u64]);
                }
            }
        }
        QuiverSpec {
            vertices: n as u64,
            arrows,
        }
    }

    pub fn from_spec(spec: &QuiverSpec) -> Result<Self> {
        let n = spec.vertices as usize;
        if n == 0 {
            return Err(Error::parse("vertices", "a quiver needs at least one vertex"));
        }
        let mut arrows = vec![vec![0u32; n]; n];
        for (idx, &[i, j, m]) in spec.arrows.iter().enumerate() {
            if i as usize >= n || j as usize >= n {
                return Err(Error::parse(
                    format!("arrows[{idx}]"),
                    format!("vertex index out of range 0..{n}"),
                ));
            }
            let m = u32::try_from(m)
                .map_err(|_| Error::parse(format!("arrows[{idx}]"), "multiplicity too large"))?;
            arrows[i as usize][j as usize] += m;
        }
        Ok(Quiver { arrows })
    }

    /// Parse the JSON quiver format `{"vertices": n, "arrows": [[i, j, mult], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: QuiverSpec = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        Quiver::from_spec(&spec)
    }
}

/// Serialized form of a quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub vertices: u64,
    pub arrows: Vec<[u64; 3]>,
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = QuiverSpec::deserialize(d)?;
        Quiver::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

/// Bilinear form `ψ` on `(Z/2)^I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignForm {
    psi: Vec<Vec<u8>>,
}

impl SignForm {
    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.psi
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.psi[i][j]
    }

    /// `ψ(γ̄₁, γ̄₂)` in `{0, 1}`.
    pub fn eval(&self, g1: &DimVector, g2: &DimVector) -> u8 {
        let (a, b) = (g1.parity(), g2.parity());
        let mut s = 0u8;
        for (i, row) in self.psi.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                s ^= p & a[i] & b[j];
            }
        }
        s
    }

    /// Build from an explicit matrix, for quivers where a non-canonical form
    /// is wanted.
    pub fn from_matrix(psi: Vec<Vec<u8>>) -> Self {
        SignForm {
            psi: psi.into_iter().map(|r| r.into_iter().map(|x| x % 2).collect()).collect(),
        }
    }

    /// Check `ψ(a,b) + ψ(b,a) ≡ χ(a,b) + χ(a,a)χ(b,b) (mod 2)`.
    pub fn satisfies_congruence(&self, q: &Quiver, g1: &DimVector, g2: &DimVector) -> bool {
        let lhs = (self.eval(g1, g2) + self.eval(g2, g1)) % 2;
        let rhs = (q.euler_unchecked(g1, g2)
            + q.euler_unchecked(g1, g1) * q.euler_unchecked(g2, g2))
        .rem_euclid(2) as u8;
        lhs == rhs
    }
}
