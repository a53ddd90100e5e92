//! Attaching legs to a quiver, eigenvalue data and the genericity test.
//!
//! Vertices of the legged quiver are labelled `[i, j]`: the base vertices
//! `[i, 0] = i` come first, then the leg vertices `[i, 1], ..., [i, γⁱ-1]`
//! for each `i` in order.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactalg::{parse_rational, render_rational, Rational};
use crate::{DimVector, Error, Quiver, Result};

/// Largest `|γ|` accepted by the exhaustive genericity test.
pub const GENERICITY_LIMIT: u32 = 8;

/// Eigenvalues `t_{i,1}, ..., t_{i,γⁱ}` at each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    t: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct EigenJson {
    t: Vec<Vec<String>>,
}

impl EigenData {
    pub fn new(t: Vec<Vec<Rational>>) -> Self {
        EigenData { t }
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.t
    }

    /// The dimension vector read off the number of eigenvalues per vertex.
    pub fn gamma(&self) -> DimVector {
        DimVector::new(self.t.iter().map(|v| v.len() as u32).collect())
    }

    pub fn trace(&self) -> Rational {
        self.t.iter().flatten().fold(Rational::zero(), |acc, x| acc + x)
    }

    fn check_shape(&self, gamma: &DimVector) -> Result<()> {
        if self.gamma() != *gamma {
            return Err(Error::Dimension(format!(
                "eigenvalue counts {} do not match γ = {gamma}",
                self.gamma()
            )));
        }
        Ok(())
    }

    fn check_trace(&self) -> Result<()> {
        let tr = self.trace();
        if !tr.is_zero() {
            return Err(Error::Domain(format!("eigenvalue trace is {}", render_rational(&tr))));
        }
        Ok(())
    }
}

impl Serialize for EigenData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EigenJson {
            t: self.t.iter().map(|v| v.iter().map(render_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EigenData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = EigenJson::deserialize(d)?;
        let t = raw
            .t
            .iter()
            .map(|v| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(EigenData { t })
    }
}

/// The legged quiver, its dimension vector and the half quiver it doubles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegData {
    pub tilde_quiver: Quiver,
    pub tilde_gamma: DimVector,
    /// `vertex_labels[k] = (i, j)` for the flat vertex `k`.
    pub vertex_labels: Vec<(usize, usize)>,
    pub half_quiver: Quiver,
}

impl LegData {
    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        self.vertex_labels.iter().position(|&l| l == (i, j))
    }

    pub fn label(&self, k: usize) -> (usize, usize) {
        self.vertex_labels[k]
    }

    pub fn base_vertex_count(&self) -> usize {
        self.vertex_labels.iter().filter(|l| l.1 == 0).count()
    }

    /// The original dimension vector γ.
    pub fn base_gamma(&self) -> DimVector {
        let n = self.base_vertex_count();
        DimVector::new(self.tilde_gamma.entries()[..n].to_vec())
    }
}

pub fn attach_legs(q: &Quiver, q0: &Quiver, gamma: &DimVector) -> Result<LegData> {
    if *q != q0.double() {
        return Err(Error::Domain("quiver is not the double of the given half quiver".into()));
    }
    q0.check_dim(gamma)?;
    let n = q0.vertex_count();
    let mut labels: Vec<(usize, usize)> = (0..n).map(|i| (i, 0)).collect();
    for (i, &g) in gamma.entries().iter().enumerate() {
        labels.extend((1..g as usize).map(|j| (i, j)));
    }
    let total = labels.len();
    let mut half = vec![vec![0u32; total]; total];
    for (i, row) in q0.matrix().iter().enumerate() {
        half[i][..n].copy_from_slice(row);
    }
    let flat = |l: (usize, usize)| labels.iter().position(|&x| x == l).expect("label");
    for &(i, j) in &labels[n..] {
        half[flat((i, j - 1))][flat((i, j))] += 1;
    }
    let tilde_gamma = DimVector::new(labels.iter().map(|&(i, j)| gamma.entries()[i] - j as u32).collect());
    let half_quiver = Quiver::from_matrix(half)?;
    Ok(LegData {
        tilde_quiver: half_quiver.double(),
        tilde_gamma,
        vertex_labels: labels,
        half_quiver,
    })
}

fn sorted_decreasing(v: &[Rational]) -> Vec<Rational> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.cmp(a));
    s
}

/// λ on the legged quiver. Eigenvalues at each vertex are sorted in
/// decreasing order first; other orders of the same multiset give other λ.
pub fn lambda_from_eigenvalues(t: &EigenData, legs: &LegData) -> Result<Vec<Rational>> {
    t.check_shape(&legs.base_gamma())?;
    t.check_trace()?;
    let sorted: Vec<Vec<Rational>> = t.values().iter().map(|v| sorted_decreasing(v)).collect();
    let lambda: Vec<Rational> = legs
        .vertex_labels
        .iter()
        .map(|&(i, j)| {
            let ti = &sorted[i];
            match (j, ti.first()) {
                (0, Some(t1)) => -t1,
                (0, None) => Rational::zero(),
                _ => &ti[j - 1] - &ti[j],
            }
        })
        .collect();
    let pairing = legs
        .tilde_gamma
        .entries()
        .iter()
        .zip(&lambda)
        .fold(Rational::zero(), |acc, (&g, l)| acc + Rational::from_integer(g.into()) * l);
    if !pairing.is_zero() {
        return Err(Error::Structural(format!("γ̃·λ = {}", render_rational(&pairing))));
    }
    Ok(lambda)
}

/// Why an eigenvalue datum fails to be generic. Positions are 0-based
/// indices into the per-vertex lists as given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GenericityWitness {
    Collision { vertex: usize, positions: [usize; 2] },
    ZeroSum { subsets: Vec<Vec<usize>> },
}

impl GenericityWitness {
    /// Checks that the witness really exhibits a failure for `t`.
    pub fn replay(&self, t: &EigenData) -> bool {
        let vals = t.values();
        match self {
            GenericityWitness::Collision { vertex, positions: [a, b] } => {
                let Some(v) = vals.get(*vertex) else { return false };
                a != b && *a < v.len() && *b < v.len() && v[*a] == v[*b]
            }
            GenericityWitness::ZeroSum { subsets } => {
                if subsets.len() != vals.len() {
                    return false;
                }
                let mut size = 0;
                let mut total = 0;
                let mut sum = Rational::zero();
                for (s, v) in subsets.iter().zip(vals) {
                    let mut seen = s.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    if seen.len() != s.len() || s.iter().any(|&p| p >= v.len()) {
                        return false;
                    }
                    size += s.len();
                    total += v.len();
                    for &p in s {
                        sum += &v[p];
                    }
                }
                size > 0 && size < total && sum.is_zero()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub witness: Option<GenericityWitness>,
}

pub fn is_generic(t: &EigenData, q: &Quiver, gamma: &DimVector) -> Result<GenericityReport> {
    q.check_dim(gamma)?;
    t.check_shape(gamma)?;
    t.check_trace()?;
    if gamma.total() > GENERICITY_LIMIT {
        return Err(Error::Limit(format!(
            "genericity test needs |γ| ≤ {GENERICITY_LIMIT}, got {}",
            gamma.total()
        )));
    }
    let vals = t.values();
    for (i, v) in vals.iter().enumerate() {
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                if v[a] == v[b] {
                    return Ok(GenericityReport {
                        generic: false,
                        witness: Some(GenericityWitness::Collision { vertex: i, positions: [a, b] }),
                    });
                }
            }
        }
    }
    // One bit per eigenvalue, vertex by vertex.
    let flat: Vec<(usize, usize, &Rational)> = vals
        .iter()
        .enumerate()
        .flat_map(|(i, v)| v.iter().enumerate().map(move |(p, x)| (i, p, x)))
        .collect();
    let full = (1u32 << flat.len()) - 1;
    for mask in 1..full {
        let sum = flat
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .fold(Rational::zero(), |acc, (_, (_, _, x))| acc + *x);
        if sum.is_zero() {
            let mut subsets = vec![Vec::new(); vals.len()];
            for (b, &(i, p, _)) in flat.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    subsets[i].push(p);
                }
            }
            return Ok(GenericityReport {
                generic: false,
                witness: Some(GenericityWitness::ZeroSum { subsets }),
            });
        }
    }
    Ok(GenericityReport { generic: true, witness: None })
}

/// Integer eigenvalues drawn from a ChaCha stream, the last one fixed by the
/// trace condition. The range doubles after every few failed draws.
pub fn sample_generic(q: &Quiver, gamma: &DimVector, seed: u64) -> Result<EigenData> {
    q.check_dim(gamma)?;
    if gamma.is_zero() {
        return Err(Error::Domain("cannot sample eigenvalues for γ = 0".into()));
    }
    if gamma.total() > GENERICITY_LIMIT {
        return Err(Error::Limit(format!(
            "genericity test needs |γ| ≤ {GENERICITY_LIMIT}, got {}",
            gamma.total()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range = 2 * gamma.total() as i64;
    let last = gamma.entries().iter().rposition(|&g| g > 0).expect("non-zero γ");
    loop {
        for _ in 0..8 {
            let mut t: Vec<Vec<Rational>> = gamma
                .entries()
                .iter()
                .map(|&g| (0..g).map(|_| Rational::from_integer(rng.gen_range(-range..=range).into())).collect())
                .collect();
            let tr = t.iter().flatten().fold(Rational::zero(), |acc, x| acc + x);
            let slot = t[last].last_mut().expect("non-empty");
            *slot = &*slot - tr;
            let data = EigenData::new(t);
            if is_generic(&data, q, gamma)?.generic {
                return Ok(data);
            }
        }
        range *= 2;
    }
}
