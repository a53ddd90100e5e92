//! Root combinatorics for graphs with loops and the nonvanishing criterion.
//!
//! Loop-free vertices give real simple roots with reflections; vertices
//! carrying loops give imaginary simple roots and are never reflected.

use serde::{Deserialize, Serialize};

use crate::cblegs::attach_legs;
use crate::{DimVector, Error, Quiver, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanData {
    loops: Vec<u32>,
    /// Edge multiplicities with orientation forgotten; zero on the diagonal.
    edges: Vec<Vec<u32>>,
}

impl CartanData {
    pub fn from_quiver(q: &Quiver) -> Self {
        let n = q.vertex_count();
        let loops = (0..n).map(|v| q.arrows(v, v)).collect();
        let edges = (0..n)
            .map(|u| (0..n).map(|v| if u == v { 0 } else { q.arrows(u, v) + q.arrows(v, u) }).collect())
            .collect();
        CartanData { loops, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.loops.len()
    }

    pub fn loops(&self, v: usize) -> u32 {
        self.loops[v]
    }

    pub fn edges(&self, u: usize, v: usize) -> u32 {
        self.edges[u][v]
    }

    fn check(&self, beta: &[i64]) -> Result<()> {
        if beta.len() != self.vertex_count() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a graph with {} vertices",
                beta.len(),
                self.vertex_count()
            )));
        }
        Ok(())
    }

    /// `(β, e_v)`.
    pub fn pairing(&self, beta: &[i64], v: usize) -> i64 {
        let own = 2 * (1 - self.loops[v] as i64) * beta[v];
        own - (0..beta.len()).map(|u| self.edges[u][v] as i64 * beta[u]).sum::<i64>()
    }

    pub fn bilinear(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok((0..b.len()).map(|v| b[v] * self.pairing(a, v)).sum())
    }

    pub fn tits_form(&self, beta: &[i64]) -> Result<i64> {
        self.check(beta)?;
        let n = beta.len();
        let diag: i64 = (0..n).map(|v| (1 - self.loops[v] as i64) * beta[v] * beta[v]).sum();
        let off: i64 = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| self.edges[u][v] as i64 * beta[u] * beta[v])
            .sum();
        Ok(diag - off)
    }

    /// `s_v(β) = β - (β, e_v) e_v`.
    pub fn reflect(&self, beta: &[i64], v: usize) -> Result<Vec<i64>> {
        self.check(beta)?;
        if v >= beta.len() || self.loops[v] > 0 {
            return Err(Error::Domain(format!("vertex {v} has no reflection")));
        }
        let mut out = beta.to_vec();
        out[v] -= self.pairing(beta, v);
        Ok(out)
    }

    fn support_connected(&self, beta: &[i64]) -> bool {
        let support: Vec<usize> = (0..beta.len()).filter(|&v| beta[v] != 0).collect();
        let Some(&start) = support.first() else { return false };
        let mut seen = vec![false; beta.len()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &support {
                if !seen[v] && self.edges[u][v] > 0 {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        support.iter().all(|&v| seen[v])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    Real,
    Imaginary,
    NotRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCertificate {
    pub result: bool,
    pub kind: RootKind,
    pub reflections: Vec<usize>,
    /// β at the point the algorithm stopped.
    pub witness: Vec<i64>,
}

impl RootCertificate {
    /// Replays the reflections from `beta` and checks the stopping condition
    /// the certificate claims.
    pub fn verify(&self, c: &CartanData, beta: &[i64]) -> bool {
        let mut cur = beta.to_vec();
        for &v in &self.reflections {
            match c.reflect(&cur, v) {
                Ok(next) => cur = next,
                Err(_) => return false,
            }
        }
        if cur != self.witness {
            return false;
        }
        let simple = simple_index(&cur);
        match self.kind {
            RootKind::Real => self.result && simple.is_some_and(|v| c.loops(v) == 0),
            RootKind::Imaginary => {
                self.result
                    && c.support_connected(&cur)
                    && cur.iter().all(|&x| x >= 0)
                    && (simple.is_some_and(|v| c.loops(v) > 0)
                        || (0..cur.len()).filter(|&v| cur[v] != 0).all(|v| c.pairing(&cur, v) <= 0))
            }
            RootKind::NotRoot => !self.result && (cur.iter().any(|&x| x < 0) || !c.support_connected(&cur)),
        }
    }
}

fn simple_index(beta: &[i64]) -> Option<usize> {
    let mut nz = beta.iter().enumerate().filter(|(_, &x)| x != 0);
    match (nz.next(), nz.next()) {
        (Some((v, 1)), None) => Some(v),
        _ => None,
    }
}

pub fn is_positive_root(c: &CartanData, beta: &[i64]) -> Result<RootCertificate> {
    c.check(beta)?;
    if beta.iter().any(|&x| x < 0) || beta.iter().all(|&x| x == 0) {
        return Err(Error::Domain("root test needs a non-zero, non-negative vector".into()));
    }
    let mut cur = beta.to_vec();
    let mut reflections = Vec::new();
    let done = |result, kind, reflections, witness| RootCertificate { result, kind, reflections, witness };
    loop {
        if !c.support_connected(&cur) {
            return Ok(done(false, RootKind::NotRoot, reflections, cur));
        }
        if let Some(v) = simple_index(&cur) {
            let kind = if c.loops(v) == 0 { RootKind::Real } else { RootKind::Imaginary };
            return Ok(done(true, kind, reflections, cur));
        }
        let Some(v) = (0..cur.len()).find(|&v| c.loops(v) == 0 && c.pairing(&cur, v) > 0) else {
            return Ok(done(true, RootKind::Imaginary, reflections, cur));
        };
        cur = c.reflect(&cur, v)?;
        reflections.push(v);
        if cur.iter().any(|&x| x < 0) {
            return Ok(done(false, RootKind::NotRoot, reflections, cur));
        }
    }
}

/// Root certificate of `γ̃` on the legged half quiver.
pub fn nonvanishing_certificate(q0: &Quiver, gamma: &DimVector) -> Result<RootCertificate> {
    if gamma.is_zero() {
        return Err(Error::Domain("nonvanishing criterion needs γ ≠ 0".into()));
    }
    let legs = attach_legs(&q0.double(), q0, gamma)?;
    let c = CartanData::from_quiver(&legs.half_quiver);
    let beta: Vec<i64> = legs.tilde_gamma.entries().iter().map(|&x| x as i64).collect();
    is_positive_root(&c, &beta)
}

/// Whether Ω(γ) of the double of `q0` is non-zero, decided on roots.
pub fn dt_nonvanishing(q0: &Quiver, gamma: &DimVector) -> Result<bool> {
    Ok(nonvanishing_certificate(q0, gamma)?.result)
}
