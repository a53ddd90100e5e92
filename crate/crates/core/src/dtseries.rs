//! Hilbert series of the CoHA, plethystic factorization, and the quantum DT
//! invariants `Ω(γ)(q) = Σ_k c_{γ,k} q^{k/2}`.
//!
//! The generating series `A = Σ_γ P_γ(q) x^γ` factors as
//! `∏_{γ,k} F_{γ,k}^{c_{γ,k}}` with
//!
//! * `F_{γ,k} = ∏_{n≥0} (1 − x^γ q^{k/2+n})^{−1}` for even `k`,
//! * `F_{γ,k} = ∏_{n≥0} (1 + x^γ q^{k/2+n})` for odd `k`.
//!
//! Extraction walks `γ` in graded order. Once every smaller `γ` has been
//! divided out, the `x^γ` coefficient of the remainder is
//! `Σ_k c_{γ,k} q^{k/2} / (1 − q)`, so the column of `γ` is read off after
//! multiplying by `(1 − q)`.
//!
//! Windows: each `P_γ` is exact on `[χ(γ,γ), χ(γ,γ) + qtrunc]` (half units).
//! The factor for `γ` is applied only through exponents known for `γ`; the
//! rest (unknown `c`, and the tail of each infinite product) is accounted
//! for by capping the windows of the higher coefficients it could touch.

use std::collections::BTreeMap;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{as_integer, rat, HalfSeries, MultiSeries, Rational};
use crate::freeness::{Flavor, GenTable};
use crate::quiver::{DimVector, Quiver};

/// `P_γ(q) = q^{χ(γ,γ)/2} ∏ᵢ ∏_{m=1}^{γⁱ} (1 − q^m)^{−1}`, exact on
/// `[χ(γ,γ), χ(γ,γ) + qtrunc]` in half units. `γ = 0` gives the exact `1`.
pub fn hilbert_series(quiver: &Quiver, gamma: &DimVector, qtrunc: i64) -> Result<HalfSeries> {
    quiver.ensure_symmetric()?;
    quiver.check_dim(gamma)?;
    if qtrunc < 0 {
        return Err(Error::Domain("qtrunc must be non-negative".into()));
    }
    if gamma.is_zero() {
        return Ok(HalfSeries::one());
    }
    let mut s = HalfSeries::one();
    for &g in gamma.entries() {
        for m in 1..=g as i64 {
            let factor = HalfSeries::exact([(0, rat(1)), (2 * m, rat(-1))]);
            s = s.mul(&factor.inverse(qtrunc)?);
        }
    }
    let chi = quiver.euler_unchecked(gamma, gamma);
    Ok(s.truncate(qtrunc).shift(chi))
}

/// `Σ_γ P_γ(q) x^γ` over `γ <= gamma_max` (and `|γ| <= total_max`).
pub fn generating_series(
    quiver: &Quiver,
    gamma_max: &DimVector,
    total_max: Option<u32>,
    qtrunc: i64,
) -> Result<MultiSeries> {
    quiver.check_dim(gamma_max)?;
    let mut a = MultiSeries::new(gamma_max.clone(), total_max);
    for g in a.support() {
        let p = hilbert_series(quiver, &g, qtrunc)?;
        a.set(g, p)?;
    }
    Ok(a)
}

/// `R ← R·(1 + sign·x^γ q^{e/2})`.
fn mul_binomial(r: &mut MultiSeries, support: &[DimVector], gamma: &DimVector, e: i64, sign: &Rational) {
    for d in support.iter().rev() {
        if let Some(rest) = d.checked_sub(gamma) {
            let term = r.get(&rest).shift(e).scale(sign);
            let v = r.get(d).add(&term);
            r.set(d.clone(), v).expect("in range");
        }
    }
}

/// `R ← R / (1 + sign·x^γ q^{e/2})`.
fn div_binomial(r: &mut MultiSeries, support: &[DimVector], gamma: &DimVector, e: i64, sign: &Rational) {
    for d in support {
        if let Some(rest) = d.checked_sub(gamma) {
            let term = r.get(&rest).shift(e).scale(sign);
            let v = r.get(d).sub(&term);
            r.set(d.clone(), v).expect("in range");
        }
    }
}

/// Result of a plethystic factorization.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub table: GenTable,
    /// What is left after dividing out every recognized factor; its
    /// coefficients vanish on their exact ranges for `γ ≠ 0`.
    pub remainder: MultiSeries,
}

/// Extract `c_{γ,k}` from a generating series, walking `γ` in graded order.
pub fn plethystic_factor(quiver: &Quiver, a: &MultiSeries) -> Result<GenTable> {
    plethystic_factor_ordered(quiver, a, &a.support()).map(|f| f.table)
}

/// As [`plethystic_factor`] but with an explicit processing order, which must
/// list every non-zero `γ` of the box with `|γ|` non-decreasing.
pub fn plethystic_factor_ordered(
    quiver: &Quiver,
    a: &MultiSeries,
    order: &[DimVector],
) -> Result<Factorization> {
    quiver.ensure_symmetric()?;
    let support = a.support();
    let zero = DimVector::zero(quiver.vertex_count());
    if a.get(&zero) != HalfSeries::one() {
        return Err(Error::Domain("generating series must have constant term 1".into()));
    }
    let order: Vec<DimVector> = order.iter().filter(|g| !g.is_zero()).cloned().collect();
    if order.len() + 1 != support.len()
        || order.windows(2).any(|w| w[0].total() > w[1].total())
        || order.iter().any(|g| !a.contains(g))
    {
        return Err(Error::Domain(
            "processing order must cover the box with |γ| non-decreasing".into(),
        ));
    }

    let one_minus_q = HalfSeries::exact([(0, rat(1)), (2, rat(-1))]);
    let mut rem = a.clone();
    let mut table = GenTable::new(Flavor::Vprim);

    for gamma in &order {
        let chi = quiver.euler_unchecked(gamma, gamma);
        let r = rem.get(gamma);
        let hi = r.hi().ok_or_else(|| {
            Error::Domain(format!("coefficient of x^{gamma} has no finite window"))
        })?;
        let c_series = r.mul(&one_minus_q);

        let mut column: BTreeMap<i64, u64> = BTreeMap::new();
        for (&k, c) in c_series.coeffs() {
            let n = as_integer(c).filter(|n| !n.is_negative()).ok_or_else(|| {
                Error::Structural(format!("c at ({gamma}, {k}) is {c}, not a non-negative integer"))
            })?;
            if k < chi || (k - chi) % 2 != 0 {
                return Err(Error::Structural(format!(
                    "non-zero c at ({gamma}, {k}) outside the degrees of H_γ"
                )));
            }
            let n = u64::try_from(n)
                .map_err(|_| Error::Structural(format!("c at ({gamma}, {k}) overflows")))?;
            column.insert(k, n);
        }
        if hi >= chi {
            let values: Vec<u64> = (chi..=hi).map(|k| column.get(&k).copied().unwrap_or(0)).collect();
            table.set_column(gamma.clone(), chi, &values);
        } else {
            table.set_column(gamma.clone(), chi, &[]);
        }

        // Every factor piece left out has exponent >= first_unknown; every
        // piece at all has exponent >= lowest.
        let first_unknown = hi + 1;
        let lowest = column.keys().next().copied().unwrap_or(first_unknown).min(first_unknown);
        let mut caps: Vec<(DimVector, i64)> = Vec::new();
        for d in &support {
            let mut cap: Option<i64> = None;
            let mut r_mult = 1u32;
            while let Some(rest) = d.checked_sub(&gamma.scaled(r_mult)) {
                if let Some(v) = rem.get(&rest).valuation() {
                    let bound = v + first_unknown + (r_mult as i64 - 1) * lowest - 1;
                    cap = Some(cap.map_or(bound, |c: i64| c.min(bound)));
                }
                r_mult += 1;
            }
            if let Some(c) = cap {
                caps.push((d.clone(), c));
            }
        }

        let minus_one = -Rational::one();
        for (&k, &mult) in &column {
            let mut e = k;
            while e <= hi {
                for _ in 0..mult {
                    if k.rem_euclid(2) == 0 {
                        mul_binomial(&mut rem, &support, gamma, e, &minus_one);
                    } else {
                        div_binomial(&mut rem, &support, gamma, e, &Rational::one());
                    }
                }
                e += 2;
            }
        }
        for (d, cap) in caps {
            let v = rem.get(&d).truncate(cap);
            rem.set(d, v)?;
        }
        if rem.get(gamma).has_nonzero() {
            return Err(Error::Structural(format!(
                "x^{gamma} coefficient survives division: {}",
                rem.get(gamma)
            )));
        }
    }
    Ok(Factorization {
        table,
        remainder: rem,
    })
}

/// Re-expand `∏ F_{γ,k}^{c_{γ,k}}` over a box, with windows reflecting the
/// unknown part of each column.
pub fn expand_factorization(table: &GenTable, bound: &DimVector, total_max: Option<u32>) -> Result<MultiSeries> {
    let mut out = MultiSeries::one(bound.clone(), total_max);
    let support = out.support();
    for gamma in support.iter().filter(|g| !g.is_zero()) {
        let (lo, hi) = table
            .window(gamma)
            .ok_or_else(|| Error::Domain(format!("table has no column for {gamma}")))?;
        let column = table.nonzero(gamma);
        let first_unknown = hi + 1;
        let lowest = column.first().map_or(first_unknown, |c| c.0).min(first_unknown).min(lo);
        let mut caps = Vec::new();
        for d in &support {
            let mut cap: Option<i64> = None;
            let mut r_mult = 1u32;
            while let Some(rest) = d.checked_sub(&gamma.scaled(r_mult)) {
                if let Some(v) = out.get(&rest).valuation() {
                    let bound = v + first_unknown + (r_mult as i64 - 1) * lowest - 1;
                    cap = Some(cap.map_or(bound, |c: i64| c.min(bound)));
                }
                r_mult += 1;
            }
            if let Some(c) = cap {
                caps.push((d.clone(), c));
            }
        }
        for &(k, mult) in &column {
            let mut e = k;
            while e <= hi {
                for _ in 0..mult {
                    if k.rem_euclid(2) == 0 {
                        div_binomial(&mut out, &support, gamma, e, &-Rational::one());
                    } else {
                        mul_binomial(&mut out, &support, gamma, e, &Rational::one());
                    }
                }
                e += 2;
            }
        }
        for (d, cap) in caps {
            let v = out.get(&d).truncate(cap);
            out.set(d, v)?;
        }
    }
    Ok(out)
}

/// `Ω(γ)(q) = Σ_k c_{γ,k} q^{k/2}` on the known window of the column.
pub fn omega_from_table(table: &GenTable, gamma: &DimVector) -> Option<HalfSeries> {
    let (lo, hi) = table.window(gamma)?;
    let coeffs = table
        .nonzero(gamma)
        .into_iter()
        .map(|(k, c)| (k, Rational::from_integer((c as i64).into())));
    Some(HalfSeries::windowed(coeffs, lo, hi).expect("cells lie in the window"))
}

/// `Ω(γ)` computed from the generating series truncated at `γ`.
pub fn omega(quiver: &Quiver, gamma: &DimVector, qtrunc: i64) -> Result<HalfSeries> {
    if gamma.is_zero() {
        return Err(Error::Domain("Ω is defined for non-zero γ".into()));
    }
    let a = generating_series(quiver, gamma, None, qtrunc)?;
    let table = plethystic_factor(quiver, &a)?;
    Ok(omega_from_table(&table, gamma).expect("column present"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient(
    pub i64,
    #[serde(with = "crate::exactalg::serde_rational")] pub Rational,
);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaEntry {
    pub gamma: DimVector,
    pub coeffs: Vec<Coefficient>,
    pub nonvanishing: bool,
    /// Exact range `[lo, hi]` of the series, in half units.
    pub window: [i64; 2],
}

/// DT invariants of a symmetric quiver over a box of dimension vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtReport {
    pub quiver: Quiver,
    pub gamma_max: DimVector,
    pub qtrunc: i64,
    pub omega: Vec<OmegaEntry>,
}

impl DtReport {
    pub fn entry(&self, gamma: &DimVector) -> Option<&OmegaEntry> {
        self.omega.iter().find(|e| &e.gamma == gamma)
    }
}

pub fn dt_report(
    quiver: &Quiver,
    gamma_max: &DimVector,
    total_max: Option<u32>,
    qtrunc: i64,
) -> Result<(DtReport, GenTable)> {
    let a = generating_series(quiver, gamma_max, total_max, qtrunc)?;
    let table = plethystic_factor(quiver, &a)?;
    let omega = table
        .gammas()
        .into_iter()
        .map(|gamma| {
            let series = omega_from_table(&table, &gamma).expect("column present");
            let (lo, hi) = table.window(&gamma).expect("column present");
            OmegaEntry {
                coeffs: series
                    .coeffs()
                    .iter()
                    .map(|(k, c)| Coefficient(*k, c.clone()))
                    .collect(),
                nonvanishing: series.has_nonzero(),
                window: [lo, hi],
                gamma,
            }
        })
        .collect();
    let report = DtReport {
        quiver: quiver.clone(),
        gamma_max: gamma_max.clone(),
        qtrunc,
        omega,
    };
    Ok((report, table))
}
