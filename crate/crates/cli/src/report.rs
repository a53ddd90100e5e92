//! Report types for the check modes and their CSV flattening.

use coha_core::cblegs::{EigenData, GenericityReport};
use coha_core::dtseries::DtReport;
use coha_core::exactalg::render_rational;
use coha_core::roots::{RootCertificate, RootKind};
use coha_core::{DimVector, Quiver};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessRow {
    pub gamma: DimVector,
    pub k: i64,
    /// `c_{γ,k}` from generator counts.
    pub linear: u64,
    /// `c_{γ,k}` from the generating series.
    pub plethystic: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub quiver: Quiver,
    pub gamma_max: DimVector,
    pub qtrunc: i64,
    pub rows: Vec<FreenessRow>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonvanishingRow {
    pub gamma: DimVector,
    pub certificate: RootCertificate,
    pub omega_nonzero: bool,
    pub window: [i64; 2],
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonvanishingReport {
    pub half_quiver: Quiver,
    pub gamma_max: DimVector,
    pub qtrunc: i64,
    pub rows: Vec<NonvanishingRow>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityOutput {
    pub half_quiver: Quiver,
    pub gamma: DimVector,
    pub seed: u64,
    pub eigenvalues: EigenData,
    pub generic: GenericityReport,
    pub tilde_gamma: DimVector,
    pub vertex_labels: Vec<[usize; 2]>,
    pub lambda: Vec<String>,
    /// `γ̃·λ`.
    pub pairing: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleSide {
    pub gamma: DimVector,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleOutput {
    pub quiver: Quiver,
    pub twisted: bool,
    pub lhs: ShuffleSide,
    pub rhs: ShuffleSide,
    pub product: ShuffleSide,
}

pub(crate) type Rows = Vec<Vec<String>>;

fn dim(g: &DimVector) -> String {
    g.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub(crate) fn dt_rows(r: &DtReport) -> Rows {
    let mut rows = vec![vec!["gamma", "window_lo", "window_hi", "nonvanishing", "k", "coefficient"]
        .into_iter()
        .map(String::from)
        .collect()];
    for e in &r.omega {
        let head = vec![
            dim(&e.gamma),
            e.window[0].to_string(),
            e.window[1].to_string(),
            e.nonvanishing.to_string(),
        ];
        if e.coeffs.is_empty() {
            rows.push([head.clone(), vec![String::new(), String::new()]].concat());
        }
        for c in &e.coeffs {
            rows.push([head.clone(), vec![c.0.to_string(), render_rational(&c.1)]].concat());
        }
    }
    rows
}

pub(crate) fn freeness_rows(r: &FreenessReport) -> Rows {
    let mut rows = vec![vec!["gamma", "k", "linear", "plethystic", "pass"]
        .into_iter()
        .map(String::from)
        .collect()];
    for row in &r.rows {
        rows.push(vec![
            dim(&row.gamma),
            row.k.to_string(),
            row.linear.to_string(),
            row.plethystic.to_string(),
            row.pass.to_string(),
        ]);
    }
    rows
}

fn kind(k: RootKind) -> &'static str {
    match k {
        RootKind::Real => "real",
        RootKind::Imaginary => "imaginary",
        RootKind::NotRoot => "not_root",
    }
}

pub(crate) fn nonvanishing_rows(r: &NonvanishingReport) -> Rows {
    let mut rows = vec![vec!["gamma", "root", "kind", "reflections", "omega_nonzero", "agree"]
        .into_iter()
        .map(String::from)
        .collect()];
    for row in &r.rows {
        rows.push(vec![
            dim(&row.gamma),
            row.certificate.result.to_string(),
            kind(row.certificate.kind).to_string(),
            row.certificate
                .reflections
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            row.omega_nonzero.to_string(),
            row.agree.to_string(),
        ]);
    }
    rows
}

pub(crate) fn genericity_rows(r: &GenericityOutput) -> Rows {
    let mut rows = vec![vec!["vertex", "leg", "tilde_gamma", "lambda"]
        .into_iter()
        .map(String::from)
        .collect()];
    for (idx, [i, j]) in r.vertex_labels.iter().enumerate() {
        rows.push(vec![
            i.to_string(),
            j.to_string(),
            r.tilde_gamma.entries()[idx].to_string(),
            r.lambda[idx].clone(),
        ]);
    }
    rows
}

pub(crate) fn shuffle_rows(r: &ShuffleOutput) -> Rows {
    vec![
        vec!["gamma".into(), "product".into()],
        vec![dim(&r.product.gamma), r.product.poly.clone()],
    ]
}

pub(crate) fn to_csv(rows: &Rows) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
