//! Batch front end: load a quiver, run one mode, render a report.
//!
//! Every mode produces a serde value that is rendered as JSON with sorted
//! keys, or flattened into CSV rows. Output depends only on the config.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use coha_core::cblegs::{attach_legs, is_generic, lambda_from_eigenvalues, sample_generic};
use coha_core::coha::{shuffle_product, twisted_product, CohaElement};
use coha_core::dtseries::dt_report;
use coha_core::exactalg::{render_rational, Rational};
use coha_core::freeness::Freeness;
use coha_core::roots::nonvanishing_certificate;
use coha_core::{DimVector, Quiver};
use num_traits::Zero;

mod report;

pub use report::{
    FreenessReport, FreenessRow, GenericityOutput, NonvanishingReport, NonvanishingRow, ShuffleOutput,
    ShuffleSide,
};

/// Largest `|γ|` for which generator counts are computed by linear algebra.
pub const FREENESS_LIMIT: u32 = 6;
/// Largest number of dimension vectors in a box.
pub const BOX_LIMIT: usize = 4096;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] coha_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    DtTable,
    CheckFreeness,
    CheckNonvanishing,
    Genericity,
    ShuffleEval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Command line flags.
#[derive(Clone, Debug, Parser)]
#[command(name = "coha", about = "Exact CoHA, DT invariant and root computations for quivers")]
pub struct Cli {
    /// Quiver spec file, or inline JSON `{"vertices": n, "arrows": [[i, j, m], ...]}`.
    /// check-nonvanishing and genericity expect the half quiver.
    #[arg(long)]
    pub quiver: String,

    #[arg(long, value_enum)]
    pub mode: Mode,

    /// Comma-separated bound per vertex (the single γ for genericity).
    #[arg(long)]
    pub gamma_max: Option<String>,

    /// Only dimension vectors with |γ| at most this.
    #[arg(long)]
    pub total_max: Option<u32>,

    /// Series depth in half units.
    #[arg(long, default_value_t = 12)]
    pub qtrunc: i64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long)]
    pub lhs_gamma: Option<String>,

    /// Left factor, e.g. `x0_1^2 + x0_2^2`.
    #[arg(long)]
    pub lhs: Option<String>,

    #[arg(long)]
    pub rhs_gamma: Option<String>,

    #[arg(long)]
    pub rhs: Option<String>,

    /// Use the sign-twisted product.
    #[arg(long)]
    pub twisted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleArgs {
    pub lhs_gamma: DimVector,
    pub lhs: String,
    pub rhs_gamma: DimVector,
    pub rhs: String,
    pub twisted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub quiver: Quiver,
    pub mode: Mode,
    pub gamma_max: Option<DimVector>,
    pub total_max: Option<u32>,
    pub qtrunc: i64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub shuffle: Option<ShuffleArgs>,
}

/// Rendered report and whether every verdict in it passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn parse_dim(text: &str) -> Result<DimVector> {
    let entries = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|e| CliError::Usage(format!("bad dimension vector {text:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DimVector::new(entries))
}

pub fn load_quiver(source: &str) -> Result<Quiver> {
    let path = Path::new(source);
    if source.trim_start().starts_with('{') && !path.exists() {
        return Ok(Quiver::from_json(source)?);
    }
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Quiver::from_json(&text).map_err(|e| match e {
        coha_core::Error::Parse { location, message } => coha_core::Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        }
        .into(),
        other => other.into(),
    })
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig> {
        let quiver = load_quiver(&cli.quiver)?;
        let gamma_max = cli.gamma_max.as_deref().map(parse_dim).transpose()?;
        if cli.qtrunc < 0 {
            return Err(CliError::Usage("qtrunc must be non-negative".into()));
        }
        let shuffle = if cli.mode == Mode::ShuffleEval {
            let need = |v: &Option<String>, flag: &str| {
                v.clone().ok_or_else(|| CliError::Usage(format!("shuffle-eval needs --{flag}")))
            };
            Some(ShuffleArgs {
                lhs_gamma: parse_dim(&need(&cli.lhs_gamma, "lhs-gamma")?)?,
                lhs: need(&cli.lhs, "lhs")?,
                rhs_gamma: parse_dim(&need(&cli.rhs_gamma, "rhs-gamma")?)?,
                rhs: need(&cli.rhs, "rhs")?,
                twisted: cli.twisted,
            })
        } else {
            None
        };
        Ok(RunConfig {
            quiver,
            mode: cli.mode,
            gamma_max,
            total_max: cli.total_max,
            qtrunc: cli.qtrunc,
            seed: cli.seed,
            format: cli.format,
            out: cli.out.clone(),
            shuffle,
        })
    }

    fn gamma_max(&self) -> Result<&DimVector> {
        let g = self
            .gamma_max
            .as_ref()
            .ok_or_else(|| CliError::Usage("this mode needs --gamma-max".into()))?;
        self.quiver.check_dim(g)?;
        Ok(g)
    }

    /// Non-zero dimension vectors of the box in graded order.
    fn gammas(&self) -> Result<Vec<DimVector>> {
        let bound = self.gamma_max()?;
        let count: usize = bound.entries().iter().map(|&b| b as usize + 1).product();
        if count > BOX_LIMIT {
            return Err(coha_core::Error::Limit(format!("box below {bound} has {count} > {BOX_LIMIT} vectors")).into());
        }
        Ok(DimVector::all_below(bound)
            .into_iter()
            .filter(|g| !g.is_zero() && self.total_max.is_none_or(|t| g.total() <= t))
            .collect())
    }
}

/// Run one mode and render its report. Check verdicts are reported through
/// [`Outcome::passed`], not as errors.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let (value, rows, passed) = match config.mode {
        Mode::DtTable => {
            let report = dt_table(config)?;
            let rows = report::dt_rows(&report);
            (serde_json::to_value(&report), rows, true)
        }
        Mode::CheckFreeness => {
            let report = check_freeness(config)?;
            let rows = report::freeness_rows(&report);
            let passed = report.passed;
            (serde_json::to_value(&report), rows, passed)
        }
        Mode::CheckNonvanishing => {
            let report = check_nonvanishing(config)?;
            let rows = report::nonvanishing_rows(&report);
            let passed = report.passed;
            (serde_json::to_value(&report), rows, passed)
        }
        Mode::Genericity => {
            let report = genericity(config)?;
            let rows = report::genericity_rows(&report);
            let passed = report.passed;
            (serde_json::to_value(&report), rows, passed)
        }
        Mode::ShuffleEval => {
            let report = shuffle_eval(config)?;
            let rows = report::shuffle_rows(&report);
            (serde_json::to_value(&report), rows, true)
        }
    };
    let value = value.expect("reports serialize");
    let text = match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Csv => report::to_csv(&rows),
    };
    Ok(Outcome { text, passed })
}

/// Run and write the report to `config.out` or stdout.
pub fn run_and_write(config: &RunConfig) -> Result<Outcome> {
    let outcome = run(config)?;
    match &config.out {
        Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome)
}

pub fn dt_table(config: &RunConfig) -> Result<coha_core::dtseries::DtReport> {
    config.gammas()?;
    let (report, _) = dt_report(&config.quiver, config.gamma_max()?, config.total_max, config.qtrunc)?;
    Ok(report)
}

pub fn check_freeness(config: &RunConfig) -> Result<FreenessReport> {
    let gammas = config.gammas()?;
    if let Some(g) = gammas.iter().find(|g| g.total() > FREENESS_LIMIT) {
        return Err(coha_core::Error::Limit(format!(
            "linear algebra is limited to |γ| ≤ {FREENESS_LIMIT}, box contains {g}; lower --gamma-max or set --total-max"
        ))
        .into());
    }
    let (_, pleth) = dt_report(&config.quiver, config.gamma_max()?, config.total_max, config.qtrunc)?;
    let mut fr = Freeness::new(Arc::new(config.quiver.clone()))?;
    let mut rows = Vec::new();
    for gamma in gammas {
        let Some((lo, hi)) = pleth.window(&gamma) else { continue };
        if hi < lo {
            continue;
        }
        let lin = fr.prim_dims(&gamma, hi)?;
        for k in lo..=hi {
            let linear = lin.get(&gamma, k).expect("inside window");
            let plethystic = pleth.get(&gamma, k).expect("inside window");
            rows.push(FreenessRow {
                gamma: gamma.clone(),
                k,
                linear,
                plethystic,
                pass: linear == plethystic,
            });
        }
    }
    Ok(FreenessReport {
        quiver: config.quiver.clone(),
        gamma_max: config.gamma_max()?.clone(),
        qtrunc: config.qtrunc,
        passed: rows.iter().all(|r| r.pass),
        rows,
    })
}

pub fn check_nonvanishing(config: &RunConfig) -> Result<NonvanishingReport> {
    let gammas = config.gammas()?;
    let q = config.quiver.double();
    let (report, _) = dt_report(&q, config.gamma_max()?, config.total_max, config.qtrunc)?;
    let mut rows = Vec::new();
    for gamma in gammas {
        let entry = report.entry(&gamma).expect("box entry");
        let certificate = nonvanishing_certificate(&config.quiver, &gamma)?;
        rows.push(NonvanishingRow {
            agree: certificate.result == entry.nonvanishing,
            omega_nonzero: entry.nonvanishing,
            window: entry.window,
            certificate,
            gamma,
        });
    }
    Ok(NonvanishingReport {
        half_quiver: config.quiver.clone(),
        gamma_max: config.gamma_max()?.clone(),
        qtrunc: config.qtrunc,
        passed: rows.iter().all(|r| r.agree),
        rows,
    })
}

pub fn genericity(config: &RunConfig) -> Result<GenericityOutput> {
    let gamma = config.gamma_max()?.clone();
    let q = config.quiver.double();
    let t = sample_generic(&q, &gamma, config.seed)?;
    let generic = is_generic(&t, &q, &gamma)?;
    let legs = attach_legs(&q, &config.quiver, &gamma)?;
    let lambda = lambda_from_eigenvalues(&t, &legs)?;
    let pairing = legs
        .tilde_gamma
        .entries()
        .iter()
        .zip(&lambda)
        .fold(Rational::zero(), |acc, (&g, l)| acc + Rational::from_integer(g.into()) * l);
    Ok(GenericityOutput {
        half_quiver: config.quiver.clone(),
        gamma,
        seed: config.seed,
        passed: generic.generic && pairing.is_zero(),
        eigenvalues: t,
        generic,
        tilde_gamma: legs.tilde_gamma.clone(),
        vertex_labels: legs.vertex_labels.iter().map(|&(i, j)| [i, j]).collect(),
        lambda: lambda.iter().map(render_rational).collect(),
        pairing: render_rational(&pairing),
    })
}

pub fn shuffle_eval(config: &RunConfig) -> Result<ShuffleOutput> {
    let args = config
        .shuffle
        .as_ref()
        .ok_or_else(|| CliError::Usage("shuffle-eval needs --lhs-gamma, --lhs, --rhs-gamma, --rhs".into()))?;
    let q = Arc::new(config.quiver.clone());
    let a = CohaElement::parse(q.clone(), &args.lhs_gamma, &args.lhs)?;
    let b = CohaElement::parse(q, &args.rhs_gamma, &args.rhs)?;
    let p = if args.twisted { twisted_product(&a, &b)? } else { shuffle_product(&a, &b)? };
    let side = |e: &CohaElement| ShuffleSide {
        gamma: e.gamma().clone(),
        poly: e.poly().to_string(),
    };
    Ok(ShuffleOutput {
        quiver: config.quiver.clone(),
        twisted: args.twisted,
        lhs: side(&a),
        rhs: side(&b),
        product: side(&p),
    })
}
