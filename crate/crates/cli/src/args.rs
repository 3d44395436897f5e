use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pangle_core::geometry::SequenceLaw;
use pangle_core::{NormSpec, Vector};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "pangle",
    version,
    about = "p-angular and skew p-angular distances on normed spaces"
)]
pub struct Cli {
    /// Output format; tables default to CSV only for `sweep`.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Everything that determines a run. Serialized verbatim into each report header.
#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// alpha_p, beta_p, the skew relation residual and, for Gram norms, the closed form.
    Compute(ComputeArgs),
    /// Every applicable bound on alpha_p for the pair, or the integral chains.
    Bounds(BoundsArgs),
    /// Metric audits, witnesses and topology experiments.
    Audit(AuditArgs),
    /// Search for violations of an inner-product characterization.
    Certify(CertifyArgs),
    /// Best-constant or series convergence tables.
    Sweep(SweepArgs),
    /// Run the full acceptance suite.
    VerifyAll(VerifyArgs),
    /// Re-run the configuration embedded in a JSON report and compare bodies.
    #[serde(skip)]
    Replay { report: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compute(_) => "compute",
            Command::Bounds(_) => "bounds",
            Command::Audit(_) => "audit",
            Command::Certify(_) => "certify",
            Command::Sweep(_) => "sweep",
            Command::VerifyAll(_) => "verify-all",
            Command::Replay { .. } => "replay",
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairArgs {
    /// l1, l2, linf, l<r>, euclidean:<n>, a JSON object, or @file.
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormSpec,
    /// Comma-separated coordinates or @file holding a JSON array.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub x: Vector,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub y: Vector,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    /// Emit the integral chains instead of the bound rows.
    #[arg(long)]
    pub chain: bool,
    /// Quadrature tolerance, absolute and relative.
    #[arg(long, default_value_t = 1e-12)]
    pub quad_tol: f64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditArgs {
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormSpec,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Ambient dimension; Gram and weighted norms use their own.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, env = "PANGLE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Symmetry, identity and triangle checks on random triples.
    #[arg(long)]
    pub metric: bool,
    /// A triangle violation for beta_p.
    #[arg(long)]
    pub beta_witness: bool,
    /// A translation gap for alpha_p.
    #[arg(long)]
    pub translation: bool,
    /// Growth of the constant needed to bound alpha_p by alpha_q.
    #[arg(long)]
    pub nonequiv: bool,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
    pub n: Vec<f64>,
    /// Cauchy sequences without limits, for p > 0 > q.
    #[arg(long)]
    pub completeness: bool,
    #[arg(long, default_value_t = 10_000)]
    pub resolution: u64,
    /// Convergence in norm vs in alpha_p along fixed sequences.
    #[arg(long)]
    pub consistency: bool,
    /// Restrict the consistency check to one law.
    #[arg(long, value_enum)]
    pub law: Option<Law>,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Converging,
    Alternating,
    Scaled,
}

impl From<Law> for SequenceLaw {
    fn from(l: Law) -> Self {
        match l {
            Law::Converging => SequenceLaw::Converging,
            Law::Alternating => SequenceLaw::Alternating,
            Law::Scaled => SequenceLaw::Scaled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionName {
    AlphaBeta,
    Identity,
    Shifted,
    Lorch,
    Ficken,
    /// Pairs on both sides of alpha_p vs beta_p.
    Dual,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyArgs {
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormSpec,
    #[arg(long, value_enum)]
    pub criterion: CriterionName,
    /// Exponent for alpha-beta, identity and dual.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, env = "PANGLE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub refine_steps: usize,
    /// Margins above this count as violations.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepArgs {
    /// Ratio to the upper bound along the extremal family, per epsilon.
    #[arg(long, conflicts_with = "series")]
    pub best_constant: bool,
    /// Series value and tail bound per truncation order.
    #[arg(long)]
    pub series: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Gram norm for the series; defaults to the Euclidean norm of matching dimension.
    #[arg(long, value_parser = parse_norm)]
    pub norm: Option<NormSpec>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub x: Option<Vector>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub y: Option<Vector>,
    #[arg(long = "K", value_delimiter = ',')]
    #[serde(rename = "K")]
    pub k: Vec<usize>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Run only these criteria (1 to 9).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
    #[arg(long)]
    pub sequential: bool,
}

fn read_at(s: &str) -> Result<String, String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}")),
        None => Ok(s.to_string()),
    }
}

pub fn parse_norm(s: &str) -> Result<NormSpec, String> {
    read_at(s)?
        .parse()
        .map_err(|e: pangle_core::Error| e.to_string())
}

pub fn parse_vector(s: &str) -> Result<Vector, String> {
    let text = read_at(s)?;
    let text = text.trim();
    let coords: Vec<f64> = if text.starts_with('[') {
        serde_json::from_str(text).map_err(|e| e.to_string())?
    } else {
        text.split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad coordinate {c:?}"))
            })
            .collect::<Result<_, _>>()?
    };
    Vector::new(coords).map_err(|e| e.to_string())
}
