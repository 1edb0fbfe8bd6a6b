use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use string_geodesics::atlas::{ChartId, UConvention};
use string_geodesics::flow::Direction;

use crate::error::CliError;

/// Upper end of the accepted integration tolerance.
pub const MAX_TOL: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "string-geodesics", version, about = "Geodesics of the Schwarzschild string surface")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// The run configuration, recorded verbatim in every output file.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Integrate one geodesic and write its samples and events.
    Trace(TraceArgs),
    /// Classify the elliptic curve of (H, U).
    Classify(CurveArgs),
    /// Residues of the u-form and the u-period around the poles.
    Residues(ResidueArgs),
    /// Sphere-angle advance between successive exterior passes.
    Precession(PrecessionArgs),
    /// Randomized chart-overlap and Hamiltonian-consistency checks.
    AtlasCheck(AtlasArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Trace(_) => "trace",
            Command::Classify(_) => "classify",
            Command::Residues(_) => "residues",
            Command::Precession(_) => "precession",
            Command::AtlasCheck(_) => "atlas-check",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Trace(a) => &a.output,
            Command::Classify(a) => &a.output,
            Command::Residues(a) => &a.output,
            Command::Precession(a) => &a.geodesic.output,
            Command::AtlasCheck(a) => &a.output,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GeodesicArgs {
    /// String energy; defaults to --H2 (null geodesics).
    #[arg(long = "H", allow_hyphen_values = true)]
    #[serde(rename = "H")]
    pub h: Option<f64>,
    /// Momentum conjugate to u.
    #[arg(long = "U", allow_hyphen_values = true)]
    #[serde(rename = "U")]
    pub u: Option<f64>,
    /// Sphere energy; defaults to --H.
    #[arg(long = "H2")]
    #[serde(rename = "H2")]
    pub h2: Option<f64>,
    #[arg(long, value_parser = parse_chart, default_value = "ef_adv")]
    pub chart: ChartId,
    /// Two coordinates (momenta completed from --U and --H2) or all four
    /// components c1,c2,m1,m2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub start: Vec<f64>,
    /// Parameter interval a,b; the start sits at s = a.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub span: Vec<f64>,
    #[arg(long, env = "STRING_GEODESICS_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    /// Sign of the velocity of the second coordinate when completing momenta.
    #[arg(long, value_parser = parse_direction, default_value = "increasing")]
    pub direction: Direction,
    #[arg(long, value_parser = parse_convention, default_value = "plain")]
    pub convention: UConvention,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TraceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geodesic: GeodesicArgs,
    /// Keep every n-th step as a sample.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

impl std::ops::Deref for TraceArgs {
    type Target = GeodesicArgs;

    fn deref(&self) -> &GeodesicArgs {
        &self.geodesic
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PrecessionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geodesic: GeodesicArgs,
    /// Replace --U by the value whose advance per pass is 2π(1 + p/q).
    #[arg(long, value_parser = parse_fraction)]
    pub tune: Option<(u32, u32)>,
    /// Distance within which Δθ/2π counts as rational.
    #[arg(long, default_value_t = 1e-6)]
    pub rational_tol: f64,
    #[arg(long, default_value_t = 12)]
    pub max_denominator: u32,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CurveArgs {
    #[arg(long = "H", allow_hyphen_values = true)]
    #[serde(rename = "H")]
    pub h: f64,
    #[arg(long = "U", allow_hyphen_values = true)]
    #[serde(rename = "U")]
    pub u: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ResidueArgs {
    #[arg(long = "H", allow_hyphen_values = true)]
    #[serde(rename = "H")]
    pub h: f64,
    #[arg(long = "U", allow_hyphen_values = true)]
    #[serde(rename = "U")]
    pub u: f64,
    /// Branch sign ε = ±1.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub epsilon: i8,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AtlasArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, env = "STRING_GEODESICS_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_chart(s: &str) -> Result<ChartId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    match s {
        "increasing" | "+" => Ok(Direction::Increasing),
        "decreasing" | "-" => Ok(Direction::Decreasing),
        _ => Err(format!("expected increasing or decreasing, got `{s}`")),
    }
}

fn parse_convention(s: &str) -> Result<UConvention, String> {
    match s {
        "plain" => Ok(UConvention::Plain),
        "shifted" => Ok(UConvention::Shifted),
        _ => Err(format!("expected plain or shifted, got `{s}`")),
    }
}

fn parse_fraction(s: &str) -> Result<(u32, u32), String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("expected p/q, got `{s}`"))?;
    let p: u32 = p.trim().parse().map_err(|e| format!("{e}"))?;
    let q: u32 = q.trim().parse().map_err(|e| format!("{e}"))?;
    if p == 0 || q == 0 {
        return Err("p and q must be positive".into());
    }
    Ok((p, q))
}

pub fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol <= MAX_TOL {
        Ok(())
    } else {
        Err(CliError::config("--tol", format!("must lie in (0, {MAX_TOL:e}], got {tol}")))
    }
}

impl GeodesicArgs {
    pub fn validate(&self) -> Result<(f64, f64), CliError> {
        check_tol(self.tol)?;
        if self.start.len() != 2 && self.start.len() != 4 {
            return Err(CliError::config("--start", format!("expected 2 or 4 numbers, got {}", self.start.len())));
        }
        if self.start.iter().any(|v| !v.is_finite()) {
            return Err(CliError::config("--start", "components must be finite"));
        }
        match self.span[..] {
            [a, b] if a.is_finite() && b.is_finite() && a != b => Ok((a, b)),
            _ => Err(CliError::config("--span", "expected two distinct finite numbers a,b")),
        }
    }
}
