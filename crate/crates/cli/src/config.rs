//! Command-line grammar. Flags use long names only.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Parser)]
#[command(name = "hw", version, about = "Kolmogorov and harmonic widths of polyharmonic ellipsoids")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum ModelKind {
    #[value(name = "1d")]
    #[serde(rename = "1d")]
    Interval,
    #[value(name = "disk")]
    #[serde(rename = "disk")]
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Beam,
    Bessel,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiskArgs {
    #[arg(long, default_value_t = 8)]
    pub m_max: usize,
    /// Radial basis size per mode.
    #[arg(long, default_value_t = 32)]
    pub degree: usize,
    #[arg(long, default_value_t = 4)]
    pub per_mode: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Interval)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Legendre basis size K of the interval model.
    #[arg(long, default_value_t = 48)]
    pub basis: usize,
    /// Positive axes kept by the interval model (default: all, K - p).
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub disk: DiskArgs,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Spectrum of the interval model.
    Eig1d {
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 48)]
        basis: usize,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// Merged spectrum of the disk model.
    EigDisk {
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[command(flatten)]
        disk: DiskArgs,
    },
    /// Kolmogorov N-width with certificate.
    Width {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "N")]
        n: usize,
    },
    /// Harmonic width: full kernel plus N free dimensions.
    Hwidth {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "N")]
        n: usize,
    },
    /// Jackson inequality on seeded boundary samples, or width plot data.
    Jackson {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "N", default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Number of axes of the sampled truncated ellipsoid.
        #[arg(long, default_value_t = 40)]
        truncation: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit (N, width, jackson_bound) for N = 0..=n-max instead.
        #[arg(long)]
        plot_data: bool,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Random subspaces against the extremal one.
    Compete {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gap between truncated polyharmonic kernels on the disk.
    Gap {
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        #[arg(long, default_value_t = 1)]
        p_low: usize,
        #[arg(long, default_value_t = 2)]
        p_high: usize,
    },
    /// Wronskian profile of a polynomial system.
    Chebyshev {
        /// Comma-separated polynomials in t, e.g. "1,t^2".
        #[arg(long)]
        system: String,
        #[arg(long, default_value = "0,1", value_parser = parse_pair, allow_hyphen_values = true)]
        interval: (f64, f64),
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Interval J for the weight factorization (default: whole interval when ECT there).
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        weights_on: Option<(f64, f64)>,
        /// Subinterval for the two-point Dirichlet check.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        dirichlet: Option<(f64, f64)>,
    },
    /// Independent eigenvalue oracles.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Strong-ellipticity check of a homogeneous symbol.
    Ellipticity {
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eig1d { .. } => "eig1d",
            Command::EigDisk { .. } => "eig-disk",
            Command::Width { .. } => "width",
            Command::Hwidth { .. } => "hwidth",
            Command::Jackson { .. } => "jackson",
            Command::Compete { .. } => "compete",
            Command::Gap { .. } => "gap",
            Command::Chebyshev { .. } => "chebyshev",
            Command::Oracle { .. } => "oracle",
            Command::Ellipticity { .. } => "ellipticity",
        }
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'a,b', got '{s}'"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    Ok((num(a)?, num(b)?))
}
