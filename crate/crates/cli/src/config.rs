use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "wglab", version, about = "Waring-Goldbach numerical laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Global {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "WGLAB_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Report file. Without it, data rows go to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the resolved configuration as JSON.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config_out: Option<PathBuf>,
    /// Zero-free region exponent used for default arc parameters.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub delta_hypothesis: f64,
    #[arg(long, global = true, default_value_t = 0.01)]
    pub epsilon1: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub c_prime: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub c_double_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountArg {
    Ternary,
    Goldbach2,
    Quinary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffArg {
    One,
    Sym1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Sym,
    Tensor,
    Adjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesArg {
    Ternary,
    Binary,
    Quinary,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// List primes up to a limit.
    Sieve {
        #[arg(long)]
        limit: u64,
    },
    /// Representation counts, for one N or every N up to --range.
    Count {
        #[arg(long, value_enum)]
        kind: CountArg,
        #[arg(long = "N", required_unless_present = "range")]
        n: Option<u64>,
        #[arg(long)]
        range: Option<u64>,
    },
    /// Major/minor arc labels on the grid j/M.
    Arcs {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long = "P", requires = "q")]
        p: Option<u64>,
        #[arg(long = "Q", requires = "p")]
        q: Option<u64>,
        #[arg(long)]
        grid: u64,
    },
    /// Exponential sums and minor-arc bound shapes on the grid j/M.
    Expsum {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long = "P", requires = "q")]
        p: Option<u64>,
        #[arg(long = "Q", requires = "p")]
        q: Option<u64>,
        #[arg(long)]
        grid: u64,
        #[arg(long, value_enum, default_value_t = CoeffArg::One)]
        coeff: CoeffArg,
    },
    /// Ramanujan tau with normalised eigenvalues and angles.
    Tau {
        #[arg(long)]
        limit: u64,
    },
    /// Angle equidistribution over the ternary prime tuples.
    Satotate {
        #[arg(long = "N-list")]
        n_list: PathBuf,
        /// `lo,hi` in radians within [0, pi].
        #[arg(long, value_parser = parse_interval)]
        interval: (f64, f64),
    },
    /// Sum of a Hecke coefficient at p_1 over the prime tuples.
    Twisted {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Sym)]
        mode: ModeArg,
    },
    /// Truncated Euler products with tail bounds.
    Singular {
        #[arg(long, value_enum)]
        kind: SeriesArg,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 100_000)]
        cutoff: u64,
    },
    /// Independence ratios and the Goldbach average.
    Conjecture {
        #[arg(long = "N-list")]
        n_list: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        cutoff: u64,
    },
    /// Run a configuration previously written with --config-out.
    #[serde(skip)]
    Replay {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

/// Everything needed to reproduce a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(flatten)]
    pub global: Global,
}
