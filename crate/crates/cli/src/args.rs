use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "singcurve", version, about = "Invariants of plane curve singularities in any characteristic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// Flags shared by every command working over a single field.
#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Characteristic: a prime, or 0 for the rationals
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    /// Extension degree; coefficients may then use the generator `g`
    #[arg(short = 'k', long = "degree", default_value_t = 1)]
    pub k: u32,
    /// The curve f
    #[arg(short = 'f', long = "poly", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized root finding (SINGCURVE_SEED takes precedence)
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton tree of f
    Tree {
        #[command(flatten)]
        field: FieldArgs,
        /// Minimalize before rendering
        #[arg(long)]
        minimal: bool,
    },
    /// Multiplicity M of the Newton tree
    Multiplicity {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// δ-invariant
    Delta {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// μ̄ = 2δ - r + 1
    Mubar {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Milnor number, optionally of u·f truncated at degree D
    Mu {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        unit: Option<String>,
        /// Truncation degree D (default 2μ̄ + 4 when a unit is given)
        #[arg(long)]
        trunc: Option<u32>,
    },
    /// Intersection multiplicity of f and g at the origin
    Intersect {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short = 'g', long = "other", allow_hyphen_values = true)]
        g: String,
    },
    /// Zariski sequence and semigroup of an irreducible f
    Semigroup {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Parametrization (φ(t), ψ(t)) of an irreducible f
    Parametrize {
        #[command(flatten)]
        field: FieldArgs,
        /// Number of nonzero terms to print per coordinate
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// Compare -M with the area formula
    AreaCheck {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Test μ = μ̄ ⇔ p ∤ N_v for an integer polynomial over a range of primes
    Check {
        #[arg(short = 'f', long = "poly", allow_hyphen_values = true)]
        f: String,
        /// Inclusive prime range A..B
        #[arg(long, value_parser = parse_range)]
        primes: RangeInclusive<u64>,
        #[arg(long, allow_hyphen_values = true)]
        unit: Option<String>,
        #[arg(long)]
        trunc: Option<u32>,
        /// Compute μ even when the prime bound already determines it
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}
