use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wproj_core::exactnum::{Place, Prime};
use wproj_core::wpoint::{parse_int_tuple, parse_rational, parse_rational_tuple};
use wproj_core::{BigInt, BigRational, WeightVector};

#[derive(Debug, Parser)]
#[command(name = "wproj", version, about = "Heights, weighted gcds and point search on weighted projective spaces over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for search and scans; 0 uses every core.
    #[arg(long, global = true, env = "WPROJ_JOBS", default_value_t = 0)]
    pub jobs: usize,

    /// Only log warnings and errors.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prime factorization of an integer.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        n: BigInt,
    },
    /// Largest g with g^{q_i} dividing every coordinate.
    Wgcd(WeightsTuple),
    /// Divide out the weighted gcd of a tuple.
    Normalize(WeightsRationalTuple),
    /// Canonical representative of a point.
    Canonical(WeightsPoint),
    /// Whether two tuples define the same point.
    Equals {
        #[command(flatten)]
        wp: WeightsPoint,
        #[arg(long, value_parser = rational_tuple, allow_hyphen_values = true)]
        other: RatTuple,
    },
    /// Logarithmic weighted height, globally or at one place.
    Height {
        #[command(flatten)]
        wp: WeightsPoint,
        /// A prime or `inf`.
        #[arg(long, value_parser = place)]
        place: Option<Place>,
    },
    /// Generalized logarithmic weighted gcd of a rational tuple.
    Hwgcd(WeightsRationalTuple),
    /// Generalized logarithmic gcd of two rationals.
    Hgcd {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        a: BigRational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        b: BigRational,
    },
    /// Height of a coordinate divisor split into places in S and outside S.
    SplitHeight {
        #[command(flatten)]
        wp: WeightsPoint,
        #[arg(long, value_delimiter = ',', value_parser = prime)]
        primes: Vec<Prime>,
        /// Multiplicities of the coordinate hyperplanes; all ones by default.
        #[arg(long, value_delimiter = ',')]
        divisor: Option<Vec<u32>>,
    },
    /// Parse and validate polynomials.
    PolyCheck(PolySource),
    /// Evaluate polynomials at an integer tuple.
    PolyEval {
        #[command(flatten)]
        poly: PolySource,
        #[arg(long, value_parser = int_tuple, allow_hyphen_values = true)]
        tuple: IntTuple,
    },
    /// Height of a point relative to a subscheme.
    SubschemeHeight {
        #[command(flatten)]
        poly: PolySource,
        /// Codimension of the subscheme, asserted by the caller.
        #[arg(long)]
        codim: u32,
        #[arg(long, value_parser = rational_tuple, allow_hyphen_values = true)]
        point: RatTuple,
        #[arg(long, value_parser = place)]
        place: Option<Place>,
    },
    /// Membership in the singular locus.
    Singular(WeightsPoint),
    /// Reduced and well-formed versions of a weight vector.
    ReduceWeights {
        #[arg(long, value_parser = weights)]
        weights: WeightVector,
    },
    /// All points of bounded weighted height, optionally on a hypersurface.
    Search(SearchArgs),
    /// Empirical scan of the gcd bound.
    VojtaScan(ScanArgs),
    /// Vojta-type experiments.
    Vojta {
        #[command(subcommand)]
        action: VojtaAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum VojtaAction {
    /// Same as `vojta-scan`.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct WeightsTuple {
    #[arg(long, value_parser = weights)]
    pub weights: WeightVector,
    #[arg(long, value_parser = int_tuple, allow_hyphen_values = true)]
    pub tuple: IntTuple,
}

#[derive(Debug, Args)]
pub struct WeightsRationalTuple {
    #[arg(long, value_parser = weights)]
    pub weights: WeightVector,
    #[arg(long, value_parser = rational_tuple, allow_hyphen_values = true)]
    pub tuple: RatTuple,
}

#[derive(Debug, Args)]
pub struct WeightsPoint {
    #[arg(long, value_parser = weights)]
    pub weights: WeightVector,
    #[arg(long, value_parser = rational_tuple, allow_hyphen_values = true)]
    pub point: RatTuple,
}

/// Polynomials from a `.wpoly` file or inline expressions in `x0, x1, ...`.
#[derive(Debug, Args)]
pub struct PolySource {
    #[arg(long, conflicts_with = "expr")]
    pub poly: Option<PathBuf>,
    /// Inline polynomial; repeat for several. Needs `--weights`.
    #[arg(long, requires = "weights")]
    pub expr: Vec<String>,
    #[arg(long, value_parser = weights)]
    pub weights: Option<WeightVector>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = weights)]
    pub weights: WeightVector,
    #[arg(long, value_parser = rational)]
    pub bound: BigRational,
    #[arg(long, conflicts_with = "expr")]
    pub poly: Option<PathBuf>,
    #[arg(long)]
    pub expr: Option<String>,
    /// Coordinates that must be nonzero, by name or index.
    #[arg(long, value_delimiter = ',')]
    pub require_nonzero: Vec<String>,
    /// Skip the deflation phase; only coprime tuples are examined.
    #[arg(long)]
    pub no_deflation: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub poly: PolySource,
    #[arg(long)]
    pub codim: u32,
    #[arg(long, value_delimiter = ',', value_parser = prime)]
    pub primes: Vec<Prime>,
    #[arg(long = "eps", value_delimiter = ',', value_parser = rational, required = true)]
    pub epsilons: Vec<BigRational>,
    #[arg(long = "delta", value_delimiter = ',', value_parser = rational, required = true)]
    pub deltas: Vec<BigRational>,
    #[arg(long)]
    pub samples: usize,
    /// Sampling radius per coordinate.
    #[arg(long = "box", value_delimiter = ',', required = true)]
    pub radii: Vec<u64>,
    /// Generated and logged when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub require_unit_content: bool,
    #[arg(long)]
    pub keep_violations_only: bool,
}

fn weights(s: &str) -> Result<WeightVector, String> {
    s.parse().map_err(|e: wproj_core::Error| e.to_string())
}

/// Integer coordinates written `a:b:c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntTuple(pub Vec<BigInt>);

/// Rational coordinates written `a:b/c:d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatTuple(pub Vec<BigRational>);

fn int_tuple(s: &str) -> Result<IntTuple, String> {
    parse_int_tuple(s).map(IntTuple).map_err(|e| e.to_string())
}

fn rational_tuple(s: &str) -> Result<RatTuple, String> {
    parse_rational_tuple(s).map(RatTuple).map_err(|e| e.to_string())
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s)
}

fn prime(s: &str) -> Result<Prime, String> {
    s.parse().map_err(|e: wproj_core::Error| e.to_string())
}

fn place(s: &str) -> Result<Place, String> {
    s.parse().map_err(|e: wproj_core::Error| e.to_string())
}
