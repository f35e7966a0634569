//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ns2_core::minimal::Convention;
use ns2_core::Half;

#[derive(Debug, Parser)]
#[command(name = "ns2", version, about = "Exact computations for the N=2 Neveu-Schwarz algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Level m of the unitary minimal series, c = 3m/(m+2).
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Grade level (half-integer); for `oddvar check`, the largest state weight.
    #[arg(long, global = true)]
    pub level: Option<Half>,
    /// Relative U(1) charge of a grade.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub charge: Option<i64>,
    /// A minimal-model label `j,k` (default `1/2,1/2`).
    #[arg(long, global = true)]
    pub label: Option<String>,
    /// Three labels `(j,k);(j,k);(j,k)`.
    #[arg(long, global = true)]
    pub labels: Option<String>,
    /// Weight cutoff (half-integer).
    #[arg(long, global = true)]
    pub cutoff: Option<Half>,
    /// Lattice window: sectors |p| ≤ window.
    #[arg(long, global = true)]
    pub window: Option<u32>,
    /// Largest mode index used by relation checks.
    #[arg(long, global = true)]
    pub index: Option<u32>,
    #[arg(long, global = true, default_value = "standard")]
    pub convention: Convention,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Result cache directory.
    #[arg(long, global = true, env = "NS2_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Unitary labels at level m.
    Spectrum,
    /// Gram matrix of the Verma module of a label at one grade.
    Gram,
    /// Radical basis of the Verma module of a label at one grade.
    Singular,
    /// Character of the irreducible module of a label.
    Character,
    /// Upper bound on the fusion rule of three labels.
    FusionBound,
    /// Chirality of one label, or of the whole spectrum.
    Chirality,
    /// Affine sl2 inside L(c_m,h,q) ⊗ V_L.
    Coset {
        #[command(subcommand)]
        action: CosetAction,
    },
    /// Odd-variable vertex operators on V(c_m,0,0).
    Oddvar {
        #[command(subcommand)]
        action: OddvarAction,
    },
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CosetAction {
    /// Affine relations, the commuting Heisenberg field and the Virasoro checks.
    Verify,
    /// Highest-weight vectors and spanning certificates.
    Decompose,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum OddvarAction {
    /// Vacuum, creation, derivative, skew-symmetry and bracket identities.
    Check,
}
