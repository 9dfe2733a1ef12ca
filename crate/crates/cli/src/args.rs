use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "stringforce",
    version,
    about = "Force reconstruction on a vibrating string from boundary data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the force-free direct problem on one or more meshes and compare them.
    Direct(Common),
    /// Run the full inversion for one or more regularisation parameters.
    Invert(Common),
    /// Condition numbers of the design matrix for both control kinds.
    Tables(Common),
    /// L-curve and error-vs-lambda sweep.
    Lcurve(Common),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Preset name (benchmark-sine, benchmark-cosine, zero-data).
    #[arg(long, conflicts_with = "config")]
    pub problem: Option<String>,

    /// Problem file (TOML).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Time elements; a comma list for `direct` and `tables`.
    #[arg(short = 'N', value_delimiter = ',')]
    pub n_time: Vec<usize>,

    /// Space cells; defaults to the value giving unit Courant number.
    #[arg(short = 'M')]
    pub n_space: Option<usize>,

    /// Series modes; a comma list for `tables`.
    #[arg(short = 'K', value_delimiter = ',')]
    pub modes: Vec<usize>,

    #[arg(long, value_parser = ["neumann", "dirichlet"])]
    pub control: Option<String>,

    #[arg(long = "noise-pct", default_value_t = 0.0)]
    pub noise_pct: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// A value, a comma list, or `lcurve` to use the detected corner.
    #[arg(long)]
    pub lambda: Option<String>,

    #[arg(long = "reg-order", default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub reg_order: u8,

    /// Solve the direct problem as one global system instead of marching.
    #[arg(long)]
    pub global: bool,

    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}
