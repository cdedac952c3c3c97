//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "repelcircle", version, about = "Strongly repelling particles on the circle: samplers and limit-theorem experiments")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Number of particles.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Replicas (samples, paths or chains); each subcommand has its own default.
    #[arg(long, global = true)]
    pub replicas: Option<usize>,
    #[arg(long = "out-dir", global = true, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    pub format: Format,
    /// Worker threads; falls back to REPELCIRCLE_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Add wall-clock runtime to the JSON output (breaks byte-identical reruns).
    #[arg(long = "record-runtime", global = true)]
    pub record_runtime: bool,
    /// Suppress the summary line on stdout.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct McmcArgs {
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long = "burn-in")]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    /// Single-site proposal std in units of n^{-3/2}.
    #[arg(long = "step-scale")]
    pub step_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct LimitArgs {
    /// Number of Fourier modes K.
    #[arg(long, default_value_t = 1000)]
    pub truncation: usize,
    /// Grid points G on [0, 2π).
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    GaussianApprox,
    Mcmc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed forms of the trigonometric lattice sums against brute force.
    Identities {
        #[arg(long = "n-max", default_value_t = 64)]
        n_max: usize,
    },
    /// Eigenvalues of the circulant precision matrix, closed form and DFT.
    Spectrum,
    /// Draws from the Gaussian approximation of x.
    SampleGauss,
    /// Metropolis chain for the true density.
    SampleMcmc(McmcArgs),
    /// Truncated paths of the limit process ζ.
    SampleLimit(LimitArgs),
    /// Central limit theorem for a linear statistic.
    Clt {
        #[arg(long = "g-spec", default_value = "1:0.5,0")]
        g_spec: String,
        #[arg(long, value_enum, default_value_t = Source::GaussianApprox)]
        source: Source,
        #[command(flatten)]
        mcmc: McmcArgs,
    },
    /// max_j |x_j|/√n against the grid supremum of |ζ|.
    Maxstat(LimitArgs),
    /// Covariance of ζ_n against the limit covariance.
    CovCheck {
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Median |F| over increasing n.
    FSmall {
        #[arg(long = "n-list", value_delimiter = ',', default_value = "64,128,256,512")]
        n_list: Vec<usize>,
    },
    /// Uniformity of nψ mod 2π along a chain.
    PsiUniform(McmcArgs),
    /// Increment covariance bounds.
    Bounds {
        #[arg(long = "l-max", default_value_t = 50)]
        l_max: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Identities { .. } => "identities",
            Command::Spectrum => "spectrum",
            Command::SampleGauss => "sample-gauss",
            Command::SampleMcmc(_) => "sample-mcmc",
            Command::SampleLimit(_) => "sample-limit",
            Command::Clt { .. } => "clt",
            Command::Maxstat(_) => "maxstat",
            Command::CovCheck { .. } => "cov-check",
            Command::FSmall { .. } => "f-small",
            Command::PsiUniform(_) => "psi-uniform",
            Command::Bounds { .. } => "bounds",
        }
    }
}
