//! Random generators for the Gaussian approximation, the true law and the
//! limit process.

pub mod gaussian;
pub mod limit;
pub mod mcmc;

pub use gaussian::{sample_gaussian_fluctuation, GaussianSampler};
pub use limit::{limit_covariance, sample_limit_process, LimitProcessSampler, PathSample};
pub use mcmc::{run_chain, sample_mcmc, McmcChain, McmcConfig, McmcRun};
