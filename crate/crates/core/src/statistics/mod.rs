//! Experiment layer: ζ_n, linear and max statistics, KS distances and the
//! limit-theorem experiments.

pub mod ess;
pub mod experiments;
pub mod fourier;
pub mod ks;
pub mod report;
pub mod summary;
pub mod zeta;

pub use experiments::{
    clt_experiment, f_smallness_experiment, functional_covariance_check, maxstat_experiment,
    psi_uniformity_experiment, CltSource, CltTolerances,
};
pub use fourier::{linear_statistic, FourierTestFunction};
pub use ks::{ks_distance, KsReference};
pub use report::{Check, ExperimentReport};
pub use zeta::{build_zeta_n, max_statistic, zeta_n_at};
