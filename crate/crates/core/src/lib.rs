//! Strongly repelling particles on the circle: the model, its Gaussian
//! approximation, samplers and the limit-theorem experiments.

pub mod error;
pub mod identities;
pub mod model;
pub mod parallel;
pub mod quadrature;
pub mod rng;
pub mod samplers;
pub mod spectral;
pub mod statistics;
pub mod sum;

pub use error::{Error, Result};
pub use model::{CenterOffset, EnsembleParams, FluctuationVector, ParticleConfig};
pub use rng::RngSeed;
