//! The limit process ζ(t) = √(2/β) Σ_{k≥1} (cos kt X_k − sin kt Y_k)/k,
//! truncated at K modes and evaluated on the grid t_g = 2πg/G.
//!
//! Mode k lands in FFT bin k mod G, so truncations K > G are folded exactly
//! rather than dropped.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngSeed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub grid_points: usize,
    pub values: Vec<f64>,
}

impl PathSample {
    pub fn grid(&self) -> Vec<f64> {
        (0..self.grid_points)
            .map(|g| TAU * g as f64 / self.grid_points as f64)
            .collect()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone)]
pub struct LimitProcessSampler {
    beta: f64,
    truncation: usize,
    grid_points: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for LimitProcessSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LimitProcessSampler")
            .field("beta", &self.beta)
            .field("truncation", &self.truncation)
            .field("grid_points", &self.grid_points)
            .finish()
    }
}

impl LimitProcessSampler {
    pub fn new(beta: f64, truncation: usize, grid_points: usize) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!("beta must be positive and finite, got {beta}")));
        }
        if truncation < 1 {
            return Err(Error::InvalidParams("truncation must be at least 1".into()));
        }
        if grid_points < 2 {
            return Err(Error::InvalidParams("grid_points must be at least 2".into()));
        }
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(grid_points);
        Ok(Self {
            beta,
            truncation,
            grid_points,
            fft,
        })
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Draws X_1, Y_1, …, X_K, Y_K and returns ζ on the grid.
    pub fn sample_values<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut buf = vec![Complex::new(0.0, 0.0); self.grid_points];
        for k in 1..=self.truncation {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let w = 1.0 / k as f64;
            buf[k % self.grid_points] += Complex::new(w * x, w * y);
        }
        self.fft.process(&mut buf);
        let scale = (2.0 / self.beta).sqrt();
        buf.into_iter().map(|z| scale * z.re).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PathSample {
        PathSample {
            grid_points: self.grid_points,
            values: self.sample_values(rng),
        }
    }
}

pub fn sample_limit_process(
    beta: f64,
    seed: RngSeed,
    truncation: usize,
    grid_points: usize,
    count: usize,
) -> Result<Vec<PathSample>> {
    let sampler = LimitProcessSampler::new(beta, truncation, grid_points)?;
    let mut rng = seed.rng();
    Ok((0..count).map(|_| sampler.sample(&mut rng)).collect())
}

/// Cov(ζ(s), ζ(t)) = (2/β) Σ cos(k d)/k² = (2/β)(π²/6 − πd/2 + d²/4), d = (t−s) mod 2π.
pub fn limit_covariance(beta: f64, s: f64, t: f64) -> f64 {
    let d = (t - s).rem_euclid(TAU);
    2.0 / beta * (PI * PI / 6.0 - PI * d / 2.0 + d * d / 4.0)
}
