//! Finitely supported real test functions g(θ) = Σ_k c_k e^{ikθ}, c_{−k} = conj(c_k),
//! and the centred linear statistic √n Σ g(θ_j) − n^{3/2} c_0.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{EnsembleParams, ParticleConfig};
use crate::spectral::covariance_table;
use crate::sum::{compensated_sum, CompensatedSum};

/// Stores c_k for k ≥ 0; negative modes follow by conjugate symmetry, which
/// makes g real by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTestFunction {
    coefficients: BTreeMap<usize, Complex64>,
}

impl FourierTestFunction {
    pub fn new(coefficients: impl IntoIterator<Item = (usize, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, c) in coefficients {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("coefficient c_{k} is not finite")));
            }
            if k == 0 && c.im != 0.0 {
                return Err(Error::InvalidArgument("c_0 must be real".into()));
            }
            if map.insert(k, c).is_some() {
                return Err(Error::InvalidArgument(format!("coefficient c_{k} given twice")));
            }
        }
        Ok(Self { coefficients: map })
    }

    /// g(θ) = cos θ.
    pub fn cosine() -> Self {
        Self::new([(1, Complex64::new(0.5, 0.0))]).expect("valid coefficients")
    }

    pub fn constant(c0: f64) -> Self {
        Self::new([(0, Complex64::new(c0, 0.0))]).expect("valid coefficients")
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, Complex64> {
        &self.coefficients
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        let c = self
            .coefficients
            .get(&(k.unsigned_abs() as usize))
            .copied()
            .unwrap_or_default();
        if k < 0 {
            c.conj()
        } else {
            c
        }
    }

    pub fn c0(&self) -> f64 {
        self.coefficient(0).re
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.c0() + self.eval_centered(theta)
    }

    /// g(θ) − c_0.
    pub fn eval_centered(&self, theta: f64) -> f64 {
        self.coefficients
            .iter()
            .filter(|(&k, _)| k > 0)
            .map(|(&k, c)| {
                let (s, co) = (k as f64 * theta).sin_cos();
                2.0 * (c.re * co - c.im * s)
            })
            .sum()
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        self.coefficients
            .iter()
            .filter(|(&k, _)| k > 0)
            .map(|(&k, c)| {
                let (s, co) = (k as f64 * theta).sin_cos();
                -2.0 * k as f64 * (c.re * s + c.im * co)
            })
            .sum()
    }

    /// Limit variance (2/β) Σ_{k≥1} |c_k|² of the linear statistic.
    pub fn target_variance(&self, beta: f64) -> f64 {
        let s: f64 = self
            .coefficients
            .iter()
            .filter(|(&k, _)| k > 0)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        2.0 / beta * s
    }
}

/// √n Σ_j g(θ_j) − n^{3/2} c_0 on raw angles (any real values).
pub fn linear_statistic_angles(angles: &[f64], g: &FourierTestFunction) -> f64 {
    let n = angles.len() as f64;
    n.sqrt() * compensated_sum(angles.iter().map(|&t| g.eval_centered(t)))
}

pub fn linear_statistic(config: &ParticleConfig, g: &FourierTestFunction) -> f64 {
    linear_statistic_angles(config.angles(), g)
}

/// Variance of the linearised statistic n^{-3/2} Σ_j g′(2πj/n) x_j under the
/// Gaussian approximation, from the covariance of x.
pub fn linearized_variance(params: &EnsembleParams, g: &FourierTestFunction) -> f64 {
    let n = params.n();
    let cov = covariance_table(params);
    let w: Vec<f64> = (0..n).map(|j| g.derivative(TAU * j as f64 / n as f64)).collect();
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        for j in 0..n {
            acc.add(w[i] * w[j] * cov[(i + n - j) % n]);
        }
    }
    acc.value() / (n as f64).powi(3)
}
