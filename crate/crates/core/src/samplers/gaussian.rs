//! Exact sampling of the degenerate Gaussian e^{G(x)} on the hyperplane.
//!
//! With s = U*x in the Fourier basis the modes s_1, …, s_{⌊(n−1)/2⌋} are
//! independent complex Gaussians with E|s_k|² = 1/λ_k, s_{n−k} = conj(s_k)
//! and s_0 = 0. For even n the Nyquist mode s_{n/2} is real with variance
//! 1/λ_{n/2}. Then
//!
//! x_j = (2/√n) Σ_k [cos(2πjk/n) σ_k X_k − sin(2πjk/n) σ_k Y_k] + (−1)^j s_{n/2}/√n,
//!
//! σ_k = √(2/β) · n²/(2k(n−k)), synthesised with one inverse FFT.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::model::{EnsembleParams, FluctuationVector};
use crate::rng::RngSeed;
use crate::spectral::eigenvalue;

#[derive(Clone)]
pub struct GaussianSampler {
    params: EnsembleParams,
    sigma: Vec<f64>,
    nyquist_sd: Option<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for GaussianSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaussianSampler")
            .field("params", &self.params)
            .field("modes", &self.sigma.len())
            .field("nyquist", &self.nyquist_sd.is_some())
            .finish()
    }
}

impl GaussianSampler {
    pub fn new(params: &EnsembleParams) -> Self {
        let n = params.n();
        let nf = n as f64;
        let scale = (2.0 / params.beta()).sqrt();
        let sigma = (1..=(n - 1) / 2)
            .map(|k| scale * nf * nf / (2.0 * k as f64 * (n - k) as f64))
            .collect();
        let nyquist_sd = (n % 2 == 0).then(|| 1.0 / eigenvalue(params, n / 2).sqrt());
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(n);
        Self {
            params: *params,
            sigma,
            nyquist_sd,
            fft,
        }
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    /// Number of complex modes ⌊(n−1)/2⌋.
    pub fn modes(&self) -> usize {
        self.sigma.len()
    }

    /// Standard deviation σ_k of the real and imaginary parts of mode k ≥ 1.
    pub fn sigma(&self, k: usize) -> f64 {
        self.sigma[k - 1]
    }

    pub fn nyquist_sd(&self) -> Option<f64> {
        self.nyquist_sd
    }

    /// Draws X_1, Y_1, X_2, Y_2, … then, for even n, the Nyquist variable.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FluctuationVector {
        let mut xs = Vec::with_capacity(self.sigma.len());
        let mut ys = Vec::with_capacity(self.sigma.len());
        for _ in 0..self.sigma.len() {
            xs.push(rng.sample::<f64, _>(StandardNormal));
            ys.push(rng.sample::<f64, _>(StandardNormal));
        }
        let nyquist = self.nyquist_sd.map(|_| rng.sample::<f64, _>(StandardNormal));
        FluctuationVector::from_raw(self.synthesize(&xs, &ys, nyquist))
    }

    /// Maps standard normal mode variables to x. `nyquist` is ignored for
    /// odd n.
    pub fn synthesize(&self, xs: &[f64], ys: &[f64], nyquist: Option<f64>) -> Vec<f64> {
        let n = self.params.n();
        assert_eq!(xs.len(), self.sigma.len());
        assert_eq!(ys.len(), self.sigma.len());
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        for (k, ((&s, &x), &y)) in self.sigma.iter().zip(xs).zip(ys).enumerate() {
            buf[k + 1] = Complex::new(s * x, s * y);
        }
        if let (Some(sd), Some(z)) = (self.nyquist_sd, nyquist) {
            // Halved: the real part is doubled below.
            buf[n / 2] = Complex::new(0.5 * sd * z, 0.0);
        }
        self.fft.process(&mut buf);
        let scale = 2.0 / (n as f64).sqrt();
        buf.into_iter().map(|z| scale * z.re).collect()
    }
}

/// `count` independent draws from one stream.
pub fn sample_gaussian_fluctuation(params: &EnsembleParams, seed: RngSeed, count: usize) -> Vec<FluctuationVector> {
    let sampler = GaussianSampler::new(params);
    let mut rng = seed.rng();
    (0..count).map(|_| sampler.sample(&mut rng)).collect()
}
