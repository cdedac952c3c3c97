//! Effective sample size of a stationary chain by Geyer's initial monotone
//! positive sequence estimator.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Biased autocovariances γ_0, …, γ_{N−1} via a zero-padded FFT.
pub fn autocovariance(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let mean = v.iter().sum::<f64>() / n as f64;
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = v
        .iter()
        .map(|x| Complex::new(x - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let scale = 1.0 / (size as f64 * n as f64);
    buf.iter().take(n).map(|z| z.re * scale).collect()
}

/// Integrated autocorrelation time τ with N/τ effective samples. A chain
/// with no spread has τ = 1.
pub fn integrated_autocorrelation_time(v: &[f64]) -> f64 {
    let gamma = autocovariance(v);
    if gamma.len() < 2 || gamma[0] <= 0.0 {
        return 1.0;
    }
    let mut total = -gamma[0];
    let mut prev = f64::INFINITY;
    let mut m = 0;
    while 2 * m + 1 < gamma.len() {
        let pair = gamma[2 * m] + gamma[2 * m + 1];
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        total += 2.0 * pair;
        prev = pair;
        m += 1;
    }
    (total / gamma[0]).max(1.0 / v.len() as f64)
}

pub fn effective_sample_size(v: &[f64]) -> f64 {
    v.len() as f64 / integrated_autocorrelation_time(v)
}
