//! The circulant precision matrix A with G(x) = −½ xᵀAx, its spectrum and
//! the covariance kernels of the Gaussian law it defines on the hyperplane.
//!
//! A depends on i − j only, so it is diagonalised by the discrete Fourier
//! modes v_k = n^{-1/2}(ω_k^0, …, ω_k^{n−1}) with ω_k = e^{2πik/n}. The
//! eigenvalue along v_k is λ_k = βk²(n−k)²/n⁴, and λ_0 = 0 is the
//! translation mode excluded by Σx = 0.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cos_tau_ratio, sin_pi_ratio, EnsembleParams, LatticeTables};
use crate::sum::CompensatedSum;

/// First row (A_{0,0}, …, A_{0,n−1}) of the circulant matrix A.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantRow {
    params: EnsembleParams,
    entries: Vec<f64>,
}

impl CirculantRow {
    /// Wraps an arbitrary generator row. Used for checks against rows not
    /// produced by [`build_a_row`].
    pub fn from_entries(params: EnsembleParams, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != params.n() {
            return Err(Error::InvalidArgument(format!(
                "row has {} entries but n = {}",
                entries.len(),
                params.n()
            )));
        }
        Ok(Self { params, entries })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// A_{ij} = entries[(j − i) mod n].
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let n = self.entries.len();
        self.entries[(j + n - i % n) % n]
    }

    /// y = A x by the O(n²) definition.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.entries.len();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = CompensatedSum::new();
                for (j, xj) in x.iter().enumerate() {
                    acc.add(self.entry(i, j) * xj);
                }
                acc.value()
            })
            .collect()
    }

    /// xᵀ A x.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let ax = self.apply(x);
        crate::sum::compensated_sum(x.iter().zip(&ax).map(|(a, b)| a * b))
    }
}

/// Eigenvalues λ_0, …, λ_{n−1} of A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub beta: f64,
    pub lambda: Vec<f64>,
}

/// A_{ij} = (β/2)·[−3/(n⁴ sin⁴(π(i−j)/n)) + 2/(n⁴ sin²(π(i−j)/n))] off the
/// diagonal and A_{ii} = (β/2)·[(n²−1)(n²+11)/(15n⁴) − (2n²−2)/(3n⁴)].
pub fn build_a_row(params: &EnsembleParams) -> CirculantRow {
    let n = params.n();
    let nf = n as f64;
    let n4 = nf.powi(4);
    let half_beta = 0.5 * params.beta();
    let tables = LatticeTables::new(n);
    let mut entries = vec![0.0; n];
    entries[0] = half_beta * ((nf * nf - 1.0) * (nf * nf + 11.0) / (15.0 * n4) - (2.0 * nf * nf - 2.0) / (3.0 * n4));
    for (k, e) in entries.iter_mut().enumerate().skip(1) {
        *e = half_beta * (-3.0 * tables.inv_sin4(k) + 2.0 * tables.inv_sin2(k)) / n4;
    }
    CirculantRow {
        params: *params,
        entries,
    }
}

/// λ_k = βk²(n−k)²/n⁴.
pub fn eigenvalue(params: &EnsembleParams, k: usize) -> f64 {
    let n = params.n();
    let k = k % n;
    let r = (k as f64) * ((n - k) as f64) / (n as f64 * n as f64);
    params.beta() * r * r
}

pub fn eigenvalues_closed_form(params: &EnsembleParams) -> Spectrum {
    Spectrum {
        n: params.n(),
        beta: params.beta(),
        lambda: (0..params.n()).map(|k| eigenvalue(params, k)).collect(),
    }
}

/// Σ_j row_j · e^{2πijk/n} for every k, via FFT.
pub fn row_dft(row: &CirculantRow) -> Vec<Complex<f64>> {
    let n = row.entries.len();
    let mut buf: Vec<Complex<f64>> = row.entries.iter().map(|&a| Complex::new(a, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Spectrum from the DFT of the generator row; imaginary parts are dropped
/// (they vanish for a symmetric row, see [`row_dft`]).
pub fn eigenvalues_dft(row: &CirculantRow) -> Spectrum {
    Spectrum {
        n: row.params.n(),
        beta: row.params.beta(),
        lambda: row_dft(row).into_iter().map(|z| z.re).collect(),
    }
}

/// E x_k x_j = (1/n) Σ_{m=1}^{n−1} λ_m⁻¹ cos(2πm(k−j)/n), by direct summation.
pub fn covariance_x(params: &EnsembleParams, k: usize, j: usize) -> f64 {
    let n = params.n();
    let d = (k + n - j % n) % n;
    let mut acc = CompensatedSum::new();
    for m in 1..n {
        acc.add(cos_tau_ratio(m * d, n) / eigenvalue(params, m));
    }
    acc.value() / n as f64
}

/// c(d) = (1/n) Σ_m w_m cos(2πmd/n) for every lag d, via one FFT.
/// `weights` must be symmetric (w_m = w_{n−m}) for the result to be real.
pub fn lag_kernel(weights: &[f64]) -> Vec<f64> {
    let n = weights.len();
    let mut buf: Vec<Complex<f64>> = weights.iter().map(|&w| Complex::new(w, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
    buf.into_iter().map(|z| z.re / n as f64).collect()
}

/// Covariance of x as a function of the lag: entry d is E x_{j+d} x_j.
pub fn covariance_table(params: &EnsembleParams) -> Vec<f64> {
    let n = params.n();
    let weights: Vec<f64> = (0..n)
        .map(|m| if m == 0 { 0.0 } else { 1.0 / eigenvalue(params, m) })
        .collect();
    lag_kernel(&weights)
}

/// E ξ_k ξ_j for the lag-l increments ξ_j = x_{j+l} − x_j:
/// (1/n) Σ_m 4 sin²(πml/n) λ_m⁻¹ cos(2πm(k−j)/n).
pub fn covariance_increment(params: &EnsembleParams, l: usize, k: usize, j: usize) -> f64 {
    let n = params.n();
    assert!((1..=n).contains(&l), "lag must lie in [1, n]");
    let d = (k + n - j % n) % n;
    let mut acc = CompensatedSum::new();
    for m in 1..n {
        let s = sin_pi_ratio(m * l, n);
        if s == 0.0 {
            continue;
        }
        acc.add(4.0 * s * s * cos_tau_ratio(m * d, n) / eigenvalue(params, m));
    }
    acc.value() / n as f64
}

/// Increment covariance for lag l at every index distance, via FFT.
pub fn increment_covariance_table(params: &EnsembleParams, l: usize) -> Vec<f64> {
    let n = params.n();
    let weights: Vec<f64> = (0..n)
        .map(|m| {
            if m == 0 {
                return 0.0;
            }
            let s = sin_pi_ratio(m * l, n);
            4.0 * s * s / eigenvalue(params, m)
        })
        .collect();
    lag_kernel(&weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRatio {
    pub l: usize,
    /// Circular index distance |k − j|_o.
    pub d: usize,
    pub covariance: f64,
    /// min{l, l²/d}, with d = 0 read as l.
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: EnsembleParams,
    pub l_max: usize,
    /// Smallest C with |E ξ_k ξ_j| ≤ C·min{l, l²/|k−j|_o} on the scanned grid.
    pub c_fit: f64,
    /// c_fit · β/2, the constant expressed at the β = 2 normalisation.
    pub c_fit_normalized: f64,
    pub witness_l: usize,
    pub witness_d: usize,
    /// Largest Var ξ^{(l)} / l over the scan.
    pub max_variance_ratio: f64,
    pub ratios: Vec<BoundRatio>,
}

/// Exhaustive scan of |E ξ_k ξ_j| / min{l, l²/|k−j|_o} over 1 ≤ l ≤ l_max
/// and every circular distance.
pub fn check_increment_bounds(params: &EnsembleParams, l_max: usize, keep_ratios: bool) -> Result<BoundReport> {
    let n = params.n();
    if l_max == 0 || l_max > n {
        return Err(Error::InvalidArgument(format!("l_max must lie in [1, {n}], got {l_max}")));
    }
    let mut c_fit = 0.0_f64;
    let mut witness = (1, 0);
    let mut max_variance_ratio = 0.0_f64;
    let mut ratios = Vec::new();
    for l in 1..=l_max {
        let table = increment_covariance_table(params, l);
        let lf = l as f64;
        max_variance_ratio = max_variance_ratio.max(table[0] / lf);
        for d in 0..=n / 2 {
            let covariance = table[d];
            let bound = if d == 0 { lf } else { lf.min(lf * lf / d as f64) };
            let ratio = covariance.abs() / bound;
            if ratio > c_fit {
                c_fit = ratio;
                witness = (l, d);
            }
            if keep_ratios {
                ratios.push(BoundRatio {
                    l,
                    d,
                    covariance,
                    bound,
                    ratio,
                });
            }
        }
    }
    assert!(c_fit.is_finite(), "fitted constant must be finite");
    Ok(BoundReport {
        params: *params,
        l_max,
        c_fit,
        c_fit_normalized: c_fit * params.beta() / 2.0,
        witness_l: witness.0,
        witness_d: witness.1,
        max_variance_ratio,
        ratios,
    })
}

/// Relative deviation |a − b| / |b|, or |a| when b = 0.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, beta: f64) -> EnsembleParams {
        EnsembleParams::new(n, beta).unwrap()
    }

    #[test]
    fn two_particle_row() {
        let row = build_a_row(&params(2, 2.0));
        assert!((row.entries()[0] - 1.0 / 16.0).abs() < 1e-16);
        assert!((row.entries()[1] + 1.0 / 16.0).abs() < 1e-16);
        let dft = eigenvalues_dft(&row);
        assert!(dft.lambda[0].abs() < 1e-16);
        assert!((dft.lambda[1] - 0.125).abs() < 1e-16);
    }

    #[test]
    fn rows_sum_to_zero_and_are_symmetric() {
        for n in [3, 8, 101] {
            let row = build_a_row(&params(n, 2.0));
            let e = row.entries();
            let max = e.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let sum = crate::sum::compensated_sum(e.iter().copied());
            assert!(sum.abs() <= 1e-12 * n as f64 * max, "n={n} sum={sum:e}");
            for k in 1..n {
                assert_eq!(e[k], e[n - k]);
            }
        }
    }

    #[test]
    fn row_scales_linearly_in_beta() {
        let base = build_a_row(&params(9, 2.0));
        let scaled = build_a_row(&params(9, 5.0));
        for (a, b) in base.entries().iter().zip(scaled.entries()) {
            assert!((b - 2.5 * a).abs() <= 1e-15 * b.abs());
        }
    }

    #[test]
    fn closed_form_eigenvalues() {
        let s = eigenvalues_closed_form(&params(5, 2.0));
        assert_eq!(s.lambda[0], 0.0);
        assert!((s.lambda[2] - 72.0 / 625.0).abs() < 1e-16);
        let s8 = eigenvalues_closed_form(&params(8, 3.0));
        for k in 1..8 {
            assert_eq!(s8.lambda[k], s8.lambda[8 - k]);
        }
    }

    #[test]
    fn dft_of_constant_row() {
        let p = params(6, 2.0);
        let row = CirculantRow::from_entries(p, vec![0.25; 6]).unwrap();
        let s = eigenvalues_dft(&row);
        assert!((s.lambda[0] - 1.5).abs() < 1e-15);
        assert!(s.lambda[1..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn dft_matches_closed_form_n101() {
        let p = params(101, 2.0);
        let dft = eigenvalues_dft(&build_a_row(&p));
        let closed = eigenvalues_closed_form(&p);
        for k in 1..101 {
            assert!(relative_deviation(dft.lambda[k], closed.lambda[k]) < 1e-9, "k={k}");
        }
        assert!(row_dft(&build_a_row(&p)).iter().all(|z| z.im.abs() < 1e-9));
    }

    #[test]
    fn three_particle_variance() {
        let p = params(3, 2.0);
        assert!((covariance_x(&p, 1, 1) - 6.75).abs() < 1e-13);
    }

    #[test]
    fn covariance_rows_sum_to_zero() {
        let p = params(8, 2.0);
        for k in 0..8 {
            let s: f64 = (0..8).map(|j| covariance_x(&p, k, j)).sum();
            assert!(s.abs() < 1e-12 * covariance_x(&p, 0, 0));
        }
    }

    #[test]
    fn covariance_is_stationary_and_matches_table() {
        let p = params(16, 1.3);
        let table = covariance_table(&p);
        for k in 0..16 {
            for j in 0..16 {
                let d = (k + 16 - j) % 16;
                let direct = covariance_x(&p, k, j);
                assert!((direct - covariance_x(&p, d, 0)).abs() < 1e-12 * table[0]);
                assert!((direct - table[d]).abs() < 1e-10 * table[0]);
            }
        }
    }

    #[test]
    fn increment_covariance_examples() {
        let p = params(3, 2.0);
        let assembled = 2.0 * covariance_x(&p, 0, 0) - 2.0 * covariance_x(&p, 0, 1);
        assert!((covariance_increment(&p, 1, 0, 0) - assembled).abs() < 1e-12);
        for (k, j) in [(0, 0), (1, 2), (2, 0)] {
            assert_eq!(covariance_increment(&p, 3, k, j), 0.0);
        }
        let p32 = params(32, 2.0);
        for l in 1..=32 {
            assert!(covariance_increment(&p32, l, 5, 5) >= 0.0);
        }
    }

    #[test]
    fn increment_table_matches_direct() {
        let p = params(21, 2.0);
        for l in [1, 4, 10, 21] {
            let table = increment_covariance_table(&p, l);
            for d in 0..21 {
                let direct = covariance_increment(&p, l, d, 0);
                assert!((direct - table[d]).abs() < 1e-10 * table[0].abs().max(1.0), "l={l} d={d}");
            }
        }
    }

    #[test]
    fn bound_constant_scales_as_inverse_beta() {
        let base = check_increment_bounds(&params(64, 2.0), 20, false).unwrap();
        for beta in [1.0, 4.0] {
            let r = check_increment_bounds(&params(64, beta), 20, false).unwrap();
            assert!(relative_deviation(r.c_fit_normalized, base.c_fit_normalized) < 1e-12);
            assert!(relative_deviation(r.c_fit, base.c_fit * 2.0 / beta) < 1e-12);
            assert_eq!((r.witness_l, r.witness_d), (base.witness_l, base.witness_d));
        }
    }

    #[test]
    fn full_circle_lag_has_zero_ratios() {
        let r = check_increment_bounds(&params(12, 2.0), 12, true).unwrap();
        assert!(r.ratios.iter().filter(|q| q.l == 12).all(|q| q.covariance.abs() < 1e-12));
    }

    #[test]
    fn bound_scan_rejects_bad_lag() {
        assert!(check_increment_bounds(&params(12, 2.0), 0, false).is_err());
        assert!(check_increment_bounds(&params(12, 2.0), 13, false).is_err());
    }
}
