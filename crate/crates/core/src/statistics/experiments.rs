//! Monte Carlo experiments for the limit theorems.
//!
//! Each experiment is split into a data stage (the raw per-replica values,
//! which the CLI can write out) and a report stage. Replicas are drawn in
//! blocks of [`REPLICA_BLOCK`], block b on its own RNG stream.

use std::f64::consts::TAU;

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::{
    circular_distance, cubic_remainder_f, decompose, EnsembleParams, FluctuationVector,
};
use crate::parallel::{map_blocks, try_map_blocks, REPLICA_BLOCK};
use crate::rng::{streams, RngSeed};
use crate::samplers::{limit_covariance, run_chain, GaussianSampler, LimitProcessSampler, McmcConfig};
use crate::statistics::ess::effective_sample_size;
use crate::statistics::fourier::{linear_statistic, linear_statistic_angles, FourierTestFunction};
use crate::statistics::ks::{ks_one_sample, ks_two_sample};
use crate::statistics::report::ExperimentReport;
use crate::statistics::summary::{correlation, covariance, mean, median, quantile_sorted, sorted, variance};
use crate::statistics::zeta::{max_statistic, zeta_n_at};

fn block_seed(seed: RngSeed, base: u32, block: usize) -> RngSeed {
    seed.with_stream(seed.stream.wrapping_add(base).wrapping_add(block as u32))
}

/// Gaussian-approximation samples of x, drawn block by block.
pub fn gaussian_batch<T, F>(params: &EnsembleParams, seed: RngSeed, replicas: usize, per_sample: F) -> Vec<T>
where
    T: Send,
    F: Fn(FluctuationVector, &mut rand_chacha::ChaCha8Rng) -> T + Sync,
{
    let sampler = GaussianSampler::new(params);
    map_blocks(replicas, REPLICA_BLOCK, |b, len| {
        let mut rng = block_seed(seed, streams::GAUSSIAN, b).rng();
        (0..len)
            .map(|_| {
                let x = sampler.sample(&mut rng);
                per_sample(x, &mut rng)
            })
            .collect()
    })
}

// ---------------------------------------------------------------- CLT

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CltSource {
    /// Gaussian x with ψ uniform on [0, 2π/n).
    GaussianApprox,
    /// `replicas` independent Metropolis chains, all emitted states pooled.
    Mcmc(McmcConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltTolerances {
    /// Allowed |variance − target| as a fraction of the target.
    pub variance_rel: f64,
    /// Bound on the KS distance to N(0, target).
    pub ks: Option<f64>,
    /// Bound on |mean|.
    pub mean_abs: Option<f64>,
}

impl CltTolerances {
    pub fn gaussian_approx() -> Self {
        Self {
            variance_rel: 0.10,
            ks: Some(0.03),
            mean_abs: None,
        }
    }

    pub fn mcmc() -> Self {
        Self {
            variance_rel: 0.15,
            ks: None,
            mean_abs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CltData {
    pub values: Vec<f64>,
    pub effective_samples: f64,
    pub acceptance_rate: Option<f64>,
}

pub fn clt_samples(
    params: &EnsembleParams,
    g: &FourierTestFunction,
    replicas: usize,
    source: CltSource,
    seed: RngSeed,
) -> Result<CltData> {
    if replicas < 100 {
        return Err(Error::InvalidArgument(format!("replicas must be at least 100, got {replicas}")));
    }
    let n = params.n();
    match source {
        CltSource::GaussianApprox => {
            let width = TAU / n as f64;
            let values = gaussian_batch(params, seed, replicas, |x, rng| {
                let psi = width * rng.random::<f64>();
                let angles: Vec<f64> = x
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(j, v)| TAU * j as f64 / n as f64 + psi + v / (n * n) as f64)
                    .collect();
                linear_statistic_angles(&angles, g)
            });
            Ok(CltData {
                effective_samples: values.len() as f64,
                values,
                acceptance_rate: None,
            })
        }
        CltSource::Mcmc(cfg) => {
            cfg.validate()?;
            let chains = try_map_blocks(replicas, 1, |c, _| -> Result<Vec<(Vec<f64>, f64)>> {
                let mut vals = Vec::with_capacity(cfg.emitted());
                let acc = run_chain(params, block_seed(seed, streams::MCMC, c), &cfg, |conf| {
                    vals.push(linear_statistic(conf, g))
                })?;
                Ok(vec![(vals, acc)])
            })?;
            let effective_samples = chains.iter().map(|(v, _)| effective_sample_size(v)).sum();
            let acceptance = chains.iter().map(|(_, a)| a).sum::<f64>() / chains.len() as f64;
            Ok(CltData {
                values: chains.into_iter().flat_map(|(v, _)| v).collect(),
                effective_samples,
                acceptance_rate: Some(acceptance),
            })
        }
    }
}

pub fn clt_report(
    params: &EnsembleParams,
    g: &FourierTestFunction,
    replicas: usize,
    data: &CltData,
    tol: &CltTolerances,
) -> Result<ExperimentReport> {
    let target = g.target_variance(params.beta());
    let (m, var) = (mean(&data.values), variance(&data.values));
    let ks = if target > 0.0 {
        let normal = Normal::new(0.0, target.sqrt()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        ks_one_sample(&data.values, &|x| normal.cdf(x))?
    } else {
        ks_two_sample(&data.values, &[0.0])?
    };
    let mut r = ExperimentReport::new("clt", *params, replicas);
    r.insert("samples", data.values.len() as f64)
        .insert("effective_samples", data.effective_samples)
        .insert("mean", m)
        .insert("mean_std_error", (var / data.effective_samples).sqrt())
        .insert("variance", var)
        .insert("target_variance", target)
        .insert("ks_distance", ks);
    if let Some(a) = data.acceptance_rate {
        r.insert("acceptance_rate", a);
    }
    r.check("variance", target, tol.variance_rel * target);
    if let Some(k) = tol.ks {
        r.check("ks_distance", 0.0, k);
    }
    if let Some(mt) = tol.mean_abs {
        r.check("mean", 0.0, mt);
    }
    Ok(r)
}

pub fn clt_experiment(
    params: &EnsembleParams,
    g: &FourierTestFunction,
    replicas: usize,
    source: CltSource,
    seed: RngSeed,
    tol: &CltTolerances,
) -> Result<ExperimentReport> {
    let data = clt_samples(params, g, replicas, source, seed)?;
    clt_report(params, g, replicas, &data, tol)
}

// ---------------------------------------------------------------- max statistic

#[derive(Debug, Clone, PartialEq)]
pub struct MaxStatData {
    /// max_j |x_j|/√n per Gaussian-approximation sample.
    pub finite_n: Vec<f64>,
    /// Grid sup |ζ| per truncated limit path.
    pub limit: Vec<f64>,
}

pub fn maxstat_samples(
    params: &EnsembleParams,
    replicas: usize,
    truncation: usize,
    grid_points: usize,
    seed: RngSeed,
) -> Result<MaxStatData> {
    if replicas < 1000 {
        return Err(Error::InvalidArgument(format!("replicas must be at least 1000, got {replicas}")));
    }
    let limit_sampler = LimitProcessSampler::new(params.beta(), truncation, grid_points)?;
    let finite_n = gaussian_batch(params, seed, replicas, |x, _| max_statistic(&x));
    let limit = map_blocks(replicas, REPLICA_BLOCK, |b, len| {
        let mut rng = block_seed(seed, streams::LIMIT, b).rng();
        (0..len)
            .map(|_| {
                limit_sampler
                    .sample_values(&mut rng)
                    .iter()
                    .fold(0.0_f64, |m, v| m.max(v.abs()))
            })
            .collect()
    });
    Ok(MaxStatData { finite_n, limit })
}

pub fn maxstat_report(
    params: &EnsembleParams,
    replicas: usize,
    truncation: usize,
    grid_points: usize,
    data: &MaxStatData,
    ks_tolerance: f64,
) -> Result<ExperimentReport> {
    let ks = ks_two_sample(&data.finite_n, &data.limit)?;
    let (a, b) = (sorted(&data.finite_n), sorted(&data.limit));
    let mut r = ExperimentReport::new("maxstat", *params, replicas);
    r.insert("truncation", truncation as f64)
        .insert("grid_points", grid_points as f64)
        .insert("ks_distance", ks);
    for (label, p) in [("q25", 0.25), ("q50", 0.5), ("q75", 0.75)] {
        r.insert(format!("finite_n_{label}"), quantile_sorted(&a, p))
            .insert(format!("limit_{label}"), quantile_sorted(&b, p));
    }
    r.check("ks_distance", 0.0, ks_tolerance);
    Ok(r)
}

pub fn maxstat_experiment(
    params: &EnsembleParams,
    replicas: usize,
    truncation: usize,
    grid_points: usize,
    seed: RngSeed,
) -> Result<ExperimentReport> {
    let data = maxstat_samples(params, replicas, truncation, grid_points, seed)?;
    maxstat_report(params, replicas, truncation, grid_points, &data, 0.05)
}

// ---------------------------------------------------------------- ψ uniformity

#[derive(Debug, Clone, PartialEq)]
pub struct PsiData {
    /// nψ mod 2π per emitted state.
    pub n_psi: Vec<f64>,
    pub x0: Vec<f64>,
    pub acceptance_rate: f64,
}

pub fn psi_uniformity_samples(params: &EnsembleParams, cfg: &McmcConfig, seed: RngSeed) -> Result<PsiData> {
    let n = params.n() as f64;
    let mut n_psi = Vec::with_capacity(cfg.emitted());
    let mut x0 = Vec::with_capacity(cfg.emitted());
    let acceptance_rate = run_chain(params, block_seed(seed, streams::MCMC, 0), cfg, |c| {
        let (x, psi) = decompose(c);
        n_psi.push((n * psi.psi()).rem_euclid(TAU));
        x0.push(x.values()[0]);
    })?;
    Ok(PsiData {
        n_psi,
        x0,
        acceptance_rate,
    })
}

pub fn psi_uniformity_report(params: &EnsembleParams, data: &PsiData) -> Result<ExperimentReport> {
    let ks = ks_one_sample(&data.n_psi, &|v| (v / TAU).clamp(0.0, 1.0))?;
    let corr = correlation(&data.n_psi, &data.x0);
    let mut r = ExperimentReport::new("psi-uniform", *params, data.n_psi.len());
    r.insert("ks_distance", ks)
        .insert("correlation_npsi_x0", corr)
        .insert("acceptance_rate", data.acceptance_rate)
        .insert("effective_samples", effective_sample_size(&data.n_psi));
    r.check("ks_distance", 0.0, 0.05).check("correlation_npsi_x0", 0.0, 0.1);
    Ok(r)
}

pub fn psi_uniformity_experiment(params: &EnsembleParams, cfg: &McmcConfig, seed: RngSeed) -> Result<ExperimentReport> {
    let data = psi_uniformity_samples(params, cfg, seed)?;
    psi_uniformity_report(params, &data)
}

// ---------------------------------------------------------------- F smallness

/// Leading-order cubic term Σ_{i>j} (x_i − x_j)³ / (n |i−j|_o⁵).
pub fn cubic_proxy(x: &FluctuationVector) -> f64 {
    let n = x.len();
    let v = x.values();
    let mut acc = 0.0;
    for i in 1..n {
        for j in 0..i {
            let d = circular_distance(i, j, n) as f64;
            acc += (v[i] - v[j]).powi(3) / (n as f64 * d.powi(5));
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct FSmallnessRow {
    pub n: usize,
    pub f: Vec<f64>,
    pub proxy: Vec<f64>,
}

pub fn f_smallness_samples(beta: f64, n_list: &[usize], replicas: usize, seed: RngSeed) -> Result<Vec<FSmallnessRow>> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("n_list must not be empty".into()));
    }
    if n_list.iter().any(|&n| n < 16) || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n_list must be strictly increasing with every n ≥ 16".into()));
    }
    if replicas == 0 {
        return Err(Error::InvalidArgument("replicas must be positive".into()));
    }
    n_list
        .iter()
        .enumerate()
        .map(|(idx, &n)| {
            let params = EnsembleParams::new(n, beta)?;
            // Each n gets its own range of streams.
            let s = seed.with_stream(seed.stream.wrapping_add((idx as u32) << 12));
            let pairs = gaussian_batch(&params, s, replicas, |x, _| {
                cubic_remainder_f(&x, &params).map(|f| (f, cubic_proxy(&x)))
            });
            let pairs: Vec<(f64, f64)> = pairs.into_iter().collect::<Result<_>>()?;
            let (f, proxy) = pairs.into_iter().unzip();
            Ok(FSmallnessRow { n, f, proxy })
        })
        .collect()
}

pub fn f_smallness_report(beta: f64, replicas: usize, rows: &[FSmallnessRow]) -> Result<ExperimentReport> {
    let last = rows.last().ok_or(Error::EmptySample)?;
    let params = EnsembleParams::new(last.n, beta)?;
    let mut r = ExperimentReport::new("f-small", params, replicas);
    let medians: Vec<f64> = rows
        .iter()
        .map(|row| median(&row.f.iter().map(|v| v.abs()).collect::<Vec<_>>()))
        .collect();
    for (row, m) in rows.iter().zip(&medians) {
        r.insert(format!("median_abs_f_n{}", row.n), *m)
            .insert(format!("proxy_correlation_n{}", row.n), correlation(&row.f, &row.proxy));
    }
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    r.insert("strictly_decreasing", if decreasing { 1.0 } else { 0.0 })
        .insert("final_median_abs_f", *medians.last().expect("nonempty"));
    r.check("strictly_decreasing", 1.0, 0.0)
        .check("final_median_abs_f", 0.0, 0.05);
    Ok(r)
}

pub fn f_smallness_experiment(beta: f64, n_list: &[usize], replicas: usize, seed: RngSeed) -> Result<ExperimentReport> {
    let rows = f_smallness_samples(beta, n_list, replicas, seed)?;
    f_smallness_report(beta, replicas, &rows)
}

// ---------------------------------------------------------------- functional covariance

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceRow {
    pub t: f64,
    pub empirical: f64,
    pub target: f64,
}

impl CovarianceRow {
    pub fn abs_error(&self) -> f64 {
        (self.empirical - self.target).abs()
    }
}

/// Empirical Cov(ζ_n(0), ζ_n(t)) at t = 2πm/grid_points against the limit.
pub fn functional_covariance_rows(
    params: &EnsembleParams,
    replicas: usize,
    grid_points: usize,
    seed: RngSeed,
) -> Result<Vec<CovarianceRow>> {
    if replicas < 5000 {
        return Err(Error::InvalidArgument(format!("replicas must be at least 5000, got {replicas}")));
    }
    if grid_points < 1 {
        return Err(Error::InvalidArgument("grid_points must be positive".into()));
    }
    let ts: Vec<f64> = (0..grid_points).map(|m| TAU * m as f64 / grid_points as f64).collect();
    let paths = gaussian_batch(params, seed, replicas, |x, _| {
        ts.iter().map(|&t| zeta_n_at(&x, t)).collect::<Vec<f64>>()
    });
    let at_zero: Vec<f64> = paths.iter().map(|p| p[0]).collect();
    Ok(ts
        .iter()
        .enumerate()
        .map(|(m, &t)| {
            let col: Vec<f64> = paths.iter().map(|p| p[m]).collect();
            CovarianceRow {
                t,
                empirical: covariance(&at_zero, &col),
                target: limit_covariance(params.beta(), 0.0, t),
            }
        })
        .collect())
}

pub fn functional_covariance_report(
    params: &EnsembleParams,
    replicas: usize,
    rows: &[CovarianceRow],
    tolerance: f64,
) -> Result<ExperimentReport> {
    let first = rows.first().ok_or(Error::EmptySample)?;
    let max_err = rows.iter().map(CovarianceRow::abs_error).fold(0.0, f64::max);
    let g = rows.len();
    let symmetry = (1..g)
        .map(|m| (rows[m].empirical - rows[g - m].empirical).abs())
        .fold(0.0, f64::max);
    let mut r = ExperimentReport::new("cov-check", *params, replicas);
    r.insert("grid_points", g as f64)
        .insert("max_abs_error", max_err)
        .insert("var_zeta_0", first.empirical)
        .insert("var_zeta_0_limit", first.target)
        .insert("error_at_zero", first.abs_error())
        .insert("symmetry_max_diff", symmetry);
    r.check("max_abs_error", 0.0, tolerance);
    Ok(r)
}

pub fn functional_covariance_check(
    params: &EnsembleParams,
    replicas: usize,
    grid_points: usize,
    seed: RngSeed,
) -> Result<ExperimentReport> {
    let rows = functional_covariance_rows(params, replicas, grid_points, seed)?;
    functional_covariance_report(params, replicas, &rows, 0.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize) -> EnsembleParams {
        EnsembleParams::new(n, 2.0).unwrap()
    }

    #[test]
    fn constant_test_function_gives_zero_statistic() {
        let g = FourierTestFunction::constant(1.5);
        let r = clt_experiment(
            &params(21),
            &g,
            200,
            CltSource::GaussianApprox,
            RngSeed::new(0, 0),
            &CltTolerances::gaussian_approx(),
        )
        .unwrap();
        assert_eq!(r.get("variance"), Some(0.0));
        assert_eq!(r.get("ks_distance"), Some(0.0));
        assert!(r.pass);
    }

    #[test]
    fn clt_rejects_few_replicas() {
        let g = FourierTestFunction::cosine();
        assert!(clt_samples(&params(8), &g, 99, CltSource::GaussianApprox, RngSeed::new(0, 0)).is_err());
    }

    #[test]
    fn clt_gaussian_small_run() {
        let r = clt_experiment(
            &params(51),
            &FourierTestFunction::cosine(),
            4000,
            CltSource::GaussianApprox,
            RngSeed::new(1, 0),
            &CltTolerances {
                variance_rel: 0.15,
                ks: Some(0.05),
                mean_abs: None,
            },
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn frozen_chain_has_degenerate_psi() {
        let cfg = McmcConfig {
            sweeps: 300,
            burn_in: 0,
            thin: 1,
            step_scale: 1e-12,
        };
        let p = params(16);
        let data = psi_uniformity_samples(&p, &cfg, RngSeed::new(2, 0)).unwrap();
        // The lattice start sits on the cut of nψ mod 2π, so the samples
        // pile up at both ends of [0, 2π) rather than at one point.
        for v in &data.n_psi {
            assert!(v.min(TAU - v) < 1e-6, "{v}");
        }
        let r = psi_uniformity_report(&p, &data).unwrap();
        assert!(r.get("ks_distance").unwrap() > 0.4);
        assert!(!r.pass);
    }

    #[test]
    fn zero_x_has_zero_remainder_and_proxy() {
        let x = FluctuationVector::zeros(32);
        assert_eq!(cubic_remainder_f(&x, &params(32)).unwrap(), 0.0);
        assert_eq!(cubic_proxy(&x), 0.0);
    }

    #[test]
    fn proxy_tracks_remainder() {
        let rows = f_smallness_samples(2.0, &[128], 100, RngSeed::new(3, 0)).unwrap();
        assert!(correlation(&rows[0].f, &rows[0].proxy) > 0.5);
    }

    #[test]
    fn f_smallness_validates_list() {
        assert!(f_smallness_samples(2.0, &[64, 32], 10, RngSeed::new(0, 0)).is_err());
        assert!(f_smallness_samples(2.0, &[8], 10, RngSeed::new(0, 0)).is_err());
        assert!(f_smallness_samples(2.0, &[], 10, RngSeed::new(0, 0)).is_err());
    }

    #[test]
    fn maxstat_smoke_and_determinism() {
        let a = maxstat_experiment(&params(41), 1000, 200, 256, RngSeed::new(4, 0)).unwrap();
        let b = maxstat_experiment(&params(41), 1000, 200, 256, RngSeed::new(4, 0)).unwrap();
        assert_eq!(a, b);
        assert!(a.get("ks_distance").is_some());
        assert!(maxstat_experiment(&params(41), 999, 200, 256, RngSeed::new(4, 0)).is_err());
    }

    #[test]
    fn maxstat_ks_invariant_under_beta() {
        let a = maxstat_experiment(&params(41), 1000, 200, 256, RngSeed::new(5, 0)).unwrap();
        let b = maxstat_experiment(&EnsembleParams::new(41, 8.0).unwrap(), 1000, 200, 256, RngSeed::new(5, 0)).unwrap();
        assert!((a.get("ks_distance").unwrap() - b.get("ks_distance").unwrap()).abs() < 1e-12);
    }

    #[test]
    fn covariance_rows_are_deterministic() {
        let a = functional_covariance_rows(&params(31), 5000, 8, RngSeed::new(6, 0)).unwrap();
        let b = functional_covariance_rows(&params(31), 5000, 8, RngSeed::new(6, 0)).unwrap();
        assert_eq!(a, b);
        assert!(functional_covariance_rows(&params(31), 4999, 8, RngSeed::new(6, 0)).is_err());
    }
}
