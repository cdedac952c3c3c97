//! Kolmogorov–Smirnov sup-distances.

use crate::error::{Error, Result};
use crate::statistics::summary::sorted;

pub enum KsReference<'a> {
    Sample(&'a [f64]),
    Cdf(&'a dyn Fn(f64) -> f64),
}

/// sup |F_a − F_b| where F_b is either an empirical or a continuous CDF.
/// Inputs need not be sorted.
pub fn ks_distance(a: &[f64], b: KsReference<'_>) -> Result<f64> {
    match b {
        KsReference::Sample(b) => ks_two_sample(a, b),
        KsReference::Cdf(f) => ks_one_sample(a, f),
    }
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Step past every copy of the smaller value so ties move both CDFs.
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

pub fn ks_one_sample(a: &[f64], cdf: &dyn Fn(f64) -> f64) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptySample);
    }
    let a = sorted(a);
    let n = a.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in a.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use rand::Rng;
    use rand_distr::StandardNormal;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn identical_and_disjoint() {
        let a = [0.3, -1.0, 2.0, 2.0];
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[0.0], &[1.0]).unwrap(), 1.0);
        assert_eq!(ks_distance(&[], KsReference::Sample(&[1.0])), Err(Error::EmptySample));
    }

    #[test]
    fn ties_across_samples() {
        // F_a jumps to 1 at 0, F_b reaches 1/2 at 0.
        assert_eq!(ks_two_sample(&[0.0, 0.0], &[0.0, 1.0]).unwrap(), 0.5);
    }

    #[test]
    fn brute_force_agreement() {
        let a = [0.1, 0.5, 0.5, 0.9, 1.3];
        let b = [0.2, 0.5, 1.0];
        let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        let brute = a
            .iter()
            .chain(&b)
            .map(|&x| (ecdf(&a, x) - ecdf(&b, x)).abs())
            .fold(0.0, f64::max);
        assert!((ks_two_sample(&a, &b).unwrap() - brute).abs() < 1e-15);
    }

    #[test]
    fn normal_draws_against_normal_cdf() {
        let mut rng = RngSeed::new(11, 0).rng();
        let v: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
        let normal = Normal::new(0.0, 1.0).unwrap();
        let d = ks_distance(&v, KsReference::Cdf(&|x| normal.cdf(x))).unwrap();
        assert!(d < 0.01, "{d}");
    }

    #[test]
    fn single_point_against_uniform() {
        let d = ks_one_sample(&[0.5], &|x: f64| x.clamp(0.0, 1.0)).unwrap();
        assert_eq!(d, 0.5);
    }
}
