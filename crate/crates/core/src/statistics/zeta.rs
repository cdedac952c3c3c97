//! The piecewise-linear random function ζ_n with ζ_n(2πj/n) = x_j/√n.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::model::FluctuationVector;
use crate::samplers::PathSample;

/// ζ_n on the grid t_g = 2πg/G. Knots that fall on grid points are exact.
pub fn build_zeta_n(x: &FluctuationVector, grid_points: usize) -> Result<PathSample> {
    let n = x.len();
    if grid_points < n {
        return Err(Error::InvalidArgument(format!(
            "grid_points ({grid_points}) must be at least n ({n})"
        )));
    }
    let v = x.values();
    let root = (n as f64).sqrt();
    let values = (0..grid_points)
        .map(|g| {
            // Position g·n/G split exactly into knot index and fraction.
            let j = g * n / grid_points;
            let rem = g * n % grid_points;
            if rem == 0 {
                v[j] / root
            } else {
                let f = rem as f64 / grid_points as f64;
                ((1.0 - f) * v[j] + f * v[(j + 1) % n]) / root
            }
        })
        .collect();
    Ok(PathSample { grid_points, values })
}

/// ζ_n(t) for any real t, extended 2π-periodically.
pub fn zeta_n_at(x: &FluctuationVector, t: f64) -> f64 {
    let n = x.len();
    let v = x.values();
    let u = t.rem_euclid(TAU) / TAU * n as f64;
    let j = (u.floor() as usize).min(n - 1);
    let f = (u - j as f64).clamp(0.0, 1.0);
    ((1.0 - f) * v[j] + f * v[(j + 1) % n]) / (n as f64).sqrt()
}

/// max_j |x_j| / √n.
pub fn max_statistic(x: &FluctuationVector) -> f64 {
    let m = x.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    m / (x.len() as f64).sqrt()
}
