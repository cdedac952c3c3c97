//! Exact model quantities for the strongly repelling particle system.
//!
//! Particles sit at ordered angles θ_0 < … < θ_{n-1} in [0, 2π] and carry
//! the energy H(θ) = −(β/2) Σ_{i≠j} sin⁻²((θ_i − θ_j)/2). Around the
//! equally spaced ground state the angles are written as
//! θ_i = 2πi/n + ψ + x_i/n² with Σ x_i = 0, and the energy gap splits into
//! the quadratic form G(x) and an exact remainder F(x).

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_unit;
use crate::sum::CompensatedSum;

/// Minimum admissible angular gap between two particles, in radians.
pub const COLLISION_GUARD: f64 = 1e-8;

/// Particle count and interaction strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct EnsembleParams {
    n: usize,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    beta: f64,
}

impl TryFrom<RawParams> for EnsembleParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        EnsembleParams::new(raw.n, raw.beta)
    }
}

impl From<EnsembleParams> for RawParams {
    fn from(p: EnsembleParams) -> Self {
        RawParams { n: p.n, beta: p.beta }
    }
}

impl EnsembleParams {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!("beta must be positive and finite, got {beta}")));
        }
        Ok(Self { n, beta })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Strictly increasing angles in [0, 2π].
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleConfig {
    angles: Vec<f64>,
}

impl ParticleConfig {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a configuration needs at least 2 angles, got {}",
                angles.len()
            )));
        }
        for (i, &a) in angles.iter().enumerate() {
            if !a.is_finite() || !(0.0..=TAU).contains(&a) {
                return Err(Error::Ordering {
                    index: i,
                    reason: format!("angle {a} outside [0, 2π]"),
                });
            }
            if i > 0 && a <= angles[i - 1] {
                return Err(Error::Ordering {
                    index: i,
                    reason: format!("angle {a} does not exceed its predecessor {}", angles[i - 1]),
                });
            }
        }
        if angles[angles.len() - 1] - angles[0] >= TAU {
            return Err(Error::Ordering {
                index: angles.len() - 1,
                reason: "first and last angles coincide on the circle".into(),
            });
        }
        Ok(Self { angles })
    }

    /// The equally spaced ground state θ_i = 2πi/n.
    pub fn lattice(n: usize) -> Self {
        assert!(n >= 2);
        Self {
            angles: (0..n).map(|i| lattice_angle(i, n)).collect(),
        }
    }

    pub(crate) fn from_sorted_unchecked(angles: Vec<f64>) -> Self {
        debug_assert!(angles.windows(2).all(|w| w[0] < w[1]));
        Self { angles }
    }

    #[inline]
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn into_angles(self) -> Vec<f64> {
        self.angles
    }

    /// Smallest circular gap between consecutive particles, including the
    /// gap that wraps through angle 0.
    pub fn min_gap(&self) -> f64 {
        let a = &self.angles;
        let wrap = TAU - (a[a.len() - 1] - a[0]);
        a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min)
    }
}

/// Fluctuation vector on the sum-zero hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationVector {
    values: Vec<f64>,
}

impl FluctuationVector {
    /// Accepts `values` if Σ x_j vanishes to 1e-9 · n · max|x_j|.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a fluctuation vector needs at least 2 entries, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("fluctuation vector has non-finite entries".into()));
        }
        let sum = crate::sum::compensated_sum(values.iter().copied());
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if sum.abs() > 1e-9 * values.len() as f64 * scale {
            return Err(Error::InvalidArgument(format!(
                "fluctuation vector is off the sum-zero hyperplane (sum {sum:e})"
            )));
        }
        Ok(Self { values })
    }

    /// Orthogonal projection onto the hyperplane (subtracts the mean).
    pub fn project(mut values: Vec<f64>) -> Result<Self> {
        let mean = crate::sum::compensated_sum(values.iter().copied()) / values.len() as f64;
        values.iter_mut().for_each(|v| *v -= mean);
        Self::new(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![0.0; n] }
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self { values }
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// The common rotation ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterOffset(pub f64);

impl CenterOffset {
    #[inline]
    pub fn psi(self) -> f64 {
        self.0
    }
}

/// 2πi/n.
#[inline]
pub(crate) fn lattice_angle(i: usize, n: usize) -> f64 {
    TAU * i as f64 / n as f64
}

/// sin(π·k/n) with k reduced into [0, n/2] by symmetry before scaling, so
/// large products k = m·j keep full relative accuracy and multiples of n
/// give exactly 0.
#[inline]
pub(crate) fn sin_pi_ratio(k: usize, n: usize) -> f64 {
    let r = k % (2 * n);
    let (r, sign) = if r >= n { (r - n, -1.0) } else { (r, 1.0) };
    if r == 0 {
        return 0.0;
    }
    let r = if 2 * r > n { n - r } else { r };
    sign * (PI * r as f64 / n as f64).sin()
}

/// cos(2π·k/n) with k reduced modulo n and folded onto [0, n/2].
#[inline]
pub(crate) fn cos_tau_ratio(k: usize, n: usize) -> f64 {
    let r = k % n;
    let r = r.min(n - r);
    (TAU * r as f64 / n as f64).cos()
}

/// Circular index distance min(|i−j|, n−|i−j|).
#[inline]
pub fn circular_distance(i: usize, j: usize, n: usize) -> usize {
    let d = i.abs_diff(j) % n;
    d.min(n - d)
}

/// Per-lag lattice sums reused across the O(n²) pair loops: for k = 1..n−1,
/// sin⁻²(πk/n) and sin⁻⁴(πk/n). Index 0 is unused and holds 0.
#[derive(Debug, Clone)]
pub struct LatticeTables {
    n: usize,
    inv_sin2: Vec<f64>,
    inv_sin4: Vec<f64>,
}

impl LatticeTables {
    pub fn new(n: usize) -> Self {
        let mut inv_sin2 = vec![0.0; n];
        let mut inv_sin4 = vec![0.0; n];
        for k in 1..n {
            let s = sin_pi_ratio(k, n);
            let i2 = 1.0 / (s * s);
            inv_sin2[k] = i2;
            inv_sin4[k] = i2 * i2;
        }
        Self { n, inv_sin2, inv_sin4 }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn inv_sin2(&self, k: usize) -> f64 {
        self.inv_sin2[k]
    }

    #[inline]
    pub fn inv_sin4(&self, k: usize) -> f64 {
        self.inv_sin4[k]
    }

    /// Weight w_k = (−3/2 + sin²(πk/n)) / (n⁴ sin⁴(πk/n)) of the quadratic form.
    #[inline]
    pub fn quadratic_weight(&self, k: usize) -> f64 {
        let n4 = (self.n as f64).powi(4);
        (-1.5 * self.inv_sin4[k] + self.inv_sin2[k]) / n4
    }
}

/// H_{n,β}(θ) = −(β/2) Σ_{i≠j} sin⁻²((θ_i − θ_j)/2).
pub fn hamiltonian(config: &ParticleConfig, params: &EnsembleParams) -> Result<f64> {
    let a = config.angles();
    if a.len() != params.n() {
        return Err(Error::InvalidArgument(format!(
            "configuration has {} angles but n = {}",
            a.len(),
            params.n()
        )));
    }
    let min_gap = config.min_gap();
    if min_gap <= COLLISION_GUARD {
        return Err(Error::Collision {
            min_gap,
            guard: COLLISION_GUARD,
        });
    }
    let mut acc = CompensatedSum::new();
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let s = (0.5 * (a[j] - a[i])).sin();
            acc.add(1.0 / (s * s));
        }
    }
    // Each unordered pair appears twice in Σ_{i≠j}.
    Ok(-params.beta() * acc.value())
}

/// max H = H(lattice) = −(n³ − n)β/6.
pub fn ground_state_energy(params: &EnsembleParams) -> f64 {
    let n = params.n() as f64;
    -(n * n * n - n) * params.beta() / 6.0
}

/// Splits θ into the fluctuation x on the hyperplane and the rotation ψ.
///
/// ψ is the raw mean-angle offset, never reduced modulo 2π/n.
pub fn decompose(config: &ParticleConfig) -> (FluctuationVector, CenterOffset) {
    let a = config.angles();
    let n = a.len();
    let nf = n as f64;
    let n2 = nf * nf;
    let mean = crate::sum::compensated_sum(a.iter().copied()) / nf;
    let mut psi = mean - PI * (nf - 1.0) / nf;
    let mut x: Vec<f64> = a
        .iter()
        .enumerate()
        .map(|(i, &t)| n2 * ((t - lattice_angle(i, n)) - psi))
        .collect();
    // Fold the rounding residue of Σx back into ψ.
    let residue = crate::sum::compensated_sum(x.iter().copied()) / nf;
    x.iter_mut().for_each(|v| *v -= residue);
    psi += residue / n2;
    (FluctuationVector::from_raw(x), CenterOffset(psi))
}

/// θ_i = 2πi/n + ψ + x_i/n², shifted as a whole by a multiple of 2π so
/// that θ_0 ∈ [0, 2π). Fails if the result is not strictly ordered inside
/// [0, 2π].
pub fn recompose(x: &FluctuationVector, psi: CenterOffset, n: usize) -> Result<ParticleConfig> {
    if x.len() != n {
        return Err(Error::InvalidArgument(format!(
            "fluctuation vector has {} entries but n = {n}",
            x.len()
        )));
    }
    let n2 = (n as f64).powi(2);
    let mut angles: Vec<f64> = x
        .values()
        .iter()
        .enumerate()
        .map(|(i, &xi)| lattice_angle(i, n) + psi.psi() + xi / n2)
        .collect();
    let turns = (angles[0] / TAU).floor();
    if turns != 0.0 {
        angles.iter_mut().for_each(|t| *t -= turns * TAU);
    }
    ParticleConfig::new(angles)
}

/// Checks that lattice + x/n² is a valid circular arrangement: every
/// consecutive gap, including the one through angle 0, exceeds the
/// collision guard. H is rotation invariant, so ψ plays no role.
pub fn check_admissible(x: &FluctuationVector) -> Result<()> {
    let v = x.values();
    let n = v.len();
    let n2 = (n as f64).powi(2);
    let base = TAU / n as f64;
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        let next = (i + 1) % n;
        let gap = base + (v[next] - v[i]) / n2;
        if gap <= 0.0 {
            return Err(Error::Ordering {
                index: next,
                reason: format!("particle {next} crosses its neighbour {i}"),
            });
        }
        min_gap = min_gap.min(gap);
    }
    if min_gap <= COLLISION_GUARD {
        return Err(Error::Collision {
            min_gap,
            guard: COLLISION_GUARD,
        });
    }
    Ok(())
}

/// G(x) = (β/4) Σ_{i≠j} (−3/2 + sin²(π(i−j)/n)) / (n⁴ sin⁴(π(i−j)/n)) · (x_i − x_j)².
pub fn quadratic_form_g(x: &FluctuationVector, params: &EnsembleParams) -> f64 {
    let tables = LatticeTables::new(params.n());
    quadratic_form_g_with(x, params, &tables)
}

pub fn quadratic_form_g_with(x: &FluctuationVector, params: &EnsembleParams, tables: &LatticeTables) -> f64 {
    let v = x.values();
    assert_eq!(v.len(), params.n(), "fluctuation length must equal n");
    assert_eq!(tables.n(), params.n(), "lattice tables built for another n");
    let mut acc = CompensatedSum::new();
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            let d = v[i] - v[j];
            acc.add(tables.quadratic_weight(j - i) * d * d);
        }
    }
    0.5 * params.beta() * acc.value()
}

/// H(α + x/n²) − H(α), evaluated pair by pair through
/// sin²a₀ − sin²a = −sin(a − a₀)·sin(a + a₀), so the result carries no
/// cancellation against the O(n³) ground-state energy.
pub fn energy_gap(x: &FluctuationVector, params: &EnsembleParams) -> Result<f64> {
    let v = x.values();
    if v.len() != params.n() {
        return Err(Error::InvalidArgument(format!(
            "fluctuation vector has {} entries but n = {}",
            v.len(),
            params.n()
        )));
    }
    check_admissible(x)?;
    let n = v.len();
    let nf = n as f64;
    let two_n2 = 2.0 * nf * nf;
    let half_lattice: Vec<f64> = (0..n).map(|k| PI * k as f64 / nf).collect();
    let sin2_lattice: Vec<f64> = (0..n)
        .map(|k| {
            let s = sin_pi_ratio(k, n);
            s * s
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let k = j - i;
            let a0 = half_lattice[k];
            let e = (v[j] - v[i]) / two_n2;
            let a = a0 + e;
            let sa = a.sin();
            // s(a) − s(a₀) with s = sin⁻².
            let ds = -e.sin() * (a + a0).sin() / (sa * sa * sin2_lattice[k]);
            acc.add(ds);
        }
    }
    Ok(-params.beta() * acc.value())
}

/// Exact cubic-and-higher remainder F(x) = [H(α + x/n²) − H(α)] − G(x).
pub fn cubic_remainder_f(x: &FluctuationVector, params: &EnsembleParams) -> Result<f64> {
    let gap = energy_gap(x, params)?;
    Ok(gap - quadratic_form_g(x, params))
}

/// H(α) − H(α + x/n²) through the integral form of the Taylor remainder:
/// (β/2) Σ_{i≠j} (x_i−x_j)²/n⁴ ∫₀¹ (½ + cos²u_τ)/sin⁴u_τ · (1−τ) dτ,
/// u_τ = π(i−j)/n + τ(x_i−x_j)/(2n²), by Gauss–Legendre quadrature.
pub fn delta_h_integral(x: &FluctuationVector, params: &EnsembleParams, quad_points: usize) -> Result<f64> {
    if quad_points < 16 {
        return Err(Error::InvalidArgument(format!(
            "quad_points must be at least 16, got {quad_points}"
        )));
    }
    let v = x.values();
    if v.len() != params.n() {
        return Err(Error::InvalidArgument(format!(
            "fluctuation vector has {} entries but n = {}",
            v.len(),
            params.n()
        )));
    }
    check_admissible(x)?;
    let n = v.len();
    let nf = n as f64;
    let n2 = nf * nf;
    let n4 = n2 * n2;
    let (nodes, weights) = gauss_legendre_unit(quad_points);
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = v[i] - v[j];
            if d == 0.0 {
                continue;
            }
            let base = PI * (i as f64 - j as f64) / nf;
            let slope = d / (2.0 * n2);
            let mut integral = CompensatedSum::new();
            for (&tau, &w) in nodes.iter().zip(&weights) {
                let u = base + tau * slope;
                let (s, c) = u.sin_cos();
                let s2 = s * s;
                integral.add(w * (0.5 + c * c) / (s2 * s2) * (1.0 - tau));
            }
            acc.add(d * d / n4 * integral.value());
        }
    }
    // (β/2) over ordered pairs = β over unordered pairs.
    Ok(params.beta() * acc.value())
}

/// max_{i≠j} |x_i − x_j| / |i − j|_o.
pub fn max_increment_ratio(x: &FluctuationVector) -> f64 {
    let v = x.values();
    let n = v.len();
    let mut best = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let ratio = (v[i] - v[j]).abs() / circular_distance(i, j, n) as f64;
            best = best.max(ratio);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(n: usize, beta: f64) -> EnsembleParams {
        EnsembleParams::new(n, beta).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(EnsembleParams::new(1, 2.0).is_err());
        assert!(EnsembleParams::new(2, 0.0).is_err());
        assert!(EnsembleParams::new(2, f64::NAN).is_err());
        assert!(EnsembleParams::new(2, 1e-3).is_ok());
    }

    #[test]
    fn params_serde_rejects_invalid() {
        let ok: EnsembleParams = serde_json::from_str(r#"{"n":5,"beta":2.0}"#).unwrap();
        assert_eq!(ok, params(5, 2.0));
        assert!(serde_json::from_str::<EnsembleParams>(r#"{"n":1,"beta":2.0}"#).is_err());
    }

    #[test]
    fn config_rejects_coincident_and_unordered_angles() {
        assert!(matches!(
            ParticleConfig::new(vec![0.1, 0.1, 1.0]),
            Err(Error::Ordering { index: 1, .. })
        ));
        assert!(ParticleConfig::new(vec![0.5, 0.2]).is_err());
        assert!(ParticleConfig::new(vec![-0.1, 0.2]).is_err());
        assert!(ParticleConfig::new(vec![0.0, TAU]).is_err());
        assert!(ParticleConfig::new(vec![0.0, 1.0, TAU - 1e-3]).is_ok());
    }

    #[test]
    fn hamiltonian_small_lattices() {
        let h2 = hamiltonian(&ParticleConfig::lattice(2), &params(2, 2.0)).unwrap();
        assert_relative_eq!(h2, -2.0, max_relative = 1e-14);
        let h3 = hamiltonian(&ParticleConfig::lattice(3), &params(3, 2.0)).unwrap();
        assert_relative_eq!(h3, -8.0, max_relative = 1e-14);
    }

    #[test]
    fn hamiltonian_rotation_invariant() {
        let p = params(7, 1.5);
        let lattice = ParticleConfig::lattice(7);
        let mut rotated: Vec<f64> = lattice.angles().iter().map(|a| (a + 0.3).rem_euclid(TAU)).collect();
        rotated.sort_by(f64::total_cmp);
        let rotated = ParticleConfig::new(rotated).unwrap();
        let a = hamiltonian(&lattice, &p).unwrap();
        let b = hamiltonian(&rotated, &p).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn hamiltonian_collision_error() {
        let cfg = ParticleConfig::new(vec![0.0, 1.0, 1.0 + 5e-9]).unwrap();
        assert!(matches!(hamiltonian(&cfg, &params(3, 2.0)), Err(Error::Collision { .. })));
        let wrapped = ParticleConfig::new(vec![0.0, 1.0, TAU - 1e-9]).unwrap();
        assert!(matches!(hamiltonian(&wrapped, &params(3, 2.0)), Err(Error::Collision { .. })));
    }

    #[test]
    fn ground_state_values() {
        assert_eq!(ground_state_energy(&params(2, 2.0)), -2.0);
        assert_eq!(ground_state_energy(&params(3, 2.0)), -8.0);
        let small = ground_state_energy(&params(2, 1e-6));
        assert_relative_eq!(small, -1e-6, max_relative = 1e-12);
    }

    #[test]
    fn decompose_lattice_and_shift() {
        let (x, psi) = decompose(&ParticleConfig::lattice(9));
        assert!(x.values().iter().all(|v| v.abs() < 1e-12));
        assert!(psi.psi().abs() < 1e-15);

        let shifted = ParticleConfig::new(ParticleConfig::lattice(9).angles().iter().map(|a| a + 0.1).collect()).unwrap();
        let (x, psi) = decompose(&shifted);
        assert!(x.values().iter().all(|v| v.abs() < 1e-11));
        assert_relative_eq!(psi.psi(), 0.1, max_relative = 1e-13);
    }

    #[test]
    fn decompose_three_particle_example() {
        let cfg = ParticleConfig::new(vec![0.1, TAU / 3.0, 2.0 * TAU / 3.0 - 0.1]).unwrap();
        let (x, psi) = decompose(&cfg);
        assert!(psi.psi().abs() < 1e-15);
        let expected = [0.9, 0.0, -0.9];
        for (a, b) in x.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn recompose_three_particle_example() {
        let x = FluctuationVector::new(vec![0.9, 0.0, -0.9]).unwrap();
        let cfg = recompose(&x, CenterOffset(0.0), 3).unwrap();
        let expected = [0.1, TAU / 3.0, 2.0 * TAU / 3.0 - 0.1];
        for (a, b) in cfg.angles().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let lattice = recompose(&FluctuationVector::zeros(5), CenterOffset(0.0), 5).unwrap();
        assert_eq!(lattice, ParticleConfig::lattice(5));
    }

    #[test]
    fn recompose_rejects_crossing() {
        // Neighbour spacing is 2π/3 · 9 ≈ 18.85 in x units.
        let x = FluctuationVector::new(vec![20.0, 0.0, -20.0]).unwrap();
        assert!(matches!(recompose(&x, CenterOffset(0.5), 3), Err(Error::Ordering { .. })));
    }

    #[test]
    fn recompose_reduces_whole_turns() {
        let x = FluctuationVector::new(vec![0.9, 0.0, -0.9]).unwrap();
        let cfg = recompose(&x, CenterOffset(TAU + 0.2), 3).unwrap();
        let (_, psi) = decompose(&cfg);
        assert_relative_eq!(psi.psi(), 0.2, max_relative = 1e-12);
    }

    #[test]
    fn fluctuation_vector_checks_hyperplane() {
        assert!(FluctuationVector::new(vec![1.0, 1.0, -1.0]).is_err());
        assert!(FluctuationVector::new(vec![1.0, -1.0]).is_ok());
        let p = FluctuationVector::project(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(p.values(), &[1.0, -1.0, 0.0]);
    }

    #[test]
    fn g_is_zero_at_origin_and_homogeneous() {
        let p = params(11, 2.0);
        assert_eq!(quadratic_form_g(&FluctuationVector::zeros(11), &p), 0.0);
        let x = FluctuationVector::project((0..11).map(|i| ((i * 7) % 5) as f64 - 1.3).collect()).unwrap();
        let g1 = quadratic_form_g(&x, &p);
        let g3 = quadratic_form_g(&x.scaled(-3.0), &p);
        assert!(g1 < 0.0);
        assert_relative_eq!(g3, 9.0 * g1, max_relative = 1e-13);
    }

    #[test]
    fn remainder_is_zero_at_origin() {
        let p = params(16, 2.0);
        assert_eq!(cubic_remainder_f(&FluctuationVector::zeros(16), &p).unwrap(), 0.0);
        assert_eq!(delta_h_integral(&FluctuationVector::zeros(16), &p, 16).unwrap(), 0.0);
    }

    #[test]
    fn delta_h_integral_three_particle_example() {
        let p = params(3, 2.0);
        let x = FluctuationVector::new(vec![0.9, 0.0, -0.9]).unwrap();
        let direct = ground_state_energy(&p) - hamiltonian(&recompose(&x, CenterOffset(0.0), 3).unwrap(), &p).unwrap();
        let integral = delta_h_integral(&x, &p, 512).unwrap();
        assert_relative_eq!(integral, direct, max_relative = 1e-6);
        assert!(integral > 0.0);
    }

    #[test]
    fn delta_h_integral_rejects_coarse_rules() {
        let x = FluctuationVector::zeros(4);
        assert!(delta_h_integral(&x, &params(4, 2.0), 15).is_err());
    }

    #[test]
    fn admissibility_detects_wrap_crossing() {
        // n = 2: spacing π·4 ≈ 12.57 in x units.
        let ok = FluctuationVector::new(vec![6.0, -6.0]).unwrap();
        assert!(check_admissible(&ok).is_ok());
        let bad = FluctuationVector::new(vec![-7.0, 7.0]).unwrap();
        assert!(check_admissible(&bad).is_err());
    }

    #[test]
    fn max_increment_ratio_examples() {
        assert_eq!(max_increment_ratio(&FluctuationVector::zeros(6)), 0.0);
        let x = FluctuationVector::new(vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        assert_eq!(max_increment_ratio(&x), 2.0);
        assert_eq!(max_increment_ratio(&x.scaled(-2.5)), 5.0);
    }

    #[test]
    fn circular_distance_wraps() {
        assert_eq!(circular_distance(0, 7, 8), 1);
        assert_eq!(circular_distance(2, 6, 8), 4);
        assert_eq!(circular_distance(3, 3, 8), 0);
    }
}
