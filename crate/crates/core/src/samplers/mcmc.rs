//! Metropolis random walk targeting q(θ) ∝ exp H(θ).
//!
//! Particles keep their identity for the whole run: they can never pass each
//! other, so the cyclic order of identities is fixed and each single-site
//! update acts on a fixed particle. That keeps every update reversible even
//! when a particle wraps through angle 0. Emitted configurations are rotated
//! into the canonical sorted order on [0, 2π).
//!
//! One sweep is n single-site proposals in identity order followed by one
//! rigid rotation of all angles. H is rotation invariant, so the rotation is
//! accepted with probability one. It lets the centre ψ mix on the scale 2π/n
//! instead of diffusing through single-site moves.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EnsembleParams, ParticleConfig, COLLISION_GUARD};
use crate::rng::RngSeed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub sweeps: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// Single-site proposal std in units of n^{-3/2}.
    pub step_scale: f64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            sweeps: 20_000,
            burn_in: 2_000,
            thin: 1,
            step_scale: 2.0,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sweeps <= self.burn_in {
            return Err(Error::InvalidParams(format!(
                "sweeps ({}) must exceed burn_in ({})",
                self.sweeps, self.burn_in
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidParams("thin must be at least 1".into()));
        }
        if !(self.step_scale.is_finite() && self.step_scale > 0.0) {
            return Err(Error::InvalidParams(format!(
                "step_scale must be positive and finite, got {}",
                self.step_scale
            )));
        }
        Ok(())
    }

    /// Number of configurations emitted after burn-in.
    pub fn emitted(&self) -> usize {
        (self.sweeps - self.burn_in) / self.thin
    }
}

#[derive(Debug, Clone)]
pub struct McmcChain {
    params: EnsembleParams,
    angles: Vec<f64>,
    half_sin: Vec<f64>,
    half_cos: Vec<f64>,
    step_sd: f64,
    rotation_sd: f64,
    rng: ChaCha8Rng,
    proposed: u64,
    accepted: u64,
}

impl McmcChain {
    /// Chain started at the lattice ground state.
    pub fn new(params: &EnsembleParams, seed: RngSeed, step_scale: f64) -> Self {
        Self::from_config(params, &ParticleConfig::lattice(params.n()), seed, step_scale)
    }

    pub fn from_config(params: &EnsembleParams, config: &ParticleConfig, seed: RngSeed, step_scale: f64) -> Self {
        assert_eq!(config.len(), params.n(), "configuration length does not match n");
        let n = params.n() as f64;
        let angles = config.angles().to_vec();
        let (half_sin, half_cos) = angles.iter().map(|a| (0.5 * a).sin_cos()).unzip();
        Self {
            params: *params,
            angles,
            half_sin,
            half_cos,
            step_sd: step_scale * n.powf(-1.5),
            rotation_sd: step_scale * TAU / n,
            rng: seed.rng(),
            proposed: 0,
            accepted: 0,
        }
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    /// Angles indexed by particle identity, not sorted.
    pub fn raw_angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            1.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Current state in canonical sorted order.
    pub fn config(&self) -> ParticleConfig {
        ParticleConfig::from_sorted_unchecked(self.sorted_angles())
    }

    pub fn sorted_angles(&self) -> Vec<f64> {
        let start = self
            .angles
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i);
        let mut out = self.angles.clone();
        out.rotate_left(start);
        out
    }

    /// Gap from particle p to its successor.
    fn gap_after(&self, p: usize) -> f64 {
        let q = (p + 1) % self.angles.len();
        (self.angles[q] - self.angles[p]).rem_euclid(TAU)
    }

    /// log q(θ′) − log q(θ) when particle p moves by `delta`, or `None` when
    /// the move would cross a neighbour or close a gap to within the guard.
    pub fn log_acceptance_ratio(&self, p: usize, delta: f64) -> Option<f64> {
        let n = self.angles.len();
        let prev = (p + n - 1) % n;
        let before = self.gap_after(prev) + delta;
        let after = self.gap_after(p) - delta;
        if !(before > COLLISION_GUARD && after > COLLISION_GUARD) {
            return None;
        }
        let (s_new, c_new) = (0.5 * (self.angles[p] + delta)).sin_cos();
        let (s_old, c_old) = (self.half_sin[p], self.half_cos[p]);
        let mut acc = 0.0;
        for j in 0..n {
            if j == p {
                continue;
            }
            let (sj, cj) = (self.half_sin[j], self.half_cos[j]);
            let a = s_new * cj - c_new * sj;
            let b = s_old * cj - c_old * sj;
            let (a2, b2) = (a * a, b * b);
            acc += (b2 - a2) / (a2 * b2);
        }
        // H = −β Σ_{i<j} sin^{-2}: the moved particle enters n−1 pairs once.
        Some(-self.params.beta() * acc)
    }

    fn set_angle(&mut self, p: usize, angle: f64) {
        let mut a = angle.rem_euclid(TAU);
        if a >= TAU {
            a = 0.0;
        }
        self.angles[p] = a;
        let (s, c) = (0.5 * a).sin_cos();
        self.half_sin[p] = s;
        self.half_cos[p] = c;
    }

    /// Proposes one move of particle p; returns whether it was accepted.
    pub fn step_site(&mut self, p: usize) -> bool {
        let z: f64 = self.rng.sample(StandardNormal);
        let delta = self.step_sd * z;
        let u: f64 = self.rng.random();
        self.proposed += 1;
        match self.log_acceptance_ratio(p, delta) {
            Some(log_ratio) if log_ratio >= 0.0 || u.ln() < log_ratio => {
                self.set_angle(p, self.angles[p] + delta);
                self.accepted += 1;
                true
            }
            _ => false,
        }
    }

    /// Rigid rotation by a centred Gaussian angle.
    pub fn rotate(&mut self) {
        let eta: f64 = self.rotation_sd * self.rng.sample::<f64, _>(StandardNormal);
        for p in 0..self.angles.len() {
            self.set_angle(p, self.angles[p] + eta);
        }
    }

    pub fn sweep(&mut self) {
        for p in 0..self.angles.len() {
            self.step_site(p);
        }
        self.rotate();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McmcRun {
    pub configs: Vec<ParticleConfig>,
    pub acceptance_rate: f64,
    pub seed: RngSeed,
}

/// Runs one chain and hands every emitted configuration to `visit`.
/// Returns the single-site acceptance rate.
pub fn run_chain<F>(params: &EnsembleParams, seed: RngSeed, cfg: &McmcConfig, mut visit: F) -> Result<f64>
where
    F: FnMut(&ParticleConfig),
{
    cfg.validate()?;
    let mut chain = McmcChain::new(params, seed, cfg.step_scale);
    for _ in 0..cfg.burn_in {
        chain.sweep();
    }
    for _ in 0..cfg.emitted() {
        for _ in 0..cfg.thin {
            chain.sweep();
        }
        visit(&chain.config());
    }
    Ok(chain.acceptance_rate())
}

pub fn sample_mcmc(params: &EnsembleParams, seed: RngSeed, cfg: &McmcConfig) -> Result<McmcRun> {
    let mut configs = Vec::with_capacity(cfg.emitted());
    let acceptance_rate = run_chain(params, seed, cfg, |c| configs.push(c.clone()))?;
    Ok(McmcRun {
        configs,
        acceptance_rate,
        seed,
    })
}
