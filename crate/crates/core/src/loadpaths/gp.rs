use nalgebra::{Cholesky, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Provenance, StrainPath};
use crate::error::{Error, Result};
use crate::linalg::Vec3;

/// Squared-exponential Gaussian process over the step index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpConfig {
    /// σ_f² (strain²).
    pub variance: f64,
    /// ℓ in steps.
    pub length_scale: f64,
    pub n_steps: usize,
    pub mean: Vec3,
    pub rng_seed: u64,
}

impl Default for GpConfig {
    fn default() -> Self {
        Self {
            variance: 1.667e-4,
            length_scale: 200.0,
            n_steps: 100,
            mean: [0.0; 3],
            rng_seed: 0,
        }
    }
}

impl GpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.variance > 0.0 && self.variance.is_finite()) {
            return Err(Error::Config("GP variance must be > 0".into()));
        }
        if !(self.length_scale > 0.0 && self.length_scale.is_finite()) {
            return Err(Error::Config("GP length scale must be > 0".into()));
        }
        if self.n_steps < 2 {
            return Err(Error::Config("GP paths need at least 2 steps".into()));
        }
        if !self.mean.iter().all(|m| m.is_finite()) {
            return Err(Error::Config("GP mean must be finite".into()));
        }
        Ok(())
    }
}

/// `σ_f² exp(−(i − j)² / (2ℓ²))`.
pub fn gp_covariance(i: usize, j: usize, config: &GpConfig) -> f64 {
    let d = i as f64 - j as f64;
    config.variance * (-d * d / (2.0 * config.length_scale * config.length_scale)).exp()
}

const JITTER_ESCALATIONS: usize = 12;

/// Factorized covariance, reusable across seeds.
#[derive(Debug, Clone)]
pub struct GpSampler {
    config: GpConfig,
    factor: DMatrix<f64>,
}

impl GpSampler {
    pub fn new(config: &GpConfig) -> Result<Self> {
        config.validate()?;
        let n = config.n_steps;
        let cov = DMatrix::from_fn(n, n, |i, j| gp_covariance(i, j, config));
        let mut jitter = 1e-12 * config.variance;
        for _ in 0..JITTER_ESCALATIONS {
            let mut m = cov.clone();
            for i in 0..n {
                m[(i, i)] += jitter;
            }
            if let Some(ch) = Cholesky::new(m) {
                return Ok(Self {
                    config: *config,
                    factor: ch.l(),
                });
            }
            jitter *= 10.0;
        }
        Err(Error::Factorization { jitter: jitter / 10.0 })
    }

    pub fn config(&self) -> &GpConfig {
        &self.config
    }

    /// Three independent component draws for `seed`.
    pub fn sample(&self, seed: u64) -> StrainPath {
        let n = self.config.n_steps;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut steps = vec![self.config.mean; n];
        for c in 0..3 {
            let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            for (i, step) in steps.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (k, zk) in z.iter().enumerate().take(i + 1) {
                    acc += self.factor[(i, k)] * zk;
                }
                step[c] += acc;
            }
        }
        StrainPath {
            steps,
            provenance: Provenance::Gp,
            seed,
            config: format!(
                "gp variance={:e} length_scale={} n_steps={}",
                self.config.variance, self.config.length_scale, n
            ),
        }
    }
}

/// One GP path for `config.rng_seed`.
pub fn gp_sample(config: &GpConfig) -> Result<StrainPath> {
    Ok(GpSampler::new(config)?.sample(config.rng_seed))
}
