//! Macroscopic strain paths: Gaussian-process samples and proportional
//! paths with optional unloading cycles.

mod gp;
mod proportional;

use serde::{Deserialize, Serialize};

use crate::linalg::Vec3;

pub use gp::{gp_covariance, gp_sample, GpConfig, GpSampler};
pub use proportional::{
    fundamental_directions, magnitude_series, proportional_path, random_direction, MagnitudeFn,
    ProportionalConfig, DEFAULT_STRAIN_INCREMENT,
};

/// Origin of a strain path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Gp,
    ProportionalFundamental,
    ProportionalRandom,
}

/// Ordered macroscopic strains `(εxx, εyy, γxy)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrainPath {
    pub steps: Vec<Vec3>,
    pub provenance: Provenance,
    pub seed: u64,
    /// Generator settings, for traceability.
    pub config: String,
}

impl StrainPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}
