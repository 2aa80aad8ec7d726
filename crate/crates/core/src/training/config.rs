use serde::{Deserialize, Serialize};

use crate::config::KeyValues;
use crate::constitutive::DEFAULT_FD_STEP;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub max_epochs: usize,
    /// Paths per update.
    pub batch_size: usize,
    /// Relative step of the material finite differences.
    pub fd_step: f64,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    /// Seeds the weight initialization and the batch shuffling.
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            max_epochs: 200,
            batch_size: 8,
            fd_step: DEFAULT_FD_STEP,
            patience: 50,
            rng_seed: 0,
        }
    }
}

impl TrainConfig {
    pub const KEYS: [&'static str; 9] = [
        "learning_rate",
        "adam_beta1",
        "adam_beta2",
        "adam_eps",
        "max_epochs",
        "batch_size",
        "fd_step",
        "patience",
        "rng_seed",
    ];

    pub fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && self.learning_rate.is_finite()
            && self.adam_beta1 > 0.0
            && self.adam_beta1 < 1.0
            && self.adam_beta2 > 0.0
            && self.adam_beta2 < 1.0
            && self.adam_eps > 0.0
            && self.fd_step > 0.0
            && self.fd_step.is_finite()
            && self.batch_size > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid training configuration {self:?}")))
        }
    }

    /// Defaults overridden by whichever keys are present.
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let mut c = Self::default();
        kv.read_f64("learning_rate", &mut c.learning_rate)?;
        kv.read_f64("adam_beta1", &mut c.adam_beta1)?;
        kv.read_f64("adam_beta2", &mut c.adam_beta2)?;
        kv.read_f64("adam_eps", &mut c.adam_eps)?;
        kv.read_usize("max_epochs", &mut c.max_epochs)?;
        kv.read_usize("batch_size", &mut c.batch_size)?;
        kv.read_f64("fd_step", &mut c.fd_step)?;
        kv.read_usize("patience", &mut c.patience)?;
        kv.read_u64("rng_seed", &mut c.rng_seed)?;
        c.validate()?;
        Ok(c)
    }
}
