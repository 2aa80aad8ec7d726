use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::{adam_update, AdamState};
use super::bptt::grads_bptt_refs;
use super::config::TrainConfig;
use super::loss::loss;
use crate::error::{Error, Result};
use crate::io::atomic_write;
use crate::network::{Architecture, CohesiveMode, LayerSizes, NetworkParams};
use crate::oracle::{Dataset, PathRecord};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// Everything needed to resume or reproduce a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub params: NetworkParams,
    pub adam: AdamState,
    pub config: TrainConfig,
    /// Seed of the weight initialization.
    pub init_seed: u64,
    pub epoch: usize,
    pub val_mse: f64,
}

impl Checkpoint {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        if c.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported checkpoint version {}",
                c.format_version
            )));
        }
        c.params.validate()?;
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        atomic_write(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// One row of the training log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_mse: f64,
    pub val_mse: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    /// Lowest validation loss seen, epoch 0 included.
    pub best: Checkpoint,
    pub history: Vec<EpochLog>,
    /// Stopped by patience rather than by `max_epochs`.
    pub early_stopped: bool,
}

/// Trains a freshly initialized network (linear cohesive inputs) on `train`,
/// keeping the best checkpoint on `val`.
pub fn train(
    train: &Dataset,
    val: &Dataset,
    config: &TrainConfig,
    architecture: Architecture,
    sizes: LayerSizes,
) -> Result<TrainOutcome> {
    let params = NetworkParams::init(
        architecture,
        sizes,
        CohesiveMode::Linear,
        train.header.props,
        config.rng_seed,
    )?;
    train_from(params, &train.paths, &val.paths, config)
}

const SHUFFLE_STREAM: u64 = 0x5eed_0f_ba7c4;

/// Trains starting from `params`.
pub fn train_from(
    params: NetworkParams,
    train: &[PathRecord],
    val: &[PathRecord],
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    params.validate()?;
    if train.is_empty() || val.is_empty() {
        return Err(Error::Empty("training and validation sets must be non-empty".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(SHUFFLE_STREAM);
    let mut params = params;
    let mut weights = params.to_flat();
    let mut adam = AdamState::new(weights.len());

    let checkpoint = |params: &NetworkParams, adam: &AdamState, epoch, val_mse| Checkpoint {
        format_version: CHECKPOINT_FORMAT_VERSION,
        params: params.clone(),
        adam: adam.clone(),
        config: *config,
        init_seed: config.rng_seed,
        epoch,
        val_mse,
    };

    let val0 = loss(val, &params)?;
    let train0 = loss(train, &params)?;
    let mut history = vec![EpochLog {
        epoch: 0,
        train_mse: train0,
        val_mse: val0,
        wall_time_s: start.elapsed().as_secs_f64(),
    }];
    let mut best = checkpoint(&params, &adam, 0, val0);
    let mut since_best = 0;
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut early_stopped = false;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        let mut weighted = 0.0;
        let mut steps = 0usize;
        for batch in order.chunks(config.batch_size) {
            let refs: Vec<&PathRecord> = batch.iter().map(|&i| &train[i]).collect();
            let n: usize = refs.iter().map(|p| p.len()).sum();
            let g = match grads_bptt_refs(&refs, &params, config.fd_step) {
                Ok(g) => g,
                Err(e @ (Error::NanGradient { .. } | Error::NonFinite(_))) => {
                    log::warn!("epoch {epoch}: {e}");
                    return Err(Error::Diverged {
                        epoch,
                        last_good: Box::new(best),
                    });
                }
                Err(e) => return Err(e),
            };
            weighted += g.loss * n as f64;
            steps += n;
            adam_update(&mut weights, &g.gradient, &mut adam, config)?;
            params.set_flat(&weights)?;
        }
        let train_mse = weighted / steps.max(1) as f64;
        let val_mse = match loss(val, &params) {
            Ok(v) if v.is_finite() && train_mse.is_finite() => v,
            Ok(_) | Err(Error::NonFinite(_)) => {
                return Err(Error::Diverged {
                    epoch,
                    last_good: Box::new(best),
                })
            }
            Err(e) => return Err(e),
        };
        history.push(EpochLog {
            epoch,
            train_mse,
            val_mse,
            wall_time_s: start.elapsed().as_secs_f64(),
        });
        log::debug!("epoch {epoch}: train {train_mse:.6e} val {val_mse:.6e}");
        if val_mse < best.val_mse {
            best = checkpoint(&params, &adam, epoch, val_mse);
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= config.patience {
                early_stopped = true;
                break;
            }
        }
    }
    Ok(TrainOutcome {
        best,
        history,
        early_stopped,
    })
}
