use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use super::trainer::train_from;
use crate::constitutive::MaterialProps;
use crate::error::{Error, Result};
use crate::network::{Architecture, CohesiveMode, LayerSizes, NetworkParams};
use crate::oracle::PathRecord;

/// Layer sizes × training-set sizes, each trained from `n_inits` seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionGrid {
    pub layer_sizes: Vec<LayerSizes>,
    pub training_sizes: Vec<usize>,
    pub n_inits: usize,
}

impl Default for SelectionGrid {
    fn default() -> Self {
        Self {
            layer_sizes: [1, 3, 5, 7, 9, 11]
                .iter()
                .map(|&nc| LayerSizes::with_ratio(nc).expect("positive sizes"))
                .collect(),
            training_sizes: vec![4, 8, 16, 32, 64, 96, 128, 192],
            n_inits: 10,
        }
    }
}

impl SelectionGrid {
    pub fn validate(&self, available: usize) -> Result<()> {
        if self.layer_sizes.is_empty() || self.training_sizes.is_empty() {
            return Err(Error::Config("selection grid is empty".into()));
        }
        if self.n_inits == 0 {
            return Err(Error::Config("n_inits must be at least 1".into()));
        }
        if let Some(s) = self.layer_sizes.iter().find(|s| !s.honors_ratio()) {
            return Err(Error::Config(format!("layer size {s} breaks the 4:1 ratio")));
        }
        if let Some(n) = self.training_sizes.iter().find(|&&n| n == 0 || n > available) {
            return Err(Error::Config(format!(
                "training size {n} outside 1..={available}"
            )));
        }
        Ok(())
    }
}

/// Validation loss of one trained network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionRow {
    pub n_bulk: usize,
    pub n_cohesive: usize,
    pub training_size: usize,
    pub seed: u64,
    pub val_mse: f64,
}

/// Best run of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n_bulk: usize,
    pub n_cohesive: usize,
    pub training_size: usize,
    pub best_seed: u64,
    pub val_mse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    pub rows: Vec<SelectionRow>,
    pub cells: Vec<CellSummary>,
    pub selected: CellSummary,
}

/// Per-cell minima and the selected cell: lowest validation loss, ties broken
/// by the smaller layer, then the smaller training set.
pub fn select_from_table(rows: &[SelectionRow]) -> Result<(Vec<CellSummary>, CellSummary)> {
    let mut cells: Vec<CellSummary> = Vec::new();
    for r in rows {
        let key = (r.n_bulk, r.n_cohesive, r.training_size);
        match cells
            .iter_mut()
            .find(|c| (c.n_bulk, c.n_cohesive, c.training_size) == key)
        {
            Some(c) => {
                if r.val_mse < c.val_mse || (r.val_mse == c.val_mse && r.seed < c.best_seed) {
                    c.val_mse = r.val_mse;
                    c.best_seed = r.seed;
                }
            }
            None => cells.push(CellSummary {
                n_bulk: r.n_bulk,
                n_cohesive: r.n_cohesive,
                training_size: r.training_size,
                best_seed: r.seed,
                val_mse: r.val_mse,
            }),
        }
    }
    let selected = cells
        .iter()
        .filter(|c| !c.val_mse.is_nan())
        .min_by(|a, b| {
            a.val_mse
                .total_cmp(&b.val_mse)
                .then((a.n_bulk + a.n_cohesive).cmp(&(b.n_bulk + b.n_cohesive)))
                .then(a.training_size.cmp(&b.training_size))
        })
        .copied()
        .ok_or_else(|| Error::Empty("selection table has no valid rows".into()))?;
    Ok((cells, selected))
}

/// Trains every cell of `grid` from seeds `config.rng_seed + i`, using the
/// first `training_size` paths of `train`.
pub fn model_select(
    grid: &SelectionGrid,
    train: &[PathRecord],
    val: &[PathRecord],
    architecture: Architecture,
    config: &TrainConfig,
    materials: MaterialProps,
) -> Result<SelectionOutcome> {
    grid.validate(train.len())?;
    let mut jobs = Vec::new();
    for &sizes in &grid.layer_sizes {
        for &n in &grid.training_sizes {
            for i in 0..grid.n_inits as u64 {
                jobs.push((sizes, n, config.rng_seed.wrapping_add(i)));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(sizes, n, seed)| {
            let cfg = TrainConfig {
                rng_seed: seed,
                ..*config
            };
            let init = NetworkParams::init(architecture, sizes, CohesiveMode::Linear, materials, seed)?;
            let val_mse = match train_from(init, &train[..n], val, &cfg) {
                Ok(o) => o.best.val_mse,
                Err(Error::Diverged { last_good, .. }) => last_good.val_mse,
                Err(e) => return Err(e),
            };
            log::info!("{architecture} {sizes} on {n} paths, seed {seed}: val mse {val_mse:.6e}");
            Ok(SelectionRow {
                n_bulk: sizes.n_bulk,
                n_cohesive: sizes.n_cohesive,
                training_size: n,
                seed,
                val_mse,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (cells, selected) = select_from_table(&rows)?;
    Ok(SelectionOutcome {
        rows,
        cells,
        selected,
    })
}
