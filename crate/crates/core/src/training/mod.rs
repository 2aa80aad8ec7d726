//! Loss, backpropagation through time with finite-difference material
//! sensitivities, Adam, the training loop and model selection.

mod adam;
mod bptt;
mod config;
mod gradcheck;
mod loss;
mod select;
mod trainer;

pub use adam::{adam_step, AdamState};
pub use bptt::{grads_bptt, BatchGradient};
pub use config::TrainConfig;
pub use gradcheck::{fd_gradient, fd_stencil_crosses_branch, near_branch, relative_error, GradCheck};
pub use loss::{evaluate, loss, mse, ErrorReport, PathError};
pub use select::{model_select, select_from_table, CellSummary, SelectionGrid, SelectionOutcome, SelectionRow};
pub use trainer::{train, train_from, Checkpoint, EpochLog, TrainOutcome, CHECKPOINT_FORMAT_VERSION};
