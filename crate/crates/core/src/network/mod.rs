//! The physically recurrent network: a bias-free linear encoder, a material
//! layer of fictitious J2 and cohesive points whose internal variables carry
//! the recurrency, and a SoftPlus-weighted decoder.
//!
//! Three layouts are supported:
//!
//! - [`Architecture::Prnn1`]: bulk and cohesive points share one material
//!   layer; both stresses and tractions are decoded.
//! - [`Architecture::Prnn2`]: cohesive damage is added to the bulk strain
//!   inputs through a dense coupling matrix.
//! - [`Architecture::Prnn3`]: cohesive damage scales the encoded bulk strain
//!   through a SoftPlus amplifier `softplus(1 + W_d·d)`.
//!
//! In the last two only bulk stresses reach the decoder.

mod activation;
mod forward;
mod params;

pub use activation::{leaky_normal, leaky_shear, LeakyGrad};
pub use forward::{
    bulk_input_prnn2, bulk_input_prnn3, cohesive_input, decode, encode, forward_path,
    forward_step, LocalInputs, NetworkState, PathPrediction, StepLatent,
};
pub(crate) use forward::{predict_stresses, run_step, StepJacobians, Workspace};
pub use params::{Architecture, CohesiveMode, LayerSizes, NetworkParams, ParamLayout};
