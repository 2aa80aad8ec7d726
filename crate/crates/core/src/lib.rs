//! Physically recurrent neural networks for path-dependent homogenized
//! response of fiber-reinforced composites.
//!
//! The hidden layer of every network is made of fictitious material points
//! running J2 plasticity (bulk) and a bilinear cohesive law (interfaces); their
//! internal variables are the network's memory. Around that core the crate
//! provides strain-path generators, a deterministic teacher micromodel that
//! produces ground-truth data, backpropagation through time with
//! finite-difference material sensitivities, Adam training and model
//! selection.

pub mod cli;
pub mod config;
pub mod constitutive;
pub mod error;
pub mod io;
pub mod linalg;
pub mod loadpaths;
pub mod network;
pub mod oracle;
pub mod training;

pub use error::{Error, Result};
