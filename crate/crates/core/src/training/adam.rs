use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use crate::error::{Error, Result};
use crate::network::NetworkParams;

/// First and second moment estimates and the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }
}

/// One bias-corrected Adam update of the flat weight vector.
pub fn adam_step(
    params: &mut NetworkParams,
    grads: &[f64],
    state: &mut AdamState,
    config: &TrainConfig,
) -> Result<()> {
    let mut flat = params.to_flat();
    adam_update(&mut flat, grads, state, config)?;
    params.set_flat(&flat)
}

pub(crate) fn adam_update(
    w: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    config: &TrainConfig,
) -> Result<()> {
    if grads.len() != w.len() || state.m.len() != w.len() || state.v.len() != w.len() {
        return Err(Error::Dimension(format!(
            "adam: {} weights, {} gradients, {} moments",
            w.len(),
            grads.len(),
            state.m.len()
        )));
    }
    let (b1, b2) = (config.adam_beta1, config.adam_beta2);
    state.t += 1;
    let c1 = 1.0 - b1.powi(state.t as i32);
    let c2 = 1.0 - b2.powi(state.t as i32);
    for i in 0..w.len() {
        let g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        w[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_eps);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_keeps_weights() {
        let c = TrainConfig::default();
        let mut w = vec![0.5, -1.0];
        let mut s = AdamState {
            m: vec![0.1, -0.2],
            v: vec![0.01, 0.04],
            t: 3,
        };
        adam_update(&mut w, &[0.0, 0.0], &mut s, &c).unwrap();
        assert_eq!(s.m, vec![0.9 * 0.1, 0.9 * -0.2]);
        assert_eq!(s.v, vec![0.999 * 0.01, 0.999 * 0.04]);
        // Non-zero moments still move the weights; with fresh moments they stay.
        let mut w = vec![0.5, -1.0];
        let mut s = AdamState::new(2);
        adam_update(&mut w, &[0.0, 0.0], &mut s, &c).unwrap();
        assert_eq!(w, vec![0.5, -1.0]);
    }

    #[test]
    fn first_step_closed_form() {
        let c = TrainConfig::default();
        let g = [0.3, -2.0, 1e-6];
        let mut w = vec![0.0; 3];
        let mut s = AdamState::new(3);
        adam_update(&mut w, &g, &mut s, &c).unwrap();
        for i in 0..3 {
            // m̂ = g, v̂ = g² on the first step.
            let expected = -c.learning_rate * g[i] / (g[i].abs() + c.adam_eps);
            assert!((w[i] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn two_step_trace() {
        let c = TrainConfig::default();
        let g = 0.5;
        let mut w = vec![1.0];
        let mut s = AdamState::new(1);
        adam_update(&mut w, &[g], &mut s, &c).unwrap();
        adam_update(&mut w, &[g], &mut s, &c).unwrap();
        let v2 = 0.999 * 0.001 * g * g + 0.001 * g * g;
        let m2 = 0.9 * 0.1 * g + 0.1 * g;
        assert!((s.v[0] - v2).abs() < 1e-18);
        assert!((s.m[0] - m2).abs() < 1e-16);
        let step2 = c.learning_rate * (m2 / (1.0 - 0.81)) / ((v2 / (1.0 - 0.999f64.powi(2))).sqrt() + 1e-8);
        let step1 = c.learning_rate * g / (g + 1e-8);
        assert!((w[0] - (1.0 - step1 - step2)).abs() < 1e-15);
    }
}
