//! Bilinear mixed-mode cohesive zone law.
//!
//! Mode mixity and the mixed-mode onset/final jumps follow the Turon
//! formulation with a Benzeggagh-Kenane interpolation of exponent η. The
//! damage variable is the ratio of dissipated energy to the mixed-mode
//! critical energy release rate; for the bilinear envelope it is linear in
//! the effective jump, `d = (λ − δ⁰)/(δᶠ − δ⁰)`. Tractions use the secant
//! stiffness `(1 − D)K` where `D` is the stiffness-degradation variable
//! implied by `d` at the current mixity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec2;

use super::CzmProps;

/// Internal variables of one cohesive point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CohesiveState {
    /// Dissipated over critical energy, in `[0, 1]`.
    pub damage: f64,
    /// Largest effective jump seen so far (mm).
    pub max_effective_jump: f64,
}

impl CohesiveState {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.damage) {
            return Err(Error::InvalidState(format!(
                "damage {} outside [0, 1]",
                self.damage
            )));
        }
        if !(self.max_effective_jump >= 0.0) || !self.max_effective_jump.is_finite() {
            return Err(Error::InvalidState("max_effective_jump must be >= 0".into()));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn to_array(self) -> [f64; 2] {
        [self.damage, self.max_effective_jump]
    }

    #[inline]
    pub(crate) fn from_array(a: &[f64]) -> Self {
        Self {
            damage: a[0],
            max_effective_jump: a[1],
        }
    }
}

/// Piecewise branch occupied by a cohesive update; used to detect
/// non-smooth points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohesiveBranch {
    pub opening: bool,
    pub damaging: bool,
    pub saturated: bool,
}

/// Shear energy fraction `B = G_shear / G_total` of a jump.
pub fn mode_mixity(jump: &Vec2) -> f64 {
    let open = jump[0].max(0.0);
    let shear = jump[1].abs();
    if open + shear == 0.0 {
        return 0.0;
    }
    let beta = shear / (shear + open);
    beta * beta / (1.0 + 2.0 * beta * beta - 2.0 * beta)
}

/// Mixed-mode onset and final effective jumps for mixity `b`.
pub fn mixed_mode_thresholds(b: f64, props: &CzmProps) -> (f64, f64) {
    let bn = b.powf(props.eta);
    let n0 = props.normal_onset_jump();
    let s0 = props.shear_onset_jump();
    let nf = props.normal_final_jump();
    let sf = props.shear_final_jump();
    let onset = (n0 * n0 + (s0 * s0 - n0 * n0) * bn).sqrt();
    let fin = (n0 * nf + (s0 * sf - n0 * nf) * bn) / onset;
    (onset, fin)
}

/// Mixed-mode critical energy release rate (N/mm).
pub fn critical_energy(b: f64, props: &CzmProps) -> f64 {
    props.g_ic + (props.g_iic - props.g_ic) * b.powf(props.eta)
}

struct Kinematics {
    effective: f64,
    onset: f64,
    fin: f64,
    candidate: f64,
}

#[inline]
fn kinematics(jump: &Vec2, props: &CzmProps) -> Kinematics {
    let open = jump[0].max(0.0);
    let effective = (open * open + jump[1] * jump[1]).sqrt();
    let (onset, fin) = mixed_mode_thresholds(mode_mixity(jump), props);
    // Negative below onset.
    let candidate = (effective - onset) / (fin - onset);
    Kinematics {
        effective,
        onset,
        fin,
        candidate,
    }
}

impl CohesiveBranch {
    pub fn of(jump: &Vec2, state: &CohesiveState, props: &CzmProps) -> Self {
        let k = kinematics(jump, props);
        Self {
            opening: jump[0] > 0.0,
            damaging: k.candidate > state.damage,
            saturated: k.candidate >= 1.0,
        }
    }
}

/// Traction and updated state for a displacement jump `(δn, δs)`.
pub fn czm_update(
    jump: &Vec2,
    state: &CohesiveState,
    props: &CzmProps,
) -> Result<(Vec2, CohesiveState)> {
    if !jump.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite(format!("jump {jump:?}")));
    }
    props.validate()?;
    state.validate()?;
    Ok(czm_update_unchecked(jump, state, props))
}

#[inline]
pub(crate) fn czm_update_unchecked(
    jump: &Vec2,
    state: &CohesiveState,
    props: &CzmProps,
) -> (Vec2, CohesiveState) {
    let k = kinematics(jump, props);
    let damage = state.damage.max(k.candidate.min(1.0));
    let new_state = CohesiveState {
        damage,
        max_effective_jump: state.max_effective_jump.max(k.effective),
    };
    // Equivalent jump at which the envelope reaches `damage`; the secant
    // through it gives the remaining stiffness `onset·(1 − d) / jump_eq`.
    let kk = props.penalty_stiffness;
    let secant = if damage <= 0.0 {
        kk
    } else {
        let jump_eq = k.onset + damage * (k.fin - k.onset);
        kk * (k.onset * (1.0 - damage) / jump_eq).max(0.0)
    };
    let tn = if jump[0] > 0.0 { secant * jump[0] } else { kk * jump[0] };
    ([tn, secant * jump[1]], new_state)
}
