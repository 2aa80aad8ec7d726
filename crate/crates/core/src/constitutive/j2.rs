//! Plane-stress J2 plasticity with linear isotropic hardening.
//!
//! Closest-point return mapping in the plane-stress subspace: the trial
//! stress is projected in the common eigenbasis of the elastic stiffness and
//! the von Mises projector, leaving a scalar consistency equation in the
//! plastic multiplier which is solved by safeguarded Newton iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vec3;

use super::elastic::{apply_stiffness, plane_stress_stiffness};
use super::BulkProps;

pub const J2_MAX_ITERATIONS: usize = 50;
/// Relative tolerance on the consistency residual.
pub const J2_TOLERANCE: f64 = 1e-12;

const SQRT_2_3: f64 = 0.816_496_580_927_726;

/// Internal variables of one elastoplastic point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BulkState {
    /// Plastic strain `(εxx, εyy, γxy)`.
    pub plastic_strain: Vec3,
    pub equivalent_plastic_strain: f64,
}

impl BulkState {
    pub fn validate(&self) -> Result<()> {
        if !self.plastic_strain.iter().all(|v| v.is_finite())
            || !self.equivalent_plastic_strain.is_finite()
        {
            return Err(Error::InvalidState("non-finite plastic strain".into()));
        }
        if self.equivalent_plastic_strain < 0.0 {
            return Err(Error::InvalidState(
                "equivalent plastic strain must be >= 0".into(),
            ));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn to_array(self) -> [f64; 4] {
        let p = self.plastic_strain;
        [p[0], p[1], p[2], self.equivalent_plastic_strain]
    }

    #[inline]
    pub(crate) fn from_array(a: &[f64]) -> Self {
        Self {
            plastic_strain: [a[0], a[1], a[2]],
            equivalent_plastic_strain: a[3],
        }
    }
}

pub fn von_mises(s: &Vec3) -> f64 {
    (s[0] * s[0] + s[1] * s[1] - s[0] * s[1] + 3.0 * s[2] * s[2]).sqrt()
}

/// `σ_eq − σ_y(ε̄ᵖ)`, in MPa.
pub fn yield_function(stress: &Vec3, state: &BulkState, props: &BulkProps) -> f64 {
    von_mises(stress) - props.flow_stress(state.equivalent_plastic_strain)
}

/// Stress and updated state for a total strain, starting from `state`.
pub fn j2_update(strain: &Vec3, state: &BulkState, props: &BulkProps) -> Result<(Vec3, BulkState)> {
    if !strain.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite(format!("strain {strain:?}")));
    }
    state.validate()?;
    j2_update_unchecked(strain, state, props)
}

#[inline]
fn trial_stress(strain: &Vec3, state: &BulkState, props: &BulkProps) -> Vec3 {
    let p = state.plastic_strain;
    let elastic = [strain[0] - p[0], strain[1] - p[1], strain[2] - p[2]];
    apply_stiffness(&plane_stress_stiffness(props), &elastic)
}

/// Whether the step from `state` to `strain` is plastic.
pub(crate) fn j2_is_plastic(strain: &Vec3, state: &BulkState, props: &BulkProps) -> bool {
    yield_function(&trial_stress(strain, state, props), state, props) > 0.0
}

/// Same as [`j2_update`] without input validation. Finite-difference probes
/// may push internal variables marginally outside their admissible range.
pub(crate) fn j2_update_unchecked(
    strain: &Vec3,
    state: &BulkState,
    props: &BulkProps,
) -> Result<(Vec3, BulkState)> {
    let trial = trial_stress(strain, state, props);
    let alpha_n = state.equivalent_plastic_strain;
    if von_mises(&trial) <= props.flow_stress(alpha_n) {
        return Ok((trial, *state));
    }

    let e = props.youngs_modulus;
    let nu = props.poisson_ratio;
    let h = props.hardening_modulus;
    let k1 = e / (3.0 * (1.0 - nu));
    let k2 = 2.0 * props.shear_modulus();
    let sum = trial[0] + trial[1];
    let diff = trial[1] - trial[0];
    let a1 = sum * sum / 6.0;
    let a2 = 0.5 * diff * diff + 2.0 * trial[2] * trial[2];

    let mut gamma = 0.0f64;
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut alpha = alpha_n;
    for _ in 0..J2_MAX_ITERATIONS {
        let d1 = 1.0 + k1 * gamma;
        let d2 = 1.0 + k2 * gamma;
        let fbar2 = a1 / (d1 * d1) + a2 / (d2 * d2);
        let fbar = fbar2.sqrt();
        alpha = alpha_n + SQRT_2_3 * gamma * fbar;
        let sy = props.yield_stress + h * alpha;
        let scale = sy * sy / 3.0;
        let phi = 0.5 * fbar2 - scale;
        residual = (phi / scale).abs();
        let dfbar2 = -2.0 * a1 * k1 / (d1 * d1 * d1) - 2.0 * a2 * k2 / (d2 * d2 * d2);
        let dalpha = SQRT_2_3 * (fbar + gamma * dfbar2 / (2.0 * fbar));
        let dphi = 0.5 * dfbar2 - 2.0 / 3.0 * sy * h * dalpha;
        if residual <= J2_TOLERANCE {
            // one extra Newton step takes the root to round-off level
            let polished = gamma - phi / dphi;
            if polished.is_finite() && polished >= 0.0 {
                gamma = polished;
                let d1 = 1.0 + k1 * gamma;
                let d2 = 1.0 + k2 * gamma;
                let fbar = (a1 / (d1 * d1) + a2 / (d2 * d2)).sqrt();
                alpha = alpha_n + SQRT_2_3 * gamma * fbar;
            }
            converged = true;
            break;
        }
        if phi > 0.0 {
            lo = gamma;
        } else {
            hi = gamma;
        }
        let mut next = gamma - phi / dphi;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * lo.max(1e-12 / k2)
            };
        }
        if next == gamma {
            converged = residual <= 1e3 * J2_TOLERANCE;
            break;
        }
        gamma = next;
    }
    if !converged {
        return Err(Error::ReturnMapping {
            iterations: J2_MAX_ITERATIONS,
            residual,
        });
    }

    let s_sum = sum / (1.0 + k1 * gamma);
    let s_diff = diff / (1.0 + k2 * gamma);
    let s12 = trial[2] / (1.0 + k2 * gamma);
    let stress = [0.5 * (s_sum - s_diff), 0.5 * (s_sum + s_diff), s12];
    // Associative flow: Δεᵖ = Δγ P σ.
    let flow = [
        (2.0 * stress[0] - stress[1]) / 3.0,
        (2.0 * stress[1] - stress[0]) / 3.0,
        2.0 * stress[2],
    ];
    let p = state.plastic_strain;
    let new_state = BulkState {
        plastic_strain: [
            p[0] + gamma * flow[0],
            p[1] + gamma * flow[1],
            p[2] + gamma * flow[2],
        ],
        equivalent_plastic_strain: alpha,
    };
    Ok((stress, new_state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::elastic_update;

    fn perfect_1d() -> BulkProps {
        BulkProps::new(1000.0, 0.0, 10.0, 0.0).unwrap()
    }

    #[test]
    fn elastic_regime_matches_elasticity() {
        let p = BulkProps::default();
        let eps = [1e-3, -5e-4, 2e-3];
        let (s, st) = j2_update(&eps, &BulkState::default(), &p).unwrap();
        assert_eq!(s, elastic_update(&eps, &p).unwrap());
        assert_eq!(st, BulkState::default());
    }

    #[test]
    fn uniaxial_stress_plateau_perfect_plasticity() {
        // Strain path realizing σyy = σxy = 0 for ν = 0, H = 0: elastic ramp to
        // εy = σy/E, then plastic flow with εyy = -εᵖxx / 2.
        let p = perfect_1d();
        let ey = p.yield_stress / p.youngs_modulus;
        let mut state = BulkState::default();
        for k in 1..=40 {
            let t = k as f64 / 20.0;
            let eps = if t <= 1.0 {
                [t * ey, 0.0, 0.0]
            } else {
                let plastic = (t - 1.0) * ey;
                [ey + plastic, -0.5 * plastic, 0.0]
            };
            let (s, st) = j2_update(&eps, &state, &p).unwrap();
            state = st;
            if t >= 1.0 {
                assert!((s[0] - p.yield_stress).abs() <= 1e-8 * p.yield_stress, "{s:?}");
                assert!(s[1].abs() <= 1e-8 * p.yield_stress);
            }
            assert!(yield_function(&s, &state, &p) <= 1e-8 * p.yield_stress);
        }
        assert!((state.equivalent_plastic_strain - ey).abs() < 1e-12);
    }

    #[test]
    fn strain_controlled_xx_ramp_saturates_biaxially() {
        // With εyy = 0 held, flow drives the state towards σyy = σxx/2,
        // i.e. σxx → 2σy/√3 for perfect plasticity.
        let p = perfect_1d();
        let mut state = BulkState::default();
        let mut s = [0.0; 3];
        for k in 1..=400 {
            let eps = [k as f64 * 5e-4, 0.0, 0.0];
            let (sk, st) = j2_update(&eps, &state, &p).unwrap();
            s = sk;
            state = st;
        }
        let target = 2.0 * p.yield_stress / 3f64.sqrt();
        assert!((s[0] - target).abs() < 1e-6 * target, "{s:?}");
        assert!((s[1] - 0.5 * target).abs() < 1e-6 * target);
    }

    #[test]
    fn elastic_unloading_slope() {
        let p = perfect_1d();
        let mut state = BulkState::default();
        let mut last = [0.0; 3];
        for k in 1..=30 {
            let (s, st) = j2_update(&[k as f64 * 1e-3, 0.0, 0.0], &state, &p).unwrap();
            last = s;
            state = st;
        }
        let loaded_state = state;
        let de = 2e-3;
        let (s, st) = j2_update(&[30e-3 - de, 0.0, 0.0], &state, &p).unwrap();
        assert!((last[0] - s[0] - p.youngs_modulus * de).abs() < 1e-9);
        assert_eq!(st, loaded_state);
    }

    #[test]
    fn unloading_agrees_with_substepped_integration() {
        // Oracle: the same loading/unloading history integrated with 100x
        // finer strain increments.
        let p = BulkProps::default();
        let coarse: Vec<Vec3> = (1..=10)
            .map(|k| [k as f64 * 4e-3, k as f64 * 1e-3, 0.0])
            .chain((1..=5).map(|k| [40e-3 - k as f64 * 2e-3, 10e-3, 0.0]))
            .collect();
        let run = |sub: usize| {
            let mut st = BulkState::default();
            let mut prev = [0.0; 3];
            let mut out = Vec::new();
            for target in &coarse {
                let mut s = [0.0; 3];
                for j in 1..=sub {
                    let f = j as f64 / sub as f64;
                    let e = [
                        prev[0] + f * (target[0] - prev[0]),
                        prev[1] + f * (target[1] - prev[1]),
                        prev[2] + f * (target[2] - prev[2]),
                    ];
                    let (sj, stj) = j2_update(&e, &st, &p).unwrap();
                    s = sj;
                    st = stj;
                }
                prev = *target;
                out.push((s, st));
            }
            out
        };
        let a = run(1);
        let b = run(100);
        // Loading steps differ by the integration error; each unloading
        // increment must drop the stress by exactly C·Δε in both.
        let c = crate::constitutive::plane_stress_stiffness(&p);
        for res in [&a, &b] {
            for k in 10..15 {
                let ds = [res[k].0[0] - res[k - 1].0[0], res[k].0[1] - res[k - 1].0[1]];
                let expected = [-2e-3 * c[0][0], -2e-3 * c[1][0]];
                assert!((ds[0] - expected[0]).abs() < 1e-9, "{ds:?} {expected:?}");
                assert!((ds[1] - expected[1]).abs() < 1e-9);
                assert_eq!(res[k].1, res[9].1);
            }
        }
        let rel = (a[14].0[0] - b[14].0[0]).abs() / b[14].0[0].abs();
        assert!(rel < 2e-2, "coarse/fine mismatch {rel}");
    }

    #[test]
    fn state_is_monotone_and_consistent() {
        let p = BulkProps::default();
        let mut state = BulkState::default();
        for k in 0..200 {
            let t = k as f64 * 0.1;
            let eps = [0.04 * t.sin(), 0.03 * (0.7 * t).cos() - 0.03, 0.05 * (1.3 * t).sin()];
            let (s, st) = j2_update(&eps, &state, &p).unwrap();
            assert!(st.equivalent_plastic_strain >= state.equivalent_plastic_strain);
            assert!(yield_function(&s, &st, &p) <= 1e-8 * p.yield_stress);
            state = st;
        }
        assert!(state.equivalent_plastic_strain > 0.0);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let p = BulkProps::default();
        assert!(j2_update(&[f64::NAN, 0.0, 0.0], &BulkState::default(), &p).is_err());
        let bad = BulkState {
            plastic_strain: [0.0; 3],
            equivalent_plastic_strain: -1.0,
        };
        assert!(j2_update(&[0.0; 3], &bad, &p).is_err());
    }
}
