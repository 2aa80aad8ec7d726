use crate::constitutive::{fd_step_for, j2_is_plastic, BulkState, CohesiveBranch, CohesiveState};
use crate::error::Result;
use crate::network::{run_step, CohesiveMode, NetworkParams, NetworkState, Workspace};
use crate::oracle::PathRecord;

use super::loss::loss;

/// Fourth-order central finite difference of the loss over every weight,
/// with base step `h·(1 + |w|)` and stencil `w ± h, w ± 2h`.
pub fn fd_gradient(paths: &[PathRecord], params: &NetworkParams, h: f64) -> Result<Vec<f64>> {
    let base = params.to_flat();
    let mut p = params.clone();
    let mut out = Vec::with_capacity(base.len());
    let mut w = base.clone();
    for i in 0..base.len() {
        let step = fd_step_for(h, base[i]);
        let mut f = [0.0; 4];
        for (v, m) in f.iter_mut().zip([2.0, 1.0, -1.0, -2.0]) {
            w[i] = base[i] + m * step;
            p.set_flat(&w)?;
            *v = loss(paths, &p)?;
        }
        w[i] = base[i];
        out.push((-f[0] + 8.0 * f[1] - 8.0 * f[2] + f[3]) / (12.0 * step));
    }
    Ok(out)
}

/// Worst component-wise discrepancy between two gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheck {
    pub max_relative_error: f64,
    pub worst_index: usize,
}

/// Largest `|a − b| / max(|a|, |b|, floor)` over components, where the floor
/// is `1e-6` of the largest reference component.
pub fn relative_error(analytic: &[f64], reference: &[f64]) -> GradCheck {
    let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = (1e-6 * scale).max(f64::MIN_POSITIVE);
    let mut worst = GradCheck {
        max_relative_error: 0.0,
        worst_index: 0,
    };
    for (i, (a, b)) in analytic.iter().zip(reference).enumerate() {
        let e = (a - b).abs() / a.abs().max(b.abs()).max(floor);
        if e > worst.max_relative_error || e.is_nan() {
            worst = GradCheck {
                max_relative_error: e,
                worst_index: i,
            };
        }
    }
    worst
}

/// True when some material point of some step sits within
/// `10·fd_step·(1 + |z|)` of a branch change (elastic/plastic,
/// opening/closing, loading/unloading, saturation) in any of its inputs or
/// state variables `z`, or a leaky activation input sits that close to a kink.
pub fn near_branch(paths: &[PathRecord], params: &NetworkParams, fd_step: f64) -> Result<bool> {
    params.validate()?;
    let dec = params.effective_decoder();
    let props = &params.materials;
    let sizes = params.sizes;
    let nbi = sizes.bulk_inputs();
    for path in paths {
        let mut state = NetworkState::new(sizes);
        let mut ws = Workspace::new(params);
        for eps in &path.strains {
            let before = state.clone();
            run_step(params, &dec, eps, &mut state, &mut ws, None, fd_step)?;
            for (j, st) in before.bulk.iter().enumerate() {
                let a = st.to_array();
                let z = [
                    ws.bulk_in[3 * j],
                    ws.bulk_in[3 * j + 1],
                    ws.bulk_in[3 * j + 2],
                    a[0],
                    a[1],
                    a[2],
                    a[3],
                ];
                let class = |z: &[f64; 7]| {
                    j2_is_plastic(&[z[0], z[1], z[2]], &BulkState::from_array(&z[3..]), &props.bulk)
                };
                if flips(&z, 10.0 * fd_step, class) {
                    return Ok(true);
                }
            }
            if params.cohesive_mode == CohesiveMode::Leaky {
                for idx in 0..sizes.cohesive_inputs() {
                    let x = ws.enc[nbi + idx];
                    let (_, b) = params.activation(idx);
                    let kinks: &[f64] = if idx % 2 == 0 { &[b] } else { &[b, -b] };
                    let radius = 10.0 * fd_step_for(fd_step, x);
                    if kinks.iter().any(|k| (x - k).abs() <= radius) {
                        return Ok(true);
                    }
                }
            }
            for (k, st) in before.cohesive.iter().enumerate() {
                let a = st.to_array();
                let z = [ws.jumps[2 * k], ws.jumps[2 * k + 1], a[0], a[1]];
                let class = |z: &[f64; 4]| {
                    CohesiveBranch::of(&[z[0], z[1]], &CohesiveState::from_array(&z[2..]), &props.cohesive)
                };
                if flips(&z, 10.0 * fd_step, class) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// True when some weight perturbation `±h·(1 + |w|)` or `±2h·(1 + |w|)` of the global finite
/// difference moves any material point or activation onto a different
/// branch somewhere along the paths, which invalidates the difference as a
/// reference.
pub fn fd_stencil_crosses_branch(paths: &[PathRecord], params: &NetworkParams, h: f64) -> Result<bool> {
    params.validate()?;
    let base = params.to_flat();
    let reference = signatures(paths, params)?;
    let mut p = params.clone();
    let mut w = base.clone();
    for i in 0..base.len() {
        let step = fd_step_for(h, base[i]);
        for s in [2.0 * step, step, -step, -2.0 * step] {
            w[i] = base[i] + s;
            p.set_flat(&w)?;
            if signatures(paths, &p)? != reference {
                return Ok(true);
            }
        }
        w[i] = base[i];
    }
    Ok(false)
}

fn signatures(paths: &[PathRecord], params: &NetworkParams) -> Result<Vec<u8>> {
    let dec = params.effective_decoder();
    let props = &params.materials;
    let sizes = params.sizes;
    let nbi = sizes.bulk_inputs();
    let mut sig = Vec::new();
    for path in paths {
        let mut state = NetworkState::new(sizes);
        let mut ws = Workspace::new(params);
        for eps in &path.strains {
            let before = state.clone();
            run_step(params, &dec, eps, &mut state, &mut ws, None, 1e-7)?;
            for (j, st) in before.bulk.iter().enumerate() {
                let x = [ws.bulk_in[3 * j], ws.bulk_in[3 * j + 1], ws.bulk_in[3 * j + 2]];
                sig.push(j2_is_plastic(&x, st, &props.bulk) as u8);
            }
            for (k, st) in before.cohesive.iter().enumerate() {
                let b = CohesiveBranch::of(&[ws.jumps[2 * k], ws.jumps[2 * k + 1]], st, &props.cohesive);
                sig.push(b.opening as u8 | (b.damaging as u8) << 1 | (b.saturated as u8) << 2);
            }
            if params.cohesive_mode == CohesiveMode::Leaky {
                for idx in 0..sizes.cohesive_inputs() {
                    let x = ws.enc[nbi + idx];
                    let (_, b) = params.activation(idx);
                    sig.push((x >= b) as u8 | ((x <= -b) as u8) << 1);
                }
            }
        }
    }
    Ok(sig)
}

fn flips<const N: usize, C: PartialEq>(z: &[f64; N], h: f64, class: impl Fn(&[f64; N]) -> C) -> bool {
    let base = class(z);
    let mut x = *z;
    for i in 0..N {
        let step = fd_step_for(h, z[i]);
        for s in [step, -step] {
            x[i] = z[i] + s;
            if class(&x) != base {
                return true;
            }
        }
        x[i] = z[i];
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_error_floor() {
        let r = relative_error(&[1.0, 1e-9], &[1.0, 0.0]);
        assert!((r.max_relative_error - 1e-3).abs() < 1e-12);
        assert_eq!(r.worst_index, 1);
        let r = relative_error(&[2.0, 1.0], &[1.0, 1.0]);
        assert_eq!(r.max_relative_error, 0.5);
    }
}
