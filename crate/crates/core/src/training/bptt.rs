use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{sigmoid, softplus, Matrix, Vec3};
use crate::network::{
    leaky_normal, leaky_shear, run_step, Architecture, CohesiveMode, NetworkParams, NetworkState,
    StepJacobians, Workspace,
};
use crate::oracle::PathRecord;

/// Batch loss and its gradient with respect to the flat weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchGradient {
    pub loss: f64,
    pub gradient: Vec<f64>,
}

struct StepTape {
    enc: Vec<f64>,
    damage: Vec<f64>,
    amp_pre: Vec<f64>,
    outputs: Vec<f64>,
    prediction: Vec3,
    jac: StepJacobians,
}

/// Loss over every step of `paths` and its exact reverse-mode gradient, with
/// material sensitivities from central differences of relative step `fd_step`.
pub fn grads_bptt(paths: &[PathRecord], params: &NetworkParams, fd_step: f64) -> Result<BatchGradient> {
    let refs: Vec<&PathRecord> = paths.iter().collect();
    grads_bptt_refs(&refs, params, fd_step)
}

pub(crate) fn grads_bptt_refs(
    paths: &[&PathRecord],
    params: &NetworkParams,
    fd_step: f64,
) -> Result<BatchGradient> {
    params.validate()?;
    if paths.is_empty() {
        return Err(Error::Empty("gradient of an empty batch".into()));
    }
    if !(fd_step > 0.0) {
        return Err(Error::Config("fd_step must be > 0".into()));
    }
    let n: usize = paths.iter().map(|p| p.len()).sum();
    if n == 0 {
        return Err(Error::Empty("batch without time steps".into()));
    }
    let scale = 1.0 / n as f64;
    let dec = params.effective_decoder();
    let parts = paths
        .par_iter()
        .map(|p| path_gradient(p, params, &dec, scale, fd_step))
        .collect::<Result<Vec<_>>>()?;
    let mut gradient = vec![0.0; params.n_params()];
    let mut loss = 0.0;
    for (l, g) in parts {
        loss += l;
        for (a, b) in gradient.iter_mut().zip(&g) {
            *a += b;
        }
    }
    Ok(BatchGradient { loss, gradient })
}

/// Contribution of one path: `scale·Σ‖ŷ − y‖²` and its gradient.
fn path_gradient(
    path: &PathRecord,
    params: &NetworkParams,
    dec: &Matrix,
    scale: f64,
    fd_step: f64,
) -> Result<(f64, Vec<f64>)> {
    if path.strains.len() != path.stresses.len() {
        return Err(Error::Dimension(format!("path {}: misaligned series", path.id)));
    }
    let sizes = params.sizes;
    let (nb, nc) = (sizes.n_bulk, sizes.n_cohesive);
    let nbi = sizes.bulk_inputs();
    let nin = nbi + sizes.cohesive_inputs();
    let arch = params.architecture;

    let mut state = NetworkState::new(sizes);
    let mut ws = Workspace::new(params);
    let mut tape = Vec::with_capacity(path.len());
    for eps in &path.strains {
        let mut jac = StepJacobians::new(sizes);
        let prediction = run_step(params, dec, eps, &mut state, &mut ws, Some(&mut jac), fd_step)?;
        tape.push(StepTape {
            enc: ws.enc.clone(),
            damage: ws.damage.clone(),
            amp_pre: if arch == Architecture::Prnn3 {
                ws.amp_pre.clone()
            } else {
                Vec::new()
            },
            outputs: ws.outputs.clone(),
            prediction,
            jac,
        });
    }

    let layout = params.layout();
    let mut grad = vec![0.0; layout.len()];
    let ncols = dec.cols();
    let mut loss = 0.0;
    let mut abar_b = vec![[0.0; 4]; nb];
    let mut abar_c = vec![[0.0; 2]; nc];
    let mut zbar = vec![0.0; ncols];
    let mut xbar = vec![0.0; nbi];
    let mut ebar = vec![0.0; nin];
    let mut dbar = vec![0.0; nc];

    for t in (0..tape.len()).rev() {
        let st = &tape[t];
        let target = path.stresses[t];
        let mut g = [0.0; 3];
        for c in 0..3 {
            let e = st.prediction[c] - target[c];
            loss += scale * e * e;
            g[c] = 2.0 * scale * e;
        }

        // Decoder: y = softplus(W₂) z.
        for (i, gi) in g.iter().enumerate() {
            let raw = params.decoder.row(i);
            let off = layout.decoder.start + i * ncols;
            for j in 0..ncols {
                grad[off + j] += gi * st.outputs[j] * sigmoid(raw[j]);
            }
        }
        zbar.fill(0.0);
        dec.add_matvec_t(&g, &mut zbar);

        // Bulk points.
        for j in 0..nb {
            let mut o = [0.0; 7];
            o[..3].copy_from_slice(&zbar[3 * j..3 * j + 3]);
            o[3..].copy_from_slice(&abar_b[j]);
            let jac = &st.jac.bulk[j];
            let mut inp = [0.0; 7];
            for (r, or) in o.iter().enumerate() {
                if *or == 0.0 {
                    continue;
                }
                for (i, v) in inp.iter_mut().enumerate() {
                    *v += jac[r][i] * or;
                }
            }
            xbar[3 * j..3 * j + 3].copy_from_slice(&inp[..3]);
            abar_b[j].copy_from_slice(&inp[3..]);
        }

        // Bulk input map.
        ebar.fill(0.0);
        dbar.fill(0.0);
        match arch {
            Architecture::Prnn1 => ebar[..nbi].copy_from_slice(&xbar),
            Architecture::Prnn2 => {
                ebar[..nbi].copy_from_slice(&xbar);
                for r in 0..nbi {
                    let xr = xbar[r];
                    if xr == 0.0 {
                        continue;
                    }
                    let off = layout.coupling.start + r * nc;
                    let w = params.coupling.row(r);
                    for k in 0..nc {
                        grad[off + k] += xr * st.damage[k];
                        dbar[k] += w[k] * xr;
                    }
                }
            }
            Architecture::Prnn3 => {
                for r in 0..nbi {
                    let p = st.amp_pre[r];
                    ebar[r] = softplus(p) * xbar[r];
                    let pbar = st.enc[r] * xbar[r] * sigmoid(p);
                    if pbar == 0.0 {
                        continue;
                    }
                    let off = layout.coupling.start + r * nc;
                    let w = params.coupling.row(r);
                    for k in 0..nc {
                        grad[off + k] += pbar * st.damage[k];
                        dbar[k] += w[k] * pbar;
                    }
                }
            }
        }

        // Cohesive points.
        for k in 0..nc {
            let o = match arch {
                Architecture::Prnn1 => [
                    zbar[nbi + 2 * k],
                    zbar[nbi + 2 * k + 1],
                    abar_c[k][0],
                    abar_c[k][1],
                ],
                _ => [0.0, 0.0, abar_c[k][0] + dbar[k], abar_c[k][1]],
            };
            let jac = &st.jac.cohesive[k];
            let mut inp = [0.0; 4];
            for (r, or) in o.iter().enumerate() {
                if *or == 0.0 {
                    continue;
                }
                for (i, v) in inp.iter_mut().enumerate() {
                    *v += jac[r][i] * or;
                }
            }
            abar_c[k].copy_from_slice(&inp[2..]);
            for m in 0..2 {
                let idx = 2 * k + m;
                let jb = inp[m];
                match params.cohesive_mode {
                    CohesiveMode::Linear => ebar[nbi + idx] = jb,
                    CohesiveMode::Leaky => {
                        let (w, b) = params.activation(idx);
                        let x = st.enc[nbi + idx];
                        let lg = if m == 0 {
                            leaky_normal(x, w, b).1
                        } else {
                            leaky_shear(x, w, b).1
                        };
                        ebar[nbi + idx] = jb * lg.dx;
                        grad[layout.activation_weight.start + idx] +=
                            jb * lg.dw * sigmoid(params.activation_weight[idx]);
                        grad[layout.activation_bias.start + idx] +=
                            jb * lg.db * sigmoid(params.activation_bias[idx]);
                    }
                }
            }
        }

        // Encoder.
        let eps = path.strains[t];
        for (r, er) in ebar.iter().enumerate() {
            if *er == 0.0 {
                continue;
            }
            let off = layout.encoder.start + 3 * r;
            for c in 0..3 {
                grad[off + c] += er * eps[c];
            }
        }

        let finite = ebar.iter().all(|v| v.is_finite())
            && abar_b.iter().flatten().all(|v| v.is_finite())
            && abar_c.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(Error::NanGradient {
                path: path.id,
                step: t,
            });
        }
    }
    if !grad.iter().all(|v| v.is_finite()) {
        return Err(Error::NanGradient { path: path.id, step: 0 });
    }
    Ok((loss, grad))
}
