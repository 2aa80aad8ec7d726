use serde::{Deserialize, Serialize};

use crate::constitutive::{
    central_jacobian, czm_update_unchecked, j2_update_unchecked, BulkProps, BulkState,
    CohesiveState, CzmProps,
};
use crate::error::{Error, Result};
use crate::linalg::{softplus, Matrix, Vec2, Vec3};

use super::activation::{leaky_normal, leaky_shear};
use super::params::{Architecture, CohesiveMode, LayerSizes, NetworkParams};

/// Internal variables of every fictitious point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkState {
    pub bulk: Vec<BulkState>,
    pub cohesive: Vec<CohesiveState>,
}

impl NetworkState {
    /// Virgin state.
    pub fn new(sizes: LayerSizes) -> Self {
        Self {
            bulk: vec![BulkState::default(); sizes.n_bulk],
            cohesive: vec![CohesiveState::default(); sizes.n_cohesive],
        }
    }

    pub fn matches(&self, sizes: LayerSizes) -> bool {
        self.bulk.len() == sizes.n_bulk && self.cohesive.len() == sizes.n_cohesive
    }
}

/// Encoder output split per point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalInputs {
    pub bulk: Vec<Vec3>,
    pub cohesive: Vec<Vec2>,
}

/// Per-step latent record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepLatent {
    /// Strain passed to each bulk point.
    pub bulk_strains: Vec<Vec3>,
    /// Jump passed to each cohesive point.
    pub jumps: Vec<Vec2>,
    /// Damage after the step.
    pub damage: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPrediction {
    pub stresses: Vec<Vec3>,
    pub latent: Vec<StepLatent>,
}

fn check_strain(eps: &Vec3) -> Result<()> {
    if eps.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("macroscopic strain {eps:?}")))
    }
}

/// `W₁ ε`, split into bulk and cohesive rows.
pub fn encode(eps: &Vec3, params: &NetworkParams) -> Result<LocalInputs> {
    params.validate()?;
    check_strain(eps)?;
    let enc = params.encoder.matvec(eps)?;
    let nb = params.sizes.n_bulk;
    let bulk = (0..nb).map(|j| [enc[3 * j], enc[3 * j + 1], enc[3 * j + 2]]).collect();
    let cohesive = (0..params.sizes.n_cohesive)
        .map(|k| [enc[3 * nb + 2 * k], enc[3 * nb + 2 * k + 1]])
        .collect();
    Ok(LocalInputs { bulk, cohesive })
}

#[inline]
fn activate(params: &NetworkParams, k: usize, x: f64) -> f64 {
    match params.cohesive_mode {
        CohesiveMode::Linear => x,
        CohesiveMode::Leaky => {
            let (w, b) = params.activation(k);
            if k % 2 == 0 {
                leaky_normal(x, w, b).0
            } else {
                leaky_shear(x, w, b).0
            }
        }
    }
}

/// Displacement jumps fed to the cohesive points.
pub fn cohesive_input(eps: &Vec3, params: &NetworkParams) -> Result<Vec<Vec2>> {
    let local = encode(eps, params)?;
    Ok(local
        .cohesive
        .iter()
        .enumerate()
        .map(|(k, x)| [activate(params, 2 * k, x[0]), activate(params, 2 * k + 1, x[1])])
        .collect())
}

fn check_damage(params: &NetworkParams, arch: Architecture, damage: &[f64]) -> Result<()> {
    if params.architecture != arch {
        return Err(Error::Config(format!(
            "{arch} bulk input requested for a {} network",
            params.architecture
        )));
    }
    if damage.len() != params.sizes.n_cohesive {
        return Err(Error::Dimension(format!(
            "{} damage values for {} cohesive points",
            damage.len(),
            params.sizes.n_cohesive
        )));
    }
    Ok(())
}

fn chunk3(v: &[f64]) -> Vec<Vec3> {
    v.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()
}

/// PRNN2 bulk strains `W_εb ε + W_d d`.
pub fn bulk_input_prnn2(eps: &Vec3, damage: &[f64], params: &NetworkParams) -> Result<Vec<Vec3>> {
    check_damage(params, Architecture::Prnn2, damage)?;
    let local = encode(eps, params)?;
    let shift = params.coupling.matvec(damage)?;
    let mut flat: Vec<f64> = local.bulk.iter().flatten().copied().collect();
    for (f, s) in flat.iter_mut().zip(&shift) {
        *f += s;
    }
    Ok(chunk3(&flat))
}

/// PRNN3 bulk strains `softplus(1 + W_d d) ⊙ (W_εb ε)`.
pub fn bulk_input_prnn3(eps: &Vec3, damage: &[f64], params: &NetworkParams) -> Result<Vec<Vec3>> {
    check_damage(params, Architecture::Prnn3, damage)?;
    let local = encode(eps, params)?;
    let pre = params.coupling.matvec(damage)?;
    let flat: Vec<f64> = local
        .bulk
        .iter()
        .flatten()
        .zip(&pre)
        .map(|(u, p)| softplus(1.0 + p) * u)
        .collect();
    Ok(chunk3(&flat))
}

/// Homogenized stress from local stresses (and tractions for PRNN1).
pub fn decode(stresses: &[Vec3], tractions: &[Vec2], params: &NetworkParams) -> Result<Vec3> {
    params.validate()?;
    let expected_tractions = match params.architecture {
        Architecture::Prnn1 => params.sizes.n_cohesive,
        _ => 0,
    };
    if stresses.len() != params.sizes.n_bulk || tractions.len() != expected_tractions {
        return Err(Error::Dimension(format!(
            "decoder takes {} stresses and {} tractions, got {} and {}",
            params.sizes.n_bulk,
            expected_tractions,
            stresses.len(),
            tractions.len()
        )));
    }
    let z: Vec<f64> = stresses
        .iter()
        .flatten()
        .chain(tractions.iter().flatten())
        .copied()
        .collect();
    let out = params.effective_decoder().matvec(&z)?;
    Ok([out[0], out[1], out[2]])
}

/// Scratch buffers for one step.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    /// `W₁ ε`.
    pub enc: Vec<f64>,
    pub jumps: Vec<f64>,
    pub damage: Vec<f64>,
    /// PRNN3 amplifier pre-activation `1 + W_d d`.
    pub amp_pre: Vec<f64>,
    pub bulk_in: Vec<f64>,
    /// Decoder input.
    pub outputs: Vec<f64>,
}

impl Workspace {
    pub fn new(params: &NetworkParams) -> Self {
        let s = params.sizes;
        Self {
            enc: vec![0.0; s.bulk_inputs() + s.cohesive_inputs()],
            jumps: vec![0.0; s.cohesive_inputs()],
            damage: vec![0.0; s.n_cohesive],
            amp_pre: vec![0.0; s.bulk_inputs()],
            bulk_in: vec![0.0; s.bulk_inputs()],
            outputs: vec![0.0; params.decoder.cols()],
        }
    }
}

/// Finite-difference Jacobians of every point update with respect to
/// `(input, state)`, laid out `[out][in]` with outputs `(response, new state)`.
#[derive(Debug, Clone)]
pub(crate) struct StepJacobians {
    pub bulk: Vec<[[f64; 7]; 7]>,
    pub cohesive: Vec<[[f64; 4]; 4]>,
}

impl StepJacobians {
    pub fn new(sizes: LayerSizes) -> Self {
        Self {
            bulk: vec![[[0.0; 7]; 7]; sizes.n_bulk],
            cohesive: vec![[[0.0; 4]; 4]; sizes.n_cohesive],
        }
    }
}

#[inline]
fn bulk_update(
    props: &BulkProps,
    x: &[f64],
    state: &BulkState,
    jac: Option<&mut [[f64; 7]; 7]>,
    h: f64,
) -> Result<(Vec3, BulkState)> {
    let strain = [x[0], x[1], x[2]];
    let out = j2_update_unchecked(&strain, state, props)?;
    if let Some(j) = jac {
        let a = state.to_array();
        let z = [x[0], x[1], x[2], a[0], a[1], a[2], a[3]];
        *j = central_jacobian(
            |z| {
                let st = BulkState::from_array(&z[3..]);
                let (s, n) = j2_update_unchecked(&[z[0], z[1], z[2]], &st, props)?;
                let n = n.to_array();
                Ok([s[0], s[1], s[2], n[0], n[1], n[2], n[3]])
            },
            &z,
            h,
            &[1.0; 7],
        )?;
    }
    Ok(out)
}

/// Natural magnitudes of `(δn, δs, d, λmax)` around a jump: both jump
/// components scale with the jump norm plus the onset jump, damage with one.
fn cohesive_fd_scale(props: &CzmProps, jump: &Vec2) -> [f64; 4] {
    let j = props.normal_onset_jump().min(props.shear_onset_jump());
    let m = j + jump[0].hypot(jump[1]);
    [m, m, 1.0, j]
}

#[inline]
fn cohesive_update(
    props: &CzmProps,
    x: &[f64],
    state: &CohesiveState,
    jac: Option<&mut [[f64; 4]; 4]>,
    h: f64,
) -> Result<(Vec2, CohesiveState)> {
    let out = czm_update_unchecked(&[x[0], x[1]], state, props);
    if let Some(j) = jac {
        let a = state.to_array();
        let z = [x[0], x[1], a[0], a[1]];
        *j = central_jacobian(
            |z| {
                let st = CohesiveState::from_array(&z[2..]);
                let (t, n) = czm_update_unchecked(&[z[0], z[1]], &st, props);
                Ok([t[0], t[1], n.damage, n.max_effective_jump])
            },
            &z,
            h,
            &cohesive_fd_scale(props, &[x[0], x[1]]),
        )?;
    }
    Ok(out)
}

/// One step of the network. Cohesive points are evaluated first; their
/// updated damage feeds the bulk inputs of the same step.
pub(crate) fn run_step(
    params: &NetworkParams,
    effective_decoder: &Matrix,
    eps: &Vec3,
    state: &mut NetworkState,
    ws: &mut Workspace,
    mut jac: Option<&mut StepJacobians>,
    fd_step: f64,
) -> Result<Vec3> {
    let sizes = params.sizes;
    let nb = sizes.n_bulk;
    let nbi = sizes.bulk_inputs();
    let materials = &params.materials;
    params.encoder.matvec_into(eps, &mut ws.enc);

    for k in 0..sizes.cohesive_inputs() {
        ws.jumps[k] = activate(params, k, ws.enc[nbi + k]);
    }
    for k in 0..sizes.n_cohesive {
        let j = jac.as_deref_mut().map(|j| &mut j.cohesive[k]);
        let (t, st) = cohesive_update(
            &materials.cohesive,
            &ws.jumps[2 * k..2 * k + 2],
            &state.cohesive[k],
            j,
            fd_step,
        )?;
        state.cohesive[k] = st;
        ws.damage[k] = st.damage;
        if params.architecture == Architecture::Prnn1 {
            ws.outputs[nbi + 2 * k] = t[0];
            ws.outputs[nbi + 2 * k + 1] = t[1];
        }
    }

    match params.architecture {
        Architecture::Prnn1 => ws.bulk_in.copy_from_slice(&ws.enc[..nbi]),
        Architecture::Prnn2 => {
            params.coupling.matvec_into(&ws.damage, &mut ws.bulk_in);
            for (b, e) in ws.bulk_in.iter_mut().zip(&ws.enc[..nbi]) {
                *b += e;
            }
        }
        Architecture::Prnn3 => {
            params.coupling.matvec_into(&ws.damage, &mut ws.amp_pre);
            for i in 0..nbi {
                ws.amp_pre[i] += 1.0;
                ws.bulk_in[i] = softplus(ws.amp_pre[i]) * ws.enc[i];
            }
        }
    }

    for j in 0..nb {
        let jj = jac.as_deref_mut().map(|jc| &mut jc.bulk[j]);
        let (s, st) = bulk_update(
            &materials.bulk,
            &ws.bulk_in[3 * j..3 * j + 3],
            &state.bulk[j],
            jj,
            fd_step,
        )?;
        state.bulk[j] = st;
        ws.outputs[3 * j..3 * j + 3].copy_from_slice(&s);
    }

    let mut out = [0.0; 3];
    effective_decoder.matvec_into(&ws.outputs, &mut out);
    Ok(out)
}

/// One step from `state`; returns the prediction, the new state and the
/// latent record.
pub fn forward_step(
    eps: &Vec3,
    state: &NetworkState,
    params: &NetworkParams,
) -> Result<(Vec3, NetworkState, StepLatent)> {
    params.validate()?;
    check_strain(eps)?;
    if !state.matches(params.sizes) {
        return Err(Error::Dimension("state does not match layer sizes".into()));
    }
    let mut next = state.clone();
    let mut ws = Workspace::new(params);
    let dec = params.effective_decoder();
    let out = run_step(params, &dec, eps, &mut next, &mut ws, None, 0.0)?;
    let latent = StepLatent {
        bulk_strains: chunk3(&ws.bulk_in),
        jumps: ws.jumps.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
        damage: ws.damage.clone(),
    };
    Ok((out, next, latent))
}

/// Runs a whole strain path from the virgin state.
pub fn forward_path(path: &[Vec3], params: &NetworkParams) -> Result<PathPrediction> {
    params.validate()?;
    let mut state = NetworkState::new(params.sizes);
    let mut ws = Workspace::new(params);
    let dec = params.effective_decoder();
    let mut stresses = Vec::with_capacity(path.len());
    let mut latent = Vec::with_capacity(path.len());
    for eps in path {
        check_strain(eps)?;
        stresses.push(run_step(params, &dec, eps, &mut state, &mut ws, None, 0.0)?);
        latent.push(StepLatent {
            bulk_strains: chunk3(&ws.bulk_in),
            jumps: ws.jumps.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
            damage: ws.damage.clone(),
        });
    }
    Ok(PathPrediction { stresses, latent })
}

/// Stresses only, without the latent record.
pub(crate) fn predict_stresses(path: &[Vec3], params: &NetworkParams) -> Result<Vec<Vec3>> {
    let mut state = NetworkState::new(params.sizes);
    let mut ws = Workspace::new(params);
    let dec = params.effective_decoder();
    path.iter()
        .map(|eps| {
            check_strain(eps)?;
            run_step(params, &dec, eps, &mut state, &mut ws, None, 0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::{elastic_update, MaterialProps};
    use crate::linalg::softplus_inverse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(arch: Architecture, nb: usize, nc: usize, seed: u64) -> NetworkParams {
        let sizes = LayerSizes::new(nb, nc).unwrap();
        NetworkParams::init(arch, sizes, CohesiveMode::Linear, MaterialProps::default(), seed)
            .unwrap()
    }

    #[test]
    fn zero_strain_encodes_to_zero() {
        let p = random_params(Architecture::Prnn1, 3, 2, 1);
        let l = encode(&[0.0; 3], &p).unwrap();
        assert!(l.bulk.iter().flatten().all(|v| *v == 0.0));
        assert!(l.cohesive.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn identity_encoder_copies_strain() {
        let mut p = random_params(Architecture::Prnn1, 2, 0, 1);
        p.encoder = Matrix::from_fn(6, 3, |r, c| if r % 3 == c { 1.0 } else { 0.0 });
        let l = encode(&[0.1, 0.2, 0.3], &p).unwrap();
        assert_eq!(l.bulk, vec![[0.1, 0.2, 0.3]; 2]);
    }

    #[test]
    fn encode_matches_brute_force_matvec() {
        let p = random_params(Architecture::Prnn2, 3, 2, 5);
        let eps = [0.013, -0.004, 0.021];
        let l = encode(&eps, &p).unwrap();
        let flat: Vec<f64> = l.bulk.iter().flatten().chain(l.cohesive.iter().flatten()).copied().collect();
        for (r, v) in flat.iter().enumerate() {
            let mut acc = 0.0;
            for c in 0..3 {
                acc += p.encoder.get(r, c) * eps[c];
            }
            assert!((v - acc).abs() < 1e-16);
        }
    }

    #[test]
    fn prnn2_bulk_input_cases() {
        let mut p = random_params(Architecture::Prnn2, 1, 1, 2);
        let eps = [0.01, 0.02, -0.01];
        let plain = encode(&eps, &p).unwrap().bulk;
        assert_eq!(bulk_input_prnn2(&eps, &[0.0], &p).unwrap(), plain);
        p.coupling = Matrix::from_row_major(3, 1, vec![0.1, 0.0, 0.0]).unwrap();
        let only_damage = bulk_input_prnn2(&[0.0; 3], &[1.0], &p).unwrap();
        assert_eq!(only_damage, vec![[0.1, 0.0, 0.0]]);
        let both = bulk_input_prnn2(&eps, &[0.4], &p).unwrap();
        for c in 0..3 {
            let expected = plain[0][c] + p.coupling.get(c, 0) * 0.4;
            assert!((both[0][c] - expected).abs() < 1e-16);
        }
        assert!(bulk_input_prnn3(&eps, &[0.0], &p).is_err());
    }

    #[test]
    fn prnn3_amplifier_cases() {
        let mut p = random_params(Architecture::Prnn3, 2, 1, 3);
        let eps = [0.01, 0.02, -0.01];
        let plain = encode(&eps, &p).unwrap().bulk;
        let at_zero = bulk_input_prnn3(&eps, &[0.0], &p).unwrap();
        let amp = (1.0 + 1f64.exp()).ln();
        assert!((amp - 1.31326168751822).abs() < 1e-13);
        for j in 0..2 {
            for c in 0..3 {
                assert!((at_zero[j][c] - amp * plain[j][c]).abs() < 1e-16);
            }
        }
        assert!(bulk_input_prnn3(&[0.0; 3], &[0.7], &p).unwrap().iter().flatten().all(|v| *v == 0.0));
        p.coupling = Matrix::from_row_major(6, 1, vec![-1.0; 6]).unwrap();
        let damped = bulk_input_prnn3(&eps, &[1.0], &p).unwrap();
        for j in 0..2 {
            for c in 0..3 {
                let expected = std::f64::consts::LN_2 * plain[j][c];
                assert!((damped[j][c] - expected).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn decode_cases() {
        let mut p = random_params(Architecture::Prnn3, 2, 1, 4);
        assert_eq!(decode(&[[0.0; 3]; 2], &[], &p).unwrap(), [0.0; 3]);
        p.decoder = Matrix::zeros(3, 6);
        let s = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]];
        let out = decode(&s, &[], &p).unwrap();
        let total: f64 = s.iter().flatten().sum();
        for o in out {
            assert!((o - std::f64::consts::LN_2 * total).abs() < 1e-12);
        }
        assert!(decode(&s, &[[1.0, 1.0]], &p).is_err());

        let p = random_params(Architecture::Prnn1, 1, 1, 9);
        let s = [[10.0, -3.0, 2.0]];
        let t = [[5.0, 1.0]];
        let out = decode(&s, &t, &p).unwrap();
        let z = [10.0, -3.0, 2.0, 5.0, 1.0];
        for i in 0..3 {
            let expected: f64 = (0..5).map(|j| softplus(p.decoder.get(i, j)) * z[j]).sum();
            assert!((out[i] - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn single_elastic_point_reproduces_elasticity() {
        let mut p = random_params(Architecture::Prnn1, 1, 0, 1);
        p.encoder = Matrix::from_fn(3, 3, |r, c| if r == c { 1.0 } else { 0.0 });
        let one = softplus_inverse(1.0);
        p.decoder = Matrix::from_fn(3, 3, |r, c| if r == c { one } else { -745.0 });
        let eps = [1e-3, -2e-4, 4e-4];
        let (s, _, _) = forward_step(&eps, &NetworkState::new(p.sizes), &p).unwrap();
        let expected = elastic_update(&eps, &p.materials.bulk).unwrap();
        for i in 0..3 {
            assert!((s[i] - expected[i]).abs() < 1e-12 * expected[0].abs());
        }
    }

    #[test]
    fn zero_path_gives_zero_prediction() {
        for arch in Architecture::ALL {
            let p = random_params(arch, 3, 2, 11);
            let pred = forward_path(&vec![[0.0; 3]; 5], &p).unwrap();
            assert!(pred.stresses.iter().flatten().all(|v| *v == 0.0));
            let (s, st, _) = forward_step(&[0.0; 3], &NetworkState::new(p.sizes), &p).unwrap();
            assert_eq!(s, [0.0; 3]);
            assert_eq!(st, NetworkState::new(p.sizes));
        }
    }

    #[test]
    fn elastic_regime_is_linear_in_the_path() {
        for arch in Architecture::ALL {
            let p = random_params(arch, 3, 1, 12);
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            // Far below yield and below the cohesive onset jump.
            let path: Vec<Vec3> = (0..6)
                .map(|_| [rng.gen_range(-1e-8..1e-8), rng.gen_range(-1e-8..1e-8), rng.gen_range(-1e-8..1e-8)])
                .collect();
            let doubled: Vec<Vec3> = path.iter().map(|e| [2.0 * e[0], 2.0 * e[1], 2.0 * e[2]]).collect();
            let a = forward_path(&path, &p).unwrap().stresses;
            let b = forward_path(&doubled, &p).unwrap().stresses;
            for (x, y) in a.iter().zip(&b) {
                for c in 0..3 {
                    assert!((2.0 * x[c] - y[c]).abs() <= 1e-12 * y[c].abs().max(1e-12), "{arch}");
                }
            }
        }
    }

    #[test]
    fn elastic_load_unload_retraces() {
        let p = random_params(Architecture::Prnn3, 2, 1, 13);
        let up: Vec<Vec3> = (0..5).map(|k| [k as f64 * 1e-8, 0.5 * k as f64 * 1e-8, 0.0]).collect();
        let mut path = up.clone();
        path.extend(up.iter().rev().skip(1));
        let s = forward_path(&path, &p).unwrap().stresses;
        for k in 0..4 {
            assert_eq!(s[k], s[path.len() - 1 - k]);
        }
    }

    #[test]
    fn truncation_equivalence() {
        for arch in Architecture::ALL {
            let p = random_params(arch, 2, 1, 14);
            let path: Vec<Vec3> = (0..8)
                .map(|k| {
                    let t = k as f64;
                    [0.02 * (0.5 * t).sin(), 0.015 * t.cos() - 0.015, 0.01 * t / 8.0]
                })
                .collect();
            let full = forward_path(&path, &p).unwrap().stresses;
            for n in 1..path.len() {
                assert_eq!(forward_path(&path[..n], &p).unwrap().stresses, full[..n]);
            }
        }
    }

    #[test]
    fn prnn3_without_coupling_is_scaled_damage_blind_network() {
        let mut p3 = random_params(Architecture::Prnn3, 3, 2, 15);
        p3.coupling = Matrix::zeros(9, 2);
        // Damage-blind reference: a PRNN1 with the bulk encoder scaled by
        // softplus(1) and zero decoder weight on the tractions.
        let mut blind = random_params(Architecture::Prnn1, 3, 2, 15);
        let amp = softplus(1.0);
        blind.encoder = Matrix::from_fn(13, 3, |r, c| {
            if r < 9 {
                amp * p3.encoder.get(r, c)
            } else {
                p3.encoder.get(r, c)
            }
        });
        blind.decoder = Matrix::from_fn(3, 13, |r, c| if c < 9 { p3.decoder.get(r, c) } else { -800.0 });
        let path: Vec<Vec3> = (0..10)
            .map(|k| {
                let t = k as f64;
                [0.03 * (0.4 * t).sin(), -0.02 * (0.3 * t).sin(), 0.025 * (0.2 * t).sin()]
            })
            .collect();
        let a = forward_path(&path, &p3).unwrap().stresses;
        let b = forward_path(&path, &blind).unwrap().stresses;
        for (x, y) in a.iter().zip(&b) {
            for c in 0..3 {
                assert!((x[c] - y[c]).abs() <= 1e-12 * (1.0 + y[c].abs()));
            }
        }
    }
}
