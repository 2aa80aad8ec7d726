//! Compares backpropagated gradients with a global finite difference of the
//! loss for every architecture on small random instances.

use prnn::constitutive::MaterialProps;
use prnn::loadpaths::Provenance;
use prnn::network::{Architecture, CohesiveMode, LayerSizes, NetworkParams};
use prnn::oracle::PathRecord;
use prnn::training::{fd_gradient, fd_stencil_crosses_branch, grads_bptt, near_branch, relative_error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FD_ORACLE_STEP: f64 = 1e-5;

fn main() -> prnn::Result<()> {
    let fd_step = 1e-7;
    for mode in [CohesiveMode::Linear, CohesiveMode::Leaky] {
        for arch in Architecture::ALL {
            let mut worst: f64 = 0.0;
            let mut accepted = 0;
            let mut excluded = 0;
            let mut seed = 0u64;
            while accepted < 20 && seed < 200 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sizes = LayerSizes::new(2, 1)?;
                let params = NetworkParams::init(arch, sizes, mode, MaterialProps::default(), seed)?;
                let path = PathRecord {
                    id: seed as usize,
                    provenance: Provenance::Gp,
                    seed,
                    strains: (0..3)
                        .map(|_| [rng.gen_range(-0.03..0.03), rng.gen_range(-0.03..0.03), rng.gen_range(-0.03..0.03)])
                        .collect(),
                    stresses: (0..3)
                        .map(|_| [rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)])
                        .collect(),
                    damage: None,
                };
                seed += 1;
                let batch = [path];
                if near_branch(&batch, &params, fd_step)? || fd_stencil_crosses_branch(&batch, &params, FD_ORACLE_STEP)? {
                    excluded += 1;
                    continue;
                }
                let g = grads_bptt(&batch, &params, fd_step)?;
                let fd = fd_gradient(&batch, &params, FD_ORACLE_STEP)?;
                let r = relative_error(&g.gradient, &fd);
                if r.max_relative_error > 1e-4 {
                    let l = params.layout();
                    println!(
                        "  seed {}: worst index {} ({:?}) analytic {:e} fd {:e}",
                        seed - 1,
                        r.worst_index,
                        l,
                        g.gradient[r.worst_index],
                        fd[r.worst_index]
                    );
                }
                worst = worst.max(r.max_relative_error);
                accepted += 1;
            }
            println!("{arch} {mode:?}: {accepted} instances, {excluded} excluded, max relative error {worst:.3e}");
        }
    }
    Ok(())
}
