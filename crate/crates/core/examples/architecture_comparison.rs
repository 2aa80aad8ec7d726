//! PRNN1, PRNN2 and PRNN3 trained on the same teacher data from several
//! seeds; reports the median best validation error of each.

use prnn::cli::{generate_paths, PathKind};
use prnn::config::KeyValues;
use prnn::network::{Architecture, LayerSizes};
use prnn::oracle::{gen_dataset, teacher_build, TeacherConfig};
use prnn::training::{train, TrainConfig};

fn main() -> prnn::Result<()> {
    let teacher = teacher_build(&TeacherConfig::default())?;
    let kv = KeyValues::default();
    let train_set = gen_dataset(&generate_paths(PathKind::Gp, 24, 0, 1, Some(40), &kv)?, &teacher)?;
    let val_set = gen_dataset(&generate_paths(PathKind::Gp, 16, 0, 2, Some(40), &kv)?, &teacher)?;
    let sizes = LayerSizes::with_ratio(2)?;
    let seeds = 0..3u64;

    for arch in Architecture::ALL {
        let mut errors = Vec::new();
        for seed in seeds.clone() {
            let config = TrainConfig {
                max_epochs: 25,
                rng_seed: seed,
                ..TrainConfig::default()
            };
            errors.push(train(&train_set, &val_set, &config, arch, sizes)?.best.val_mse);
        }
        errors.sort_by(f64::total_cmp);
        println!(
            "{arch}: median val mse {:8.3} MPa²  (seeds: {})",
            errors[errors.len() / 2],
            errors.iter().map(|e| format!("{e:.3}")).collect::<Vec<_>>().join(", ")
        );
    }
    Ok(())
}
