use prnn::cli::{generate_paths, PathKind};
use prnn::config::KeyValues;
use prnn::constitutive::MaterialProps;
use prnn::network::{Architecture, CohesiveMode, LayerSizes, NetworkParams};
use prnn::oracle::{gen_dataset, teacher_build, Dataset, TeacherConfig};
use prnn::training::{grads_bptt, loss, train, train_from, TrainConfig};

fn small_teacher() -> TeacherConfig {
    TeacherConfig {
        n_bulk: 8,
        n_cohesive: 2,
        ..TeacherConfig::default()
    }
}

fn dataset(config: &TeacherConfig, n: usize, seed: u64, steps: usize) -> Dataset {
    let teacher = teacher_build(config).unwrap();
    let paths = generate_paths(PathKind::Gp, n, 0, seed, Some(steps), &KeyValues::default()).unwrap();
    gen_dataset(&paths, &teacher).unwrap()
}

#[test]
fn teacher_initialized_student_is_a_fixed_point() {
    let config = small_teacher();
    let teacher = teacher_build(&config).unwrap();
    let train_set = dataset(&config, 6, 1, 20);
    let val_set = dataset(&config, 4, 2, 20);
    let params = teacher.as_network_params().unwrap();
    let cfg = TrainConfig {
        max_epochs: 30,
        patience: 3,
        ..TrainConfig::default()
    };
    let out = train_from(params, &train_set.paths, &val_set.paths, &cfg).unwrap();
    assert!(out.history[0].val_mse < 1e-12, "epoch 0 val mse {}", out.history[0].val_mse);
    assert_eq!(out.best.epoch, 0);
    assert!(out.early_stopped);
    assert_eq!(out.history.len(), 1 + cfg.patience);
}

#[test]
fn loss_decreases_under_small_gradient_descent_steps() {
    let config = small_teacher();
    let data = dataset(&config, 4, 3, 15);
    for arch in Architecture::ALL {
        let mut params =
            NetworkParams::init(arch, LayerSizes::with_ratio(1).unwrap(), CohesiveMode::Linear, MaterialProps::default(), 5)
                .unwrap();
        let mut w = params.to_flat();
        let mut prev = loss(&data.paths, &params).unwrap();
        for step in 0..20 {
            let g = grads_bptt(&data.paths, &params, 1e-7).unwrap();
            assert!((g.loss - prev).abs() <= 1e-9 * prev, "{arch} step {step}: reported loss differs");
            let norm = g.gradient.iter().map(|v| v * v).sum::<f64>().sqrt();
            for (wi, gi) in w.iter_mut().zip(&g.gradient) {
                *wi -= 1e-4 * gi / norm;
            }
            params.set_flat(&w).unwrap();
            let next = loss(&data.paths, &params).unwrap();
            assert!(next <= prev, "{arch} step {step}: {next} > {prev}");
            prev = next;
        }
    }
}

#[test]
fn training_is_deterministic_for_a_seed() {
    let config = small_teacher();
    let train_set = dataset(&config, 6, 4, 12);
    let val_set = dataset(&config, 3, 5, 12);
    let cfg = TrainConfig {
        max_epochs: 4,
        batch_size: 4,
        rng_seed: 9,
        ..TrainConfig::default()
    };
    let a = train(&train_set, &val_set, &cfg, Architecture::Prnn2, LayerSizes::with_ratio(1).unwrap()).unwrap();
    let b = train(&train_set, &val_set, &cfg, Architecture::Prnn2, LayerSizes::with_ratio(1).unwrap()).unwrap();
    assert_eq!(a.best.to_json().unwrap(), b.best.to_json().unwrap());
    let strip = |h: &[prnn::training::EpochLog]| h.iter().map(|l| (l.train_mse.to_bits(), l.val_mse.to_bits())).collect::<Vec<_>>();
    assert_eq!(strip(&a.history), strip(&b.history));
}

#[test]
fn training_recovers_a_small_strain_teacher() {
    let config = small_teacher();
    let teacher = teacher_build(&config).unwrap();
    let kv = KeyValues::parse("gp_variance = 1e-7").unwrap();
    let make = |n, seed| gen_dataset(&generate_paths(PathKind::Gp, n, 0, seed, Some(20), &kv).unwrap(), &teacher).unwrap();
    let (train_set, val_set) = (make(16, 6), make(8, 7));
    let cfg = TrainConfig {
        max_epochs: 60,
        learning_rate: 1e-2,
        ..TrainConfig::default()
    };
    let out = train(&train_set, &val_set, &cfg, Architecture::Prnn3, LayerSizes::with_ratio(1).unwrap()).unwrap();
    let first = out.history[0].val_mse;
    assert!(out.best.val_mse < 1e-2 * first, "{} vs {first}", out.best.val_mse);
}
