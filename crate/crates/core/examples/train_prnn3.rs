//! Trains a small PRNN3 on teacher data and evaluates it on a proportional
//! test set with one unloading cycle.

use prnn::cli::{generate_paths, stress_std, PathKind};
use prnn::config::KeyValues;
use prnn::network::{Architecture, LayerSizes};
use prnn::oracle::{gen_dataset, teacher_build, TeacherConfig};
use prnn::training::{evaluate, train, TrainConfig};

fn main() -> prnn::Result<()> {
    let teacher = teacher_build(&TeacherConfig::default())?;
    let kv = KeyValues::default();
    let data = |kind, n, cycles, seed, steps| -> prnn::Result<_> {
        gen_dataset(&generate_paths(kind, n, cycles, seed, steps, &kv)?, &teacher)
    };
    let train_set = data(PathKind::Gp, 32, 0, 1, Some(40))?;
    let val_set = data(PathKind::Gp, 16, 0, 2, Some(40))?;
    let test_set = data(PathKind::PropRand, 16, 1, 3, None)?;

    let config = TrainConfig {
        max_epochs: 40,
        ..TrainConfig::default()
    };
    let outcome = train(&train_set, &val_set, &config, Architecture::Prnn3, LayerSizes::with_ratio(2)?)?;
    println!("epoch  train_mse  val_mse");
    for log in outcome.history.iter().step_by(5) {
        println!("{:>5} {:>10.3} {:>8.3}", log.epoch, log.train_mse, log.val_mse);
    }
    println!(
        "best epoch {} (val mse {:.3} MPa²){}",
        outcome.best.epoch,
        outcome.best.val_mse,
        if outcome.early_stopped { ", stopped early" } else { "" }
    );

    let (report, _) = evaluate(&test_set.paths, &outcome.best.params)?;
    println!(
        "test: rmse {:.3} MPa, {:.1}% of the target standard deviation",
        report.rmse,
        100.0 * report.rmse / stress_std(&test_set.paths)
    );
    Ok(())
}
