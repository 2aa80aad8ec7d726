//! A reduced model-selection sweep over layer and training-set sizes.

use prnn::cli::{generate_paths, PathKind};
use prnn::config::KeyValues;
use prnn::network::{Architecture, LayerSizes};
use prnn::oracle::{gen_dataset, teacher_build, TeacherConfig};
use prnn::training::{model_select, SelectionGrid, TrainConfig};

fn main() -> prnn::Result<()> {
    let teacher = teacher_build(&TeacherConfig::default())?;
    let kv = KeyValues::default();
    let train_set = gen_dataset(&generate_paths(PathKind::Gp, 16, 0, 1, Some(30), &kv)?, &teacher)?;
    let val_set = gen_dataset(&generate_paths(PathKind::Gp, 8, 0, 2, Some(30), &kv)?, &teacher)?;

    let grid = SelectionGrid {
        layer_sizes: vec![LayerSizes::with_ratio(1)?, LayerSizes::with_ratio(2)?],
        training_sizes: vec![8, 16],
        n_inits: 2,
    };
    let config = TrainConfig {
        max_epochs: 10,
        ..TrainConfig::default()
    };
    let outcome = model_select(
        &grid,
        &train_set.paths,
        &val_set.paths,
        Architecture::Prnn3,
        &config,
        teacher.config.materials,
    )?;
    println!("bulk+coh  paths  best seed  val mse");
    for c in &outcome.cells {
        println!(
            "{:>4}+{:<3} {:>6} {:>10} {:>8.3}",
            c.n_bulk, c.n_cohesive, c.training_size, c.best_seed, c.val_mse
        );
    }
    let s = &outcome.selected;
    println!("selected {}+{} trained on {} paths", s.n_bulk, s.n_cohesive, s.training_size);
    Ok(())
}
