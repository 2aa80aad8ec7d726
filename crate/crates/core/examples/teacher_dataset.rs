//! Builds the default teacher, generates a few GP and proportional paths,
//! writes them as a JSON-lines dataset and reads it back.

use prnn::cli::generate_paths;
use prnn::cli::PathKind;
use prnn::config::KeyValues;
use prnn::oracle::{gen_dataset, teacher_build, Dataset, TeacherConfig};

fn main() -> prnn::Result<()> {
    let teacher = teacher_build(&TeacherConfig::default())?;
    println!(
        "teacher {}+{}, calibrated jump length {:.4e} mm, hash {}",
        teacher.n_bulk(),
        teacher.n_cohesive(),
        teacher.cohesive_length,
        &teacher.hash()[..16]
    );

    let kv = KeyValues::default();
    let mut paths = generate_paths(PathKind::Gp, 8, 0, 1, None, &kv)?;
    paths.extend(generate_paths(PathKind::PropRand, 4, 1, 2, None, &kv)?);
    let data = gen_dataset(&paths, &teacher)?;

    for p in &data.paths {
        let peak = p
            .stresses
            .iter()
            .map(|s| s.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let damaged = p
            .damage
            .as_ref()
            .and_then(|d| d.last())
            .map(|d| d.iter().filter(|v| **v > 0.1).count())
            .unwrap_or(0);
        println!(
            "path {:>2} {:?}: {} steps, peak |σ| {:6.2} MPa, {damaged}/{} points with d > 0.1",
            p.id,
            p.provenance,
            p.strains.len(),
            peak,
            teacher.n_cohesive()
        );
    }

    let dir = std::env::temp_dir().join("prnn-example-dataset");
    let file = dir.join("teacher.jsonl");
    data.save(&file)?;
    let back = Dataset::load(&file)?;
    println!("wrote {} and read back {} paths (identical: {})", file.display(), back.len(), back == data);
    Ok(())
}
