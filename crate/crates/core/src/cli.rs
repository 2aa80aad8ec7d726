//! Command-line front end: `gen-data`, `train`, `select` and `eval`.
//!
//! Every command writes its artifacts atomically next to a JSON manifest
//! recording the command line, seeds and SHA-256 of all inputs and outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::KeyValues;
use crate::constitutive::MaterialProps;
use crate::error::{Error, Result};
use crate::io::{atomic_write, csv_bytes, sha256_file};
use crate::linalg::{dot3, norm3, Vec3};
use crate::loadpaths::{
    fundamental_directions, proportional_path, random_direction, GpConfig, GpSampler, MagnitudeFn,
    ProportionalConfig, Provenance, StrainPath, DEFAULT_STRAIN_INCREMENT,
};
use crate::network::{Architecture, CohesiveMode, LayerSizes, NetworkParams};
use crate::oracle::{gen_dataset, teacher_build, Dataset, PathRecord, TeacherConfig};
use crate::training::{
    evaluate, model_select, train_from, Checkpoint, SelectionGrid, TrainConfig,
};

/// Environment variable holding the default output root.
pub const OUT_DIR_ENV: &str = "PRNN_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "prnn", version, about = "Physically recurrent neural network surrogates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset from the teacher micromodel.
    GenData(GenDataArgs),
    /// Train one network.
    Train(TrainArgs),
    /// Sweep layer and training-set sizes.
    Select(SelectArgs),
    /// Evaluate a checkpoint on a dataset.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathKind {
    Gp,
    PropFund,
    PropRand,
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    #[arg(long, value_enum)]
    pub kind: PathKind,
    #[arg(long)]
    pub n: usize,
    /// Unloading cycles of proportional paths.
    #[arg(long, default_value_t = 0)]
    pub cycles: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Steps per path; 100 for GP paths and 30 for proportional paths by default.
    #[arg(long)]
    pub steps: Option<usize>,
    /// `key = value` file with material, teacher and generator settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output dataset file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub val: PathBuf,
    #[arg(long, default_value = "prnn3")]
    pub arch: Architecture,
    #[arg(long)]
    pub bulk: usize,
    #[arg(long)]
    pub coh: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Leaky activation on the cohesive inputs.
    #[arg(long)]
    pub leaky: bool,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    /// `key = value` file with training settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub val: PathBuf,
    #[arg(long, default_value = "prnn3")]
    pub arch: Architecture,
    /// Cohesive point counts; bulk counts follow the 4:1 ratio.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 3, 5, 7, 9, 11])]
    pub coh: Vec<usize>,
    /// Training-set sizes (first paths of the training file).
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 32, 64, 96, 128, 192])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub inits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Unloading cycles of the test paths; enables the slope report when ≥ 1.
    #[arg(long, default_value_t = 0)]
    pub cycles: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit status for an error: 3 for numerical failures, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        3
    } else {
        2
    }
}

fn output_root() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("prnn-out"))
}

fn resolve_out(out: &Option<PathBuf>, default: &str) -> PathBuf {
    match out {
        Some(p) if p.is_absolute() => p.clone(),
        Some(p) => match std::env::var_os(OUT_DIR_ENV) {
            Some(root) => PathBuf::from(root).join(p),
            None => p.clone(),
        },
        None => output_root().join(default),
    }
}

#[derive(Debug, Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    config: Option<Hashed>,
    inputs: Vec<Hashed>,
    outputs: Vec<Hashed>,
    seeds: BTreeMap<String, u64>,
}

#[derive(Debug, Serialize)]
struct Hashed {
    path: String,
    sha256: String,
}

fn hashed(path: &Path) -> Result<Hashed> {
    Ok(Hashed {
        path: path.display().to_string(),
        sha256: sha256_file(path)?,
    })
}

fn write_manifest(
    path: &Path,
    argv: &[String],
    config: Option<&Path>,
    inputs: &[&Path],
    outputs: &[&Path],
    seeds: BTreeMap<String, u64>,
) -> Result<()> {
    let m = Manifest {
        tool: "prnn",
        version: env!("CARGO_PKG_VERSION"),
        command: argv.to_vec(),
        config: config.map(hashed).transpose()?,
        inputs: inputs.iter().map(|p| hashed(p)).collect::<Result<_>>()?,
        outputs: outputs.iter().map(|p| hashed(p)).collect::<Result<_>>()?,
        seeds,
    };
    let mut text = serde_json::to_string_pretty(&m)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

fn load_config(path: &Option<PathBuf>) -> Result<KeyValues> {
    match path {
        Some(p) => KeyValues::load(p),
        None => Ok(KeyValues::default()),
    }
}

const GEN_KEYS: [&str; 8] = [
    "teacher_seed",
    "teacher_bulk",
    "teacher_cohesive",
    "teacher_cohesive_length",
    "teacher_calibrate",
    "gp_variance",
    "gp_length_scale",
    "strain_increment",
];

const PROP_KEYS: [&str; 10] = [
    "youngs_modulus",
    "poisson_ratio",
    "yield_stress",
    "hardening_modulus",
    "normal_strength",
    "shear_strength",
    "g_ic",
    "g_iic",
    "eta",
    "penalty_stiffness",
];

/// Teacher settings read from a generation config.
pub fn teacher_config(kv: &KeyValues) -> Result<TeacherConfig> {
    let mut t = TeacherConfig {
        materials: MaterialProps::from_key_values(kv)?,
        ..TeacherConfig::default()
    };
    kv.read_u64("teacher_seed", &mut t.rng_seed)?;
    kv.read_usize("teacher_bulk", &mut t.n_bulk)?;
    kv.read_usize("teacher_cohesive", &mut t.n_cohesive)?;
    kv.read_f64("teacher_cohesive_length", &mut t.cohesive_length)?;
    match kv.get("teacher_calibrate") {
        None | Some("true") => {}
        Some("false") => t.calibration = None,
        Some(v) => return Err(Error::Config(format!("teacher_calibrate: expected true/false, got `{v}`"))),
    }
    t.validate()?;
    Ok(t)
}

/// Strain paths for `gen-data`; path seeds are drawn from `seed`.
pub fn generate_paths(
    kind: PathKind,
    n: usize,
    cycles: usize,
    seed: u64,
    steps: Option<usize>,
    kv: &KeyValues,
) -> Result<Vec<StrainPath>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
    match kind {
        PathKind::Gp => {
            let mut gp = GpConfig {
                n_steps: steps.unwrap_or(GpConfig::default().n_steps),
                ..GpConfig::default()
            };
            kv.read_f64("gp_variance", &mut gp.variance)?;
            kv.read_f64("gp_length_scale", &mut gp.length_scale)?;
            let sampler = GpSampler::new(&gp)?;
            Ok(seeds.iter().map(|&s| sampler.sample(s)).collect())
        }
        PathKind::PropFund | PathKind::PropRand => {
            let magnitude_fn = MagnitudeFn::from_cycles(cycles)?;
            let mut step = DEFAULT_STRAIN_INCREMENT;
            kv.read_f64("strain_increment", &mut step)?;
            let n_steps = steps.unwrap_or(30);
            let fund = fundamental_directions();
            seeds
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let (direction, provenance) = match kind {
                        PathKind::PropFund => (fund[i % fund.len()], Provenance::ProportionalFundamental),
                        _ => (random_direction(s), Provenance::ProportionalRandom),
                    };
                    let cfg = ProportionalConfig {
                        step,
                        ..ProportionalConfig::new(direction, magnitude_fn, n_steps)
                    };
                    proportional_path(&cfg, provenance, s)
                })
                .collect()
        }
    }
}

pub fn cmd_gen_data(args: &GenDataArgs, argv: &[String]) -> Result<()> {
    let kv = load_config(&args.config)?;
    let known: Vec<&str> = GEN_KEYS.iter().chain(&PROP_KEYS).copied().collect();
    kv.check_known(&known)?;
    let teacher = teacher_build(&teacher_config(&kv)?)?;
    let paths = generate_paths(args.kind, args.n, args.cycles, args.seed, args.steps, &kv)?;
    let ds = gen_dataset(&paths, &teacher)?;
    let out = resolve_out(&args.out, "data.jsonl");
    ds.save(&out)?;
    let mut seeds = BTreeMap::new();
    seeds.insert("seed".into(), args.seed);
    seeds.insert("teacher_seed".into(), teacher.config.rng_seed);
    write_manifest(
        &manifest_for_file(&out),
        argv,
        args.config.as_deref(),
        &[],
        &[&out],
        seeds,
    )?;
    log::info!("wrote {} paths to {}", ds.len(), out.display());
    Ok(())
}

fn manifest_for_file(out: &Path) -> PathBuf {
    let name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{name}.manifest.json"))
}

fn train_config(path: &Option<PathBuf>, seed: u64, max_epochs: Option<usize>) -> Result<TrainConfig> {
    let kv = load_config(path)?;
    kv.check_known(&TrainConfig::KEYS)?;
    let mut c = TrainConfig::from_key_values(&kv)?;
    c.rng_seed = seed;
    if let Some(m) = max_epochs {
        c.max_epochs = m;
    }
    Ok(c)
}

pub fn cmd_train(args: &TrainArgs, argv: &[String]) -> Result<()> {
    let config = train_config(&args.config, args.seed, args.max_epochs)?;
    let train = Dataset::load(&args.train)?;
    let val = Dataset::load(&args.val)?;
    let sizes = LayerSizes::new(args.bulk, args.coh)?;
    let mode = if args.leaky {
        CohesiveMode::Leaky
    } else {
        CohesiveMode::Linear
    };
    let init = NetworkParams::init(args.arch, sizes, mode, train.header.props, args.seed)?;
    let out = resolve_out(&args.out, "train");
    let ckpt_path = out.join("checkpoint.json");
    let log_path = out.join("training_log.csv");
    let mut seeds = BTreeMap::new();
    seeds.insert("seed".into(), args.seed);
    let result = train_from(init, &train.paths, &val.paths, &config);
    let (best, history) = match result {
        Ok(o) => (o.best, o.history),
        Err(Error::Diverged { epoch, last_good }) => {
            last_good.save(&ckpt_path)?;
            return Err(Error::Diverged { epoch, last_good });
        }
        Err(e) => return Err(e),
    };
    best.save(&ckpt_path)?;
    atomic_write(&log_path, &csv_bytes(&history)?)?;
    write_manifest(
        &out.join("manifest.json"),
        argv,
        args.config.as_deref(),
        &[&args.train, &args.val],
        &[&ckpt_path],
        seeds,
    )?;
    log::info!(
        "best validation mse {:.6e} at epoch {}; checkpoint {}",
        best.val_mse,
        best.epoch,
        ckpt_path.display()
    );
    Ok(())
}

pub fn cmd_select(args: &SelectArgs, argv: &[String]) -> Result<()> {
    let config = train_config(&args.config, args.seed, args.max_epochs)?;
    let train = Dataset::load(&args.train)?;
    let val = Dataset::load(&args.val)?;
    let grid = SelectionGrid {
        layer_sizes: args
            .coh
            .iter()
            .map(|&nc| LayerSizes::with_ratio(nc))
            .collect::<Result<_>>()?,
        training_sizes: args.sizes.clone(),
        n_inits: args.inits,
    };
    let outcome = model_select(&grid, &train.paths, &val.paths, args.arch, &config, train.header.props)?;
    let out = resolve_out(&args.out, "select");
    let table = out.join("selection.csv");
    let cells = out.join("cells.csv");
    let selected = out.join("selected.json");
    atomic_write(&table, &csv_bytes(&outcome.rows)?)?;
    atomic_write(&cells, &csv_bytes(&outcome.cells)?)?;
    let mut sel = serde_json::to_string_pretty(&outcome.selected)?;
    sel.push('\n');
    atomic_write(&selected, sel.as_bytes())?;
    let mut seeds = BTreeMap::new();
    seeds.insert("seed".into(), args.seed);
    write_manifest(
        &out.join("manifest.json"),
        argv,
        args.config.as_deref(),
        &[&args.train, &args.val],
        &[&table, &cells, &selected],
        seeds,
    )?;
    log::info!(
        "selected {}+{} trained on {} paths (val mse {:.6e})",
        outcome.selected.n_bulk,
        outcome.selected.n_cohesive,
        outcome.selected.training_size,
        outcome.selected.val_mse
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct PredictionRow {
    path_id: usize,
    step: usize,
    strain_xx: f64,
    strain_yy: f64,
    strain_xy: f64,
    target_xx: f64,
    target_yy: f64,
    target_xy: f64,
    predicted_xx: f64,
    predicted_yy: f64,
    predicted_xy: f64,
}

/// Least-squares slopes of stress against strain, both projected on the
/// loading direction of a proportional path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeRow {
    pub path_id: usize,
    pub target_loading: f64,
    pub target_unloading: f64,
    pub target_reloading: f64,
    pub predicted_loading: f64,
    pub predicted_unloading: f64,
    pub predicted_reloading: f64,
}

#[derive(Debug, Serialize)]
struct EvalSummary {
    n_paths: usize,
    n_steps: usize,
    mse: f64,
    rmse: f64,
    per_component_mse: [f64; 3],
    target_std: f64,
    normalized_rmse: f64,
}

/// Standard deviation of the target stresses: square root of the summed
/// per-component variances over all steps.
pub fn stress_std(paths: &[PathRecord]) -> f64 {
    let n: usize = paths.iter().map(|p| p.len()).sum();
    if n == 0 {
        return 0.0;
    }
    let mut mean = [0.0; 3];
    for s in paths.iter().flat_map(|p| &p.stresses) {
        for c in 0..3 {
            mean[c] += s[c] / n as f64;
        }
    }
    let mut var = 0.0;
    for s in paths.iter().flat_map(|p| &p.stresses) {
        for c in 0..3 {
            var += (s[c] - mean[c]).powi(2) / n as f64;
        }
    }
    var.sqrt()
}

fn lstsq_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        f64::NAN
    }
}

/// Loading, unloading and reloading slopes of a proportional path with the
/// default window of `cycles`; `None` when the path has no unload window.
pub fn unload_slopes(strains: &[Vec3], stresses: &[Vec3], cycles: usize) -> Result<Option<[f64; 3]>> {
    let n = strains.len();
    let windows = MagnitudeFn::from_cycles(cycles)?.default_windows(n);
    let Some(&(a, b)) = windows.first() else {
        return Ok(None);
    };
    let Some(dir) = strains.iter().find(|s| norm3(s) > 0.0).map(|s| {
        let m = norm3(s);
        [s[0] / m, s[1] / m, s[2] / m]
    }) else {
        return Ok(None);
    };
    // Origin first, then steps 1..=n.
    let mut x = vec![0.0];
    let mut y = vec![0.0];
    for (e, s) in strains.iter().zip(stresses) {
        x.push(dot3(e, &dir));
        y.push(dot3(s, &dir));
    }
    let reload_end = (b + (b + 1 - a)).min(n);
    if a < 2 || reload_end <= b {
        return Ok(None);
    }
    let loading = lstsq_slope(&x[..=2.min(a - 1)], &y[..=2.min(a - 1)]);
    let unloading = lstsq_slope(&x[a - 1..=b], &y[a - 1..=b]);
    let reloading = lstsq_slope(&x[b..=reload_end], &y[b..=reload_end]);
    Ok(Some([loading, unloading, reloading]))
}

pub fn cmd_eval(args: &EvalArgs, argv: &[String]) -> Result<()> {
    let ckpt = Checkpoint::load(&args.checkpoint)?;
    let test = Dataset::load(&args.test)?;
    let (report, predictions) = evaluate(&test.paths, &ckpt.params)?;
    let out = resolve_out(&args.out, "eval");
    let errors_path = out.join("errors.csv");
    let pred_path = out.join("predictions.csv");
    let summary_path = out.join("summary.json");
    let mut outputs: Vec<PathBuf> = vec![errors_path.clone(), pred_path.clone(), summary_path.clone()];

    atomic_write(&errors_path, &csv_bytes(&report.per_path)?)?;
    let mut rows = Vec::with_capacity(report.n_steps);
    for (p, pred) in test.paths.iter().zip(&predictions) {
        for (t, ((e, s), y)) in p.strains.iter().zip(&p.stresses).zip(pred).enumerate() {
            rows.push(PredictionRow {
                path_id: p.id,
                step: t + 1,
                strain_xx: e[0],
                strain_yy: e[1],
                strain_xy: e[2],
                target_xx: s[0],
                target_yy: s[1],
                target_xy: s[2],
                predicted_xx: y[0],
                predicted_yy: y[1],
                predicted_xy: y[2],
            });
        }
    }
    atomic_write(&pred_path, &csv_bytes(&rows)?)?;

    let std = stress_std(&test.paths);
    let summary = EvalSummary {
        n_paths: test.len(),
        n_steps: report.n_steps,
        mse: report.mse,
        rmse: report.rmse,
        per_component_mse: report.per_component,
        target_std: std,
        normalized_rmse: if std > 0.0 { report.rmse / std } else { f64::NAN },
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    atomic_write(&summary_path, text.as_bytes())?;

    if args.cycles >= 1 {
        let mut slopes = Vec::new();
        for (p, pred) in test.paths.iter().zip(&predictions) {
            let t = unload_slopes(&p.strains, &p.stresses, args.cycles)?;
            let y = unload_slopes(&p.strains, pred, args.cycles)?;
            if let (Some(t), Some(y)) = (t, y) {
                slopes.push(SlopeRow {
                    path_id: p.id,
                    target_loading: t[0],
                    target_unloading: t[1],
                    target_reloading: t[2],
                    predicted_loading: y[0],
                    predicted_unloading: y[1],
                    predicted_reloading: y[2],
                });
            }
        }
        let slopes_path = out.join("slopes.csv");
        atomic_write(&slopes_path, &csv_bytes(&slopes)?)?;
        outputs.push(slopes_path);
    }

    let outs: Vec<&Path> = outputs.iter().map(PathBuf::as_path).collect();
    write_manifest(
        &out.join("manifest.json"),
        argv,
        None,
        &[&args.checkpoint, &args.test],
        &outs,
        BTreeMap::new(),
    )?;
    log::info!("mse {:.6e} MPa², rmse {:.6e} MPa", report.mse, report.rmse);
    Ok(())
}

/// Runs the parsed command line.
pub fn run(cli: &Cli, argv: &[String]) -> Result<()> {
    match &cli.command {
        Command::GenData(a) => cmd_gen_data(a, argv),
        Command::Train(a) => cmd_train(a, argv),
        Command::Select(a) => cmd_select(a, argv),
        Command::Eval(a) => cmd_eval(a, argv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::Factorization { jitter: 1.0 }), 3);
    }

    #[test]
    fn slopes_of_a_linear_response() {
        let cfg = ProportionalConfig::new([1.0, 0.0, 0.0], MagnitudeFn::OneCycle, 30);
        let p = proportional_path(&cfg, Provenance::ProportionalFundamental, 0).unwrap();
        let s: Vec<Vec3> = p.steps.iter().map(|e| [5.0 * e[0], 0.0, 0.0]).collect();
        let r = unload_slopes(&p.steps, &s, 1).unwrap().unwrap();
        for v in r {
            assert!((v - 5.0).abs() < 1e-9);
        }
        assert!(unload_slopes(&p.steps, &s, 0).unwrap().is_none());
    }

    #[test]
    fn cli_parses() {
        let c = Cli::try_parse_from(["prnn", "gen-data", "--kind", "prop-rand", "--cycles", "1", "--n", "54"]).unwrap();
        assert!(matches!(c.command, Command::GenData(GenDataArgs { n: 54, cycles: 1, .. })));
        let c = Cli::try_parse_from([
            "prnn", "train", "--train", "a", "--val", "b", "--arch", "prnn1", "--bulk", "4", "--coh", "1",
        ])
        .unwrap();
        assert!(matches!(c.command, Command::Train(TrainArgs { arch: Architecture::Prnn1, .. })));
        assert!(Cli::try_parse_from(["prnn", "train", "--arch", "lstm"]).is_err());
    }
}
