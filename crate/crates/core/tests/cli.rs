use std::path::Path;
use std::process::{Command, Output};

fn prnn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prnn"))
        .args(args)
        .current_dir(dir)
        .env_remove("PRNN_OUT_DIR")
        .output()
        .unwrap()
}

fn gen(dir: &Path, kind: &str, n: &str, seed: &str, out: &str) {
    let o = prnn(dir, &["gen-data", "--kind", kind, "--n", n, "--steps", "10", "--seed", seed, "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn full_pipeline_writes_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    gen(d, "gp", "5", "1", "train.jsonl");
    gen(d, "gp", "3", "2", "val.jsonl");
    let o = prnn(d, &["gen-data", "--kind", "prop-rand", "--cycles", "2", "--n", "3", "--seed", "3", "--out", "test.jsonl"]);
    assert!(o.status.success());
    for f in ["train.jsonl", "train.jsonl.manifest.json", "val.jsonl", "test.jsonl"] {
        assert!(d.join(f).is_file(), "{f}");
    }

    for arch in ["prnn1", "prnn2", "prnn3"] {
        let out = format!("run-{arch}");
        let o = prnn(d, &[
            "train", "--train", "train.jsonl", "--val", "val.jsonl", "--arch", arch, "--bulk", "4", "--coh", "1",
            "--max-epochs", "2", "--out", &out,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let log = std::fs::read_to_string(d.join(&out).join("training_log.csv")).unwrap();
        assert_eq!(log.lines().next().unwrap(), "epoch,train_mse,val_mse,wall_time_s");
        assert_eq!(log.lines().count(), 4);
        assert!(d.join(&out).join("checkpoint.json").is_file());
    }

    let o = prnn(d, &["eval", "--checkpoint", "run-prnn3/checkpoint.json", "--test", "test.jsonl", "--cycles", "2", "--out", "ev"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["errors.csv", "predictions.csv", "summary.json", "slopes.csv", "manifest.json"] {
        assert!(d.join("ev").join(f).is_file(), "{f}");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("ev/summary.json")).unwrap()).unwrap();
    assert!(summary["normalized_rmse"].as_f64().unwrap().is_finite());

    let o = prnn(d, &[
        "select", "--train", "train.jsonl", "--val", "val.jsonl", "--coh", "1,2", "--sizes", "2,5", "--inits", "2",
        "--max-epochs", "1", "--out", "sel",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(d.join("sel/selection.csv")).unwrap();
    assert!(table.lines().count() > 4);
    assert!(d.join("sel/selected.json").is_file());
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(prnn(d, &["gen-data", "--kind", "gp"]).status.code(), Some(2));
    assert_eq!(prnn(d, &["frobnicate"]).status.code(), Some(2));
    std::fs::write(d.join("bad.cfg"), "no_such_key = 1\n").unwrap();
    let o = prnn(d, &["gen-data", "--kind", "gp", "--n", "1", "--config", "bad.cfg", "--out", "x.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
    let o = prnn(d, &["train", "--train", "missing.jsonl", "--val", "missing.jsonl", "--bulk", "4", "--coh", "1"]);
    assert_eq!(o.status.code(), Some(2));
    gen(d, "gp", "2", "1", "t.jsonl");
    std::fs::write(d.join("lr.cfg"), "learning_rate = -1\n").unwrap();
    let o = prnn(d, &["train", "--train", "t.jsonl", "--val", "t.jsonl", "--bulk", "4", "--coh", "1", "--config", "lr.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("gp.cfg"), "gp_variance = 0\n").unwrap();
    let o = prnn(d, &["gen-data", "--kind", "gp", "--n", "1", "--config", "gp.cfg", "--out", "x.jsonl"]);
    assert!(matches!(o.status.code(), Some(2) | Some(3)));
}

#[test]
fn output_root_comes_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let root = d.join("outputs");
    let o = Command::new(env!("CARGO_BIN_EXE_prnn"))
        .args(["gen-data", "--kind", "prop-fund", "--n", "2"])
        .current_dir(d)
        .env("PRNN_OUT_DIR", &root)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_dir(&root).unwrap().count() > 0);
}
