use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn strokekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strokekit")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> serde_json::Value {
    let out = strokekit(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    let line = String::from_utf8(out.stdout).unwrap();
    assert_eq!(line.lines().count(), 1, "one summary line expected, got {line}");
    serde_json::from_str(&line).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

/// synth through report on a small corpus; returns every file written.
fn staged_run(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let d = dir.display().to_string();
    ok(&["synth", "--out", &d, "--strokes-per-class", "6", "--seed", "5"]);
    ok(&["preprocess", "--input", &p(dir, "series.csv"), "--out", &p(dir, "clean.csv"), "--plot", &p(dir, "plot.svg")]);
    ok(&["segment", "--input", &p(dir, "clean.csv"), "--labels", &p(dir, "labels.csv"), "--out", &d]);
    ok(&["extract", "--input", &p(dir, "clean.csv"), "--windows", &p(dir, "windows.csv"), "--out", &p(dir, "features.csv")]);
    let pca = ok(&["fit-pca", "--features", &p(dir, "features.csv"), "--out", &p(dir, "pca.json")]);
    assert_eq!(pca["input_dim"], 180);
    let dag = ok(&["train", "--features", &p(dir, "features.csv"), "--pca", &p(dir, "pca.json"), "--model", "dagsvm", "--out", &p(dir, "dag.json")]);
    assert_eq!(dag["model"], "dagsvm");
    ok(&["train", "--features", &p(dir, "features.csv"), "--pca", &p(dir, "pca.json"), "--model", "mlp", "--epochs", "20", "--out", &p(dir, "mlp.json")]);
    ok(&["predict", "--input", &p(dir, "clean.csv"), "--gate", &p(dir, "activation.json"), "--pca", &p(dir, "pca.json"), "--model", &p(dir, "dag.json"), "--out", &p(dir, "pred.csv")]);
    let scored = ok(&["evaluate", "--input", &p(dir, "clean.csv"), "--windows", &p(dir, "windows.csv"), "--out", &d]);
    assert!(scored["scored"].as_u64().unwrap() > 0);
    let rep = ok(&["report", "--predictions", &p(dir, "pred.csv"), "--windows", &p(dir, "windows.csv"), "--out", &d, "--all"]);
    let acc = rep["accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));

    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn staged_pipeline_is_byte_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = staged_run(a.path());
    let second = staged_run(b.path());
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    for want in ["metrics.json", "confusion.csv", "confusion.svg", "scores.csv", "profiles.json", "pred.csv"] {
        assert!(names.contains(&want), "missing {want} in {names:?}");
    }
    assert_eq!(first.len(), second.len());
    for ((n1, c1), (n2, c2)) in first.iter().zip(&second) {
        assert_eq!(n1, n2);
        assert!(c1 == c2, "{n1} differs between runs");
    }
}

#[test]
fn unknown_flag_is_a_usage_error_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = strokekit(&["synth", "--out", &dir.path().display().to_string(), "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "seed = 1\nwindow_size = 200\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = strokekit(&["--config", &cfg.display().to_string(), "synth", "--out", &out_dir.display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_dir.exists());
}

#[test]
fn config_values_apply_and_flags_override_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "seed = 9\nstrokes_per_class = 2\n").unwrap();
    let c = cfg.display().to_string();
    let from_file = ok(&["--config", &c, "synth", "--out", &p(dir.path(), "a")]);
    assert_eq!(from_file["seed"], 9);
    assert_eq!(from_file["strokes"], 12);
    let flagged = ok(&["--config", &c, "synth", "--out", &p(dir.path(), "b"), "--strokes-per-class", "3"]);
    assert_eq!(flagged["strokes"], 18);
}

#[test]
fn bad_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("series.csv");
    fs::write(&input, "not,a,sensor,file\n1,2,3,4\n").unwrap();
    let out = strokekit(&["preprocess", "--input", &input.display().to_string(), "--out", &p(dir.path(), "clean.csv")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    assert!(!dir.path().join("clean.csv").exists());
}

#[test]
fn version_and_help_exit_cleanly() {
    let v = strokekit(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).starts_with("strokekit "));
    let h = strokekit(&["--help"]);
    assert_eq!(h.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&h.stdout).contains("fit-pca"));
}

#[test]
fn staged_run_matches_the_in_memory_pipeline() {
    use strokekit::classify::Classifier;
    use strokekit::pipeline::{run_desk, DeskConfig};
    use strokekit::synthgen::GenConfig;

    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ds = d.display().to_string();
    ok(&["synth", "--out", &ds, "--strokes-per-class", "6", "--seed", "3"]);
    ok(&["preprocess", "--input", &p(d, "series.csv"), "--out", &p(d, "clean.csv")]);
    ok(&["segment", "--input", &p(d, "clean.csv"), "--labels", &p(d, "labels.csv"), "--out", &ds]);
    ok(&["extract", "--input", &p(d, "clean.csv"), "--windows", &p(d, "windows.csv"), "--out", &p(d, "features.csv")]);
    ok(&["fit-pca", "--features", &p(d, "features.csv"), "--out", &p(d, "pca.json")]);
    ok(&["train", "--features", &p(d, "features.csv"), "--pca", &p(d, "pca.json"), "--model", "dagsvm", "--out", &p(d, "dag.json")]);
    ok(&["train", "--features", &p(d, "features.csv"), "--pca", &p(d, "pca.json"), "--model", "mlp", "--out", &p(d, "mlp.json")]);

    let cfg = DeskConfig { gen: GenConfig { seed: 3, strokes_per_class: 6, ..GenConfig::default() }, ..DeskConfig::default() };
    let desk = run_desk(&cfg).unwrap();
    let load = |name: &str| -> serde_json::Value { serde_json::from_slice(&fs::read(d.join(name)).unwrap()).unwrap() };
    assert_eq!(load("activation.json"), as_json(&desk.gate));
    assert_eq!(load("pca.json"), as_json(&desk.pca));
    assert_eq!(load("dag.json"), as_json(&Classifier::Dagsvm(desk.dag)));
    assert_eq!(load("mlp.json"), as_json(&Classifier::Mlp(desk.mlp)));
}

fn as_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap()
}
