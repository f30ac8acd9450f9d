use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use strokekit::classify::{self, Classifier, KernelSvmParams, MlpTrainParams};
use strokekit::evaluate::{
    ahp_weights, build_profiles, score_window, AhpMatrix, IntervalMode, ProfileSet, LEVEL_NAMES,
};
use strokekit::ingest::{parse_series, validate_series};
use strokekit::metrics::{self, FMeasureConfig, MetricsReport};
use strokekit::pipeline::{feature_matrix, reduce_all, stratified_split, window_truth, WindowTruth};
use strokekit::preprocess::{preprocess_series, PreprocessConfig};
use strokekit::reduce::{contribution_rates, fit_pca, PcaModel, PcaOptions};
use strokekit::segment::{self, slide_windows, LinearSvmModel, LinearSvmParams, MotionWindow, WindowSpec};
use strokekit::synthgen::{self, GenConfig};
use strokekit::{SensorSeries, StrokeLabel};

use crate::config::{pick, switch, PipelineConfig};
use crate::svg;
use crate::tables::{self, FeatureRow, PredictionRow, Split, WindowRow};

pub type Outcome = anyhow::Result<Value>;

fn write_out(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        }
    }
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn read_series(path: &Path) -> anyhow::Result<SensorSeries> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_series(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn window_of(series: &SensorSeries, row: &WindowRow) -> anyhow::Result<MotionWindow> {
    if row.end > series.len() || row.start >= row.end {
        bail!("window {}..{} outside the series ({} frames)", row.start, row.end, series.len());
    }
    let mut w = MotionWindow::new(row.start, series.frames()[row.start..row.end].to_vec(), series.sample_period());
    w.label = row.stroke();
    Ok(w)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory for series.csv and labels.csv
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub strokes_per_class: Option<usize>,
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    #[arg(long)]
    pub spike_rate: Option<f64>,
    #[arg(long)]
    pub dropout_rate: Option<f64>,
    #[arg(long)]
    pub idle_fraction: Option<f64>,
    /// Stroke duration in seconds
    #[arg(long)]
    pub period: Option<f64>,
}

pub fn synth(a: &SynthArgs, c: &PipelineConfig) -> Outcome {
    let d = GenConfig::default();
    let cfg = GenConfig {
        seed: pick(a.seed, c.seed, d.seed),
        strokes_per_class: pick(a.strokes_per_class, c.strokes_per_class, d.strokes_per_class),
        noise_sigma: pick(a.noise_sigma, c.noise_sigma, d.noise_sigma),
        spike_rate: pick(a.spike_rate, c.spike_rate, d.spike_rate),
        dropout_rate: pick(a.dropout_rate, c.dropout_rate, d.dropout_rate),
        idle_fraction: pick(a.idle_fraction, c.idle_fraction, d.idle_fraction),
        period: pick(a.period, c.period, d.period),
    };
    let corpus = synthgen::generate(&cfg)?;
    let series_path = a.out.join("series.csv");
    let labels_path = a.out.join("labels.csv");
    write_out(&series_path, &corpus.series.to_csv())?;
    write_out(&labels_path, &synthgen::labels_to_csv(&corpus.segments))?;
    Ok(json!({
        "command": "synth",
        "seed": cfg.seed,
        "frames": corpus.series.len(),
        "strokes": corpus.strokes().count(),
        "segments": corpus.segments.len(),
        "outputs": [path_str(&series_path), path_str(&labels_path)],
    }))
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Cleaned series CSV
    #[arg(long)]
    pub out: PathBuf,
    /// Base smoothing coefficient
    #[arg(long)]
    pub k0: Option<f64>,
    /// Motion threshold; default is 5% of each channel's range
    #[arg(long)]
    pub delta_a: Option<f64>,
    #[arg(long)]
    pub no_filter: bool,
    #[arg(long)]
    pub no_outliers: bool,
    /// Also write an SVG of raw vs cleaned acc_x over the first 1000 samples
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

pub fn preprocess(a: &PreprocessArgs, c: &PipelineConfig) -> Outcome {
    let d = PreprocessConfig::default();
    let cfg = PreprocessConfig {
        k0: pick(a.k0, c.k0, d.k0),
        delta_a: a.delta_a.or(c.delta_a),
        remove_outliers: !switch(a.no_outliers, c.no_outliers),
        filter: !switch(a.no_filter, c.no_filter),
        ..d
    };
    let raw = read_series(&a.input)?;
    let gaps = validate_series(&raw);
    let clean = preprocess_series(&raw, &cfg)?;
    write_out(&a.out, &clean.to_csv())?;
    let mut outputs = vec![path_str(&a.out)];
    if let Some(plot) = &a.plot {
        let n = clean.len().min(1000);
        let before: Vec<f64> = raw.channel(0).into_iter().take(n).collect();
        let after: Vec<f64> = clean.channel(0).into_iter().take(n).collect();
        write_out(plot, &svg::line_chart(&[("raw", "gray", &before), ("clean", "crimson", &after)], 900.0, 300.0))?;
        outputs.push(path_str(plot));
    }
    Ok(json!({
        "command": "preprocess",
        "frames_in": raw.len(),
        "frames_out": clean.len(),
        "gaps": gaps.len(),
        "filled": clean.len() - raw.len(),
        "outputs": outputs,
    }))
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Cleaned series CSV
    #[arg(long)]
    pub input: PathBuf,
    /// Ground-truth labels CSV
    #[arg(long)]
    pub labels: PathBuf,
    /// Output directory for windows.csv and activation.json
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub overlap: Option<f64>,
    /// Soft-margin constant of the activation gate
    #[arg(long)]
    pub gate_c: Option<f64>,
    #[arg(long)]
    pub split_seed: Option<u64>,
    #[arg(long)]
    pub test_fraction: Option<f64>,
}

fn window_spec(width: Option<usize>, overlap: Option<f64>, c: &PipelineConfig) -> anyhow::Result<WindowSpec> {
    let d = WindowSpec::default();
    Ok(WindowSpec::new(pick(width, c.window, d.width), pick(overlap, c.overlap, d.overlap))?)
}

pub fn segment(a: &SegmentArgs, c: &PipelineConfig) -> Outcome {
    let spec = window_spec(a.window, a.overlap, c)?;
    let test_fraction = pick(a.test_fraction, c.test_fraction, 0.2);
    if !(0.0..1.0).contains(&test_fraction) {
        bail!("test fraction {test_fraction} must lie in [0, 1)");
    }
    let series = read_series(&a.input)?;
    let label_text = fs::read_to_string(&a.labels).with_context(|| format!("cannot read {}", a.labels.display()))?;
    let segments = synthgen::parse_labels(&label_text)?;
    let windows = slide_windows(&series, spec)?;
    let truth: Vec<WindowTruth> = windows.iter().map(|w| window_truth(w.start_index, w.len(), &segments)).collect();

    let stroke_idx: Vec<usize> = (0..windows.len()).filter(|&i| matches!(truth[i], WindowTruth::Stroke(_))).collect();
    let labels: Vec<StrokeLabel> = stroke_idx
        .iter()
        .map(|&i| match truth[i] {
            WindowTruth::Stroke(l) => l,
            _ => unreachable!(),
        })
        .collect();
    let is_test = stratified_split(&labels, test_fraction, pick(a.split_seed, c.split_seed, 0));
    let mut split = vec![Split::None; windows.len()];
    for (&i, &t) in stroke_idx.iter().zip(&is_test) {
        split[i] = if t { Split::Test } else { Split::Train };
    }

    let gate_params = LinearSvmParams { c: pick(a.gate_c, c.gate_c, 1.0), ..Default::default() };
    let gate_set = strokekit::pipeline::gate_examples(&windows, &truth);
    let gate = segment::train_activation(&gate_set, &gate_params)?;
    let correct = gate_set.iter().filter(|(w, act)| segment::is_active(w, &gate) == *act).count();

    let rows: Vec<WindowRow> = windows
        .iter()
        .zip(&truth)
        .zip(&split)
        .map(|((w, &t), &s)| WindowRow { start: w.start_index, end: w.end_index(), truth: t, split: s })
        .collect();
    let windows_path = a.out.join("windows.csv");
    let gate_path = a.out.join("activation.json");
    write_out(&windows_path, &tables::write_windows(&rows)?)?;
    write_out(&gate_path, &to_json(&gate)?)?;
    let count = |f: &dyn Fn(&WindowTruth) -> bool| truth.iter().filter(|t| f(t)).count();
    Ok(json!({
        "command": "segment",
        "windows": rows.len(),
        "stroke_windows": stroke_idx.len(),
        "idle_windows": count(&|t| *t == WindowTruth::Idle),
        "mixed_windows": count(&|t| *t == WindowTruth::Mixed),
        "test_windows": is_test.iter().filter(|t| **t).count(),
        "gate_training_accuracy": correct as f64 / gate_set.len().max(1) as f64,
        "outputs": [path_str(&windows_path), path_str(&gate_path)],
    }))
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Cleaned series CSV
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub windows: PathBuf,
    /// Feature CSV
    #[arg(long)]
    pub out: PathBuf,
}

pub fn extract(a: &ExtractArgs, _c: &PipelineConfig) -> Outcome {
    let series = read_series(&a.input)?;
    let rows = tables::read_windows(&a.windows)?;
    let windows = rows.iter().map(|r| window_of(&series, r)).collect::<anyhow::Result<Vec<_>>>()?;
    let feats = feature_matrix(&windows)?;
    let out: Vec<FeatureRow> =
        rows.into_iter().zip(feats).map(|(window, values)| FeatureRow { window, values }).collect();
    write_out(&a.out, &tables::write_features(&out)?)?;
    Ok(json!({
        "command": "extract",
        "windows": out.len(),
        "features": out.first().map_or(0, |r| r.values.len()),
        "outputs": [path_str(&a.out)],
    }))
}

#[derive(Debug, Args)]
pub struct FitPcaArgs {
    #[arg(long)]
    pub features: PathBuf,
    /// PCA model JSON
    #[arg(long)]
    pub out: PathBuf,
    /// Cumulative contribution to retain
    #[arg(long)]
    pub retention: Option<f64>,
    #[arg(long)]
    pub no_standardize: bool,
}

fn training_rows(rows: &[FeatureRow], split: Split) -> Vec<(Vec<f64>, StrokeLabel)> {
    rows.iter()
        .filter(|r| r.window.split == split)
        .filter_map(|r| r.window.stroke().map(|l| (r.values.clone(), l)))
        .collect()
}

pub fn fit_pca_cmd(a: &FitPcaArgs, c: &PipelineConfig) -> Outcome {
    let opts = PcaOptions {
        retention: pick(a.retention, c.retention, PcaOptions::default().retention),
        standardize: !switch(a.no_standardize, c.no_standardize),
    };
    let rows = tables::read_features(&a.features)?;
    let train: Vec<Vec<f64>> = training_rows(&rows, Split::Train).into_iter().map(|(x, _)| x).collect();
    let model = fit_pca(&train, &opts)?;
    write_out(&a.out, &to_json(&model)?)?;
    let (_, cum) = contribution_rates(&model);
    Ok(json!({
        "command": "fit-pca",
        "rows": train.len(),
        "input_dim": model.input_dim(),
        "k": model.k,
        "cumulative": cum[model.k - 1],
        "outputs": [path_str(&a.out)],
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Dagsvm,
    Mlp,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub pca: PathBuf,
    /// Classifier JSON
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Gaussian kernel width; default 1 / (k · variance)
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub svm_c: Option<f64>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Seed for MLP initialisation and shuffling
    #[arg(long)]
    pub seed: Option<u64>,
}

fn model_kind(a: &TrainArgs, c: &PipelineConfig) -> anyhow::Result<ModelKind> {
    if let Some(k) = a.model {
        return Ok(k);
    }
    match c.model.as_deref() {
        None | Some("dagsvm") => Ok(ModelKind::Dagsvm),
        Some("mlp") => Ok(ModelKind::Mlp),
        Some(other) => bail!("unknown model `{other}` in config"),
    }
}

pub fn train(a: &TrainArgs, c: &PipelineConfig) -> Outcome {
    let kind = model_kind(a, c)?;
    let rows = tables::read_features(&a.features)?;
    let pca: PcaModel = read_json(&a.pca)?;
    let reduce = |set: Vec<(Vec<f64>, StrokeLabel)>| -> anyhow::Result<Vec<(Vec<f64>, StrokeLabel)>> {
        let xs: Vec<Vec<f64>> = set.iter().map(|(x, _)| x.clone()).collect();
        Ok(reduce_all(&pca, &xs)?.into_iter().zip(set.into_iter().map(|(_, y)| y)).collect())
    };
    let train = reduce(training_rows(&rows, Split::Train))?;
    let test = reduce(training_rows(&rows, Split::Test))?;
    if train.is_empty() {
        bail!("no training windows in {}", a.features.display());
    }
    let (model, extra) = match kind {
        ModelKind::Dagsvm => {
            let d = KernelSvmParams::default();
            let params = KernelSvmParams { c: pick(a.svm_c, c.svm_c, d.c), gamma: a.gamma.or(c.gamma), ..d };
            let dag = classify::train_dag(&train, &StrokeLabel::ALL, &params)?;
            let gamma = dag.models.first().map_or(0.0, |m| m.gamma);
            (Classifier::Dagsvm(dag), json!({ "gamma": gamma }))
        }
        ModelKind::Mlp => {
            let d = MlpTrainParams::default();
            let params = MlpTrainParams {
                lr: pick(a.lr, c.lr, d.lr),
                epochs: pick(a.epochs, c.epochs, d.epochs),
                seed: pick(a.seed, c.mlp_seed, d.seed),
                ..d
            };
            let init = classify::mlp_init(pca.k, params.seed)?;
            let report = classify::mlp_train(&init, &train, &params)?;
            let last = report.epoch_losses.last().copied().unwrap_or(f64::NAN);
            (Classifier::Mlp(report.model), json!({ "epochs": report.epoch_losses.len(), "final_loss": last }))
        }
    };
    write_out(&a.out, &to_json(&model)?)?;
    let mut correct = 0;
    for (x, y) in &test {
        if model.predict(x)? == *y {
            correct += 1;
        }
    }
    let accuracy = if test.is_empty() { Value::Null } else { json!(correct as f64 / test.len() as f64) };
    Ok(json!({
        "command": "train",
        "model": model.kind(),
        "train_windows": train.len(),
        "test_windows": test.len(),
        "test_accuracy": accuracy,
        "details": extra,
        "outputs": [path_str(&a.out)],
    }))
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Cleaned series CSV
    #[arg(long)]
    pub input: PathBuf,
    /// Activation gate JSON
    #[arg(long)]
    pub gate: PathBuf,
    #[arg(long)]
    pub pca: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Predictions CSV
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub overlap: Option<f64>,
}

pub fn predict(a: &PredictArgs, c: &PipelineConfig) -> Outcome {
    let spec = window_spec(a.window, a.overlap, c)?;
    let series = read_series(&a.input)?;
    let gate: LinearSvmModel = read_json(&a.gate)?;
    let pca: PcaModel = read_json(&a.pca)?;
    let model: Classifier = read_json(&a.model)?;
    let windows = slide_windows(&series, spec)?;
    let active: Vec<bool> = windows.iter().map(|w| segment::is_active(w, &gate)).collect();
    let gated: Vec<MotionWindow> = windows.iter().zip(&active).filter(|(_, a)| **a).map(|(w, _)| w.clone()).collect();
    let reduced = reduce_all(&pca, &feature_matrix(&gated)?)?;
    let mut labels = reduced.iter().map(|x| model.predict(x));
    let mut rows = Vec::with_capacity(windows.len());
    for (w, &act) in windows.iter().zip(&active) {
        let prediction = if act { Some(labels.next().expect("one label per active window")?) } else { None };
        rows.push(PredictionRow { start: w.start_index, end: w.end_index(), active: act, prediction });
    }
    write_out(&a.out, &tables::write_predictions(&rows)?)?;
    let mut per_class = BTreeMap::new();
    for l in rows.iter().filter_map(|r| r.prediction) {
        *per_class.entry(l.name()).or_insert(0usize) += 1;
    }
    Ok(json!({
        "command": "predict",
        "model": model.kind(),
        "windows": rows.len(),
        "active": gated.len(),
        "per_class": per_class,
        "outputs": [path_str(&a.out)],
    }))
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Cleaned series CSV
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub windows: PathBuf,
    /// Existing profiles JSON; built from the training windows when omitted
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Pairwise level comparison matrix as a JSON array of rows
    #[arg(long)]
    pub ahp: Option<PathBuf>,
    /// Score outside-interval values with 1 - exp(-d/k)
    #[arg(long)]
    pub complement_score: bool,
    /// Output directory for profiles.json, scores.csv and scores.json
    #[arg(long)]
    pub out: PathBuf,
}

pub fn evaluate(a: &EvaluateArgs, _c: &PipelineConfig) -> Outcome {
    let series = read_series(&a.input)?;
    let rows = tables::read_windows(&a.windows)?;
    let windows_of = |split: Split| -> anyhow::Result<Vec<MotionWindow>> {
        rows.iter().filter(|r| r.split == split && r.stroke().is_some()).map(|r| window_of(&series, r)).collect()
    };
    let mut outputs = Vec::new();
    let profiles: ProfileSet = match &a.profile {
        Some(p) => read_json(p)?,
        None => {
            let set = build_profiles(&windows_of(Split::Train)?)?;
            let path = a.out.join("profiles.json");
            write_out(&path, &to_json(&set)?)?;
            outputs.push(path_str(&path));
            set
        }
    };
    let matrix = match &a.ahp {
        Some(p) => read_json::<AhpMatrix>(p)?,
        None => AhpMatrix::level_comparison(),
    };
    let weights = ahp_weights(&matrix);
    let mode = if a.complement_score { IntervalMode::Complement } else { IntervalMode::Continuous };

    let mut csv = String::from("start_index,stroke");
    for name in LEVEL_NAMES {
        csv.push(',');
        csv.push_str(name);
    }
    csv.push_str(",total\n");
    let mut reports = Vec::new();
    for w in windows_of(Split::Test)? {
        let label = w.label.expect("stroke windows carry labels");
        let profile = profiles.get(&label).with_context(|| format!("no profile for {label}"))?;
        let r = score_window(&w, profile, &weights.weights, mode)?;
        csv.push_str(&format!("{},{}", w.start_index, label));
        for q in r.q {
            csv.push_str(&format!(",{q}"));
        }
        csv.push_str(&format!(",{}\n", r.total));
        reports.push(json!({ "start_index": w.start_index, "report": r }));
    }
    let csv_path = a.out.join("scores.csv");
    let json_path = a.out.join("scores.json");
    write_out(&csv_path, &csv)?;
    write_out(&json_path, &to_json(&json!({ "weights": weights, "scores": reports }))?)?;
    outputs.push(path_str(&csv_path));
    outputs.push(path_str(&json_path));
    let totals: Vec<f64> = reports.iter().filter_map(|r| r["report"]["total"].as_f64()).collect();
    let mean = if totals.is_empty() { Value::Null } else { json!(totals.iter().sum::<f64>() / totals.len() as f64) };
    Ok(json!({
        "command": "evaluate",
        "profiles": profiles.len(),
        "scored": totals.len(),
        "mean_total": mean,
        "consistency_ratio": weights.cr,
        "outputs": outputs,
    }))
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long)]
    pub windows: PathBuf,
    /// Output directory for metrics.json, confusion.csv and confusion.svg
    #[arg(long)]
    pub out: PathBuf,
    /// Recall weight of the F measure
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Include training windows, not only the held-out split
    #[arg(long)]
    pub all: bool,
}

#[derive(Serialize)]
struct FullReport {
    metrics: MetricsReport,
    /// Stroke windows the gate rejected, so never classified.
    missed_by_gate: usize,
    /// Idle windows the gate passed.
    false_activations: usize,
}

pub fn report(a: &ReportArgs, c: &PipelineConfig) -> Outcome {
    let cfg = FMeasureConfig::new(pick(a.alpha, c.alpha, metrics::DEFAULT_ALPHA))?;
    let windows = tables::read_windows(&a.windows)?;
    let preds: BTreeMap<usize, PredictionRow> =
        tables::read_predictions(&a.predictions)?.into_iter().map(|p| (p.start, p)).collect();
    let (mut truth, mut predicted) = (Vec::new(), Vec::new());
    let (mut missed, mut false_act) = (0, 0);
    for w in &windows {
        let Some(p) = preds.get(&w.start) else {
            bail!("no prediction for the window starting at {}", w.start);
        };
        match (w.truth, p.prediction) {
            (WindowTruth::Stroke(l), Some(q)) if a.all || w.split == Split::Test => {
                truth.push(l.code());
                predicted.push(q.code());
            }
            (WindowTruth::Stroke(_), None) if a.all || w.split == Split::Test => missed += 1,
            (WindowTruth::Idle, Some(_)) => false_act += 1,
            _ => {}
        }
    }
    let m = metrics::confusion(&truth, &predicted)?;
    let names = metrics::stroke_names();
    let full = FullReport { metrics: MetricsReport::new(&m, &names, &cfg), missed_by_gate: missed, false_activations: false_act };
    let json_path = a.out.join("metrics.json");
    let csv_path = a.out.join("confusion.csv");
    let svg_path = a.out.join("confusion.svg");
    write_out(&json_path, &to_json(&full)?)?;
    write_out(&csv_path, &m.to_csv(&names))?;
    write_out(&svg_path, &svg::heat_map(&m.counts, &names))?;
    Ok(json!({
        "command": "report",
        "evaluated": truth.len(),
        "accuracy": full.metrics.accuracy,
        "macro_f": full.metrics.macro_f,
        "alpha": cfg.alpha(),
        "missed_by_gate": missed,
        "false_activations": false_act,
        "outputs": [path_str(&json_path), path_str(&csv_path), path_str(&svg_path)],
    }))
}
