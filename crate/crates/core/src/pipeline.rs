//! Stage wiring shared by the CLI and the desk-scale experiments.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{self, ClassifyError, DagSvmModel, KernelSvmParams, MlpModel, MlpTrainParams};
use crate::features::{window_features, FeatureError};
use crate::label::StrokeLabel;
use crate::metrics::{self, FMeasureConfig, MetricsError, MetricsReport};
use crate::preprocess::{preprocess_series, PreprocessConfig, PreprocessError};
use crate::reduce::{fit_pca, transform, PcaModel, PcaOptions, ReduceError};
use crate::segment::{self, LinearSvmModel, LinearSvmParams, MotionWindow, SegmentError, WindowSpec};
use crate::synthgen::{self, GenConfig, Segment, SynthError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("{0}")]
    Data(String),
}

/// What a window covers according to the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowTruth {
    /// Exactly one whole stroke segment.
    Stroke(StrokeLabel),
    /// Lies entirely inside idle spans.
    Idle,
    /// Anything else: partial strokes, or a stroke plus idle.
    Mixed,
}

impl WindowTruth {
    pub fn name(&self) -> &'static str {
        match self {
            WindowTruth::Stroke(l) => l.name(),
            WindowTruth::Idle => "idle",
            WindowTruth::Mixed => "mixed",
        }
    }
}

/// Classifies the window `[start, start + width)` against sorted, contiguous segments.
pub fn window_truth(start: usize, width: usize, segments: &[Segment]) -> WindowTruth {
    let end = start + width;
    let mut overlapping = segments.iter().filter(|s| s.start < end && s.end > start);
    let mut all_idle = true;
    let mut exact = None;
    for s in overlapping.by_ref() {
        match s.label {
            None => {}
            Some(l) => {
                all_idle = false;
                if s.start == start && s.end == end {
                    exact = Some(l);
                } else {
                    return WindowTruth::Mixed;
                }
            }
        }
    }
    match exact {
        Some(l) => WindowTruth::Stroke(l),
        None if all_idle => WindowTruth::Idle,
        None => WindowTruth::Mixed,
    }
}

/// Seeded stratified split: for each class, `round(n · test_fraction)` of its
/// items go to the test side. Returns `true` for test items.
pub fn stratified_split(labels: &[StrokeLabel], test_fraction: f64, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut is_test = vec![false; labels.len()];
    for class in StrokeLabel::ALL {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        let n_test = (idx.len() as f64 * test_fraction).round() as usize;
        for &i in &idx[..n_test] {
            is_test[i] = true;
        }
    }
    is_test
}

/// Feature vectors of all windows, in input order.
pub fn feature_matrix(windows: &[MotionWindow]) -> Result<Vec<Vec<f64>>, FeatureError> {
    windows.par_iter().map(|w| window_features(w).map(|f| f.into_vec())).collect()
}

pub fn reduce_all(model: &PcaModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ReduceError> {
    rows.par_iter().map(|r| transform(model, r)).collect()
}

/// Gate training pairs: whole-stroke windows are active, idle windows are not.
pub fn gate_examples(windows: &[MotionWindow], truth: &[WindowTruth]) -> Vec<(MotionWindow, bool)> {
    windows
        .iter()
        .zip(truth)
        .filter_map(|(w, t)| match t {
            WindowTruth::Stroke(_) => Some((w.clone(), true)),
            WindowTruth::Idle => Some((w.clone(), false)),
            WindowTruth::Mixed => None,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeskConfig {
    pub gen: GenConfig,
    pub preprocess: PreprocessConfig,
    pub window: WindowSpec,
    pub pca: PcaOptions,
    pub gate: LinearSvmParams,
    pub svm: KernelSvmParams,
    pub mlp: MlpTrainParams,
    pub alpha: f64,
    pub test_fraction: f64,
    pub split_seed: u64,
}

impl Default for DeskConfig {
    fn default() -> Self {
        Self {
            gen: GenConfig::default(),
            preprocess: PreprocessConfig::default(),
            window: WindowSpec::default(),
            pca: PcaOptions::default(),
            gate: LinearSvmParams::default(),
            svm: KernelSvmParams::default(),
            mlp: MlpTrainParams::default(),
            alpha: metrics::DEFAULT_ALPHA,
            test_fraction: 0.2,
            split_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeskReport {
    pub gate: LinearSvmModel,
    /// Share of whole-stroke and idle windows the gate gets right.
    pub gate_accuracy: f64,
    pub pca: PcaModel,
    pub dag: DagSvmModel,
    pub mlp: MlpModel,
    pub mlp_epochs: usize,
    /// Held-out truth and predictions, as stroke codes.
    pub test_truth: Vec<usize>,
    pub dag_predictions: Vec<usize>,
    pub mlp_predictions: Vec<usize>,
    pub dag_metrics: MetricsReport,
    pub mlp_metrics: MetricsReport,
}

/// Generated windows with their ground truth, after preprocessing.
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    pub windows: Vec<MotionWindow>,
    pub truth: Vec<WindowTruth>,
}

impl PreparedCorpus {
    /// Whole-stroke windows, labelled, in stream order.
    pub fn stroke_windows(&self) -> Vec<MotionWindow> {
        self.windows
            .iter()
            .zip(&self.truth)
            .filter_map(|(w, t)| match t {
                WindowTruth::Stroke(l) => Some(w.clone().with_label(*l)),
                _ => None,
            })
            .collect()
    }
}

pub fn prepare_corpus(cfg: &DeskConfig) -> Result<PreparedCorpus, PipelineError> {
    let corpus = synthgen::generate(&cfg.gen)?;
    let clean = preprocess_series(&corpus.series, &cfg.preprocess)?;
    let windows = segment::slide_windows(&clean, cfg.window)?;
    let truth = windows.iter().map(|w| window_truth(w.start_index, w.len(), &corpus.segments)).collect();
    Ok(PreparedCorpus { windows, truth })
}

/// Synthesize, clean, segment, extract, reduce, train both classifiers and
/// score them on a held-out stratified split.
pub fn run_desk(cfg: &DeskConfig) -> Result<DeskReport, PipelineError> {
    run_desk_on(cfg, prepare_corpus(cfg)?)
}

/// [`run_desk`] from an already prepared corpus.
pub fn run_desk_on(cfg: &DeskConfig, corpus: PreparedCorpus) -> Result<DeskReport, PipelineError> {
    let PreparedCorpus { windows, truth } = corpus;

    let gate_set = gate_examples(&windows, &truth);
    let gate = segment::train_activation(&gate_set, &cfg.gate)?;
    let gate_correct = gate_set.iter().filter(|(w, a)| segment::is_active(w, &gate) == *a).count();
    let gate_accuracy = gate_correct as f64 / gate_set.len().max(1) as f64;

    let strokes: Vec<(MotionWindow, StrokeLabel)> = windows
        .into_iter()
        .zip(&truth)
        .filter_map(|(w, t)| match t {
            WindowTruth::Stroke(l) => Some((w.with_label(*l), *l)),
            _ => None,
        })
        .collect();
    let labels: Vec<StrokeLabel> = strokes.iter().map(|(_, l)| *l).collect();
    let stroke_windows: Vec<MotionWindow> = strokes.into_iter().map(|(w, _)| w).collect();
    let feats = feature_matrix(&stroke_windows)?;
    let is_test = stratified_split(&labels, cfg.test_fraction, cfg.split_seed);

    let train_rows: Vec<Vec<f64>> =
        feats.iter().zip(&is_test).filter(|(_, t)| !**t).map(|(f, _)| f.clone()).collect();
    let pca = fit_pca(&train_rows, &cfg.pca)?;
    let reduced = reduce_all(&pca, &feats)?;

    let mut train = Vec::new();
    let mut test = Vec::new();
    for ((x, &y), &t) in reduced.into_iter().zip(&labels).zip(&is_test) {
        if t { test.push((x, y)) } else { train.push((x, y)) }
    }
    if train.is_empty() || test.is_empty() {
        return Err(PipelineError::Data("train/test split left one side empty".into()));
    }

    let dag = classify::train_dag(&train, &StrokeLabel::ALL, &cfg.svm)?;
    let init = classify::mlp_init(pca.k, cfg.mlp.seed)?;
    let mlp_report = classify::mlp_train(&init, &train, &cfg.mlp)?;
    let mlp = mlp_report.model;

    let test_truth: Vec<usize> = test.iter().map(|(_, y)| y.code()).collect();
    let dag_predictions: Vec<usize> = test.iter().map(|(x, _)| dag.predict(x).code()).collect();
    let mlp_predictions =
        test.iter().map(|(x, _)| classify::mlp_predict(&mlp, x).map(|l| l.code())).collect::<Result<Vec<_>, _>>()?;

    let f_cfg = FMeasureConfig::new(cfg.alpha)?;
    let names = metrics::stroke_names();
    let dag_metrics = MetricsReport::new(&metrics::confusion(&test_truth, &dag_predictions)?, &names, &f_cfg);
    let mlp_metrics = MetricsReport::new(&metrics::confusion(&test_truth, &mlp_predictions)?, &names, &f_cfg);

    Ok(DeskReport {
        gate,
        gate_accuracy,
        pca,
        dag,
        mlp,
        mlp_epochs: mlp_report.epoch_losses.len(),
        test_truth,
        dag_predictions,
        mlp_predictions,
        dag_metrics,
        mlp_metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use StrokeLabel::*;

    fn segs() -> Vec<Segment> {
        vec![
            Segment { start: 0, end: 200, label: None },
            Segment { start: 200, end: 400, label: Some(ForehandPush) },
            Segment { start: 400, end: 500, label: None },
        ]
    }

    #[test]
    fn truth_of_windows() {
        let s = segs();
        assert_eq!(window_truth(0, 200, &s), WindowTruth::Idle);
        assert_eq!(window_truth(100, 200, &s), WindowTruth::Mixed);
        assert_eq!(window_truth(200, 200, &s), WindowTruth::Stroke(ForehandPush));
        assert_eq!(window_truth(300, 200, &s), WindowTruth::Mixed);
    }

    #[test]
    fn split_is_stratified_and_seeded() {
        let labels: Vec<StrokeLabel> = (0..600).map(|i| StrokeLabel::from_code(i % 6).unwrap()).collect();
        let a = stratified_split(&labels, 0.2, 5);
        assert_eq!(a, stratified_split(&labels, 0.2, 5));
        for c in StrokeLabel::ALL {
            assert_eq!(labels.iter().zip(&a).filter(|(l, t)| **l == c && **t).count(), 20);
        }
    }
}
