//! Confusion matrices, per-class precision and recall, and the α-weighted F
//! measure `2TP / (2TP + 2α·FN + 2(1−α)·FP)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::StrokeLabel;

pub const DEFAULT_ALPHA: f64 = 0.7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("label lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("label {0} outside 0..{1}")]
    BadLabel(usize, usize),
    #[error("alpha must lie in [0, 1], got {0}")]
    BadAlpha(f64),
}

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(classes: usize) -> Self {
        Self { counts: vec![vec![0; classes]; classes] }
    }

    pub fn classes(&self) -> usize {
        self.counts.len()
    }

    pub fn tp(&self, class: usize) -> u64 {
        self.counts[class][class]
    }

    /// Predicted as `class` but truly another.
    pub fn fp(&self, class: usize) -> u64 {
        (0..self.classes()).filter(|&t| t != class).map(|t| self.counts[t][class]).sum()
    }

    /// Truly `class` but predicted as another.
    pub fn fn_(&self, class: usize) -> u64 {
        (0..self.classes()).filter(|&p| p != class).map(|p| self.counts[class][p]).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (0..self.classes()).map(|c| self.tp(c)).sum::<u64>() as f64 / total as f64
    }

    /// Heat-map dump: a header of predicted labels, then one row per true label.
    pub fn to_csv(&self, names: &[String]) -> String {
        let mut out = String::from("true\\predicted");
        for n in names {
            let _ = write!(out, ",{n}");
        }
        out.push('\n');
        for (row, name) in self.counts.iter().zip(names) {
            out.push_str(name);
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Counts `(true, predicted)` code pairs over `classes` classes.
pub fn confusion_n(classes: usize, truth: &[usize], predicted: &[usize]) -> Result<ConfusionMatrix, MetricsError> {
    if truth.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch(truth.len(), predicted.len()));
    }
    let mut m = ConfusionMatrix::new(classes);
    for (&t, &p) in truth.iter().zip(predicted) {
        for v in [t, p] {
            if v >= classes {
                return Err(MetricsError::BadLabel(v, classes));
            }
        }
        m.counts[t][p] += 1;
    }
    Ok(m)
}

/// Six-class confusion matrix over stroke codes.
pub fn confusion(truth: &[usize], predicted: &[usize]) -> Result<ConfusionMatrix, MetricsError> {
    confusion_n(StrokeLabel::COUNT, truth, predicted)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `(TP/(TP+FP), TP/(TP+FN))`, zero when a denominator is zero.
pub fn precision_recall(m: &ConfusionMatrix, class: usize) -> (f64, f64) {
    let tp = m.tp(class) as f64;
    (ratio(tp, tp + m.fp(class) as f64), ratio(tp, tp + m.fn_(class) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FMeasureConfig {
    alpha: f64,
}

impl FMeasureConfig {
    pub fn new(alpha: f64) -> Result<Self, MetricsError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(MetricsError::BadAlpha(alpha));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for FMeasureConfig {
    fn default() -> Self {
        Self { alpha: DEFAULT_ALPHA }
    }
}

/// Weighted F measure from raw counts.
pub fn f_measure_counts(tp: f64, fn_: f64, fp: f64, alpha: f64) -> f64 {
    ratio(2.0 * tp, 2.0 * tp + 2.0 * alpha * fn_ + 2.0 * (1.0 - alpha) * fp)
}

pub fn f_measure(m: &ConfusionMatrix, class: usize, cfg: &FMeasureConfig) -> f64 {
    f_measure_counts(m.tp(class) as f64, m.fn_(class) as f64, m.fp(class) as f64, cfg.alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: String,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub alpha: f64,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f: f64,
    pub matrix: ConfusionMatrix,
}

impl MetricsReport {
    pub fn new(m: &ConfusionMatrix, names: &[String], cfg: &FMeasureConfig) -> Self {
        let per_class: Vec<ClassMetrics> = (0..m.classes())
            .map(|c| {
                let (precision, recall) = precision_recall(m, c);
                ClassMetrics { label: names[c].clone(), precision, recall, f: f_measure(m, c, cfg) }
            })
            .collect();
        let n = per_class.len().max(1) as f64;
        Self {
            alpha: cfg.alpha,
            accuracy: m.accuracy(),
            macro_precision: per_class.iter().map(|c| c.precision).sum::<f64>() / n,
            macro_recall: per_class.iter().map(|c| c.recall).sum::<f64>() / n,
            macro_f: per_class.iter().map(|c| c.f).sum::<f64>() / n,
            per_class,
            matrix: m.clone(),
        }
    }
}

pub fn stroke_names() -> Vec<String> {
    StrokeLabel::ALL.iter().map(|l| l.name().to_string()).collect()
}
