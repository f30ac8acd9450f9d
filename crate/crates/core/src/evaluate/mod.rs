//! Hierarchical skill scoring.
//!
//! Each window is scored on five levels (strength, force direction, velocity,
//! velocity direction, posture) against a per-stroke [`StandardProfile`]. Level
//! scores are combined with AHP weights into a total in `[0, 1]`.

pub mod ahp;
pub mod indicators;
pub mod profile;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ahp::{ahp_weights, ahp_weights_with, AhpMatrix, AhpMethod, AhpWeights};
pub use indicators::{derive_velocity, indicator_values, LEVEL_COUNT, LEVEL_NAMES};
pub use profile::{build_profile, build_profiles, IndicatorKind, IndicatorSpec, ProfileSet, StandardProfile};

use crate::label::StrokeLabel;
use crate::segment::MotionWindow;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvaluateError {
    #[error("comparison matrix is not positive reciprocal: {0}")]
    NotReciprocal(String),
    #[error("reference windows must all carry the same stroke label")]
    MixedLabels,
    #[error("need at least 2 reference windows, got {0}")]
    TooFew(usize),
    #[error("indicator range up - down = {0} is degenerate")]
    DegenerateRange(f64),
    #[error("weights must be non-negative and sum to 1 (sum = {0})")]
    BadWeights(f64),
    #[error("level score {0} outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("profile is for {profile}, window is labelled {window}")]
    ProfileMismatch { profile: StrokeLabel, window: StrokeLabel },
    #[error("indicator kind does not match the scoring function")]
    WrongKind,
}

/// Outside-interval decay: the continuous exponential form, or the printed
/// `1 − e^{−d/k}` branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalMode {
    #[default]
    Continuous,
    Complement,
}

/// Logistic score `1 − 1/(1 + e^{(v − center)/(up − down)})`.
pub fn score_maximal(value: f64, spec: &IndicatorSpec) -> Result<f64, EvaluateError> {
    if spec.kind != IndicatorKind::Maximal {
        return Err(EvaluateError::WrongKind);
    }
    let range = spec.up - spec.down;
    if !(range >= 0.5 * profile::eps_k(spec.center)) {
        return Err(EvaluateError::DegenerateRange(range));
    }
    let z = (value - spec.center) / range;
    Ok(if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    })
}

/// 1 inside `[lo, hi]`, decaying with distance outside.
pub fn score_interval(value: f64, spec: &IndicatorSpec, mode: IntervalMode) -> Result<f64, EvaluateError> {
    if spec.kind != IndicatorKind::Interval {
        return Err(EvaluateError::WrongKind);
    }
    let (d, k) = if value < spec.lo {
        (spec.lo - value, spec.k1)
    } else if value > spec.hi {
        (value - spec.hi, spec.k2)
    } else {
        return Ok(1.0);
    };
    let decay = (-d / k).exp();
    Ok(match mode {
        IntervalMode::Continuous => decay,
        IntervalMode::Complement => 1.0 - decay,
    })
}

pub fn score_indicator(value: f64, spec: &IndicatorSpec, mode: IntervalMode) -> Result<f64, EvaluateError> {
    match spec.kind {
        IndicatorKind::Maximal => score_maximal(value, spec),
        IndicatorKind::Interval => score_interval(value, spec, mode),
    }
}

/// Equal-weight mean of the three axis scores of each level.
pub fn level_scores_from_values(
    values: &[f64; indicators::INDICATOR_COUNT],
    profile: &StandardProfile,
    mode: IntervalMode,
) -> Result<[f64; LEVEL_COUNT], EvaluateError> {
    let mut q = [0.0; LEVEL_COUNT];
    for (level, slot) in q.iter_mut().enumerate() {
        let mut sum = 0.0;
        for axis in 0..3 {
            let i = level * 3 + axis;
            let spec = &profile.indicators[i];
            if (spec.kind == IndicatorKind::Maximal) != indicators::level_is_maximal(level) {
                return Err(EvaluateError::WrongKind);
            }
            sum += score_indicator(values[i], spec, mode)?;
        }
        *slot = sum / 3.0;
    }
    Ok(q)
}

pub fn level_scores(
    window: &MotionWindow,
    profile: &StandardProfile,
    mode: IntervalMode,
) -> Result<[f64; LEVEL_COUNT], EvaluateError> {
    if let Some(label) = window.label {
        if label != profile.stroke {
            return Err(EvaluateError::ProfileMismatch { profile: profile.stroke, window: label });
        }
    }
    level_scores_from_values(&indicator_values(window), profile, mode)
}

/// `Σ Kᵢ Qᵢ`.
pub fn total_score(q: &[f64], k: &[f64]) -> Result<f64, EvaluateError> {
    let sum: f64 = k.iter().sum();
    if q.len() != k.len() || k.iter().any(|w| !(*w >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
        return Err(EvaluateError::BadWeights(sum));
    }
    if let Some(&bad) = q.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(EvaluateError::ScoreOutOfRange(bad));
    }
    Ok(q.iter().zip(k).map(|(a, b)| a * b).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub stroke: StrokeLabel,
    pub q: [f64; LEVEL_COUNT],
    pub total: f64,
    pub weights: Vec<f64>,
}

/// Scores one window against a profile with the given level weights.
pub fn score_window(
    window: &MotionWindow,
    profile: &StandardProfile,
    weights: &[f64],
    mode: IntervalMode,
) -> Result<ScoreReport, EvaluateError> {
    let q = level_scores(window, profile, mode)?;
    let total = total_score(&q, weights)?;
    Ok(ScoreReport { stroke: profile.stroke, q, total, weights: weights.to_vec() })
}
