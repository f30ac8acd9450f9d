//! Standard profiles: pooled indicator statistics of a stroke's reference windows.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::indicators::{indicator_values, level_is_maximal, INDICATOR_COUNT};
use super::EvaluateError;
use crate::label::StrokeLabel;
use crate::segment::MotionWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicatorKind {
    Maximal,
    Interval,
}

/// Scoring parameters of one indicator. Maximal indicators use `center`,
/// `up` and `down`; interval indicators use `lo`, `hi`, `k1` and `k2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSpec {
    pub kind: IndicatorKind,
    pub center: f64,
    pub up: f64,
    pub down: f64,
    pub lo: f64,
    pub hi: f64,
    pub k1: f64,
    pub k2: f64,
}

/// Floor for ranges and loss coefficients.
pub fn eps_k(center: f64) -> f64 {
    1e-6 * center.abs().max(1.0)
}

/// Linear-interpolated percentile of sorted data, `q` in [0, 1].
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl IndicatorSpec {
    /// Pools one indicator's values over a reference set.
    pub fn from_values(kind: IndicatorKind, values: &[f64]) -> Self {
        let n = values.len() as f64;
        let center = values.iter().sum::<f64>() / n;
        let std = (values.iter().map(|v| (v - center).powi(2)).sum::<f64>() / n).sqrt();
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let eps = eps_k(center);
        let (mut down, mut up) = (sorted[0], sorted[sorted.len() - 1]);
        if up - down < eps {
            down = center - eps / 2.0;
            up = center + eps / 2.0;
        }
        let k = std.max(eps);
        Self {
            kind,
            center,
            up,
            down,
            lo: percentile(&sorted, 0.05),
            hi: percentile(&sorted, 0.95),
            k1: k,
            k2: k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardProfile {
    pub stroke: StrokeLabel,
    /// Level-major: strength, force direction, velocity, velocity direction,
    /// posture; x, y, z within each level.
    pub indicators: Vec<IndicatorSpec>,
}

/// Profiles of several strokes, persisted as a JSON object keyed by stroke.
pub type ProfileSet = BTreeMap<StrokeLabel, StandardProfile>;

/// Builds a profile from at least two reference windows of one stroke.
pub fn build_profile(reference: &[MotionWindow]) -> Result<StandardProfile, EvaluateError> {
    if reference.len() < 2 {
        return Err(EvaluateError::TooFew(reference.len()));
    }
    let stroke = reference[0].label.ok_or(EvaluateError::MixedLabels)?;
    if reference.iter().any(|w| w.label != Some(stroke)) {
        return Err(EvaluateError::MixedLabels);
    }
    let per_window: Vec<[f64; INDICATOR_COUNT]> = reference.iter().map(indicator_values).collect();
    let indicators = (0..INDICATOR_COUNT)
        .map(|i| {
            let values: Vec<f64> = per_window.iter().map(|v| v[i]).collect();
            let kind = if level_is_maximal(i / 3) { IndicatorKind::Maximal } else { IndicatorKind::Interval };
            IndicatorSpec::from_values(kind, &values)
        })
        .collect();
    Ok(StandardProfile { stroke, indicators })
}

/// One profile per stroke present among the labelled windows.
pub fn build_profiles(windows: &[MotionWindow]) -> Result<ProfileSet, EvaluateError> {
    let mut set = ProfileSet::new();
    for stroke in StrokeLabel::ALL {
        let group: Vec<MotionWindow> = windows.iter().filter(|w| w.label == Some(stroke)).cloned().collect();
        if !group.is_empty() {
            set.insert(stroke, build_profile(&group)?);
        }
    }
    Ok(set)
}
