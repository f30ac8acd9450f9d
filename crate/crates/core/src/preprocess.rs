//! Per-channel signal cleaning: 3σ first-difference outlier removal, cubic
//! Newton interpolation of missing samples, and adaptive exponential smoothing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{IngestError, SampleFrame, SensorSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PreprocessError {
    #[error("channel too short: {0} present samples, need at least 2")]
    TooShort(usize),
    #[error("not enough known samples to interpolate position {index}: found {found}, need 4")]
    InsufficientSupport { index: usize, found: usize },
    #[error("channel still has {0} missing samples")]
    Gaps(usize),
    #[error("invalid filter parameters: k0={k0}, delta_a={delta_a}")]
    BadFilter { k0: f64, delta_a: f64 },
    #[error("malformed channel: {0}")]
    Malformed(&'static str),
    #[error(transparent)]
    Series(#[from] IngestError),
}

/// One scalar channel with sample positions and a known/missing mask.
/// Missing samples hold NaN in `values`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSeries {
    values: Vec<f64>,
    positions: Vec<f64>,
    present: Vec<bool>,
}

impl ChannelSeries {
    pub fn new(values: Vec<f64>, positions: Vec<f64>, present: Vec<bool>) -> Result<Self, PreprocessError> {
        if values.len() != positions.len() || values.len() != present.len() {
            return Err(PreprocessError::Malformed("length mismatch"));
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(PreprocessError::Malformed("positions not strictly increasing"));
        }
        let values = values
            .into_iter()
            .zip(&present)
            .map(|(v, &p)| if p { v } else { f64::NAN })
            .collect();
        Ok(Self { values, positions, present })
    }

    /// Gap-free channel at integer positions 0..n.
    pub fn from_values(values: Vec<f64>) -> Self {
        let n = values.len();
        Self { values, positions: (0..n).map(|i| i as f64).collect(), present: vec![true; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn present(&self) -> &[bool] {
        &self.present
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn missing_count(&self) -> usize {
        self.present.iter().filter(|p| !**p).count()
    }

    pub fn is_gap_free(&self) -> bool {
        self.present.iter().all(|p| *p)
    }

    pub fn mark_missing(&mut self, i: usize) {
        self.present[i] = false;
        self.values[i] = f64::NAN;
    }

    fn present_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.present[i]).collect()
    }
}

/// Mean and standard deviation of the first differences of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffStats {
    pub ex: f64,
    pub sigma: f64,
}

impl DiffStats {
    /// Tolerance below which σ is treated as zero.
    pub fn sigma_floor(&self) -> f64 {
        1e-12 * self.ex.abs().max(1.0)
    }

    /// True when `x` lies outside the open interval (EX − 3σ, EX + 3σ).
    pub fn is_abnormal(&self, x: f64) -> bool {
        x <= self.ex - 3.0 * self.sigma || x >= self.ex + 3.0 * self.sigma
    }
}

/// First differences between consecutive present samples.
fn first_differences(channel: &ChannelSeries, idx: &[usize]) -> Vec<f64> {
    idx.windows(2).map(|w| channel.values[w[1]] - channel.values[w[0]]).collect()
}

fn stats_of(diffs: &[f64]) -> DiffStats {
    let count = diffs.len() as f64;
    let ex = diffs.iter().sum::<f64>() / count;
    let var = diffs.iter().map(|d| (d - ex) * (d - ex)).sum::<f64>() / count;
    DiffStats { ex, sigma: var.sqrt() }
}

/// EX and σ of the first differences. Differences are taken between
/// consecutive present samples, so a channel with gaps is treated as its
/// compacted known sequence.
pub fn diff_stats(channel: &ChannelSeries) -> Result<DiffStats, PreprocessError> {
    let idx = channel.present_indices();
    if idx.len() < 2 {
        return Err(PreprocessError::TooShort(idx.len()));
    }
    Ok(stats_of(&first_differences(channel, &idx)))
}

/// Indices of the samples that the 3σ rule removes: for every abnormal
/// difference `x[i+1] - x[i]` the later sample `x[i+1]` is flagged.
pub fn outlier_indices(channel: &ChannelSeries) -> Result<Vec<usize>, PreprocessError> {
    let idx = channel.present_indices();
    if idx.len() < 2 {
        return Err(PreprocessError::TooShort(idx.len()));
    }
    let diffs = first_differences(channel, &idx);
    let stats = stats_of(&diffs);
    if stats.sigma < stats.sigma_floor() {
        return Ok(Vec::new());
    }
    Ok(diffs
        .iter()
        .enumerate()
        .filter(|(_, &d)| stats.is_abnormal(d))
        .map(|(k, _)| idx[k + 1])
        .collect())
}

/// Marks 3σ outliers as missing.
pub fn remove_outliers(channel: &ChannelSeries) -> Result<ChannelSeries, PreprocessError> {
    let mut out = channel.clone();
    for i in outlier_indices(channel)? {
        out.mark_missing(i);
    }
    Ok(out)
}

/// Third-order Newton polynomial through four nodes, evaluated at `x`.
/// Builds the divided-difference table and evaluates the nested form.
pub fn newton_cubic(nodes: &[(f64, f64); 4], x: f64) -> f64 {
    let xs = [nodes[0].0, nodes[1].0, nodes[2].0, nodes[3].0];
    let mut dd = [nodes[0].1, nodes[1].1, nodes[2].1, nodes[3].1];
    // after pass `order`, dd[i] holds f[x_{i-order}, ..., x_i]
    for order in 1..4 {
        for i in (order..4).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - order]);
        }
    }
    // N3(x) = f0 + f01 (x-x0) + f012 (x-x0)(x-x1) + f0123 (x-x0)(x-x1)(x-x2)
    let mut acc = dd[3];
    for i in (0..3).rev() {
        acc = acc * (x - xs[i]) + dd[i];
    }
    acc
}

/// Nearest four known samples around `j`, ties going to the left.
fn nearest_known(values: &[f64], known: &[bool], positions: &[f64], j: usize) -> Vec<usize> {
    let mut picked = Vec::with_capacity(4);
    let mut left = (0..j).rev().filter(|&i| known[i]).peekable();
    let mut right = (j + 1..values.len()).filter(|&i| known[i]).peekable();
    while picked.len() < 4 {
        let choice = match (left.peek(), right.peek()) {
            (Some(&l), Some(&r)) => {
                if positions[j] - positions[l] <= positions[r] - positions[j] {
                    left.next()
                } else {
                    right.next()
                }
            }
            (Some(_), None) => left.next(),
            (None, Some(_)) => right.next(),
            (None, None) => break,
        };
        picked.extend(choice);
    }
    picked.sort_unstable();
    picked
}

/// Fills every missing sample with the cubic Newton interpolant through its
/// four nearest known samples. Gaps are filled left to right and filled
/// values serve as support for later positions.
pub fn newton_fill(channel: &ChannelSeries) -> Result<ChannelSeries, PreprocessError> {
    let mut values = channel.values.clone();
    let mut known = channel.present.clone();
    let available = known.iter().filter(|k| **k).count();
    for j in 0..values.len() {
        if known[j] {
            continue;
        }
        if available < 4 {
            return Err(PreprocessError::InsufficientSupport { index: j, found: available });
        }
        let support = nearest_known(&values, &known, &channel.positions, j);
        let nodes = [
            (channel.positions[support[0]], values[support[0]]),
            (channel.positions[support[1]], values[support[1]]),
            (channel.positions[support[2]], values[support[2]]),
            (channel.positions[support[3]], values[support[3]]),
        ];
        values[j] = newton_cubic(&nodes, channel.positions[j]);
        known[j] = true;
    }
    Ok(ChannelSeries {
        values,
        positions: channel.positions.clone(),
        present: vec![true; channel.len()],
    })
}

/// Parameters of the adaptive smoothing filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterState {
    pub k0: f64,
    pub delta_a: f64,
    pub y_prev: Option<f64>,
}

impl FilterState {
    pub fn new(k0: f64, delta_a: f64) -> Result<Self, PreprocessError> {
        if !(0.0..=1.0).contains(&k0) || !(delta_a > 0.0 && delta_a.is_finite()) {
            return Err(PreprocessError::BadFilter { k0, delta_a });
        }
        Ok(Self { k0, delta_a, y_prev: None })
    }

    /// Filter coefficient for the next step given the last output.
    fn coefficient(&self, x: f64, y_prev: f64) -> f64 {
        let provisional = self.k0 * x + (1.0 - self.k0) * y_prev;
        let delta = (provisional - y_prev).abs();
        if delta > self.delta_a {
            ((1.0 - self.delta_a / delta) * self.k0).clamp(0.0, self.k0)
        } else {
            0.0
        }
    }

    /// Advances the filter by one input sample and returns the output.
    pub fn step(&mut self, x: f64) -> f64 {
        let y = match self.y_prev {
            None => x,
            Some(prev) => {
                let m = self.coefficient(x, prev);
                m * x + (1.0 - m) * prev
            }
        };
        self.y_prev = Some(y);
        y
    }
}

/// Runs the adaptive filter over a gap-free channel. The first output equals
/// the first input unless `state` already carries a previous output.
pub fn adaptive_filter(channel: &ChannelSeries, state: &FilterState) -> Result<ChannelSeries, PreprocessError> {
    if !channel.is_gap_free() {
        return Err(PreprocessError::Gaps(channel.missing_count()));
    }
    let mut st = *state;
    let values = channel.values.iter().map(|&x| st.step(x)).collect();
    Ok(ChannelSeries { values, positions: channel.positions.clone(), present: channel.present.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub k0: f64,
    /// Motion-state threshold; `None` derives it per channel as
    /// `delta_a_fraction` of the channel's peak-valley range.
    pub delta_a: Option<f64>,
    pub delta_a_fraction: f64,
    pub remove_outliers: bool,
    pub filter: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self { k0: 0.3, delta_a: None, delta_a_fraction: 0.05, remove_outliers: true, filter: true }
    }
}

impl PreprocessConfig {
    fn threshold_for(&self, values: &[f64]) -> f64 {
        match self.delta_a {
            Some(d) => d,
            None => {
                let (lo, hi) = values
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                (self.delta_a_fraction * (hi - lo)).max(1e-12)
            }
        }
    }
}

/// Outlier removal, gap fill and smoothing, in that order.
pub fn preprocess_channel(channel: &ChannelSeries, cfg: &PreprocessConfig) -> Result<ChannelSeries, PreprocessError> {
    let cleaned = if cfg.remove_outliers { remove_outliers(channel)? } else { channel.clone() };
    let filled = if cleaned.is_gap_free() { cleaned } else { newton_fill(&cleaned)? };
    if !cfg.filter {
        return Ok(filled);
    }
    let state = FilterState::new(cfg.k0, cfg.threshold_for(&filled.values))?;
    adaptive_filter(&filled, &state)
}

/// Cleans all nine channels of a series and re-grids it: frames implied
/// missing by timestamp gaps are inserted and interpolated, so the result is
/// uniformly sampled.
pub fn preprocess_series(series: &SensorSeries, cfg: &PreprocessConfig) -> Result<SensorSeries, PreprocessError> {
    let period = series.sample_period();
    let frames = series.frames();
    let mut slots: Vec<Option<usize>> = Vec::with_capacity(frames.len());
    let mut times: Vec<f64> = Vec::with_capacity(frames.len());
    for (i, f) in frames.iter().enumerate() {
        if i > 0 {
            let steps = ((f.t - frames[i - 1].t) / period).round().max(1.0) as usize;
            for k in 1..steps {
                slots.push(None);
                times.push(frames[i - 1].t + k as f64 * period);
            }
        }
        slots.push(Some(i));
        times.push(f.t);
    }
    let positions: Vec<f64> = (0..slots.len()).map(|i| i as f64).collect();
    let present: Vec<bool> = slots.iter().map(Option::is_some).collect();

    let channels: Vec<Vec<f64>> = (0..9)
        .into_par_iter()
        .map(|c| {
            let values = slots.iter().map(|s| s.map_or(f64::NAN, |i| frames[i].channel(c))).collect();
            let ch = ChannelSeries::new(values, positions.clone(), present.clone())?;
            Ok(preprocess_channel(&ch, cfg)?.values)
        })
        .collect::<Result<_, PreprocessError>>()?;

    let out = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut f = SampleFrame::new(t, [0.0; 3], [0.0; 3], [0.0; 3]);
            for (c, ch) in channels.iter().enumerate() {
                f.set_channel(c, ch[i]);
            }
            f
        })
        .collect();
    Ok(SensorSeries::new(out, period)?)
}
