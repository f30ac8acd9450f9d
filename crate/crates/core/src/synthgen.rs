//! Seeded synthetic six-stroke IMU streams.
//!
//! Each stroke is a 200-sample template built from Hann-windowed sinusoids
//! whose axis mix, sign, frequency and phase differ per class (see
//! [`TEMPLATE_TABLE`]). Strokes are separated by idle spans of 100-sample
//! blocks, so every stroke starts on a multiple of 100 and lines up with
//! the default 200/100 sliding windows.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{SampleFrame, SensorSeries};
use crate::label::StrokeLabel;

pub const TEMPLATE_LEN: usize = 200;
/// Idle spans are whole multiples of this many samples.
pub const IDLE_BLOCK: usize = TEMPLATE_LEN / 2;
pub const GRAVITY: f64 = 9.81;
pub const ACC_SCALE: f64 = 20.0;
pub const GYRO_SCALE: f64 = 500.0;
pub const ANGLE_SCALE: f64 = 60.0;
/// Resting Euler angles, degrees.
pub const REST_ANGLE: [f64; 3] = [0.0, 0.0, 0.0];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid generator config: {0}")]
    BadConfig(String),
}

/// Per-class waveform parameters. Axis weights carry the sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemplateParams {
    pub acc: [f64; 3],
    pub gyro: [f64; 3],
    /// Peak posture excursion per axis, in units of [`ANGLE_SCALE`].
    pub posture: [f64; 3],
    /// Oscillation cycles over the stroke.
    pub cycles: f64,
    pub phase: f64,
}

/// Indexed by stroke code.
pub const TEMPLATE_TABLE: [TemplateParams; 6] = [
    // forehand attack: fast, x-dominant, strong yaw
    TemplateParams { acc: [1.0, 0.3, 0.2], gyro: [0.2, 0.3, 1.0], posture: [0.2, 0.4, 0.8], cycles: 1.0, phase: 0.0 },
    // backhand attack: mirrored forehand attack
    TemplateParams { acc: [-1.0, 0.4, -0.2], gyro: [-0.3, 0.2, -1.0], posture: [-0.3, 0.2, -0.8], cycles: 1.5, phase: 0.5 },
    // forehand push: slow, y-dominant
    TemplateParams { acc: [0.3, 0.6, 0.1], gyro: [0.5, 0.2, 0.1], posture: [0.5, -0.2, 0.1], cycles: 0.5, phase: 0.0 },
    // backhand push
    TemplateParams { acc: [-0.2, -0.6, 0.2], gyro: [-0.4, 0.3, 0.2], posture: [-0.5, -0.3, 0.2], cycles: 1.0, phase: 1.0 },
    // forehand chop: downward z swing
    TemplateParams { acc: [0.2, 0.2, -0.8], gyro: [0.1, 0.8, 0.3], posture: [0.1, 0.7, -0.3], cycles: 2.0, phase: 0.25 },
    // backhand chop
    TemplateParams { acc: [-0.3, 0.1, 0.8], gyro: [0.2, -0.8, -0.3], posture: [0.3, -0.6, 0.4], cycles: 2.5, phase: 1.5 },
];

/// Amplitude scale of each of the nine raw channels.
pub fn channel_scale(c: usize) -> f64 {
    match c / 3 {
        0 => ACC_SCALE,
        1 => GYRO_SCALE,
        _ => ANGLE_SCALE,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    pub seed: u64,
    pub strokes_per_class: usize,
    /// Noise σ as a fraction of each channel's amplitude scale.
    pub noise_sigma: f64,
    pub spike_rate: f64,
    pub dropout_rate: f64,
    /// Target share of the timeline spent idle.
    pub idle_fraction: f64,
    /// Stroke duration in seconds; the sample period is `period / 200`.
    pub period: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            strokes_per_class: 100,
            noise_sigma: 0.05,
            spike_rate: 0.001,
            dropout_rate: 0.001,
            idle_fraction: 0.4,
            period: 2.0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let unit = |name: &str, v: f64| {
            if (0.0..1.0).contains(&v) {
                Ok(())
            } else {
                Err(SynthError::BadConfig(format!("{name} = {v} must lie in [0, 1)")))
            }
        };
        unit("spike_rate", self.spike_rate)?;
        unit("dropout_rate", self.dropout_rate)?;
        unit("idle_fraction", self.idle_fraction)?;
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(SynthError::BadConfig(format!("noise_sigma = {} must be >= 0", self.noise_sigma)));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(SynthError::BadConfig(format!("period = {} must be > 0", self.period)));
        }
        if self.strokes_per_class == 0 {
            return Err(SynthError::BadConfig("strokes_per_class must be positive".into()));
        }
        Ok(())
    }

    pub fn sample_period(&self) -> f64 {
        self.period / TEMPLATE_LEN as f64
    }
}

/// `[start, end)` in grid indices; `label` is `None` for idle spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub label: Option<StrokeLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub series: SensorSeries,
    pub segments: Vec<Segment>,
}

impl SynthCorpus {
    pub fn strokes(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.label.is_some())
    }
}

/// Noiseless template of one stroke: `[channel][sample]`, nine raw channels.
pub fn template(label: StrokeLabel) -> [Vec<f64>; 9] {
    let p = &TEMPLATE_TABLE[label.code()];
    let mut out: [Vec<f64>; 9] = Default::default();
    for i in 0..TEMPLATE_LEN {
        let u = i as f64 / TEMPLATE_LEN as f64;
        let env = (PI * u).sin().powi(2);
        let arg = 2.0 * PI * p.cycles * u + p.phase;
        for axis in 0..3 {
            let g = if axis == 2 { GRAVITY } else { 0.0 };
            out[axis].push(g + ACC_SCALE * p.acc[axis] * env * arg.sin());
            out[3 + axis].push(GYRO_SCALE * p.gyro[axis] * env * arg.cos());
            out[6 + axis].push(REST_ANGLE[axis] + ANGLE_SCALE * p.posture[axis] * env);
        }
    }
    out
}

fn idle_value(c: usize) -> f64 {
    match c {
        2 => GRAVITY,
        6..=8 => REST_ANGLE[c - 6],
        _ => 0.0,
    }
}

/// Lays out a shuffled stroke order with at least one idle block before,
/// between and after strokes. Returns the block plan as segments.
fn plan(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Vec<Segment> {
    let mut order: Vec<StrokeLabel> =
        StrokeLabel::ALL.iter().flat_map(|&l| std::iter::repeat_n(l, cfg.strokes_per_class)).collect();
    order.shuffle(rng);
    let n = order.len();
    let stroke_blocks = 2 * n;
    let target = (cfg.idle_fraction * stroke_blocks as f64 / (1.0 - cfg.idle_fraction)).ceil() as usize;
    let gaps = n + 1;
    let mut idle = vec![1usize; gaps];
    for _ in 0..target.saturating_sub(gaps) {
        idle[rng.random_range(0..gaps)] += 1;
    }
    let mut segments = Vec::with_capacity(2 * n + 1);
    let mut pos = 0;
    for (g, &blocks) in idle.iter().enumerate() {
        let len = blocks * IDLE_BLOCK;
        segments.push(Segment { start: pos, end: pos + len, label: None });
        pos += len;
        if let Some(&label) = order.get(g) {
            segments.push(Segment { start: pos, end: pos + TEMPLATE_LEN, label: Some(label) });
            pos += TEMPLATE_LEN;
        }
    }
    segments
}

/// Generates the corpus. Identical configs give identical output.
pub fn generate(cfg: &GenConfig) -> Result<SynthCorpus, SynthError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let segments = plan(cfg, &mut rng);
    let total = segments.last().map_or(0, |s| s.end);
    let dt = cfg.sample_period();

    let templates: Vec<[Vec<f64>; 9]> = StrokeLabel::ALL.iter().map(|&l| template(l)).collect();
    let mut channels: Vec<Vec<f64>> = vec![Vec::with_capacity(total); 9];
    for seg in &segments {
        for i in 0..seg.end - seg.start {
            for (c, ch) in channels.iter_mut().enumerate() {
                ch.push(match seg.label {
                    Some(l) => templates[l.code()][c][i],
                    None => idle_value(c),
                });
            }
        }
    }

    // noise, then spikes, in row-major order so the stream is stable
    let mut frames = Vec::with_capacity(total);
    for i in 0..total {
        let mut v = [0.0; 9];
        for c in 0..9 {
            let z: f64 = rng.sample(StandardNormal);
            v[c] = channels[c][i] + cfg.noise_sigma * channel_scale(c) * z;
        }
        if cfg.spike_rate > 0.0 && rng.random::<f64>() < cfg.spike_rate {
            let c = rng.random_range(0..9);
            let mag = rng.random_range(10.0..=50.0) * channel_scale(c);
            v[c] += if rng.random::<bool>() { mag } else { -mag };
        }
        let keep = cfg.dropout_rate == 0.0
            || i == 0
            || i + 1 == total
            || rng.random::<f64>() >= cfg.dropout_rate;
        if keep {
            frames.push(SampleFrame::new(
                i as f64 * dt,
                [v[0], v[1], v[2]],
                [v[3], v[4], v[5]],
                [v[6], v[7], v[8]],
            ));
        }
    }
    let series = SensorSeries::new(frames, dt).map_err(|e| SynthError::BadConfig(e.to_string()))?;
    Ok(SynthCorpus { series, segments })
}

pub const LABELS_HEADER: &str = "start_index,end_index,label";

/// Sidecar CSV: one row per segment, `end_index` exclusive, `idle` for idle spans.
pub fn labels_to_csv(segments: &[Segment]) -> String {
    let mut out = String::from(LABELS_HEADER);
    out.push('\n');
    for s in segments {
        let label = s.label.map_or("idle", |l| l.name());
        let _ = writeln!(out, "{},{},{}", s.start, s.end, label);
    }
    out
}

pub fn parse_labels(text: &str) -> Result<Vec<Segment>, SynthError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(LABELS_HEADER) {
        return Err(SynthError::BadConfig(format!("labels file must start with `{LABELS_HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || SynthError::BadConfig(format!("labels row {}: `{line}`", i + 2));
            let parts: Vec<&str> = line.trim().split(',').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let start = parts[0].parse().map_err(|_| bad())?;
            let end = parts[1].parse().map_err(|_| bad())?;
            let label = if parts[2] == "idle" { None } else { Some(parts[2].parse().map_err(|_| bad())?) };
            if end <= start {
                return Err(bad());
            }
            Ok(Segment { start, end, label })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> GenConfig {
        GenConfig { seed, strokes_per_class: 4, ..Default::default() }
    }

    #[test]
    fn same_config_same_output() {
        let a = generate(&small(3)).unwrap();
        let b = generate(&small(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.series.to_csv(), b.series.to_csv());
        assert_ne!(a.series, generate(&small(4)).unwrap().series);
    }

    #[test]
    fn noiseless_segments_equal_templates() {
        let cfg = GenConfig { noise_sigma: 0.0, spike_rate: 0.0, dropout_rate: 0.0, ..small(1) };
        let c = generate(&cfg).unwrap();
        for seg in c.strokes() {
            let t = template(seg.label.unwrap());
            for ch in 0..9 {
                let got = &c.series.channel(ch)[seg.start..seg.end];
                assert_eq!(got, t[ch].as_slice());
            }
        }
    }

    #[test]
    fn layout_is_contiguous_and_block_aligned() {
        let c = generate(&small(5)).unwrap();
        assert_eq!(c.segments[0].start, 0);
        for w in c.segments.windows(2) {
            assert_eq!(w[0].end, w[1].start);
            assert!(!(w[0].label.is_some() && w[1].label.is_some()));
        }
        assert!(c.segments.iter().all(|s| s.start % IDLE_BLOCK == 0));
        assert_eq!(c.strokes().count(), 24);
        for l in StrokeLabel::ALL {
            assert_eq!(c.strokes().filter(|s| s.label == Some(l)).count(), 4);
        }
    }

    #[test]
    fn rejects_bad_rates() {
        for cfg in [
            GenConfig { spike_rate: 1.0, ..Default::default() },
            GenConfig { dropout_rate: -0.1, ..Default::default() },
            GenConfig { period: 0.0, ..Default::default() },
        ] {
            assert!(matches!(generate(&cfg), Err(SynthError::BadConfig(_))));
        }
    }

    #[test]
    fn labels_csv_round_trip() {
        let c = generate(&small(2)).unwrap();
        assert_eq!(parse_labels(&labels_to_csv(&c.segments)).unwrap(), c.segments);
    }
}
