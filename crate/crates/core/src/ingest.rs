//! CSV ingestion of timestamped 9-channel IMU streams.
//!
//! Layout: optional `#` comment lines (a `# period=<seconds>` comment sets the
//! nominal sample period), the header `t,ax,ay,az,gx,gy,gz,rx,ry,rz`, then one
//! frame per row. Acceleration is in m/s², angular rate in deg/s and Euler
//! angles in degrees.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_SAMPLE_PERIOD: f64 = 0.01;

pub const CSV_HEADER: [&str; 10] = ["t", "ax", "ay", "az", "gx", "gy", "gz", "rx", "ry", "rz"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("empty input: no data rows")]
    EmptyInput,
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("line {line}: timestamp {t} does not increase past {prev}")]
    NonMonotonicTime { line: usize, prev: f64, t: f64 },
    #[error("invalid sample period {0}")]
    BadPeriod(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleFrame {
    pub t: f64,
    pub acc: [f64; 3],
    pub gyro: [f64; 3],
    pub angle: [f64; 3],
}

impl SampleFrame {
    pub fn new(t: f64, acc: [f64; 3], gyro: [f64; 3], angle: [f64; 3]) -> Self {
        Self { t, acc, gyro, angle }
    }

    /// Channel by flat index 0..9 in `ax..rz` order.
    pub fn channel(&self, c: usize) -> f64 {
        match c {
            0..=2 => self.acc[c],
            3..=5 => self.gyro[c - 3],
            6..=8 => self.angle[c - 6],
            _ => panic!("channel index {c} out of range"),
        }
    }

    pub fn set_channel(&mut self, c: usize, v: f64) {
        match c {
            0..=2 => self.acc[c] = v,
            3..=5 => self.gyro[c - 3] = v,
            6..=8 => self.angle[c - 6] = v,
            _ => panic!("channel index {c} out of range"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && (0..9).all(|c| self.channel(c).is_finite())
    }
}

/// A parsed stream. Timestamps are strictly increasing; spacing irregularities
/// are reported by [`validate_series`] rather than rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorSeries {
    frames: Vec<SampleFrame>,
    sample_period: f64,
}

impl SensorSeries {
    pub fn new(frames: Vec<SampleFrame>, sample_period: f64) -> Result<Self, IngestError> {
        if !(sample_period.is_finite() && sample_period > 0.0) {
            return Err(IngestError::BadPeriod(sample_period));
        }
        if frames.is_empty() {
            return Err(IngestError::EmptyInput);
        }
        for (i, f) in frames.iter().enumerate() {
            if !f.is_finite() {
                return Err(IngestError::MalformedRow {
                    line: i + 1,
                    reason: "non-finite value".into(),
                });
            }
        }
        for (i, pair) in frames.windows(2).enumerate() {
            if pair[1].t <= pair[0].t {
                return Err(IngestError::NonMonotonicTime {
                    line: i + 2,
                    prev: pair[0].t,
                    t: pair[1].t,
                });
            }
        }
        Ok(Self { frames, sample_period })
    }

    pub fn frames(&self) -> &[SampleFrame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<SampleFrame> {
        self.frames
    }

    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Values of one flat channel (0..9) in frame order.
    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.channel(c)).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.t).collect()
    }

    /// True when every adjacent spacing is within half a period of nominal.
    pub fn is_uniform(&self) -> bool {
        validate_series(self).is_empty()
    }

    /// Serializes to the canonical CSV layout. Values use the shortest
    /// round-trip decimal representation, so parsing the output is lossless.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.frames.len() * 96 + 64);
        let _ = writeln!(out, "# period={}", self.sample_period);
        out.push_str(&CSV_HEADER.join(","));
        out.push('\n');
        for f in &self.frames {
            let _ = write!(out, "{}", f.t);
            for c in 0..9 {
                let _ = write!(out, ",{}", f.channel(c));
            }
            out.push('\n');
        }
        out
    }
}

/// Parses the canonical CSV layout into a series.
pub fn parse_series(text: &str) -> Result<SensorSeries, IngestError> {
    let mut period = DEFAULT_SAMPLE_PERIOD;
    let mut saw_header = false;
    let mut frames: Vec<SampleFrame> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("period=") {
                let p: f64 = value.trim().parse().map_err(|_| IngestError::MalformedRow {
                    line: line_no,
                    reason: format!("bad period `{}`", value.trim()),
                })?;
                if !(p.is_finite() && p > 0.0) {
                    return Err(IngestError::BadPeriod(p));
                }
                period = p;
            }
            continue;
        }
        if !saw_header {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols != CSV_HEADER {
                return Err(IngestError::MalformedRow {
                    line: line_no,
                    reason: format!("expected header `{}`", CSV_HEADER.join(",")),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != CSV_HEADER.len() {
            return Err(IngestError::MalformedRow {
                line: line_no,
                reason: format!("expected {} fields, found {}", CSV_HEADER.len(), fields.len()),
            });
        }
        let mut vals = [0.0f64; 10];
        for (slot, field) in vals.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| IngestError::MalformedRow {
                    line: line_no,
                    reason: format!("non-numeric field `{field}`"),
                })?;
        }
        let frame = SampleFrame::new(
            vals[0],
            [vals[1], vals[2], vals[3]],
            [vals[4], vals[5], vals[6]],
            [vals[7], vals[8], vals[9]],
        );
        if let Some(prev) = frames.last() {
            if frame.t <= prev.t {
                return Err(IngestError::NonMonotonicTime { line: line_no, prev: prev.t, t: frame.t });
            }
        }
        frames.push(frame);
    }

    if frames.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    SensorSeries::new(frames, period)
}

/// A spacing irregularity between frame `index` and `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub index: usize,
    pub dt: f64,
    /// Number of nominal samples that should sit between the two frames.
    pub missing: usize,
}

/// Reports every adjacent pair whose spacing deviates from the nominal period
/// by more than half a period.
pub fn validate_series(series: &SensorSeries) -> Vec<GapReport> {
    let p = series.sample_period;
    series
        .frames
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| {
            let dt = w[1].t - w[0].t;
            if (dt - p).abs() > 0.5 * p {
                let steps = (dt / p).round() as usize;
                Some(GapReport { index: i, dt, missing: steps.saturating_sub(1) })
            } else {
                None
            }
        })
        .collect()
}
