//! Time-domain window features: 15 statistics over 12 channels (the nine
//! sensor axes plus one resultant magnitude per sensor), 180 values in all.
//!
//! Layout is channel-major: index `c * 15 + s` holds statistic `s` of channel
//! `c`, with channels ordered as [`CHANNEL_NAMES`] and statistics as
//! [`STAT_NAMES`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::segment::MotionWindow;

pub const STATS_PER_CHANNEL: usize = 15;
pub const CHANNEL_COUNT: usize = 12;
pub const FEATURE_LEN: usize = STATS_PER_CHANNEL * CHANNEL_COUNT;

/// Denominators below this make the ratio feature 0.
pub const EPS_DEN: f64 = 1e-12;

pub const CHANNEL_NAMES: [&str; CHANNEL_COUNT] = [
    "acc_x", "acc_y", "acc_z", "acc_mag", "gyro_x", "gyro_y", "gyro_z", "gyro_mag", "angle_x", "angle_y", "angle_z",
    "angle_mag",
];

pub const STAT_NAMES: [&str; STATS_PER_CHANNEL] = [
    "mean",
    "variance",
    "max",
    "min",
    "peak_valley",
    "mean_square",
    "rms",
    "correlation",
    "crest_factor",
    "pulse_factor",
    "margin_factor",
    "kurtosis_factor",
    "waveform_factor",
    "skewness",
    "kurtosis",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("need at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("channel and its pair differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("expected {FEATURE_LEN} features, got {0}")]
    BadLength(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub mean: f64,
    pub variance: f64,
    pub max: f64,
    pub min: f64,
    pub peak_valley: f64,
    pub mean_square: f64,
    pub rms: f64,
    pub correlation: f64,
    pub crest_factor: f64,
    pub pulse_factor: f64,
    pub margin_factor: f64,
    pub kurtosis_factor: f64,
    pub waveform_factor: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

impl ChannelStats {
    pub fn to_array(&self) -> [f64; STATS_PER_CHANNEL] {
        [
            self.mean,
            self.variance,
            self.max,
            self.min,
            self.peak_valley,
            self.mean_square,
            self.rms,
            self.correlation,
            self.crest_factor,
            self.pulse_factor,
            self.margin_factor,
            self.kurtosis_factor,
            self.waveform_factor,
            self.skewness,
            self.kurtosis,
        ]
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den.abs() < EPS_DEN {
        0.0
    } else {
        num / den
    }
}

/// The 15 statistics of `x`; the correlation entry is taken against `pair`.
///
/// Moments use the population (1/n) forms. Pulse, margin and waveform factors
/// use |x| in their mean-value denominators.
pub fn channel_stats(x: &[f64], pair: &[f64]) -> Result<ChannelStats, FeatureError> {
    let n = x.len();
    if n < 2 {
        return Err(FeatureError::TooShort(n));
    }
    if pair.len() != n {
        return Err(FeatureError::LengthMismatch(n, pair.len()));
    }
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    let (mut sq, mut quart, mut abs_sum, mut sqrt_abs_sum) = (0.0, 0.0, 0.0, 0.0);
    let (mut max, mut min) = (f64::NEG_INFINITY, f64::INFINITY);
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        let v2 = v * v;
        sq += v2;
        quart += v2 * v2;
        abs_sum += v.abs();
        sqrt_abs_sum += v.abs().sqrt();
        max = max.max(v);
        min = min.min(v);
    }
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    let mean_square = sq / nf;
    let rms = mean_square.sqrt();
    let mean_abs = abs_sum / nf;
    let mean_sqrt_abs = sqrt_abs_sum / nf;
    let peak_valley = max - min;

    let pair_mean = pair.iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut pair_var = 0.0;
    for (&a, &b) in x.iter().zip(pair) {
        cov += (a - mean) * (b - pair_mean);
        pair_var += (b - pair_mean) * (b - pair_mean);
    }
    let (cov, pair_var) = (cov / nf, pair_var / nf);
    let correlation = ratio(cov, m2.sqrt() * pair_var.sqrt()).clamp(-1.0, 1.0);

    Ok(ChannelStats {
        mean,
        variance: m2,
        max,
        min,
        peak_valley,
        mean_square,
        rms,
        correlation,
        crest_factor: ratio(peak_valley, rms),
        pulse_factor: ratio(peak_valley, mean_abs),
        margin_factor: ratio(peak_valley, mean_sqrt_abs * mean_sqrt_abs),
        kurtosis_factor: ratio(quart / nf, rms),
        waveform_factor: ratio(rms, mean_abs),
        skewness: ratio(m3, m2.powf(1.5)),
        kurtosis: if m2 * m2 < EPS_DEN { 0.0 } else { m4 / (m2 * m2) - 3.0 },
    })
}

/// A 180-value feature vector in the fixed channel-major layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn get(&self, channel: usize, stat: usize) -> f64 {
        self.0[channel * STATS_PER_CHANNEL + stat]
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = FeatureError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        if v.len() != FEATURE_LEN {
            return Err(FeatureError::BadLength(v.len()));
        }
        Ok(Self(v))
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(f: FeatureVector) -> Self {
        f.0
    }
}

/// Column names `<channel>_<stat>` in layout order.
pub fn feature_names() -> Vec<String> {
    CHANNEL_NAMES
        .iter()
        .flat_map(|c| STAT_NAMES.iter().map(move |s| format!("{c}_{s}")))
        .collect()
}

/// The 12 window channels in layout order.
pub fn window_channels(window: &MotionWindow) -> [Vec<f64>; CHANNEL_COUNT] {
    let axis = |c: usize| window.channel(c);
    let mag = |base: usize| -> Vec<f64> {
        window
            .frames
            .iter()
            .map(|f| {
                let (a, b, c) = (f.channel(base), f.channel(base + 1), f.channel(base + 2));
                (a * a + b * b + c * c).sqrt()
            })
            .collect()
    };
    [axis(0), axis(1), axis(2), mag(0), axis(3), axis(4), axis(5), mag(3), axis(6), axis(7), axis(8), mag(6)]
}

/// Index of the correlation partner of channel `c`: x→y, y→z, z→x within a
/// sensor, and each magnitude to the next sensor's magnitude (acc→gyro→angle→acc).
pub fn correlation_partner(c: usize) -> usize {
    let sensor = c / 4;
    match c % 4 {
        0 => sensor * 4 + 1,
        1 => sensor * 4 + 2,
        2 => sensor * 4,
        _ => ((sensor + 1) % 3) * 4 + 3,
    }
}

pub fn window_features(window: &MotionWindow) -> Result<FeatureVector, FeatureError> {
    let channels = window_channels(window);
    let mut out = Vec::with_capacity(FEATURE_LEN);
    for c in 0..CHANNEL_COUNT {
        let stats = channel_stats(&channels[c], &channels[correlation_partner(c)])?;
        out.extend_from_slice(&stats.to_array());
    }
    Ok(FeatureVector(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::SampleFrame;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn simple_ramp() {
        let s = channel_stats(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.max, s.min, s.peak_valley), (2.0, 3.0, 1.0, 2.0));
        assert!((s.variance - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.correlation - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_channel_is_guarded() {
        let x = [4.0; 10];
        let s = channel_stats(&x, &x).unwrap();
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.skewness, 0.0);
        assert_eq!(s.kurtosis, 0.0);
        assert_eq!(s.crest_factor, 0.0);
        assert_eq!(s.pulse_factor, 0.0);
        assert_eq!(s.margin_factor, 0.0);
        assert_eq!(s.correlation, 0.0);
        let zero = channel_stats(&[0.0; 10], &[0.0; 10]).unwrap();
        assert_eq!(zero.waveform_factor, 0.0);
        assert_eq!(zero.kurtosis_factor, 0.0);
    }

    #[test]
    fn gaussian_shape_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..1000).map(|_| rng.sample(StandardNormal)).collect();
        let s = channel_stats(&x, &x).unwrap();
        assert!(s.skewness.abs() < 0.15, "skew {}", s.skewness);
        assert!(s.kurtosis.abs() < 0.3, "kurt {}", s.kurtosis);
    }

    #[test]
    fn too_short() {
        assert_eq!(channel_stats(&[1.0], &[1.0]), Err(FeatureError::TooShort(1)));
    }

    #[test]
    fn partners_are_cyclic() {
        let p: Vec<usize> = (0..12).map(correlation_partner).collect();
        assert_eq!(p, vec![1, 2, 0, 7, 5, 6, 4, 11, 9, 10, 8, 3]);
    }

    #[test]
    fn names_follow_layout() {
        let names = feature_names();
        assert_eq!(names.len(), 180);
        assert_eq!(names[0], "acc_x_mean");
        assert_eq!(names[3 * 15 + 1], "acc_mag_variance");
        assert_eq!(names[179], "angle_mag_kurtosis");
    }

    #[test]
    fn zero_window_has_zero_features() {
        let frames = (0..200).map(|i| SampleFrame::new(i as f64 * 0.01, [0.0; 3], [0.0; 3], [0.0; 3])).collect();
        let f = window_features(&MotionWindow::new(0, frames, 0.01)).unwrap();
        assert!(f.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pythagorean_constant_magnitude() {
        let frames = (0..200).map(|i| SampleFrame::new(i as f64 * 0.01, [3.0, 4.0, 0.0], [0.0; 3], [0.0; 3])).collect();
        let f = window_features(&MotionWindow::new(0, frames, 0.01)).unwrap();
        assert_eq!(f.get(3, 0), 5.0);
        assert_eq!(f.get(3, 1), 0.0);
    }

    #[test]
    fn feature_vector_rejects_wrong_length() {
        assert_eq!(FeatureVector::try_from(vec![0.0; 3]), Err(FeatureError::BadLength(3)));
    }
}
