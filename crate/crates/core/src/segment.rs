//! Sliding-window segmentation and the linear-SVM activation gate that decides
//! whether a window holds an effective stroke.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{SampleFrame, SensorSeries};
use crate::label::StrokeLabel;
use crate::smo::{self, SmoError, SmoParams};

pub const DEFAULT_WIDTH: usize = 200;
pub const DEFAULT_OVERLAP: f64 = 0.5;

pub const ACTIVATION_FEATURE_NAMES: [&str; 6] =
    ["acc_mag_mean", "acc_mag_var", "acc_mag_pv", "gyro_mag_mean", "gyro_mag_var", "gyro_mag_pv"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SegmentError {
    #[error("series has {len} frames, shorter than the window width {width}")]
    TooShort { len: usize, width: usize },
    #[error("invalid window: width {width}, overlap {overlap}")]
    BadWindow { width: usize, overlap: f64 },
    #[error("activation training needs both active and idle windows")]
    SingleClass,
    #[error("invalid soft-margin weight C = {0}")]
    BadC(f64),
    #[error(transparent)]
    Solver(#[from] SmoError),
}

/// A fixed-width run of contiguous frames cut from a series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionWindow {
    pub start_index: usize,
    pub frames: Vec<SampleFrame>,
    pub sample_period: f64,
    pub label: Option<StrokeLabel>,
}

impl MotionWindow {
    pub fn new(start_index: usize, frames: Vec<SampleFrame>, sample_period: f64) -> Self {
        Self { start_index, frames, sample_period, label: None }
    }

    pub fn with_label(mut self, label: StrokeLabel) -> Self {
        self.label = Some(label);
        self
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn end_index(&self) -> usize {
        self.start_index + self.frames.len()
    }

    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.channel(c)).collect()
    }

    pub fn acc_magnitude(&self) -> Vec<f64> {
        self.frames.iter().map(|f| norm3(&f.acc)).collect()
    }

    pub fn gyro_magnitude(&self) -> Vec<f64> {
        self.frames.iter().map(|f| norm3(&f.gyro)).collect()
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Window geometry: width in samples and fractional overlap in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub width: usize,
    pub overlap: f64,
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self { width: DEFAULT_WIDTH, overlap: DEFAULT_OVERLAP }
    }
}

impl WindowSpec {
    pub fn new(width: usize, overlap: f64) -> Result<Self, SegmentError> {
        let spec = Self { width, overlap };
        spec.stride()?;
        Ok(spec)
    }

    /// `floor(width · (1 − overlap))`, at least one sample.
    pub fn stride(&self) -> Result<usize, SegmentError> {
        if self.width == 0 || !(0.0..1.0).contains(&self.overlap) {
            return Err(SegmentError::BadWindow { width: self.width, overlap: self.overlap });
        }
        Ok(((self.width as f64 * (1.0 - self.overlap)).floor() as usize).max(1))
    }

    /// Number of full windows over `n` samples.
    pub fn count(&self, n: usize) -> Result<usize, SegmentError> {
        if n < self.width {
            return Err(SegmentError::TooShort { len: n, width: self.width });
        }
        Ok((n - self.width) / self.stride()? + 1)
    }

    pub fn starts(&self, n: usize) -> Result<impl Iterator<Item = usize>, SegmentError> {
        let count = self.count(n)?;
        let stride = self.stride()?;
        Ok((0..count).map(move |k| k * stride))
    }
}

/// Cuts full windows at starts 0, stride, 2·stride, …; the trailing partial
/// window is dropped.
pub fn slide_windows(series: &SensorSeries, spec: WindowSpec) -> Result<Vec<MotionWindow>, SegmentError> {
    let frames = series.frames();
    Ok(spec
        .starts(frames.len())?
        .map(|s| MotionWindow::new(s, frames[s..s + spec.width].to_vec(), series.sample_period()))
        .collect())
}

fn mean_var_pv(x: &[f64]) -> [f64; 3] {
    if x.is_empty() {
        return [0.0; 3];
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    [mean, var, hi - lo]
}

/// Mean, variance and peak-valley of the acceleration magnitude, then the same
/// three of the angular-rate magnitude.
pub fn activation_features(window: &MotionWindow) -> [f64; 6] {
    let a = mean_var_pv(&window.acc_magnitude());
    let g = mean_var_pv(&window.gyro_magnitude());
    [a[0], a[1], a[2], g[0], g[1], g[2]]
}

/// Linear decision `sign(w·x + b)` in raw activation-feature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub c: f64,
    pub feature_names: Vec<String>,
}

impl LinearSvmModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmParams {
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    /// Standardize features before solving; the model is folded back to raw
    /// feature space either way.
    pub standardize: bool,
}

impl Default for LinearSvmParams {
    fn default() -> Self {
        Self { c: 1.0, tol: 1e-3, max_passes: 10_000, standardize: true }
    }
}

/// Soft-margin linear SVM over arbitrary feature vectors (`true` = positive).
pub fn train_linear_svm(
    xs: &[Vec<f64>],
    ys: &[bool],
    params: &LinearSvmParams,
    feature_names: Vec<String>,
) -> Result<LinearSvmModel, SegmentError> {
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(SegmentError::BadC(params.c));
    }
    if !(ys.iter().any(|&y| y) && ys.iter().any(|&y| !y)) {
        return Err(SegmentError::SingleClass);
    }
    let n = xs.len();
    let dim = xs[0].len();
    let (mean, scale) = if params.standardize {
        let mean: Vec<f64> = (0..dim).map(|d| xs.iter().map(|x| x[d]).sum::<f64>() / n as f64).collect();
        let scale: Vec<f64> = (0..dim)
            .map(|d| {
                let var = xs.iter().map(|x| (x[d] - mean[d]).powi(2)).sum::<f64>() / n as f64;
                if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 }
            })
            .collect();
        (mean, scale)
    } else {
        (vec![0.0; dim], vec![1.0; dim])
    };
    let z: Vec<Vec<f64>> =
        xs.iter().map(|x| x.iter().enumerate().map(|(d, v)| (v - mean[d]) / scale[d]).collect()).collect();

    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v: f64 = z[i].iter().zip(&z[j]).map(|(a, b)| a * b).sum();
            kernel[i * n + j] = v;
            kernel[j * n + i] = v;
        }
    }
    let y: Vec<f64> = ys.iter().map(|&p| if p { 1.0 } else { -1.0 }).collect();
    let sol = smo::solve(&kernel, &y, &SmoParams::with_passes(params.c, params.tol, params.max_passes, n))?;

    let mut w_std = vec![0.0; dim];
    for i in 0..n {
        let coef = sol.alpha[i] * y[i];
        if coef != 0.0 {
            for d in 0..dim {
                w_std[d] += coef * z[i][d];
            }
        }
    }
    let w: Vec<f64> = w_std.iter().zip(&scale).map(|(w, s)| w / s).collect();
    let b = sol.b - w.iter().zip(&mean).map(|(w, m)| w * m).sum::<f64>();
    Ok(LinearSvmModel { w, b, c: params.c, feature_names })
}

/// Trains the activation gate from windows tagged active (`true`) or idle.
pub fn train_activation(
    labeled: &[(MotionWindow, bool)],
    params: &LinearSvmParams,
) -> Result<LinearSvmModel, SegmentError> {
    let xs: Vec<Vec<f64>> = labeled.iter().map(|(w, _)| activation_features(w).to_vec()).collect();
    let ys: Vec<bool> = labeled.iter().map(|(_, a)| *a).collect();
    train_linear_svm(&xs, &ys, params, ACTIVATION_FEATURE_NAMES.iter().map(|s| s.to_string()).collect())
}

/// Strictly positive decision means active; the boundary counts as idle.
pub fn is_active(window: &MotionWindow, model: &LinearSvmModel) -> bool {
    model.decision(&activation_features(window)) > 0.0
}
