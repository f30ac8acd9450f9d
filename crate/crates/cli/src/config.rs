//! Optional TOML run configuration. Every key is optional; command-line
//! flags take precedence over the file, and the file over built-in defaults.

use std::path::Path;

use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    // synth
    pub seed: Option<u64>,
    pub strokes_per_class: Option<usize>,
    pub noise_sigma: Option<f64>,
    pub spike_rate: Option<f64>,
    pub dropout_rate: Option<f64>,
    pub idle_fraction: Option<f64>,
    pub period: Option<f64>,
    // preprocess
    pub k0: Option<f64>,
    pub delta_a: Option<f64>,
    pub no_filter: Option<bool>,
    pub no_outliers: Option<bool>,
    // segment
    pub window: Option<usize>,
    pub overlap: Option<f64>,
    pub gate_c: Option<f64>,
    pub split_seed: Option<u64>,
    pub test_fraction: Option<f64>,
    // fit-pca
    pub retention: Option<f64>,
    pub no_standardize: Option<bool>,
    // train
    pub model: Option<String>,
    pub gamma: Option<f64>,
    pub svm_c: Option<f64>,
    pub lr: Option<f64>,
    pub epochs: Option<usize>,
    pub mlp_seed: Option<u64>,
    // report
    pub alpha: Option<f64>,
    pub threads: Option<usize>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Flag, else config value, else default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// A switch is on when given on the command line or set true in the file.
pub fn switch(flag: bool, file: Option<bool>) -> bool {
    flag || file.unwrap_or(false)
}
