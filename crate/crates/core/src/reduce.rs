//! Principal component analysis with a cumulative-contribution cut-off.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};

pub const DEFAULT_RETENTION: f64 = 0.95;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReduceError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("retention must lie in (0, 1], got {0}")]
    BadRetention(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcaOptions {
    pub retention: f64,
    /// Scale every feature to unit variance before the decomposition.
    pub standardize: bool,
}

impl Default for PcaOptions {
    fn default() -> Self {
        Self { retention: DEFAULT_RETENTION, standardize: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Per-feature divisor applied after centering (all ones when not standardized).
    pub scale: Vec<f64>,
    /// `k` unit-norm principal axes, one per row.
    pub components: Vec<Vec<f64>>,
    /// All eigenvalues of the covariance matrix, descending.
    pub eigenvalues: Vec<f64>,
    pub k: usize,
    pub retention: f64,
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    /// Eigenvalues of the retained components.
    pub fn retained_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues[..self.k]
    }

    fn standardized(&self, f: &[f64]) -> Vec<f64> {
        f.iter().zip(&self.mean).zip(&self.scale).map(|((v, m), s)| (v - m) / s).collect()
    }
}

/// Fits PCA to the rows of `x` and keeps the smallest number of components
/// whose cumulative contribution reaches `opts.retention`.
pub fn fit_pca(x: &[Vec<f64>], opts: &PcaOptions) -> Result<PcaModel, ReduceError> {
    if !(opts.retention > 0.0 && opts.retention <= 1.0) {
        return Err(ReduceError::BadRetention(opts.retention));
    }
    let m = x.len();
    if m < 2 {
        return Err(ReduceError::DegenerateInput(format!("need at least 2 rows, got {m}")));
    }
    let p = x[0].len();
    if p == 0 {
        return Err(ReduceError::DegenerateInput("rows are empty".into()));
    }
    for (r, row) in x.iter().enumerate() {
        if row.len() != p {
            return Err(ReduceError::DimensionMismatch { expected: p, got: row.len() });
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(ReduceError::NonFinite { row: r, col: c });
        }
    }

    let mf = m as f64;
    let mean: Vec<f64> = (0..p).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / mf).collect();
    let scale: Vec<f64> = if opts.standardize {
        (0..p)
            .map(|j| {
                let var = x.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / (mf - 1.0);
                let sd = var.sqrt();
                if sd > 1e-12 * mean[j].abs().max(1.0) { sd } else { 1.0 }
            })
            .collect()
    } else {
        vec![1.0; p]
    };

    let centered: Vec<Vec<f64>> =
        x.iter().map(|r| r.iter().enumerate().map(|(j, v)| (v - mean[j]) / scale[j]).collect()).collect();
    let mut cov = Matrix::zeros(p, p);
    for row in &centered {
        for i in 0..p {
            let ri = row[i];
            if ri == 0.0 {
                continue;
            }
            for j in i..p {
                cov.data[i * p + j] += ri * row[j];
            }
        }
    }
    for i in 0..p {
        for j in i..p {
            let v = cov.get(i, j) / (mf - 1.0);
            cov.set(i, j, v);
            cov.set(j, i, v);
        }
    }

    let eig = linalg::symmetric_eigen(&cov);
    let eigenvalues: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
    let (_, cumulative) = rates(&eigenvalues)?;
    let k = cumulative.iter().position(|&c| c >= opts.retention).map_or(p, |i| i + 1);
    let components = (0..k).map(|r| eig.vectors.row(r).to_vec()).collect();
    Ok(PcaModel { mean, scale, components, eigenvalues, k, retention: opts.retention })
}

/// Projects one feature vector onto the retained components.
pub fn transform(model: &PcaModel, f: &[f64]) -> Result<Vec<f64>, ReduceError> {
    if f.len() != model.input_dim() {
        return Err(ReduceError::DimensionMismatch { expected: model.input_dim(), got: f.len() });
    }
    let z = model.standardized(f);
    Ok(model.components.iter().map(|c| linalg::dot(c, &z)).collect())
}

/// Maps reduced coordinates back to feature space.
pub fn inverse_transform(model: &PcaModel, y: &[f64]) -> Result<Vec<f64>, ReduceError> {
    if y.len() != model.k {
        return Err(ReduceError::DimensionMismatch { expected: model.k, got: y.len() });
    }
    let mut z = vec![0.0; model.input_dim()];
    for (coef, comp) in y.iter().zip(&model.components) {
        for (zj, cj) in z.iter_mut().zip(comp) {
            *zj += coef * cj;
        }
    }
    Ok(z.iter().zip(&model.mean).zip(&model.scale).map(|((z, m), s)| m + s * z).collect())
}

fn rates(eigenvalues: &[f64]) -> Result<(Vec<f64>, Vec<f64>), ReduceError> {
    let total: f64 = eigenvalues.iter().sum();
    if !(total > 0.0) {
        return Err(ReduceError::DegenerateInput("total variance is zero".into()));
    }
    let c: Vec<f64> = eigenvalues.iter().map(|l| l / total).collect();
    let mut running = 0.0;
    let cumulative = eigenvalues
        .iter()
        .map(|l| {
            running += l;
            running / total
        })
        .collect();
    Ok((c, cumulative))
}

/// Per-component contribution `λᵢ / Σλ` and the running cumulative share,
/// over all eigenvalues of the fit.
pub fn contribution_rates(model: &PcaModel) -> (Vec<f64>, Vec<f64>) {
    rates(&model.eigenvalues).unwrap_or_else(|_| (vec![0.0; model.eigenvalues.len()], vec![0.0; model.eigenvalues.len()]))
}

/// Contribution rates straight from a list of eigenvalues.
pub fn contribution_rates_of(eigenvalues: &[f64]) -> Result<(Vec<f64>, Vec<f64>), ReduceError> {
    rates(eigenvalues)
}
