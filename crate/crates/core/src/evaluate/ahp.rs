//! Analytic hierarchy process: level weights from a pairwise comparison matrix.

use serde::{Deserialize, Serialize};

use super::EvaluateError;

/// Saaty's random consistency index, indexed by matrix order.
const RANDOM_INDEX: [f64; 11] = [0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];

/// Consistency ratios above this are flagged.
pub const CR_THRESHOLD: f64 = 0.1;

/// Positive reciprocal comparison matrix: `a[i][j] = 1 / a[j][i]`, `a[i][i] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct AhpMatrix {
    a: Vec<Vec<f64>>,
}

impl AhpMatrix {
    pub fn new(a: Vec<Vec<f64>>) -> Result<Self, EvaluateError> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err(EvaluateError::NotReciprocal("matrix must be square and non-empty".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = a[i][j];
                if !(v > 0.0 && v.is_finite()) {
                    return Err(EvaluateError::NotReciprocal(format!("a[{i}][{j}] = {v} is not positive")));
                }
                let recip = 1.0 / a[j][i];
                if (v - recip).abs() > 1e-12 * v.max(1.0) {
                    return Err(EvaluateError::NotReciprocal(format!("a[{i}][{j}] = {v} but 1/a[{j}][{i}] = {recip}")));
                }
            }
        }
        Ok(Self { a })
    }

    /// The five-level comparison (strength, force direction, velocity,
    /// velocity direction, posture) used for the default score weights.
    pub fn level_comparison() -> Self {
        let t = 1.0 / 3.0;
        let f = 1.0 / 5.0;
        let s = 1.0 / 7.0;
        Self::new(vec![
            vec![1.0, t, 1.0, f, s],
            vec![3.0, 1.0, 3.0, 3.0, f],
            vec![1.0, t, 1.0, t, s],
            vec![5.0, t, 3.0, 1.0, t],
            vec![7.0, 5.0, 7.0, 3.0, 1.0],
        ])
        .expect("built-in matrix is reciprocal")
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.a
    }
}

impl TryFrom<Vec<Vec<f64>>> for AhpMatrix {
    type Error = EvaluateError;

    fn try_from(a: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Self::new(a)
    }
}

impl From<AhpMatrix> for Vec<Vec<f64>> {
    fn from(m: AhpMatrix) -> Self {
        m.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AhpMethod {
    /// Average of the column-normalized matrix rows.
    #[default]
    ColumnNormalized,
    /// Principal eigenvector by power iteration.
    PrincipalEigenvector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AhpWeights {
    pub weights: Vec<f64>,
    pub lambda_max: f64,
    pub ci: f64,
    pub cr: f64,
}

impl AhpWeights {
    pub fn is_consistent(&self) -> bool {
        self.cr <= CR_THRESHOLD
    }
}

/// Priority vector of any positive square matrix, normalized to sum 1.
/// Does not require reciprocity.
pub fn priority_vector(a: &[Vec<f64>], method: AhpMethod) -> Vec<f64> {
    let n = a.len();
    match method {
        AhpMethod::ColumnNormalized => {
            let col_sums: Vec<f64> = (0..n).map(|j| a.iter().map(|r| r[j]).sum()).collect();
            let w: Vec<f64> = a
                .iter()
                .map(|r| r.iter().zip(&col_sums).map(|(v, s)| v / s).sum::<f64>() / n as f64)
                .collect();
            let total: f64 = w.iter().sum();
            w.into_iter().map(|v| v / total).collect()
        }
        AhpMethod::PrincipalEigenvector => {
            let mut w = vec![1.0 / n as f64; n];
            for _ in 0..10_000 {
                let aw: Vec<f64> = a.iter().map(|r| r.iter().zip(&w).map(|(x, y)| x * y).sum()).collect();
                let total: f64 = aw.iter().sum();
                let next: Vec<f64> = aw.iter().map(|v| v / total).collect();
                let residual = next.iter().zip(&w).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                w = next;
                if residual < 1e-10 {
                    break;
                }
            }
            w
        }
    }
}

/// Level weights with Saaty's consistency index and ratio.
///
/// `λ_max` is estimated as the mean of `(A w)ᵢ / wᵢ`.
pub fn ahp_weights_with(m: &AhpMatrix, method: AhpMethod) -> AhpWeights {
    let n = m.order();
    let weights = priority_vector(&m.a, method);
    let lambda_max = m
        .a
        .iter()
        .zip(&weights)
        .map(|(r, wi)| r.iter().zip(&weights).map(|(x, y)| x * y).sum::<f64>() / wi)
        .sum::<f64>()
        / n as f64;
    let ci = if n > 1 { (lambda_max - n as f64) / (n as f64 - 1.0) } else { 0.0 };
    let ri = RANDOM_INDEX.get(n).copied().unwrap_or(1.49);
    let cr = if ri > 0.0 { ci / ri } else { 0.0 };
    AhpWeights { weights, lambda_max, ci, cr }
}

pub fn ahp_weights(m: &AhpMatrix) -> AhpWeights {
    ahp_weights_with(m, AhpMethod::default())
}
