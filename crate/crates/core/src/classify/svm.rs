use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::label::StrokeLabel;
use crate::smo::{self, SmoParams};

/// `K(u, v) = exp(−γ‖u − v‖²)`.
pub fn gaussian_kernel(u: &[f64], v: &[f64], gamma: f64) -> f64 {
    let d2: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * d2).exp()
}

/// `1 / (k · var)` where `var` is the variance of every entry of the training matrix.
pub fn default_gamma(xs: &[Vec<f64>]) -> f64 {
    let k = xs.first().map_or(1, Vec::len).max(1);
    let n = (xs.len() * k) as f64;
    let mean = xs.iter().flatten().sum::<f64>() / n;
    let var = xs.iter().flatten().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if var > 0.0 {
        1.0 / (k as f64 * var)
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSvmParams {
    pub c: f64,
    /// `None` picks [`default_gamma`] from the training data.
    pub gamma: Option<f64>,
    pub tol: f64,
    pub max_passes: usize,
}

impl Default for KernelSvmParams {
    fn default() -> Self {
        Self { c: 1.0, gamma: None, tol: 1e-3, max_passes: 10_000 }
    }
}

/// Binary Gaussian-kernel SVM. Positive decisions vote for `class_pair.0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSvmModel {
    pub support_vectors: Vec<Vec<f64>>,
    /// Signed coefficients `αᵢ yᵢ`.
    pub alphas: Vec<f64>,
    pub b: f64,
    pub gamma: f64,
    pub c: f64,
    pub class_pair: (StrokeLabel, StrokeLabel),
    /// Set when the decision function is flat over the training data, so the
    /// classes cannot be told apart.
    pub degenerate: bool,
}

impl KernelSvmModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.alphas)
            .map(|(sv, a)| a * gaussian_kernel(sv, x, self.gamma))
            .sum::<f64>()
            + self.b
    }

    /// Winner of the pair at `x`; a zero decision goes to the first class.
    pub fn predict(&self, x: &[f64]) -> StrokeLabel {
        if self.decision(x) >= 0.0 {
            self.class_pair.0
        } else {
            self.class_pair.1
        }
    }
}

/// Trains the pairwise model separating `xa` (first class) from `xb`.
pub fn train_pairwise_svm(
    xa: &[Vec<f64>],
    xb: &[Vec<f64>],
    pair: (StrokeLabel, StrokeLabel),
    params: &KernelSvmParams,
) -> Result<KernelSvmModel, ClassifyError> {
    if xa.is_empty() {
        return Err(ClassifyError::EmptyClass(pair.0));
    }
    if xb.is_empty() {
        return Err(ClassifyError::EmptyClass(pair.1));
    }
    if !(params.c > 0.0) {
        return Err(ClassifyError::BadParameter(format!("C = {}", params.c)));
    }
    let xs: Vec<&Vec<f64>> = xa.iter().chain(xb).collect();
    let y: Vec<f64> = std::iter::repeat(1.0).take(xa.len()).chain(std::iter::repeat(-1.0).take(xb.len())).collect();
    let gamma = match params.gamma {
        Some(g) if g > 0.0 => g,
        Some(g) => return Err(ClassifyError::BadParameter(format!("gamma = {g}"))),
        None => default_gamma(&xs.iter().map(|v| v.to_vec()).collect::<Vec<_>>()),
    };
    let n = xs.len();
    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        kernel[i * n + i] = 1.0;
        for j in i + 1..n {
            let v = gaussian_kernel(xs[i], xs[j], gamma);
            kernel[i * n + j] = v;
            kernel[j * n + i] = v;
        }
    }
    let sol = smo::solve(&kernel, &y, &SmoParams::with_passes(params.c, params.tol, params.max_passes, n))?;

    let flat = (0..n).all(|j| {
        let f: f64 = (0..n).map(|i| sol.alpha[i] * y[i] * kernel[i * n + j]).sum();
        f.abs() < params.tol
    });
    let (support_vectors, alphas) = (0..n)
        .filter(|&i| sol.alpha[i] > 0.0)
        .map(|i| (xs[i].clone(), sol.alpha[i] * y[i]))
        .unzip();
    Ok(KernelSvmModel { support_vectors, alphas, b: sol.b, gamma, c: params.c, class_pair: pair, degenerate: flat })
}

/// Pairwise models for every unordered class pair, evaluated as a decision DAG.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DagSvmModel {
    pub models: Vec<KernelSvmModel>,
    pub class_order: Vec<StrokeLabel>,
}

impl DagSvmModel {
    fn model_for(&self, a: StrokeLabel, b: StrokeLabel) -> (&KernelSvmModel, bool) {
        self.models
            .iter()
            .find_map(|m| {
                if m.class_pair == (a, b) {
                    Some((m, false))
                } else if m.class_pair == (b, a) {
                    Some((m, true))
                } else {
                    None
                }
            })
            .expect("DAG is missing a pairwise model")
    }

    /// Winner between `a` and `b` at `x`.
    pub fn duel(&self, a: StrokeLabel, b: StrokeLabel, x: &[f64]) -> StrokeLabel {
        let (m, _) = self.model_for(a, b);
        m.predict(x)
    }

    /// Prediction plus the list of pairs evaluated along the path.
    pub fn predict_traced(&self, x: &[f64]) -> (StrokeLabel, Vec<(StrokeLabel, StrokeLabel)>) {
        let mut remaining: Vec<StrokeLabel> = self.class_order.clone();
        let mut path = Vec::with_capacity(remaining.len().saturating_sub(1));
        while remaining.len() > 1 {
            let first = remaining[0];
            let last = remaining[remaining.len() - 1];
            path.push((first, last));
            if self.duel(first, last, x) == first {
                remaining.pop();
            } else {
                remaining.remove(0);
            }
        }
        (remaining[0], path)
    }

    pub fn predict(&self, x: &[f64]) -> StrokeLabel {
        self.predict_traced(x).0
    }
}

pub fn dag_predict(dag: &DagSvmModel, x: &[f64]) -> StrokeLabel {
    dag.predict(x)
}

/// Trains all pairwise models over the classes in `class_order`.
pub fn train_dag(
    data: &[(Vec<f64>, StrokeLabel)],
    class_order: &[StrokeLabel],
    params: &KernelSvmParams,
) -> Result<DagSvmModel, ClassifyError> {
    let gamma = match params.gamma {
        Some(g) => g,
        None => default_gamma(&data.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>()),
    };
    let params = KernelSvmParams { gamma: Some(gamma), ..*params };
    let by_class = |l: StrokeLabel| -> Vec<Vec<f64>> {
        data.iter().filter(|(_, y)| *y == l).map(|(x, _)| x.clone()).collect()
    };
    let mut models = Vec::new();
    for (i, &a) in class_order.iter().enumerate() {
        for &b in &class_order[i + 1..] {
            models.push(train_pairwise_svm(&by_class(a), &by_class(b), (a, b), &params)?);
        }
    }
    Ok(DagSvmModel { models, class_order: class_order.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;
    use StrokeLabel::*;

    fn blob(rng: &mut ChaCha8Rng, center: &[f64], sigma: f64, n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| center.iter().map(|c| c + sigma * rng.sample::<f64, _>(StandardNormal)).collect())
            .collect()
    }

    #[test]
    fn separable_blobs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = blob(&mut rng, &[0.0, 0.0], 1.0, 40);
        let b = blob(&mut rng, &[10.0, 0.0], 1.0, 40);
        let m = train_pairwise_svm(&a, &b, (ForehandAttack, BackhandAttack), &KernelSvmParams::default()).unwrap();
        assert!(a.iter().all(|x| m.predict(x) == ForehandAttack));
        assert!(b.iter().all(|x| m.predict(x) == BackhandAttack));
        assert!(!m.degenerate);
    }

    #[test]
    fn identical_points_are_degenerate() {
        let p = vec![vec![1.0, 2.0]];
        let m = train_pairwise_svm(&p, &p, (ForehandPush, BackhandPush), &KernelSvmParams::default()).unwrap();
        assert!((m.decision(&p[0]) - m.b).abs() < 1e-3);
        assert!(m.degenerate);
    }

    #[test]
    fn xor_needs_the_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut a = blob(&mut rng, &[1.0, 1.0], 0.2, 25);
        a.extend(blob(&mut rng, &[-1.0, -1.0], 0.2, 25));
        let mut b = blob(&mut rng, &[1.0, -1.0], 0.2, 25);
        b.extend(blob(&mut rng, &[-1.0, 1.0], 0.2, 25));
        let params = KernelSvmParams { gamma: Some(1.0), c: 10.0, ..Default::default() };
        let m = train_pairwise_svm(&a, &b, (ForehandChop, BackhandChop), &params).unwrap();
        let correct = a.iter().filter(|x| m.predict(x) == ForehandChop).count()
            + b.iter().filter(|x| m.predict(x) == BackhandChop).count();
        assert!(correct as f64 / 100.0 >= 0.95, "accuracy {}", correct);
    }

    #[test]
    fn empty_class_rejected() {
        let a = vec![vec![0.0]];
        assert_eq!(
            train_pairwise_svm(&a, &[], (ForehandAttack, BackhandAttack), &KernelSvmParams::default()),
            Err(ClassifyError::EmptyClass(BackhandAttack))
        );
    }

    fn constant_model(pair: (StrokeLabel, StrokeLabel), b: f64) -> KernelSvmModel {
        KernelSvmModel {
            support_vectors: vec![],
            alphas: vec![],
            b,
            gamma: 1.0,
            c: 1.0,
            class_pair: pair,
            degenerate: false,
        }
    }

    #[test]
    fn unanimous_preference_survives_with_five_evaluations() {
        let favourite = BackhandPush;
        let mut models = Vec::new();
        for (i, &a) in StrokeLabel::ALL.iter().enumerate() {
            for &b in &StrokeLabel::ALL[i + 1..] {
                // otherwise prefer the lower code
                let b_val = if a == favourite { 1.0 } else if b == favourite { -1.0 } else { 1.0 };
                models.push(constant_model((a, b), b_val));
            }
        }
        let dag = DagSvmModel { models, class_order: StrokeLabel::ALL.to_vec() };
        let (label, path) = dag.predict_traced(&[0.0]);
        assert_eq!(label, favourite);
        assert_eq!(path.len(), 5);
        assert_eq!(path[0], (ForehandAttack, BackhandChop));
    }

    #[test]
    fn kernel_properties() {
        let u = [0.3, -1.2, 4.0];
        let v = [1.0, 0.5, -2.0];
        assert_eq!(gaussian_kernel(&u, &u, 0.7), 1.0);
        assert_eq!(gaussian_kernel(&u, &v, 0.7), gaussian_kernel(&v, &u, 0.7));
        let k = gaussian_kernel(&u, &v, 0.7);
        assert!(k > 0.0 && k <= 1.0);
    }
}
