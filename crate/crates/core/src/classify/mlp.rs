use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::label::StrokeLabel;

pub const HIDDEN_WIDTH: usize = 120;
pub const HIDDEN_ACTIVATION: &str = "tanh";

/// Fully connected network with tanh hidden layers and a softmax output.
/// `weights[l]` is row-major `sizes[l+1] × sizes[l]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub sizes: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub hidden_activation: String,
}

/// Gradient with the same shapes as [`MlpModel`]'s parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradient {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

/// Network with two 120-unit hidden layers and six outputs.
pub fn mlp_init(k_in: usize, seed: u64) -> Result<MlpModel, ClassifyError> {
    MlpModel::init(&[k_in, HIDDEN_WIDTH, HIDDEN_WIDTH, StrokeLabel::COUNT], seed)
}

pub(crate) fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn log_softmax_at(logits: &[f64], idx: usize) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + logits.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
    logits[idx] - lse
}

impl MlpModel {
    /// Glorot-uniform weights, zero biases.
    pub fn init(sizes: &[usize], seed: u64) -> Result<Self, ClassifyError> {
        if sizes.len() < 2 || sizes.iter().any(|&s| s == 0) {
            return Err(ClassifyError::BadParameter(format!("layer sizes {sizes:?}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::with_capacity(sizes.len() - 1);
        let mut biases = Vec::with_capacity(sizes.len() - 1);
        for l in 0..sizes.len() - 1 {
            let (fan_in, fan_out) = (sizes[l], sizes[l + 1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push((0..fan_in * fan_out).map(|_| rng.random_range(-bound..bound)).collect());
            biases.push(vec![0.0; fan_out]);
        }
        Ok(Self { sizes: sizes.to_vec(), weights, biases, hidden_activation: HIDDEN_ACTIVATION.to_string() })
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn layers(&self) -> usize {
        self.weights.len()
    }

    fn check_input(&self, x: &[f64]) -> Result<(), ClassifyError> {
        if x.len() != self.input_dim() {
            return Err(ClassifyError::DimensionMismatch { expected: self.input_dim(), got: x.len() });
        }
        Ok(())
    }

    /// Layer inputs (activations) and output logits.
    fn activations(&self, x: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut acts = vec![x.to_vec()];
        let last = self.layers() - 1;
        let mut logits = Vec::new();
        for l in 0..self.layers() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let input = &acts[l];
            let w = &self.weights[l];
            let z: Vec<f64> = (0..n_out)
                .map(|o| {
                    let row = &w[o * n_in..(o + 1) * n_in];
                    row.iter().zip(input).map(|(a, b)| a * b).sum::<f64>() + self.biases[l][o]
                })
                .collect();
            if l == last {
                logits = z;
            } else {
                acts.push(z.into_iter().map(f64::tanh).collect());
            }
        }
        (acts, logits)
    }

    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>, ClassifyError> {
        self.check_input(x)?;
        Ok(self.activations(x).1)
    }

    /// Cross-entropy of one sample and its gradient by backpropagation.
    pub fn loss_and_gradient(&self, x: &[f64], label: StrokeLabel) -> Result<(f64, MlpGradient), ClassifyError> {
        self.check_input(x)?;
        let (acts, logits) = self.activations(x);
        let target = label.code();
        let loss = -log_softmax_at(&logits, target);

        let mut delta = softmax(&logits);
        delta[target] -= 1.0;
        let mut gw: Vec<Vec<f64>> = self.weights.iter().map(|w| vec![0.0; w.len()]).collect();
        let mut gb: Vec<Vec<f64>> = self.biases.iter().map(|b| vec![0.0; b.len()]).collect();
        for l in (0..self.layers()).rev() {
            let n_in = self.sizes[l];
            let input = &acts[l];
            for (o, d) in delta.iter().enumerate() {
                gb[l][o] = *d;
                let row = &mut gw[l][o * n_in..(o + 1) * n_in];
                for (g, a) in row.iter_mut().zip(input) {
                    *g = d * a;
                }
            }
            if l > 0 {
                let w = &self.weights[l];
                delta = (0..n_in)
                    .map(|i| {
                        let back: f64 = delta.iter().enumerate().map(|(o, d)| d * w[o * n_in + i]).sum();
                        back * (1.0 - input[i] * input[i])
                    })
                    .collect();
            }
        }
        Ok((loss, MlpGradient { weights: gw, biases: gb }))
    }

    fn apply(&mut self, grad: &MlpGradient, lr: f64) {
        for (w, g) in self.weights.iter_mut().zip(&grad.weights) {
            for (wi, gi) in w.iter_mut().zip(g) {
                *wi -= lr * gi;
            }
        }
        for (b, g) in self.biases.iter_mut().zip(&grad.biases) {
            for (bi, gi) in b.iter_mut().zip(g) {
                *bi -= lr * gi;
            }
        }
    }

    fn is_finite(&self) -> bool {
        self.weights.iter().chain(&self.biases).flatten().all(|v| v.is_finite())
    }
}

/// Class probabilities for one input.
pub fn mlp_forward(model: &MlpModel, x: &[f64]) -> Result<Vec<f64>, ClassifyError> {
    Ok(softmax(&model.logits(x)?))
}

/// Most probable class; ties go to the lowest code.
pub fn mlp_predict(model: &MlpModel, x: &[f64]) -> Result<StrokeLabel, ClassifyError> {
    let p = mlp_forward(model, x)?;
    Ok(StrokeLabel::from_code(argmax(&p)).expect("output layer has six classes"))
}

pub(crate) fn argmax(p: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in p.iter().enumerate() {
        if *v > p[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpTrainParams {
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Stop once an epoch improves mean loss by less than this.
    pub early_stop: Option<f64>,
}

impl Default for MlpTrainParams {
    fn default() -> Self {
        Self { lr: 0.01, epochs: 200, seed: 0, early_stop: Some(1e-5) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpTrainReport {
    pub model: MlpModel,
    pub epoch_losses: Vec<f64>,
}

/// Per-sample SGD on cross-entropy, shuffling each epoch from `params.seed`.
pub fn mlp_train(
    model: &MlpModel,
    data: &[(Vec<f64>, StrokeLabel)],
    params: &MlpTrainParams,
) -> Result<MlpTrainReport, ClassifyError> {
    if data.is_empty() {
        return Err(ClassifyError::BadParameter("empty training set".into()));
    }
    let mut model = model.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut epoch_losses = Vec::with_capacity(params.epochs);
    for epoch in 0..params.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for &i in &order {
            let (x, y) = &data[i];
            let (loss, grad) = model.loss_and_gradient(x, *y)?;
            total += loss;
            model.apply(&grad, params.lr);
        }
        let mean = total / data.len() as f64;
        if !mean.is_finite() || !model.is_finite() {
            return Err(ClassifyError::NonFinite { epoch });
        }
        let improvement = epoch_losses.last().map(|prev: &f64| prev - mean);
        epoch_losses.push(mean);
        if let (Some(tol), Some(gain)) = (params.early_stop, improvement) {
            if gain < tol {
                break;
            }
        }
    }
    Ok(MlpTrainReport { model, epoch_losses })
}
