//! Six-class stroke recognition over reduced features.
//!
//! Two models are provided: a decision DAG of pairwise Gaussian-kernel SVMs
//! ([`svm`]) and a two-hidden-layer softmax network trained by SGD ([`mlp`]).

pub mod mlp;
pub mod svm;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::label::StrokeLabel;
pub use mlp::{mlp_forward, mlp_init, mlp_predict, mlp_train, MlpGradient, MlpModel, MlpTrainParams, MlpTrainReport};
pub use svm::{
    dag_predict, default_gamma, gaussian_kernel, train_dag, train_pairwise_svm, DagSvmModel, KernelSvmModel,
    KernelSvmParams,
};

use crate::smo::SmoError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("no training samples for class {0}")]
    EmptyClass(StrokeLabel),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("training diverged at epoch {epoch}")]
    NonFinite { epoch: usize },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Solver(#[from] SmoError),
}

/// A trained stroke classifier of either kind, as persisted to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classifier {
    Dagsvm(DagSvmModel),
    Mlp(MlpModel),
}

impl Classifier {
    pub fn predict(&self, x: &[f64]) -> Result<StrokeLabel, ClassifyError> {
        match self {
            Classifier::Dagsvm(m) => Ok(m.predict(x)),
            Classifier::Mlp(m) => mlp_predict(m, x),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Classifier::Dagsvm(_) => "dagsvm",
            Classifier::Mlp(_) => "mlp",
        }
    }
}
