//! Table-tennis stroke recognition and skill scoring from wearable IMU data.
//!
//! The crate is organised as a pipeline of stages that can be run together or
//! one at a time from persisted intermediates:
//!
//! * [`ingest`] parses and validates CSV sensor streams.
//! * [`preprocess`] cleans each channel (3σ outlier removal, Newton gap fill,
//!   adaptive smoothing).
//! * [`segment`] cuts fixed windows and gates them with a linear SVM.
//! * [`features`] computes the 180-dimensional window feature vector.
//! * [`reduce`] fits and applies PCA with a cumulative-contribution cut.
//! * [`classify`] recognises six strokes with a DAG of kernel SVMs or an MLP.
//! * [`evaluate`] scores windows against per-stroke standard profiles with
//!   AHP-derived level weights.
//! * [`metrics`] builds confusion matrices and weighted F measures.
//! * [`synthgen`] generates deterministic labelled synthetic streams.
//! * [`pipeline`] wires the stages together for the desk-scale experiments.

pub mod classify;
pub mod evaluate;
pub mod features;
pub mod ingest;
pub mod label;
pub mod linalg;
pub mod metrics;
pub mod pipeline;
pub mod preprocess;
pub mod reduce;
pub mod segment;
pub mod smo;
pub mod synthgen;

pub use ingest::{SampleFrame, SensorSeries};
pub use label::StrokeLabel;
