//! NLoS identification for UWB two-way ranging.
//!
//! LoS measurements are modelled with per-feature Gaussian (GD) or
//! generalized Gaussian (GGD) densities; a measurement whose joint
//! log-likelihood falls below a threshold ε is flagged as NLoS. A Gaussian
//! Naive Bayes classifier serves as the supervised baseline, and a
//! synthetic IR-UWB generator provides labeled data at any scale.
//!
//! Data-parallel loops run on rayon when the `parallel` feature (default) is
//! enabled and sequentially otherwise. Results are identical either way.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifiers;
pub mod distributions;
pub mod error;
pub mod eval;
pub mod features;
pub mod io;
pub mod model;
pub mod par;
pub mod simulator;

pub use error::{Error, Result};
pub use features::{FeatureMatrix, FeatureName};
pub use model::{ClassLabel, Dataset, FeatureVector, RangingSample, UwbConfig};
