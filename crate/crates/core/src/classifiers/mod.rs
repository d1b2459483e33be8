//! Gaussian Naive Bayes baseline and the GD/GGD likelihood-threshold
//! anomaly detectors.

mod anomaly;
mod naive_bayes;
mod threshold;

pub use anomaly::{
    anomaly_score, classify_anomaly, fit_anomaly, score_rows, AnomalyFit, AnomalyModel,
};
pub use naive_bayes::{argmax_label, fit_nb, nb_classify, nb_log_joint, nb_posterior, NbModel};
pub use threshold::{select_epsilon, ThresholdChoice};

use crate::error::{Error, Result};
use crate::features::FeatureName;

fn check_row(names: &[FeatureName], x: &[f64]) -> Result<()> {
    if x.len() != names.len() {
        return Err(Error::arg(format!(
            "feature row has {} values, model expects {}",
            x.len(),
            names.len()
        )));
    }
    Ok(())
}
