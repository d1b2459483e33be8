use crate::distributions::{fit_gd, fit_ggd, Density, EstimatorMode, Family, GgdFitReport};
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, FeatureName};
use crate::model::ClassLabel;
use crate::par;

use super::check_row;

/// Per-feature densities fitted on LoS data plus the decision threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyModel {
    pub family: Family,
    pub features: Vec<FeatureName>,
    pub params: Vec<Density>,
    /// Log-likelihood threshold; unset until selected or supplied.
    pub epsilon: Option<f64>,
    pub window: usize,
    pub estimator: EstimatorMode,
}

/// Result of [`fit_anomaly`]: the model (ε unset) and per-feature GGD fit
/// diagnostics (`None` for GD features).
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyFit {
    pub model: AnomalyModel,
    pub reports: Vec<Option<GgdFitReport>>,
}

/// Fit independent per-feature densities on normal-class rows.
pub fn fit_anomaly(
    los_features: &FeatureMatrix,
    family: Family,
    mode: EstimatorMode,
    window: usize,
) -> Result<AnomalyFit> {
    let mut params = Vec::with_capacity(los_features.n_cols());
    let mut reports = Vec::with_capacity(los_features.n_cols());
    for (j, name) in los_features.names.iter().enumerate() {
        let column = los_features.column(j);
        if column.len() >= 2 && column.windows(2).all(|w| w[0] == w[1]) {
            return Err(Error::degenerate(
                name.as_str(),
                "constant over the training rows",
            ));
        }
        match family {
            Family::Gd => {
                let p = fit_gd(&column, mode).map_err(|e| e.for_feature(name.as_str()))?;
                params.push(Density::Gd(p));
                reports.push(None);
            }
            Family::Ggd => {
                let (p, report) = fit_ggd(&column, mode)?;
                params.push(Density::Ggd(p));
                reports.push(Some(report));
            }
        }
    }
    Ok(AnomalyFit {
        model: AnomalyModel {
            family,
            features: los_features.names.clone(),
            params,
            epsilon: None,
            window,
            estimator: mode,
        },
        reports,
    })
}

/// Joint log-likelihood `Σᵢ ln pᵢ(xᵢ)`; lower is more anomalous.
pub fn anomaly_score(model: &AnomalyModel, x: &[f64]) -> Result<f64> {
    check_row(&model.features, x)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("feature values must be finite"));
    }
    Ok(x.iter()
        .zip(&model.params)
        .map(|(&v, d)| d.log_pdf(v))
        .sum())
}

/// Scores for every row of a matrix, in row order.
pub fn score_rows(model: &AnomalyModel, features: &FeatureMatrix) -> Result<Vec<f64>> {
    if features.names != model.features {
        return Err(Error::arg("feature matrix columns do not match the model"));
    }
    par::try_map_range(features.n_rows(), |i| {
        anomaly_score(model, &features.rows[i])
    })
}

/// NLoS iff the score is strictly below ε.
pub fn classify_anomaly(model: &AnomalyModel, x: &[f64]) -> Result<ClassLabel> {
    let epsilon = model
        .epsilon
        .ok_or_else(|| Error::State("anomaly threshold epsilon is not set".into()))?;
    let score = anomaly_score(model, x)?;
    Ok(if score < epsilon {
        ClassLabel::Nlos
    } else {
        ClassLabel::Los
    })
}
