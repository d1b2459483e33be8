use crate::distributions::{fit_gd, gd_log_pdf, EstimatorMode, GaussianParams};
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, FeatureName};
use crate::model::ClassLabel;

use super::check_row;

/// Gaussian Naive Bayes over independent features.
#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    pub features: Vec<FeatureName>,
    /// Indexed by [`ClassLabel::index`].
    pub priors: [f64; 2],
    /// `params[class][feature]`.
    pub params: [Vec<GaussianParams>; 2],
    pub window: usize,
    pub estimator: EstimatorMode,
}

pub fn fit_nb(
    features: &FeatureMatrix,
    labels: &[ClassLabel],
    mode: EstimatorMode,
    window: usize,
) -> Result<NbModel> {
    if labels.len() != features.n_rows() {
        return Err(Error::arg(format!(
            "{} labels for {} feature rows",
            labels.len(),
            features.n_rows()
        )));
    }
    let total = labels.len() as f64;
    let mut priors = [0.0; 2];
    let mut params: [Vec<GaussianParams>; 2] = [Vec::new(), Vec::new()];
    for class in ClassLabel::ALL {
        let rows: Vec<&Vec<f64>> = features
            .rows
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == class)
            .map(|(r, _)| r)
            .collect();
        if rows.is_empty() {
            return Err(Error::arg(format!(
                "no {class} samples; both classes are required"
            )));
        }
        priors[class.index()] = rows.len() as f64 / total;
        for (j, name) in features.names.iter().enumerate() {
            let column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let fit = fit_gd(&column, mode).map_err(|e| match e {
                Error::DegenerateFit { reason, .. } => {
                    Error::degenerate(format!("{name} ({class})"), reason)
                }
                other => other,
            })?;
            params[class.index()].push(fit);
        }
    }
    Ok(NbModel {
        features: features.names.clone(),
        priors,
        params,
        window,
        estimator: mode,
    })
}

/// `ln P(l) + Σᵢ ln P(xᵢ | l)` for each class.
pub fn nb_log_joint(model: &NbModel, x: &[f64]) -> Result<[f64; 2]> {
    check_row(&model.features, x)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("feature values must be finite"));
    }
    let mut out = [0.0; 2];
    for class in ClassLabel::ALL {
        let c = class.index();
        out[c] = model.priors[c].ln()
            + x.iter()
                .zip(&model.params[c])
                .map(|(&v, p)| gd_log_pdf(v, p))
                .sum::<f64>();
    }
    Ok(out)
}

/// Class posteriors, normalized in log space.
pub fn nb_posterior(model: &NbModel, x: &[f64]) -> Result<[f64; 2]> {
    let lj = nb_log_joint(model, x)?;
    let m = lj[0].max(lj[1]);
    let w = [(lj[0] - m).exp(), (lj[1] - m).exp()];
    let z = w[0] + w[1];
    Ok([w[0] / z, w[1] / z])
}

/// Argmax over per-class scores; an exact tie goes to LoS.
pub fn argmax_label(scores: [f64; 2]) -> ClassLabel {
    if scores[ClassLabel::Nlos.index()] > scores[ClassLabel::Los.index()] {
        ClassLabel::Nlos
    } else {
        ClassLabel::Los
    }
}

pub fn nb_classify(model: &NbModel, x: &[f64]) -> Result<ClassLabel> {
    nb_log_joint(model, x).map(argmax_label)
}
