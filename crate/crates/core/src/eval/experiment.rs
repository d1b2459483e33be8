//! End-to-end comparison of the Naive Bayes baseline and the GD / GGD
//! anomaly detectors on one labeled dataset.
//!
//! Protocol: stratified train / validation / test split; NB trains on all
//! labeled training rows, the anomaly models on the LoS training rows only;
//! ε is selected on the validation rows; every model is scored on the test
//! rows, which no fit or threshold ever sees.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::metrics::{confusion_matrix, metrics, ConfusionMatrix, Metrics};
use super::split::split_three_way;
use crate::classifiers::{
    classify_anomaly, fit_anomaly, fit_nb, nb_classify, score_rows, select_epsilon,
};
use crate::distributions::{Density, EstimatorMode, Family};
use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureMatrix, FeatureName, DEFAULT_WINDOW};
use crate::model::{ClassLabel, Dataset};
use crate::par;
use crate::simulator::{synthesize_dataset, ScenarioSpec};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub features: Vec<FeatureName>,
    pub window: usize,
    pub train_fraction: f64,
    pub validation_fraction: f64,
    pub split_seed: u64,
    pub estimator: EstimatorMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            features: vec![FeatureName::FirstPathPower, FeatureName::PowerDifference],
            window: DEFAULT_WINDOW,
            train_fraction: 0.6,
            validation_fraction: 0.2,
            split_seed: 1,
            estimator: EstimatorMode::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamReport {
    pub feature: FeatureName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassLabel>,
    pub density: Density,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kurtosis_clamped: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub name: String,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub priors: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation_f1: Option<f64>,
    /// Mean joint log-likelihood of the LoS test rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_los_mean_log_likelihood: Option<f64>,
    pub params: Vec<ParamReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario_seed: Option<u64>,
    pub split_seed: u64,
    pub rows: usize,
    pub n_los: usize,
    pub n_nlos: usize,
    pub features: Vec<FeatureName>,
    pub window: usize,
    pub estimator: EstimatorMode,
    /// Wall-clock time; the only field that varies between identical runs.
    pub runtime_ms: f64,
    pub split: SplitReport,
    pub models: Vec<ModelReport>,
}

impl ExperimentReport {
    pub fn model(&self, name: &str) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.name == name)
    }
}

fn nb_report(
    fm: &FeatureMatrix,
    labels: &[ClassLabel],
    train: &[usize],
    test: &[usize],
    config: &ExperimentConfig,
) -> Result<ModelReport> {
    let train_labels: Vec<ClassLabel> = train.iter().map(|&p| labels[p]).collect();
    let model = fit_nb(
        &fm.select_rows(train),
        &train_labels,
        config.estimator,
        config.window,
    )?;
    let predicted = test
        .iter()
        .map(|&p| nb_classify(&model, &fm.rows[p]))
        .collect::<Result<Vec<_>>>()?;
    let truth: Vec<ClassLabel> = test.iter().map(|&p| labels[p]).collect();
    let cm = confusion_matrix(&predicted, &truth)?;
    let params = ClassLabel::ALL
        .iter()
        .flat_map(|&c| {
            model
                .features
                .iter()
                .zip(&model.params[c.index()])
                .map(move |(&f, &p)| ParamReport {
                    feature: f,
                    class: Some(c),
                    density: Density::Gd(p),
                    kurtosis_clamped: None,
                })
        })
        .collect();
    Ok(ModelReport {
        name: "nb".into(),
        confusion: cm,
        metrics: metrics(&cm)?,
        priors: Some(model.priors),
        epsilon: None,
        validation_f1: None,
        test_los_mean_log_likelihood: None,
        params,
    })
}

fn anomaly_report(
    family: Family,
    fm: &FeatureMatrix,
    labels: &[ClassLabel],
    train: &[usize],
    validation: &[usize],
    test: &[usize],
    config: &ExperimentConfig,
) -> Result<ModelReport> {
    let los_train: Vec<usize> = train
        .iter()
        .copied()
        .filter(|&p| labels[p] == ClassLabel::Los)
        .collect();
    let fit = fit_anomaly(
        &fm.select_rows(&los_train),
        family,
        config.estimator,
        config.window,
    )?;
    let mut model = fit.model;

    let val_scores = score_rows(&model, &fm.select_rows(validation))?;
    let val_labels: Vec<ClassLabel> = validation.iter().map(|&p| labels[p]).collect();
    let choice = select_epsilon(&val_scores, &val_labels)?;
    model.epsilon = Some(choice.epsilon);

    let test_rows = fm.select_rows(test);
    let test_scores = score_rows(&model, &test_rows)?;
    let predicted = test_rows
        .rows
        .iter()
        .map(|r| classify_anomaly(&model, r))
        .collect::<Result<Vec<_>>>()?;
    let truth: Vec<ClassLabel> = test.iter().map(|&p| labels[p]).collect();
    let cm = confusion_matrix(&predicted, &truth)?;

    let los_scores: Vec<f64> = test_scores
        .iter()
        .zip(&truth)
        .filter(|(_, &l)| l == ClassLabel::Los)
        .map(|(&s, _)| s)
        .collect();
    let mean_ll =
        (!los_scores.is_empty()).then(|| los_scores.iter().sum::<f64>() / los_scores.len() as f64);

    let params = model
        .features
        .iter()
        .zip(&model.params)
        .zip(&fit.reports)
        .map(|((&f, &d), r)| ParamReport {
            feature: f,
            class: None,
            density: d,
            kurtosis_clamped: r.map(|r| r.shape.clamped),
        })
        .collect();
    Ok(ModelReport {
        name: family.as_str().into(),
        confusion: cm,
        metrics: metrics(&cm)?,
        priors: None,
        epsilon: model.epsilon,
        validation_f1: Some(choice.f1),
        test_los_mean_log_likelihood: mean_ll,
        params,
    })
}

/// Run the three-model comparison on a labeled dataset.
pub fn run_experiment(
    dataset: &Dataset,
    config: &ExperimentConfig,
    scenario_seed: Option<u64>,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    let labels = dataset.labels()?;
    if config.features.is_empty() {
        return Err(Error::arg("experiment needs at least one feature"));
    }
    let fm = extract_features(dataset, &config.features, config.window)?;
    let split = split_three_way(
        &labels,
        config.train_fraction,
        config.validation_fraction,
        config.split_seed,
    )?;
    let (train, validation, test) = (&split.train, &split.validation, &split.test);

    let (nb, (gd, ggd)) = par::join(
        || nb_report(&fm, &labels, train, test, config),
        || {
            par::join(
                || anomaly_report(Family::Gd, &fm, &labels, train, validation, test, config),
                || anomaly_report(Family::Ggd, &fm, &labels, train, validation, test, config),
            )
        },
    );
    let models = vec![nb?, gd?, ggd?];

    let row_index = |v: &Vec<usize>| v.iter().map(|&p| dataset.samples[p].index).collect();
    Ok(ExperimentReport {
        format_version: REPORT_FORMAT_VERSION,
        scenario_seed,
        split_seed: config.split_seed,
        rows: dataset.len(),
        n_los: dataset.count_label(ClassLabel::Los),
        n_nlos: dataset.count_label(ClassLabel::Nlos),
        features: config.features.clone(),
        window: config.window,
        estimator: config.estimator,
        runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        split: SplitReport {
            train: row_index(train),
            validation: row_index(validation),
            test: row_index(test),
        },
        models,
    })
}

/// Synthesize the scenario's dataset and run the comparison on it.
pub fn run_scenario(
    scenario: &ScenarioSpec,
    config: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let dataset = synthesize_dataset(scenario)?;
    run_experiment(&dataset, config, Some(scenario.seed))
}

/// Repeat [`run_scenario`] once per seed (used for both the scenario and the
/// split), possibly in parallel. Reports come back in seed order.
pub fn run_seeds(
    scenario: &ScenarioSpec,
    config: &ExperimentConfig,
    seeds: &[u64],
) -> Result<Vec<ExperimentReport>> {
    par::map_slice(seeds, |&seed| {
        let scenario = ScenarioSpec {
            seed,
            ..scenario.clone()
        };
        let config = ExperimentConfig {
            split_seed: seed,
            ..config.clone()
        };
        run_scenario(&scenario, &config)
    })
    .into_iter()
    .collect()
}
