//! Metrics, dataset splitting and the experiment harness.

mod experiment;
mod metrics;
mod split;

pub use experiment::{
    run_experiment, run_scenario, run_seeds, ExperimentConfig, ExperimentReport, ModelReport,
    ParamReport, SplitReport, REPORT_FORMAT_VERSION,
};
pub use metrics::{confusion_matrix, metrics, ConfusionMatrix, Metrics};
pub use split::{split_dataset, split_positions, split_three_way, ThreeWaySplit};
