//! Persistence: dataset and feature CSVs, model files, plot data, TOML
//! scenario/experiment files and reports.

mod config;
mod dataset_csv;
mod model_file;
mod plot;

pub use config::{
    load_experiment_file, load_report, load_scenario, parse_experiment_file, parse_report,
    parse_scenario, report_to_string, save_report, scenario_to_string, ExperimentFile,
};
pub use dataset_csv::{
    load_dataset, load_dataset_with, load_features, read_dataset, read_features, save_dataset,
    save_features, write_dataset, write_features, FeatureTable, DATASET_HEADER,
};
pub use model_file::{
    load_model, model_to_string, parse_model, save_model, write_model, SavedModel,
    MODEL_FORMAT_VERSION, MODEL_MAGIC,
};
pub use plot::{
    emit_plot_data, plot_data, write_plot_data, CurvePoint, HistogramBin, PlotData, CURVE_POINTS,
    MIN_BINS, MIN_PLOT_SAMPLES,
};

use std::fs::File;
use std::path::Path;

fn with_path(path: &Path, e: std::io::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

pub(crate) fn open(path: &Path) -> crate::Result<File> {
    File::open(path).map_err(|e| with_path(path, e))
}

pub(crate) fn create(path: &Path) -> crate::Result<File> {
    File::create(path).map_err(|e| with_path(path, e))
}

pub(crate) fn read_to_string(path: &Path) -> crate::Result<String> {
    std::fs::read_to_string(path).map_err(|e| with_path(path, e))
}

pub(crate) fn write(path: &Path, text: &str) -> crate::Result<()> {
    std::fs::write(path, text).map_err(|e| with_path(path, e))
}
