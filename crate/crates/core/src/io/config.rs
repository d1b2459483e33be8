//! TOML scenario/experiment files and experiment reports.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{ExperimentConfig, ExperimentReport, REPORT_FORMAT_VERSION};
use crate::simulator::ScenarioSpec;

/// Input for an evaluation run: a synthetic scenario or a dataset CSV,
/// plus the experiment settings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default)]
    pub scenario: Option<ScenarioSpec>,
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub experiment: ExperimentConfig,
}

fn from_toml<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Format(e.to_string()))
}

pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let spec: ScenarioSpec = from_toml(text)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioSpec> {
    parse_scenario(&super::read_to_string(path.as_ref())?)
}

pub fn scenario_to_string(spec: &ScenarioSpec) -> Result<String> {
    to_toml(spec)
}

pub fn parse_experiment_file(text: &str) -> Result<ExperimentFile> {
    let file: ExperimentFile = from_toml(text)?;
    if file.scenario.is_some() == file.dataset.is_some() {
        return Err(Error::Format(
            "experiment file needs exactly one of `dataset` or `[scenario]`".into(),
        ));
    }
    if let Some(s) = &file.scenario {
        s.validate()?;
    }
    Ok(file)
}

/// Load an experiment file. A relative `dataset` path is resolved against
/// the file's directory.
pub fn load_experiment_file(path: impl AsRef<Path>) -> Result<ExperimentFile> {
    let path = path.as_ref();
    let mut file = parse_experiment_file(&super::read_to_string(path)?)?;
    if let (Some(d), Some(dir)) = (&file.dataset, path.parent()) {
        if d.is_relative() {
            file.dataset = Some(dir.join(d));
        }
    }
    Ok(file)
}

pub fn report_to_string(report: &ExperimentReport) -> Result<String> {
    to_toml(report)
}

pub fn parse_report(text: &str) -> Result<ExperimentReport> {
    let report: ExperimentReport = from_toml(text)?;
    if report.format_version != REPORT_FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported report format version {} (expected {REPORT_FORMAT_VERSION})",
            report.format_version
        )));
    }
    Ok(report)
}

pub fn save_report(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    super::write(path.as_ref(), &report_to_string(report)?)?;
    Ok(())
}

pub fn load_report(path: impl AsRef<Path>) -> Result<ExperimentReport> {
    parse_report(&super::read_to_string(path.as_ref())?)
}
