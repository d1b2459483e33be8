use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use uwb_nlos::classifiers::{
    classify_anomaly, fit_anomaly, fit_nb, nb_classify, score_rows, select_epsilon, AnomalyModel,
};
use uwb_nlos::distributions::{fit_gd, fit_ggd, Density, EstimatorMode, Family};
use uwb_nlos::eval::{confusion_matrix, metrics, run_experiment, run_scenario, ExperimentReport};
use uwb_nlos::features::{distance_error, extract_features, parse_selection, DEFAULT_WINDOW};
use uwb_nlos::io::{self, FeatureTable, SavedModel};
use uwb_nlos::model::{validate_dataset, POWER_OFFSET_PRF64};
use uwb_nlos::simulator::{synthesize_dataset, ScenarioSpec};
use uwb_nlos::{ClassLabel, Dataset, Error, FeatureName, Result, UwbConfig};

/// UWB NLoS detection pipeline: simulate, extract features, fit, classify,
/// evaluate and export plot data.
#[derive(Debug, Parser)]
#[command(name = "uwb-nlos", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Prf {
    #[value(name = "16")]
    Mhz16,
    #[value(name = "64")]
    Mhz64,
}

impl Prf {
    fn config(self) -> UwbConfig {
        match self {
            Prf::Mhz16 => UwbConfig::default(),
            Prf::Mhz64 => UwbConfig {
                prf: 64.0,
                power_offset: POWER_OFFSET_PRF64,
                ..UwbConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Gd,
    Ggd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Standard,
    PaperLiteral,
}

impl From<EstimatorArg> for EstimatorMode {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Standard => EstimatorMode::Standard,
            EstimatorArg::PaperLiteral => EstimatorMode::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Los,
    Nlos,
}

impl From<ClassArg> for ClassLabel {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Los => ClassLabel::Los,
            ClassArg::Nlos => ClassLabel::Nlos,
        }
    }
}

#[derive(Debug, clap::Args)]
struct DatasetInput {
    /// Dataset CSV.
    #[arg(long, short)]
    input: PathBuf,
    /// Pulse repetition frequency of the recording, MHz. Selects the power offset.
    #[arg(long, value_enum, default_value = "16")]
    prf: Prf,
}

impl DatasetInput {
    fn load(&self) -> Result<Dataset> {
        let dataset = io::load_dataset_with(&self.input, self.prf.config())?;
        if let Some(v) = validate_dataset(&dataset).first() {
            return Err(Error::Format(format!("{}: {v}", self.input.display())));
        }
        Ok(dataset)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset CSV from a scenario.
    Simulate {
        /// Scenario TOML; defaults to 500 LoS / 50 NLoS rows.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        n_los: Option<usize>,
        #[arg(long)]
        n_nlos: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Compute a feature CSV from a dataset CSV.
    Features {
        #[command(flatten)]
        data: DatasetInput,
        /// Comma-separated feature names.
        #[arg(long, default_value = "first_path_power,power_difference")]
        features: String,
        /// Rolling window for range_variance.
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Fit a GD or GGD anomaly detector on the LoS rows of a feature CSV.
    Fit {
        /// Feature CSV.
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value = "standard")]
        estimator: EstimatorArg,
        /// Explicit log-likelihood threshold.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "validation")]
        epsilon: Option<f64>,
        /// Labeled feature CSV used to choose the threshold by F1.
        #[arg(long)]
        validation: Option<PathBuf>,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Train a Gaussian naive Bayes baseline on a labeled feature CSV.
    TrainNb {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "standard")]
        estimator: EstimatorArg,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Label every row of a dataset CSV with a saved model.
    Classify {
        #[arg(long, short)]
        model: PathBuf,
        #[command(flatten)]
        data: DatasetInput,
        /// Dataset CSV whose label column holds the predictions.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Run the NB / GD / GGD comparison described by an experiment TOML.
    Evaluate {
        #[arg(long, short)]
        config: PathBuf,
        /// Overrides both the scenario seed and the split seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write runtime_ms as 0 so reports compare byte for byte.
        #[arg(long)]
        omit_runtime: bool,
        /// Report TOML.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Export a distance-error histogram with fitted GD and GGD curves.
    Plotdata {
        #[command(flatten)]
        data: DatasetInput,
        /// Rows to use.
        #[arg(long, value_enum, default_value = "los")]
        class: ClassArg,
        #[arg(long, default_value_t = 30)]
        bins: usize,
        /// GD model with a distance_error density; fitted from the data if absent.
        #[arg(long)]
        gd_model: Option<PathBuf>,
        /// GGD model with a distance_error density; fitted from the data if absent.
        #[arg(long)]
        ggd_model: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "standard")]
        estimator: EstimatorArg,
        #[arg(long, short)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            scenario,
            n_los,
            n_nlos,
            seed,
            output,
        } => {
            let mut spec = match scenario {
                Some(p) => io::load_scenario(p)?,
                None => ScenarioSpec::default(),
            };
            spec.n_los = n_los.unwrap_or(spec.n_los);
            spec.n_nlos = n_nlos.unwrap_or(spec.n_nlos);
            spec.seed = seed.unwrap_or(spec.seed);
            let dataset = synthesize_dataset(&spec)?;
            io::save_dataset(&dataset, &output)?;
            eprintln!(
                "wrote {} rows ({} los, {} nlos) to {}",
                dataset.len(),
                spec.n_los,
                spec.n_nlos,
                output.display()
            );
        }
        Command::Features {
            data,
            features,
            window,
            output,
        } => {
            let dataset = data.load()?;
            let selection = parse_selection(&features)?;
            let table = FeatureTable::from_dataset(&dataset, &selection, window)?;
            io::save_features(&table, &output)?;
        }
        Command::Fit {
            input,
            family,
            estimator,
            epsilon,
            validation,
            output,
        } => {
            let table = io::load_features(&input)?;
            let family = match family {
                FamilyArg::Gd => Family::Gd,
                FamilyArg::Ggd => Family::Ggd,
            };
            let mode = estimator.into();
            let los: Vec<usize> = (0..table.labels.len())
                .filter(|&i| table.labels[i] == Some(ClassLabel::Los))
                .collect();
            if los.is_empty() {
                return Err(Error::arg(format!(
                    "{} has no LoS rows to fit on",
                    input.display()
                )));
            }
            let mut model =
                fit_anomaly(&table.matrix.select_rows(&los), family, mode, table.window)?.model;
            model.epsilon = match (epsilon, validation) {
                (Some(e), _) => Some(e),
                (None, Some(path)) => Some(choose_epsilon(&model, &io::load_features(path)?)?),
                (None, None) => {
                    eprintln!(
                        "note: no --epsilon or --validation given; the model has no threshold"
                    );
                    None
                }
            };
            io::save_model(&SavedModel::Anomaly(model), &output)?;
        }
        Command::TrainNb {
            input,
            estimator,
            output,
        } => {
            let table = io::load_features(&input)?;
            let labels = table.require_labels()?;
            let model = fit_nb(&table.matrix, &labels, estimator.into(), table.window)?;
            io::save_model(&SavedModel::NaiveBayes(model), &output)?;
        }
        Command::Classify {
            model,
            data,
            output,
        } => {
            let model = io::load_model(model)?;
            let mut dataset = data.load()?;
            let fm = extract_features(&dataset, model.features(), model.window())?;
            let predicted: Vec<ClassLabel> = fm
                .rows
                .iter()
                .map(|row| match &model {
                    SavedModel::Anomaly(m) => classify_anomaly(m, row),
                    SavedModel::NaiveBayes(m) => nb_classify(m, row),
                })
                .collect::<Result<_>>()?;
            if let Ok(truth) = dataset.labels() {
                let m = metrics(&confusion_matrix(&predicted, &truth)?)?;
                eprintln!(
                    "against input labels: accuracy {:.4} precision {:.4} recall {:.4} f1 {:.4}",
                    m.accuracy, m.precision, m.recall, m.f1
                );
            }
            for (s, p) in dataset.samples.iter_mut().zip(&predicted) {
                s.label = Some(*p);
            }
            io::save_dataset(&dataset, &output)?;
            let nlos = predicted.iter().filter(|l| l.is_nlos()).count();
            eprintln!("{} rows, {nlos} classified nlos", predicted.len());
        }
        Command::Evaluate {
            config,
            seed,
            omit_runtime,
            output,
        } => {
            let file = io::load_experiment_file(&config)?;
            let mut cfg = file.experiment;
            if let Some(s) = seed {
                cfg.split_seed = s;
            }
            let mut report = match (file.scenario, file.dataset) {
                (Some(mut spec), _) => {
                    spec.seed = seed.unwrap_or(spec.seed);
                    run_scenario(&spec, &cfg)?
                }
                (None, Some(path)) => {
                    let dataset = io::load_dataset(&path)?;
                    run_experiment(&dataset, &cfg, None)?
                }
                (None, None) => unreachable!("load_experiment_file requires a data source"),
            };
            if omit_runtime {
                report.runtime_ms = 0.0;
            }
            io::save_report(&report, &output)?;
            print_summary(&report);
        }
        Command::Plotdata {
            data,
            class,
            bins,
            gd_model,
            ggd_model,
            estimator,
            output,
        } => {
            let dataset = data.load()?;
            let class: ClassLabel = class.into();
            let errors: Vec<f64> = dataset
                .samples
                .iter()
                .filter(|s| s.label == Some(class))
                .filter_map(|s| {
                    s.true_distance
                        .map(|t| distance_error(s.estimated_distance, t))
                })
                .collect();
            let mode = estimator.into();
            let gd = match gd_model {
                Some(p) => match error_density(&p, Family::Gd)? {
                    Density::Gd(g) => g,
                    Density::Ggd(_) => unreachable!(),
                },
                None => fit_gd(&errors, mode)?,
            };
            let ggd = match ggd_model {
                Some(p) => match error_density(&p, Family::Ggd)? {
                    Density::Ggd(g) => g,
                    Density::Gd(_) => unreachable!(),
                },
                None => fit_ggd(&errors, mode)?.0,
            };
            io::emit_plot_data(&errors, &gd, &ggd, bins, &output)?;
            eprintln!(
                "{} {class} errors; gd mu={} sigma={}; ggd mu={} alpha={} beta={}",
                errors.len(),
                gd.mu,
                gd.sigma(),
                ggd.mu,
                ggd.alpha,
                ggd.beta
            );
        }
    }
    Ok(())
}

/// F1-optimal threshold on a labeled validation feature table.
fn choose_epsilon(model: &AnomalyModel, validation: &FeatureTable) -> Result<f64> {
    if validation.matrix.names != model.features {
        return Err(Error::Format(
            "validation features differ from the training features".into(),
        ));
    }
    let labels = validation.require_labels()?;
    let scores = score_rows(model, &validation.matrix)?;
    let choice = select_epsilon(&scores, &labels)?;
    eprintln!(
        "epsilon {} (validation f1 {:.4})",
        choice.epsilon, choice.f1
    );
    Ok(choice.epsilon)
}

fn error_density(path: &Path, family: Family) -> Result<Density> {
    let SavedModel::Anomaly(m) = io::load_model(path)? else {
        return Err(Error::Format(format!(
            "{}: expected a gd or ggd model",
            path.display()
        )));
    };
    if m.family != family {
        return Err(Error::Format(format!(
            "{}: expected a {family} model, found {}",
            path.display(),
            m.family
        )));
    }
    m.features
        .iter()
        .position(|&f| f == FeatureName::DistanceError)
        .map(|j| m.params[j])
        .ok_or_else(|| Error::Format(format!("{}: no distance_error density", path.display())))
}

fn print_summary(report: &ExperimentReport) {
    println!(
        "{} rows ({} los, {} nlos), test rows {}",
        report.rows,
        report.n_los,
        report.n_nlos,
        report.split.test.len()
    );
    println!(
        "{:<5} {:>9} {:>9} {:>9} {:>9}",
        "model", "accuracy", "precision", "recall", "f1"
    );
    for m in &report.models {
        println!(
            "{:<5} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            m.name, m.metrics.accuracy, m.metrics.precision, m.metrics.recall, m.metrics.f1
        );
    }
}
