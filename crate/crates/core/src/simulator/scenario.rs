//! Feature-level dataset synthesis.
//!
//! Each row draws a ranging error, a first-path power and a power
//! difference from per-class densities and converts them back into the raw
//! register values (harmonic amplitudes, CIR power, preamble count) that the
//! power formulas consume. LoS errors are zero-mean GGD; NLoS errors add an
//! exponential positive bias.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::distributions::{Density, GaussianParams, GgdParams};
use crate::error::{Error, Result};
use crate::features::CIR_SCALE;
use crate::model::{ClassLabel, Dataset, RangingSample, UwbConfig};

/// Per-class generator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassGenerator {
    pub preamble_count: u32,
    /// dBm.
    pub first_path_power: Density,
    /// dB, RX minus first-path power.
    pub power_difference: Density,
    /// Zero-mean ranging error, meters.
    pub range_error: Density,
    /// Mean of the exponential positive range bias, meters (0 disables it).
    pub range_bias_mean: f64,
}

/// LoS ranging error: GGD with β = 1.3 and α chosen so that
/// 99 % of |error| stays below 0.095 m.
pub const LOS_ERROR_ALPHA: f64 = 0.0324;
pub const LOS_ERROR_BETA: f64 = 1.3;
/// NLoS bias mean; the 99th percentile of |error| lands near 0.15 m.
pub const NLOS_BIAS_MEAN: f64 = 0.028;

impl ClassGenerator {
    pub fn default_los() -> Self {
        Self {
            preamble_count: 1024,
            first_path_power: Density::Gd(GaussianParams {
                mu: -80.0,
                sigma2: 2.25,
            }),
            power_difference: Density::Gd(GaussianParams {
                mu: 3.0,
                sigma2: 1.0,
            }),
            range_error: Density::Ggd(GgdParams {
                mu: 0.0,
                alpha: LOS_ERROR_ALPHA,
                beta: LOS_ERROR_BETA,
            }),
            range_bias_mean: 0.0,
        }
    }

    pub fn default_nlos() -> Self {
        Self {
            preamble_count: 1024,
            first_path_power: Density::Gd(GaussianParams {
                mu: -90.0,
                sigma2: 4.0,
            }),
            power_difference: Density::Gd(GaussianParams {
                mu: 11.0,
                sigma2: 6.25,
            }),
            range_bias_mean: NLOS_BIAS_MEAN,
            ..Self::default_los()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.preamble_count < 1 {
            return Err(Error::arg("preamble_count must be at least 1"));
        }
        self.first_path_power.validate()?;
        self.power_difference.validate()?;
        self.range_error.validate()?;
        if !(self.range_bias_mean >= 0.0) {
            return Err(Error::arg("range_bias_mean must be non-negative"));
        }
        Ok(())
    }
}

/// A synthetic experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSpec {
    pub true_distances: Vec<f64>,
    pub n_los: usize,
    pub n_nlos: usize,
    pub seed: u64,
    pub config: UwbConfig,
    pub los: ClassGenerator,
    pub nlos: ClassGenerator,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self::default_scale(1)
    }
}

fn default_distances() -> Vec<f64> {
    vec![1.5, 2.5, 3.2, 4.0]
}

impl ScenarioSpec {
    /// 500 LoS and 50 NLoS rows with default generators.
    pub fn default_scale(seed: u64) -> Self {
        Self::new(500, 50, seed)
    }

    pub fn new(n_los: usize, n_nlos: usize, seed: u64) -> Self {
        Self {
            true_distances: default_distances(),
            n_los,
            n_nlos,
            seed,
            config: UwbConfig::default(),
            los: ClassGenerator::default_los(),
            nlos: ClassGenerator::default_nlos(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_los + self.n_nlos == 0 {
            return Err(Error::arg("scenario needs at least one sample"));
        }
        if self.true_distances.is_empty()
            || !self
                .true_distances
                .iter()
                .all(|&d| d > 0.0 && d.is_finite())
        {
            return Err(Error::arg(
                "true_distances must be a non-empty list of positive values",
            ));
        }
        self.config.validate()?;
        self.los.validate()?;
        self.nlos.validate()
    }

    pub fn generator(&self, label: ClassLabel) -> &ClassGenerator {
        match label {
            ClassLabel::Los => &self.los,
            ClassLabel::Nlos => &self.nlos,
        }
    }
}

fn draw_row<R: Rng>(
    rng: &mut R,
    index: usize,
    truth: f64,
    label: ClassLabel,
    gen: &ClassGenerator,
    config: &UwbConfig,
) -> RangingSample {
    let mut error = gen.range_error.draw(rng);
    if gen.range_bias_mean > 0.0 {
        error += Exp::new(1.0 / gen.range_bias_mean)
            .expect("validated")
            .sample(rng);
    }
    let fp = gen.first_path_power.draw(rng);
    let rx = fp + gen.power_difference.draw(rng);

    let n = f64::from(gen.preamble_count);
    let n2 = n * n;
    let energy = n2 * 10f64.powf((fp + config.power_offset) / 10.0);
    let weights = [
        rng.random_range(0.2..1.0),
        rng.random_range(0.2..1.0),
        rng.random_range(0.2..1.0),
    ];
    let total: f64 = weights.iter().sum();
    let fp_amp = weights.map(|w| (energy * w / total).sqrt());
    let cir_power = n2 * 10f64.powf((rx + config.power_offset) / 10.0) / CIR_SCALE;

    RangingSample {
        index,
        estimated_distance: (truth + error).max(0.0),
        true_distance: Some(truth),
        fp_amp,
        cir_power,
        preamble_count: gen.preamble_count,
        label: Some(label),
    }
}

/// Generate the labeled dataset: `n_los` LoS rows followed by `n_nlos` NLoS
/// rows, each class split into consecutive blocks over `true_distances`.
pub fn synthesize_dataset(scenario: &ScenarioSpec) -> Result<Dataset> {
    scenario.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut samples = Vec::with_capacity(scenario.n_los + scenario.n_nlos);
    let distances = &scenario.true_distances;
    for (label, count) in [
        (ClassLabel::Los, scenario.n_los),
        (ClassLabel::Nlos, scenario.n_nlos),
    ] {
        let gen = scenario.generator(label);
        for k in 0..count {
            let truth = distances[k * distances.len() / count];
            let index = samples.len();
            samples.push(draw_row(
                &mut rng,
                index,
                truth,
                label,
                gen,
                &scenario.config,
            ));
        }
    }
    Ok(Dataset::new(scenario.config, samples))
}
