use std::f64::consts::PI;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::moments::{all_identical, EstimatorMode};
use super::sampling::chunked;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub mu: f64,
    pub sigma2: f64,
}

impl GaussianParams {
    pub fn new(mu: f64, sigma2: f64) -> Result<Self> {
        if !mu.is_finite() || !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::arg(format!(
                "invalid Gaussian parameters mu={mu}, sigma2={sigma2}"
            )));
        }
        Ok(Self { mu, sigma2 })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

pub fn gd_log_pdf(x: f64, p: &GaussianParams) -> f64 {
    -0.5 * (2.0 * PI * p.sigma2).ln() - (x - p.mu).powi(2) / (2.0 * p.sigma2)
}

pub fn gd_pdf(x: f64, p: &GaussianParams) -> f64 {
    gd_log_pdf(x, p).exp()
}

/// Moment fit: sample mean (per `mode`) and unbiased variance.
pub fn fit_gd(samples: &[f64], mode: EstimatorMode) -> Result<GaussianParams> {
    if samples.len() < 2 {
        return Err(Error::arg(format!(
            "Gaussian fit needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::arg("samples must be finite"));
    }
    if all_identical(samples) {
        return Err(Error::degenerate("samples", "zero variance"));
    }
    let mu = mode.mean(samples);
    let sigma2 =
        samples.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (samples.len() as f64 - 1.0);
    GaussianParams::new(mu, sigma2)
        .map_err(|_| Error::degenerate("samples", "variance is not positive and finite"))
}

/// `n` Gaussian draws, deterministic in `seed`.
pub fn sample_gd(p: &GaussianParams, n: usize, seed: u64) -> Vec<f64> {
    let normal = Normal::new(p.mu, p.sigma()).expect("validated parameters");
    chunked(n, seed, |rng| normal.sample(rng))
}
