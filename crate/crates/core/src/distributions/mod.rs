//! Gaussian and generalized Gaussian densities, moment fitting and sampling.

mod gamma;
mod gaussian;
mod ggd;
mod moments;
mod sampling;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use gamma::{log_gamma, LOG_GAMMA_MAX, LOG_GAMMA_MIN};
pub use gaussian::{fit_gd, gd_log_pdf, gd_pdf, sample_gd, GaussianParams};
pub use ggd::{
    alpha_from_variance, fit_ggd, ggd_log_pdf, ggd_pdf, invert_kurtosis, invert_kurtosis_detailed,
    kurtosis_bounds, kurtosis_of_shape, moments_from_params, sample_ggd, GgdFitReport, GgdParams,
    ShapeEstimate, BETA_MAX, BETA_MIN,
};
pub use moments::{estimate_moments, EstimatorMode, MomentEstimates};
pub use sampling::{chunk_rng, CHUNK};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gd,
    Ggd,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gd => "gd",
            Family::Ggd => "ggd",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gd" => Ok(Family::Gd),
            "ggd" => Ok(Family::Ggd),
            other => Err(Error::arg(format!("unknown density family `{other}`"))),
        }
    }
}

/// A fitted univariate density of either family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Density {
    Gd(GaussianParams),
    Ggd(GgdParams),
}

impl Density {
    pub fn family(&self) -> Family {
        match self {
            Density::Gd(_) => Family::Gd,
            Density::Ggd(_) => Family::Ggd,
        }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        match self {
            Density::Gd(p) => gd_log_pdf(x, p),
            Density::Ggd(p) => ggd_log_pdf(x, p),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn mean(&self) -> f64 {
        match self {
            Density::Gd(p) => p.mu,
            Density::Ggd(p) => p.mu,
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Density::Gd(p) => p.sigma2,
            Density::Ggd(p) => p.variance(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Density::Gd(p) => GaussianParams::new(p.mu, p.sigma2).map(|_| ()),
            Density::Ggd(p) => GgdParams::new(p.mu, p.alpha, p.beta).map(|_| ()),
        }
    }

    /// `n` draws, deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        match self {
            Density::Gd(p) => sample_gd(p, n, seed),
            Density::Ggd(p) => sample_ggd(p, n, seed),
        }
    }

    /// Single draw from an external generator.
    pub fn draw<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        use rand_distr::{Distribution, Gamma, Normal};
        match *self {
            Density::Gd(p) => Normal::new(p.mu, p.sigma()).expect("validated").sample(rng),
            Density::Ggd(p) => {
                let g = Gamma::new(1.0 / p.beta, 1.0)
                    .expect("validated")
                    .sample(rng);
                let m = p.alpha * g.powf(1.0 / p.beta);
                if rng.random::<bool>() {
                    p.mu + m
                } else {
                    p.mu - m
                }
            }
        }
    }
}
