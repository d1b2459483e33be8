use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which divisor the sample mean uses.
///
/// `Standard` divides the sum by `M`. `PaperLiteral` divides it by `M − 1`,
/// matching the printed estimator this crate reproduces on request. Both
/// modes use `M − 1` for the second and fourth central moments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorMode {
    #[default]
    Standard,
    PaperLiteral,
}

impl EstimatorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorMode::Standard => "standard",
            EstimatorMode::PaperLiteral => "paper-literal",
        }
    }

    pub(crate) fn mean(self, samples: &[f64]) -> f64 {
        let m = samples.len() as f64;
        let sum: f64 = samples.iter().sum();
        match self {
            EstimatorMode::Standard => sum / m,
            EstimatorMode::PaperLiteral => sum / (m - 1.0),
        }
    }
}

impl fmt::Display for EstimatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(EstimatorMode::Standard),
            "paper-literal" => Ok(EstimatorMode::PaperLiteral),
            other => Err(Error::arg(format!("unknown estimator mode `{other}`"))),
        }
    }
}

/// Sample mean, unbiased variance and excess kurtosis.
///
/// The kurtosis is the ratio of `(1/(M−1))·Σd⁴` to the squared
/// `(1/(M−1))·Σd²`, minus 3. With the `M − 1` divisor on both moments the
/// value can fall below −2 for tiny samples; the GGD fit clamps it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimates {
    pub mean: f64,
    pub variance: f64,
    pub kurtosis: f64,
}

pub(crate) fn all_identical(samples: &[f64]) -> bool {
    samples.windows(2).all(|w| w[0] == w[1])
}

pub fn estimate_moments(samples: &[f64], mode: EstimatorMode) -> Result<MomentEstimates> {
    if samples.len() < 4 {
        return Err(Error::arg(format!(
            "kurtosis needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::arg("samples must be finite"));
    }
    if all_identical(samples) {
        return Err(Error::arg("samples have zero variance"));
    }
    let dof = samples.len() as f64 - 1.0;
    let mean = mode.mean(samples);
    let (mut m2, mut m4) = (0.0, 0.0);
    for x in samples {
        let d2 = (x - mean).powi(2);
        m2 += d2;
        m4 += d2 * d2;
    }
    let variance = m2 / dof;
    if !(variance > 0.0) {
        return Err(Error::arg("samples have zero variance"));
    }
    let kurtosis = (m4 / dof) / (variance * variance) - 3.0;
    Ok(MomentEstimates {
        mean,
        variance,
        kurtosis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_signs() {
        let m = estimate_moments(&[-1.0, 1.0, -1.0, 1.0], EstimatorMode::Standard).unwrap();
        assert_eq!(m.mean, 0.0);
        assert!((m.variance - 4.0 / 3.0).abs() < 1e-15);
        // (4/3) / (16/9) − 3
        assert!((m.kurtosis + 2.25).abs() < 1e-14);
    }

    #[test]
    fn paper_literal_mean_divides_by_m_minus_one() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let std = estimate_moments(&xs, EstimatorMode::Standard).unwrap();
        let lit = estimate_moments(&xs, EstimatorMode::PaperLiteral).unwrap();
        assert_eq!(std.mean, 2.5);
        assert!((lit.mean - 10.0 / 3.0).abs() < 1e-15);
        assert!(lit.variance > std.variance);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(matches!(
            estimate_moments(&[1.0, 2.0, 3.0], EstimatorMode::Standard),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            estimate_moments(&[5.0; 8], EstimatorMode::Standard),
            Err(Error::Argument(_))
        ));
        assert!(estimate_moments(&[1.0, 2.0, f64::NAN, 4.0], EstimatorMode::Standard).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(
            "paper-literal".parse::<EstimatorMode>().unwrap(),
            EstimatorMode::PaperLiteral
        );
        assert!("biased".parse::<EstimatorMode>().is_err());
    }
}
