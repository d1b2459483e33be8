//! Generalized Gaussian density
//!
//! ```text
//! p(x) = β / (2αΓ(1/β)) · exp(−(|x − μ| / α)^β)
//! ```
//!
//! with the moment relations
//!
//! ```text
//! σ² = α²Γ(3/β) / Γ(1/β)
//! κ  = Γ(5/β)Γ(1/β) / Γ(3/β)² − 3
//! ```
//!
//! Fitting is by moment matching: the sample excess kurtosis is inverted for
//! the shape β by bisection, then the scale α follows from the variance.

use std::f64::consts::LN_2;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use super::moments::{estimate_moments, EstimatorMode, MomentEstimates};
use super::sampling::chunked;
use crate::error::{Error, Result};

/// Lower end of the shape range used when fitting.
pub const BETA_MIN: f64 = 0.15;
/// Upper end of the shape range used when fitting.
pub const BETA_MAX: f64 = 20.0;

const BISECTION_MAX_ITER: usize = 200;
const CLAMP_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GgdParams {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl GgdParams {
    pub fn new(mu: f64, alpha: f64, beta: f64) -> Result<Self> {
        let ok =
            mu.is_finite() && alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0;
        if !ok {
            return Err(Error::arg(format!(
                "invalid GGD parameters mu={mu}, alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { mu, alpha, beta })
    }

    /// `ln(β / (2αΓ(1/β)))`, the log density at the mode.
    pub fn log_peak(&self) -> f64 {
        self.beta.ln() - LN_2 - self.alpha.ln() - ln_gamma(1.0 / self.beta)
    }

    pub fn variance(&self) -> f64 {
        moments_from_params(self.alpha, self.beta).0
    }
}

pub fn ggd_log_pdf(x: f64, p: &GgdParams) -> f64 {
    p.log_peak() - ((x - p.mu).abs() / p.alpha).powf(p.beta)
}

pub fn ggd_pdf(x: f64, p: &GgdParams) -> f64 {
    ggd_log_pdf(x, p).exp()
}

/// `(σ², κ)` of a GGD with scale `alpha` and shape `beta`.
pub fn moments_from_params(alpha: f64, beta: f64) -> (f64, f64) {
    let (g1, g3) = (ln_gamma(1.0 / beta), ln_gamma(3.0 / beta));
    let sigma2 = alpha * alpha * (g3 - g1).exp();
    (sigma2, kurtosis_of_shape(beta))
}

/// Excess kurtosis as a function of the shape alone.
pub fn kurtosis_of_shape(beta: f64) -> f64 {
    let lr = ln_gamma(5.0 / beta) + ln_gamma(1.0 / beta) - 2.0 * ln_gamma(3.0 / beta);
    lr.exp() - 3.0
}

/// Bounds that sample kurtosis is clamped to before inversion.
pub fn kurtosis_bounds() -> (f64, f64) {
    (
        kurtosis_of_shape(BETA_MAX) + CLAMP_MARGIN,
        kurtosis_of_shape(BETA_MIN) - CLAMP_MARGIN,
    )
}

/// Outcome of a kurtosis inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeEstimate {
    pub beta: f64,
    /// Kurtosis actually inverted, after clamping.
    pub target_kurtosis: f64,
    pub clamped: bool,
    pub iterations: usize,
}

/// Solve `κ(β) = kappa_hat` for β on `[BETA_MIN, BETA_MAX]`.
///
/// `κ(β)` is strictly decreasing there, so plain bisection always brackets
/// the root. Out-of-range targets are clamped and flagged.
pub fn invert_kurtosis_detailed(kappa_hat: f64) -> Result<ShapeEstimate> {
    if !kappa_hat.is_finite() {
        return Err(Error::arg("kurtosis must be finite"));
    }
    let (lo_k, hi_k) = kurtosis_bounds();
    let target = kappa_hat.clamp(lo_k, hi_k);
    let clamped = target != kappa_hat;

    let (mut lo, mut hi) = (BETA_MIN, BETA_MAX);
    let mut iterations = 0;
    let mut beta = 0.5 * (lo + hi);
    while iterations < BISECTION_MAX_ITER {
        iterations += 1;
        beta = 0.5 * (lo + hi);
        let k = kurtosis_of_shape(beta);
        if k == target {
            break;
        }
        // decreasing: too much kurtosis means β is too small
        if k > target {
            lo = beta;
        } else {
            hi = beta;
        }
        // run to machine resolution; κ is steep near BETA_MIN
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            beta = 0.5 * (lo + hi);
            break;
        }
    }
    Ok(ShapeEstimate {
        beta,
        target_kurtosis: target,
        clamped,
        iterations,
    })
}

pub fn invert_kurtosis(kappa_hat: f64) -> Result<f64> {
    invert_kurtosis_detailed(kappa_hat).map(|s| s.beta)
}

/// Scale α that gives variance `sigma2` at shape `beta`.
pub fn alpha_from_variance(sigma2: f64, beta: f64) -> f64 {
    (sigma2 * (ln_gamma(1.0 / beta) - ln_gamma(3.0 / beta)).exp()).sqrt()
}

/// Diagnostics of a moment-matched GGD fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GgdFitReport {
    pub moments: MomentEstimates,
    pub shape: ShapeEstimate,
    pub estimator: EstimatorMode,
}

pub fn fit_ggd(samples: &[f64], mode: EstimatorMode) -> Result<(GgdParams, GgdFitReport)> {
    let moments = estimate_moments(samples, mode)?;
    let shape = invert_kurtosis_detailed(moments.kurtosis)?;
    let alpha = alpha_from_variance(moments.variance, shape.beta);
    let params = GgdParams::new(moments.mean, alpha, shape.beta)?;
    Ok((
        params,
        GgdFitReport {
            moments,
            shape,
            estimator: mode,
        },
    ))
}

/// `n` GGD draws, deterministic in `seed`:
/// `μ + s·α·G^(1/β)` with `G ~ Gamma(1/β, 1)` and a fair random sign `s`.
pub fn sample_ggd(p: &GgdParams, n: usize, seed: u64) -> Vec<f64> {
    let gamma = Gamma::new(1.0 / p.beta, 1.0).expect("validated parameters");
    let inv_beta = 1.0 / p.beta;
    let (mu, alpha) = (p.mu, p.alpha);
    chunked(n, seed, |rng| {
        let magnitude = alpha * gamma.sample(rng).powf(inv_beta);
        if rng.random::<bool>() {
            mu + magnitude
        } else {
            mu - magnitude
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{gd_pdf, GaussianParams};
    use std::f64::consts::SQRT_2;

    #[test]
    fn reduces_to_gaussian_at_beta_two() {
        let g = GgdParams::new(0.0, SQRT_2, 2.0).unwrap();
        let n = GaussianParams::new(0.0, 1.0).unwrap();
        let mut x = -8.0;
        while x <= 8.0 {
            assert!((ggd_pdf(x, &g) - gd_pdf(x, &n)).abs() < 1e-10);
            x += 0.01;
        }
    }

    #[test]
    fn peak_and_laplace_value() {
        let p = GgdParams::new(1.5, 0.7, 1.3).unwrap();
        let peak = 1.3 / (2.0 * 0.7 * crate::distributions::gamma::gamma(1.0 / 1.3));
        assert!((ggd_pdf(1.5, &p) - peak).abs() < 1e-14);
        let lap = GgdParams::new(0.0, 1.0, 1.0).unwrap();
        assert!((ggd_pdf(1.0, &lap) - 0.183_939_720_585_721).abs() < 1e-14);
    }

    #[test]
    fn log_pdf_tail_stays_finite() {
        let lap = GgdParams::new(0.0, 1.0, 1.0).unwrap();
        let lp = ggd_log_pdf(50.0, &lap);
        assert!((lp - (0.5f64.ln() - 50.0)).abs() < 1e-12);
        let p = GgdParams::new(0.0, 1.0, 8.0).unwrap();
        assert!(ggd_log_pdf(100.0, &p).is_finite());
    }

    #[test]
    fn moment_relations() {
        assert!(kurtosis_of_shape(2.0).abs() < 1e-13);
        assert!((kurtosis_of_shape(1.0) - 3.0).abs() < 1e-13);
        let (s2, _) = moments_from_params(SQRT_2, 2.0);
        assert!((s2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn alpha_examples() {
        assert!((alpha_from_variance(1.0, 2.0) - SQRT_2).abs() < 1e-14);
        assert!((alpha_from_variance(2.0, 1.0) - 1.0).abs() < 1e-14);
        for (s, b) in [(0.3, 0.4), (1.0, 1.7), (17.0, 9.0)] {
            let a = alpha_from_variance(s, b);
            assert!((moments_from_params(a, b).0 - s).abs() < 1e-12 * s.max(1.0));
        }
    }

    #[test]
    fn inversion_special_points() {
        assert!((invert_kurtosis(0.0).unwrap() - 2.0).abs() < 1e-8);
        assert!((invert_kurtosis(3.0).unwrap() - 1.0).abs() < 1e-8);
        // root of κ(β) = 1 from a 40-digit bisection
        assert!((invert_kurtosis(1.0).unwrap() - 1.406_330_331_367_695).abs() < 1e-6);
    }

    #[test]
    fn inversion_residual() {
        for k in [-1.1, -0.5, 0.0, 0.3, 2.0, 10.0, 100.0] {
            let s = invert_kurtosis_detailed(k).unwrap();
            assert!(!s.clamped);
            assert!(s.iterations <= 200);
            let r = (kurtosis_of_shape(s.beta) - k).abs() / k.abs().max(1.0);
            assert!(r < 1e-10, "k={k} residual {r:e}");
        }
    }

    #[test]
    fn out_of_range_kurtosis_is_clamped() {
        let low = invert_kurtosis_detailed(-2.25).unwrap();
        assert!(low.clamped);
        assert!((low.beta - BETA_MAX).abs() < 1e-6);
        let high = invert_kurtosis_detailed(1e9).unwrap();
        assert!(high.clamped);
        assert!((high.beta - BETA_MIN).abs() < 1e-6);
        assert!(invert_kurtosis(f64::NAN).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = GgdParams::new(0.0, 1.0, 1.5).unwrap();
        assert_eq!(sample_ggd(&p, 20_000, 3), sample_ggd(&p, 20_000, 3));
        assert_ne!(sample_ggd(&p, 100, 3), sample_ggd(&p, 100, 4));
    }

    #[test]
    fn fit_needs_four_samples() {
        assert!(fit_ggd(&[1.0, 2.0, 3.0], EstimatorMode::Standard).is_err());
    }
}
