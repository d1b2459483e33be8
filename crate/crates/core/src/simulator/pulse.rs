use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit-energy Gaussian doublet (second derivative of a Gaussian, sign
/// chosen so the centre lobe is positive):
///
/// ```text
/// p(t) = K · (1 − 4π t²/w²) · exp(−2π t²/w²)
/// ```
///
/// `width` is the pulse-shape parameter `w` in ns; nearly all energy lies
/// within `|t| < w`.
pub fn gaussian_doublet(t: f64, width: f64) -> f64 {
    let u2 = 4.0 * PI * (t / width).powi(2);
    doublet_scale(width) * (1.0 - u2) * (-0.5 * u2).exp()
}

/// `K` such that `∫ p(t)² dt = 1`; the unscaled energy is `(3/4)·s·√π`
/// with `s = w / (2√π)`.
fn doublet_scale(width: f64) -> f64 {
    let s = width / (2.0 * PI.sqrt());
    (4.0 / (3.0 * s * PI.sqrt())).sqrt()
}

/// Impulse-radio pulse train.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// Energy per pulse (normalized units).
    pub energy: f64,
    /// ns.
    pub pulse_width: f64,
    /// Pulse period `T_p`, ns.
    pub period: f64,
    /// `K`; the train carries pulses `k = 1 … K − 1`.
    pub pulse_count: usize,
}

impl Default for PulseSpec {
    fn default() -> Self {
        Self {
            energy: 1.0,
            pulse_width: 0.5,
            period: 10.0,
            pulse_count: 2,
        }
    }
}

impl PulseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.energy > 0.0) {
            return Err(Error::arg("pulse energy must be positive"));
        }
        if !(self.pulse_width > 0.0) || !(self.period > self.pulse_width) {
            return Err(Error::arg("need 0 < pulse_width < period"));
        }
        if self.pulse_count < 1 {
            return Err(Error::arg("pulse_count must be at least 1"));
        }
        Ok(())
    }

    /// Time of the first transmitted pulse (`k = 1`), ns.
    pub fn first_emission(&self) -> f64 {
        self.period
    }

    /// Pulse indices whose support (±6 widths) covers `t`.
    fn active(&self, t: f64) -> impl Iterator<Item = usize> {
        let reach = 6.0 * self.pulse_width;
        let last = self.pulse_count as i64 - 1;
        let lo = (((t - reach) / self.period).ceil() as i64).max(1);
        let hi = (((t + reach) / self.period).floor() as i64).min(last);
        (lo..=hi).map(|k| k as usize)
    }
}

/// `√E · Σ_{k=1}^{K−1} p(t − k·T_p)`.
///
/// The sum starts at `k = 1`, so a train with `K` pulses carries `K − 1`
/// of them and the first is centred at `T_p`.
pub fn transmit_signal(spec: &PulseSpec, t: f64) -> f64 {
    spec.energy.sqrt()
        * spec
            .active(t)
            .map(|k| gaussian_doublet(t - k as f64 * spec.period, spec.pulse_width))
            .sum::<f64>()
}
