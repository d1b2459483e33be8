use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::pulse::{transmit_signal, PulseSpec};
use crate::distributions::{sample_gd, GaussianParams};
use crate::error::{Error, Result};
use crate::par;

/// Uniformly sampled real waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    /// Time of `samples[0]`, ns.
    pub start: f64,
    /// GHz (samples per ns).
    pub sample_rate: f64,
    pub samples: Vec<f64>,
}

impl Waveform {
    pub fn period(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn time(&self, i: usize) -> f64 {
        self.start + i as f64 / self.sample_rate
    }

    /// Evaluate `signal` on a grid of `len` samples starting at `start`.
    pub fn sample<F>(start: f64, sample_rate: f64, len: usize, signal: F) -> Waveform
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        let samples = par::map_range(len, |i| signal(start + i as f64 / sample_rate));
        Waveform {
            start,
            sample_rate,
            samples,
        }
    }
}

/// Discrete multipath channel `Σₙ aₙ δ(t − τₙ)` plus white Gaussian noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub amplitudes: Vec<f64>,
    /// ns, strictly increasing.
    pub delays: Vec<f64>,
    /// Two-sided noise PSD `N₀/2` in amplitude² per GHz; the per-sample noise
    /// variance at rate `fs` is `noise_psd · fs`.
    pub noise_psd: f64,
    pub los: bool,
    /// Mean of the exponential excess delay applied to the direct path when
    /// generated through [`ChannelSpec::indoor`], ns.
    pub nlos_excess_delay_mean: f64,
}

/// Parameters of the random indoor multipath profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    /// Number of paths including the direct one.
    pub path_count: usize,
    /// Mean inter-arrival time of reflections, ns.
    pub arrival_mean: f64,
    /// Power decay constant of the reflections, ns.
    pub decay: f64,
    /// Amplitude of the first reflection relative to an unobstructed direct path.
    pub reflection_gain: f64,
    /// Direct-path amplitude factor when obstructed.
    pub nlos_direct_gain: f64,
    pub nlos_excess_delay_mean: f64,
    pub noise_psd: f64,
}

impl Default for ProfileParams {
    fn default() -> Self {
        Self {
            path_count: 6,
            arrival_mean: 1.5,
            decay: 4.0,
            reflection_gain: 0.6,
            nlos_direct_gain: 0.15,
            nlos_excess_delay_mean: 0.3,
            noise_psd: 0.0,
        }
    }
}

impl ChannelSpec {
    pub fn single_path(delay: f64, gain: f64) -> Self {
        Self {
            amplitudes: vec![gain],
            delays: vec![delay],
            noise_psd: 0.0,
            los: true,
            nlos_excess_delay_mean: 0.0,
        }
    }

    /// Random indoor profile whose direct path arrives after `direct_delay` ns.
    ///
    /// Reflections follow exponentially distributed inter-arrival times with
    /// exponentially decaying amplitudes of random sign. An obstructed (NLoS)
    /// direct path is attenuated by `nlos_direct_gain` and delayed by an
    /// exponential excess; reflections keep their timing.
    pub fn indoor<R: Rng + ?Sized>(
        direct_delay: f64,
        los: bool,
        profile: &ProfileParams,
        rng: &mut R,
    ) -> Result<Self> {
        if profile.path_count < 1 || !(profile.arrival_mean > 0.0) || !(profile.decay > 0.0) {
            return Err(Error::arg("invalid multipath profile"));
        }
        let arrivals =
            Exp::new(1.0 / profile.arrival_mean).map_err(|e| Error::arg(e.to_string()))?;
        let mut amplitudes = Vec::with_capacity(profile.path_count);
        let mut delays = Vec::with_capacity(profile.path_count);
        let excess = if los || profile.nlos_excess_delay_mean <= 0.0 {
            0.0
        } else {
            Exp::new(1.0 / profile.nlos_excess_delay_mean)
                .map_err(|e| Error::arg(e.to_string()))?
                .sample(rng)
        };
        amplitudes.push(if los { 1.0 } else { profile.nlos_direct_gain });
        delays.push(direct_delay + excess);
        let mut t = direct_delay;
        while delays.len() < profile.path_count {
            // keep at least a pulse width between arrivals
            t += 0.5 + arrivals.sample(rng);
            if t <= *delays.last().unwrap() {
                continue;
            }
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let gain = profile.reflection_gain * (-(t - direct_delay) / profile.decay).exp();
            amplitudes.push(sign * gain);
            delays.push(t);
        }
        let spec = Self {
            amplitudes,
            delays,
            noise_psd: profile.noise_psd,
            los,
            nlos_excess_delay_mean: profile.nlos_excess_delay_mean,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.amplitudes.is_empty() || self.amplitudes.len() != self.delays.len() {
            return Err(Error::arg(
                "channel needs matching, non-empty amplitude and delay lists",
            ));
        }
        if !self.delays.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::arg("channel delays must be strictly increasing"));
        }
        if !(self.noise_psd >= 0.0) {
            return Err(Error::arg("noise_psd must be non-negative"));
        }
        Ok(())
    }

    /// Noiseless channel output for transmit signal `tx` at time `t`.
    pub fn response(&self, tx: &PulseSpec, t: f64) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.delays)
            .map(|(a, tau)| a * transmit_signal(tx, t - tau))
            .sum()
    }
}

/// `r(t) = Σₙ aₙ s(t − τₙ) + n(t)` on a sample grid. Noise is white Gaussian
/// with variance `noise_psd · sample_rate`, deterministic in `seed`.
pub fn received_signal(
    tx: &PulseSpec,
    channel: &ChannelSpec,
    start: f64,
    sample_rate: f64,
    len: usize,
    seed: u64,
) -> Result<Waveform> {
    tx.validate()?;
    channel.validate()?;
    if !(sample_rate > 0.0) {
        return Err(Error::arg("sample_rate must be positive"));
    }
    let mut rx = Waveform::sample(start, sample_rate, len, |t| channel.response(tx, t));
    if channel.noise_psd > 0.0 {
        let noise = GaussianParams::new(0.0, channel.noise_psd * sample_rate)?;
        for (s, n) in rx.samples.iter_mut().zip(sample_gd(&noise, len, seed)) {
            *s += n;
        }
    }
    Ok(rx)
}
