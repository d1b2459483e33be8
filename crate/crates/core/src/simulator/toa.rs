//! Leading-edge time-of-arrival estimation and range conversion.
//!
//! The received waveform is correlated with the unit-energy doublet
//! template and the Hilbert envelope of the correlator output is taken. The
//! arrival time is the first crossing of `fraction × peak`, interpolated
//! linearly between samples and corrected by the crossing offset the same
//! detector shows on a clean, noiseless pulse.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::channel::{received_signal, ChannelSpec, Waveform};
use super::pulse::{gaussian_doublet, PulseSpec};
use crate::error::{Error, Result};
use crate::par;

/// Exact SI speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const DEFAULT_SAMPLE_RATE: f64 = 64.0;
pub const DEFAULT_PULSE_WIDTH: f64 = 0.5;
pub const DEFAULT_LEADING_EDGE_FRACTION: f64 = 0.3;

/// Template half-length in pulse widths.
const TEMPLATE_SPAN: f64 = 5.0;

/// `d = c·τ` with `τ` in ns.
pub fn distance_from_toa(tau_ns: f64) -> f64 {
    SPEED_OF_LIGHT * tau_ns * 1e-9
}

/// Inverse of [`distance_from_toa`], ns.
pub fn toa_from_distance(meters: f64) -> f64 {
    meters / SPEED_OF_LIGHT * 1e9
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToaEstimator {
    pub pulse_width: f64,
    pub leading_edge_fraction: f64,
}

impl Default for ToaEstimator {
    fn default() -> Self {
        Self {
            pulse_width: DEFAULT_PULSE_WIDTH,
            leading_edge_fraction: DEFAULT_LEADING_EDGE_FRACTION,
        }
    }
}

fn template(width: f64, rate: f64) -> Vec<f64> {
    let half = (TEMPLATE_SPAN * width * rate).ceil() as usize;
    (0..=2 * half)
        .map(|j| gaussian_doublet((j as f64 - half as f64) / rate, width))
        .collect()
}

/// Correlator output aligned with the input: output `i` peaks when a pulse
/// is centred on input sample `i`.
fn matched_filter(x: &[f64], h: &[f64]) -> Vec<f64> {
    let half = h.len() / 2;
    par::map_range(x.len(), |i| {
        let mut acc = 0.0;
        for (j, &hj) in h.iter().enumerate() {
            let k = i as isize + j as isize - half as isize;
            if k >= 0 && (k as usize) < x.len() {
                acc += x[k as usize] * hj;
            }
        }
        acc
    })
}

/// Magnitude of the analytic signal, computed with zero padding to avoid
/// circular wrap-around.
fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = (2 * x.len()).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(n)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        if k == 0 || k == n / 2 {
            continue;
        } else if k < n / 2 {
            *v *= 2.0;
        } else {
            *v = Complex::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf[..x.len()].iter().map(|v| v.norm() * scale).collect()
}

/// First crossing of `fraction × max(env)`, in fractional samples.
fn leading_edge(env: &[f64], fraction: f64) -> Option<f64> {
    let peak = env.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return None;
    }
    let level = fraction * peak;
    let i = env.iter().position(|&v| v >= level)?;
    if i == 0 {
        return Some(0.0);
    }
    let (a, b) = (env[i - 1], env[i]);
    Some((i - 1) as f64 + (level - a) / (b - a))
}

impl ToaEstimator {
    pub fn validate(&self) -> Result<()> {
        if !(self.leading_edge_fraction > 0.0 && self.leading_edge_fraction < 1.0) {
            return Err(Error::arg("leading_edge_fraction must lie in (0, 1)"));
        }
        if !(self.pulse_width > 0.0) {
            return Err(Error::arg("pulse_width must be positive"));
        }
        Ok(())
    }

    /// Crossing position relative to the envelope peak for a clean pulse,
    /// in samples (negative: the crossing precedes the peak).
    fn edge_offset(&self, h: &[f64]) -> f64 {
        let mid = h.len();
        let mut clean = vec![0.0; 2 * h.len() + 1];
        clean[mid - h.len() / 2..mid + h.len() / 2 + 1].copy_from_slice(h);
        let env = hilbert_envelope(&matched_filter(&clean, h));
        leading_edge(&env, self.leading_edge_fraction).expect("template has energy") - mid as f64
    }

    /// Arrival time of the first detected path, in the waveform's time base.
    pub fn estimate(&self, rx: &Waveform) -> Result<f64> {
        self.validate()?;
        if rx.samples.is_empty() {
            return Err(Error::arg("waveform is empty"));
        }
        let h = template(self.pulse_width, rx.sample_rate);
        let env = hilbert_envelope(&matched_filter(&rx.samples, &h));
        let crossing = leading_edge(&env, self.leading_edge_fraction)
            .ok_or_else(|| Error::Detection("waveform has no energy".into()))?;
        Ok(rx.start + (crossing - self.edge_offset(&h)) / rx.sample_rate)
    }
}

/// Leading-edge ToA with the default pulse width.
pub fn estimate_toa(rx: &Waveform, leading_edge_fraction: f64) -> Result<f64> {
    ToaEstimator {
        leading_edge_fraction,
        ..ToaEstimator::default()
    }
    .estimate(rx)
}

/// Waveform-level range measurement for a single transmitted pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformRanging {
    pub pulse: PulseSpec,
    pub sample_rate: f64,
    pub estimator: ToaEstimator,
    /// Extra capture time after the last path, ns.
    pub tail: f64,
}

impl Default for WaveformRanging {
    fn default() -> Self {
        Self {
            pulse: PulseSpec {
                pulse_width: DEFAULT_PULSE_WIDTH,
                ..PulseSpec::default()
            },
            sample_rate: DEFAULT_SAMPLE_RATE,
            estimator: ToaEstimator::default(),
            tail: 10.0,
        }
    }
}

impl WaveformRanging {
    /// Transmit one pulse through `channel`, estimate the ToA relative to the
    /// emission instant and convert it to meters.
    pub fn measure(&self, channel: &ChannelSpec, seed: u64) -> Result<f64> {
        let pulse = PulseSpec {
            pulse_count: 2,
            ..self.pulse
        };
        let emit = pulse.first_emission();
        let last = channel.delays.last().copied().unwrap_or(0.0);
        let duration = emit + last + self.tail;
        let len = (duration * self.sample_rate).ceil() as usize + 1;
        let rx = received_signal(&pulse, channel, 0.0, self.sample_rate, len, seed)?;
        let toa = self.estimator.estimate(&rx)? - emit;
        Ok(distance_from_toa(toa))
    }
}
