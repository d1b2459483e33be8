//! Synthetic IR-UWB ranging data.
//!
//! Two tiers: a waveform-level model (pulse train, multipath channel with
//! AWGN, leading-edge ToA) for ranging correctness, and a feature-level
//! generator that draws per-class features directly for classifier
//! experiments at scale.

mod channel;
mod pulse;
mod scenario;
mod toa;

pub use channel::{received_signal, ChannelSpec, ProfileParams, Waveform};
pub use pulse::{gaussian_doublet, transmit_signal, PulseSpec};
pub use scenario::{
    synthesize_dataset, ClassGenerator, ScenarioSpec, LOS_ERROR_ALPHA, LOS_ERROR_BETA,
    NLOS_BIAS_MEAN,
};
pub use toa::{
    distance_from_toa, estimate_toa, toa_from_distance, ToaEstimator, WaveformRanging,
    DEFAULT_LEADING_EDGE_FRACTION, DEFAULT_PULSE_WIDTH, DEFAULT_SAMPLE_RATE, SPEED_OF_LIGHT,
};
