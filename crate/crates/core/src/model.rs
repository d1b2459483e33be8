//! Domain types shared by every stage: kit configuration, ranging samples,
//! class labels, derived feature vectors and the dataset container.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Power offset `A` (dBm) of the DW1000 power formulas at a 16 MHz PRF.
pub const POWER_OFFSET_PRF16: f64 = 113.77;
/// Power offset `A` (dBm) of the DW1000 power formulas at a 64 MHz PRF.
pub const POWER_OFFSET_PRF64: f64 = 121.74;

/// Radio configuration of the ranging kit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UwbConfig {
    /// Mbps.
    pub data_rate: f64,
    /// MHz.
    pub center_frequency: f64,
    /// MHz.
    pub bandwidth: f64,
    pub channel: u8,
    /// Pulse repetition frequency, MHz.
    pub prf: f64,
    /// Constant `A` subtracted in the first-path and RX power formulas, dBm.
    pub power_offset: f64,
}

impl Default for UwbConfig {
    /// MDEK1001 kit: 6.8 Mbps, channel 2 (3993.6 MHz, 499.2 MHz), PRF 16 MHz.
    fn default() -> Self {
        Self {
            data_rate: 6.8,
            center_frequency: 3993.6,
            bandwidth: 499.2,
            channel: 2,
            prf: 16.0,
            power_offset: POWER_OFFSET_PRF16,
        }
    }
}

impl UwbConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.prf > 0.0 && self.bandwidth > 0.0 && self.center_frequency > 0.0) {
            return Err(Error::arg(
                "prf, bandwidth and center_frequency must be positive",
            ));
        }
        if !self.power_offset.is_finite() {
            return Err(Error::arg("power_offset must be finite"));
        }
        if self.prf == 16.0 && self.power_offset != POWER_OFFSET_PRF16 {
            return Err(Error::arg(format!(
                "a 16 MHz PRF requires power_offset = {POWER_OFFSET_PRF16}"
            )));
        }
        Ok(())
    }
}

/// LoS / NLoS class. NLoS is the positive (anomalous) class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Los = 0,
    Nlos = 1,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 2] = [ClassLabel::Los, ClassLabel::Nlos];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(ClassLabel::Los),
            1 => Some(ClassLabel::Nlos),
            _ => None,
        }
    }

    pub fn is_nlos(self) -> bool {
        self == ClassLabel::Nlos
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::Los => "los",
            ClassLabel::Nlos => "nlos",
        })
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0" | "los" => Ok(ClassLabel::Los),
            "1" | "nlos" => Ok(ClassLabel::Nlos),
            other => Err(Error::arg(format!("unknown class label `{other}`"))),
        }
    }
}

/// One two-way ranging measurement as reported by the tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangingSample {
    pub index: usize,
    /// Meters.
    pub estimated_distance: f64,
    /// Meters, when a ground-truth measurement exists.
    pub true_distance: Option<f64>,
    /// First-path harmonic amplitudes F1, F2, F3 (raw register counts).
    pub fp_amp: [f64; 3],
    /// CIR power register value (raw counts).
    pub cir_power: f64,
    /// Preamble accumulation count N.
    pub preamble_count: u32,
    pub label: Option<ClassLabel>,
}

/// Derived per-sample features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    /// dBm.
    pub first_path_power: f64,
    /// dBm.
    pub rx_power: f64,
    /// dB, `rx_power - first_path_power`.
    pub power_difference: f64,
    /// m².
    pub range_variance: f64,
    /// Meters, estimated minus true.
    pub distance_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub config: UwbConfig,
    pub samples: Vec<RangingSample>,
}

impl Dataset {
    pub fn new(config: UwbConfig, samples: Vec<RangingSample>) -> Self {
        Self { config, samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Labels of every sample; fails if any sample is unlabeled.
    pub fn labels(&self) -> Result<Vec<ClassLabel>> {
        self.samples
            .iter()
            .map(|s| {
                s.label.ok_or_else(|| {
                    Error::arg(format!(
                        "sample {} is unlabeled; evaluation needs labels",
                        s.index
                    ))
                })
            })
            .collect()
    }

    pub fn count_label(&self, label: ClassLabel) -> usize {
        self.samples
            .iter()
            .filter(|s| s.label == Some(label))
            .count()
    }

    /// Subset by positions in `samples`, preserving the given order.
    pub fn select(&self, positions: &[usize]) -> Dataset {
        Dataset {
            config: self.config,
            samples: positions.iter().map(|&p| self.samples[p].clone()).collect(),
        }
    }
}

/// Which sample invariant a [`Violation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    PreambleCountPositive,
    AmplitudeNonNegative,
    CirPowerNonNegative,
    DistanceNonNegative,
    TrueDistanceNonNegative,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::PreambleCountPositive => "preamble_count >= 1",
            Rule::AmplitudeNonNegative => "fp_amp >= 0",
            Rule::CirPowerNonNegative => "cir_power >= 0",
            Rule::DistanceNonNegative => "estimated_distance >= 0",
            Rule::TrueDistanceNonNegative => "true_distance >= 0",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub sample: usize,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sample {}: violates {}", self.sample, self.rule)
    }
}

/// Check every sample against the [`RangingSample`] invariants. An empty
/// report means the dataset is valid. NaN values count as violations.
pub fn validate_dataset(dataset: &Dataset) -> Vec<Violation> {
    let mut report = Vec::new();
    for s in &dataset.samples {
        let mut push = |rule| {
            report.push(Violation {
                sample: s.index,
                rule,
            })
        };
        if s.preamble_count < 1 {
            push(Rule::PreambleCountPositive);
        }
        if !s.fp_amp.iter().all(|&a| a >= 0.0) {
            push(Rule::AmplitudeNonNegative);
        }
        if !(s.cir_power >= 0.0) {
            push(Rule::CirPowerNonNegative);
        }
        if !(s.estimated_distance >= 0.0) {
            push(Rule::DistanceNonNegative);
        }
        if let Some(t) = s.true_distance {
            if !(t >= 0.0) {
                push(Rule::TrueDistanceNonNegative);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample(index: usize) -> RangingSample {
        RangingSample {
            index,
            estimated_distance: 2.0,
            true_distance: Some(2.0),
            fp_amp: [64.0, 64.0, 64.0],
            cir_power: 20_000.0,
            preamble_count: 128,
            label: Some(ClassLabel::Los),
        }
    }

    #[test]
    fn default_config_is_the_kit() {
        let c = UwbConfig::default();
        assert_eq!(c.power_offset, 113.77);
        assert_eq!(c.channel, 2);
        assert!(c.validate().is_ok());
        let bad = UwbConfig {
            power_offset: 100.0,
            ..c
        };
        assert!(bad.validate().is_err());
        let other_prf = UwbConfig {
            prf: 64.0,
            power_offset: POWER_OFFSET_PRF64,
            ..c
        };
        assert!(other_prf.validate().is_ok());
    }

    #[test]
    fn empty_dataset_is_valid() {
        let d = Dataset::new(UwbConfig::default(), vec![]);
        assert!(validate_dataset(&d).is_empty());
    }

    #[test]
    fn zero_preamble_count_is_reported() {
        let mut s = sample(7);
        s.preamble_count = 0;
        let d = Dataset::new(UwbConfig::default(), vec![sample(6), s]);
        let report = validate_dataset(&d);
        assert_eq!(
            report,
            vec![Violation {
                sample: 7,
                rule: Rule::PreambleCountPositive
            }]
        );
        assert!(report[0].to_string().contains("preamble_count"));
    }

    #[test]
    fn negative_and_nan_fields_are_reported() {
        let mut s = sample(0);
        s.fp_amp[1] = -1.0;
        s.cir_power = f64::NAN;
        s.estimated_distance = -0.1;
        let rules: Vec<Rule> = validate_dataset(&Dataset::new(UwbConfig::default(), vec![s]))
            .into_iter()
            .map(|v| v.rule)
            .collect();
        assert_eq!(
            rules,
            vec![
                Rule::AmplitudeNonNegative,
                Rule::CirPowerNonNegative,
                Rule::DistanceNonNegative
            ]
        );
    }

    #[test]
    fn labels_require_every_sample_labeled() {
        let mut s = sample(1);
        s.label = None;
        let d = Dataset::new(UwbConfig::default(), vec![sample(0), s]);
        assert!(d.labels().is_err());
        assert_eq!(d.count_label(ClassLabel::Los), 1);
    }

    #[test]
    fn label_parsing() {
        assert_eq!("1".parse::<ClassLabel>().unwrap(), ClassLabel::Nlos);
        assert_eq!("LoS".parse::<ClassLabel>().unwrap(), ClassLabel::Los);
        assert!("2".parse::<ClassLabel>().is_err());
        assert_eq!(ClassLabel::from_code(1), Some(ClassLabel::Nlos));
        assert_eq!(ClassLabel::from_code(2), None);
    }
}
