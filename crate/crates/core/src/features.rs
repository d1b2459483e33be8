//! NLoS-discriminating features derived from raw ranging samples.
//!
//! First-path and RX power follow the DW1000 received-power formulas:
//!
//! ```text
//! FP = 10·log10((F1² + F2² + F3²) / N²) − A
//! RX = 10·log10((C · 2¹⁷) / N²) − A
//! ```
//!
//! and the power difference `RX − FP` grows when late multipath carries the
//! energy, which is typical for an obstructed direct path.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, FeatureVector, RangingSample, UwbConfig};
use crate::par;

/// CIR power scaling factor of the RX power formula.
pub const CIR_SCALE: f64 = 131_072.0;

/// Rolling window used for the range-variance feature when none is given.
pub const DEFAULT_WINDOW: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureName {
    FirstPathPower,
    RxPower,
    PowerDifference,
    RangeVariance,
    DistanceError,
}

impl FeatureName {
    pub const ALL: [FeatureName; 5] = [
        FeatureName::FirstPathPower,
        FeatureName::RxPower,
        FeatureName::PowerDifference,
        FeatureName::RangeVariance,
        FeatureName::DistanceError,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureName::FirstPathPower => "first_path_power",
            FeatureName::RxPower => "rx_power",
            FeatureName::PowerDifference => "power_difference",
            FeatureName::RangeVariance => "range_variance",
            FeatureName::DistanceError => "distance_error",
        }
    }

    fn pick(self, v: &FeatureVector) -> Option<f64> {
        match self {
            FeatureName::FirstPathPower => Some(v.first_path_power),
            FeatureName::RxPower => Some(v.rx_power),
            FeatureName::PowerDifference => Some(v.power_difference),
            FeatureName::RangeVariance => Some(v.range_variance),
            FeatureName::DistanceError => v.distance_error,
        }
    }
}

impl fmt::Display for FeatureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::arg(format!("unknown feature `{s}`")))
    }
}

/// Parse a comma-separated feature list such as `first_path_power,range_variance`.
pub fn parse_selection(list: &str) -> Result<Vec<FeatureName>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

fn check_preamble(sample: &RangingSample) -> Result<f64> {
    if sample.preamble_count == 0 {
        return Err(Error::domain("preamble_count must be at least 1"));
    }
    Ok(f64::from(sample.preamble_count))
}

/// First-path level before the power offset, `10·log10((F1²+F2²+F3²)/N²)`.
fn first_path_level(sample: &RangingSample) -> Result<f64> {
    let n = check_preamble(sample)?;
    let [f1, f2, f3] = sample.fp_amp;
    let energy = f1 * f1 + f2 * f2 + f3 * f3;
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::domain("first-path amplitudes are all zero"));
    }
    Ok(10.0 * (energy / (n * n)).log10())
}

/// Received level before the power offset, `10·log10(C·2¹⁷/N²)`.
fn rx_level(sample: &RangingSample) -> Result<f64> {
    let n = check_preamble(sample)?;
    if !(sample.cir_power > 0.0) || !sample.cir_power.is_finite() {
        return Err(Error::domain("cir_power must be positive"));
    }
    Ok(10.0 * (sample.cir_power * CIR_SCALE / (n * n)).log10())
}

/// First-path power level in dBm.
pub fn first_path_power(sample: &RangingSample, config: &UwbConfig) -> Result<f64> {
    Ok(first_path_level(sample)? - config.power_offset)
}

/// Estimated received power level in dBm.
pub fn rx_power(sample: &RangingSample, config: &UwbConfig) -> Result<f64> {
    Ok(rx_level(sample)? - config.power_offset)
}

/// Power difference of one sample taken before the offset is applied, so
/// the result does not depend on `power_offset` at all.
pub fn sample_power_difference(sample: &RangingSample) -> Result<f64> {
    Ok(power_difference(
        rx_level(sample)?,
        first_path_level(sample)?,
    ))
}

/// `rx − fp`, in dB.
pub fn power_difference(rx: f64, fp: f64) -> f64 {
    rx - fp
}

/// Unbiased variance of every length-`window` run, in order.
///
/// Element `i` covers `distances[i..i + window]`. Each window is shifted by
/// its first value and then evaluated two-pass, so constant windows give
/// exactly zero.
pub fn rolling_range_variance(distances: &[f64], window: usize) -> Result<Vec<f64>> {
    if window < 2 {
        return Err(Error::arg("range-variance window must be at least 2"));
    }
    if distances.len() < window {
        return Err(Error::arg(format!(
            "need at least {window} distances for the range-variance window, got {}",
            distances.len()
        )));
    }
    let w = window as f64;
    Ok(distances
        .windows(window)
        .map(|win| {
            let origin = win[0];
            let mean = win.iter().map(|x| x - origin).sum::<f64>() / w;
            win.iter().map(|x| (x - origin - mean).powi(2)).sum::<f64>() / (w - 1.0)
        })
        .collect())
}

/// Ranging error, `estimated − truth`. Positive means the range was overestimated,
/// which is the NLoS bias direction.
pub fn distance_error(estimated: f64, truth: f64) -> f64 {
    estimated - truth
}

/// Features restricted to a selection; rows align with dataset samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub names: Vec<FeatureName>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Rows at the given positions, in that order.
    pub fn select_rows(&self, positions: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            names: self.names.clone(),
            rows: positions.iter().map(|&p| self.rows[p].clone()).collect(),
        }
    }
}

/// Compute the full [`FeatureVector`] for every sample.
///
/// The first `window − 1` samples have no complete variance window and
/// receive the first computed variance. When the dataset is shorter than
/// the window the variance feature is reported as an argument error.
pub fn feature_vectors(dataset: &Dataset, window: usize) -> Result<Vec<FeatureVector>> {
    let distances: Vec<f64> = dataset
        .samples
        .iter()
        .map(|s| s.estimated_distance)
        .collect();
    let variance = rolling_range_variance(&distances, window)?;
    per_sample(dataset, |i| variance[i.saturating_sub(window - 1)])
}

fn per_sample(
    dataset: &Dataset,
    variance_at: impl Fn(usize) -> f64 + Sync + Send,
) -> Result<Vec<FeatureVector>> {
    let config = dataset.config;
    par::try_map_range(dataset.len(), |i| {
        let s = &dataset.samples[i];
        let fp = first_path_level(s).map_err(|e| e.at_sample(s.index))?;
        let rx = rx_level(s).map_err(|e| e.at_sample(s.index))?;
        Ok(FeatureVector {
            first_path_power: fp - config.power_offset,
            rx_power: rx - config.power_offset,
            power_difference: power_difference(rx, fp),
            range_variance: variance_at(i),
            distance_error: s
                .true_distance
                .map(|t| distance_error(s.estimated_distance, t)),
        })
    })
}

/// Extract the selected features as a matrix with one row per sample.
pub fn extract_features(
    dataset: &Dataset,
    selection: &[FeatureName],
    window: usize,
) -> Result<FeatureMatrix> {
    if selection.is_empty() {
        return Err(Error::arg("feature selection is empty"));
    }
    for (i, name) in selection.iter().enumerate() {
        if selection[..i].contains(name) {
            return Err(Error::arg(format!("feature `{name}` selected twice")));
        }
    }
    let vectors = if selection.contains(&FeatureName::RangeVariance) {
        feature_vectors(dataset, window)?
    } else {
        per_sample(dataset, |_| 0.0)?
    };
    let rows = vectors
        .iter()
        .zip(&dataset.samples)
        .map(|(v, s)| {
            selection
                .iter()
                .map(|&name| {
                    name.pick(v).ok_or_else(|| {
                        Error::arg(format!(
                            "sample {} has no true_distance; cannot compute distance_error",
                            s.index
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureMatrix {
        names: selection.to_vec(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ClassLabel;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sample(f: [f64; 3], cir: f64, n: u32) -> RangingSample {
        RangingSample {
            index: 0,
            estimated_distance: 1.0,
            true_distance: Some(1.0),
            fp_amp: f,
            cir_power: cir,
            preamble_count: n,
            label: Some(ClassLabel::Los),
        }
    }

    fn config(a: f64) -> UwbConfig {
        UwbConfig {
            power_offset: a,
            ..UwbConfig::default()
        }
    }

    #[test]
    fn first_path_power_reference_value() {
        let s = sample([64.0; 3], 20_000.0, 128);
        // 10·log10(3·64²/128²) − 113.77, evaluated at 40 digits.
        let fp = first_path_power(&s, &UwbConfig::default()).unwrap();
        assert_abs_diff_eq!(fp, -115.019_387_366_083, epsilon = 1e-9);
        let unity = sample([128.0, 0.0, 0.0], 1.0, 128);
        assert_eq!(first_path_power(&unity, &config(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn rx_power_reference_value() {
        let s = sample([64.0; 3], 20_000.0, 128);
        let rx = rx_power(&s, &UwbConfig::default()).unwrap();
        assert_abs_diff_eq!(rx, -61.728_800_173_441, epsilon = 1e-9);
        let unity = sample([1.0; 3], 128.0 * 128.0 / CIR_SCALE, 128);
        assert_eq!(rx_power(&unity, &config(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn power_difference_examples() {
        assert_abs_diff_eq!(
            power_difference(-61.728_800_173_441, -115.019_387_366_083),
            53.290_587_192_642,
            epsilon = 1e-9
        );
        assert_eq!(power_difference(-70.5, -70.5), 0.0);
        assert_eq!(power_difference(-80.0, -90.0), 10.0);
    }

    #[test]
    fn domain_errors() {
        let zero_amp = sample([0.0; 3], 1.0, 128);
        assert!(matches!(
            first_path_power(&zero_amp, &UwbConfig::default()),
            Err(Error::Domain { .. })
        ));
        let zero_n = sample([1.0; 3], 1.0, 0);
        assert!(first_path_power(&zero_n, &UwbConfig::default()).is_err());
        assert!(rx_power(&zero_n, &UwbConfig::default()).is_err());
        let zero_cir = sample([1.0; 3], 0.0, 16);
        assert!(matches!(
            rx_power(&zero_cir, &UwbConfig::default()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn rolling_variance_examples() {
        assert_eq!(rolling_range_variance(&[1.0; 4], 4).unwrap(), vec![0.0]);
        assert_eq!(rolling_range_variance(&[0.0, 2.0], 2).unwrap(), vec![2.0]);
        assert!(rolling_range_variance(&[0.0, 2.0], 1).is_err());
        assert!(rolling_range_variance(&[0.0, 2.0], 3).is_err());
    }

    #[test]
    fn rolling_variance_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..100).map(|_| rng.random_range(0.0..10.0)).collect();
        let got = rolling_range_variance(&xs, 20).unwrap();
        assert_eq!(got.len(), 81);
        for (i, v) in got.iter().enumerate() {
            let win = &xs[i..i + 20];
            // naive sum-of-squares form, independent of the two-pass path
            let s: f64 = win.iter().sum();
            let ss: f64 = win.iter().map(|x| x * x).sum();
            let brute = (ss - s * s / 20.0) / 19.0;
            assert_abs_diff_eq!(*v, brute, epsilon = 1e-10);
        }
    }

    #[test]
    fn distance_error_sign() {
        assert_eq!(distance_error(3.0, 3.0), 0.0);
        assert_abs_diff_eq!(distance_error(3.17, 3.0), 0.17, epsilon = 1e-12);
        assert_abs_diff_eq!(distance_error(3.11, 3.0), 0.11, epsilon = 1e-12);
    }

    #[test]
    fn extract_single_feature() {
        let d = Dataset::new(UwbConfig::default(), vec![sample([64.0; 3], 20_000.0, 128)]);
        let m = extract_features(&d, &[FeatureName::PowerDifference], DEFAULT_WINDOW).unwrap();
        assert_eq!((m.n_rows(), m.n_cols()), (1, 1));
        assert_abs_diff_eq!(m.rows[0][0], 53.290_587_192_642, epsilon = 1e-9);
        assert!(extract_features(&d, &[], DEFAULT_WINDOW).is_err());
        // window longer than the dataset
        assert!(extract_features(&d, &[FeatureName::RangeVariance], DEFAULT_WINDOW).is_err());
    }

    #[test]
    fn warm_up_rows_are_back_filled() {
        let samples = (0..6)
            .map(|i| RangingSample {
                index: i,
                estimated_distance: [1.0, 1.0, 1.0, 2.0, 4.0, 4.0][i],
                ..sample([10.0; 3], 100.0, 64)
            })
            .collect();
        let d = Dataset::new(UwbConfig::default(), samples);
        let m = extract_features(&d, &[FeatureName::RangeVariance], 3).unwrap();
        let col = m.column(0);
        assert_eq!(col[0], 0.0);
        assert_eq!(col[1], 0.0);
        assert_eq!(col[2], 0.0);
        assert_abs_diff_eq!(col[3], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn error_carries_sample_index() {
        let mut bad = sample([0.0; 3], 1.0, 16);
        bad.index = 42;
        let d = Dataset::new(UwbConfig::default(), vec![sample([1.0; 3], 1.0, 16), bad]);
        match extract_features(&d, &[FeatureName::FirstPathPower], 2) {
            Err(Error::Domain {
                sample: Some(42), ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn selection_parsing() {
        let sel = parse_selection("first_path_power, range_variance").unwrap();
        assert_eq!(
            sel,
            vec![FeatureName::FirstPathPower, FeatureName::RangeVariance]
        );
        assert!(parse_selection("snr").is_err());
    }

    proptest! {
        #[test]
        fn difference_is_independent_of_offset(
            f in prop::array::uniform3(1e-3f64..1e4),
            cir in 1e-3f64..1e7,
            n in 1u32..2048,
            a in -200.0f64..200.0,
            b in -200.0f64..200.0,
        ) {
            let s = sample(f, cir, n);
            let d1 = power_difference(rx_power(&s, &config(a)).unwrap(), first_path_power(&s, &config(a)).unwrap());
            let d2 = power_difference(rx_power(&s, &config(b)).unwrap(), first_path_power(&s, &config(b)).unwrap());
            prop_assert!((d1 - d2).abs() < 1e-9);
            let mut d = Dataset::new(config(a), vec![s.clone(); 3]);
            let va = feature_vectors(&d, 2).unwrap();
            d.config = config(b);
            let vb = feature_vectors(&d, 2).unwrap();
            prop_assert_eq!(va[0].power_difference.to_bits(), vb[0].power_difference.to_bits());
            prop_assert_eq!(va[0].power_difference, sample_power_difference(&s).unwrap());
        }

        #[test]
        fn first_path_power_monotone(
            f in prop::array::uniform3(1e-3f64..1e4),
            k in 0usize..3,
            bump in 1e-2f64..1e3,
            n in 2u32..2048,
        ) {
            let c = UwbConfig::default();
            let base = first_path_power(&sample(f, 1.0, n), &c).unwrap();
            let mut g = f;
            g[k] += bump;
            prop_assert!(first_path_power(&sample(g, 1.0, n), &c).unwrap() > base);
            prop_assert!(first_path_power(&sample(f, 1.0, n - 1), &c).unwrap() > base);
        }

        #[test]
        fn rolling_variance_non_negative(xs in prop::collection::vec(-1e3f64..1e3, 2..60), w in 2usize..10) {
            prop_assume!(xs.len() >= w);
            let v = rolling_range_variance(&xs, w).unwrap();
            prop_assert!(v.iter().all(|&x| x >= 0.0));
        }

        #[test]
        fn rolling_variance_zero_on_constant(c in -1e3f64..1e3, len in 2usize..40, w in 2usize..10) {
            prop_assume!(len >= w);
            let v = rolling_range_variance(&vec![c; len], w).unwrap();
            prop_assert!(v.iter().all(|&x| x == 0.0));
        }
    }
}
