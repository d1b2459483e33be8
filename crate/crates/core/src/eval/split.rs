use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ClassLabel, Dataset};

fn take_count(n: usize, fraction: f64) -> usize {
    ((n as f64) * fraction).round() as usize
}

/// Partition positions `0..labels.len()` into (train, rest). Both halves
/// are returned in ascending order.
///
/// Stratified splits shuffle each class separately and keep
/// `round(n_class · fraction)` rows of it for training.
pub fn split_positions(
    labels: &[Option<ClassLabel>],
    train_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::arg("train_fraction must lie in (0, 1)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut rest = Vec::new();
    let groups: Vec<Vec<usize>> = if stratified {
        if labels.iter().any(Option::is_none) {
            return Err(Error::arg("stratified split needs every sample labeled"));
        }
        let by_class: Vec<Vec<usize>> = ClassLabel::ALL
            .iter()
            .map(|&c| {
                (0..labels.len())
                    .filter(|&i| labels[i] == Some(c))
                    .collect()
            })
            .collect();
        if by_class.iter().any(Vec::is_empty) {
            return Err(Error::arg("stratified split needs both classes present"));
        }
        by_class
    } else {
        vec![(0..labels.len()).collect()]
    };
    for mut group in groups {
        group.shuffle(&mut rng);
        let k = take_count(group.len(), train_fraction);
        train.extend_from_slice(&group[..k]);
        rest.extend_from_slice(&group[k..]);
    }
    train.sort_unstable();
    rest.sort_unstable();
    Ok((train, rest))
}

/// Split a dataset into (train, validation).
pub fn split_dataset(
    dataset: &Dataset,
    train_fraction: f64,
    seed: u64,
    stratified: bool,
) -> Result<(Dataset, Dataset)> {
    let labels: Vec<Option<ClassLabel>> = dataset.samples.iter().map(|s| s.label).collect();
    let (train, rest) = split_positions(&labels, train_fraction, seed, stratified)?;
    Ok((dataset.select(&train), dataset.select(&rest)))
}

/// Disjoint train / validation / test positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeWaySplit {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified three-way split. `train` and `validation` are fractions of the
/// whole; the test set receives the remainder.
pub fn split_three_way(
    labels: &[ClassLabel],
    train: f64,
    validation: f64,
    seed: u64,
) -> Result<ThreeWaySplit> {
    if !(train > 0.0 && validation > 0.0 && train + validation < 1.0) {
        return Err(Error::arg(
            "need train > 0, validation > 0 and train + validation < 1",
        ));
    }
    let opt: Vec<Option<ClassLabel>> = labels.iter().map(|&l| Some(l)).collect();
    let (train_pos, rest) = split_positions(&opt, train, seed, true)?;
    let rest_labels: Vec<Option<ClassLabel>> = rest.iter().map(|&p| opt[p]).collect();
    let share = validation / (1.0 - train);
    let (val, test) = split_positions(&rest_labels, share, seed.wrapping_add(1), true)?;
    Ok(ThreeWaySplit {
        train: train_pos,
        validation: val.into_iter().map(|i| rest[i]).collect(),
        test: test.into_iter().map(|i| rest[i]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RangingSample, UwbConfig};
    use std::collections::BTreeSet;

    fn imbalanced_dataset() -> Dataset {
        let samples = (0..550)
            .map(|i| RangingSample {
                index: i,
                estimated_distance: 1.0,
                true_distance: None,
                fp_amp: [1.0; 3],
                cir_power: 1.0,
                preamble_count: 8,
                label: Some(if i < 500 {
                    ClassLabel::Los
                } else {
                    ClassLabel::Nlos
                }),
            })
            .collect();
        Dataset::new(UwbConfig::default(), samples)
    }

    #[test]
    fn stratified_counts() {
        let d = imbalanced_dataset();
        let (train, val) = split_dataset(&d, 0.6, 3, true).unwrap();
        assert_eq!(train.count_label(ClassLabel::Los), 300);
        assert_eq!(train.count_label(ClassLabel::Nlos), 30);
        assert_eq!(val.count_label(ClassLabel::Los), 200);
        assert_eq!(val.count_label(ClassLabel::Nlos), 20);
    }

    #[test]
    fn partition_and_determinism() {
        let d = imbalanced_dataset();
        for stratified in [true, false] {
            let (a, b) = split_dataset(&d, 0.37, 11, stratified).unwrap();
            let ia: BTreeSet<usize> = a.samples.iter().map(|s| s.index).collect();
            let ib: BTreeSet<usize> = b.samples.iter().map(|s| s.index).collect();
            assert!(ia.is_disjoint(&ib));
            assert_eq!(ia.len() + ib.len(), 550);
            assert_eq!(split_dataset(&d, 0.37, 11, stratified).unwrap(), (a, b));
        }
    }

    #[test]
    fn one_class_stratified_fails() {
        let mut d = imbalanced_dataset();
        d.samples.truncate(100);
        assert!(split_dataset(&d, 0.5, 1, true).is_err());
        assert!(split_dataset(&d, 0.5, 1, false).is_ok());
        assert!(split_dataset(&d, 1.0, 1, false).is_err());
    }

    #[test]
    fn three_way_is_disjoint_and_exhaustive() {
        let labels: Vec<ClassLabel> = imbalanced_dataset().labels().unwrap();
        let s = split_three_way(&labels, 0.6, 0.2, 42).unwrap();
        assert_eq!(
            (s.train.len(), s.validation.len(), s.test.len()),
            (330, 110, 110)
        );
        let mut all: Vec<usize> = s
            .train
            .iter()
            .chain(&s.validation)
            .chain(&s.test)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..550).collect::<Vec<_>>());
        let nlos_test = s
            .test
            .iter()
            .filter(|&&p| labels[p] == ClassLabel::Nlos)
            .count();
        assert_eq!(nlos_test, 10);
    }
}
