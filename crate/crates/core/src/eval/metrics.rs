use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ClassLabel;

/// Binary confusion counts with NLoS as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn record(&mut self, predicted: ClassLabel, truth: ClassLabel) {
        match (predicted, truth) {
            (ClassLabel::Nlos, ClassLabel::Nlos) => self.tp += 1,
            (ClassLabel::Nlos, ClassLabel::Los) => self.fp += 1,
            (ClassLabel::Los, ClassLabel::Nlos) => self.fn_ += 1,
            (ClassLabel::Los, ClassLabel::Los) => self.tn += 1,
        }
    }

    /// F1 straight from counts: `2TP / (2TP + FP + FN)`, zero when TP = 0.
    pub fn f1(&self) -> f64 {
        if self.tp == 0 {
            return 0.0;
        }
        let tp2 = 2.0 * self.tp as f64;
        tp2 / (tp2 + self.fp as f64 + self.fn_ as f64)
    }
}

pub fn confusion_matrix(predicted: &[ClassLabel], truth: &[ClassLabel]) -> Result<ConfusionMatrix> {
    if predicted.len() != truth.len() {
        return Err(Error::arg(format!(
            "{} predictions for {} truth labels",
            predicted.len(),
            truth.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::arg("confusion matrix needs at least one entry"));
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &t) in predicted.iter().zip(truth) {
        cm.record(p, t);
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Accuracy, precision, recall and F1 for the NLoS class. Zero
/// denominators yield 0.
pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::arg("empty confusion matrix"));
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    Ok(Metrics {
        accuracy: ratio(cm.tp + cm.tn, total),
        precision: ratio(cm.tp, cm.tp + cm.fp),
        recall: ratio(cm.tp, cm.tp + cm.fn_),
        f1: cm.f1(),
    })
}
