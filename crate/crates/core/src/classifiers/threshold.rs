use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::model::ClassLabel;

/// Threshold chosen by [`select_epsilon`] and what it achieves on the
/// selection data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdChoice {
    pub epsilon: f64,
    pub f1: f64,
    pub confusion: ConfusionMatrix,
}

/// Pick ε maximizing F1 when a sample is called NLoS iff `score < ε`.
///
/// Candidates are a sentinel below the lowest score, the midpoints between
/// consecutive distinct scores, and a sentinel above the highest score.
/// Among equal F1 values the smallest ε wins.
pub fn select_epsilon(scores: &[f64], labels: &[ClassLabel]) -> Result<ThresholdChoice> {
    if scores.len() != labels.len() {
        return Err(Error::arg(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::arg("scores contain NaN"));
    }
    let n_nlos = labels.iter().filter(|l| l.is_nlos()).count();
    let n_los = labels.len() - n_nlos;
    if n_nlos == 0 || n_los == 0 {
        return Err(Error::arg(
            "threshold selection needs both LoS and NLoS samples",
        ));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let lowest = scores[order[0]];
    let below = (lowest - 1.0).min(lowest.next_down());
    // nothing predicted NLoS
    let mut best = ThresholdChoice {
        epsilon: below,
        f1: 0.0,
        confusion: ConfusionMatrix {
            tp: 0,
            fp: 0,
            fn_: n_nlos,
            tn: n_los,
        },
    };

    let mut cm = best.confusion;
    let mut i = 0;
    while i < order.len() {
        let value = scores[order[i]];
        // move every sample with this score to the NLoS side
        while i < order.len() && scores[order[i]] == value {
            if labels[order[i]].is_nlos() {
                cm.tp += 1;
                cm.fn_ -= 1;
            } else {
                cm.fp += 1;
                cm.tn -= 1;
            }
            i += 1;
        }
        let epsilon = match order.get(i) {
            Some(&next) => {
                let upper = scores[next];
                let mid = value + 0.5 * (upper - value);
                if mid > value && mid <= upper {
                    mid
                } else {
                    upper
                }
            }
            None => (value + 1.0).max(value.next_up()),
        };
        let f1 = cm.f1();
        if f1 > best.f1 {
            best = ThresholdChoice {
                epsilon,
                f1,
                confusion: cm,
            };
        }
    }
    Ok(best)
}
