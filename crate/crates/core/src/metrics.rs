//! Token-level and strict-sequence-match precision/recall/F1, and Cohen's κ.

use std::collections::HashSet;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{labels_to_spans, Label};

/// Precision, recall and F1 with the counts they derive from. DS is the
/// positive class; a 0/0 ratio is reported as 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }
}

impl Add for Prf {
    type Output = Prf;

    fn add(self, rhs: Prf) -> Prf {
        Prf::from_counts(self.tp + rhs.tp, self.fp + rhs.fp, self.fn_ + rhs.fn_)
    }
}

impl AddAssign for Prf {
    fn add_assign(&mut self, rhs: Prf) {
        *self = *self + rhs;
    }
}

fn check_lengths(gold: &[Label], pred: &[Label]) -> Result<()> {
    if gold.len() != pred.len() {
        return Err(Error::validation(format!(
            "gold has {} labels, prediction has {}",
            gold.len(),
            pred.len()
        )));
    }
    Ok(())
}

pub fn token_prf(gold: &[Label], pred: &[Label]) -> Result<Prf> {
    check_lengths(gold, pred)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (g, p) in gold.iter().zip(pred) {
        match (g.is_ds(), p.is_ds()) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(Prf::from_counts(tp, fp, fn_))
}

/// A predicted span counts only when both of its boundaries equal those of a
/// gold span.
pub fn ssm_prf(gold: &[Label], pred: &[Label]) -> Result<Prf> {
    check_lengths(gold, pred)?;
    let gold_spans = labels_to_spans(gold);
    let pred_spans = labels_to_spans(pred);
    let gold_set: HashSet<_> = gold_spans.iter().collect();
    let tp = pred_spans.iter().filter(|s| gold_set.contains(s)).count();
    Ok(Prf::from_counts(tp, pred_spans.len() - tp, gold_spans.len() - tp))
}

/// Cohen's κ between two annotations of the same tokens. Computed from exact
/// integer counts; returns 1 when chance agreement is already certain.
pub fn cohen_kappa(a: &[Label], b: &[Label]) -> Result<f64> {
    check_lengths(a, b)?;
    if a.is_empty() {
        return Err(Error::validation("Cohen's kappa needs at least one label"));
    }
    let n = a.len() as i128;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as i128;
    let a_ds = a.iter().filter(|l| l.is_ds()).count() as i128;
    let b_ds = b.iter().filter(|l| l.is_ds()).count() as i128;
    // Scaled by n²: p_o = agree/n, p_e = chance/n².
    let chance = a_ds * b_ds + (n - a_ds) * (n - b_ds);
    let denom = n * n - chance;
    if denom == 0 {
        // p_e = 1 forces both annotators onto one constant label.
        return Ok(1.0);
    }
    Ok((n * agree - chance) as f64 / denom as f64)
}
