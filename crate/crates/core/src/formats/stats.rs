use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Document, LabelSeq};

/// Size of an annotated corpus and its share of DS tokens, as mean and
/// population standard deviation of the per-file percentages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub file_count: usize,
    pub token_count: usize,
    pub sentence_count: usize,
    pub ds_percent_mean: f64,
    pub ds_percent_std: f64,
}

pub fn corpus_stats(files: &[(Document, LabelSeq)]) -> Result<CorpusStats> {
    if files.is_empty() {
        return Err(Error::validation("corpus statistics need at least one file"));
    }
    let mut percents = Vec::with_capacity(files.len());
    let (mut tokens, mut sentences) = (0, 0);
    for (doc, labels) in files {
        labels.check_for(doc)?;
        tokens += doc.tokens.len();
        sentences += doc.sentences.len();
        percents.push(if labels.is_empty() {
            0.0
        } else {
            100.0 * labels.ds_count() as f64 / labels.len() as f64
        });
    }
    let (mean, std) = mean_std(&percents);
    Ok(CorpusStats {
        file_count: files.len(),
        token_count: tokens,
        sentence_count: sentences,
        ds_percent_mean: mean,
        ds_percent_std: std,
    })
}

/// Arithmetic mean and population standard deviation; `(0, 0)` when empty.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
