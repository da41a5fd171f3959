//! Clause-consistent post-processing.
//!
//! A clause is a maximal run of word tokens between two delimiters, where
//! every punctuation and line-break token is a delimiter. Words of one clause
//! are assumed to belong to the same narrative level, so each clause is
//! relabelled by majority vote.

use crate::error::Result;
use crate::model::{Document, Label, LabelSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Clause {
    pub start: usize,
    pub end: usize,
}

impl Clause {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

fn is_delimiter(doc: &Document, i: usize) -> bool {
    let tok = &doc.tokens[i];
    tok.is_punct || tok.is_newline
}

pub fn split_clauses(doc: &Document) -> Vec<Clause> {
    let mut out = Vec::new();
    let mut start = None;
    for i in 0..doc.tokens.len() {
        match (is_delimiter(doc, i), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Clause { start: s, end: i });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Clause {
            start: s,
            end: doc.tokens.len(),
        });
    }
    out
}

/// Gives every clause the label held by a strict majority of its tokens.
/// Tied clauses and delimiter tokens keep their predicted labels.
pub fn enforce_clause_consistency(doc: &Document, pred: &LabelSeq) -> Result<LabelSeq> {
    pred.check_for(doc)?;
    let mut out = pred.clone();
    let labels = out.as_mut_slice();
    for clause in split_clauses(doc) {
        let slice = &mut labels[clause.start..clause.end];
        let ds = slice.iter().filter(|l| l.is_ds()).count();
        let o = slice.len() - ds;
        if ds > o {
            slice.fill(Label::Ds);
        } else if o > ds {
            slice.fill(Label::O);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::tokenize_document;
    use Label::{Ds, O};

    #[test]
    fn hyphen_is_a_delimiter() {
        let doc = tokenize_document("c", "— Bonjour, dit-il.");
        assert_eq!(
            split_clauses(&doc),
            [
                Clause { start: 1, end: 2 },
                Clause { start: 3, end: 4 },
                Clause { start: 5, end: 6 }
            ]
        );
    }

    #[test]
    fn degenerate_inputs() {
        assert!(split_clauses(&tokenize_document("c", "« ... » !")).is_empty());
        let doc = tokenize_document("c", "il pleut encore");
        assert_eq!(split_clauses(&doc), [Clause { start: 0, end: 3 }]);
        let doc = tokenize_document("c", "l'homme vint");
        assert_eq!(split_clauses(&doc), [Clause { start: 0, end: 3 }]);
    }

    fn run(text: &str, labels: Vec<Label>) -> Vec<Label> {
        let doc = tokenize_document("c", text);
        enforce_clause_consistency(&doc, &LabelSeq::new(labels)).unwrap().to_vec()
    }

    #[test]
    fn majority_wins() {
        assert_eq!(run("a b c", vec![Ds, Ds, O]), [Ds, Ds, Ds]);
        assert_eq!(run("a b c", vec![O, Ds, O]), [O, O, O]);
    }

    #[test]
    fn tie_is_left_alone() {
        assert_eq!(run("a b", vec![Ds, O]), [Ds, O]);
    }

    #[test]
    fn delimiters_untouched() {
        // a b , c d e
        let out = run("a b, c d e", vec![Ds, Ds, O, O, Ds, O]);
        assert_eq!(out, [Ds, Ds, O, O, O, O]);
        let out = run("a b, c d e", vec![O, O, Ds, Ds, Ds, O]);
        assert_eq!(out, [O, O, Ds, Ds, Ds, Ds]);
    }

    #[test]
    fn uniform_input_is_fixed_point() {
        let labels = vec![Ds, Ds, Ds, O, O, O];
        assert_eq!(run("« oui » dit-il", labels.clone()), labels);
    }

    #[test]
    fn length_mismatch() {
        let doc = tokenize_document("c", "a b");
        assert!(enforce_clause_consistency(&doc, &LabelSeq::new(vec![O])).is_err());
    }
}
