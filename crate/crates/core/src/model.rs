//! Domain types shared by every module, and conversions between per-token
//! labels and DS spans.

use std::fmt;
use std::ops::{Deref, Range};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word, punctuation mark or line break, located by character (not byte)
/// offsets into the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub char_start: usize,
    pub char_end: usize,
    pub is_punct: bool,
    pub is_newline: bool,
}

impl Token {
    pub fn char_len(&self) -> usize {
        self.char_end - self.char_start
    }
}

/// Half-open range of token indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sentence {
    pub start: usize,
    pub end: usize,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    /// File name stem.
    pub id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    pub sentences: Vec<Sentence>,
}

impl Document {
    /// Builds a document from bare token strings, synthesising a source text
    /// in which tokens are separated by single spaces and line-break tokens
    /// stand for themselves. `sentence_lens` gives the token count of each
    /// sentence in order and must sum to the token count.
    pub fn from_token_texts<S: AsRef<str>>(
        id: impl Into<String>,
        tokens: &[S],
        sentence_lens: &[usize],
    ) -> Result<Self> {
        let total: usize = sentence_lens.iter().sum();
        if total != tokens.len() {
            return Err(Error::validation(format!(
                "sentence lengths sum to {total} but there are {} tokens",
                tokens.len()
            )));
        }
        if sentence_lens.contains(&0) {
            return Err(Error::validation("empty sentence"));
        }

        let mut text = String::new();
        let mut offset = 0usize;
        let mut out = Vec::with_capacity(tokens.len());
        let mut prev_newline = true;
        for tok in tokens {
            let tok = tok.as_ref();
            if tok.is_empty() {
                return Err(Error::validation("empty token text"));
            }
            let is_newline = tok == "\n";
            if !is_newline && tok.chars().any(char::is_whitespace) {
                return Err(Error::validation(format!("token {tok:?} contains whitespace")));
            }
            if !prev_newline && !is_newline {
                text.push(' ');
                offset += 1;
            }
            let len = tok.chars().count();
            text.push_str(tok);
            out.push(Token {
                text: tok.to_string(),
                char_start: offset,
                char_end: offset + len,
                is_punct: crate::textproc::is_punct_token(tok),
                is_newline,
            });
            offset += len;
            prev_newline = is_newline;
        }

        let mut sentences = Vec::with_capacity(sentence_lens.len());
        let mut start = 0;
        for &n in sentence_lens {
            sentences.push(Sentence { start, end: start + n });
            start += n;
        }

        Ok(Document {
            id: id.into(),
            text,
            tokens: out,
            sentences,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token count of every sentence, in order.
    pub fn sentence_lens(&self) -> Vec<usize> {
        self.sentences.iter().map(Sentence::len).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    O,
    #[serde(rename = "DS")]
    Ds,
}

impl Label {
    pub fn is_ds(self) -> bool {
        self == Label::Ds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::O => "O",
            Label::Ds => "DS",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(Label::O),
            "DS" => Ok(Label::Ds),
            other => Err(Error::validation(format!("unknown label {other:?}"))),
        }
    }
}

/// One label per token of an associated document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabelSeq(Vec<Label>);

impl LabelSeq {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelSeq(labels)
    }

    pub fn all_o(len: usize) -> Self {
        LabelSeq(vec![Label::O; len])
    }

    pub fn into_inner(self) -> Vec<Label> {
        self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Label] {
        &mut self.0
    }

    pub fn ds_count(&self) -> usize {
        self.0.iter().filter(|l| l.is_ds()).count()
    }

    /// Checks that the sequence has one label per token of `doc`.
    pub fn check_for(&self, doc: &Document) -> Result<()> {
        if self.0.len() != doc.tokens.len() {
            return Err(Error::validation(format!(
                "{} labels for {} tokens in document {:?}",
                self.0.len(),
                doc.tokens.len(),
                doc.id
            )));
        }
        Ok(())
    }
}

impl Deref for LabelSeq {
    type Target = [Label];

    fn deref(&self) -> &[Label] {
        &self.0
    }
}

impl From<Vec<Label>> for LabelSeq {
    fn from(v: Vec<Label>) -> Self {
        LabelSeq(v)
    }
}

impl FromIterator<Label> for LabelSeq {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        LabelSeq(iter.into_iter().collect())
    }
}

/// Half-open interval `[start, end)` of token indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start < end, "empty or inverted span [{start},{end})");
        Span { start, end }
    }

    /// Number of tokens covered.
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlap(&self, other: &Span) -> usize {
        self.end.min(other.end).saturating_sub(self.start.max(other.start))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

/// Maximal runs of DS labels, in ascending order.
pub fn labels_to_spans(seq: &[Label]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    for (i, label) in seq.iter().enumerate() {
        match (label.is_ds(), open) {
            (true, None) => open = Some(i),
            (false, Some(start)) => {
                spans.push(Span::new(start, i));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        spans.push(Span::new(start, seq.len()));
    }
    spans
}

/// Inverse of [`labels_to_spans`]. Spans must be non-empty, pairwise disjoint
/// and lie within `[0, len)`; they need not be sorted.
pub fn spans_to_labels(spans: &[Span], len: usize) -> Result<LabelSeq> {
    let mut labels = vec![Label::O; len];
    for span in spans {
        if span.start >= span.end || span.end > len {
            return Err(Error::validation(format!(
                "span {span} out of range for length {len}"
            )));
        }
        for label in &mut labels[span.start..span.end] {
            if label.is_ds() {
                return Err(Error::validation(format!("span {span} overlaps another span")));
            }
            *label = Label::Ds;
        }
    }
    Ok(LabelSeq(labels))
}

/// Projects character ranges onto tokens: a token is DS iff it shares at
/// least one character with some range.
pub fn char_spans_to_labels(doc: &Document, char_ranges: &[(usize, usize)]) -> Result<LabelSeq> {
    let text_len = doc.text.chars().count();
    let mut ranges = Vec::with_capacity(char_ranges.len());
    for &(start, end) in char_ranges {
        if start > end {
            return Err(Error::validation(format!("inverted character range ({start},{end})")));
        }
        if end > text_len {
            return Err(Error::validation(format!(
                "character range ({start},{end}) exceeds text length {text_len}"
            )));
        }
        if start < end {
            ranges.push((start, end));
        }
    }
    ranges.sort_unstable();

    // Tokens are sorted by offset, so a single forward sweep over the sorted
    // ranges suffices; `first` skips ranges ending before the current token.
    let mut first = 0;
    let labels = doc
        .tokens
        .iter()
        .map(|tok| {
            while first < ranges.len() && ranges[first].1 <= tok.char_start {
                first += 1;
            }
            let hit = ranges[first..]
                .iter()
                .take_while(|r| r.0 < tok.char_end)
                .any(|r| r.1 > tok.char_start);
            if hit {
                Label::Ds
            } else {
                Label::O
            }
        })
        .collect();
    Ok(LabelSeq(labels))
}
