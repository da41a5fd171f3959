//! Deterministic tokenizer, sentence splitter and the fixed-budget informed
//! segmenter used to cut chapters into model-sized inputs.

use crate::error::{Error, Result};
use crate::model::{Document, Sentence, Token};

/// Default segment budget, in tokens.
pub const DEFAULT_MAX_LEN: usize = 192;

const PUNCT_CHARS: &[char] = &[
    '.', ',', ';', ':', '!', '?', '«', '»', '"', '“', '”', '‘', '’', '„', '‹', '›', '(', ')',
    '[', ']', '—', '–', '-', '…', '\'',
];

const APOSTROPHES: &[char] = &['\'', '’'];

const SENTENCE_TERMINATORS: &[&str] = &[".", "!", "?", "…", "..."];

const CLOSING_QUOTES: &[&str] = &["»", "”", "\"", "’", "›"];

pub fn is_punct_char(c: char) -> bool {
    PUNCT_CHARS.contains(&c)
}

/// True when every character of `text` is a punctuation character.
pub fn is_punct_token(text: &str) -> bool {
    !text.is_empty() && text.chars().all(is_punct_char)
}

/// Splits `text` into word, punctuation and line-break tokens. Sentences are
/// left empty; see [`split_sentences`].
pub fn tokenize(text: &str) -> Document {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    let push = |tokens: &mut Vec<Token>, start: usize, end: usize| {
        let s: String = chars[start..end].iter().collect();
        tokens.push(Token {
            is_punct: is_punct_token(&s),
            is_newline: s == "\n",
            text: s,
            char_start: start,
            char_end: end,
        });
    };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            push(&mut tokens, i, i + 1);
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if chars[i..].starts_with(&['.', '.', '.']) {
            push(&mut tokens, i, i + 3);
            i += 3;
        } else if chars[i..].starts_with(&['-', '-']) {
            push(&mut tokens, i, i + 2);
            i += 2;
        } else if is_punct_char(c) {
            push(&mut tokens, i, i + 1);
            i += 1;
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && !is_punct_char(chars[i]) {
                i += 1;
            }
            // Elision: "l'homme" -> "l'" + "homme".
            if i + 1 < chars.len()
                && APOSTROPHES.contains(&chars[i])
                && chars[i + 1].is_alphabetic()
            {
                i += 1;
            }
            push(&mut tokens, start, i);
        }
    }

    Document {
        id: String::new(),
        text: text.to_string(),
        tokens,
        sentences: Vec::new(),
    }
}

/// Populates `doc.sentences`.
///
/// A sentence ends after a terminator (`.`, `!`, `?`, `…`, `...`) together
/// with any closing quotes that immediately follow it, and after every
/// line-break token. A line break directly following a boundary joins the
/// sentence it follows instead of forming a sentence of its own.
pub fn split_sentences(mut doc: Document) -> Document {
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut start = 0;
    let n = doc.tokens.len();
    let mut i = 0;

    while i < n {
        let tok = &doc.tokens[i];
        if tok.is_newline {
            if start == i {
                match sentences.last_mut() {
                    Some(prev) if prev.end == i => prev.end = i + 1,
                    _ => sentences.push(Sentence { start: i, end: i + 1 }),
                }
            } else {
                sentences.push(Sentence { start, end: i + 1 });
            }
            i += 1;
            start = i;
            continue;
        }
        if SENTENCE_TERMINATORS.contains(&tok.text.as_str()) {
            let mut end = i + 1;
            while end < n && CLOSING_QUOTES.contains(&doc.tokens[end].text.as_str()) {
                end += 1;
            }
            sentences.push(Sentence { start, end });
            i = end;
            start = end;
            continue;
        }
        i += 1;
    }
    if start < n {
        sentences.push(Sentence { start, end: n });
    }

    doc.sentences = sentences;
    doc
}

/// Tokenizes and sentence-splits `text` as document `id`.
pub fn tokenize_document(id: impl Into<String>, text: &str) -> Document {
    let mut doc = split_sentences(tokenize(text));
    doc.id = id.into();
    doc
}

/// A run of consecutive sentences fed to a model as one input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    /// Half-open range of sentence indices.
    pub sentence_start: usize,
    pub sentence_end: usize,
    pub token_count: usize,
}

impl Segment {
    /// True when the segment is a single sentence longer than the budget.
    pub fn is_oversized(&self, max_len: usize) -> bool {
        self.token_count > max_len
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Segmentation {
    pub segments: Vec<Segment>,
    /// Indices into `segments` of single sentences exceeding the budget.
    pub oversized: Vec<usize>,
}

/// Greedy reading-order packing of sentences into segments of at most
/// `max_len` tokens. A sentence joins the open segment only while the total
/// stays within budget; otherwise the segment is closed and a new one opens
/// with that sentence. A sentence longer than the budget is emitted alone and
/// reported in [`Segmentation::oversized`].
pub fn informed_segment(doc: &Document, max_len: usize) -> Result<Segmentation> {
    informed_segment_lens(&doc.sentence_lens(), max_len)
}

/// [`informed_segment`] over bare sentence lengths.
pub fn informed_segment_lens(sentence_lens: &[usize], max_len: usize) -> Result<Segmentation> {
    if max_len == 0 {
        return Err(Error::validation("segment budget must be at least 1"));
    }
    let mut out = Segmentation::default();
    let mut open: Option<Segment> = None;

    for (idx, &len) in sentence_lens.iter().enumerate() {
        if len > max_len {
            if let Some(seg) = open.take() {
                out.segments.push(seg);
            }
            out.oversized.push(out.segments.len());
            out.segments.push(Segment {
                sentence_start: idx,
                sentence_end: idx + 1,
                token_count: len,
            });
            continue;
        }
        match open.as_mut() {
            Some(seg) if seg.token_count + len <= max_len => {
                seg.sentence_end = idx + 1;
                seg.token_count += len;
            }
            _ => {
                if let Some(seg) = open.take() {
                    out.segments.push(seg);
                }
                open = Some(Segment {
                    sentence_start: idx,
                    sentence_end: idx + 1,
                    token_count: len,
                });
            }
        }
    }
    if let Some(seg) = open {
        out.segments.push(seg);
    }
    Ok(out)
}
