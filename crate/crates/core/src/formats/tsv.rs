//! Token-label TSV.
//!
//! UTF-8, LF line endings, one `token<TAB>label` line per token, a blank
//! line between sentences. Line-break tokens are written as the
//! [`NEWLINE_SENTINEL`] so that paragraph structure survives the round trip.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Document, Label, LabelSeq};

pub const NEWLINE_SENTINEL: &str = "⏎";

/// Parses TSV content; `path` is only used in error messages.
pub fn parse_token_tsv(src: &str, path: &Path, id: &str) -> Result<(Document, LabelSeq)> {
    let mut tokens: Vec<String> = Vec::new();
    let mut labels: Vec<Label> = Vec::new();
    let mut sentence_lens: Vec<usize> = Vec::new();
    let mut current = 0usize;

    for (n, line) in src.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            if current > 0 {
                sentence_lens.push(current);
                current = 0;
            }
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(token), Some(label), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::format(path, n + 1, "expected `token<TAB>label`"));
        };
        if token.is_empty() {
            return Err(Error::format(path, n + 1, "empty token"));
        }
        if token.chars().any(char::is_whitespace) {
            return Err(Error::format(path, n + 1, "token contains whitespace"));
        }
        let label: Label = label
            .parse()
            .map_err(|_| Error::format(path, n + 1, format!("unknown label {label:?}")))?;
        tokens.push(if token == NEWLINE_SENTINEL {
            "\n".to_string()
        } else {
            token.to_string()
        });
        labels.push(label);
        current += 1;
    }
    if current > 0 {
        sentence_lens.push(current);
    }
    if tokens.is_empty() {
        return Err(Error::format(path, 1, "empty file"));
    }

    let doc = Document::from_token_texts(id, &tokens, &sentence_lens)
        .map_err(|e| Error::format(path, 0, e.to_string()))?;
    Ok((doc, LabelSeq::new(labels)))
}

/// Reads a TSV file; the document id is the file stem.
pub fn read_token_tsv(path: &Path) -> Result<(Document, LabelSeq)> {
    let src = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_token_tsv(&src, path, &id)
}

/// Renders a document and its labels. A document whose sentences are not
/// populated is written as a single sentence.
pub fn render_token_tsv(doc: &Document, labels: &LabelSeq) -> Result<String> {
    labels.check_for(doc)?;
    let mut boundaries = vec![false; doc.tokens.len()];
    if !doc.sentences.is_empty() {
        let mut expected = 0;
        for s in &doc.sentences {
            if s.start != expected || s.end <= s.start {
                return Err(Error::validation(format!(
                    "sentences of {:?} do not partition its tokens",
                    doc.id
                )));
            }
            boundaries[s.end - 1] = true;
            expected = s.end;
        }
        if expected != doc.tokens.len() {
            return Err(Error::validation(format!(
                "sentences of {:?} do not cover all tokens",
                doc.id
            )));
        }
    }

    let mut out = String::new();
    for (i, (tok, label)) in doc.tokens.iter().zip(labels.iter()).enumerate() {
        let text = if tok.is_newline {
            NEWLINE_SENTINEL
        } else {
            if tok.text.is_empty()
                || tok.text == NEWLINE_SENTINEL
                || tok.text.chars().any(char::is_whitespace)
            {
                return Err(Error::validation(format!(
                    "token {:?} cannot be written as TSV",
                    tok.text
                )));
            }
            tok.text.as_str()
        };
        out.push_str(text);
        out.push('\t');
        out.push_str(label.as_str());
        out.push('\n');
        if boundaries[i] && i + 1 < doc.tokens.len() {
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn write_token_tsv(doc: &Document, labels: &LabelSeq, path: &Path) -> Result<()> {
    let content = render_token_tsv(doc, labels)?;
    fs::write(path, content).map_err(|e| Error::io(path, e))
}
