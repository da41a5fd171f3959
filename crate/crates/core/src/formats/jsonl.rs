//! Character-offset span annotations, one JSON object per line, as exported
//! by span annotation tools such as Doccano:
//!
//! ```json
//! {"id": 3, "text": "« Oui » dit-il.", "label": [[0, 7, "DS"]]}
//! ```
//!
//! Offsets count Unicode scalar values. Only the `DS` tag is used.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{char_spans_to_labels, Document, LabelSeq};
use crate::textproc::tokenize_document;

const DS_TAG: &str = "DS";

#[derive(Debug, Deserialize)]
pub struct JsonlRecord {
    #[serde(default)]
    pub id: Option<Value>,
    pub text: String,
    #[serde(default)]
    pub label: Vec<(usize, usize, String)>,
}

#[derive(Debug, Default)]
pub struct JsonlImport {
    pub documents: Vec<(Document, LabelSeq)>,
    pub warnings: Vec<String>,
}

/// Parses JSONL content. Records without an `id` are named
/// `<stem>_<line number>`.
pub fn parse_span_jsonl(src: &str, path: &Path) -> Result<JsonlImport> {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut out = JsonlImport::default();

    for (n, line) in src.lines().enumerate() {
        let lineno = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonlRecord = serde_json::from_str(line)
            .map_err(|e| Error::format(path, lineno, format!("invalid record: {e}")))?;
        let id = match &rec.id {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(num)) => num.to_string(),
            Some(Value::Null) | None => format!("{stem}_{lineno}"),
            Some(_) => return Err(Error::format(path, lineno, "`id` must be a string or a number")),
        };

        let mut ranges = Vec::new();
        for (start, end, tag) in &rec.label {
            if tag == DS_TAG {
                ranges.push((*start, *end));
            } else {
                out.warnings.push(format!(
                    "{}:{lineno}: ignoring span [{start},{end}) with tag {tag:?}",
                    path.display()
                ));
            }
        }

        let doc = tokenize_document(id, &rec.text);
        let labels = char_spans_to_labels(&doc, &ranges)
            .map_err(|e| Error::format(path, lineno, e.to_string()))?;
        out.documents.push((doc, labels));
    }
    Ok(out)
}

pub fn read_span_jsonl(path: &Path) -> Result<JsonlImport> {
    let src = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_span_jsonl(&src, path)
}
