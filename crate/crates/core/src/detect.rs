//! Marker-based direct-speech detectors.
//!
//! Both detectors work paragraph by paragraph, a paragraph being the text
//! between two line breaks. [`detect_multi_marker`] applies every quotation
//! pair and dialogue dash of the inventory; [`detect_dominant_marker`] first
//! picks the single most frequent marker type of the document and applies
//! only that one.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Document, Label, LabelSeq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkerInventory {
    /// `(open, close)` quotation marks; open and close may be identical.
    pub quote_pairs: Vec<(String, String)>,
    /// Dialogue dashes, recognised only as the first token of a paragraph.
    pub dash_markers: Vec<String>,
}

impl Default for MarkerInventory {
    fn default() -> Self {
        let pairs = [("«", "»"), ("“", "”"), ("\"", "\""), ("‹", "›"), ("„", "“")];
        MarkerInventory {
            quote_pairs: pairs
                .iter()
                .map(|(o, c)| (o.to_string(), c.to_string()))
                .collect(),
            dash_markers: ["—", "–", "--"].iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl MarkerInventory {
    /// Parses the plain-text inventory format: one entry per line, either two
    /// whitespace-separated markers (a quotation pair) or a single marker (a
    /// dialogue dash). Blank lines and lines starting with `#` are skipped.
    pub fn parse(src: &str, path: &Path) -> Result<Self> {
        let mut inv = MarkerInventory {
            quote_pairs: Vec::new(),
            dash_markers: Vec::new(),
        };
        for (n, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [dash] => inv.dash_markers.push(dash.to_string()),
                [open, close] => inv.quote_pairs.push((open.to_string(), close.to_string())),
                _ => {
                    return Err(Error::format(
                        path,
                        n + 1,
                        "expected one dash marker or an opening and closing quotation mark",
                    ))
                }
            }
        }
        if inv.quote_pairs.is_empty() && inv.dash_markers.is_empty() {
            return Err(Error::format(path, 0, "marker inventory is empty"));
        }
        Ok(inv)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&src, path)
    }

    fn entries(&self) -> impl Iterator<Item = MarkerType<'_>> {
        self.quote_pairs
            .iter()
            .map(|(o, c)| MarkerType::Quote { open: o, close: c })
            .chain(self.dash_markers.iter().map(|d| MarkerType::Dash(d)))
    }
}

/// One entry of the inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkerType<'a> {
    Quote { open: &'a str, close: &'a str },
    Dash(&'a str),
}

/// Half-open range of token indices between two line breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Paragraph {
    pub start: usize,
    pub end: usize,
}

/// Maximal runs of non-newline tokens.
pub fn split_paragraphs(doc: &Document) -> Vec<Paragraph> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, tok) in doc.tokens.iter().enumerate() {
        match (tok.is_newline, start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Paragraph { start: s, end: i });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Paragraph {
            start: s,
            end: doc.tokens.len(),
        });
    }
    out
}

/// Labels DS every region enclosed by a quotation pair of the inventory, and
/// every paragraph opened by a dialogue dash.
///
/// Each quotation pair is scanned independently: the first opening mark
/// opens a region, further opening marks of the same pair are ignored until
/// the matching close. An unclosed region runs to the end of the paragraph.
/// `include_markers` decides whether the delimiting tokens are labelled too.
pub fn detect_multi_marker(doc: &Document, inv: &MarkerInventory, include_markers: bool) -> LabelSeq {
    let types: Vec<_> = inv.entries().collect();
    label_with(doc, &types, include_markers)
}

/// Applies only the inventory entry with the most occurrences in the
/// document (quotation pairs counted by their opening mark, dashes only at
/// paragraph starts; ties go to the earlier entry). A document without any
/// marker is labelled all O.
pub fn detect_dominant_marker(doc: &Document, inv: &MarkerInventory, include_markers: bool) -> LabelSeq {
    match dominant_marker(doc, inv) {
        Some(ty) => label_with(doc, &[ty], include_markers),
        None => LabelSeq::all_o(doc.tokens.len()),
    }
}

/// The inventory entry [`detect_dominant_marker`] would select, if any.
pub fn dominant_marker<'a>(doc: &Document, inv: &'a MarkerInventory) -> Option<MarkerType<'a>> {
    let paragraphs = split_paragraphs(doc);
    let mut best: Option<(usize, MarkerType<'a>)> = None;
    for ty in inv.entries() {
        let count = match ty {
            MarkerType::Quote { open, .. } => doc.tokens.iter().filter(|t| t.text == open).count(),
            MarkerType::Dash(dash) => paragraphs
                .iter()
                .filter(|p| doc.tokens[p.start].text == dash)
                .count(),
        };
        if count > 0 && best.is_none_or(|(c, _)| count > c) {
            best = Some((count, ty));
        }
    }
    best.map(|(_, ty)| ty)
}

fn label_with(doc: &Document, types: &[MarkerType<'_>], include_markers: bool) -> LabelSeq {
    let mut labels = vec![Label::O; doc.tokens.len()];
    for para in split_paragraphs(doc) {
        for ty in types {
            match *ty {
                MarkerType::Quote { open, close } => {
                    mark_quotes(doc, para, open, close, include_markers, &mut labels)
                }
                MarkerType::Dash(dash) => {
                    if doc.tokens[para.start].text == dash {
                        let from = if include_markers { para.start } else { para.start + 1 };
                        fill(&mut labels, from, para.end);
                    }
                }
            }
        }
    }
    LabelSeq::new(labels)
}

fn mark_quotes(
    doc: &Document,
    para: Paragraph,
    open: &str,
    close: &str,
    include_markers: bool,
    labels: &mut [Label],
) {
    let mut region_start: Option<usize> = None;
    for i in para.start..para.end {
        let text = doc.tokens[i].text.as_str();
        match region_start {
            None if text == open => region_start = Some(i),
            Some(start) if text == close => {
                if include_markers {
                    fill(labels, start, i + 1);
                } else {
                    fill(labels, start + 1, i);
                }
                region_start = None;
            }
            _ => {}
        }
    }
    if let Some(start) = region_start {
        let from = if include_markers { start } else { start + 1 };
        fill(labels, from, para.end);
    }
}

fn fill(labels: &mut [Label], from: usize, to: usize) {
    if from < to {
        labels[from..to].fill(Label::Ds);
    }
}
