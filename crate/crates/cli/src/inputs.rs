use std::fs;
use std::path::{Path, PathBuf};

use aads_core::formats::parse_token_tsv;
use aads_core::textproc::tokenize_document;
use aads_core::{Document, LabelSeq};

use crate::commands::InputError;

/// Expands files and directories into a sorted, de-duplicated file list.
/// Directories contribute their direct children with one of `extensions`.
pub fn expand(paths: &[PathBuf], extensions: &[&str]) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for path in paths {
        let meta = fs::metadata(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        if meta.is_dir() {
            let entries =
                fs::read_dir(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            for entry in entries {
                let p = entry?.path();
                if p.is_file() && has_extension(&p, extensions) {
                    out.push(p);
                }
            }
        } else {
            out.push(path.clone());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn has_extension(path: &Path, extensions: &[&str]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| extensions.contains(&e))
}

pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Loads a document from a token TSV (`.tsv`, labels kept) or from raw text
/// (anything else, tokenized here, labels all O). An empty file yields an
/// empty document.
pub fn load_document(path: &Path) -> anyhow::Result<(Document, LabelSeq)> {
    let src = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let id = stem(path);
    if src.trim().is_empty() {
        return Ok((
            Document {
                id,
                text: src,
                ..Document::default()
            },
            LabelSeq::default(),
        ));
    }
    if has_extension(path, &["tsv"]) {
        Ok(parse_token_tsv(&src, path, &id)?)
    } else {
        let doc = tokenize_document(id, &src);
        let labels = LabelSeq::all_o(doc.len());
        Ok((doc, labels))
    }
}

pub fn output_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    Ok(())
}
