use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

use crate::commands::InputError;
use crate::{EmptyGold, Method, ReportKind};

/// Optional defaults read from `--config`. Every key may be omitted.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub method: Option<Method>,
    pub include_markers: Option<bool>,
    pub markers: Option<PathBuf>,
    pub max_len: Option<usize>,
    pub zme_alpha_ms: Option<String>,
    pub zme_empty_gold: Option<EmptyGold>,
    pub report: Option<ReportKind>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let src = fs::read_to_string(path)
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let cfg = toml::from_str(&src)
            .map_err(|e| InputError(format!("{}: {e}", path.display())))
            .with_context(|| "invalid configuration file")?;
        Ok(cfg)
    }
}
