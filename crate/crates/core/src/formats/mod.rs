//! File formats: token-label TSV, character-offset span JSONL, corpus
//! statistics and evaluation reports.

pub mod jsonl;
pub mod report;
pub mod stats;
pub mod tsv;

pub use jsonl::{read_span_jsonl, JsonlRecord};
pub use report::{EvalReport, FileMetrics, MetricBundle, ReportFormat};
pub use stats::{corpus_stats, CorpusStats};
pub use tsv::{parse_token_tsv, read_token_tsv, render_token_tsv, write_token_tsv, NEWLINE_SENTINEL};
