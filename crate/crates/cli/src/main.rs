use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod inputs;

use config::FileConfig;

/// Direct-speech detection and evaluation for French narrative text.
#[derive(Debug, Parser)]
#[command(name = "aads", version)]
struct Cli {
    /// TOML file overriding the built-in defaults; explicit flags still win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads for per-file processing (default: all cores).
    #[arg(long, short = 'j', global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tokenize and sentence-split raw text into token TSV (labels all O).
    Tokenize(TokenizeArgs),
    /// Pack sentences into segments of bounded token count.
    Segment(SegmentArgs),
    /// Label direct speech with a marker-based detector.
    Detect(DetectArgs),
    /// Make predictions clause-consistent by per-clause majority vote.
    Postprocess(PostprocessArgs),
    /// Score predictions against ground truth.
    Eval(EvalArgs),
    /// Convert span annotations to token TSV.
    Convert(ConvertArgs),
    /// Corpus size and DS proportion of a directory of token TSV files.
    Stats(StatsArgs),
    /// Cohen's kappa between two annotations of the same tokens.
    Agreement(AgreementArgs),
}

#[derive(Debug, Args)]
struct TokenizeArgs {
    /// Text files or directories of `.txt` files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SegmentArgs {
    /// Text or token TSV files, or directories of them.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Maximum segment size in tokens.
    #[arg(long)]
    max_len: Option<usize>,
    /// Output JSONL file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    MultiMarker,
    Dominant,
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// Text or token TSV files, or directories of them.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Leave quotation marks and dashes themselves labelled O.
    #[arg(long)]
    no_include_markers: bool,
    /// Marker inventory file: one dash, or one opening/closing pair, per line.
    #[arg(long, value_name = "FILE")]
    markers: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PostprocessArgs {
    /// Prediction TSV file or directory.
    #[arg(long)]
    pred: PathBuf,
    /// Directory of reference documents (TSV or text) whose tokens replace
    /// those of the prediction files.
    #[arg(long)]
    docs: Option<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
enum EmptyGold {
    #[value(name = "zero_if_clean")]
    ZeroIfClean,
    #[value(name = "normalize_by_tokens")]
    NormalizeByTokens,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
enum ReportKind {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Split/Merge mitigation factor in [0, 1], as a decimal or a fraction.
    #[arg(long)]
    zme_alpha_ms: Option<String>,
    #[arg(long, value_enum)]
    zme_empty_gold: Option<EmptyGold>,
    #[arg(long, value_enum)]
    report: Option<ReportKind>,
    /// Output file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConvertFrom {
    DoccanoJsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConvertTo {
    Tsv,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    from: ConvertFrom,
    #[arg(long, value_enum)]
    to: ConvertTo,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StatsArgs {
    dir: PathBuf,
}

#[derive(Debug, Args)]
struct AgreementArgs {
    a: PathBuf,
    b: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();

    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }

    let result = FileConfig::load(cli.config.as_deref()).and_then(|cfg| commands::run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
