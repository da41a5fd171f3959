use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use aads_core::clause::enforce_clause_consistency;
use aads_core::detect::{detect_dominant_marker, detect_multi_marker, MarkerInventory};
use aads_core::formats::{
    corpus_stats, read_span_jsonl, read_token_tsv, render_token_tsv, EvalReport, MetricBundle,
    ReportFormat,
};
use aads_core::metrics::cohen_kappa;
use aads_core::textproc::{informed_segment, DEFAULT_MAX_LEN};
use aads_core::zonemap::{parse_rational, EmptyGoldPolicy, ZmeConfig};
use anyhow::{bail, Context};
use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::FileConfig;
use crate::inputs::{expand, has_extension, load_document, output_dir, stem};
use crate::{
    AgreementArgs, Command, ConvertArgs, DetectArgs, EmptyGold, EvalArgs, Method, PostprocessArgs,
    ReportKind, SegmentArgs, StatsArgs, TokenizeArgs,
};

/// Bad input from the user: missing paths, malformed files, invalid flags.
/// Reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// 2 for input and validation errors, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    let is_input = err
        .chain()
        .any(|e| e.is::<InputError>() || e.is::<aads_core::Error>());
    if is_input {
        2
    } else {
        1
    }
}

pub fn run(command: Command, cfg: &FileConfig) -> anyhow::Result<()> {
    match command {
        Command::Tokenize(args) => tokenize(args),
        Command::Segment(args) => segment(args, cfg),
        Command::Detect(args) => detect(args, cfg),
        Command::Postprocess(args) => postprocess(args),
        Command::Eval(args) => eval(args, cfg),
        Command::Convert(args) => convert(args),
        Command::Stats(args) => stats(args),
        Command::Agreement(args) => agreement(args),
    }
}

fn write_file(path: &Path, content: &str) -> anyhow::Result<()> {
    fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}

fn write_output(out: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => write_file(path, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Runs `f` over every input in parallel and returns the results in input
/// order, stopping at the first error in that order.
fn par_map<T: Send>(
    files: &[PathBuf],
    f: impl Fn(&Path) -> anyhow::Result<T> + Sync,
) -> anyhow::Result<Vec<T>> {
    files.par_iter().map(|p| f(p)).collect::<Vec<_>>().into_iter().collect()
}

fn tokenize(args: TokenizeArgs) -> anyhow::Result<()> {
    let files = expand(&args.inputs, &["txt"])?;
    output_dir(&args.out)?;
    let rendered = par_map(&files, |path| {
        let (doc, labels) = load_document(path)?;
        Ok((stem(path), render_token_tsv(&doc, &labels)?))
    })?;
    for (id, tsv) in rendered {
        write_file(&args.out.join(format!("{id}.tsv")), &tsv)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SegmentRecord<'a> {
    file: &'a str,
    segment: usize,
    sentence_start: usize,
    sentence_end: usize,
    token_start: usize,
    token_end: usize,
    tokens: usize,
    oversized: bool,
}

fn segment(args: SegmentArgs, cfg: &FileConfig) -> anyhow::Result<()> {
    let max_len = args.max_len.or(cfg.max_len).unwrap_or(DEFAULT_MAX_LEN);
    if max_len == 0 {
        bail!(InputError("--max-len must be at least 1".into()));
    }
    let files = expand(&args.inputs, &["txt", "tsv"])?;
    let chunks = par_map(&files, |path| {
        let (doc, _) = load_document(path)?;
        let seg = informed_segment(&doc, max_len)?;
        let mut out = String::new();
        for (k, s) in seg.segments.iter().enumerate() {
            let oversized = seg.oversized.contains(&k);
            if oversized {
                warn!(
                    "{}: sentence {} has {} tokens, more than the budget of {max_len}",
                    path.display(),
                    s.sentence_start,
                    s.token_count
                );
            }
            let rec = SegmentRecord {
                file: &doc.id,
                segment: k,
                sentence_start: s.sentence_start,
                sentence_end: s.sentence_end,
                token_start: doc.sentences[s.sentence_start].start,
                token_end: doc.sentences[s.sentence_end - 1].end,
                tokens: s.token_count,
                oversized,
            };
            out.push_str(&serde_json::to_string(&rec)?);
            out.push('\n');
        }
        Ok(out)
    })?;
    write_output(args.out.as_deref(), &chunks.concat())
}

fn detect(args: DetectArgs, cfg: &FileConfig) -> anyhow::Result<()> {
    let method = args.method.or(cfg.method).unwrap_or(Method::MultiMarker);
    let include_markers = if args.no_include_markers {
        false
    } else {
        cfg.include_markers.unwrap_or(true)
    };
    let inventory = match args.markers.as_ref().or(cfg.markers.as_ref()) {
        Some(path) => MarkerInventory::load(path)?,
        None => MarkerInventory::default(),
    };
    let files = expand(&args.inputs, &["txt", "tsv"])?;
    output_dir(&args.out)?;

    let rendered = par_map(&files, |path| {
        let (doc, _) = load_document(path)?;
        let labels = match method {
            Method::MultiMarker => detect_multi_marker(&doc, &inventory, include_markers),
            Method::Dominant => detect_dominant_marker(&doc, &inventory, include_markers),
        };
        Ok((stem(path), render_token_tsv(&doc, &labels)?))
    })?;
    for (id, tsv) in rendered {
        write_file(&args.out.join(format!("{id}.tsv")), &tsv)?;
    }
    Ok(())
}

fn find_reference(dir: &Path, id: &str) -> anyhow::Result<PathBuf> {
    for ext in ["tsv", "txt"] {
        let p = dir.join(format!("{id}.{ext}"));
        if p.is_file() {
            return Ok(p);
        }
    }
    bail!(InputError(format!("no document for {id:?} in {}", dir.display())))
}

fn postprocess(args: PostprocessArgs) -> anyhow::Result<()> {
    let files = expand(std::slice::from_ref(&args.pred), &["tsv"])?;
    output_dir(&args.out)?;
    let rendered = par_map(&files, |path| {
        let (pred_doc, pred) = load_document(path)?;
        let doc = match &args.docs {
            Some(dir) => {
                let (doc, _) = load_document(&find_reference(dir, &pred_doc.id)?)?;
                if doc.len() != pred_doc.len() {
                    bail!(InputError(format!(
                        "{}: {} predicted labels for {} reference tokens",
                        path.display(),
                        pred_doc.len(),
                        doc.len()
                    )));
                }
                doc
            }
            None => pred_doc,
        };
        let fixed = enforce_clause_consistency(&doc, &pred)?;
        Ok((stem(path), render_token_tsv(&doc, &fixed)?))
    })?;
    for (id, tsv) in rendered {
        write_file(&args.out.join(format!("{id}.tsv")), &tsv)?;
    }
    Ok(())
}

fn tsv_ids(dir: &Path) -> anyhow::Result<BTreeMap<String, PathBuf>> {
    if !dir.is_dir() {
        bail!(InputError(format!("{} is not a directory", dir.display())));
    }
    Ok(expand(&[dir.to_path_buf()], &["tsv"])?
        .into_iter()
        .map(|p| (stem(&p), p))
        .collect())
}

fn zme_config(args: &EvalArgs, cfg: &FileConfig) -> anyhow::Result<ZmeConfig> {
    let alpha = match args.zme_alpha_ms.as_ref().or(cfg.zme_alpha_ms.as_ref()) {
        Some(s) => parse_rational(s)?,
        None => ZmeConfig::default().alpha_ms().clone(),
    };
    let policy = match args.zme_empty_gold.or(cfg.zme_empty_gold) {
        Some(EmptyGold::ZeroIfClean) => EmptyGoldPolicy::ZeroIfClean,
        Some(EmptyGold::NormalizeByTokens) | None => EmptyGoldPolicy::NormalizeByTokens,
    };
    Ok(ZmeConfig::new(alpha, policy)?)
}

fn eval(args: EvalArgs, cfg: &FileConfig) -> anyhow::Result<()> {
    let zcfg = zme_config(&args, cfg)?;
    let format = match args.report.or(cfg.report).unwrap_or(ReportKind::Json) {
        ReportKind::Json => ReportFormat::Json,
        ReportKind::Csv => ReportFormat::Csv,
    };
    let gold = tsv_ids(&args.gold)?;
    let pred = tsv_ids(&args.pred)?;

    let gold_ids: BTreeSet<_> = gold.keys().collect();
    let pred_ids: BTreeSet<_> = pred.keys().collect();
    if gold_ids != pred_ids {
        let missing: Vec<_> = gold_ids.difference(&pred_ids).map(|s| s.as_str()).collect();
        let extra: Vec<_> = pred_ids.difference(&gold_ids).map(|s| s.as_str()).collect();
        bail!(InputError(format!(
            "gold and prediction files differ; missing predictions: [{}]; predictions without gold: [{}]",
            missing.join(", "),
            extra.join(", ")
        )));
    }
    if gold.is_empty() {
        bail!(InputError(format!("no .tsv files in {}", args.gold.display())));
    }

    let pairs: Vec<(&String, &PathBuf, &PathBuf)> =
        gold.iter().map(|(id, g)| (id, g, &pred[id])).collect();
    let bundles: Vec<anyhow::Result<(String, MetricBundle)>> = pairs
        .par_iter()
        .map(|(id, g, p)| {
            let (gdoc, glabels) = read_token_tsv(g)?;
            let (pdoc, plabels) = read_token_tsv(p)?;
            if gdoc.len() != pdoc.len() {
                bail!(InputError(format!(
                    "{id}: gold has {} tokens, prediction has {}",
                    gdoc.len(),
                    pdoc.len()
                )));
            }
            if let Some(i) = (0..gdoc.len()).find(|&i| gdoc.tokens[i].text != pdoc.tokens[i].text) {
                warn!(
                    "{id}: token {i} differs between gold ({:?}) and prediction ({:?})",
                    gdoc.tokens[i].text, pdoc.tokens[i].text
                );
            }
            Ok(((*id).clone(), MetricBundle::compute(&glabels, &plabels, &zcfg)?))
        })
        .collect();
    let per_file: BTreeMap<String, MetricBundle> = bundles.into_iter().collect::<Result<_, _>>()?;

    let report = EvalReport::new(per_file, zcfg)?;
    write_output(args.out.as_deref(), &report.render(format)?)
}

fn convert(args: ConvertArgs) -> anyhow::Result<()> {
    let files = expand(&args.inputs, &["jsonl"])?;
    output_dir(&args.out)?;
    let mut written = BTreeSet::new();
    for path in &files {
        let import = read_span_jsonl(path)?;
        for w in &import.warnings {
            warn!("{w}");
        }
        for (doc, labels) in &import.documents {
            if !written.insert(doc.id.clone()) {
                bail!(InputError(format!("duplicate document id {:?}", doc.id)));
            }
            let dest = args.out.join(format!("{}.tsv", doc.id));
            write_file(&dest, &render_token_tsv(doc, labels)?)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsOutput {
    file_count: usize,
    token_count: usize,
    sentence_count: usize,
    ds_percent_mean: f64,
    ds_percent_std: f64,
}

fn stats(args: StatsArgs) -> anyhow::Result<()> {
    let files = tsv_ids(&args.dir)?;
    let paths: Vec<PathBuf> = files.into_values().collect();
    let docs = par_map(&paths, |p| Ok(read_token_tsv(p)?))?;
    let s = corpus_stats(&docs)?;
    let out = StatsOutput {
        file_count: s.file_count,
        token_count: s.token_count,
        sentence_count: s.sentence_count,
        ds_percent_mean: round6(s.ds_percent_mean),
        ds_percent_std: round6(s.ds_percent_std),
    };
    let mut json = serde_json::to_string_pretty(&out)?;
    json.push('\n');
    write_output(None, &json)
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

fn agreement(args: AgreementArgs) -> anyhow::Result<()> {
    let a = read_label_file(&args.a)?;
    let b = read_label_file(&args.b)?;
    let kappa = cohen_kappa(&a, &b)?;
    println!("{kappa:.6}");
    Ok(())
}

fn read_label_file(path: &Path) -> anyhow::Result<aads_core::LabelSeq> {
    if !has_extension(path, &["tsv"]) {
        bail!(InputError(format!("{}: expected a .tsv file", path.display())));
    }
    Ok(read_token_tsv(path)?.1)
}
