//! Evaluation report: per-file metrics, pooled overall metrics, and per-file
//! averages with standard deviations.
//!
//! Serialized output is byte-deterministic: maps are ordered by key and every
//! real number is printed with exactly six decimals.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num::Zero;
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::formats::stats::mean_std;
use crate::metrics::{ssm_prf, token_prf, Prf};
use crate::model::Label;
use crate::zonemap::{self, empty_breakdown, to_f64, GroupKind, Rational, ZmeConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::validation(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZmeSummary {
    pub score: Rational,
    pub numerator: Rational,
    /// Ground-truth DS tokens.
    pub denominator: usize,
    pub token_count: usize,
    pub breakdown: BTreeMap<GroupKind, Rational>,
}

/// Token, strict-sequence-match and ZME metrics for one file, or pooled over
/// several files.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricBundle {
    pub token: Prf,
    pub ssm: Prf,
    pub zme: ZmeSummary,
}

pub type FileMetrics = MetricBundle;

impl MetricBundle {
    pub fn compute(gold: &[Label], pred: &[Label], cfg: &ZmeConfig) -> Result<Self> {
        let z = zonemap::zme(gold, pred, cfg)?;
        Ok(MetricBundle {
            token: token_prf(gold, pred)?,
            ssm: ssm_prf(gold, pred)?,
            zme: ZmeSummary {
                score: z.score,
                numerator: z.numerator,
                denominator: z.denominator,
                token_count: z.token_count,
                breakdown: z.breakdown,
            },
        })
    }

    /// Pools counts over files: PRF counts and ZME errors are summed, and
    /// the ZME score is renormalised over the summed ground-truth tokens.
    pub fn pooled<'a>(files: impl IntoIterator<Item = &'a MetricBundle>, cfg: &ZmeConfig) -> Self {
        let mut token = Prf::default();
        let mut ssm = Prf::default();
        let mut numerator = Rational::zero();
        let (mut denominator, mut token_count) = (0, 0);
        let mut breakdown = empty_breakdown();
        for m in files {
            token += m.token;
            ssm += m.ssm;
            numerator += &m.zme.numerator;
            denominator += m.zme.denominator;
            token_count += m.zme.token_count;
            for (k, v) in &m.zme.breakdown {
                *breakdown.entry(*k).or_insert_with(Rational::zero) += v;
            }
        }
        MetricBundle {
            token,
            ssm,
            zme: ZmeSummary {
                score: zonemap::normalize(&numerator, denominator, token_count, cfg.empty_gold),
                numerator,
                denominator,
                token_count,
                breakdown,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.collect();
        let (mean, std) = mean_std(&v);
        MeanStd { mean, std }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrfAverages {
    pub precision: MeanStd,
    pub recall: MeanStd,
    pub f1: MeanStd,
}

/// Per-file means and population standard deviations.
#[derive(Clone, Debug, PartialEq)]
pub struct Averaged {
    pub token: PrfAverages,
    pub ssm: PrfAverages,
    pub zme: MeanStd,
    pub zme_breakdown: BTreeMap<GroupKind, MeanStd>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub config: ZmeConfig,
    pub per_file: BTreeMap<String, MetricBundle>,
    pub overall: MetricBundle,
    pub averaged: Averaged,
}

fn prf_averages(files: &[&MetricBundle], pick: impl Fn(&MetricBundle) -> Prf) -> PrfAverages {
    PrfAverages {
        precision: MeanStd::of(files.iter().map(|m| pick(m).precision)),
        recall: MeanStd::of(files.iter().map(|m| pick(m).recall)),
        f1: MeanStd::of(files.iter().map(|m| pick(m).f1)),
    }
}

impl EvalReport {
    pub fn new(per_file: BTreeMap<String, MetricBundle>, config: ZmeConfig) -> Result<Self> {
        if per_file.is_empty() {
            return Err(Error::validation("an evaluation report needs at least one file"));
        }
        let files: Vec<&MetricBundle> = per_file.values().collect();
        let overall = MetricBundle::pooled(files.iter().copied(), &config);
        let averaged = Averaged {
            token: prf_averages(&files, |m| m.token),
            ssm: prf_averages(&files, |m| m.ssm),
            zme: MeanStd::of(files.iter().map(|m| to_f64(&m.zme.score))),
            zme_breakdown: GroupKind::ALL
                .iter()
                .map(|k| {
                    let vals = files.iter().map(|m| to_f64(&m.zme.breakdown[k]));
                    (*k, MeanStd::of(vals))
                })
                .collect(),
        };
        Ok(EvalReport {
            config,
            per_file,
            overall,
            averaged,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&JsonReport(self))
            .map_err(|e| Error::validation(format!("cannot serialize report: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    /// One `file,metric,value` row per file and metric, files in id order.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::validation(format!("cannot write CSV: {e}"));
        w.write_record(["file", "metric", "value"]).map_err(csv_err)?;
        for (id, m) in &self.per_file {
            for (name, value) in csv_metrics(m) {
                w.write_record([id.as_str(), name, &fixed(value)]).map_err(csv_err)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::validation(format!("cannot write CSV: {e}")))?;
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
        }
    }
}

/// Metric rows written to the per-file CSV, in column order.
pub fn csv_metrics(m: &MetricBundle) -> Vec<(&'static str, f64)> {
    let mut rows = vec![
        ("token_precision", m.token.precision),
        ("token_recall", m.token.recall),
        ("token_f1", m.token.f1),
        ("ssm_precision", m.ssm.precision),
        ("ssm_recall", m.ssm.recall),
        ("ssm_f1", m.ssm.f1),
        ("zme", to_f64(&m.zme.score)),
    ];
    for kind in GroupKind::ALL {
        let name = match kind {
            GroupKind::Match => "zme_match",
            GroupKind::Miss => "zme_miss",
            GroupKind::FalseAlarm => "zme_false_alarm",
            GroupKind::Split => "zme_split",
            GroupKind::Merge => "zme_merge",
        };
        rows.push((name, to_f64(&m.zme.breakdown[&kind])));
    }
    rows
}

pub fn write_report(report: &EvalReport, path: &Path, format: ReportFormat) -> Result<()> {
    let content = report.render(format)?;
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn fixed(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

// Serialization views. Numbers go through RawValue so that the six-decimal
// rendering is kept verbatim in the JSON output.

struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(fixed(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

struct JsonPrf<'a>(&'a Prf);

impl Serialize for JsonPrf<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = self.0;
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("tp", &p.tp)?;
        m.serialize_entry("fp", &p.fp)?;
        m.serialize_entry("fn", &p.fn_)?;
        m.serialize_entry("precision", &Num(p.precision))?;
        m.serialize_entry("recall", &Num(p.recall))?;
        m.serialize_entry("f1", &Num(p.f1))?;
        m.end()
    }
}

struct JsonBundle<'a>(&'a MetricBundle);

impl Serialize for JsonBundle<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let b = self.0;
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("token", &JsonPrf(&b.token))?;
        m.serialize_entry("ssm", &JsonPrf(&b.ssm))?;
        m.serialize_entry("zme", &JsonZme(&b.zme))?;
        m.end()
    }
}

struct JsonZme<'a>(&'a ZmeSummary);

impl Serialize for JsonZme<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let z = self.0;
        let breakdown: BTreeMap<&str, Num> = z
            .breakdown
            .iter()
            .map(|(k, v)| (k.as_str(), Num(to_f64(v))))
            .collect();
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("score", &Num(to_f64(&z.score)))?;
        m.serialize_entry("score_exact", &z.score.to_string())?;
        m.serialize_entry("error_exact", &z.numerator.to_string())?;
        m.serialize_entry("gold_ds_tokens", &z.denominator)?;
        m.serialize_entry("tokens", &z.token_count)?;
        m.serialize_entry("breakdown", &breakdown)?;
        m.end()
    }
}

struct JsonMeanStd(MeanStd);

impl Serialize for JsonMeanStd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("mean", &Num(self.0.mean))?;
        m.serialize_entry("std", &Num(self.0.std))?;
        m.end()
    }
}

struct JsonPrfAverages<'a>(&'a PrfAverages);

impl Serialize for JsonPrfAverages<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("precision", &JsonMeanStd(self.0.precision))?;
        m.serialize_entry("recall", &JsonMeanStd(self.0.recall))?;
        m.serialize_entry("f1", &JsonMeanStd(self.0.f1))?;
        m.end()
    }
}

struct JsonReport<'a>(&'a EvalReport);

impl Serialize for JsonReport<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.0;
        let config: BTreeMap<&str, String> = [
            ("zme_alpha_ms", r.config.alpha_ms().to_string()),
            ("zme_empty_gold", r.config.empty_gold.to_string()),
        ]
        .into_iter()
        .collect();
        let breakdown: BTreeMap<&str, JsonMeanStd> = r
            .averaged
            .zme_breakdown
            .iter()
            .map(|(k, v)| (k.as_str(), JsonMeanStd(*v)))
            .collect();
        let per_file: BTreeMap<&str, JsonBundle> = r
            .per_file
            .iter()
            .map(|(k, v)| (k.as_str(), JsonBundle(v)))
            .collect();

        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("config", &config)?;
        m.serialize_entry("overall", &JsonBundle(&r.overall))?;
        m.serialize_entry("averaged", &AveragedView(&r.averaged, breakdown))?;
        m.serialize_entry("per_file", &per_file)?;
        m.end()
    }
}

struct AveragedView<'a>(&'a Averaged, BTreeMap<&'static str, JsonMeanStd>);

impl Serialize for AveragedView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("token", &JsonPrfAverages(&self.0.token))?;
        m.serialize_entry("ssm", &JsonPrfAverages(&self.0.ssm))?;
        m.serialize_entry("zme", &JsonMeanStd(self.0.zme))?;
        m.serialize_entry("zme_breakdown", &self.1)?;
        m.end()
    }
}
