//! ZoneMap error (ZME) over one-dimensional token spans.
//!
//! Ground-truth and predicted DS spans are linked by an overlap affinity,
//! clustered into groups of five kinds (Match, Miss, FalseAlarm, Split,
//! Merge), and every group is charged an error measured in tokens. The score
//! is the total charge divided by the number of ground-truth DS tokens.
//!
//! All arithmetic is exact; convert with [`to_f64`] only for display.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{labels_to_spans, Label, Span};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"0.5"`, `"1/3"` or `"1"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::validation(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num::pow(BigInt::from(10), frac_part.len());
    Ok(Rational::new(numer, denom))
}

/// What to report when the ground truth has no DS token at all, so that the
/// usual denominator is zero and the prediction is not empty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmptyGoldPolicy {
    /// The score is 0 whenever the ground truth is DS-free.
    ZeroIfClean,
    /// The error is divided by the number of tokens instead.
    #[default]
    NormalizeByTokens,
}

impl FromStr for EmptyGoldPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero_if_clean" => Ok(EmptyGoldPolicy::ZeroIfClean),
            "normalize_by_tokens" => Ok(EmptyGoldPolicy::NormalizeByTokens),
            other => Err(Error::validation(format!("unknown empty-gold policy {other:?}"))),
        }
    }
}

impl fmt::Display for EmptyGoldPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmptyGoldPolicy::ZeroIfClean => "zero_if_clean",
            EmptyGoldPolicy::NormalizeByTokens => "normalize_by_tokens",
        })
    }
}

/// The classification-error weight is fixed at zero, so only the
/// Split/Merge mitigation factor is configurable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZmeConfig {
    alpha_ms: Rational,
    pub empty_gold: EmptyGoldPolicy,
}

impl Default for ZmeConfig {
    fn default() -> Self {
        ZmeConfig {
            alpha_ms: rational(1, 2),
            empty_gold: EmptyGoldPolicy::default(),
        }
    }
}

impl ZmeConfig {
    pub fn new(alpha_ms: Rational, empty_gold: EmptyGoldPolicy) -> Result<Self> {
        if alpha_ms < Rational::zero() || alpha_ms > Rational::one() {
            return Err(Error::validation(format!(
                "Split/Merge mitigation factor must lie in [0, 1], got {alpha_ms}"
            )));
        }
        Ok(ZmeConfig { alpha_ms, empty_gold })
    }

    pub fn alpha_ms(&self) -> &Rational {
        &self.alpha_ms
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Match,
    Miss,
    FalseAlarm,
    Split,
    Merge,
}

impl GroupKind {
    pub const ALL: [GroupKind; 5] = [
        GroupKind::Match,
        GroupKind::Miss,
        GroupKind::FalseAlarm,
        GroupKind::Split,
        GroupKind::Merge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::Match => "match",
            GroupKind::Miss => "miss",
            GroupKind::FalseAlarm => "false_alarm",
            GroupKind::Split => "split",
            GroupKind::Merge => "merge",
        }
    }

    /// Kind of a group with the given number of ground-truth and predicted
    /// spans, or `None` for shapes no group may take.
    pub fn classify(n_gt: usize, n_pred: usize) -> Option<GroupKind> {
        match (n_gt, n_pred) {
            (1, 1) => Some(GroupKind::Match),
            (1, 0) => Some(GroupKind::Miss),
            (0, 1) => Some(GroupKind::FalseAlarm),
            (1, n) if n >= 2 => Some(GroupKind::Split),
            (n, 1) if n >= 2 => Some(GroupKind::Merge),
            _ => None,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub gt_index: usize,
    pub pred_index: usize,
    pub force: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub gt_spans: Vec<Span>,
    pub pred_spans: Vec<Span>,
    pub kind: GroupKind,
}

/// `(|gt ∩ pred| / |gt|)² + (|gt ∩ pred| / |pred|)²`, zero for disjoint spans.
pub fn link_force(gt: Span, pred: Span) -> Rational {
    let inter = gt.overlap(&pred);
    if inter == 0 {
        return Rational::zero();
    }
    let a = Rational::new(BigInt::from(inter), BigInt::from(gt.len()));
    let b = Rational::new(BigInt::from(inter), BigInt::from(pred.len()));
    &a * &a + &b * &b
}

fn check_spans(spans: &[Span], side: &str) -> Result<()> {
    for (i, s) in spans.iter().enumerate() {
        if s.start >= s.end {
            return Err(Error::validation(format!("empty {side} span {s}")));
        }
        if i > 0 && spans[i - 1].end > s.start {
            return Err(Error::validation(format!(
                "{side} spans {} and {s} overlap or are unsorted",
                spans[i - 1]
            )));
        }
    }
    Ok(())
}

/// All positive-force links, in processing order: force descending, then
/// ground-truth index, then predicted index.
pub fn links(gt: &[Span], pred: &[Span]) -> Vec<Link> {
    let mut out = Vec::new();
    let mut first = 0;
    for (i, g) in gt.iter().enumerate() {
        while first < pred.len() && pred[first].end <= g.start {
            first += 1;
        }
        for (j, p) in pred.iter().enumerate().skip(first) {
            if p.start >= g.end {
                break;
            }
            out.push(Link {
                gt_index: i,
                pred_index: j,
                force: link_force(*g, *p),
            });
        }
    }
    out.sort_by(|a, b| {
        b.force
            .cmp(&a.force)
            .then(a.gt_index.cmp(&b.gt_index))
            .then(a.pred_index.cmp(&b.pred_index))
    });
    out
}

/// Union-find over ground-truth nodes `0..n_gt` followed by predicted nodes.
struct Clusters {
    parent: Vec<usize>,
    n_gt: Vec<usize>,
    n_pred: Vec<usize>,
}

impl Clusters {
    fn new(gt: usize, pred: usize) -> Self {
        let n = gt + pred;
        Clusters {
            parent: (0..n).collect(),
            n_gt: (0..n).map(|i| usize::from(i < gt)).collect(),
            n_pred: (0..n).map(|i| usize::from(i >= gt)).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the clusters of `a` and `b` unless the result would hold
    /// several ground-truth and several predicted spans at once.
    fn try_union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let gt = self.n_gt[ra] + self.n_gt[rb];
        let pred = self.n_pred[ra] + self.n_pred[rb];
        if gt >= 2 && pred >= 2 {
            return false;
        }
        self.parent[rb] = ra;
        self.n_gt[ra] = gt;
        self.n_pred[ra] = pred;
        true
    }
}

/// Clusters spans into ZoneMap groups. Both sides must be sorted and
/// pairwise disjoint. Links are accepted greedily from the strongest; a link
/// that would create a group with multiple spans on both sides is dropped.
/// Spans left unlinked become Miss or FalseAlarm groups. Groups are returned
/// ordered by their leftmost token.
pub fn build_groups(gt: &[Span], pred: &[Span]) -> Result<Vec<Group>> {
    check_spans(gt, "ground-truth")?;
    check_spans(pred, "predicted")?;

    let mut clusters = Clusters::new(gt.len(), pred.len());
    for link in links(gt, pred) {
        clusters.try_union(link.gt_index, gt.len() + link.pred_index);
    }

    let mut members: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for i in 0..gt.len() {
        let root = clusters.find(i);
        members.entry(root).or_default().0.push(i);
    }
    for j in 0..pred.len() {
        let root = clusters.find(gt.len() + j);
        members.entry(root).or_default().1.push(j);
    }

    let mut groups: Vec<(usize, Group)> = members
        .into_values()
        .map(|(gi, pi)| {
            let kind = GroupKind::classify(gi.len(), pi.len())
                .expect("group growth never admits many-to-many shapes");
            let gt_spans: Vec<Span> = gi.iter().map(|&i| gt[i]).collect();
            let pred_spans: Vec<Span> = pi.iter().map(|&j| pred[j]).collect();
            let leftmost = gt_spans
                .iter()
                .chain(&pred_spans)
                .map(|s| s.start)
                .min()
                .unwrap_or(0);
            (leftmost, Group { gt_spans, pred_spans, kind })
        })
        .collect();
    groups.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.gt_spans.first().cmp(&b.1.gt_spans.first()))
            .then_with(|| a.1.pred_spans.first().cmp(&b.1.pred_spans.first()))
    });
    Ok(groups.into_iter().map(|(_, g)| g).collect())
}

/// Error charged to a one-to-many group: tokens outside the overlap count in
/// full; overlapping tokens beyond the largest single overlap count with
/// weight `alpha · (n - 1) / n`.
fn fragmented_error(whole: Span, parts: &[Span], alpha: &Rational) -> Rational {
    let n = parts.len();
    let overlaps: Vec<usize> = parts.iter().map(|p| whole.overlap(p)).collect();
    let inter: usize = overlaps.iter().sum();
    let parts_len: usize = parts.iter().map(Span::len).sum();
    let union = whole.len() + parts_len - inter;
    let full = union - inter;
    let mitigated = inter - overlaps.iter().copied().max().unwrap_or(0);
    int(full) + alpha * int(mitigated) * Rational::new(BigInt::from(n - 1), BigInt::from(n))
}

/// Error charged to one group, in tokens.
pub fn group_error(g: &Group, cfg: &ZmeConfig) -> Rational {
    match g.kind {
        GroupKind::Miss => int(g.gt_spans[0].len()),
        GroupKind::FalseAlarm => int(g.pred_spans[0].len()),
        GroupKind::Match => {
            let (a, b) = (g.gt_spans[0], g.pred_spans[0]);
            let inter = a.overlap(&b);
            int(a.len() + b.len() - 2 * inter)
        }
        GroupKind::Split => fragmented_error(g.gt_spans[0], &g.pred_spans, &cfg.alpha_ms),
        GroupKind::Merge => fragmented_error(g.pred_spans[0], &g.gt_spans, &cfg.alpha_ms),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZmeResult {
    pub score: Rational,
    /// Sum of group errors.
    pub numerator: Rational,
    /// Number of ground-truth DS tokens.
    pub denominator: usize,
    /// Sequence length, used when the ground truth is empty.
    pub token_count: usize,
    pub per_group: Vec<(Group, Rational)>,
    /// Summed error per group kind; every kind is present.
    pub breakdown: BTreeMap<GroupKind, Rational>,
}

impl ZmeResult {
    pub fn score_f64(&self) -> f64 {
        to_f64(&self.score)
    }
}

/// Empty per-kind breakdown with all five kinds at zero.
pub fn empty_breakdown() -> BTreeMap<GroupKind, Rational> {
    GroupKind::ALL.iter().map(|k| (*k, Rational::zero())).collect()
}

/// Normalises a summed error, applying `policy` when there is no
/// ground-truth DS token.
pub fn normalize(numerator: &Rational, denominator: usize, token_count: usize, policy: EmptyGoldPolicy) -> Rational {
    if denominator > 0 {
        return numerator / int(denominator);
    }
    if numerator.is_zero() {
        return Rational::zero();
    }
    match policy {
        EmptyGoldPolicy::ZeroIfClean => Rational::zero(),
        // A non-zero error implies a predicted span, hence token_count > 0.
        EmptyGoldPolicy::NormalizeByTokens => numerator / int(token_count.max(1)),
    }
}

/// ZME between two label sequences of equal length.
pub fn zme(gold: &[Label], pred: &[Label], cfg: &ZmeConfig) -> Result<ZmeResult> {
    if gold.len() != pred.len() {
        return Err(Error::validation(format!(
            "gold has {} labels, prediction has {}",
            gold.len(),
            pred.len()
        )));
    }
    zme_spans(&labels_to_spans(gold), &labels_to_spans(pred), gold.len(), cfg)
}

/// ZME over explicit span lists for a sequence of `token_count` tokens.
pub fn zme_spans(gt: &[Span], pred: &[Span], token_count: usize, cfg: &ZmeConfig) -> Result<ZmeResult> {
    let groups = build_groups(gt, pred)?;
    let mut numerator = Rational::zero();
    let mut breakdown = empty_breakdown();
    let mut per_group = Vec::with_capacity(groups.len());
    for g in groups {
        let e = group_error(&g, cfg);
        numerator += &e;
        *breakdown.get_mut(&g.kind).expect("all kinds present") += &e;
        per_group.push((g, e));
    }
    let denominator = gt.iter().map(Span::len).sum();
    Ok(ZmeResult {
        score: normalize(&numerator, denominator, token_count, cfg.empty_gold),
        numerator,
        denominator,
        token_count,
        per_group,
        breakdown,
    })
}
