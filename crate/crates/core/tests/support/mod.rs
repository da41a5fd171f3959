//! Reference implementations used as test oracles. Each one recomputes its
//! result from first principles (token masks, brute-force enumeration,
//! explicit graph search) and shares no code path with the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use aads_core::model::{Label, Span};
use aads_core::zonemap::GroupKind;
use num::{BigInt, BigRational, Zero};
use rand::Rng;

pub fn random_labels<R: Rng>(rng: &mut R, len: usize, p_ds: f64) -> Vec<Label> {
    (0..len)
        .map(|_| if rng.gen_bool(p_ds) { Label::Ds } else { Label::O })
        .collect()
}

/// Labels of the `bits` integer, bit `i` set meaning token `i` is DS.
pub fn labels_from_bits(bits: u32, len: usize) -> Vec<Label> {
    (0..len)
        .map(|i| if bits >> i & 1 == 1 { Label::Ds } else { Label::O })
        .collect()
}

/// Every `[start, end)` whose tokens are all DS and whose neighbours are not.
pub fn brute_spans(labels: &[Label]) -> BTreeSet<(usize, usize)> {
    let n = labels.len();
    let mut out = BTreeSet::new();
    for start in 0..n {
        for end in start + 1..=n {
            let inside = labels[start..end].iter().all(|l| *l == Label::Ds);
            let left = start == 0 || labels[start - 1] == Label::O;
            let right = end == n || labels[end] == Label::O;
            if inside && left && right {
                out.insert((start, end));
            }
        }
    }
    out
}

/// `(tp, fp, fn)` from a token-by-token confusion count.
pub fn brute_token_counts(gold: &[Label], pred: &[Label]) -> (usize, usize, usize) {
    let mut c = [[0usize; 2]; 2];
    for (g, p) in gold.iter().zip(pred) {
        c[(*g == Label::Ds) as usize][(*p == Label::Ds) as usize] += 1;
    }
    (c[1][1], c[0][1], c[1][0])
}

/// `(tp, fp, fn)` from set intersection of enumerated spans.
pub fn brute_ssm_counts(gold: &[Label], pred: &[Label]) -> (usize, usize, usize) {
    let g = brute_spans(gold);
    let p = brute_spans(pred);
    let tp = g.intersection(&p).count();
    (tp, p.len() - tp, g.len() - tp)
}

/// Precision, recall, F1 with the 0/0 → 0 convention.
pub fn prf_from_counts(tp: usize, fp: usize, fn_: usize) -> (f64, f64, f64) {
    let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let r = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f)
}

/// Token mask of a span.
fn mask(s: (usize, usize)) -> HashSet<usize> {
    (s.0..s.1).collect()
}

/// Force as an unreduced fraction `inter²(g² + p²) / (g² p²)`.
fn force(g: (usize, usize), p: (usize, usize)) -> (u128, u128) {
    let inter = mask(g).intersection(&mask(p)).count() as u128;
    let gl = (g.1 - g.0) as u128;
    let pl = (p.1 - p.0) as u128;
    (inter * inter * (gl * gl + pl * pl), gl * gl * pl * pl)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RefGroup {
    pub gt: Vec<(usize, usize)>,
    pub pred: Vec<(usize, usize)>,
    pub kind: GroupKind,
}

/// Reference grouping: links are accepted into an explicit edge list, and a
/// candidate is tested by searching the connected component it would create.
/// Groups are the components of the final accepted-edge graph.
pub fn reference_groups(gt: &[(usize, usize)], pred: &[(usize, usize)]) -> Vec<RefGroup> {
    let mut links = Vec::new();
    for (i, g) in gt.iter().enumerate() {
        for (j, p) in pred.iter().enumerate() {
            let f = force(*g, *p);
            if f.0 > 0 {
                links.push((f, i, j));
            }
        }
    }
    links.sort_by(|a, b| {
        // b.force vs a.force by cross-multiplication, descending.
        let lhs = (b.0).0 * (a.0).1;
        let rhs = (a.0).0 * (b.0).1;
        lhs.cmp(&rhs).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    });

    // Nodes: ("g", i) and ("p", j) encoded as i and gt.len() + j.
    let n = gt.len() + pred.len();
    let mut accepted: Vec<(usize, usize)> = Vec::new();
    let component = |edges: &[(usize, usize)], start: usize| -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(a, b) in edges {
                let other = if a == x { b } else if b == x { a } else { continue };
                if seen.insert(other) {
                    stack.push(other);
                }
            }
        }
        seen
    };
    for (_, i, j) in links {
        let mut trial = accepted.clone();
        trial.push((i, gt.len() + j));
        let comp = component(&trial, i);
        let n_gt = comp.iter().filter(|&&x| x < gt.len()).count();
        let n_pred = comp.len() - n_gt;
        if !(n_gt >= 2 && n_pred >= 2) {
            accepted = trial;
        }
    }

    let mut assigned = vec![false; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let comp = component(&accepted, start);
        for &x in &comp {
            assigned[x] = true;
        }
        let g: Vec<_> = comp.iter().filter(|&&x| x < gt.len()).map(|&x| gt[x]).collect();
        let p: Vec<_> = comp
            .iter()
            .filter(|&&x| x >= gt.len())
            .map(|&x| pred[x - gt.len()])
            .collect();
        let kind = match (g.len(), p.len()) {
            (1, 1) => GroupKind::Match,
            (1, 0) => GroupKind::Miss,
            (0, 1) => GroupKind::FalseAlarm,
            (1, _) => GroupKind::Split,
            (_, 1) => GroupKind::Merge,
            shape => panic!("reference produced an impossible group {shape:?}"),
        };
        groups.push(RefGroup { gt: g, pred: p, kind });
    }
    groups.sort();
    groups
}

/// Reference group error from token masks.
pub fn reference_group_error(g: &RefGroup, alpha: &BigRational) -> BigRational {
    let int = |n: usize| BigRational::from_integer(BigInt::from(n));
    let union_of = |spans: &[(usize, usize)]| -> HashSet<usize> {
        spans.iter().flat_map(|s| s.0..s.1).collect()
    };
    let (whole, parts) = match g.kind {
        GroupKind::Miss => return int(g.gt[0].1 - g.gt[0].0),
        GroupKind::FalseAlarm => return int(g.pred[0].1 - g.pred[0].0),
        GroupKind::Match | GroupKind::Split => (g.gt[0], &g.pred),
        GroupKind::Merge => (g.pred[0], &g.gt),
    };
    let w = mask(whole);
    let u = union_of(parts);
    let inter = w.intersection(&u).count();
    let union = w.union(&u).count();
    let e_f = int(union - inter);
    if g.kind == GroupKind::Match {
        return e_f;
    }
    let k = parts.len();
    let largest = parts
        .iter()
        .map(|p| w.intersection(&mask(*p)).count())
        .max()
        .unwrap();
    let v = int(inter - largest);
    e_f + alpha * v * BigRational::new(BigInt::from(k - 1), BigInt::from(k))
}

/// Reference ZME numerator and gold-token denominator.
pub fn reference_zme(gold: &[Label], pred: &[Label], alpha: &BigRational) -> (BigRational, usize) {
    let gt: Vec<_> = brute_spans(gold).into_iter().collect();
    let pr: Vec<_> = brute_spans(pred).into_iter().collect();
    let groups = reference_groups(&gt, &pr);
    let mut total = BigRational::zero();
    for g in &groups {
        total += reference_group_error(g, alpha);
    }
    let denom = gold.iter().filter(|l| **l == Label::Ds).count();
    (total, denom)
}

pub fn to_pairs(spans: &[Span]) -> Vec<(usize, usize)> {
    spans.iter().map(|s| (s.start, s.end)).collect()
}

/// Per-character mask projection: a token is DS iff any of its characters
/// is covered by some range.
pub fn mask_projection(
    text_len: usize,
    token_offsets: &[(usize, usize)],
    ranges: &[(usize, usize)],
) -> Vec<Label> {
    let mut covered = vec![false; text_len];
    for &(s, e) in ranges {
        for c in &mut covered[s..e] {
            *c = true;
        }
    }
    token_offsets
        .iter()
        .map(|&(s, e)| {
            if covered[s..e].iter().any(|c| *c) {
                Label::Ds
            } else {
                Label::O
            }
        })
        .collect()
}
