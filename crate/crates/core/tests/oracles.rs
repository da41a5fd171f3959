//! Library results checked against the independent oracles in `support`.

mod support;

use std::path::Path;

use aads_core::formats::{parse_token_tsv, render_token_tsv};
use aads_core::metrics::{cohen_kappa, ssm_prf, token_prf};
use aads_core::model::{char_spans_to_labels, labels_to_spans, spans_to_labels, Document, Label, LabelSeq};
use aads_core::textproc::tokenize_document;
use aads_core::zonemap::{self, rational, zme, Rational, ZmeConfig};
use num::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::*;

#[test]
fn span_round_trip_on_random_sequences() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..1000 {
        let labels = random_labels(&mut rng, 30, 0.5);
        let spans = labels_to_spans(&labels);
        assert_eq!(to_pairs(&spans), brute_spans(&labels).into_iter().collect::<Vec<_>>());
        assert_eq!(spans_to_labels(&spans, 30).unwrap().to_vec(), labels);
    }
}

#[test]
fn char_projection_matches_character_mask() {
    let doc = tokenize_document("d", "« Oui, dit-il. » Puis il partit.\n— Non !");
    let ranges = [(0, 7), (14, 16), (33, 36)];
    let offsets: Vec<_> = doc.tokens.iter().map(|t| (t.char_start, t.char_end)).collect();
    let len = doc.text.chars().count();
    let expected = mask_projection(len, &offsets, &ranges);
    assert_eq!(char_spans_to_labels(&doc, &ranges).unwrap().to_vec(), expected);

    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..300 {
        let ranges: Vec<_> = (0..rng.gen_range(0..5))
            .map(|_| {
                let a = rng.gen_range(0..=len);
                let b = rng.gen_range(a..=len);
                (a, b)
            })
            .collect();
        let expected = mask_projection(len, &offsets, &ranges);
        assert_eq!(char_spans_to_labels(&doc, &ranges).unwrap().to_vec(), expected);
    }
}

#[test]
fn token_and_ssm_match_brute_force() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..2000 {
        let n = rng.gen_range(0..=30);
        let gold = random_labels(&mut rng, n, 0.5);
        let pred = random_labels(&mut rng, n, 0.5);

        let t = token_prf(&gold, &pred).unwrap();
        let (tp, fp, fn_) = brute_token_counts(&gold, &pred);
        assert_eq!((t.tp, t.fp, t.fn_), (tp, fp, fn_));
        assert_eq!((t.precision, t.recall, t.f1), prf_from_counts(tp, fp, fn_));

        let s = ssm_prf(&gold, &pred).unwrap();
        let (tp, fp, fn_) = brute_ssm_counts(&gold, &pred);
        assert_eq!((s.tp, s.fp, s.fn_), (tp, fp, fn_));
        assert_eq!((s.precision, s.recall, s.f1), prf_from_counts(tp, fp, fn_));
    }
}

#[test]
fn kappa_of_independent_sequences_is_near_zero() {
    let mut rng = StdRng::seed_from_u64(4);
    let a = random_labels(&mut rng, 100_000, 0.5);
    let b = random_labels(&mut rng, 100_000, 0.5);
    let k = cohen_kappa(&a, &b).unwrap();
    assert!(k.abs() < 0.05, "kappa = {k}");
}

#[test]
fn kappa_matches_textbook_formula() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..500 {
        let n = rng.gen_range(1..40);
        let a = random_labels(&mut rng, n, 0.4);
        let b = random_labels(&mut rng, n, 0.6);
        let nf = n as f64;
        let po = a.iter().zip(&b).filter(|(x, y)| x == y).count() as f64 / nf;
        let pa = a.iter().filter(|l| **l == Label::Ds).count() as f64 / nf;
        let pb = b.iter().filter(|l| **l == Label::Ds).count() as f64 / nf;
        let pe = pa * pb + (1.0 - pa) * (1.0 - pb);
        let expected = if (1.0 - pe).abs() < 1e-12 { 1.0 } else { (po - pe) / (1.0 - pe) };
        let k = cohen_kappa(&a, &b).unwrap();
        assert!((k - expected).abs() < 1e-9, "{k} vs {expected}");
    }
}

fn check_zme_against_reference(gold: &[Label], pred: &[Label], cfg: &ZmeConfig) {
    let r = zme(gold, pred, cfg).unwrap();
    let gt = to_pairs(&labels_to_spans(gold));
    let pr = to_pairs(&labels_to_spans(pred));
    let mut got: Vec<RefGroup> = r
        .per_group
        .iter()
        .map(|(g, _)| RefGroup {
            gt: to_pairs(&g.gt_spans),
            pred: to_pairs(&g.pred_spans),
            kind: g.kind,
        })
        .collect();
    got.sort();
    assert_eq!(got, reference_groups(&gt, &pr), "gold {gold:?} pred {pred:?}");
    let (numer, denom) = reference_zme(gold, pred, cfg.alpha_ms());
    assert_eq!(r.numerator, numer);
    assert_eq!(r.denominator, denom);
}

#[test]
fn zme_matches_reference_exhaustively_up_to_six_tokens() {
    let cfg = ZmeConfig::default();
    for len in 0..=6usize {
        for a in 0..1u32 << len {
            for b in 0..1u32 << len {
                check_zme_against_reference(&labels_from_bits(a, len), &labels_from_bits(b, len), &cfg);
            }
        }
    }
}

#[test]
fn zme_matches_reference_on_longer_random_pairs() {
    let mut rng = StdRng::seed_from_u64(6);
    for alpha in [Rational::zero(), rational(1, 3), rational(1, 1)] {
        let cfg = ZmeConfig::new(alpha, Default::default()).unwrap();
        for _ in 0..2000 {
            let n = rng.gen_range(1..=40);
            let gold = random_labels(&mut rng, n, 0.6);
            let pred = random_labels(&mut rng, n, 0.6);
            check_zme_against_reference(&gold, &pred, &cfg);
        }
    }
}

#[test]
fn zme_rescales_when_a_perfect_span_is_appended() {
    let mut rng = StdRng::seed_from_u64(7);
    let cfg = ZmeConfig::default();
    for _ in 0..300 {
        let n = rng.gen_range(1..30);
        let mut gold = random_labels(&mut rng, n, 0.5);
        let mut pred = random_labels(&mut rng, n, 0.5);
        if !gold.contains(&Label::Ds) {
            gold[0] = Label::Ds;
        }
        let before = zme(&gold, &pred, &cfg).unwrap();
        let l = rng.gen_range(1..10);
        for seq in [&mut gold, &mut pred] {
            seq.push(Label::O);
            seq.extend(std::iter::repeat_n(Label::Ds, l));
        }
        let after = zme(&gold, &pred, &cfg).unwrap();
        let expected = &before.numerator / Rational::from_integer((before.denominator + l).into());
        assert_eq!(after.score, expected);
    }
}

#[test]
fn zme_hand_values() {
    let cfg = ZmeConfig::default();
    let s = |a, b| aads_core::Span::new(a, b);
    let score = |gold: &[aads_core::Span], pred: &[aads_core::Span], n| {
        let g = spans_to_labels(gold, n).unwrap();
        let p = spans_to_labels(pred, n).unwrap();
        zme(&g, &p, &cfg).unwrap().score
    };
    assert_eq!(score(&[s(0, 10)], &[], 10), rational(1, 1));
    assert_eq!(score(&[s(0, 12)], &[s(0, 3), s(5, 7), s(9, 11)], 12), rational(19, 36));
    assert_eq!(score(&[s(0, 4), s(6, 10)], &[s(0, 10)], 10), rational(3, 8));
    assert_eq!(score(&[s(0, 5)], &[s(2, 7)], 8), rational(4, 5));
    assert_eq!(zonemap::link_force(s(0, 10), s(5, 10)), rational(5, 4));
}

const TOKEN_POOL: &[&str] = &[
    "Oui", "non", "dit", "-", "il", ",", ".", "«", "»", "—", "l'", "homme", "...", "--", "“", "”",
    "Été", "?", "!", "\n",
];

fn random_document(rng: &mut StdRng, id: &str) -> (Document, LabelSeq) {
    let n = rng.gen_range(1..40);
    let tokens: Vec<&str> = (0..n).map(|_| TOKEN_POOL[rng.gen_range(0..TOKEN_POOL.len())]).collect();
    let mut lens = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = rng.gen_range(1..=left);
        lens.push(k);
        left -= k;
    }
    let doc = Document::from_token_texts(id, &tokens, &lens).unwrap();
    let labels = LabelSeq::new(random_labels(rng, n, 0.5));
    (doc, labels)
}

#[test]
fn tsv_round_trip_on_random_documents() {
    let mut rng = StdRng::seed_from_u64(8);
    for i in 0..1000 {
        let id = format!("doc{i}");
        let (doc, labels) = random_document(&mut rng, &id);
        let tsv = render_token_tsv(&doc, &labels).unwrap();
        let (doc2, labels2) = parse_token_tsv(&tsv, Path::new("x.tsv"), &id).unwrap();
        assert_eq!(doc2, doc);
        assert_eq!(labels2, labels);
    }
}

#[test]
fn tokenizer_offsets_reconstruct_random_text() {
    const PIECES: &[&str] = &[
        "a", "é", "l'", "’", "'", " ", "  ", "\t", "\n", "«", "»", "-", "--", "—", ".", "...", "…",
        "mot", "qu'il", "!", "\"",
    ];
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..1000 {
        let text: String = (0..rng.gen_range(0..30))
            .map(|_| PIECES[rng.gen_range(0..PIECES.len())])
            .collect();
        let doc = tokenize_document("t", &text);
        let chars: Vec<char> = text.chars().collect();
        let mut rebuilt = String::new();
        let mut cursor = 0;
        for tok in &doc.tokens {
            assert!(tok.char_start >= cursor && tok.char_start < tok.char_end);
            let gap: String = chars[cursor..tok.char_start].iter().collect();
            assert!(gap.chars().all(|c| c.is_whitespace() && c != '\n'), "{text:?}");
            rebuilt.push_str(&gap);
            let piece: String = chars[tok.char_start..tok.char_end].iter().collect();
            assert_eq!(piece, tok.text);
            rebuilt.push_str(&piece);
            cursor = tok.char_end;
        }
        rebuilt.extend(&chars[cursor..]);
        assert!(chars[cursor..].iter().all(|c| c.is_whitespace() && *c != '\n'));
        assert_eq!(rebuilt, text);

        // Sentences partition the tokens.
        let mut expected = 0;
        for s in &doc.sentences {
            assert_eq!(s.start, expected);
            assert!(s.end > s.start);
            expected = s.end;
        }
        assert_eq!(expected, doc.tokens.len());
    }
}
