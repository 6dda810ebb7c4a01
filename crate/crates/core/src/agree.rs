//! Similarity scoring between two cut-point sets, e.g. solver output
//! against externally supplied cut-points.
//!
//! Cuts are matched order-preservingly: both sequences are sorted, a pair
//! is admissible when `|a - b| <= tolerance`, and the matching maximizes
//! the number of pairs, breaking ties by the smallest total `|a - b|`.
//! The score is `matched / max(|A|, |B|)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::CutPoints;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub a: f64,
    pub b: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub score: f64,
    pub matched_pairs: Vec<MatchedPair>,
    pub unmatched_a: Vec<f64>,
    pub unmatched_b: Vec<f64>,
    pub tolerance: f64,
}

/// Default x-axis tolerance for treating two cuts as the same.
pub const DEFAULT_CUT_TOLERANCE: f64 = 2.0;

/// Scores how well two cut-point sets agree within an x-axis tolerance.
/// Two empty sets agree perfectly; an empty set against a non-empty one
/// scores zero.
pub fn agreement_score(a: &CutPoints, b: &CutPoints, tolerance: f64) -> AgreementReport {
    assert!(
        tolerance >= 0.0 && tolerance.is_finite(),
        "tolerance must be a finite non-negative number"
    );
    let av = a.values();
    let bv = b.values();
    if av.is_empty() && bv.is_empty() {
        return AgreementReport {
            score: 1.0,
            matched_pairs: vec![],
            unmatched_a: vec![],
            unmatched_b: vec![],
            tolerance,
        };
    }

    // dp over prefixes: best (pairs, total |a-b|) using a[..i], b[..j].
    let (la, lb) = (av.len(), bv.len());
    let width = lb + 1;
    let mut pairs = vec![0usize; (la + 1) * width];
    let mut totals = vec![0.0f64; (la + 1) * width];
    // 0 = skip a, 1 = skip b, 2 = pair. Column 0 keeps the zero default
    // (skip a); row 0 can only consume b.
    let mut choice = vec![0u8; (la + 1) * width];
    choice[1..=lb].fill(1);
    for i in 1..=la {
        for j in 1..=lb {
            let mut best = (pairs[(i - 1) * width + j], totals[(i - 1) * width + j], 0u8);
            let skip_b = (pairs[i * width + j - 1], totals[i * width + j - 1], 1u8);
            if skip_b.0 > best.0 || (skip_b.0 == best.0 && skip_b.1 < best.1) {
                best = skip_b;
            }
            let diff = (av[i - 1] - bv[j - 1]).abs();
            if diff <= tolerance {
                let paired = (
                    pairs[(i - 1) * width + j - 1] + 1,
                    totals[(i - 1) * width + j - 1] + diff,
                    2u8,
                );
                if paired.0 > best.0 || (paired.0 == best.0 && paired.1 < best.1) {
                    best = paired;
                }
            }
            pairs[i * width + j] = best.0;
            totals[i * width + j] = best.1;
            choice[i * width + j] = best.2;
        }
    }

    let mut matched_pairs = Vec::new();
    let mut unmatched_a = Vec::new();
    let mut unmatched_b = Vec::new();
    let (mut i, mut j) = (la, lb);
    while i > 0 || j > 0 {
        match choice[i * width + j] {
            0 if i > 0 => {
                unmatched_a.push(av[i - 1]);
                i -= 1;
            }
            1 if j > 0 => {
                unmatched_b.push(bv[j - 1]);
                j -= 1;
            }
            _ => {
                matched_pairs.push(MatchedPair {
                    a: av[i - 1],
                    b: bv[j - 1],
                    abs_diff: (av[i - 1] - bv[j - 1]).abs(),
                });
                i -= 1;
                j -= 1;
            }
        }
    }
    matched_pairs.reverse();
    unmatched_a.reverse();
    unmatched_b.reverse();

    AgreementReport {
        score: matched_pairs.len() as f64 / la.max(lb) as f64,
        matched_pairs,
        unmatched_a,
        unmatched_b,
        tolerance,
    }
}

/// Qualitative agreement band for a score in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchBand {
    #[serde(rename = "No match")]
    NoMatch,
    Low,
    Medium,
    High,
    #[serde(rename = "Very High")]
    VeryHigh,
}

impl std::fmt::Display for MatchBand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            MatchBand::NoMatch => "No match",
            MatchBand::Low => "Low",
            MatchBand::Medium => "Medium",
            MatchBand::High => "High",
            MatchBand::VeryHigh => "Very High",
        };
        write!(f, "{label}")
    }
}

/// Maps a score into the reporting bands: exactly 0 is "No match", then
/// Low up to 40%, Medium up to 60%, High up to 80%, and Very High from
/// 80% through 100%. Band lower bounds are inclusive.
pub fn classify_match(score: f64) -> Result<MatchBand> {
    if !score.is_finite() || !(0.0..=1.0).contains(&score) {
        return Err(Error::OutOfRange(score));
    }
    let pct = score * 100.0;
    Ok(if pct == 0.0 {
        MatchBand::NoMatch
    } else if pct < 40.0 {
        MatchBand::Low
    } else if pct < 60.0 {
        MatchBand::Medium
    } else if pct < 80.0 {
        MatchBand::High
    } else {
        MatchBand::VeryHigh
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cuts(values: &[f64]) -> CutPoints {
        CutPoints::from_unsorted(values.to_vec()).unwrap()
    }

    #[test]
    fn identical_single_cut_scores_one() {
        let r = agreement_score(&cuts(&[50.0]), &cuts(&[50.0]), 2.0);
        assert_eq!(r.score, 1.0);
        assert_eq!(r.matched_pairs.len(), 1);
    }

    #[test]
    fn partial_match_scores_half() {
        let r = agreement_score(&cuts(&[20.0, 50.0]), &cuts(&[48.0, 60.0]), 2.0);
        assert_eq!(r.score, 0.5);
        assert_eq!(r.matched_pairs.len(), 1);
        assert_eq!(r.matched_pairs[0].a, 50.0);
        assert_eq!(r.matched_pairs[0].b, 48.0);
        assert_eq!(r.unmatched_a, vec![20.0]);
        assert_eq!(r.unmatched_b, vec![60.0]);
    }

    #[test]
    fn empty_conventions() {
        assert_eq!(agreement_score(&cuts(&[]), &cuts(&[]), 2.0).score, 1.0);
        assert_eq!(agreement_score(&cuts(&[50.0]), &cuts(&[]), 2.0).score, 0.0);
        assert_eq!(agreement_score(&cuts(&[]), &cuts(&[50.0]), 2.0).score, 0.0);
    }

    #[test]
    fn matching_prefers_smaller_total_distance() {
        // Both (0 - 10) and (10 - 10) fit a tolerance of 10; only one
        // pair is possible, and the zero-distance one must win.
        let r = agreement_score(&cuts(&[0.0, 10.0]), &cuts(&[10.0]), 10.0);
        assert_eq!(r.matched_pairs.len(), 1);
        assert_eq!(r.matched_pairs[0].a, 10.0);
        assert_eq!(r.matched_pairs[0].abs_diff, 0.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_match(0.913).unwrap(), MatchBand::VeryHigh);
        assert_eq!(classify_match(0.62).unwrap(), MatchBand::High);
        assert_eq!(classify_match(0.0).unwrap(), MatchBand::NoMatch);
        assert_eq!(classify_match(0.5).unwrap(), MatchBand::Medium);
        assert_eq!(classify_match(0.25).unwrap(), MatchBand::Low);
        assert_eq!(classify_match(1.0).unwrap(), MatchBand::VeryHigh);
    }

    #[test]
    fn classify_rejects_out_of_range() {
        assert!(matches!(classify_match(-0.1), Err(Error::OutOfRange(_))));
        assert!(matches!(classify_match(1.1), Err(Error::OutOfRange(_))));
        assert!(matches!(classify_match(f64::NAN), Err(Error::OutOfRange(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cut_list() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(0.0..100.0f64, 0..8)
        }

        proptest! {
            #[test]
            fn score_is_symmetric(a in cut_list(), b in cut_list(), tol in 0.0..20.0f64) {
                let ca = cuts(&a);
                let cb = cuts(&b);
                let ab = agreement_score(&ca, &cb, tol);
                let ba = agreement_score(&cb, &ca, tol);
                prop_assert_eq!(ab.score, ba.score);
                prop_assert_eq!(ab.matched_pairs.len(), ba.matched_pairs.len());
            }

            #[test]
            fn self_agreement_is_perfect(a in cut_list(), tol in 0.0..20.0f64) {
                prop_assume!(!a.is_empty());
                let ca = cuts(&a);
                prop_assert_eq!(agreement_score(&ca, &ca, tol).score, 1.0);
            }

            #[test]
            fn score_is_monotone_in_tolerance(
                a in cut_list(),
                b in cut_list(),
                t0 in 0.0..20.0f64,
                bump in 0.0..20.0f64,
            ) {
                let ca = cuts(&a);
                let cb = cuts(&b);
                let narrow = agreement_score(&ca, &cb, t0).score;
                let wide = agreement_score(&ca, &cb, t0 + bump).score;
                prop_assert!(wide >= narrow);
            }

            #[test]
            fn every_cut_used_at_most_once(a in cut_list(), b in cut_list(), tol in 0.0..20.0f64) {
                let r = agreement_score(&cuts(&a), &cuts(&b), tol);
                prop_assert_eq!(r.matched_pairs.len() + r.unmatched_a.len(), a.len());
                prop_assert_eq!(r.matched_pairs.len() + r.unmatched_b.len(), b.len());
                for p in &r.matched_pairs {
                    prop_assert!(p.abs_diff <= tol);
                }
            }
        }
    }
}
