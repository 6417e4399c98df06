//! Ordering check for the Padé ladder of a Stieltjes series:
//!
//! ```text
//! [0/1] < [1/2] < ... < [K/K+1] < [K/K] < ... < [1/1] < [0/0]
//! ```
//!
//! A comparison counts as strict only when the gap exceeds `10^(2-p)` for a
//! ladder at `p` fractional digits. Gaps inside the margin are ties and make
//! the verdict inconclusive; they are never reported as violations.

use dashu::base::UnsignedAbs;
use dashu::integer::IBig;
use dashu::rational::RBig;
use serde::Serialize;

use super::PadeLadder;
use crate::numeric::{pow10, Fixed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderFamily {
    Diagonal,
    Subdiagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LadderIndex {
    pub family: LadderFamily,
    pub n: usize,
}

impl LadderIndex {
    pub fn diagonal(n: usize) -> Self {
        Self {
            family: LadderFamily::Diagonal,
            n,
        }
    }

    pub fn subdiagonal(n: usize) -> Self {
        Self {
            family: LadderFamily::Subdiagonal,
            n,
        }
    }
}

/// Two ladder entries expected to satisfy `lower < upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LadderPair {
    pub lower: LadderIndex,
    pub upper: LadderIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainVerdict {
    Holds,
    Inconclusive,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StieltjesReport {
    pub verdict: ChainVerdict,
    pub chain_holds: bool,
    pub first_violation: Option<LadderPair>,
    /// First comparison that fell inside the strictness margin.
    pub first_tie: Option<LadderPair>,
    pub margin: Fixed,
    /// Smallest step `sub[N+1] - sub[N]`.
    pub min_subdiagonal_gap: Option<Fixed>,
    /// Smallest step `diag[N] - diag[N+1]`.
    pub min_diagonal_gap: Option<Fixed>,
    /// `min(diag) - max(sub)`.
    pub interlace_gap: Fixed,
}

enum Comparison {
    Strict,
    Tie,
    Violated,
}

fn compare(lower: &Fixed, upper: &Fixed, margin: &Fixed) -> (Comparison, Fixed) {
    let gap = upper.sub(lower);
    let outcome = if gap > *margin {
        Comparison::Strict
    } else if gap.abs() <= *margin {
        Comparison::Tie
    } else {
        Comparison::Violated
    };
    (outcome, gap)
}

fn strictness_margin(precision: usize) -> Fixed {
    let margin = if precision >= 2 {
        RBig::from_parts(IBig::ONE, pow10(precision - 2).unsigned_abs())
    } else {
        RBig::from(pow10(2 - precision))
    };
    Fixed::from_rational(&margin, precision)
}

/// Checks the interlaced ordering of a ladder.
pub fn stieltjes_check(ladder: &PadeLadder) -> StieltjesReport {
    assert!(
        !ladder.diagonal.is_empty() && ladder.diagonal.len() == ladder.subdiagonal.len(),
        "ladder must be nonempty with matching sequences"
    );
    let margin = strictness_margin(ladder.precision);
    let sub = &ladder.subdiagonal;
    let diag = &ladder.diagonal;

    let mut first_violation = None;
    let mut first_tie = None;
    let mut record = |outcome: Comparison, pair: LadderPair| match outcome {
        Comparison::Strict => {}
        Comparison::Tie => {
            first_tie.get_or_insert(pair);
        }
        Comparison::Violated => {
            first_violation.get_or_insert(pair);
        }
    };

    let mut min_sub_gap: Option<Fixed> = None;
    for n in 0..sub.len() - 1 {
        let (outcome, gap) = compare(&sub[n], &sub[n + 1], &margin);
        record(
            outcome,
            LadderPair {
                lower: LadderIndex::subdiagonal(n),
                upper: LadderIndex::subdiagonal(n + 1),
            },
        );
        min_sub_gap = Some(min_sub_gap.map_or(gap.clone(), |m| m.min(gap)));
    }

    let mut min_diag_gap: Option<Fixed> = None;
    for n in (0..diag.len() - 1).rev() {
        let (outcome, gap) = compare(&diag[n + 1], &diag[n], &margin);
        record(
            outcome,
            LadderPair {
                lower: LadderIndex::diagonal(n + 1),
                upper: LadderIndex::diagonal(n),
            },
        );
        min_diag_gap = Some(min_diag_gap.map_or(gap.clone(), |m| m.min(gap)));
    }

    // max(sub) < min(diag); ties resolved towards the deepest entries.
    let max_sub = (0..sub.len()).rev().max_by(|&a, &b| sub[a].cmp(&sub[b])).unwrap();
    let min_diag = (0..diag.len()).rev().min_by(|&a, &b| diag[a].cmp(&diag[b])).unwrap();
    let (outcome, interlace_gap) = compare(&sub[max_sub], &diag[min_diag], &margin);
    record(
        outcome,
        LadderPair {
            lower: LadderIndex::subdiagonal(max_sub),
            upper: LadderIndex::diagonal(min_diag),
        },
    );

    let verdict = if first_violation.is_some() {
        ChainVerdict::Violated
    } else if first_tie.is_some() {
        ChainVerdict::Inconclusive
    } else {
        ChainVerdict::Holds
    };
    StieltjesReport {
        verdict,
        chain_holds: verdict == ChainVerdict::Holds,
        first_violation,
        first_tie,
        margin,
        min_subdiagonal_gap: min_sub_gap,
        min_diagonal_gap: min_diag_gap,
        interlace_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dashu::integer::UBig;

    fn fx(v: &str, p: usize) -> Fixed {
        Fixed::from_rational(&crate::numeric::parse_rational(v).unwrap(), p)
    }

    fn ladder(diag: &[&str], sub: &[&str], p: usize) -> PadeLadder {
        PadeLadder {
            t: RBig::from_parts(IBig::ONE, UBig::from(64u8)),
            depth: diag.len() - 1,
            precision: p,
            diagonal: diag.iter().map(|v| fx(v, p)).collect(),
            subdiagonal: sub.iter().map(|v| fx(v, p)).collect(),
        }
    }

    #[test]
    fn margin_is_ten_to_two_minus_p() {
        assert_eq!(strictness_margin(30).to_string(), format!("0.{}100", "0".repeat(27)));
        assert_eq!(strictness_margin(2).to_string(), "1.00");
    }

    #[test]
    fn ordered_ladder_holds() {
        let report = stieltjes_check(&ladder(&["11", "7.04", "6.35"], &["4.74", "5.70", "5.95"], 6));
        assert_eq!(report.verdict, ChainVerdict::Holds);
        assert!(report.chain_holds);
        assert!(report.first_violation.is_none());
        assert_eq!(report.interlace_gap.to_string(), "0.400000");
        assert_eq!(report.min_subdiagonal_gap.unwrap().to_string(), "0.250000");
        assert_eq!(report.min_diagonal_gap.unwrap().to_string(), "0.690000");
    }

    #[test]
    fn constant_ladder_is_inconclusive() {
        let report = stieltjes_check(&ladder(&["7", "7", "7"], &["7", "7", "7"], 10));
        assert_eq!(report.verdict, ChainVerdict::Inconclusive);
        assert!(!report.chain_holds);
        assert!(report.first_violation.is_none());
        assert_eq!(
            report.first_tie,
            Some(LadderPair {
                lower: LadderIndex::subdiagonal(0),
                upper: LadderIndex::subdiagonal(1)
            })
        );
        assert!(report.interlace_gap.is_zero());
    }

    #[test]
    fn gap_within_margin_is_a_tie_not_a_violation() {
        // p = 4 -> margin 0.01
        let report = stieltjes_check(&ladder(&["2", "1.995"], &["1", "0.9"], 4));
        assert_eq!(report.verdict, ChainVerdict::Violated);
        assert_eq!(
            report.first_violation,
            Some(LadderPair {
                lower: LadderIndex::subdiagonal(0),
                upper: LadderIndex::subdiagonal(1)
            })
        );
        assert_eq!(
            report.first_tie,
            Some(LadderPair {
                lower: LadderIndex::diagonal(1),
                upper: LadderIndex::diagonal(0)
            })
        );
    }

    #[test]
    fn crossing_sequences_violate_interlacing() {
        let report = stieltjes_check(&ladder(&["5", "4"], &["1", "4.5"], 3));
        assert_eq!(report.verdict, ChainVerdict::Violated);
        assert_eq!(
            report.first_violation,
            Some(LadderPair {
                lower: LadderIndex::subdiagonal(1),
                upper: LadderIndex::diagonal(1)
            })
        );
    }
}
