//! Construction of feasible and optimal strategies for `p <= 3`.
//!
//! A strategy is a small base table chosen by `c`'s residue, followed by `s`
//! color-shifted copies of a fixed iterated block:
//!
//! * `p = 2`: `c = 3s + t`, `t ∈ {2,3,4}`, block of 4 questions shifted by `t + 3(l-1)`.
//! * `p = 3`: `c = 6s + t`, `t ∈ {4..=9}`, block of 9 questions shifted by `t + 6(l-1)`.
//!   `c = 3` uses its own 4-question table.
//!
//! The base tables were found by computer search and are embedded verbatim.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Code, GameSpec, Variant};
use crate::strategy::{Provenance, Strategy};

const P2_BASE_T2: &[[u8; 2]] = &[[1, 2]];
const P2_BASE_T3: &[[u8; 2]] = &[[1, 2], [3, 1]];
const P2_BLOCK: &[[u8; 2]] = &[[1, 3], [3, 1], [2, 3], [3, 2]];

const P3_C3: &[[u8; 3]] = &[[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1]];

const P3_BASE: [&[[u8; 3]]; 6] = [
    // t = 4
    &[[1, 2, 3], [1, 3, 4], [3, 2, 4], [2, 4, 1]],
    // t = 5
    &[
        [1, 3, 4],
        [2, 3, 4],
        [3, 1, 5],
        [4, 2, 5],
        [3, 5, 1],
        [4, 5, 3],
    ],
    // t = 6
    &[
        [1, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 4, 1],
        [3, 5, 2],
        [5, 4, 6],
        [6, 5, 4],
    ],
    // t = 7
    &[
        [1, 2, 7],
        [4, 1, 7],
        [2, 7, 5],
        [5, 7, 4],
        [7, 3, 2],
        [7, 4, 3],
        [6, 5, 1],
        [3, 6, 1],
        [3, 5, 6],
    ],
    // t = 8
    &[
        [6, 5, 4],
        [3, 1, 5],
        [7, 6, 4],
        [8, 2, 6],
        [2, 4, 6],
        [2, 7, 5],
        [4, 1, 3],
        [8, 5, 2],
        [1, 6, 7],
        [4, 3, 8],
    ],
    // t = 9
    &[
        [3, 1, 4],
        [2, 1, 3],
        [4, 2, 3],
        [1, 2, 4],
        [5, 7, 8],
        [5, 6, 7],
        [6, 8, 7],
        [7, 5, 8],
        [7, 3, 1],
        [7, 3, 5],
        [8, 9, 2],
        [8, 4, 9],
    ],
];

/// Three triples; inside a triple every pair overlaps in exactly one peg.
const P3_BLOCK: &[[u8; 3]] = &[
    [1, 5, 6],
    [4, 1, 6],
    [4, 5, 1],
    [2, 6, 4],
    [5, 2, 4],
    [5, 6, 2],
    [3, 4, 5],
    [6, 3, 5],
    [6, 4, 3],
];

fn codes<const N: usize>(rows: &[[u8; N]]) -> Vec<Code> {
    rows.iter()
        .map(|r| Code::new(r).expect("embedded table rows are valid"))
        .collect()
}

/// The base questions for `(p, t)`. `(3, 3)` is the special `c = 3` table.
pub fn base_table(pegs: usize, t: usize) -> Result<Vec<Code>> {
    match (pegs, t) {
        (2, 2) => Ok(codes(P2_BASE_T2)),
        (2, 3) => Ok(codes(P2_BASE_T3)),
        (2, 4) => Ok(codes(P2_BLOCK)),
        (3, 3) => Ok(codes(P3_C3)),
        (3, 4..=9) => Ok(codes(P3_BASE[t - 4])),
        _ => Err(Error::Unsupported(format!(
            "no base table for p={pegs}, t={t}; supported: p=2 with t in 2..=4, p=3 with t in 3..=9"
        ))),
    }
}

/// The unshifted iterated block: 4 questions over colors 1..=3 for `p = 2`,
/// 9 questions over colors 1..=6 for `p = 3`.
pub fn iterated_block(pegs: usize) -> Result<Vec<Code>> {
    match pegs {
        2 => Ok(codes(P2_BLOCK)),
        3 => Ok(codes(P3_BLOCK)),
        _ => Err(Error::Unsupported(format!(
            "iterated blocks exist only for p in {{2, 3}}, got p={pegs}"
        ))),
    }
}

/// Adds `offset` to every color of `block`; every shifted color must stay in
/// `1..=colors`.
pub fn shift_block(block: &[Code], offset: usize, colors: usize) -> Result<Vec<Code>> {
    block
        .iter()
        .map(|q| {
            let max = q.colors().iter().copied().max().unwrap_or(0) as usize;
            if max + offset > colors {
                return Err(Error::ColorOutOfRange {
                    color: max + offset,
                    colors,
                });
            }
            Ok(q.shifted(offset as u8).expect("bounded by colors <= 255"))
        })
        .collect()
}

/// How a generated strategy for `p ∈ {2, 3}` is laid out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPlan {
    pub pegs: usize,
    /// Number of iterated blocks.
    pub s: usize,
    /// Base-table selector.
    pub t: usize,
    /// `c mod 3`, only meaningful for `p = 2`.
    pub h: Option<usize>,
    /// Color offset of each iterated block, in order.
    pub shifts: Vec<usize>,
    pub base_len: usize,
    pub block_len: usize,
}

impl BlockPlan {
    pub fn new(spec: &GameSpec) -> Result<Self> {
        if spec.variant() != Variant::Ab {
            return Err(Error::Unsupported(
                "strategy construction covers the AB game only".into(),
            ));
        }
        let c = spec.colors();
        let (s, t, step, h, block_len) = match spec.pegs() {
            2 => {
                let s = (c - 2) / 3;
                (s, c - 3 * s, 3, Some(c % 3), P2_BLOCK.len())
            }
            3 if c == 3 => (0, 3, 6, None, P3_BLOCK.len()),
            3 => {
                let s = (c - 4) / 6;
                (s, c - 6 * s, 6, None, P3_BLOCK.len())
            }
            p => {
                return Err(Error::Unsupported(format!(
                    "block construction exists only for p in {{2, 3}}, got p={p}"
                )))
            }
        };
        let base_len = base_table(spec.pegs(), t)?.len();
        Ok(BlockPlan {
            pegs: spec.pegs(),
            s,
            t,
            h,
            shifts: (0..s).map(|l| t + step * l).collect(),
            base_len,
            block_len,
        })
    }

    pub fn base_range(&self) -> Range<usize> {
        0..self.base_len
    }

    /// Question index ranges of the iterated blocks, `l = 1..=s`.
    pub fn block_ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.s).map(move |l| {
            let start = self.base_len + l * self.block_len;
            start..start + self.block_len
        })
    }

    pub fn total_len(&self) -> usize {
        self.base_len + self.s * self.block_len
    }
}

/// Builds the strategy for an AB spec with `p <= 3`.
pub fn build_strategy(spec: &GameSpec) -> Result<Strategy> {
    if spec.variant() != Variant::Ab {
        return Err(Error::Unsupported(
            "only AB strategies can be generated; Mastermind is available for counts and search"
                .into(),
        ));
    }
    let questions = match spec.pegs() {
        1 => (1..spec.colors() as u8)
            .map(|c| Code::new(&[c]).expect("valid color"))
            .collect(),
        2 | 3 => {
            let plan = BlockPlan::new(spec)?;
            let mut qs = base_table(spec.pegs(), plan.t)?;
            let block = iterated_block(spec.pegs())?;
            for &offset in &plan.shifts {
                qs.extend(shift_block(&block, offset, spec.colors())?);
            }
            qs
        }
        p => {
            return Err(Error::Unsupported(format!(
                "strategies are generated for p <= 3 only, got p={p}"
            )))
        }
    };
    Strategy::new(*spec, questions, Provenance::Generated)
}

/// Number of main questions of an optimal strategy.
///
/// For Mastermind the counts are the known optimal values, reported for
/// comparison only.
pub fn expected_k(spec: &GameSpec) -> Result<usize> {
    let c = spec.colors();
    match (spec.variant(), spec.pegs()) {
        (_, 1) => Ok(c - 1),
        (Variant::Ab, 2) => Ok((4 * c).div_ceil(3) - 2),
        (Variant::Ab, 3) if c == 3 => Ok(4),
        (Variant::Ab, 3) => Ok((3 * c - 1) / 2 - 1),
        (Variant::Mastermind, 2) => Ok((4 * c - 1).div_ceil(3) - 1),
        (Variant::Mastermind, 3) => Ok(3 * c / 2),
        (_, p) => Err(Error::Unsupported(format!(
            "optimal question counts are known for p <= 3 only, got p={p}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(codes: &[Code]) -> Vec<Vec<u8>> {
        codes.iter().map(|c| c.colors().to_vec()).collect()
    }

    #[test]
    fn base_tables() {
        assert_eq!(rows(&base_table(2, 3).unwrap()), vec![vec![1, 2], vec![3, 1]]);
        assert_eq!(
            rows(&base_table(3, 4).unwrap()),
            vec![vec![1, 2, 3], vec![1, 3, 4], vec![3, 2, 4], vec![2, 4, 1]]
        );
        let t9 = base_table(3, 9).unwrap();
        assert_eq!(t9.len(), 12);
        assert_eq!(t9[0].colors(), &[3, 1, 4]);
        assert!(matches!(base_table(2, 5), Err(Error::Unsupported(_))));
        assert!(matches!(base_table(4, 4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn blocks() {
        assert_eq!(
            rows(&iterated_block(2).unwrap()),
            vec![vec![1, 3], vec![3, 1], vec![2, 3], vec![3, 2]]
        );
        let b3 = iterated_block(3).unwrap();
        assert_eq!(b3.len(), 9);
        assert_eq!(b3[0].colors(), &[1, 5, 6]);
        assert!(iterated_block(1).is_err());
    }

    #[test]
    fn shifting() {
        let b2 = iterated_block(2).unwrap();
        assert_eq!(
            rows(&shift_block(&b2, 2, 5).unwrap()),
            vec![vec![3, 5], vec![5, 3], vec![4, 5], vec![5, 4]]
        );
        let b3 = iterated_block(3).unwrap();
        assert_eq!(shift_block(&b3, 4, 10).unwrap()[0].colors(), &[5, 9, 10]);
        assert_eq!(shift_block(&b3, 0, 6).unwrap(), b3);
        assert!(matches!(
            shift_block(&b3, 5, 10),
            Err(Error::ColorOutOfRange { color: 11, colors: 10 })
        ));
    }

    #[test]
    fn plans() {
        let p = BlockPlan::new(&GameSpec::ab(2, 9).unwrap()).unwrap();
        assert_eq!((p.s, p.t, p.h), (2, 3, Some(0)));
        assert_eq!(p.shifts, vec![3, 6]);
        let p = BlockPlan::new(&GameSpec::ab(3, 15).unwrap()).unwrap();
        assert_eq!((p.s, p.t), (1, 9));
        assert_eq!(p.shifts, vec![9]);
        let p = BlockPlan::new(&GameSpec::ab(3, 3).unwrap()).unwrap();
        assert_eq!((p.s, p.t, p.base_len), (0, 3, 4));
    }

    #[test]
    fn builds_known_strategies() {
        let s = build_strategy(&GameSpec::ab(2, 9).unwrap()).unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(s.questions().last().unwrap().colors(), &[9, 8]);
        assert_eq!(build_strategy(&GameSpec::ab(3, 12).unwrap()).unwrap().len(), 16);
        assert_eq!(
            rows(build_strategy(&GameSpec::ab(3, 3).unwrap()).unwrap().questions()),
            rows(&codes(P3_C3))
        );
        let p1 = build_strategy(&GameSpec::ab(1, 4).unwrap()).unwrap();
        assert_eq!(rows(p1.questions()), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            build_strategy(&GameSpec::ab(4, 6).unwrap()),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            build_strategy(&GameSpec::mastermind(2, 4).unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn expected_counts() {
        assert_eq!(expected_k(&GameSpec::ab(2, 9).unwrap()).unwrap(), 10);
        assert_eq!(expected_k(&GameSpec::ab(3, 4).unwrap()).unwrap(), 4);
        assert_eq!(expected_k(&GameSpec::ab(1, 5).unwrap()).unwrap(), 4);
        assert_eq!(expected_k(&GameSpec::ab(3, 3).unwrap()).unwrap(), 4);
        assert_eq!(expected_k(&GameSpec::mastermind(2, 3).unwrap()).unwrap(), 3);
        assert_eq!(expected_k(&GameSpec::mastermind(3, 4).unwrap()).unwrap(), 6);
        assert!(expected_k(&GameSpec::ab(4, 5).unwrap()).is_err());
    }

    #[test]
    fn mastermind_comparison_counts() {
        // Main-question counts: AB saves one question for p=2 with c mod 3 in
        // {0, 2}, none when c mod 3 = 1; for p=3 it saves two (c even) or one (c odd).
        for c in 4..=60 {
            let ab2 = expected_k(&GameSpec::ab(2, c).unwrap()).unwrap();
            let mm2 = expected_k(&GameSpec::mastermind(2, c).unwrap()).unwrap();
            assert_eq!(mm2 - ab2, if c % 3 == 1 { 0 } else { 1 }, "p=2 c={c}");
            let ab3 = expected_k(&GameSpec::ab(3, c).unwrap()).unwrap();
            let mm3 = expected_k(&GameSpec::mastermind(3, c).unwrap()).unwrap();
            assert_eq!(mm3 - ab3, if c % 2 == 0 { 2 } else { 1 }, "p=3 c={c}");
        }
    }
}
