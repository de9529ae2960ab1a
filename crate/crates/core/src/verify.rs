//! Feasibility checking, collision witnesses, question classification and
//! question relations.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameSpec, Question, Secret, Variant};
use crate::strategy::{Provenance, Strategy};

/// All secrets together with their answer rows, one row of `k` answers per
/// secret, stored contiguously.
pub(crate) struct AnswerTable {
    pub secrets: Vec<Secret>,
    pub k: usize,
    pub answers: Vec<u8>,
}

impl AnswerTable {
    pub fn new(strategy: &Strategy) -> Self {
        let secrets: Vec<Secret> = strategy.spec().secrets().collect();
        let k = strategy.len();
        let mut answers = Vec::with_capacity(secrets.len() * k);
        for s in &secrets {
            answers.extend(strategy.questions().iter().map(|q| q.blacks(s) as u8));
        }
        AnswerTable {
            secrets,
            k,
            answers,
        }
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.answers[i * self.k..(i + 1) * self.k]
    }

    /// Secret indices sorted by signature (ties by secret order).
    fn sorted_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.secrets.len()).collect();
        idx.sort_by(|&a, &b| self.row(a).cmp(self.row(b)).then(a.cmp(&b)));
        idx
    }

    /// Groups of secrets sharing a signature, each group of size >= 2.
    fn collision_groups(&self) -> Vec<Vec<Secret>> {
        let idx = self.sorted_indices();
        let mut groups = Vec::new();
        let mut start = 0;
        while start < idx.len() {
            let mut end = start + 1;
            while end < idx.len() && self.row(idx[end]) == self.row(idx[start]) {
                end += 1;
            }
            if end - start > 1 {
                groups.push(idx[start..end].iter().map(|&i| self.secrets[i]).collect());
            }
            start = end;
        }
        groups
    }
}

/// True iff every secret receives a distinct answer signature.
pub fn is_feasible(strategy: &Strategy) -> bool {
    let table = AnswerTable::new(strategy);
    let idx = table.sorted_indices();
    idx.windows(2).all(|w| table.row(w[0]) != table.row(w[1]))
}

/// The lexicographically smallest pair of distinct secrets with equal
/// signatures, or `None` when the strategy is feasible.
pub fn find_collision(strategy: &Strategy) -> Option<(Secret, Secret)> {
    collision_classes(strategy)
        .into_iter()
        .map(|g| (g[0], g[1]))
        .min()
}

/// Every class of two or more mutually indistinguishable secrets. Classes are
/// sorted internally and ordered by their smallest member.
pub fn collision_classes(strategy: &Strategy) -> Vec<Vec<Secret>> {
    let mut groups = AnswerTable::new(strategy).collision_groups();
    groups.sort();
    groups
}

/// True iff `a` and `b` receive identical answers to every question.
pub fn indistinguishable(strategy: &Strategy, a: &Secret, b: &Secret) -> Result<bool> {
    strategy.spec().check_code(a)?;
    strategy.spec().check_code(b)?;
    Ok(strategy
        .questions()
        .iter()
        .all(|q| q.blacks(a) == q.blacks(b)))
}

/// Per-peg occurrence counts `(a_1, ..., a_p)`: `a_i` is how often the
/// question's peg-`i` color occurs on peg `i` across the strategy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct QuestionClass(pub Vec<usize>);

impl QuestionClass {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// Number of pegs whose color occurs exactly once.
    pub fn singles(&self) -> usize {
        self.0.iter().filter(|&&a| a == 1).count()
    }

    /// Matches a pattern where `None` is a wildcard and `Some(n)` requires
    /// exactly `n`.
    pub fn matches(&self, pattern: &[Option<usize>]) -> bool {
        pattern.len() == self.0.len()
            && pattern
                .iter()
                .zip(&self.0)
                .all(|(p, &a)| p.is_none_or(|n| n == a))
    }
}

impl fmt::Display for QuestionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// `counts[peg][color]` occurrences over the strategy (index 0 unused).
pub(crate) fn peg_color_counts(strategy: &Strategy) -> Vec<Vec<usize>> {
    let spec = strategy.spec();
    let mut counts = vec![vec![0usize; spec.colors() + 1]; spec.pegs()];
    for q in strategy.questions() {
        for (peg, &c) in q.colors().iter().enumerate() {
            counts[peg][c as usize] += 1;
        }
    }
    counts
}

/// Class of question `index` (0-based) within `strategy`.
pub fn classify_question(strategy: &Strategy, index: usize) -> Result<QuestionClass> {
    let q = strategy.questions().get(index).ok_or(Error::IndexOutOfRange {
        what: "question",
        index,
        len: strategy.len(),
    })?;
    let counts = peg_color_counts(strategy);
    Ok(class_of(q, &counts))
}

/// Classes of all questions, in order.
pub fn classify_all(strategy: &Strategy) -> Vec<QuestionClass> {
    let counts = peg_color_counts(strategy);
    strategy
        .questions()
        .iter()
        .map(|q| class_of(q, &counts))
        .collect()
}

fn class_of(q: &Question, counts: &[Vec<usize>]) -> QuestionClass {
    QuestionClass(
        q.colors()
            .iter()
            .enumerate()
            .map(|(peg, &c)| counts[peg][c as usize])
            .collect(),
    )
}

/// How two questions relate. Peg lists are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// No color of one question occurs anywhere in the other.
    Disjoint,
    /// Equal colors on exactly one peg.
    Neighboring(Vec<usize>),
    /// Equal colors on two or more pegs.
    DoubleNeighboring(Vec<usize>),
    /// No overlapping peg, but some color is shared across different pegs.
    Neither,
}

pub fn relation(q: &Question, other: &Question) -> Result<Relation> {
    if q.pegs() != other.pegs() {
        return Err(Error::PegMismatch {
            expected: q.pegs(),
            found: other.pegs(),
        });
    }
    let overlap = overlapping_pegs(q, other);
    Ok(match overlap.len() {
        0 if disjoint_in_pegs(q, other, &(1..=q.pegs()).collect::<Vec<_>>()) => Relation::Disjoint,
        0 => Relation::Neither,
        1 => Relation::Neighboring(overlap),
        _ => Relation::DoubleNeighboring(overlap),
    })
}

/// Pegs (1-based) on which both questions carry the same color.
pub fn overlapping_pegs(q: &Question, other: &Question) -> Vec<usize> {
    (1..=q.pegs())
        .filter(|&i| q.color(i - 1) == other.color(i - 1))
        .collect()
}

/// Peg-restricted disjointness: the colors of `q` on `pegs` and the colors of
/// `other` on `pegs` (1-based) form disjoint sets.
pub fn disjoint_in_pegs(q: &Question, other: &Question, pegs: &[usize]) -> bool {
    pegs.iter()
        .all(|&i| pegs.iter().all(|&j| q.color(i - 1) != other.color(j - 1)))
}

/// Colors in `1..=c` never used on `peg` (1-based).
pub fn missing_colors(strategy: &Strategy, peg: usize) -> Result<BTreeSet<u8>> {
    let spec = strategy.spec();
    if peg == 0 || peg > spec.pegs() {
        return Err(Error::IndexOutOfRange {
            what: "peg",
            index: peg,
            len: spec.pegs(),
        });
    }
    let used: BTreeSet<u8> = strategy.questions().iter().map(|q| q.color(peg - 1)).collect();
    Ok((1..=spec.colors() as u8).filter(|c| !used.contains(c)).collect())
}

/// The two-peg strategy obtained by deleting peg `removed_peg` (1-based) from
/// every question of a three-peg strategy. Questions that coincide after the
/// deletion are kept once, in order of first appearance.
pub fn remove_column(strategy: &Strategy, removed_peg: usize) -> Result<Strategy> {
    let spec = strategy.spec();
    if spec.pegs() != 3 {
        return Err(Error::Unsupported(format!(
            "column removal is defined for p=3 strategies, got p={}",
            spec.pegs()
        )));
    }
    if !(1..=3).contains(&removed_peg) {
        return Err(Error::IndexOutOfRange {
            what: "peg",
            index: removed_peg,
            len: 3,
        });
    }
    let mut seen = BTreeSet::new();
    let mut induced = Vec::new();
    for q in strategy.questions() {
        let r = q.without_peg(removed_peg - 1)?;
        if seen.insert(r) {
            induced.push(r);
        }
    }
    let sub = GameSpec::new(spec.variant(), 2, spec.colors())?;
    Strategy::new(sub, induced, Provenance::UserSupplied)
}

/// Feasibility of [`remove_column`] over the two-peg secrets on the same colors.
pub fn column_removal_feasible(strategy: &Strategy, removed_peg: usize) -> Result<bool> {
    Ok(is_feasible(&remove_column(strategy, removed_peg)?))
}

/// Helper for building AB strategies from literal rows in tests and examples.
pub fn ab_strategy<R: AsRef<[u8]>>(
    pegs: usize,
    colors: usize,
    rows: impl IntoIterator<Item = R>,
) -> Result<Strategy> {
    Strategy::from_rows(
        GameSpec::new(Variant::Ab, pegs, colors)?,
        rows,
        Provenance::UserSupplied,
    )
}
