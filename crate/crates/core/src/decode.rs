//! Recovering the secret from an answer signature.
//!
//! [`decode`] filters all secrets. [`structured_decode`] works only on
//! generated strategies and reads the secret off the block structure: every
//! non-empty answer to an iterated question pins the pegs it came from, with the
//! neighboring questions of the same block telling which pegs those are. Pegs
//! left open are completed from the base questions.

use std::fmt;

use serde::Serialize;

use crate::builder::BlockPlan;
use crate::error::{Error, Result};
use crate::game::{AnswerSignature, Code, Secret};
use crate::strategy::{Provenance, Strategy};
use crate::verify::{missing_colors, overlapping_pegs};

/// Largest number of candidates listed in an [`DecodeOutcome::Ambiguous`].
pub const MAX_LISTED_CANDIDATES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DecodeOutcome {
    Unique { secret: Secret },
    Inconsistent,
    Ambiguous { candidates: Vec<Secret>, total: usize },
}

fn check_signature(strategy: &Strategy, sig: &AnswerSignature) -> Result<()> {
    if sig.len() != strategy.len() {
        return Err(Error::MalformedSignature(format!(
            "expected {} answers, got {}",
            strategy.len(),
            sig.len()
        )));
    }
    let p = strategy.spec().pegs();
    if let Some((j, &a)) = sig.answers().iter().enumerate().find(|(_, &a)| a as usize > p) {
        return Err(Error::MalformedSignature(format!(
            "answer {a} to question {} exceeds {p} pegs",
            j + 1
        )));
    }
    Ok(())
}

fn matches(strategy: &Strategy, s: &Secret, answers: &[u8]) -> bool {
    strategy
        .questions()
        .iter()
        .zip(answers)
        .all(|(q, &a)| q.blacks(s) == a as usize)
}

/// Every secret whose signature equals `sig`.
pub fn decode(strategy: &Strategy, sig: &AnswerSignature) -> Result<DecodeOutcome> {
    check_signature(strategy, sig)?;
    let mut candidates = Vec::new();
    let mut total = 0;
    for s in strategy.spec().secrets() {
        if matches(strategy, &s, sig.answers()) {
            total += 1;
            if candidates.len() < MAX_LISTED_CANDIDATES {
                candidates.push(s);
            }
        }
    }
    Ok(match total {
        0 => DecodeOutcome::Inconsistent,
        1 => DecodeOutcome::Unique {
            secret: candidates[0],
        },
        _ => DecodeOutcome::Ambiguous { candidates, total },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    OneBlackNeighborEmpty,
    OneBlackNeighborNonEmpty,
    TwoBlackNeighborEmpty,
    TwoBlackBothNeighborsNonEmpty,
    FullAnswer,
    EndgameEnumeration,
    MissingColorCompletion,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::OneBlackNeighborEmpty => "1B + neighbor empty → non-overlapping peg",
            Rule::OneBlackNeighborNonEmpty => "1B + neighbor non-empty → overlapping peg",
            Rule::TwoBlackNeighborEmpty => "2B + neighbor empty → overlapping peg incorrect",
            Rule::TwoBlackBothNeighborsNonEmpty => {
                "2B + both neighbors non-empty → both overlapping pegs correct"
            }
            Rule::FullAnswer => "full answer",
            Rule::EndgameEnumeration => "endgame enumeration",
            Rule::MissingColorCompletion => "missing-color completion",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One inference. `question` is 0-based and absent for completion steps that
/// use the whole strategy; `pinned` lists `(peg, color)` with 1-based pegs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub question: Option<usize>,
    pub answer: Option<u8>,
    pub rule: Rule,
    pub pinned: Vec<(usize, u8)>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DecodeTrace {
    pub steps: Vec<TraceStep>,
    /// Per peg, the color determined so far.
    pub resolved: Vec<Option<u8>>,
    pub failure: Option<String>,
}

impl fmt::Display for DecodeTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            match (step.question, step.answer) {
                (Some(q), Some(a)) => write!(f, "Q{} = {a}B: ", q + 1)?,
                _ => f.write_str("all questions: ")?,
            }
            write!(f, "{}", step.rule)?;
            for (peg, color) in &step.pinned {
                write!(f, "; peg {peg} = {color}")?;
            }
            if !step.note.is_empty() {
                write!(f, " ({})", step.note)?;
            }
            writeln!(f)?;
        }
        f.write_str("resolved:")?;
        for (i, c) in self.resolved.iter().enumerate() {
            match c {
                Some(c) => write!(f, " peg {}={c}", i + 1)?,
                None => write!(f, " peg {}=?", i + 1)?,
            }
        }
        writeln!(f)?;
        if let Some(reason) = &self.failure {
            writeln!(f, "inconsistent: {reason}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum StructuredOutcome {
    Secret { secret: Secret },
    Inconsistent,
}

struct Decoder<'a> {
    strategy: &'a Strategy,
    answers: &'a [u8],
    trace: DecodeTrace,
}

type Step<T> = std::result::Result<T, String>;

impl Decoder<'_> {
    fn question(&self, i: usize) -> &Code {
        &self.strategy.questions()[i]
    }

    fn pin(&mut self, question: Option<usize>, rule: Rule, pegs: &[(usize, u8)], note: String) -> Step<()> {
        for &(peg, color) in pegs {
            match self.trace.resolved[peg - 1] {
                Some(c) if c != color => {
                    return Err(format!(
                        "peg {peg} pinned to both {c} and {color}"
                    ))
                }
                _ => self.trace.resolved[peg - 1] = Some(color),
            }
        }
        self.trace.steps.push(TraceStep {
            question,
            answer: question.map(|q| self.answers[q]),
            rule,
            pinned: pegs.to_vec(),
            note,
        });
        Ok(())
    }

    /// Applies the neighbor rules to a non-empty answer of block question `x`.
    fn block_answer(&mut self, x: usize, neighbors: &[usize]) -> Step<()> {
        let p = self.strategy.spec().pegs();
        let q = *self.question(x);
        let answer = self.answers[x] as usize;
        let color = |peg: usize| q.color(peg - 1);
        if answer == p {
            let all: Vec<_> = (1..=p).map(|peg| (peg, color(peg))).collect();
            return self.pin(Some(x), Rule::FullAnswer, &all, String::new());
        }
        // (neighbor, overlap peg, neighbor's answer)
        let nbrs: Vec<(usize, usize, u8)> = neighbors
            .iter()
            .map(|&n| {
                let ov = overlapping_pegs(&q, self.question(n));
                (n, ov[0], self.answers[n])
            })
            .collect();
        let overlap_pegs: Vec<usize> = nbrs.iter().map(|n| n.1).collect();
        let free_peg = (1..=p).find(|peg| !overlap_pegs.contains(peg));

        match answer {
            1 => {
                let best = nbrs.iter().map(|n| n.2).max().unwrap_or(0);
                if best == 0 {
                    let u = free_peg.ok_or("block question without a non-overlapping peg")?;
                    let names = nbrs.iter().map(|n| format!("Q{}", n.0 + 1)).collect::<Vec<_>>();
                    self.pin(
                        Some(x),
                        Rule::OneBlackNeighborEmpty,
                        &[(u, color(u))],
                        format!("{} empty", names.join(", ")),
                    )
                } else {
                    let top: Vec<_> = nbrs.iter().filter(|n| n.2 == best).collect();
                    if top.len() > 1 {
                        return Err(format!(
                            "Q{} = 1B with neighbors tied at {best}B",
                            x + 1
                        ));
                    }
                    let (n, v, a) = *top[0];
                    self.pin(
                        Some(x),
                        Rule::OneBlackNeighborNonEmpty,
                        &[(v, color(v))],
                        format!("Q{} = {a}B", n + 1),
                    )
                }
            }
            2 => {
                let empty: Vec<_> = nbrs.iter().filter(|n| n.2 == 0).collect();
                match empty.len() {
                    0 => {
                        let mut pins: Vec<_> = overlap_pegs.iter().map(|&v| (v, color(v))).collect();
                        pins.sort_unstable();
                        self.pin(Some(x), Rule::TwoBlackBothNeighborsNonEmpty, &pins, String::new())
                    }
                    1 if nbrs.len() == 2 => {
                        let wrong = empty[0].1;
                        let pins: Vec<_> = (1..=p)
                            .filter(|&peg| peg != wrong)
                            .map(|peg| (peg, color(peg)))
                            .collect();
                        self.pin(
                            Some(x),
                            Rule::TwoBlackNeighborEmpty,
                            &pins,
                            format!("Q{} empty, peg {wrong} incorrect", empty[0].0 + 1),
                        )
                    }
                    _ => Err(format!(
                        "Q{} = 2B but no neighboring question has a non-empty answer",
                        x + 1
                    )),
                }
            }
            _ => Err(format!("unexpected answer {answer}B to Q{}", x + 1)),
        }
    }

    /// Fills the single open peg: a question whose answer exceeds what the
    /// pinned pegs explain names its color; otherwise it is the color missing
    /// from that peg.
    fn complete_missing(&mut self) -> Step<()> {
        let open = self
            .trace
            .resolved
            .iter()
            .position(Option::is_none)
            .expect("exactly one open peg");
        let pinned = self.trace.resolved.clone();
        let mut found = None;
        for (j, q) in self.strategy.questions().iter().enumerate() {
            let explained = pinned
                .iter()
                .enumerate()
                .filter(|(peg, c)| **c == Some(q.color(*peg)))
                .count();
            let answer = self.answers[j] as usize;
            match answer.checked_sub(explained) {
                Some(0) => {}
                Some(1) => {
                    found = Some((q.color(open), format!("Q{} has one unexplained black", j + 1)));
                    break;
                }
                _ => return Err(format!("Q{} = {answer}B does not fit the pinned pegs", j + 1)),
            }
        }
        let (color, note) = match found {
            Some(f) => f,
            None => {
                let missing = missing_colors(self.strategy, open + 1).map_err(|e| e.to_string())?;
                let mut it = missing.iter();
                match (it.next(), it.next()) {
                    (Some(&c), None) => (c, format!("only color {c} never occurs on peg {}", open + 1)),
                    (None, _) => return Err(format!("no color left for peg {}", open + 1)),
                    _ => return Err(format!("several colors missing on peg {}", open + 1)),
                }
            }
        };
        self.pin(None, Rule::MissingColorCompletion, &[(open + 1, color)], note)
    }

    /// Tries every assignment of base colors `1..=t` to the open pegs.
    fn endgame(&mut self, t: usize) -> Step<()> {
        let p = self.strategy.spec().pegs();
        let pinned = self.trace.resolved.clone();
        let open: Vec<usize> = (0..p).filter(|&i| pinned[i].is_none()).collect();
        let mut found: Vec<Secret> = Vec::new();
        for n in 0..t.pow(open.len() as u32) {
            let mut colors: Vec<u8> = pinned.iter().map(|c| c.unwrap_or(0)).collect();
            let mut rest = n;
            for &i in &open {
                colors[i] = (rest % t + 1) as u8;
                rest /= t;
            }
            let Ok(s) = Code::new(&colors) else { continue };
            if self.strategy.spec().check_code(&s).is_ok() && matches(self.strategy, &s, self.answers) {
                found.push(s);
            }
        }
        match found.as_slice() {
            [s] => {
                let pins: Vec<_> = open.iter().map(|&i| (i + 1, s.color(i))).collect();
                let note = format!("only {s} among base colors 1..={t} fits");
                self.pin(None, Rule::EndgameEnumeration, &pins, note)
            }
            [] => Err(if p == 2 && t == 4 && open.len() == 2 {
                "all answers empty; the only such code (4|4) repeats a color".to_string()
            } else {
                format!("no completion over base colors 1..={t} fits")
            }),
            many => Err(format!("{} completions over base colors fit", many.len())),
        }
    }
}

/// Block-structure decoding for generated strategies with two or three pegs.
pub fn structured_decode(
    strategy: &Strategy,
    sig: &AnswerSignature,
) -> Result<(StructuredOutcome, DecodeTrace)> {
    if strategy.provenance() != Provenance::Generated {
        return Err(Error::Unsupported(
            "structured decoding needs a generated strategy; use the generic decoder".into(),
        ));
    }
    let spec = strategy.spec();
    let p = spec.pegs();
    if !(2..=3).contains(&p) {
        return Err(Error::Unsupported(format!(
            "structured decoding covers p in {{2, 3}}, got p={p}"
        )));
    }
    check_signature(strategy, sig)?;
    let plan = BlockPlan::new(spec)?;

    let mut blocks: Vec<std::ops::Range<usize>> = Vec::new();
    if p == 2 && plan.t == 4 {
        blocks.push(plan.base_range());
    }
    blocks.extend(plan.block_ranges());

    let mut dec = Decoder {
        strategy,
        answers: sig.answers(),
        trace: DecodeTrace {
            resolved: vec![None; p],
            ..DecodeTrace::default()
        },
    };

    let result = (|| -> Step<Secret> {
        for block in &blocks {
            for x in block.clone() {
                if dec.answers[x] == 0 {
                    continue;
                }
                let neighbors: Vec<usize> = block
                    .clone()
                    .filter(|&n| n != x && !overlapping_pegs(dec.question(x), dec.question(n)).is_empty())
                    .collect();
                dec.block_answer(x, &neighbors)?;
            }
        }
        let open = dec.trace.resolved.iter().filter(|c| c.is_none()).count();
        match (p, open) {
            (_, 0) => {}
            (2, 1) | (3, 1) => dec.complete_missing()?,
            _ => dec.endgame(plan.t)?,
        }
        let colors: Vec<u8> = dec.trace.resolved.iter().map(|c| c.expect("all pegs resolved")).collect();
        let secret = Code::new(&colors).map_err(|e| e.to_string())?;
        spec.check_code(&secret).map_err(|e| e.to_string())?;
        if !matches(strategy, &secret, dec.answers) {
            return Err(format!("{secret} does not reproduce the answers"));
        }
        Ok(secret)
    })();

    let outcome = match result {
        Ok(secret) => StructuredOutcome::Secret { secret },
        Err(reason) => {
            dec.trace.failure = Some(reason);
            StructuredOutcome::Inconsistent
        }
    };
    Ok((outcome, dec.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_strategy;
    use crate::game::{signature, GameSpec};
    use crate::verify::ab_strategy;

    fn code(s: &str) -> Code {
        s.parse().unwrap()
    }

    fn generated(p: usize, c: usize) -> Strategy {
        build_strategy(&GameSpec::ab(p, c).unwrap()).unwrap()
    }

    fn sig_of(s: &Strategy, secret: &str) -> AnswerSignature {
        signature(s, &code(secret)).unwrap()
    }

    fn structured(s: &Strategy, secret: &str) -> (StructuredOutcome, DecodeTrace) {
        structured_decode(s, &sig_of(s, secret)).unwrap()
    }

    #[test]
    fn generic_round_trip() {
        let s = generated(2, 9);
        assert_eq!(
            decode(&s, &sig_of(&s, "4|9")).unwrap(),
            DecodeOutcome::Unique { secret: code("4|9") }
        );
    }

    #[test]
    fn generic_ambiguous_and_inconsistent() {
        let empty = ab_strategy(2, 3, Vec::<[u8; 2]>::new()).unwrap();
        match decode(&empty, &AnswerSignature(vec![])).unwrap() {
            DecodeOutcome::Ambiguous { candidates, total } => {
                assert_eq!(total, 6);
                assert_eq!(candidates.len(), 6);
            }
            other => panic!("{other:?}"),
        }
        let s = generated(2, 5);
        assert_eq!(
            decode(&s, &AnswerSignature(vec![0; 5])).unwrap(),
            DecodeOutcome::Unique { secret: code("2|1") }
        );
        assert_eq!(
            decode(&s, &AnswerSignature(vec![2, 2, 0, 0, 0])).unwrap(),
            DecodeOutcome::Inconsistent
        );
        assert!(matches!(
            decode(&s, &AnswerSignature(vec![0; 4])),
            Err(Error::MalformedSignature(_))
        ));
        assert!(matches!(
            decode(&s, &AnswerSignature(vec![3, 0, 0, 0, 0])),
            Err(Error::MalformedSignature(_))
        ));
    }

    #[test]
    fn two_peg_neighbor_rules() {
        let s = generated(2, 9);
        let (out, trace) = structured(&s, "3|6");
        assert_eq!(out, StructuredOutcome::Secret { secret: code("3|6") });
        let step = trace.steps.iter().find(|st| st.question == Some(2)).unwrap();
        assert_eq!(step.rule, Rule::OneBlackNeighborNonEmpty);
        assert_eq!(step.pinned, vec![(2, 6)]);

        let (out, trace) = structured(&s, "4|9");
        assert_eq!(out, StructuredOutcome::Secret { secret: code("4|9") });
        let step = trace.steps.iter().find(|st| st.question == Some(2)).unwrap();
        assert_eq!(step.rule, Rule::OneBlackNeighborEmpty);
        assert_eq!(step.pinned, vec![(1, 4)]);
    }

    #[test]
    fn two_peg_endgame_without_block_answers() {
        // Secrets answered 0B by every iterated question, keyed by the answers
        // to the two leading questions.
        let s = generated(2, 9);
        for (secret, a1, a2) in [
            ("1|2", 2, 0),
            ("1|3", 1, 0),
            ("2|1", 0, 1),
            ("2|3", 0, 0),
            ("3|1", 0, 2),
            ("3|2", 1, 1),
        ] {
            let sig = sig_of(&s, secret);
            assert_eq!(&sig.answers()[..2], &[a1, a2]);
            assert!(sig.answers()[2..].iter().all(|&a| a == 0));
            let (out, trace) = structured_decode(&s, &sig).unwrap();
            assert_eq!(out, StructuredOutcome::Secret { secret: code(secret) });
            assert_eq!(trace.steps.last().unwrap().rule, Rule::EndgameEnumeration);
        }
        let s = generated(2, 8);
        for secret in ["1|2", "2|1"] {
            let (out, _) = structured(&s, secret);
            assert_eq!(out, StructuredOutcome::Secret { secret: code(secret) });
        }
    }

    #[test]
    fn two_peg_all_empty_with_four_base_colors_is_inconsistent() {
        let s = generated(2, 7);
        let (out, trace) = structured_decode(&s, &AnswerSignature(vec![0; s.len()])).unwrap();
        assert_eq!(out, StructuredOutcome::Inconsistent);
        assert!(trace.failure.unwrap().contains("(4|4)"));
        assert_eq!(decode(&s, &AnswerSignature(vec![0; s.len()])).unwrap(), DecodeOutcome::Inconsistent);
    }

    #[test]
    fn three_peg_examples() {
        let s = generated(3, 12);
        let (out, trace) = structured(&s, "7|9|2");
        assert_eq!(out, StructuredOutcome::Secret { secret: code("7|9|2") });
        let step = trace.steps.iter().find(|st| st.question == Some(7)).unwrap();
        assert_eq!(step.rule, Rule::OneBlackNeighborEmpty);
        assert_eq!(step.pinned, vec![(1, 7)]);

        let (_, trace) = structured(&s, "5|11|9");
        let step = trace.steps.iter().find(|st| st.question == Some(7)).unwrap();
        assert_eq!(step.rule, Rule::OneBlackNeighborNonEmpty);
        assert_eq!(step.pinned, vec![(2, 11)]);

        let (_, trace) = structured(&s, "7|11|3");
        let step = trace.steps.iter().find(|st| st.question == Some(7)).unwrap();
        assert_eq!(step.rule, Rule::TwoBlackNeighborEmpty);
        assert_eq!(step.pinned, vec![(1, 7), (2, 11)]);

        let (out, trace) = structured(&s, "8|11|12");
        assert_eq!(out, StructuredOutcome::Secret { secret: code("8|11|12") });
        let step = trace.steps.iter().find(|st| st.question == Some(7)).unwrap();
        assert_eq!(step.rule, Rule::TwoBlackBothNeighborsNonEmpty);
        assert_eq!(step.pinned, vec![(2, 11), (3, 12)]);
    }

    #[test]
    fn three_peg_two_black_with_both_neighbors_empty_is_inconsistent() {
        let s = generated(3, 12);
        let mut answers = vec![0u8; s.len()];
        answers[7] = 2;
        let (out, trace) = structured_decode(&s, &AnswerSignature(answers)).unwrap();
        assert_eq!(out, StructuredOutcome::Inconsistent);
        assert!(trace.failure.is_some());
    }

    #[test]
    fn trace_display_names_rules() {
        let s = generated(3, 12);
        let text = structured(&s, "7|9|2").1.to_string();
        assert!(text.contains("Q8 = 1B: 1B + neighbor empty → non-overlapping peg; peg 1 = 7"), "{text}");
        assert!(text.contains("resolved: peg 1=7 peg 2=9 peg 3=2"), "{text}");
    }

    #[test]
    fn structured_needs_generated_strategy() {
        let s = generated(3, 5).with_provenance(Provenance::UserSupplied);
        let sig = AnswerSignature(vec![0; s.len()]);
        assert!(matches!(structured_decode(&s, &sig), Err(Error::Unsupported(_))));
        let p1 = generated(1, 4);
        assert!(matches!(
            structured_decode(&p1, &AnswerSignature(vec![0; 3])),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn structured_agrees_with_filter_on_small_cases() {
        for (p, c) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 7), (3, 3), (3, 4), (3, 6), (3, 10)] {
            let s = generated(p, c);
            for secret in s.spec().secrets() {
                let sig = signature(&s, &secret).unwrap();
                let (out, trace) = structured_decode(&s, &sig).unwrap();
                assert_eq!(out, StructuredOutcome::Secret { secret }, "p={p} c={c}\n{trace}");
            }
        }
    }
}
