//! Necessary conditions for feasibility, checked as predicates over the
//! question list, plus the question-class census and counting lower bound.
//!
//! Every reported violation implies the strategy is infeasible. A clean report
//! only means no known obstruction was found.
//!
//! Condition codes, two pegs:
//!
//! * `L1a` some peg misses two or more colors.
//! * `L1b` two (1,1)-questions share no color at all.
//! * `L1d` three or more (1,1)-questions while both pegs miss a color.
//! * `L1e` four or more (1,1)-questions.
//!
//! Three pegs. "(1,1,*) on pegs i,j" means the question's colors on pegs `i`
//! and `j` each occur exactly once there; `f` counts questions with exactly two
//! such pegs and `e` those with three.
//!
//! * `L2a` some peg misses two or more colors (needs `c >= 4`).
//! * `L2b` two (1,1,*)-questions on pegs i,j disjoint in pegs i,j.
//! * `L2d` three or more (1,1,*)-questions on pegs i,j while both pegs miss a color.
//! * `L2e` four or more (1,1,*)-questions on pegs i,j.
//! * `L2f` a (1,1,*)-question `Q` on pegs i,j, color `a` missing on peg i and `b`
//!   missing on peg j, with `a == b`, or with `Q_i != b` and `Q_j != a`.
//! * `L3a` `e >= 2` and `f >= 1`.
//! * `L3b` `e >= 3`.
//! * `L3c` `e >= 1`, every peg misses a color, and `f >= 1`.
//! * `L3d` every peg misses a color and `e >= 2`.
//! * `L4a` `e >= 1` and `f >= 4`.
//! * `L4b` every peg misses a color and `f >= 4`.
//! * `L5a` `e == 0` and `f >= 7`.
//! * `L5b` `e == 0`, at least two pegs miss a color, and `f >= 6`.
//!
//! All three-peg codes except `L2a` need `c >= 5`; below that they are listed
//! as not applicable.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::strategy::Strategy;
use crate::verify::{classify_all, disjoint_in_pegs, missing_colors, QuestionClass};

const P3_PAIR_CODES: [&str; 4] = ["L2b", "L2d", "L2e", "L2f"];
const P3_GLOBAL_CODES: [&str; 8] = ["L3a", "L3b", "L3c", "L3d", "L4a", "L4b", "L5a", "L5b"];

/// One failed necessary condition. `pegs` are 1-based, `questions` are 0-based
/// indices into the strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub pegs: Vec<usize>,
    pub questions: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub pegs: usize,
    pub colors: usize,
    pub questions: usize,
    /// Per peg, the number of colors occurring exactly once on it.
    pub l: Vec<usize>,
    /// Per peg, the colors never used on it.
    pub missing: Vec<BTreeSet<u8>>,
    /// (1,1)-questions, two pegs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// (1,1,1)-questions, three pegs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    /// Questions with exactly two pegs of count one, three pegs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<usize>,
    pub lower_bound: i64,
    pub classes: Vec<QuestionClass>,
    pub violations: Vec<Violation>,
    pub not_applicable: Vec<&'static str>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit report serializes")
    }
}

pub fn audit(strategy: &Strategy) -> Result<AuditReport> {
    let spec = strategy.spec();
    let p = spec.pegs();
    if !(2..=3).contains(&p) {
        return Err(Error::Unsupported(format!(
            "audits are defined for p in {{2, 3}}, got p={p}"
        )));
    }
    let classes = classify_all(strategy);
    let missing = (1..=p)
        .map(|peg| missing_colors(strategy, peg))
        .collect::<Result<Vec<_>>>()?;
    let l = (0..p)
        .map(|i| {
            strategy
                .questions()
                .iter()
                .zip(&classes)
                .filter(|(_, cl)| cl.0[i] == 1)
                .count()
        })
        .collect::<Vec<_>>();
    let sum_l: usize = l.iter().sum();

    let mut report = AuditReport {
        pegs: p,
        colors: spec.colors(),
        questions: strategy.len(),
        l,
        missing,
        m: None,
        e: None,
        f: None,
        lower_bound: 0,
        classes,
        violations: Vec::new(),
        not_applicable: Vec::new(),
    };

    if p == 2 {
        let m = report.classes.iter().filter(|cl| cl.singles() == 2).count();
        report.m = Some(m);
        report.lower_bound = sum_l as i64 - m as i64;
        check_two_pegs(strategy, &mut report);
    } else {
        let e = report.classes.iter().filter(|cl| cl.singles() == 3).count();
        let f = report.classes.iter().filter(|cl| cl.singles() == 2).count();
        report.e = Some(e);
        report.f = Some(f);
        report.lower_bound = sum_l as i64 - 2 * e as i64 - f as i64;
        check_three_pegs(strategy, &mut report);
    }
    Ok(report)
}

fn missing_too_many(report: &mut AuditReport, code: &'static str) {
    for (i, miss) in report.missing.iter().enumerate() {
        if miss.len() >= 2 {
            report.violations.push(Violation {
                code,
                pegs: vec![i + 1],
                questions: Vec::new(),
                detail: format!("peg {} misses {} colors", i + 1, miss.len()),
            });
        }
    }
}

/// Indices of questions whose color counts are 1 on both given 1-based pegs.
fn singles_on(report: &AuditReport, i: usize, j: usize) -> Vec<usize> {
    report
        .classes
        .iter()
        .enumerate()
        .filter(|(_, cl)| cl.0[i - 1] == 1 && cl.0[j - 1] == 1)
        .map(|(idx, _)| idx)
        .collect()
}

fn check_two_pegs(strategy: &Strategy, report: &mut AuditReport) {
    missing_too_many(report, "L1a");
    pair_checks(strategy, report, 1, 2, ["L1b", "L1d", "L1e"]);
}

/// The disjoint-pair, three-with-missing and four-question checks for the
/// questions that are single on both pegs `i` and `j`.
fn pair_checks(
    strategy: &Strategy,
    report: &mut AuditReport,
    i: usize,
    j: usize,
    codes: [&'static str; 3],
) {
    let qs = strategy.questions();
    let singles = singles_on(report, i, j);
    for (x, &a) in singles.iter().enumerate() {
        for &b in &singles[x + 1..] {
            if disjoint_in_pegs(&qs[a], &qs[b], &[i, j]) {
                report.violations.push(Violation {
                    code: codes[0],
                    pegs: vec![i, j],
                    questions: vec![a, b],
                    detail: format!("{} and {} are disjoint on pegs {i},{j}", qs[a], qs[b]),
                });
            }
        }
    }
    let both_missing = !report.missing[i - 1].is_empty() && !report.missing[j - 1].is_empty();
    if singles.len() >= 3 && both_missing {
        report.violations.push(Violation {
            code: codes[1],
            pegs: vec![i, j],
            questions: singles.clone(),
            detail: format!(
                "{} questions single on pegs {i},{j} while both pegs miss a color",
                singles.len()
            ),
        });
    }
    if singles.len() >= 4 {
        report.violations.push(Violation {
            code: codes[2],
            pegs: vec![i, j],
            questions: singles,
            detail: format!("four or more questions single on pegs {i},{j}"),
        });
    }
}

fn check_three_pegs(strategy: &Strategy, report: &mut AuditReport) {
    let c = strategy.spec().colors();
    if c < 4 {
        report.not_applicable.push("L2a");
    } else {
        missing_too_many(report, "L2a");
    }
    if c < 5 {
        report.not_applicable.extend(P3_PAIR_CODES);
        report.not_applicable.extend(P3_GLOBAL_CODES);
        return;
    }

    let qs = strategy.questions();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        pair_checks(strategy, report, i, j, ["L2b", "L2d", "L2e"]);
        for q in singles_on(report, i, j) {
            let (qi, qj) = (qs[q].color(i - 1), qs[q].color(j - 1));
            let mut hits = Vec::new();
            for &a in &report.missing[i - 1] {
                for &b in &report.missing[j - 1] {
                    if a == b || (qi != b && qj != a) {
                        hits.push((a, b));
                    }
                }
            }
            if let Some(&(a, b)) = hits.first() {
                report.violations.push(Violation {
                    code: "L2f",
                    pegs: vec![i, j],
                    questions: vec![q],
                    detail: format!(
                        "{} with color {a} missing on peg {i} and color {b} missing on peg {j}",
                        qs[q]
                    ),
                });
            }
        }
    }

    let e = report.e.unwrap_or(0);
    let f = report.f.unwrap_or(0);
    let pegs_missing = report.missing.iter().filter(|m| !m.is_empty()).count();
    let all_missing = pegs_missing == 3;
    let of_class = |n: usize| -> Vec<usize> {
        report
            .classes
            .iter()
            .enumerate()
            .filter(|(_, cl)| cl.singles() == n)
            .map(|(idx, _)| idx)
            .collect()
    };
    let ones = of_class(3);
    let twos = of_class(2);
    let both = || ones.iter().chain(&twos).copied().collect::<Vec<_>>();

    let mut global = Vec::new();
    if e >= 2 && f >= 1 {
        global.push(("L3a", both(), format!("{e} (1,1,1)-questions and {f} further questions single on two pegs")));
    }
    if e >= 3 {
        global.push(("L3b", ones.clone(), format!("{e} (1,1,1)-questions")));
    }
    if e >= 1 && all_missing && f >= 1 {
        global.push(("L3c", both(), "a (1,1,1)-question, every peg misses a color, and a further question single on two pegs".to_string()));
    }
    if all_missing && e >= 2 {
        global.push(("L3d", ones.clone(), format!("every peg misses a color and {e} (1,1,1)-questions")));
    }
    if e >= 1 && f >= 4 {
        global.push(("L4a", both(), format!("a (1,1,1)-question and {f} questions single on exactly two pegs")));
    }
    if all_missing && f >= 4 {
        global.push(("L4b", twos.clone(), format!("every peg misses a color and {f} questions single on exactly two pegs")));
    }
    if e == 0 && f >= 7 {
        global.push(("L5a", twos.clone(), format!("no (1,1,1)-question and {f} questions single on exactly two pegs")));
    }
    if e == 0 && pegs_missing >= 2 && f >= 6 {
        global.push(("L5b", twos.clone(), format!("no (1,1,1)-question, {pegs_missing} pegs miss a color, and {f} questions single on exactly two pegs")));
    }
    for (code, questions, detail) in global {
        report.violations.push(Violation {
            code,
            pegs: Vec::new(),
            questions,
            detail,
        });
    }
}
