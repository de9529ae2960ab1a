//! Strategies: an ordered list of distinct main questions for a game spec.
//!
//! The final (winning) question is never stored; `len()` is the number of
//! main questions `k`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::builder::{build_strategy, BlockPlan};
use crate::error::{Error, Result};
use crate::game::{Code, GameSpec, Question, Variant};

/// Where a strategy came from. Structured decoding is only available for
/// [`Provenance::Generated`] strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Generated,
    UserSupplied,
    SearchWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    spec: GameSpec,
    questions: Vec<Question>,
    provenance: Provenance,
}

impl Strategy {
    /// Validates every question against `spec` and rejects duplicates.
    pub fn new(spec: GameSpec, questions: Vec<Question>, provenance: Provenance) -> Result<Self> {
        let mut seen: HashMap<Code, usize> = HashMap::with_capacity(questions.len());
        for (i, q) in questions.iter().enumerate() {
            spec.check_code(q)?;
            if let Some(first) = seen.insert(*q, i) {
                return Err(Error::DuplicateQuestion {
                    code: q.to_string(),
                    first,
                    second: i,
                });
            }
        }
        Ok(Strategy {
            spec,
            questions,
            provenance,
        })
    }

    /// Convenience constructor from rows of 1-based colors.
    pub fn from_rows<R: AsRef<[u8]>>(
        spec: GameSpec,
        rows: impl IntoIterator<Item = R>,
        provenance: Provenance,
    ) -> Result<Self> {
        let questions = rows
            .into_iter()
            .map(|r| Code::new(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, questions, provenance)
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn questions(&self) -> &[Question] {
        &self.questions
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Marks the strategy as generated when it coincides question-for-question
    /// with the built-in construction for its spec; otherwise user supplied.
    pub fn recognize(self) -> Self {
        let generated = build_strategy(&self.spec)
            .map(|g| g.questions == self.questions)
            .unwrap_or(false);
        let provenance = if generated {
            Provenance::Generated
        } else {
            Provenance::UserSupplied
        };
        self.with_provenance(provenance)
    }

    pub fn to_file(&self) -> StrategyFile {
        StrategyFile {
            variant: self.spec.variant(),
            pegs: self.spec.pegs(),
            colors: self.spec.colors(),
            questions: self
                .questions
                .iter()
                .map(|q| q.colors().to_vec())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("strategy serializes")
    }

    /// Parses the JSON strategy format. The result is [`Strategy::recognize`]d.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StrategyFile = serde_json::from_str(text)?;
        file.into_strategy()
    }

    /// Table layout: one row per question, one column per peg. Generated
    /// strategies get a separator line before every iterated block.
    pub fn to_table(&self) -> String {
        let p = self.spec.pegs();
        let width = self
            .questions
            .iter()
            .flat_map(|q| q.colors())
            .map(|c| c.to_string().len())
            .chain(std::iter::once(p.to_string().len()))
            .max()
            .unwrap_or(1);
        let label_width = format!("Q{}", self.questions.len().max(1)).len().max(3);

        let boundaries: Vec<usize> = match (self.provenance, BlockPlan::new(&self.spec)) {
            (Provenance::Generated, Ok(plan)) => plan.block_ranges().map(|r| r.start).collect(),
            _ => Vec::new(),
        };

        let mut out = String::new();
        let _ = write!(out, "{:<label_width$} ||", "Peg");
        for peg in 1..=p {
            let _ = write!(out, " {peg:>width$} |");
        }
        out.truncate(out.len() - 2);
        out.push('\n');
        let rule_len = out.trim_end().chars().count();
        out.push_str(&"=".repeat(rule_len));
        out.push('\n');
        for (i, q) in self.questions.iter().enumerate() {
            if boundaries.contains(&i) {
                out.push_str(&"-".repeat(rule_len));
                out.push('\n');
            }
            let _ = write!(out, "{:<label_width$} ||", format!("Q{}", i + 1));
            for c in q.colors() {
                let _ = write!(out, " {c:>width$} |");
            }
            out.truncate(out.len() - 2);
            out.push('\n');
        }
        out
    }
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

/// On-disk strategy format: `{variant, pegs, colors, questions}` with 1-based
/// colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyFile {
    pub variant: Variant,
    pub pegs: usize,
    pub colors: usize,
    pub questions: Vec<Vec<u8>>,
}

impl StrategyFile {
    pub fn into_strategy(self) -> Result<Strategy> {
        let spec = GameSpec::new(self.variant, self.pegs, self.colors)?;
        Strategy::from_rows(spec, &self.questions, Provenance::UserSupplied).map(Strategy::recognize)
    }
}
