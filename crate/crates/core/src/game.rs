//! The game universe: specs, codes (questions and secrets), black-peg answers
//! and answer signatures.
//!
//! Colors are 1-based everywhere, matching the usual table notation
//! `(q_1 | q_2 | ... | q_p)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::strategy::Strategy;

/// Largest supported peg count. Codes are stored inline in a fixed-width array.
pub const MAX_PEGS: usize = 8;

/// Largest supported color count (colors are stored as `u8`).
pub const MAX_COLORS: usize = u8::MAX as usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Distinct colors in every question and secret.
    #[serde(alias = "AB")]
    Ab,
    /// Repeated colors allowed.
    #[serde(alias = "mm", alias = "Mastermind")]
    Mastermind,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Ab => f.write_str("ab"),
            Variant::Mastermind => f.write_str("mastermind"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(Variant::Ab),
            "mm" | "mastermind" => Ok(Variant::Mastermind),
            other => Err(Error::InvalidSpec(format!("unknown variant {other:?}"))),
        }
    }
}

/// Variant, peg count and color count: the universe of secrets and questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct GameSpec {
    variant: Variant,
    pegs: usize,
    colors: usize,
}

#[derive(Deserialize)]
struct RawSpec {
    variant: Variant,
    pegs: usize,
    colors: usize,
}

impl TryFrom<RawSpec> for GameSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        GameSpec::new(raw.variant, raw.pegs, raw.colors)
    }
}

impl GameSpec {
    pub fn new(variant: Variant, pegs: usize, colors: usize) -> Result<Self> {
        if pegs == 0 || pegs > MAX_PEGS {
            return Err(Error::InvalidSpec(format!(
                "peg count {pegs} outside 1..={MAX_PEGS}"
            )));
        }
        if colors == 0 || colors > MAX_COLORS {
            return Err(Error::InvalidSpec(format!(
                "color count {colors} outside 1..={MAX_COLORS}"
            )));
        }
        if variant == Variant::Ab && colors < pegs {
            return Err(Error::InvalidSpec(format!(
                "AB game needs at least as many colors as pegs (p={pegs}, c={colors})"
            )));
        }
        Ok(GameSpec {
            variant,
            pegs,
            colors,
        })
    }

    pub fn ab(pegs: usize, colors: usize) -> Result<Self> {
        Self::new(Variant::Ab, pegs, colors)
    }

    pub fn mastermind(pegs: usize, colors: usize) -> Result<Self> {
        Self::new(Variant::Mastermind, pegs, colors)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn pegs(&self) -> usize {
        self.pegs
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    /// Number of secrets: `c!/(c-p)!` for AB, `c^p` for Mastermind.
    pub fn secret_count(&self) -> usize {
        match self.variant {
            Variant::Ab => (0..self.pegs).map(|i| self.colors - i).product(),
            Variant::Mastermind => self.colors.pow(self.pegs as u32),
        }
    }

    /// Checks that `code` is a legal question or secret under this spec.
    pub fn check_code(&self, code: &Code) -> Result<()> {
        if code.pegs() != self.pegs {
            return Err(Error::PegMismatch {
                expected: self.pegs,
                found: code.pegs(),
            });
        }
        for &color in code.colors() {
            if color as usize > self.colors {
                return Err(Error::InvalidCode {
                    code: code.to_string(),
                    reason: format!("color {color} exceeds c={}", self.colors),
                });
            }
        }
        if self.variant == Variant::Ab && !code.has_distinct_colors() {
            return Err(Error::InvalidCode {
                code: code.to_string(),
                reason: "repeated color in AB game".into(),
            });
        }
        Ok(())
    }

    /// Lexicographically ordered stream of every secret.
    pub fn secrets(&self) -> Secrets {
        Secrets::new(*self)
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} p={} c={}", self.variant, self.pegs, self.colors)
    }
}

/// An ordered tuple of `p` colors. Used both as a question and as a secret.
///
/// Ordering is lexicographic for codes of equal length.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    len: u8,
    colors: [u8; MAX_PEGS],
}

pub type Question = Code;
pub type Secret = Code;

impl Code {
    /// Builds a code from 1-based colors. Only shape is checked here; use
    /// [`GameSpec::check_code`] for membership in a particular game.
    pub fn new(colors: &[u8]) -> Result<Self> {
        if colors.is_empty() || colors.len() > MAX_PEGS {
            return Err(Error::InvalidCode {
                code: format!("{colors:?}"),
                reason: format!("length must be in 1..={MAX_PEGS}"),
            });
        }
        if colors.contains(&0) {
            return Err(Error::InvalidCode {
                code: format!("{colors:?}"),
                reason: "colors are 1-based".into(),
            });
        }
        let mut buf = [0u8; MAX_PEGS];
        buf[..colors.len()].copy_from_slice(colors);
        Ok(Code {
            len: colors.len() as u8,
            colors: buf,
        })
    }

    pub fn pegs(&self) -> usize {
        self.len as usize
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors[..self.len as usize]
    }

    /// Color on peg `peg` (0-based peg index).
    pub fn color(&self, peg: usize) -> u8 {
        self.colors()[peg]
    }

    pub fn has_distinct_colors(&self) -> bool {
        let c = self.colors();
        (0..c.len()).all(|i| !c[i + 1..].contains(&c[i]))
    }

    /// Black-peg count against `other`. Both codes must have the same length.
    #[inline]
    pub fn blacks(&self, other: &Code) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.colors()
            .iter()
            .zip(other.colors())
            .filter(|(a, b)| a == b)
            .count()
    }

    /// Adds `offset` to every color.
    pub fn shifted(&self, offset: u8) -> Option<Code> {
        let mut out = *self;
        for c in &mut out.colors[..self.len as usize] {
            *c = c.checked_add(offset)?;
        }
        Some(out)
    }

    /// The code with peg `peg` (0-based) removed.
    pub fn without_peg(&self, peg: usize) -> Result<Code> {
        let colors: Vec<u8> = self
            .colors()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != peg)
            .map(|(_, &c)| c)
            .collect();
        Code::new(&colors)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.colors().iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `(1|2|3)`, `1|2|3`, `1,2,3` or `1 2 3`.
impl FromStr for Code {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let colors = inner
            .split(|c: char| c == '|' || c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u8>()
                    .map_err(|_| Error::Parse(format!("bad color {t:?} in code {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Code::new(&colors)
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.colors().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Code {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let colors = Vec::<u8>::deserialize(deserializer)?;
        Code::new(&colors).map_err(serde::de::Error::custom)
    }
}

/// Number of pegs on which `q` and `s` agree.
pub fn black_pegs(q: &Question, s: &Secret) -> Result<usize> {
    if q.pegs() != s.pegs() {
        return Err(Error::PegMismatch {
            expected: q.pegs(),
            found: s.pegs(),
        });
    }
    Ok(q.blacks(s))
}

/// Lexicographic enumeration of all secrets of a spec.
///
/// AB: all injective tuples. Mastermind: all `c^p` tuples.
#[derive(Debug, Clone)]
pub struct Secrets {
    spec: GameSpec,
    current: Option<[u8; MAX_PEGS]>,
}

impl Secrets {
    fn new(spec: GameSpec) -> Self {
        let p = spec.pegs();
        let mut first = [0u8; MAX_PEGS];
        for (i, slot) in first[..p].iter_mut().enumerate() {
            *slot = match spec.variant() {
                Variant::Ab => i as u8 + 1,
                Variant::Mastermind => 1,
            };
        }
        Secrets {
            spec,
            current: Some(first),
        }
    }

    fn advance(&self, cur: &[u8; MAX_PEGS]) -> Option<[u8; MAX_PEGS]> {
        let p = self.spec.pegs();
        let c = self.spec.colors() as u8;
        let distinct = self.spec.variant() == Variant::Ab;
        let mut next = *cur;
        let mut pos = p;
        while pos > 0 {
            pos -= 1;
            // Try to bump position `pos` to the next admissible color.
            let mut color = next[pos];
            loop {
                if color == c {
                    break;
                }
                color += 1;
                if !distinct || !next[..pos].contains(&color) {
                    next[pos] = color;
                    // Fill the tail with the smallest admissible colors.
                    let mut ok = true;
                    for i in pos + 1..p {
                        let fill = (1..=c).find(|x| !distinct || !next[..i].contains(x));
                        match fill {
                            Some(x) => next[i] = x,
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok {
                        return Some(next);
                    }
                }
            }
        }
        None
    }
}

impl Iterator for Secrets {
    type Item = Secret;

    fn next(&mut self) -> Option<Secret> {
        let cur = self.current?;
        self.current = self.advance(&cur);
        Some(Code {
            len: self.spec.pegs() as u8,
            colors: cur,
        })
    }
}

/// Lexicographic stream of every secret of `spec`.
pub fn enumerate_secrets(spec: &GameSpec) -> Secrets {
    spec.secrets()
}

/// Per-question black-peg counts for one secret. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AnswerSignature(pub Vec<u8>);

impl AnswerSignature {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn answers(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for AnswerSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Parses a comma-separated answer list such as `1,0,2`.
impl FromStr for AnswerSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(AnswerSignature(Vec::new()));
        }
        s.split(',')
            .map(|t| {
                let t = t.trim().trim_end_matches(['B', 'b']);
                t.parse::<u8>()
                    .map_err(|_| Error::Parse(format!("bad answer {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(AnswerSignature)
    }
}

/// Answers of every question of `strategy` to secret `s`.
pub fn signature(strategy: &Strategy, s: &Secret) -> Result<AnswerSignature> {
    strategy.spec().check_code(s)?;
    Ok(AnswerSignature(
        strategy
            .questions()
            .iter()
            .map(|q| q.blacks(s) as u8)
            .collect(),
    ))
}
