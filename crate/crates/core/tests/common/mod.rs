#![allow(dead_code)]

use std::collections::HashSet;

use abgame_core::{Code, GameSpec, Provenance, Strategy};
use rand::seq::SliceRandom;
use rand::Rng;

pub struct Table {
    pub name: String,
    pub pegs: usize,
    pub colors: usize,
    pub rows: Vec<Vec<u8>>,
    /// Question indices (0-based) that open an iterated block.
    pub block_starts: Vec<usize>,
}

pub fn tables() -> Vec<Table> {
    let text = include_str!("../data/tables.txt");
    let mut out: Vec<Table> = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let mut parts = header.split_whitespace();
            let name = parts.next().unwrap().to_string();
            let field = |s: Option<&str>, key: &str| -> usize {
                s.unwrap().strip_prefix(key).unwrap().parse().unwrap()
            };
            let pegs = field(parts.next(), "p=");
            let colors = field(parts.next(), "c=");
            out.push(Table {
                name,
                pegs,
                colors,
                rows: Vec::new(),
                block_starts: Vec::new(),
            });
            continue;
        }
        let t = out.last_mut().expect("row before header");
        if line == "===" {
            t.block_starts.push(t.rows.len());
        } else {
            t.rows.push(line.split_whitespace().map(|x| x.parse().unwrap()).collect());
        }
    }
    out
}

pub fn table(name: &str, pegs: usize, colors: usize) -> Table {
    tables()
        .into_iter()
        .find(|t| t.name == name && t.pegs == pegs && t.colors == colors)
        .unwrap_or_else(|| panic!("no table {name} p={pegs} c={colors}"))
}

pub fn strategy_of(t: &Table) -> Strategy {
    Strategy::from_rows(
        GameSpec::ab(t.pegs, t.colors).unwrap(),
        &t.rows,
        Provenance::UserSupplied,
    )
    .unwrap()
}

pub fn code(s: &str) -> Code {
    s.parse().unwrap()
}

/// Secrets enumerated by nested loops, independent of the library iterator.
pub fn naive_secrets(pegs: usize, colors: usize, distinct: bool) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..pegs {
        let mut next = Vec::new();
        for prefix in &out {
            for c in 1..=colors as u8 {
                if distinct && prefix.contains(&c) {
                    continue;
                }
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub fn naive_blacks(q: &[u8], s: &[u8]) -> usize {
    q.iter().zip(s).filter(|(a, b)| a == b).count()
}

/// Feasibility by hashing answer vectors.
pub fn naive_feasible(pegs: usize, colors: usize, rows: &[Vec<u8>]) -> bool {
    let mut seen = HashSet::new();
    naive_secrets(pegs, colors, true)
        .iter()
        .all(|s| seen.insert(rows.iter().map(|q| naive_blacks(q, s)).collect::<Vec<_>>()))
}

pub fn random_code<R: Rng>(rng: &mut R, pegs: usize, colors: usize) -> Vec<u8> {
    let mut all: Vec<u8> = (1..=colors as u8).collect();
    all.shuffle(rng);
    all.truncate(pegs);
    all
}

/// `k` distinct random AB questions.
pub fn random_strategy<R: Rng>(rng: &mut R, pegs: usize, colors: usize, k: usize) -> Strategy {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    while rows.len() < k {
        let q = random_code(rng, pegs, colors);
        if !rows.contains(&q) {
            rows.push(q);
        }
    }
    Strategy::from_rows(GameSpec::ab(pegs, colors).unwrap(), rows, Provenance::UserSupplied).unwrap()
}

/// A random feasible strategy from which no question can be dropped: random
/// questions are added until feasible, then questions are removed in random
/// order while feasibility holds.
pub fn random_minimal_feasible<R: Rng>(rng: &mut R, pegs: usize, colors: usize) -> Strategy {
    let spec = GameSpec::ab(pegs, colors).unwrap();
    let mut pool = naive_secrets(pegs, colors, true);
    pool.shuffle(rng);
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for q in pool {
        rows.push(q);
        if naive_feasible(pegs, colors, &rows) {
            break;
        }
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(rng);
    let mut keep = vec![true; rows.len()];
    for i in order {
        keep[i] = false;
        let trial: Vec<Vec<u8>> = rows
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(r, _)| r.clone())
            .collect();
        if !naive_feasible(pegs, colors, &trial) {
            keep[i] = true;
        }
    }
    let rows: Vec<Vec<u8>> = rows
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(r, _)| r)
        .collect();
    Strategy::from_rows(spec, rows, Provenance::UserSupplied).unwrap()
}
