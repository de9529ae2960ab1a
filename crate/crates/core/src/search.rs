//! Exhaustive search for the smallest feasible strategy.
//!
//! Strategies are explored as strictly increasing sequences of question
//! indices (questions in lexicographic order), so the first feasible strategy
//! met is the lexicographically smallest of its size.
//!
//! Two reductions are applied unless disabled:
//!
//! * Color relabeling. Relabeling colors maps feasible strategies to feasible
//!   strategies. The lexicographically smallest member of every relabeling
//!   class reads, row by row, as a restricted growth string: each color is at
//!   most one more than the largest color before it. Only such partial
//!   strategies are expanded, so the smallest witness is still found.
//! * Partition bound. Secrets are kept partitioned by their answers so far;
//!   with `r` questions left a class of more than `(p+1)^r` secrets can no
//!   longer be split into singletons.
//!
//! Work is split at depth two across threads. Node counts and witnesses do not
//! depend on the thread count: results are merged in prefix order, and a prefix
//! after the first successful one contributes nothing.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Code, GameSpec, Variant};
use crate::strategy::{Provenance, Strategy};

pub const DEFAULT_MAX_NODES: u64 = 100_000_000;
pub const DEFAULT_MAX_TIME: Duration = Duration::from_secs(300);

const FLUSH_EVERY: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_MAX_NODES,
            max_time: Some(DEFAULT_MAX_TIME),
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: Budget,
    pub symmetry_breaking: bool,
    pub pruning: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: Budget::default(),
            symmetry_breaking: true,
            pruning: true,
            threads: None,
        }
    }
}

impl SearchOptions {
    /// Plain enumeration of every question subset, without reductions.
    pub fn paranoid() -> Self {
        SearchOptions {
            symmetry_breaking: false,
            pruning: false,
            ..SearchOptions::default()
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SizeOutcome {
    Found { witness: Strategy, nodes: u64 },
    Refuted { nodes: u64 },
    BudgetExhausted { nodes: u64 },
}

impl SizeOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SizeOutcome::Found { nodes, .. }
            | SizeOutcome::Refuted { nodes }
            | SizeOutcome::BudgetExhausted { nodes } => *nodes,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SizeOutcome::Refuted { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RefutedSize {
    pub k: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub spec: GameSpec,
    pub min_k: Option<usize>,
    pub witness: Option<Strategy>,
    pub infeasible_sizes_checked: Vec<RefutedSize>,
    pub nodes_explored: u64,
    pub elapsed_secs: f64,
    pub budget_exhausted: bool,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search report serializes")
    }
}

struct Instance {
    spec: GameSpec,
    pegs: usize,
    questions: Vec<Code>,
    /// `answers[q * secrets + s]`
    answers: Vec<u8>,
    secrets: usize,
}

impl Instance {
    fn new(spec: &GameSpec) -> Self {
        let codes: Vec<Code> = spec.secrets().collect();
        let n = codes.len();
        let mut answers = Vec::with_capacity(n * n);
        for q in &codes {
            answers.extend(codes.iter().map(|s| q.blacks(s) as u8));
        }
        Instance {
            spec: *spec,
            pegs: spec.pegs(),
            secrets: n,
            questions: codes,
            answers,
        }
    }

    fn row(&self, q: usize) -> &[u8] {
        &self.answers[q * self.secrets..(q + 1) * self.secrets]
    }

    fn strategy(&self, chosen: &[usize]) -> Strategy {
        Strategy::new(
            self.spec,
            chosen.iter().map(|&q| self.questions[q]).collect(),
            Provenance::SearchWitness,
        )
        .expect("search questions are valid and distinct")
    }
}

struct Meter {
    nodes: AtomicU64,
    max_nodes: u64,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Meter {
            nodes: AtomicU64::new(0),
            max_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|t| Instant::now() + t),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Records `n` more nodes; returns false once the budget is spent.
    fn charge(&self, n: u64) -> bool {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        if total > self.max_nodes || self.deadline.is_some_and(|d| Instant::now() > d) {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }

    fn total(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Found,
    Exhausted,
    Cancelled,
}

struct Worker<'a> {
    inst: &'a Instance,
    opts: &'a SearchOptions,
    meter: &'a Meter,
    k: usize,
    /// `classes[d][s]`: class of secret `s` after `d` questions.
    classes: Vec<Vec<u32>>,
    n_classes: Vec<usize>,
    max_color: Vec<u8>,
    chosen: Vec<usize>,
    key_map: Vec<u32>,
    sizes: Vec<u32>,
    nodes: u64,
    unflushed: u64,
    /// Prefixes collected at this depth instead of being expanded.
    collect_at: Option<usize>,
    collected: Vec<Vec<usize>>,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl<'a> Worker<'a> {
    fn new(inst: &'a Instance, opts: &'a SearchOptions, meter: &'a Meter, k: usize) -> Self {
        let classes = vec![vec![0u32; inst.secrets]; k + 1];
        let mut n_classes = vec![0; k + 1];
        n_classes[0] = usize::from(inst.secrets > 0);
        Worker {
            inst,
            opts,
            meter,
            k,
            classes,
            n_classes,
            max_color: vec![0; k + 1],
            chosen: Vec::with_capacity(k),
            key_map: Vec::new(),
            sizes: Vec::new(),
            nodes: 0,
            unflushed: 0,
            collect_at: None,
            collected: Vec::new(),
            cancel: None,
        }
    }

    /// Splits the classes at `depth` by the answers to question `q` into
    /// `depth + 1`; returns the largest new class.
    fn refine(&mut self, depth: usize, q: usize) -> u32 {
        let stride = self.inst.pegs + 1;
        let prev_n = self.n_classes[depth];
        self.key_map.clear();
        self.key_map.resize(prev_n * stride, u32::MAX);
        self.sizes.clear();
        let row = self.inst.row(q);
        let (lo, hi) = self.classes.split_at_mut(depth + 1);
        let (prev, next) = (&lo[depth], &mut hi[0]);
        let mut largest = 0;
        for s in 0..self.inst.secrets {
            let key = prev[s] as usize * stride + row[s] as usize;
            let mut id = self.key_map[key];
            if id == u32::MAX {
                id = self.sizes.len() as u32;
                self.key_map[key] = id;
                self.sizes.push(0);
            }
            next[s] = id;
            self.sizes[id as usize] += 1;
            largest = largest.max(self.sizes[id as usize]);
        }
        self.n_classes[depth + 1] = self.sizes.len();
        largest
    }

    /// Largest class size that can still be split with `r` questions left.
    fn capacity(&self, r: usize) -> u64 {
        if self.opts.pruning || r == 0 {
            (self.inst.pegs as u64 + 1).saturating_pow(r as u32)
        } else {
            u64::MAX
        }
    }

    fn tick(&mut self) -> Flow {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            let ok = self.meter.charge(self.unflushed);
            self.unflushed = 0;
            if !ok {
                return Flow::Exhausted;
            }
            if let Some((best, me)) = self.cancel {
                if best.load(Ordering::Relaxed) < me {
                    return Flow::Cancelled;
                }
            }
        }
        Flow::Continue
    }

    fn flush(&mut self) -> bool {
        let ok = self.meter.charge(self.unflushed);
        self.unflushed = 0;
        ok
    }

    /// Pushes question `q` at `depth` without counting or checks.
    fn replay(&mut self, depth: usize, q: usize) {
        self.refine(depth, q);
        self.max_color[depth + 1] = self.inst.questions[q]
            .colors()
            .iter()
            .fold(self.max_color[depth], |m, &c| m.max(c));
        self.chosen.push(q);
    }

    fn dfs(&mut self, depth: usize) -> Flow {
        if depth == self.k {
            return Flow::Found;
        }
        let nq = self.inst.questions.len();
        let start = self.chosen.last().map_or(0, |&q| q + 1);
        let left_after = self.k - depth - 1;
        let cap = self.capacity(left_after);
        for q in start..nq {
            if nq - q < self.k - depth {
                break;
            }
            let mut m = self.max_color[depth];
            if self.opts.symmetry_breaking {
                let colors = self.inst.questions[q].colors();
                if colors[0] > m + 1 {
                    // Questions are sorted; every later one starts higher too.
                    break;
                }
                let mut ok = true;
                for &c in colors {
                    if c > m + 1 {
                        ok = false;
                        break;
                    }
                    m = m.max(c);
                }
                if !ok {
                    continue;
                }
            } else {
                m = self.inst.questions[q].colors().iter().fold(m, |a, &c| a.max(c));
            }
            match self.tick() {
                Flow::Continue => {}
                stop => return stop,
            }
            if self.refine(depth, q) as u64 > cap {
                continue;
            }
            self.max_color[depth + 1] = m;
            self.chosen.push(q);
            if self.collect_at == Some(depth + 1) {
                self.collected.push(self.chosen.clone());
            } else {
                match self.dfs(depth + 1) {
                    Flow::Continue => {}
                    stop => return stop,
                }
            }
            self.chosen.pop();
        }
        Flow::Continue
    }
}

enum ItemResult {
    Done { nodes: u64 },
    Found { nodes: u64, chosen: Vec<usize> },
    Stopped,
}

fn search_size(inst: &Instance, k: usize, opts: &SearchOptions, meter: &Meter) -> SizeOutcome {
    if k == 0 {
        return if inst.secrets <= 1 {
            SizeOutcome::Found {
                witness: inst.strategy(&[]),
                nodes: 0,
            }
        } else {
            SizeOutcome::Refuted { nodes: 0 }
        };
    }
    let split = k.min(2);
    let mut root = Worker::new(inst, opts, meter, k);
    root.collect_at = Some(split);
    let flow = root.dfs(0);
    let flushed = root.flush();
    if flow == Flow::Exhausted || !flushed {
        return SizeOutcome::BudgetExhausted {
            nodes: meter.total(),
        };
    }
    let prefix_nodes = root.nodes;
    let items = root.collected;

    let best = AtomicUsize::new(usize::MAX);
    let run_item = |(i, prefix): (usize, &Vec<usize>)| -> ItemResult {
        if best.load(Ordering::Relaxed) < i || meter.exhausted.load(Ordering::Relaxed) {
            return ItemResult::Stopped;
        }
        let mut w = Worker::new(inst, opts, meter, k);
        w.cancel = Some((&best, i));
        for (d, &q) in prefix.iter().enumerate() {
            w.replay(d, q);
        }
        let flow = w.dfs(split);
        w.flush();
        match flow {
            Flow::Found => {
                best.fetch_min(i, Ordering::Relaxed);
                ItemResult::Found {
                    nodes: w.nodes,
                    chosen: w.chosen,
                }
            }
            Flow::Continue => ItemResult::Done { nodes: w.nodes },
            Flow::Exhausted | Flow::Cancelled => ItemResult::Stopped,
        }
    };
    let results: Vec<ItemResult> = items.par_iter().enumerate().map(run_item).collect();

    let mut nodes = prefix_nodes;
    for r in results {
        match r {
            ItemResult::Done { nodes: n } => nodes += n,
            ItemResult::Found { nodes: n, chosen } => {
                return SizeOutcome::Found {
                    witness: inst.strategy(&chosen),
                    nodes: nodes + n,
                }
            }
            ItemResult::Stopped => {
                return SizeOutcome::BudgetExhausted {
                    nodes: meter.total(),
                }
            }
        }
    }
    SizeOutcome::Refuted { nodes }
}

fn with_pool<T: Send>(opts: &SearchOptions, f: impl FnOnce() -> T + Send) -> T {
    match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(f))
            .unwrap_or_else(|_| panic!("could not start {n} search threads")),
        None => f(),
    }
}

/// Decides whether a feasible strategy with `k` main questions exists.
pub fn exists_strategy_of_size(spec: &GameSpec, k: usize, opts: &SearchOptions) -> SizeOutcome {
    let inst = Instance::new(spec);
    let meter = Meter::new(opts.budget);
    with_pool(opts, || search_size(&inst, k, opts, &meter))
}

/// Tries `k = 0, 1, 2, ...` up to `max_k` (default: every size up to the
/// number of possible questions) until a feasible strategy appears. The budget
/// covers the whole run.
pub fn min_k(spec: &GameSpec, opts: &SearchOptions, max_k: Option<usize>) -> SearchReport {
    let started = Instant::now();
    let inst = Instance::new(spec);
    let meter = Meter::new(opts.budget);
    let limit = max_k.unwrap_or(inst.questions.len());
    let mut report = SearchReport {
        spec: *spec,
        min_k: None,
        witness: None,
        infeasible_sizes_checked: Vec::new(),
        nodes_explored: 0,
        elapsed_secs: 0.0,
        budget_exhausted: false,
    };
    with_pool(opts, || {
        for k in 0..=limit {
            let outcome = search_size(&inst, k, opts, &meter);
            report.nodes_explored += outcome.nodes();
            match outcome {
                SizeOutcome::Refuted { nodes } => {
                    report.infeasible_sizes_checked.push(RefutedSize { k, nodes })
                }
                SizeOutcome::Found { witness, .. } => {
                    report.min_k = Some(k);
                    report.witness = Some(witness);
                    break;
                }
                SizeOutcome::BudgetExhausted { .. } => {
                    report.budget_exhausted = true;
                    break;
                }
            }
        }
    });
    report.elapsed_secs = started.elapsed().as_secs_f64();
    report
}

/// Metric dimension of the Hamming graph on `[c]^p`, computed as the smallest
/// static black-peg Mastermind strategy.
pub fn metric_dimension_hamming(pegs: usize, colors: usize, opts: &SearchOptions) -> Result<usize> {
    let spec = GameSpec::new(Variant::Mastermind, pegs, colors)?;
    let report = min_k(&spec, opts, None);
    match report.min_k {
        Some(k) => Ok(k),
        None => Err(Error::BudgetExhausted {
            nodes: report.nodes_explored,
        }),
    }
}
