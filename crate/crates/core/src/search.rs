//! Exact forb values by exhaustive branch and bound.
//!
//! Candidates are all words of `(k)^n` in lexicographic order. The search
//! decides each candidate in turn, trying inclusion first, and prunes a
//! subtree when even taking every remaining candidate cannot beat the
//! incumbent. Every constraint here is hereditary, so a rejected word stays
//! rejected below the current node.
//!
//! The first maximum found is the lexicographically least maximum code, and
//! only strict improvements replace the incumbent. The parallel mode splits
//! the top decisions into ordered tasks that share only the incumbent value;
//! they prune against it with strict inequality, so the task holding the
//! least maximum code always finds it and the merged answer matches the
//! sequential one.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::multinomial_bound;
use crate::code::{all_words, Alphabet, Code, Codeword, SVector, Symbol};
use crate::configurations::{config_contains_using_row, ConfigMatrix};
use crate::error::{Error, Result};
use crate::shattering::{dimension_at_least, DimensionKind};

/// Default cap on `k^n`, the number of candidate words.
pub const DEFAULT_MAX_CANDIDATES: usize = 32_000;
/// Default cap on `k^n` for dimension-constrained searches (n = 3, k = 3).
pub const DEFAULT_MAX_DIMENSION_CANDIDATES: usize = 27;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub value: usize,
    pub witness: Code,
    pub nodes_explored: u64,
    /// `false` only when a node limit or cancellation stopped the search.
    pub optimal: bool,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker count; 1 runs the plain sequential search.
    pub threads: usize,
    pub node_limit: Option<u64>,
    /// Overrides the default candidate envelope.
    pub max_candidates: Option<usize>,
    /// Stop as soon as the incumbent reaches the multinomial bound.
    pub bound_cap: bool,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 1,
            node_limit: None,
            max_candidates: None,
            bound_cap: true,
            cancel: None,
        }
    }
}

impl SearchOptions {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    pub fn with_max_candidates(mut self, max: usize) -> Self {
        self.max_candidates = Some(max);
        self
    }

    pub fn without_bound_cap(mut self) -> Self {
        self.bound_cap = false;
        self
    }

    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }
}

/// A hereditary constraint maintained along the search path.
pub trait Constraint: Clone + Send + Sync {
    /// Adds `word` if the enlarged code still satisfies the constraint.
    /// Leaves the state untouched and returns `false` otherwise.
    fn try_push(&mut self, word: &[Symbol]) -> bool;
    /// Undoes the latest successful push of `word`.
    fn pop(&mut self, word: &[Symbol]);
}

/// No `(i,j)`-shattered `s_{i,j}`-set, checked incrementally.
///
/// For each pair with `s <= n` it keeps, per `s`-subset `S` of coordinates,
/// how many current words realize each `{i,j}`-pattern on `S` and how many
/// patterns are present. A new word only touches subsets inside the
/// coordinates where it uses `i` or `j`, and it creates a violation exactly
/// when it fills the last missing pattern of some subset.
#[derive(Clone, Debug)]
pub struct ShatterConstraint {
    tables: Vec<PairTable>,
}

#[derive(Clone, Debug)]
struct PairTable {
    i: Symbol,
    j: Symbol,
    s: usize,
    subsets: Vec<u32>,
    counts: Vec<u32>,
    distinct: Vec<u32>,
}

impl PairTable {
    fn masks(&self, word: &[Symbol]) -> (u32, u32) {
        let mut support = 0u32;
        let mut ones = 0u32;
        for (c, &v) in word.iter().enumerate() {
            if v == self.i || v == self.j {
                support |= 1 << c;
                if v == self.j {
                    ones |= 1 << c;
                }
            }
        }
        (support, ones)
    }

    fn touched(&self, word: &[Symbol]) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (support, ones) = self.masks(word);
        let s = self.s;
        self.subsets
            .iter()
            .enumerate()
            .filter(move |(_, &m)| m & support == m)
            .map(move |(t, &m)| (t, (t << s) | compress(ones, m)))
    }

    fn would_fill(&self, word: &[Symbol]) -> bool {
        let full = 1u32 << self.s;
        self.touched(word)
            .any(|(t, cell)| self.counts[cell] == 0 && self.distinct[t] + 1 == full)
    }

    fn add(&mut self, word: &[Symbol]) {
        let cells: Vec<(usize, usize)> = self.touched(word).collect();
        for (t, cell) in cells {
            if self.counts[cell] == 0 {
                self.distinct[t] += 1;
            }
            self.counts[cell] += 1;
        }
    }

    fn remove(&mut self, word: &[Symbol]) {
        let cells: Vec<(usize, usize)> = self.touched(word).collect();
        for (t, cell) in cells {
            self.counts[cell] -= 1;
            if self.counts[cell] == 0 {
                self.distinct[t] -= 1;
            }
        }
    }
}

/// Packs the bits of `value` selected by `mask` into the low bits.
fn compress(value: u32, mask: u32) -> usize {
    let mut out = 0usize;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let low = m.trailing_zeros();
        out |= (((value >> low) & 1) as usize) << bit;
        bit += 1;
        m &= m - 1;
    }
    out
}

fn subsets_of_size(n: usize, s: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(s);
    fn rec(n: usize, s: usize, start: usize, stack: &mut Vec<usize>, out: &mut Vec<u32>) {
        if stack.len() == s {
            out.push(stack.iter().fold(0, |m, &c| m | (1 << c)));
            return;
        }
        for c in start..n {
            if stack.len() + (n - c) < s {
                break;
            }
            stack.push(c);
            rec(n, s, c + 1, stack, out);
            stack.pop();
        }
    }
    rec(n, s, 0, &mut stack, &mut out);
    out
}

impl ShatterConstraint {
    pub fn new(n: usize, svec: &SVector) -> Result<Self> {
        if n >= 32 {
            return Err(Error::Envelope(format!("length {n} is beyond the search envelope")));
        }
        let tables = svec
            .iter()
            .filter(|&(_, s)| s <= n)
            .map(|(pair, s)| {
                let subsets = subsets_of_size(n, s);
                let cells = subsets.len() << s;
                PairTable {
                    i: pair.i,
                    j: pair.j,
                    s,
                    distinct: vec![0; subsets.len()],
                    counts: vec![0; cells],
                    subsets,
                }
            })
            .collect();
        Ok(ShatterConstraint { tables })
    }
}

impl Constraint for ShatterConstraint {
    fn try_push(&mut self, word: &[Symbol]) -> bool {
        if self.tables.iter().any(|t| t.would_fill(word)) {
            return false;
        }
        for t in &mut self.tables {
            t.add(word);
        }
        true
    }

    fn pop(&mut self, word: &[Symbol]) {
        for t in &mut self.tables {
            t.remove(word);
        }
    }
}

/// Avoids every member of a configuration family. Each push only looks for
/// copies that use the new row.
#[derive(Clone, Debug)]
pub struct FamilyConstraint {
    alphabet: Alphabet,
    cols: usize,
    rows: Vec<Vec<Symbol>>,
    family: Arc<Vec<ConfigMatrix>>,
}

impl FamilyConstraint {
    pub fn new(alphabet: Alphabet, cols: usize, family: Vec<ConfigMatrix>) -> Self {
        FamilyConstraint {
            alphabet,
            cols,
            rows: Vec::new(),
            family: Arc::new(family),
        }
    }
}

impl Constraint for FamilyConstraint {
    fn try_push(&mut self, word: &[Symbol]) -> bool {
        self.rows.push(word.to_vec());
        let a = ConfigMatrix::from_rows_unchecked(self.alphabet, self.cols, self.rows.clone());
        let last = self.rows.len() - 1;
        if self.family.iter().any(|f| config_contains_using_row(&a, f, last).is_some()) {
            self.rows.pop();
            return false;
        }
        true
    }

    fn pop(&mut self, _word: &[Symbol]) {
        self.rows.pop();
    }
}

/// Dimension of `kind` at most `s`.
#[derive(Clone, Debug)]
pub struct DimensionConstraint {
    alphabet: Alphabet,
    length: usize,
    kind: DimensionKind,
    s: usize,
    words: Vec<Codeword>,
}

impl DimensionConstraint {
    pub fn new(alphabet: Alphabet, length: usize, kind: DimensionKind, s: usize) -> Self {
        DimensionConstraint {
            alphabet,
            length,
            kind,
            s,
            words: Vec::new(),
        }
    }
}

impl Constraint for DimensionConstraint {
    fn try_push(&mut self, word: &[Symbol]) -> bool {
        self.words.push(Codeword::from(word.to_vec()));
        let code = Code::from_trusted(self.alphabet, self.length, self.words.clone());
        if dimension_at_least(&code, self.kind, self.s + 1) {
            self.words.pop();
            return false;
        }
        true
    }

    fn pop(&mut self, _word: &[Symbol]) {
        self.words.pop();
    }
}

pub fn forb_search_shatter(n: usize, svec: &SVector, options: &SearchOptions) -> Result<SearchResult> {
    let alphabet = svec.alphabet();
    let candidates = candidates(alphabet, n, options.max_candidates.unwrap_or(DEFAULT_MAX_CANDIDATES))?;
    let cap = if options.bound_cap {
        multinomial_bound(n, svec).to_usize().unwrap_or(usize::MAX)
    } else {
        usize::MAX
    };
    let constraint = ShatterConstraint::new(n, svec)?;
    Ok(run(alphabet, n, &candidates, constraint, cap, options))
}

/// Largest simple `n`-column `(k)`-matrix with none of `family` as a
/// configuration.
pub fn forb_search_config(
    n: usize,
    alphabet: Alphabet,
    family: &[ConfigMatrix],
    options: &SearchOptions,
) -> Result<SearchResult> {
    let candidates = candidates(alphabet, n, options.max_candidates.unwrap_or(DEFAULT_MAX_CANDIDATES))?;
    let constraint = FamilyConstraint::new(alphabet, n, family.to_vec());
    Ok(run(alphabet, n, &candidates, constraint, usize::MAX, options))
}

/// Largest code of length `n` whose `kind`-dimension is at most `s`.
pub fn max_code_with_dimension(
    n: usize,
    alphabet: Alphabet,
    kind: DimensionKind,
    s: usize,
    options: &SearchOptions,
) -> Result<SearchResult> {
    let max = options.max_candidates.unwrap_or(DEFAULT_MAX_DIMENSION_CANDIDATES);
    let candidates = candidates(alphabet, n, max)?;
    let constraint = DimensionConstraint::new(alphabet, n, kind, s);
    Ok(run(alphabet, n, &candidates, constraint, usize::MAX, options))
}

fn candidates(alphabet: Alphabet, n: usize, max: usize) -> Result<Vec<Vec<Symbol>>> {
    let count = u32::try_from(n)
        .ok()
        .and_then(|e| alphabet.size().checked_pow(e))
        .filter(|&c| c <= max);
    match count {
        Some(_) => Ok(all_words(alphabet, n).map(Codeword::into_inner).collect()),
        None => Err(Error::Envelope(format!(
            "{}^{n} candidate words exceed the limit of {max}; raise it to search anyway",
            alphabet.size()
        ))),
    }
}

struct Shared<'a> {
    candidates: &'a [Vec<Symbol>],
    cap: usize,
    incumbent: AtomicUsize,
    /// Least task index whose incumbent reached `cap`.
    capped_task: AtomicUsize,
    nodes: AtomicUsize,
    node_limit: Option<u64>,
    stopped: AtomicBool,
    cancel: Option<Arc<AtomicBool>>,
}

struct Worker<'a, 'b, C> {
    shared: &'b Shared<'a>,
    task: usize,
    constraint: C,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
}

impl<C: Constraint> Worker<'_, '_, C> {
    fn halted(&self) -> bool {
        let s = self.shared;
        if s.stopped.load(Ordering::Relaxed) {
            return true;
        }
        if s.capped_task.load(Ordering::Relaxed) < self.task {
            return true;
        }
        if s.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed)) {
            s.stopped.store(true, Ordering::Relaxed);
            return true;
        }
        if let Some(limit) = s.node_limit {
            if s.nodes.load(Ordering::Relaxed) as u64 >= limit {
                s.stopped.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    fn local_best(&self) -> usize {
        self.best.len()
    }

    fn dfs(&mut self, idx: usize) {
        self.nodes += 1;
        self.shared.nodes.fetch_add(1, Ordering::Relaxed);
        if self.chosen.len() > self.local_best() {
            self.best = self.chosen.clone();
            self.shared.incumbent.fetch_max(self.best.len(), Ordering::Relaxed);
            if self.best.len() >= self.shared.cap {
                self.shared.capped_task.fetch_min(self.task, Ordering::Relaxed);
            }
        }
        let n = self.shared.candidates.len();
        if idx == n || self.halted() || self.best.len() >= self.shared.cap {
            return;
        }
        let reach = self.chosen.len() + (n - idx);
        if reach <= self.local_best() || reach < self.shared.incumbent.load(Ordering::Relaxed) {
            return;
        }
        let word = &self.shared.candidates[idx];
        if self.constraint.try_push(word) {
            self.chosen.push(idx);
            self.dfs(idx + 1);
            self.chosen.pop();
            self.constraint.pop(word);
        }
        self.dfs(idx + 1);
    }
}

/// Decision prefixes for the parallel split, in sequential visiting order.
fn task_prefixes(depth: usize) -> Vec<Vec<bool>> {
    (0..1usize << depth)
        .map(|t| (0..depth).map(|d| (t >> (depth - 1 - d)) & 1 == 0).collect())
        .collect()
}

fn run<C: Constraint>(
    alphabet: Alphabet,
    n: usize,
    candidates: &[Vec<Symbol>],
    constraint: C,
    cap: usize,
    options: &SearchOptions,
) -> SearchResult {
    let shared = Shared {
        candidates,
        cap,
        incumbent: AtomicUsize::new(0),
        capped_task: AtomicUsize::new(usize::MAX),
        nodes: AtomicUsize::new(0),
        node_limit: options.node_limit,
        stopped: AtomicBool::new(false),
        cancel: options.cancel.clone(),
    };
    let threads = options.threads.max(1);
    let (best, nodes) = if threads == 1 || candidates.len() < 8 {
        let mut worker = Worker {
            shared: &shared,
            task: 0,
            constraint,
            chosen: Vec::new(),
            best: Vec::new(),
            nodes: 0,
        };
        worker.dfs(0);
        (worker.best, worker.nodes)
    } else {
        let depth = (usize::BITS - (threads - 1).leading_zeros()) as usize + 3;
        let depth = depth.min(candidates.len() - 1);
        let tasks = task_prefixes(depth);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        let results: Vec<(Vec<usize>, u64)> = pool.install(|| {
            tasks
                .par_iter()
                .enumerate()
                .map(|(task, prefix)| run_task(&shared, task, prefix, constraint.clone()))
                .collect()
        });
        let nodes = results.iter().map(|r| r.1).sum();
        let mut best = Vec::new();
        for (set, _) in results {
            if set.len() > best.len() {
                best = set;
            }
        }
        (best, nodes)
    };
    let words = best.iter().map(|&i| Codeword::from(candidates[i].clone())).collect();
    SearchResult {
        value: best.len(),
        witness: Code::from_trusted(alphabet, n, words),
        nodes_explored: nodes,
        optimal: !shared.stopped.load(Ordering::Relaxed),
    }
}

fn run_task<C: Constraint>(shared: &Shared<'_>, task: usize, prefix: &[bool], mut constraint: C) -> (Vec<usize>, u64) {
    let mut chosen = Vec::new();
    for (idx, &take) in prefix.iter().enumerate() {
        if take {
            if !constraint.try_push(&shared.candidates[idx]) {
                return (Vec::new(), 0);
            }
            chosen.push(idx);
        }
    }
    let mut worker = Worker {
        shared,
        task,
        constraint,
        chosen,
        best: Vec::new(),
        nodes: 0,
    };
    worker.dfs(prefix.len());
    (worker.best, worker.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::sauer_bound;
    use crate::configurations::reverse_family;
    use crate::constructions::generate_ks;
    use crate::shattering::satisfies;

    fn sv(k: usize, e: &[usize]) -> SVector {
        SVector::new(Alphabet::new(k).unwrap(), e.to_vec()).unwrap()
    }

    #[test]
    fn shatter_examples() {
        let opts = SearchOptions::default();
        assert_eq!(forb_search_shatter(1, &sv(3, &[2, 2, 2]), &opts).unwrap().value, 3);
        let r = forb_search_shatter(2, &sv(3, &[2, 2, 2]), &opts).unwrap();
        assert_eq!(r.value, 7);
        assert!(r.optimal);
        assert!(satisfies(&r.witness, &sv(3, &[2, 2, 2])).unwrap());
        assert_eq!(forb_search_shatter(2, &sv(3, &[1, 2, 2]), &opts).unwrap().value, 4);
    }

    #[test]
    fn witness_is_least_maximum() {
        let r = forb_search_shatter(1, &sv(3, &[2, 2, 2]), &SearchOptions::default()).unwrap();
        assert_eq!(r.witness.serialize(), "3 1\n0\n1\n2\n");
        let r = forb_search_shatter(2, &sv(2, &[1]), &SearchOptions::default()).unwrap();
        assert_eq!(r.witness.serialize(), "2 2\n0 0\n");
    }

    #[test]
    fn sauer_values_from_configurations() {
        let two = Alphabet::new(2).unwrap();
        for n in 1..=3 {
            for s in 1..=3 {
                let r = forb_search_config(n, two, &[generate_ks(s)], &SearchOptions::default()).unwrap();
                assert_eq!(num_bigint::BigUint::from(r.value), sauer_bound(n, s), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn empty_family_allows_everything() {
        let r = forb_search_config(2, Alphabet::new(3).unwrap(), &[], &SearchOptions::default()).unwrap();
        assert_eq!(r.value, 9);
    }

    #[test]
    fn reverse_free_square() {
        let two = Alphabet::new(2).unwrap();
        let r = forb_search_config(2, two, &reverse_family(two), &SearchOptions::default()).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.witness.serialize(), "2 2\n0 0\n0 1\n1 1\n");
    }

    #[test]
    fn envelope_is_enforced() {
        let opts = SearchOptions::default();
        assert!(matches!(forb_search_shatter(10, &sv(3, &[2, 2, 2]), &opts), Err(Error::Envelope(_))));
        let three = Alphabet::new(3).unwrap();
        assert!(max_code_with_dimension(4, three, DimensionKind::G, 1, &opts).is_err());
        assert!(max_code_with_dimension(2, three, DimensionKind::G, 1, &opts.clone().with_max_candidates(8)).is_err());
        assert!(forb_search_shatter(3, &sv(3, &[1, 1, 1]), &opts.clone().with_max_candidates(27)).is_ok());
    }

    #[test]
    fn haussler_long_square() {
        let three = Alphabet::new(3).unwrap();
        let opts = SearchOptions::default();
        for kind in [DimensionKind::G, DimensionKind::P, DimensionKind::Gp] {
            assert_eq!(max_code_with_dimension(2, three, kind, 1, &opts).unwrap().value, 5, "{kind}");
        }
        assert_eq!(max_code_with_dimension(2, three, DimensionKind::N, 1, &opts).unwrap().value, 6);
        for kind in DimensionKind::ALL {
            assert_eq!(max_code_with_dimension(2, three, kind, 2, &opts).unwrap().value, 9);
        }
    }

    #[test]
    fn node_limit_marks_result_incomplete() {
        let opts = SearchOptions::default().with_node_limit(5).without_bound_cap();
        let r = forb_search_shatter(2, &sv(3, &[2, 2, 2]), &opts).unwrap();
        assert!(!r.optimal);
        assert!(r.value <= 7);
    }

    #[test]
    fn cancel_flag_stops_the_search() {
        let flag = Arc::new(AtomicBool::new(true));
        let opts = SearchOptions::default().with_cancel(flag);
        let r = forb_search_shatter(2, &sv(3, &[2, 2, 2]), &opts).unwrap();
        assert!(!r.optimal);
    }

    #[test]
    fn threads_do_not_change_the_answer() {
        let svec = sv(3, &[2, 2, 2]);
        let one = forb_search_shatter(2, &svec, &SearchOptions::default().without_bound_cap()).unwrap();
        for t in [2, 3, 8] {
            let many = forb_search_shatter(2, &svec, &SearchOptions::default().with_threads(t).without_bound_cap()).unwrap();
            assert_eq!(many.value, one.value);
            assert_eq!(many.witness, one.witness);
        }
    }

    #[test]
    fn compress_packs_selected_bits() {
        assert_eq!(compress(0b1010, 0b1110), 0b101);
        assert_eq!(compress(0b1111, 0), 0);
    }
}
