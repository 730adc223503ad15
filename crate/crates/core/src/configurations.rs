//! Forbidden configurations: `(k)`-matrices, simplicity, and containment of
//! one matrix in another up to row and column permutation.
//!
//! Containment is decided column-first. Column subsets of `A` are visited in
//! lexicographic order; for each subset, bijections from the columns of `F`
//! are built by backtracking, pruned by per-column symbol counts and by
//! partial row-pattern counts. Once every column is placed, the rows of `F`
//! must be matched to distinct rows of `A` with equal projections. Matching
//! rows only ever pair equal patterns, so a matching exists exactly when every
//! pattern occurs in `A` at least as often as in `F`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::code::{parse_rows, Alphabet, Code, SVector, Symbol};
use crate::constructions::{generate_ks, remap_symbols};
use crate::error::{Error, Result};

/// A `(k)`-matrix, possibly with repeated rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfigMatrix {
    alphabet: Alphabet,
    cols: usize,
    rows: Vec<Vec<Symbol>>,
}

impl ConfigMatrix {
    pub fn new(alphabet: Alphabet, cols: usize, rows: Vec<Vec<Symbol>>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            if let Some(&s) = r.iter().find(|&&s| !alphabet.contains(s)) {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as usize,
                    k: alphabet.size(),
                });
            }
        }
        Ok(ConfigMatrix {
            alphabet,
            cols,
            rows,
        })
    }

    pub(crate) fn from_rows_unchecked(alphabet: Alphabet, cols: usize, rows: Vec<Vec<Symbol>>) -> Self {
        ConfigMatrix {
            alphabet,
            cols,
            rows,
        }
    }

    /// Same file format as codes; repeated rows are kept.
    pub fn parse(text: &str) -> Result<Self> {
        let parsed = parse_rows(text)?;
        Ok(ConfigMatrix {
            alphabet: parsed.alphabet,
            cols: parsed.cols,
            rows: parsed.rows.into_iter().map(|(_, r)| r).collect(),
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.alphabet.size(), self.cols);
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|s| s.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Symbol>] {
        &self.rows
    }

    pub fn entry(&self, row: usize, col: usize) -> Symbol {
        self.rows[row][col]
    }

    pub fn is_simple(&self) -> bool {
        self.first_repeated_row().is_none()
    }

    /// Index of the first row equal to some earlier row.
    pub fn first_repeated_row(&self) -> Option<usize> {
        let mut seen = HashMap::with_capacity(self.rows.len());
        self.rows
            .iter()
            .enumerate()
            .find_map(|(t, r)| seen.insert(r.as_slice(), t).map(|_| t))
    }

    /// True when some column holds a single symbol throughout. A matrix with
    /// no rows has no constant column.
    pub fn has_constant_column(&self) -> bool {
        if self.rows.is_empty() {
            return false;
        }
        (0..self.cols).any(|c| self.rows.iter().all(|r| r[c] == self.rows[0][c]))
    }

    /// Reinterprets the entries over a larger alphabet.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self> {
        ConfigMatrix::new(alphabet, self.cols, self.rows.clone())
    }
}

/// Where `F` sits inside `A`. All indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentWitness {
    /// Selected rows of `A`, ascending.
    pub row_indices: Vec<usize>,
    /// Selected columns of `A`, ascending.
    pub col_indices: Vec<usize>,
    /// `row_map[r]` is the row of `A` playing row `r` of `F`.
    pub row_map: Vec<usize>,
    /// `col_map[c]` is the column of `A` playing column `c` of `F`.
    pub col_map: Vec<usize>,
}

impl ContainmentWitness {
    /// Checks `A[row_map[r]][col_map[c]] == F[r][c]` everywhere, with distinct
    /// row and column indices.
    pub fn verify(&self, a: &ConfigMatrix, f: &ConfigMatrix) -> bool {
        if self.row_map.len() != f.row_count() || self.col_map.len() != f.cols() {
            return false;
        }
        let distinct = |v: &[usize], bound: usize| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&x| x < bound)
        };
        if !distinct(&self.row_map, a.row_count()) || !distinct(&self.col_map, a.cols()) {
            return false;
        }
        let mut rows = self.row_map.clone();
        rows.sort_unstable();
        let mut cols = self.col_map.clone();
        cols.sort_unstable();
        if rows != self.row_indices || cols != self.col_indices {
            return false;
        }
        f.rows().iter().enumerate().all(|(r, frow)| {
            frow.iter()
                .enumerate()
                .all(|(c, &v)| a.entry(self.row_map[r], self.col_map[c]) == v)
        })
    }
}

/// Is `F` a configuration of `A`? Returns the least witness ordered by
/// (sorted columns, sorted rows).
pub fn config_contains(a: &ConfigMatrix, f: &ConfigMatrix) -> Option<ContainmentWitness> {
    Matcher::new(a, f, None).find()
}

/// Like [`config_contains`], but the witness must use row `required_row` of
/// `A`. This is the incremental test when a row has just been added.
pub fn config_contains_using_row(
    a: &ConfigMatrix,
    f: &ConfigMatrix,
    required_row: usize,
) -> Option<ContainmentWitness> {
    Matcher::new(a, f, Some(required_row)).find()
}

/// `true` when the code contains no member of `family`; otherwise the index
/// of the first contained member and its witness.
pub fn code_avoids_family(
    code: &Code,
    family: &[ConfigMatrix],
) -> (bool, Option<(usize, ContainmentWitness)>) {
    let a = code.to_matrix();
    for (t, f) in family.iter().enumerate() {
        if let Some(w) = config_contains(&a, f) {
            return (false, Some((t, w)));
        }
    }
    (true, None)
}

pub fn is_simple(m: &ConfigMatrix) -> bool {
    m.is_simple()
}

/// The reverse configurations `[[a,b],[b,a]]` for every `a < b < k`.
pub fn reverse_family(alphabet: Alphabet) -> Vec<ConfigMatrix> {
    alphabet
        .pairs()
        .map(|p| ConfigMatrix::from_rows_unchecked(alphabet, 2, vec![vec![p.i, p.j], vec![p.j, p.i]]))
        .collect()
}

/// `{K_{s_{i,j}}(i,j)}`, the configuration form of the shattering constraints.
pub fn shatter_family(svec: &SVector) -> Vec<ConfigMatrix> {
    let alphabet = svec.alphabet();
    svec.iter()
        .map(|(p, s)| remap_symbols(&generate_ks(s), p, alphabet).expect("K_s is binary"))
        .collect()
}

struct Matcher<'a> {
    a: &'a ConfigMatrix,
    f: &'a ConfigMatrix,
    required: Option<usize>,
    /// compat[fc][ac]: column `ac` of A has every symbol at least as often as column `fc` of F.
    compat: Vec<Vec<bool>>,
    /// F columns in placement order, rarest profile first.
    order: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(a: &'a ConfigMatrix, f: &'a ConfigMatrix, required: Option<usize>) -> Self {
        let k = a.alphabet().size().max(f.alphabet().size());
        let counts = |m: &ConfigMatrix, c: usize| {
            let mut h = vec![0usize; k];
            for r in m.rows() {
                h[r[c] as usize] += 1;
            }
            h
        };
        let a_counts: Vec<Vec<usize>> = (0..a.cols()).map(|c| counts(a, c)).collect();
        let f_counts: Vec<Vec<usize>> = (0..f.cols()).map(|c| counts(f, c)).collect();
        let compat: Vec<Vec<bool>> = f_counts
            .iter()
            .map(|fc| {
                a_counts
                    .iter()
                    .map(|ac| fc.iter().zip(ac).all(|(x, y)| x <= y))
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..f.cols()).collect();
        order.sort_by_key(|&c| (compat[c].iter().filter(|&&b| b).count(), c));
        Matcher {
            a,
            f,
            required,
            compat,
            order,
        }
    }

    fn find(&self) -> Option<ContainmentWitness> {
        let (m, c) = (self.f.row_count(), self.f.cols());
        if c > self.a.cols() || m > self.a.row_count() {
            return None;
        }
        if let Some(r) = self.required {
            if r >= self.a.row_count() || m == 0 {
                return None;
            }
        }
        if self.order.iter().any(|&fc| !self.compat[fc].iter().any(|&b| b)) {
            return None;
        }
        let mut subset = Vec::with_capacity(c);
        self.subsets(0, &mut subset)
    }

    /// Column subsets of A in lexicographic order.
    fn subsets(&self, start: usize, subset: &mut Vec<usize>) -> Option<ContainmentWitness> {
        let c = self.f.cols();
        if subset.len() == c {
            return self.best_for_subset(subset);
        }
        let need = c - subset.len();
        for ac in start..=self.a.cols() - need {
            if !self.order.iter().any(|&fc| self.compat[fc][ac]) {
                continue;
            }
            subset.push(ac);
            if let Some(w) = self.subsets(ac + 1, subset) {
                return Some(w);
            }
            subset.pop();
        }
        None
    }

    /// Over all bijections onto `subset`, the witness with the least row set.
    fn best_for_subset(&self, subset: &[usize]) -> Option<ContainmentWitness> {
        let c = self.f.cols();
        let mut col_map = vec![usize::MAX; c];
        let mut used = vec![false; c];
        let mut best: Option<ContainmentWitness> = None;
        self.assign(0, subset, &mut col_map, &mut used, &mut best);
        best
    }

    fn assign(
        &self,
        depth: usize,
        subset: &[usize],
        col_map: &mut [usize],
        used: &mut [bool],
        best: &mut Option<ContainmentWitness>,
    ) {
        if depth == self.order.len() {
            if let Some(w) = self.match_rows(col_map) {
                if best.as_ref().is_none_or(|b| w.row_indices < b.row_indices) {
                    *best = Some(w);
                }
            }
            return;
        }
        let fc = self.order[depth];
        for (slot, &ac) in subset.iter().enumerate() {
            if used[slot] || !self.compat[fc][ac] {
                continue;
            }
            col_map[fc] = ac;
            used[slot] = true;
            if self.partial_ok(&self.order[..=depth], col_map) {
                self.assign(depth + 1, subset, col_map, used, best);
            }
            used[slot] = false;
            col_map[fc] = usize::MAX;
        }
    }

    /// Every pattern of F on the placed columns must occur at least as often in A.
    fn partial_ok(&self, placed: &[usize], col_map: &[usize]) -> bool {
        let mut demand: HashMap<Vec<Symbol>, isize> = HashMap::new();
        for r in self.f.rows() {
            *demand.entry(placed.iter().map(|&fc| r[fc]).collect()).or_default() += 1;
        }
        let mut unmet = demand.len();
        for r in self.a.rows() {
            let key: Vec<Symbol> = placed.iter().map(|&fc| r[col_map[fc]]).collect();
            if let Some(d) = demand.get_mut(&key) {
                *d -= 1;
                if *d == 0 {
                    unmet -= 1;
                    if unmet == 0 {
                        return true;
                    }
                }
            }
        }
        unmet == 0
    }

    /// Least rows of A realizing F under a complete column map.
    fn match_rows(&self, col_map: &[usize]) -> Option<ContainmentWitness> {
        let pattern = |r: &[Symbol]| -> Vec<Symbol> { col_map.iter().map(|&ac| r[ac]).collect() };
        // F rows grouped by pattern, in F row order.
        let mut groups: HashMap<Vec<Symbol>, Vec<usize>> = HashMap::new();
        for (fr, row) in self.f.rows().iter().enumerate() {
            groups.entry(row.clone()).or_default().push(fr);
        }
        let mut available: HashMap<Vec<Symbol>, Vec<usize>> = HashMap::new();
        for (ar, row) in self.a.rows().iter().enumerate() {
            let p = pattern(row);
            if groups.contains_key(&p) {
                available.entry(p).or_default().push(ar);
            }
        }
        let mut row_map = vec![usize::MAX; self.f.row_count()];
        let required_pattern = self.required.map(|r| pattern(&self.a.rows()[r]));
        if let Some(p) = &required_pattern {
            if !groups.contains_key(p) {
                return None;
            }
        }
        for (p, frs) in &groups {
            let rows = available.get(p)?;
            if rows.len() < frs.len() {
                return None;
            }
            let mut chosen: Vec<usize> = rows[..frs.len()].to_vec();
            if required_pattern.as_ref() == Some(p) {
                let r = self.required.unwrap();
                if !chosen.contains(&r) {
                    // swap out the largest chosen row
                    chosen.pop();
                    chosen.push(r);
                    chosen.sort_unstable();
                }
            }
            for (&fr, &ar) in frs.iter().zip(&chosen) {
                row_map[fr] = ar;
            }
        }
        let mut row_indices = row_map.clone();
        row_indices.sort_unstable();
        let mut col_indices = col_map.to_vec();
        col_indices.sort_unstable();
        Some(ContainmentWitness {
            row_indices,
            col_indices,
            row_map,
            col_map: col_map.to_vec(),
        })
    }
}
