//! Generators for structured and extremal codes.
//!
//! The product construction puts blocks side by side in every possible way.
//! Each block lives on the two symbols of its pair, so a column taking part
//! in an `(i,j)`-shattered set can only come from the `(i,j)` block.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::partition_bound;
use crate::code::{Alphabet, Code, Codeword, SVector, Symbol, SymbolPair};
use crate::configurations::ConfigMatrix;
use crate::error::{Error, Result};

/// Column counts `(n_0, .., n_{k-2})` of a column partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Composition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// `K_s`: all `2^s` binary rows of length `s`, lexicographically.
pub fn generate_ks(s: usize) -> ConfigMatrix {
    assert!(s < usize::BITS as usize, "K_s with s={s} does not fit in memory");
    let rows = (0..1usize << s)
        .map(|m| (0..s).map(|c| ((m >> (s - 1 - c)) & 1) as Symbol).collect())
        .collect();
    ConfigMatrix::from_rows_unchecked(binary(), s, rows)
}

fn binary() -> Alphabet {
    Alphabet::new(2).expect("2 is a valid alphabet size")
}

/// `F(i,j)`: 0 becomes `i` and 1 becomes `j`. The result lives over `alphabet`.
pub fn remap_symbols(f: &ConfigMatrix, pair: SymbolPair, alphabet: Alphabet) -> Result<ConfigMatrix> {
    if !alphabet.contains(pair.j) {
        return Err(Error::InvalidPair {
            i: pair.i as usize,
            j: pair.j as usize,
            k: alphabet.size(),
        });
    }
    let rows = f
        .rows()
        .iter()
        .map(|r| remap_row(r, pair.i, pair.j))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfigMatrix::from_rows_unchecked(alphabet, f.cols(), rows))
}

fn remap_row(row: &[Symbol], zero: Symbol, one: Symbol) -> Result<Vec<Symbol>> {
    row.iter()
        .map(|&v| match v {
            0 => Ok(zero),
            1 => Ok(one),
            other => Err(Error::NonBinary(other)),
        })
        .collect()
}

/// Characteristic vectors of all subsets of `[n]` with fewer than `s`
/// elements. This down-set shatters no `s`-set and has exactly
/// `sum_{i<s} C(n, i)` words.
pub fn sauer_extremal(n: usize, s: usize) -> Code {
    let mut words = Vec::new();
    if s > 0 {
        let mut current = vec![0 as Symbol; n];
        down_set(&mut current, 0, s - 1, &mut words);
    }
    Code::from_trusted(binary(), n, words)
}

fn down_set(current: &mut [Symbol], start: usize, budget: usize, out: &mut Vec<Codeword>) {
    out.push(Codeword::from(current.to_vec()));
    if budget == 0 {
        return;
    }
    for t in start..current.len() {
        current[t] = 1;
        down_set(current, t + 1, budget - 1, out);
        current[t] = 0;
    }
}

/// Every row of every block side by side, blocks in the given order, then
/// `pad` constant-zero columns.
fn side_by_side(alphabet: Alphabet, blocks: &[Vec<Vec<Symbol>>], pad: usize) -> Code {
    let length: usize = blocks.iter().map(|b| b.first().map_or(0, Vec::len)).sum::<usize>() + pad;
    let mut rows: Vec<Vec<Symbol>> = vec![Vec::with_capacity(length)];
    for block in blocks {
        let mut next = Vec::with_capacity(rows.len() * block.len());
        for prefix in &rows {
            for row in block {
                let mut r = prefix.clone();
                r.extend_from_slice(row);
                next.push(r);
            }
        }
        rows = next;
    }
    let words = rows
        .into_iter()
        .map(|mut r| {
            r.resize(length, 0);
            Codeword::from(r)
        })
        .collect();
    Code::from_trusted(alphabet, length, words)
}

/// The product of one simple binary block per pair. Block `(i,j)` is
/// remapped onto `{i, j}` and the blocks are concatenated in pair order.
pub fn product_construct(alphabet: Alphabet, blocks: &BTreeMap<SymbolPair, ConfigMatrix>) -> Result<Code> {
    for &pair in blocks.keys() {
        if !alphabet.contains(pair.j) {
            return Err(Error::InvalidPair {
                i: pair.i as usize,
                j: pair.j as usize,
                k: alphabet.size(),
            });
        }
    }
    let mut remapped = Vec::with_capacity(alphabet.pair_count());
    for pair in alphabet.pairs() {
        let block = blocks
            .get(&pair)
            .ok_or_else(|| Error::Precondition(format!("no block for pair {pair}")))?;
        if let Some(row) = block.first_repeated_row() {
            return Err(Error::NotSimple { row });
        }
        remapped.push(remap_symbols(block, pair, alphabet)?.rows().to_vec());
    }
    Ok(side_by_side(alphabet, &remapped, 0))
}

/// A code avoiding every `(i,j)`-shattered `s_{i,j}`-set with
/// `prod sauer_bound(n / C(k,2), s_{i,j})` words. Leftover columns are
/// constant 0.
pub fn lower_bound_code(n: usize, svec: &SVector) -> Code {
    let alphabet = svec.alphabet();
    let pairs = alphabet.pair_count();
    let block_len = n.checked_div(pairs).unwrap_or(0);
    let blocks: Vec<Vec<Vec<Symbol>>> = svec
        .iter()
        .map(|(pair, s)| {
            sauer_extremal(block_len, s)
                .iter()
                .map(|w| remap_row(w, pair.i, pair.j).expect("binary"))
                .collect()
        })
        .collect();
    side_by_side(alphabet, &blocks, n - block_len * pairs)
}

/// The matching construction for s-vectors whose thresholds above 1 all
/// involve symbol `k-1`. Part `i` takes `n_i` columns over `{i, k-1}`,
/// filled with the Sauer down-set where binary 0 becomes `k-1` and 1 becomes `i`.
pub fn partition_construct(n: usize, svec: &SVector) -> Result<Code> {
    let (_, composition) = partition_bound(n, svec)?;
    let alphabet = svec.alphabet();
    let k = alphabet.size();
    let shared = (k - 1) as Symbol;
    let blocks: Vec<Vec<Vec<Symbol>>> = composition
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &ni)| {
            let s = svec.get(SymbolPair::new(i, k - 1, alphabet).expect("valid pair"));
            sauer_extremal(ni, s)
                .iter()
                .map(|w| remap_row(w, shared, i as Symbol).expect("binary"))
                .collect()
        })
        .collect();
    Ok(side_by_side(alphabet, &blocks, 0))
}

/// `{i, j}^n` over `alphabet`.
pub fn full_pair_cube(n: usize, pair: SymbolPair, alphabet: Alphabet) -> Result<Code> {
    if !alphabet.contains(pair.j) {
        return Err(Error::InvalidPair {
            i: pair.i as usize,
            j: pair.j as usize,
            k: alphabet.size(),
        });
    }
    let words = Code::full_cube(binary(), n)
        .iter()
        .map(|w| Codeword::from(remap_row(w, pair.i, pair.j).expect("binary")))
        .collect();
    Ok(Code::from_trusted(alphabet, n, words))
}
