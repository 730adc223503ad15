//! The branching process behind the upper bound, and the prefix
//! decomposition behind the inductive proof.
//!
//! A node at step `t` holds a set `B` of words of length `t`. Stripping the
//! first symbol sends every suffix to the ZERO child, and a suffix seen with
//! first symbols `i_1 < .. < i_w` also goes to the `(i_1, i_x)` child for each
//! `x >= 2`. So `|B| = |B_0| + sum |B_{i,j}|` and the leaves (step 0) are in
//! bijection with the codewords.
//!
//! Step `t` consumes original coordinate `n - t + 1`. Certificates are
//! reported in original coordinates so they can be checked against the code.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::code::{Alphabet, Code, Codeword, CoordSet, SVector, Symbol, SymbolPair};
use crate::error::{Error, Result};
use crate::shattering::is_ij_shattered;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchLabel {
    Root,
    Zero,
    Pair(SymbolPair),
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchLabel::Root => f.write_str("ROOT"),
            BranchLabel::Zero => f.write_str("ZERO"),
            BranchLabel::Pair(p) => write!(f, "{},{}", p.i, p.j),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchNode {
    /// Word length at this node.
    pub step: usize,
    pub size: usize,
    pub label: BranchLabel,
    /// Original coordinate consumed on the edge into this node.
    pub coord: Option<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Only kept when the tree was built with words.
    pub words: Option<Vec<Codeword>>,
}

/// The whole branching tree, nodes in depth-first preorder with the ZERO
/// child first and pair children in pair order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchTree {
    alphabet: Alphabet,
    length: usize,
    nodes: Vec<BranchNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Certificate {
    pub pair: SymbolPair,
    pub coords: CoordSet,
}

/// `𝒞^i_{i,j}` and `𝒞^j_{i,j}`: codewords ending in `i` (resp. `j`) whose
/// prefix also occurs with `j` (resp. `i`) at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiblingSets {
    pub ending_i: Code,
    pub ending_j: Code,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixDecomposition {
    pub prefixes: Code,
    pub sibling_sets: BTreeMap<SymbolPair, SiblingSets>,
}

impl PrefixDecomposition {
    /// `|prefixes| + sum |𝒞^j_{i,j}|`, the right side of the inductive
    /// inequality.
    pub fn right_side(&self) -> usize {
        self.prefixes.len() + self.sibling_sets.values().map(|s| s.ending_j.len()).sum::<usize>()
    }
}

pub fn branch_decompose(code: &Code) -> BranchTree {
    build(code, false)
}

/// Same as [`branch_decompose`] but every node keeps its word set.
pub fn branch_decompose_with_words(code: &Code) -> BranchTree {
    build(code, true)
}

fn build(code: &Code, keep_words: bool) -> BranchTree {
    let n = code.length();
    let mut tree = BranchTree {
        alphabet: code.alphabet(),
        length: n,
        nodes: Vec::new(),
    };
    let words: Vec<Vec<Symbol>> = code.iter().map(|w| w.to_vec()).collect();
    grow(&mut tree, words, n, BranchLabel::Root, None, None, keep_words);
    tree
}

fn grow(
    tree: &mut BranchTree,
    words: Vec<Vec<Symbol>>,
    step: usize,
    label: BranchLabel,
    coord: Option<usize>,
    parent: Option<usize>,
    keep_words: bool,
) {
    let id = tree.nodes.len();
    tree.nodes.push(BranchNode {
        step,
        size: words.len(),
        label,
        coord,
        parent,
        children: Vec::new(),
        words: keep_words.then(|| words.iter().cloned().map(Codeword::from).collect()),
    });
    if let Some(p) = parent {
        tree.nodes[p].children.push(id);
    }
    if step == 0 || words.is_empty() {
        return;
    }
    let consumed = tree.length - step + 1;
    let alphabet = tree.alphabet;
    for (child_label, child_words) in split(&words, alphabet) {
        grow(tree, child_words, step - 1, child_label, Some(consumed), Some(id), keep_words);
    }
}

/// One branching step: the ZERO child, then the pair children in pair order.
fn split(words: &[Vec<Symbol>], alphabet: Alphabet) -> Vec<(BranchLabel, Vec<Vec<Symbol>>)> {
    let mut firsts: BTreeMap<&[Symbol], BTreeSet<Symbol>> = BTreeMap::new();
    for w in words {
        firsts.entry(&w[1..]).or_default().insert(w[0]);
    }
    let zero: Vec<Vec<Symbol>> = firsts.keys().map(|s| s.to_vec()).collect();
    let mut pairs: BTreeMap<SymbolPair, Vec<Vec<Symbol>>> = BTreeMap::new();
    for (suffix, symbols) in &firsts {
        let mut it = symbols.iter();
        let anchor = *it.next().expect("every suffix has a first symbol");
        for &other in it {
            let pair = SymbolPair::new(anchor as usize, other as usize, alphabet).expect("symbols in range");
            pairs.entry(pair).or_default().push(suffix.to_vec());
        }
    }
    let mut out = vec![(BranchLabel::Zero, zero)];
    out.extend(pairs.into_iter().map(|(p, w)| (BranchLabel::Pair(p), w)));
    out
}

impl BranchTree {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn nodes(&self) -> &[BranchNode] {
        &self.nodes
    }

    pub fn root(&self) -> &BranchNode {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].step == 0 && self.nodes[v].size > 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Nodes whose size differs from the total size of their children.
    pub fn identity_failures(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&v| {
                let node = &self.nodes[v];
                if node.size == 0 {
                    // only the root of an empty code may be empty
                    return node.parent.is_some();
                }
                if node.step == 0 {
                    return node.size != 1;
                }
                let total: usize = node.children.iter().map(|&c| self.nodes[c].size).sum();
                total != node.size
            })
            .collect()
    }

    /// Pair edges on the path from the root to `node`, root end first.
    pub fn path_pairs(&self, node: usize) -> Vec<(SymbolPair, usize)> {
        let mut out = Vec::new();
        let mut v = node;
        while let Some(p) = self.nodes[v].parent {
            if let (BranchLabel::Pair(pair), Some(c)) = (self.nodes[v].label, self.nodes[v].coord) {
                out.push((pair, c));
            }
            v = p;
        }
        out.reverse();
        out
    }

    /// Per-pair branching counts `alpha` of `leaf`, indexed like the s-vector.
    pub fn profile(&self, leaf: usize) -> Vec<usize> {
        let mut alpha = vec![0; self.alphabet.pair_count()];
        for (pair, _) in self.path_pairs(leaf) {
            alpha[pair.index(self.alphabet)] += 1;
        }
        alpha
    }

    /// How many leaves carry each branching profile.
    pub fn profile_counts(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut counts = BTreeMap::new();
        for leaf in self.leaves() {
            *counts.entry(self.profile(leaf)).or_insert(0) += 1;
        }
        counts
    }

    /// Indented listing, one node per line.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        if !self.nodes.is_empty() {
            self.trace_node(0, 0, &mut out);
        }
        out
    }

    fn trace_node(&self, v: usize, depth: usize, out: &mut String) {
        let node = &self.nodes[v];
        let _ = writeln!(
            out,
            "{:indent$}t={} size={} label={}",
            "",
            node.step,
            node.size,
            node.label,
            indent = 2 * depth
        );
        for &c in &node.children {
            self.trace_node(c, depth + 1, out);
        }
    }
}

/// Per leaf and per pair, the coordinates of the pair's branching steps on
/// the root path. Deduplicated, in order of first appearance.
///
/// Panics if a certificate is not actually shattered, since that means the
/// tree does not belong to `code` or the decomposition is broken.
pub fn branch_certificates(tree: &BranchTree, code: &Code) -> Vec<Certificate> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for leaf in tree.leaves() {
        let mut by_pair: BTreeMap<SymbolPair, Vec<usize>> = BTreeMap::new();
        for (pair, c) in tree.path_pairs(leaf) {
            by_pair.entry(pair).or_default().push(c);
        }
        for (pair, coords) in by_pair {
            let coords = CoordSet::new(coords, code.length()).expect("path coordinates are distinct and in range");
            let cert = Certificate { pair, coords };
            if seen.insert(cert.clone()) {
                let ok = is_ij_shattered(code, &cert.coords, pair).expect("certificate within code length");
                assert!(ok, "certificate {pair} {:?} is not shattered by the code", cert.coords.coords());
                out.push(cert);
            }
        }
    }
    out
}

/// `true` iff every leaf has `alpha_{i,j} <= s_{i,j} - 1` for every pair.
pub fn check_branch_bound(code: &Code, svec: &SVector) -> Result<bool> {
    if svec.alphabet() != code.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: code.k(),
            found: svec.alphabet().size(),
        });
    }
    let tree = branch_decompose(code);
    let holds = tree
        .leaves()
        .all(|leaf| tree.profile(leaf).iter().zip(svec.entries()).all(|(&a, &s)| a < s));
    Ok(holds)
}

/// Splits off the last coordinate.
///
/// Panics if the inductive inequality fails, which cannot happen for a
/// correct implementation.
pub fn prefix_decompose(code: &Code) -> Result<PrefixDecomposition> {
    let n = code.length();
    if n == 0 {
        return Err(Error::Precondition("prefix decomposition needs length at least 1".into()));
    }
    let alphabet = code.alphabet();
    let prefixes = code.project(&CoordSet::full(n - 1))?;
    let mut endings: BTreeMap<&[Symbol], BTreeSet<Symbol>> = BTreeMap::new();
    for w in code {
        endings.entry(&w[..n - 1]).or_default().insert(w[n - 1]);
    }
    let mut sibling_sets = BTreeMap::new();
    for pair in alphabet.pairs() {
        let mut ending_i = Vec::new();
        let mut ending_j = Vec::new();
        for (prefix, last) in &endings {
            if last.contains(&pair.i) && last.contains(&pair.j) {
                let with = |s: Symbol| {
                    let mut w = prefix.to_vec();
                    w.push(s);
                    Codeword::from(w)
                };
                ending_i.push(with(pair.i));
                ending_j.push(with(pair.j));
            }
        }
        sibling_sets.insert(
            pair,
            SiblingSets {
                ending_i: Code::new(alphabet, n, ending_i)?,
                ending_j: Code::new(alphabet, n, ending_j)?,
            },
        );
    }
    let decomposition = PrefixDecomposition { prefixes, sibling_sets };
    assert!(
        code.len() <= decomposition.right_side(),
        "inductive inequality fails: {} > {}",
        code.len(),
        decomposition.right_side()
    );
    Ok(decomposition)
}
