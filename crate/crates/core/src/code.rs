//! Codes, codewords, coordinate sets, symbol pairs and s-vectors, plus the
//! plain-text code/matrix file format.
//!
//! The file format is line oriented: a header `k n`, then one row per line
//! holding `n` space-separated decimal symbols. Lines starting with `#` are
//! comments. Blank lines are skipped, except when `n = 0`, where a blank line
//! is the only way to write the empty word.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::configurations::ConfigMatrix;
use crate::error::{Error, Result};

pub type Symbol = u8;

/// The alphabet `(k) = {0, .., k-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Alphabet(usize);

impl Alphabet {
    pub const MAX: usize = 256;

    pub fn new(k: usize) -> Result<Self> {
        if (1..=Self::MAX).contains(&k) {
            Ok(Alphabet(k))
        } else {
            Err(Error::InvalidAlphabet(k))
        }
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn contains(self, symbol: Symbol) -> bool {
        (symbol as usize) < self.0
    }

    /// Number of symbol pairs, `k choose 2`.
    pub fn pair_count(self) -> usize {
        self.0 * (self.0 - 1) / 2
    }

    pub fn pairs(self) -> impl Iterator<Item = SymbolPair> {
        let k = self.0;
        (0..k).flat_map(move |i| {
            (i + 1..k).map(move |j| SymbolPair {
                i: i as Symbol,
                j: j as Symbol,
            })
        })
    }
}

/// A word over some alphabet, viewed as a function `[n] -> (k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword(Vec<Symbol>);

impl Codeword {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Codeword(symbols)
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    /// Symbol at 1-based coordinate `coord`.
    pub fn at(&self, coord: usize) -> Symbol {
        self.0[coord - 1]
    }
}

impl Deref for Codeword {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Codeword {
    fn from(v: Vec<Symbol>) -> Self {
        Codeword(v)
    }
}

impl From<&[Symbol]> for Codeword {
    fn from(v: &[Symbol]) -> Self {
        Codeword(v.to_vec())
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_row(f, &self.0)
    }
}

fn write_row(f: &mut impl fmt::Write, row: &[Symbol]) -> fmt::Result {
    for (t, s) in row.iter().enumerate() {
        if t > 0 {
            f.write_char(' ')?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

/// A set of 1-based coordinates, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoordSet(Vec<usize>);

impl CoordSet {
    /// Builds a coordinate set over `[n]`. Input order is irrelevant; repeats
    /// and coordinates outside `1..=n` are rejected.
    pub fn new(mut coords: Vec<usize>, n: usize) -> Result<Self> {
        coords.sort_unstable();
        for w in coords.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateCoord(w[0]));
            }
        }
        if let Some(&c) = coords.iter().find(|&&c| c == 0 || c > n) {
            return Err(Error::CoordOutOfRange { coord: c, n });
        }
        Ok(CoordSet(coords))
    }

    pub fn empty() -> Self {
        CoordSet(Vec::new())
    }

    /// `[n]` itself.
    pub fn full(n: usize) -> Self {
        CoordSet((1..=n).collect())
    }

    /// From strictly increasing 0-based positions.
    pub(crate) fn from_indices(indices: &[usize]) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        CoordSet(indices.iter().map(|&t| t + 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// 0-based positions.
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|&c| c - 1).collect()
    }

    pub fn is_subset(&self, other: &CoordSet) -> bool {
        self.0.iter().all(|c| other.0.binary_search(c).is_ok())
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&c) if c > n => Err(Error::CoordOutOfRange { coord: c, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (t, c) in self.0.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// An unordered symbol pair stored as `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolPair {
    pub i: Symbol,
    pub j: Symbol,
}

impl SymbolPair {
    pub fn new(i: usize, j: usize, alphabet: Alphabet) -> Result<Self> {
        if i < j && j < alphabet.size() {
            Ok(SymbolPair {
                i: i as Symbol,
                j: j as Symbol,
            })
        } else {
            Err(Error::InvalidPair {
                i,
                j,
                k: alphabet.size(),
            })
        }
    }

    /// Position of this pair in the order `(0,1), (0,2), .., (k-2,k-1)`.
    pub fn index(self, alphabet: Alphabet) -> usize {
        let (i, j, k) = (self.i as usize, self.j as usize, alphabet.size());
        i * (2 * k - i - 1) / 2 + (j - i - 1)
    }

    pub fn contains(self, symbol: Symbol) -> bool {
        symbol == self.i || symbol == self.j
    }
}

impl fmt::Display for SymbolPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Per-pair thresholds `s_{i,j} >= 1`, in pair order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SVector {
    alphabet: Alphabet,
    entries: Vec<usize>,
}

impl SVector {
    pub fn new(alphabet: Alphabet, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != alphabet.pair_count() {
            return Err(Error::InvalidSVector(format!(
                "expected {} entries for k={}, found {}",
                alphabet.pair_count(),
                alphabet.size(),
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&s| s == 0) {
            return Err(Error::InvalidSVector(format!(
                "entry {} is 0; every entry must be at least 1",
                pos + 1
            )));
        }
        Ok(SVector { alphabet, entries })
    }

    /// Every pair gets the same threshold `s`.
    pub fn uniform(alphabet: Alphabet, s: usize) -> Result<Self> {
        SVector::new(alphabet, vec![s; alphabet.pair_count()])
    }

    /// Parses a comma-separated list such as `2,2,2`.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let text = text.trim();
        let entries = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|_| {
                        Error::InvalidSVector(format!("`{}` is not a non-negative integer", t.trim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        };
        SVector::new(alphabet, entries)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn get(&self, pair: SymbolPair) -> usize {
        self.entries[pair.index(self.alphabet)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolPair, usize)> + '_ {
        self.alphabet.pairs().zip(self.entries.iter().copied())
    }

    /// The exponent `p = sum (s_{i,j} - 1)`.
    pub fn exponent(&self) -> usize {
        self.entries.iter().map(|s| s - 1).sum()
    }
}

impl fmt::Display for SVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, s) in self.entries.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A code `C ⊆ (k)^n`. Words are distinct and kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Code {
    alphabet: Alphabet,
    length: usize,
    words: Vec<Codeword>,
}

impl Code {
    /// Validates every word; duplicates are an error.
    pub fn new(alphabet: Alphabet, length: usize, words: Vec<Codeword>) -> Result<Self> {
        for w in &words {
            check_word(alphabet, length, w)?;
        }
        let mut words = words;
        words.sort_unstable();
        if let Some(w) = words.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateWord(w[0].to_string()));
        }
        Ok(Code {
            alphabet,
            length,
            words,
        })
    }

    /// Like [`Code::new`] but collapses repeated words.
    pub fn from_words_dedup(alphabet: Alphabet, length: usize, words: Vec<Codeword>) -> Result<Self> {
        for w in &words {
            check_word(alphabet, length, w)?;
        }
        Ok(Self::from_trusted(alphabet, length, words))
    }

    /// Words already known to be valid; sorted and deduplicated here.
    pub(crate) fn from_trusted(alphabet: Alphabet, length: usize, mut words: Vec<Codeword>) -> Self {
        words.sort_unstable();
        words.dedup();
        Code {
            alphabet,
            length,
            words,
        }
    }

    pub fn empty(alphabet: Alphabet, length: usize) -> Self {
        Code {
            alphabet,
            length,
            words: Vec::new(),
        }
    }

    /// All `k^n` words, lexicographically.
    pub fn full_cube(alphabet: Alphabet, length: usize) -> Self {
        let words = all_words(alphabet, length).collect();
        Code {
            alphabet,
            length,
            words,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn k(&self) -> usize {
        self.alphabet.size()
    }

    /// Word length `n`.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Codeword> {
        self.words.iter()
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.words
            .binary_search_by(|w| w.as_ref().cmp(word))
            .is_ok()
    }

    pub fn is_subset(&self, other: &Code) -> bool {
        self.words.iter().all(|w| other.contains(w))
    }

    /// The projection `C|_S`, as a code of length `|S|`.
    pub fn project(&self, coords: &CoordSet) -> Result<Code> {
        coords.check_within(self.length)?;
        let idx = coords.indices();
        let words = self
            .words
            .iter()
            .map(|w| Codeword(idx.iter().map(|&t| w[t]).collect()))
            .collect();
        Ok(Code::from_trusted(self.alphabet, idx.len(), words))
    }

    /// The same words viewed over a larger alphabet.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Code> {
        if alphabet.size() < self.k() && self.words.iter().any(|w| w.iter().any(|&s| !alphabet.contains(s))) {
            return Err(Error::AlphabetMismatch {
                expected: alphabet.size(),
                found: self.k(),
            });
        }
        Ok(Code {
            alphabet,
            length: self.length,
            words: self.words.clone(),
        })
    }

    /// Rows are the codewords in lexicographic order.
    pub fn to_matrix(&self) -> ConfigMatrix {
        ConfigMatrix::from_rows_unchecked(
            self.alphabet,
            self.length,
            self.words.iter().map(|w| w.0.clone()).collect(),
        )
    }

    /// Requires a simple matrix.
    pub fn from_matrix(matrix: &ConfigMatrix) -> Result<Code> {
        if let Some(row) = matrix.first_repeated_row() {
            return Err(Error::NotSimple { row });
        }
        let words = matrix.rows().iter().map(|r| Codeword(r.clone())).collect();
        Ok(Code::from_trusted(matrix.alphabet(), matrix.cols(), words))
    }

    /// Parses the code file format. Repeated rows are rejected.
    pub fn parse(text: &str) -> Result<Code> {
        let parsed = parse_rows(text)?;
        let mut seen = HashSet::with_capacity(parsed.rows.len());
        for (line, row) in &parsed.rows {
            if !seen.insert(row.as_slice()) {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("duplicate codeword {}", Codeword(row.clone())),
                });
            }
        }
        let words = parsed.rows.into_iter().map(|(_, r)| Codeword(r)).collect();
        Ok(Code::from_trusted(parsed.alphabet, parsed.cols, words))
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.k(), self.length);
        for w in &self.words {
            // write! into a String cannot fail
            let _ = write_row(&mut out, w);
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a Code {
    type Item = &'a Codeword;
    type IntoIter = std::slice::Iter<'a, Codeword>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

fn check_word(alphabet: Alphabet, length: usize, w: &[Symbol]) -> Result<()> {
    if w.len() != length {
        return Err(Error::LengthMismatch {
            expected: length,
            got: w.len(),
        });
    }
    if let Some(&s) = w.iter().find(|&&s| !alphabet.contains(s)) {
        return Err(Error::SymbolOutOfRange {
            symbol: s as usize,
            k: alphabet.size(),
        });
    }
    Ok(())
}

/// Iterates `(k)^n` in lexicographic order.
pub fn all_words(alphabet: Alphabet, length: usize) -> impl Iterator<Item = Codeword> {
    let k = alphabet.size();
    let mut next = Some(vec![0 as Symbol; length]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut t = length;
        while t > 0 {
            t -= 1;
            if (succ[t] as usize) + 1 < k {
                succ[t] += 1;
                next = Some(succ);
                break;
            }
            succ[t] = 0;
        }
        Some(Codeword(current))
    })
}

/// `(sum c_i, {i : c_i != 0})`.
pub fn weight_and_support(word: &[Symbol]) -> (usize, CoordSet) {
    let weight = word.iter().map(|&s| s as usize).sum();
    let support: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != 0)
        .map(|(t, _)| t)
        .collect();
    (weight, CoordSet::from_indices(&support))
}

pub(crate) struct ParsedRows {
    pub alphabet: Alphabet,
    pub cols: usize,
    pub rows: Vec<(usize, Vec<Symbol>)>,
}

pub(crate) fn parse_rows(text: &str) -> Result<ParsedRows> {
    let mut lines = text.lines().enumerate().map(|(t, l)| (t + 1, l));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .ok_or(Error::Parse {
            line: 1,
            message: "missing header `k n`".into(),
        })?;
    let bad_header = |message: String| Error::Parse {
        line: hline,
        message,
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(bad_header(format!(
            "header must be `k n`, found `{}`",
            header.trim()
        )));
    }
    let k: usize = fields[0]
        .parse()
        .map_err(|_| bad_header(format!("alphabet size `{}` is not an integer", fields[0])))?;
    let cols: usize = fields[1]
        .parse()
        .map_err(|_| bad_header(format!("length `{}` is not an integer", fields[1])))?;
    let alphabet = Alphabet::new(k).map_err(|e| bad_header(e.to_string()))?;

    let mut rows = Vec::new();
    for (line, raw) in lines {
        if raw.starts_with('#') {
            continue;
        }
        let raw = raw.trim();
        if raw.is_empty() && cols > 0 {
            continue;
        }
        let mut row = Vec::with_capacity(cols);
        for tok in raw.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{tok}` is not a symbol"),
            })?;
            if v >= k {
                return Err(Error::Parse {
                    line,
                    message: format!("symbol {v} >= k={k}"),
                });
            }
            row.push(v as Symbol);
        }
        if row.len() != cols {
            return Err(Error::Parse {
                line,
                message: format!("row has {} symbols, expected {cols}", row.len()),
            });
        }
        rows.push((line, row));
    }
    Ok(ParsedRows {
        alphabet,
        cols,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(k: usize) -> Alphabet {
        Alphabet::new(k).unwrap()
    }

    fn code(k: usize, n: usize, words: &[&[u8]]) -> Code {
        Code::new(a(k), n, words.iter().map(|w| Codeword::from(*w)).collect()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let c = Code::parse("2 2\n0 0\n1 1\n").unwrap();
        assert_eq!(c, code(2, 2, &[&[0, 0], &[1, 1]]));

        let c = Code::parse("3 1\n0\n1\n2\n").unwrap();
        assert_eq!(c, code(3, 1, &[&[0], &[1], &[2]]));
    }

    #[test]
    fn parse_rejects_symbol_out_of_range() {
        match Code::parse("2 2\n0 2\n") {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("symbol 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(Code::parse("2 x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Code::parse("2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            Code::parse("# c\n2 2\n0 0\n0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            Code::parse("2 2\n0 1\n\n0 1\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(Code::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(Code::parse("0 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn parse_skips_comments() {
        let c = Code::parse("# header next\n2 1\n# row\n1\n\n0\n").unwrap();
        assert_eq!(c, code(2, 1, &[&[0], &[1]]));
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(code(2, 1, &[&[1], &[0]]).serialize(), "2 1\n0\n1\n");
        assert_eq!(Code::empty(a(2), 3).serialize(), "2 3\n");
        assert_eq!(code(12, 2, &[&[11, 3]]).serialize(), "12 2\n11 3\n");
    }

    #[test]
    fn zero_length_code_round_trips() {
        let eps = code(2, 0, &[&[]]);
        assert_eq!(eps.serialize(), "2 0\n\n");
        assert_eq!(Code::parse(&eps.serialize()).unwrap(), eps);
        assert!(Code::parse("2 0\n").unwrap().is_empty());
        assert!(Code::parse("2 0\n\n\n").is_err());
    }

    #[test]
    fn new_rejects_duplicates_and_bad_words() {
        let w = |v: &[u8]| Codeword::from(v);
        assert!(matches!(
            Code::new(a(2), 1, vec![w(&[0]), w(&[0])]),
            Err(Error::DuplicateWord(_))
        ));
        assert!(matches!(
            Code::new(a(2), 2, vec![w(&[0])]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            Code::new(a(2), 1, vec![w(&[3])]),
            Err(Error::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let cube = Code::full_cube(a(2), 2);
        let p = cube.project(&CoordSet::new(vec![1], 2).unwrap()).unwrap();
        assert_eq!(p, code(2, 1, &[&[0], &[1]]));

        let p = cube.project(&CoordSet::empty()).unwrap();
        assert_eq!(p, code(2, 0, &[&[]]));

        let c = code(2, 2, &[&[0, 0], &[1, 1]]);
        assert_eq!(c.project(&CoordSet::full(2)).unwrap(), c);

        assert!(matches!(
            CoordSet::new(vec![3], 2),
            Err(Error::CoordOutOfRange { coord: 3, n: 2 })
        ));
        let wide = CoordSet::new(vec![1, 3], 3).unwrap();
        assert!(matches!(c.project(&wide), Err(Error::CoordOutOfRange { .. })));
    }

    #[test]
    fn weight_support_examples() {
        let (w, s) = weight_and_support(&[0, 2, 1]);
        assert_eq!(w, 3);
        assert_eq!(s.coords(), &[2, 3]);

        let (w, s) = weight_and_support(&[0, 0, 0]);
        assert_eq!((w, s.len()), (0, 0));

        let (w, s) = weight_and_support(&[1; 5]);
        assert_eq!(w, 5);
        assert_eq!(s, CoordSet::full(5));
    }

    #[test]
    fn matrix_conversion() {
        let c = code(2, 2, &[&[1, 1], &[0, 0]]);
        let m = c.to_matrix();
        assert_eq!(m.rows(), &[vec![0, 0], vec![1, 1]]);
        assert_eq!(Code::from_matrix(&m).unwrap(), c);

        let rep = ConfigMatrix::new(a(2), 1, vec![vec![0], vec![0]]).unwrap();
        assert!(matches!(Code::from_matrix(&rep), Err(Error::NotSimple { row: 1 })));
    }

    #[test]
    fn pair_indexing_matches_order() {
        for k in 1..=7 {
            let al = a(k);
            for (t, p) in al.pairs().enumerate() {
                assert_eq!(p.index(al), t);
            }
            assert_eq!(al.pairs().count(), al.pair_count());
        }
    }

    #[test]
    fn svector_validation() {
        let al = a(3);
        let s = SVector::parse(al, "2, 3,1").unwrap();
        assert_eq!(s.entries(), &[2, 3, 1]);
        assert_eq!(s.exponent(), 3);
        assert_eq!(s.get(SymbolPair::new(0, 2, al).unwrap()), 3);
        assert!(SVector::parse(al, "2,2").is_err());
        assert!(SVector::parse(al, "2,0,2").is_err());
        assert!(SVector::parse(al, "2,x,2").is_err());
        assert!(SVector::parse(a(1), "").unwrap().entries().is_empty());
    }

    #[test]
    fn all_words_is_lexicographic() {
        let w: Vec<_> = all_words(a(3), 2).collect();
        assert_eq!(w.len(), 9);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(all_words(a(2), 0).count(), 1);
    }
}
