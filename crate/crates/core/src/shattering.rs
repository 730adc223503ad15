//! Shattering predicates and the hierarchy of VC-type dimensions.
//!
//! Every dimension here is hereditary: if a witness works on `D`, its
//! restriction works on any subset of `D`. The searches therefore grow `D`
//! one coordinate at a time (in increasing order) and drop any prefix that
//! already fails. For each surviving prefix they keep the words that still
//! fit the witness, tagged with the in/out pattern they realize.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{Code, CoordSet, Symbol, SymbolPair, SVector};
use crate::error::{Error, Result};

/// Practical envelope for KM and bi-dimension.
pub const BI_SOFT_LIMIT: usize = 16;
/// Practical envelope for the G, P, GP and N dimensions.
pub const HL_SOFT_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DimensionKind {
    #[serde(rename = "KM")]
    Km,
    #[serde(rename = "BI")]
    Bi,
    #[serde(rename = "N")]
    N,
    #[serde(rename = "GP")]
    Gp,
    #[serde(rename = "G")]
    G,
    #[serde(rename = "P")]
    P,
}

impl DimensionKind {
    pub const ALL: [DimensionKind; 6] = [
        DimensionKind::Km,
        DimensionKind::Bi,
        DimensionKind::N,
        DimensionKind::Gp,
        DimensionKind::G,
        DimensionKind::P,
    ];

    pub fn as_hl(self) -> Option<HlKind> {
        match self {
            DimensionKind::G => Some(HlKind::G),
            DimensionKind::P => Some(HlKind::P),
            DimensionKind::Gp => Some(HlKind::Gp),
            DimensionKind::N => Some(HlKind::N),
            DimensionKind::Km | DimensionKind::Bi => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DimensionKind::Km => "KM",
            DimensionKind::Bi => "BI",
            DimensionKind::N => "N",
            DimensionKind::Gp => "GP",
            DimensionKind::G => "G",
            DimensionKind::P => "P",
        }
    }
}

impl fmt::Display for DimensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DimensionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DimensionKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown dimension kind `{s}`")))
    }
}

/// The witness-vector dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HlKind {
    /// `c = y` on `I`, `c != y` off `I`.
    G,
    /// `c >= y` on `I`, `c < y` off `I`.
    P,
    /// `c = y` on `I`, `c < y` off `I`.
    Gp,
    /// `c = y` on `I`, `c = z` off `I`, with `z < y`.
    N,
}

impl HlKind {
    pub fn dimension_kind(self) -> DimensionKind {
        match self {
            HlKind::G => DimensionKind::G,
            HlKind::P => DimensionKind::P,
            HlKind::Gp => DimensionKind::Gp,
            HlKind::N => DimensionKind::N,
        }
    }

    /// `Some(true)` inside `I`, `Some(false)` outside, `None` if the symbol fits neither.
    fn classify(self, v: Symbol, y: Symbol, z: Symbol) -> Option<bool> {
        match self {
            HlKind::G => Some(v == y),
            HlKind::P => Some(v >= y),
            HlKind::Gp => match v.cmp(&y) {
                std::cmp::Ordering::Equal => Some(true),
                std::cmp::Ordering::Less => Some(false),
                std::cmp::Ordering::Greater => None,
            },
            HlKind::N => {
                if v == y {
                    Some(true)
                } else if v == z {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    /// Values of `y` that can take part in a nonempty witness.
    fn y_range(self, k: usize) -> std::ops::Range<usize> {
        match self {
            HlKind::G => 0..k,
            HlKind::P | HlKind::Gp | HlKind::N => 1..k,
        }
    }
}

/// Coordinates with witness vectors. `z` is present only for the N-dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessVectors {
    pub coords: CoordSet,
    pub y: Vec<Symbol>,
    pub z: Option<Vec<Symbol>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HlDimension {
    pub value: i64,
    pub witness: Option<WitnessVectors>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiDimension {
    pub value: i64,
    /// Pair and coordinate set realizing the value.
    pub witness: Option<(SymbolPair, CoordSet)>,
}

/// All six dimensions; `-1` marks the empty code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    #[serde(rename = "KM")]
    pub km: i64,
    #[serde(rename = "BI")]
    pub bi: i64,
    #[serde(rename = "N")]
    pub n: i64,
    #[serde(rename = "GP")]
    pub gp: i64,
    #[serde(rename = "G")]
    pub g: i64,
    #[serde(rename = "P")]
    pub p: i64,
}

impl DimensionReport {
    pub fn get(&self, kind: DimensionKind) -> i64 {
        match kind {
            DimensionKind::Km => self.km,
            DimensionKind::Bi => self.bi,
            DimensionKind::N => self.n,
            DimensionKind::Gp => self.gp,
            DimensionKind::G => self.g,
            DimensionKind::P => self.p,
        }
    }

    /// `KM <= BI <= N <= GP <= min(G, P)`.
    pub fn chain_holds(&self) -> bool {
        self.km <= self.bi && self.bi <= self.n && self.n <= self.gp && self.gp <= self.g.min(self.p)
    }
}

/// Does the projection to `S` contain every function `S -> {i, j}`?
pub fn is_ij_shattered(code: &Code, coords: &CoordSet, pair: SymbolPair) -> Result<bool> {
    coords.check_within(code.length())?;
    check_pair(code, pair)?;
    Ok(ij_shattered_at(code, &coords.indices(), pair))
}

pub(crate) fn ij_shattered_at(code: &Code, idx: &[usize], pair: SymbolPair) -> bool {
    let d = idx.len();
    if d >= usize::BITS as usize - 1 || (1usize << d) > code.len() {
        return false;
    }
    let need = 1usize << d;
    let mut seen = vec![false; need];
    let mut found = 0;
    'words: for w in code {
        let mut mask = 0usize;
        for (b, &t) in idx.iter().enumerate() {
            let v = w[t];
            if v == pair.j {
                mask |= 1 << b;
            } else if v != pair.i {
                continue 'words;
            }
        }
        if !seen[mask] {
            seen[mask] = true;
            found += 1;
            if found == need {
                return true;
            }
        }
    }
    false
}

/// Does the projection to `S` equal all of `(k)^S`?
pub fn is_km_shattered(code: &Code, coords: &CoordSet) -> Result<bool> {
    coords.check_within(code.length())?;
    let idx = coords.indices();
    let need = match code.k().checked_pow(idx.len() as u32) {
        Some(need) if need <= code.len() => need,
        _ => return Ok(false),
    };
    let distinct: HashSet<Vec<Symbol>> = code
        .iter()
        .map(|w| idx.iter().map(|&t| w[t]).collect())
        .collect();
    Ok(distinct.len() == need)
}

fn check_pair(code: &Code, pair: SymbolPair) -> Result<()> {
    if (pair.j as usize) < code.k() {
        Ok(())
    } else {
        Err(Error::InvalidPair {
            i: pair.i as usize,
            j: pair.j as usize,
            k: code.k(),
        })
    }
}

/// Largest KM-shattered set size; `-1` for the empty code.
pub fn km_dimension(code: &Code) -> i64 {
    km_dimension_with_witness(code).0
}

pub fn km_dimension_with_witness(code: &Code) -> (i64, Option<CoordSet>) {
    if code.is_empty() {
        return (-1, None);
    }
    let mut search = KmSearch {
        code,
        k: code.k(),
        best: Vec::new(),
        stack: Vec::new(),
    };
    // every word starts with the empty key
    let keys = vec![0usize; code.len()];
    search.grow(0, &keys);
    let value = search.best.len() as i64;
    (value, Some(CoordSet::from_indices(&search.best)))
}

struct KmSearch<'a> {
    code: &'a Code,
    k: usize,
    best: Vec<usize>,
    stack: Vec<usize>,
}

impl KmSearch<'_> {
    /// `keys[w]` encodes word `w` restricted to `stack` in base `k`.
    fn grow(&mut self, start: usize, keys: &[usize]) {
        let n = self.code.length();
        if self.best.len() == n {
            return;
        }
        let d = self.stack.len();
        let need = match self.k.checked_pow(d as u32 + 1) {
            Some(x) if x <= self.code.len() => x,
            _ => return,
        };
        let base = need / self.k;
        for t in start..n {
            if d + (n - t) <= self.best.len() {
                return;
            }
            let next: Vec<usize> = self
                .code
                .iter()
                .zip(keys)
                .map(|(w, &key)| key + base * w[t] as usize)
                .collect();
            let mut seen = vec![false; need];
            let mut found = 0;
            for &key in &next {
                if !seen[key] {
                    seen[key] = true;
                    found += 1;
                }
            }
            if found == need {
                self.stack.push(t);
                if self.stack.len() > self.best.len() {
                    self.best = self.stack.clone();
                }
                self.grow(t + 1, &next);
                self.stack.pop();
            }
        }
    }
}

/// Largest `d` such that some pair `(i,j)` shatters some `d`-set; `-1` for the empty code.
pub fn bi_dimension(code: &Code) -> i64 {
    bi_dimension_with_witness(code).value
}

pub fn bi_dimension_with_witness(code: &Code) -> BiDimension {
    bi_search(code, None)
}

/// `bi_dimension(code) >= target`, stopping as soon as it is decided.
pub fn bi_dimension_at_least(code: &Code, target: usize) -> bool {
    bi_search(code, Some(target)).value >= target as i64
}

fn bi_search(code: &Code, target: Option<usize>) -> BiDimension {
    if code.is_empty() {
        return BiDimension {
            value: -1,
            witness: None,
        };
    }
    let n = code.length();
    let stop = target.unwrap_or(n).min(n);
    let mut best: Option<(SymbolPair, Vec<usize>)> = None;
    for pair in code.alphabet().pairs() {
        let best_len = best.as_ref().map_or(0, |b| b.1.len());
        if best_len >= stop {
            break;
        }
        let alive: Vec<(usize, usize)> = (0..code.len()).map(|w| (w, 0)).collect();
        let mut search = PatternSearch {
            code,
            best: Vec::new(),
            best_params: Vec::new(),
            stack: Vec::new(),
            params: Vec::new(),
            floor: best_len,
            stop,
        };
        search.grow(0, &alive, &|v, _| {
            if v == pair.j {
                Some(true)
            } else if v == pair.i {
                Some(false)
            } else {
                None
            }
        }, &[(0, 0)]);
        if search.best.len() > best_len {
            best = Some((pair, search.best));
        }
    }
    match best {
        Some((pair, d)) => BiDimension {
            value: d.len() as i64,
            witness: Some((pair, CoordSet::from_indices(&d))),
        },
        None => BiDimension {
            value: 0,
            witness: None,
        },
    }
}

/// G, P, GP or N dimension with the first witness found in lexicographic
/// order of (coordinates, `y`, `z`); `-1` for the empty code.
pub fn hl_dimension(code: &Code, kind: HlKind) -> HlDimension {
    hl_search(code, kind, None)
}

/// `hl_dimension(code, kind) >= target`, stopping as soon as it is decided.
pub fn hl_dimension_at_least(code: &Code, kind: HlKind, target: usize) -> bool {
    hl_search(code, kind, Some(target)).value >= target as i64
}

fn hl_search(code: &Code, kind: HlKind, target: Option<usize>) -> HlDimension {
    if code.is_empty() {
        return HlDimension {
            value: -1,
            witness: None,
        };
    }
    let n = code.length();
    let k = code.k();
    let mut params = Vec::new();
    for y in kind.y_range(k) {
        if kind == HlKind::N {
            for z in 0..y {
                params.push((y as Symbol, z as Symbol));
            }
        } else {
            params.push((y as Symbol, 0));
        }
    }
    let alive: Vec<(usize, usize)> = (0..code.len()).map(|w| (w, 0)).collect();
    let mut search = PatternSearch {
        code,
        best: Vec::new(),
        best_params: Vec::new(),
        stack: Vec::new(),
        params: Vec::new(),
        floor: 0,
        stop: target.unwrap_or(n).min(n),
    };
    search.grow(0, &alive, &|v, (y, z)| kind.classify(v, y, z), &params);
    let value = search.best.len() as i64;
    let y = search.best_params.iter().map(|p| p.0).collect();
    let z = (kind == HlKind::N).then(|| search.best_params.iter().map(|p| p.1).collect());
    HlDimension {
        value,
        witness: Some(WitnessVectors {
            coords: CoordSet::from_indices(&search.best),
            y,
            z,
        }),
    }
}

/// Checks a witness directly against the definition: every `I ⊆ D` is realized.
pub fn verify_hl_witness(code: &Code, kind: HlKind, witness: &WitnessVectors) -> bool {
    let d = witness.coords.len();
    if witness.y.len() != d || witness.coords.check_within(code.length()).is_err() || d >= 63 {
        return false;
    }
    let z = match (kind, &witness.z) {
        (HlKind::N, Some(z)) if z.len() == d && z.iter().zip(&witness.y).all(|(a, b)| a < b) => z.clone(),
        (HlKind::N, _) => return false,
        _ => vec![0; d],
    };
    let idx = witness.coords.indices();
    (0..1u64 << d).all(|inside| {
        code.iter().any(|w| {
            idx.iter().enumerate().all(|(b, &t)| {
                let want_in = inside >> b & 1 == 1;
                kind.classify(w[t], witness.y[b], z[b]) == Some(want_in)
            })
        })
    })
}

/// Depth-first growth of `D` for any two-way classification of symbols.
struct PatternSearch<'a> {
    code: &'a Code,
    best: Vec<usize>,
    best_params: Vec<(Symbol, Symbol)>,
    stack: Vec<usize>,
    params: Vec<(Symbol, Symbol)>,
    /// Only strictly larger witnesses are recorded.
    floor: usize,
    stop: usize,
}

impl PatternSearch<'_> {
    fn record_len(&self) -> usize {
        self.best.len().max(self.floor)
    }

    /// `alive` holds (word index, pattern mask over `stack`).
    fn grow<F>(&mut self, start: usize, alive: &[(usize, usize)], classify: &F, params: &[(Symbol, Symbol)])
    where
        F: Fn(Symbol, (Symbol, Symbol)) -> Option<bool>,
    {
        let n = self.code.length();
        let d = self.stack.len();
        if self.record_len() >= self.stop || d + 1 >= usize::BITS as usize - 1 {
            return;
        }
        let need = 1usize << (d + 1);
        if alive.len() < need {
            return;
        }
        let words = self.code.words();
        // `t` is a column index into each word, not an index into `words`
        #[allow(clippy::needless_range_loop)]
        for t in start..n {
            if d + (n - t) <= self.record_len() || self.record_len() >= self.stop {
                return;
            }
            for &p in params {
                let mut next = Vec::with_capacity(alive.len());
                for &(w, mask) in alive {
                    if let Some(bit) = classify(words[w][t], p) {
                        next.push((w, mask | (usize::from(bit) << d)));
                    }
                }
                if next.len() < need {
                    continue;
                }
                let mut seen = vec![false; need];
                let mut found = 0;
                for &(_, mask) in &next {
                    if !seen[mask] {
                        seen[mask] = true;
                        found += 1;
                    }
                }
                if found < need {
                    continue;
                }
                self.stack.push(t);
                self.params.push(p);
                if self.stack.len() > self.record_len() {
                    self.best = self.stack.clone();
                    self.best_params = self.params.clone();
                }
                self.grow(t + 1, &next, classify, params);
                self.stack.pop();
                self.params.pop();
                if self.record_len() >= self.stop {
                    return;
                }
            }
        }
    }
}

/// Dimension of `kind`, without witness.
pub fn dimension(code: &Code, kind: DimensionKind) -> i64 {
    match kind {
        DimensionKind::Km => km_dimension(code),
        DimensionKind::Bi => bi_dimension(code),
        other => hl_dimension(code, other.as_hl().expect("witness-vector kind")).value,
    }
}

/// `dimension(code, kind) >= target`, with early exit.
pub fn dimension_at_least(code: &Code, kind: DimensionKind, target: usize) -> bool {
    if code.is_empty() {
        return false;
    }
    match kind {
        DimensionKind::Km => km_dimension(code) >= target as i64,
        DimensionKind::Bi => bi_dimension_at_least(code, target),
        other => hl_dimension_at_least(code, other.as_hl().expect("witness-vector kind"), target),
    }
}

/// Computes all six dimensions and checks the chain before returning.
///
/// Panics if the chain `KM <= BI <= N <= GP <= min(G, P)` fails, which can
/// only mean a bug in one of the searches. A one-symbol alphabet is exempt:
/// there KM-shattering is automatic while no pair exists for BI.
pub fn dimension_report(code: &Code) -> DimensionReport {
    let report = DimensionReport {
        km: km_dimension(code),
        bi: bi_dimension(code),
        n: hl_dimension(code, HlKind::N).value,
        gp: hl_dimension(code, HlKind::Gp).value,
        g: hl_dimension(code, HlKind::G).value,
        p: hl_dimension(code, HlKind::P).value,
    };
    assert!(
        code.k() < 2 || report.chain_holds(),
        "dimension chain violated: {report:?} for code of length {} with {} words",
        code.length(),
        code.len()
    );
    report
}

/// Refuses codes beyond the documented practical envelope for `kind`.
pub fn check_envelope(code: &Code, kind: DimensionKind) -> Result<()> {
    let limit = match kind {
        DimensionKind::Km | DimensionKind::Bi => BI_SOFT_LIMIT,
        _ => HL_SOFT_LIMIT,
    };
    if code.length() > limit {
        Err(Error::Envelope(format!(
            "{kind}-dimension of a length-{} code exceeds the soft limit n <= {limit}",
            code.length()
        )))
    } else {
        Ok(())
    }
}

/// Every `(pair, S)` with `|S| = s_{i,j}` that the code `(i,j)`-shatters, in
/// pair order and then lexicographic order of `S`.
pub fn enumerate_violations(code: &Code, svec: &SVector) -> Result<Vec<(SymbolPair, CoordSet)>> {
    if svec.alphabet() != code.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: code.k(),
            found: svec.alphabet().size(),
        });
    }
    let mut out = Vec::new();
    for (pair, s) in svec.iter() {
        if s > code.length() {
            continue;
        }
        let mut stack = Vec::with_capacity(s);
        collect_shattered(code, pair, s, 0, &mut stack, &mut out);
    }
    Ok(out)
}

fn collect_shattered(
    code: &Code,
    pair: SymbolPair,
    size: usize,
    start: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<(SymbolPair, CoordSet)>,
) {
    if stack.len() == size {
        out.push((pair, CoordSet::from_indices(stack)));
        return;
    }
    let n = code.length();
    for t in start..n {
        if stack.len() + (n - t) < size {
            return;
        }
        stack.push(t);
        if ij_shattered_at(code, stack, pair) {
            collect_shattered(code, pair, size, t + 1, stack, out);
        }
        stack.pop();
    }
}

/// `enumerate_violations(code, svec).is_empty()`, without collecting.
pub fn satisfies(code: &Code, svec: &SVector) -> Result<bool> {
    if svec.alphabet() != code.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: code.k(),
            found: svec.alphabet().size(),
        });
    }
    Ok(svec.iter().all(|(pair, s)| {
        s > code.length() || {
            let mut stack = Vec::with_capacity(s);
            !any_shattered(code, pair, s, 0, &mut stack)
        }
    }))
}

fn any_shattered(code: &Code, pair: SymbolPair, size: usize, start: usize, stack: &mut Vec<usize>) -> bool {
    if stack.len() == size {
        return true;
    }
    let n = code.length();
    for t in start..n {
        if stack.len() + (n - t) < size {
            return false;
        }
        stack.push(t);
        let hit = ij_shattered_at(code, stack, pair) && any_shattered(code, pair, size, t + 1, stack);
        stack.pop();
        if hit {
            return true;
        }
    }
    false
}
