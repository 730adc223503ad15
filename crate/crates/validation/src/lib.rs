//! Seeded instance generators shared by the acceptance suite.
//!
//! Every randomized check takes its seed from `IJSHATTER_SEED` (decimal),
//! falling back to a fixed default so runs are reproducible.

use ijshatter::{Alphabet, Code, Codeword};
use rand::Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn seed() -> u64 {
    std::env::var("IJSHATTER_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn alphabet(k: usize) -> Alphabet {
    Alphabet::new(k).expect("alphabet size in range")
}

/// Up to `max_size` uniform words; duplicates are merged.
pub fn random_code<R: Rng>(rng: &mut R, k: usize, n: usize, max_size: usize) -> Code {
    let target = rng.gen_range(0..=max_size);
    let words = (0..target)
        .map(|_| Codeword::from((0..n).map(|_| rng.gen_range(0..k) as u8).collect::<Vec<_>>()))
        .collect();
    Code::from_words_dedup(alphabet(k), n, words).expect("words fit the alphabet")
}

/// Code from digit strings such as `"012"`.
pub fn code(k: usize, words: &[&str]) -> Code {
    let n = words.first().map_or(0, |w| w.len());
    let words = words
        .iter()
        .map(|w| Codeword::from(w.bytes().map(|b| b - b'0').collect::<Vec<_>>()))
        .collect();
    Code::new(alphabet(k), n, words).expect("distinct words")
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, r: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if current.len() + (n - i) < r {
                break;
            }
            current.push(i);
            rec(n, r, i + 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, 0, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Every vector of length `len` with entries in `lo..=hi`, lexicographically.
pub fn all_vectors(len: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}
