//! Exact evaluators for the closed-form bounds on code sizes.
//!
//! Everything is computed in `BigUint`. Hypotheses of the uniform and
//! constant-support bounds are reported through the `*_warnings` helpers
//! rather than refused, so the evaluators also work as plain calculators.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::code::{SVector, SymbolPair};
use crate::constructions::Composition;
use crate::error::{Error, Result};
use crate::shattering::HlKind;

pub type BigCount = BigUint;

/// `n choose r`, zero when `r > n`.
pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for t in 0..r {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

fn pow(base: usize, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

/// `sum_{i<s} C(n, i)`.
pub fn sauer_bound(n: usize, s: usize) -> BigUint {
    (0..s.min(n + 1)).map(|i| binomial(n, i)).sum()
}

/// `sum_{i<s} (k-1)^(n-i) C(n, i)`.
pub fn km_bound(n: usize, k: usize, s: usize) -> BigUint {
    (0..s.min(n + 1))
        .map(|i| pow(k.saturating_sub(1), n - i) * binomial(n, i))
        .sum()
}

/// `C(n, s-1)`, the bound for `d`-uniform set systems.
pub fn fp_bound(n: usize, s: usize) -> BigUint {
    match s {
        0 => BigUint::zero(),
        s => binomial(n, s - 1),
    }
}

/// `sum_{i<s} (k-1)^(n-i) (C(n,i) - C(n,i-1))` for codes of constant weight `d`.
///
/// Terms with `i > n` vanish. Outside the hypothesis `s - 1 <= n/2` the sum
/// can go negative; it is then clamped to zero (see [`hypothesis_warnings`]).
pub fn hr_uniform_bound(n: usize, k: usize, s: usize, _d: usize) -> BigUint {
    let mut total = BigInt::zero();
    for i in 0..s.min(n + 1) {
        let below = if i == 0 { BigUint::zero() } else { binomial(n, i - 1) };
        let diff = BigInt::from(binomial(n, i)) - BigInt::from(below);
        total += BigInt::from(pow(k.saturating_sub(1), n - i)) * diff;
    }
    if total.is_negative() {
        BigUint::zero()
    } else {
        total.to_biguint().expect("non-negative")
    }
}

/// `C(n, s-1) * sum_{i<=d} (k-2)^i C(n-s+1, i)` for codes of constant support size `d`.
pub fn hr_hamming_bound(n: usize, k: usize, s: usize, d: usize) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "support-size bound needs k >= 2, found k={k}"
        )));
    }
    if s == 0 || s > n + 1 {
        return Ok(BigUint::zero());
    }
    let rest = n - (s - 1);
    let sum: BigUint = (0..=d).map(|i| pow(k - 2, i) * binomial(rest, i)).sum();
    Ok(binomial(n, s - 1) * sum)
}

/// `n! / (prod a_t! * (n - sum a)!)`, zero when `sum a > n`.
pub fn multinomial(n: usize, parts: &[usize]) -> BigUint {
    let mut left = n;
    let mut acc = BigUint::one();
    for &a in parts {
        if a > left {
            return BigUint::zero();
        }
        acc *= binomial(left, a);
        left -= a;
    }
    acc
}

/// Sum of multinomial coefficients over all `0 <= a_{i,j} <= s_{i,j} - 1`.
pub fn multinomial_bound(n: usize, svec: &SVector) -> BigUint {
    let caps: Vec<usize> = svec.entries().iter().map(|s| s - 1).collect();
    let mut memo = HashMap::new();
    multinomial_sum(&caps, 0, n, &mut memo)
}

/// Sum over the remaining pairs with `left` positions still free.
fn multinomial_sum(
    caps: &[usize],
    idx: usize,
    left: usize,
    memo: &mut HashMap<(usize, usize), BigUint>,
) -> BigUint {
    if idx == caps.len() {
        return BigUint::one();
    }
    if let Some(v) = memo.get(&(idx, left)) {
        return v.clone();
    }
    let v: BigUint = (0..=caps[idx].min(left))
        .map(|a| binomial(left, a) * multinomial_sum(caps, idx + 1, left - a, memo))
        .sum();
    memo.insert((idx, left), v.clone());
    v
}

/// Maximum codes with a dimension of `kind` at most `s`: exact for G, P and
/// GP; only an upper bound for N.
pub fn hl_bound(n: usize, k: usize, s: usize, kind: HlKind) -> BigUint {
    let ratio = match kind {
        HlKind::N => k * k.saturating_sub(1) / 2,
        _ => k.saturating_sub(1),
    };
    (0..=s.min(n)).map(|i| binomial(n, i) * pow(ratio, i)).sum()
}

/// Whether [`hl_bound`] is the exact maximum or only a bound.
pub fn hl_bound_label(kind: HlKind) -> &'static str {
    match kind {
        HlKind::N => "bound",
        _ => "maximum",
    }
}

/// The largest code of length 1: a maximum clique of the graph on `(k)`
/// with edges `{i, j}` where `s_{i,j} > 1`. Returns the clique size and the
/// lexicographically first maximum clique.
pub fn clique_forb1(svec: &SVector) -> (BigUint, Vec<usize>) {
    let alphabet = svec.alphabet();
    let k = alphabet.size();
    let mut adj = vec![vec![false; k]; k];
    for (p, s) in svec.iter() {
        if s > 1 {
            adj[p.i as usize][p.j as usize] = true;
            adj[p.j as usize][p.i as usize] = true;
        }
    }
    let mut best = Vec::new();
    let mut clique = Vec::new();
    expand_clique(&adj, &mut clique, (0..k).collect(), &mut best);
    (BigUint::from(best.len()), best)
}

fn expand_clique(adj: &[Vec<bool>], clique: &mut Vec<usize>, cands: Vec<usize>, best: &mut Vec<usize>) {
    if cands.is_empty() {
        if clique.len() > best.len() {
            *best = clique.clone();
        }
        return;
    }
    for (idx, &v) in cands.iter().enumerate() {
        if clique.len() + cands.len() - idx <= best.len() {
            return;
        }
        let next: Vec<usize> = cands[idx + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
        clique.push(v);
        expand_clique(adj, clique, next, best);
        clique.pop();
    }
}

/// Checks that `s_{i,j} = 1` whenever `j < k - 1`.
pub fn check_partition_hypothesis(svec: &SVector) -> Result<()> {
    let k = svec.alphabet().size();
    if k < 2 {
        return Err(Error::Hypothesis(format!("needs k >= 2, found k={k}")));
    }
    for (p, s) in svec.iter() {
        if (p.j as usize) < k - 1 && s > 1 {
            return Err(Error::Hypothesis(format!(
                "s{} = {s}, but pairs not involving symbol {} must have threshold 1",
                p,
                k - 1
            )));
        }
    }
    Ok(())
}

/// Thresholds `s_{i,k-1}` for `i < k-1`.
fn shared_thresholds(svec: &SVector) -> Vec<usize> {
    let alphabet = svec.alphabet();
    let k = alphabet.size();
    (0..k - 1)
        .map(|i| svec.get(SymbolPair::new(i, k - 1, alphabet).expect("valid pair")))
        .collect()
}

/// Exact maximum for s-vectors whose only thresholds above 1 involve symbol
/// `k-1`: the best split of the `n` columns into `k-1` blocks, one per symbol
/// `i < k-1`, each block over `{i, k-1}`. Returns the value and the
/// lexicographically least maximizing composition.
pub fn partition_bound(n: usize, svec: &SVector) -> Result<(BigUint, Composition)> {
    check_partition_hypothesis(svec)?;
    let thresholds = shared_thresholds(svec);
    Ok(if svec.alphabet().size() <= 6 {
        partition_by_enumeration(n, &thresholds)
    } else {
        partition_by_dp(n, &thresholds)
    })
}

pub(crate) fn partition_by_enumeration(n: usize, thresholds: &[usize]) -> (BigUint, Composition) {
    let parts = thresholds.len();
    let mut best: Option<(BigUint, Vec<usize>)> = None;
    let mut current = vec![0; parts];
    enumerate_compositions(n, 0, &mut current, &mut |comp| {
        let value: BigUint = comp
            .iter()
            .zip(thresholds)
            .map(|(&ni, &s)| sauer_bound(ni, s))
            .product();
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, comp.to_vec()));
        }
    });
    let (value, parts) = best.expect("at least one composition");
    (value, Composition::new(parts))
}

/// Calls `visit` on every composition of `left` into the remaining parts, in
/// lexicographic order.
fn enumerate_compositions(left: usize, idx: usize, current: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if idx + 1 == current.len() {
        current[idx] = left;
        visit(current);
        return;
    }
    for a in 0..=left {
        current[idx] = a;
        enumerate_compositions(left - a, idx + 1, current, visit);
    }
}

pub(crate) fn partition_by_dp(n: usize, thresholds: &[usize]) -> (BigUint, Composition) {
    let parts = thresholds.len();
    // best[i][r]: largest product over parts i.. using exactly r columns
    let mut best = vec![vec![BigUint::zero(); n + 1]; parts];
    for (r, cell) in best[parts - 1].iter_mut().enumerate() {
        *cell = sauer_bound(r, thresholds[parts - 1]);
    }
    for i in (0..parts - 1).rev() {
        for r in 0..=n {
            best[i][r] = (0..=r)
                .map(|a| sauer_bound(a, thresholds[i]) * &best[i + 1][r - a])
                .max()
                .expect("nonempty range");
        }
    }
    let mut comp = Vec::with_capacity(parts);
    let mut left = n;
    for i in 0..parts - 1 {
        let a = (0..=left)
            .find(|&a| sauer_bound(a, thresholds[i]) * &best[i + 1][left - a] == best[i][left])
            .expect("maximizer exists");
        comp.push(a);
        left -= a;
    }
    comp.push(left);
    (best[0][n].clone(), Composition::new(comp))
}

/// Which closed form a query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// Binary codes without a shattered `s`-set.
    Sauer,
    /// `k`-ary codes without a fully shattered `s`-set.
    KarpovskyMilman,
    /// `d`-uniform set systems.
    UniformSets,
    /// Constant-weight `k`-ary codes.
    ConstantWeight,
    /// Constant-support-size `k`-ary codes.
    ConstantSupport,
    /// Sum of multinomials over the s-vector box.
    Multinomial,
    /// Dimension-bounded codes for G, P, GP or N.
    HausslerLong,
    /// Length-one codes.
    Clique,
    /// Best column partition under the ones hypothesis.
    Partition,
}

/// Human-readable notes for evaluations outside a formula's hypothesis.
pub fn hypothesis_warnings(formula: Formula, n: usize, k: usize, s: usize, d: usize) -> Vec<String> {
    let mut out = Vec::new();
    match formula {
        Formula::KarpovskyMilman if !(1..=n).contains(&s) => {
            out.push(format!("s={s} is outside 1..=n={n}"));
        }
        Formula::UniformSets => {
            if 2 * s > n {
                out.push(format!("s={s} exceeds n/2={}", n as f64 / 2.0));
            }
            if d > n {
                out.push(format!("d={d} exceeds n={n}"));
            }
        }
        Formula::ConstantWeight => {
            if d > k.saturating_sub(1) * n {
                out.push(format!("d={d} exceeds (k-1)n={}", k.saturating_sub(1) * n));
            }
            if 2 * s.saturating_sub(1) > n {
                out.push(format!("s-1={} exceeds n/2={}", s.saturating_sub(1), n as f64 / 2.0));
            }
        }
        Formula::ConstantSupport => {
            if d > n {
                out.push(format!("d={d} exceeds n={n}"));
            }
            if d + s > n + 1 {
                out.push(format!("d+s={} exceeds n+1={}", d + s, n + 1));
            }
        }
        _ => {}
    }
    out
}

/// `log(value)` for growth-trend checks, exact enough for any size.
pub fn ln(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 1000 {
        value.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 1000;
        let top = (value >> shift).to_f64().expect("finite");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Alphabet;

    fn a(k: usize) -> Alphabet {
        Alphabet::new(k).unwrap()
    }

    fn sv(k: usize, e: &[usize]) -> SVector {
        SVector::new(a(k), e.to_vec()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(3, 4), big(0));
        assert_eq!(binomial(20, 10), big(184_756));
        assert_eq!(binomial(1000, 2), big(499_500));
    }

    #[test]
    fn sauer_examples() {
        assert_eq!(sauer_bound(4, 2), big(5));
        assert_eq!(sauer_bound(4, 3), big(11));
        assert_eq!(sauer_bound(4, 9), big(16));
        assert_eq!(sauer_bound(0, 1), big(1));
    }

    #[test]
    fn km_examples() {
        assert_eq!(km_bound(2, 3, 1), big(4));
        assert_eq!(km_bound(1, 3, 1), big(2));
        for n in 0..=30 {
            for s in 0..=n {
                assert_eq!(km_bound(n, 2, s), sauer_bound(n, s));
            }
        }
    }

    #[test]
    fn fp_examples() {
        assert_eq!(fp_bound(6, 2), big(6));
        assert_eq!(fp_bound(6, 3), big(15));
        assert_eq!(fp_bound(9, 1), big(1));
    }

    #[test]
    fn hr_uniform_examples() {
        assert_eq!(hr_uniform_bound(4, 3, 2, 0), big(40));
        assert_eq!(hr_uniform_bound(5, 3, 1, 2), big(32));
        assert_eq!(hr_uniform_bound(5, 2, 1, 2), big(1));
    }

    #[test]
    fn hr_hamming_examples() {
        assert_eq!(hr_hamming_bound(3, 3, 1, 1).unwrap(), big(4));
        for d in 0..5 {
            assert_eq!(hr_hamming_bound(6, 2, 3, d).unwrap(), binomial(6, 2));
        }
        // boundary s = n + 1 - d
        assert_eq!(hr_hamming_bound(4, 3, 3, 2).unwrap(), binomial(4, 2) * big(1 + 2 + 1));
        assert!(hypothesis_warnings(Formula::ConstantSupport, 4, 3, 3, 2).is_empty());
        assert!(hr_hamming_bound(4, 1, 1, 0).is_err());
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial_bound(7, &sv(3, &[1, 1, 1])), big(1));
        assert_eq!(multinomial_bound(3, &sv(3, &[2, 2, 2])), big(34));
        assert_eq!(multinomial_bound(1, &sv(3, &[2, 2, 2])), big(4));
        assert_eq!(multinomial_bound(2, &sv(3, &[2, 2, 2])), big(13));
        for n in 0..12 {
            for s in 1..6 {
                assert_eq!(multinomial_bound(n, &sv(2, &[s])), sauer_bound(n, s));
            }
        }
        assert_eq!(multinomial(4, &[1, 1]), big(12));
        assert_eq!(multinomial(2, &[2, 1]), big(0));
    }

    #[test]
    fn hl_examples() {
        assert_eq!(hl_bound(2, 3, 1, HlKind::G), big(5));
        for kind in [HlKind::G, HlKind::P, HlKind::Gp, HlKind::N] {
            assert_eq!(hl_bound(5, 4, 0, kind), big(1));
            for s in 0..5 {
                assert_eq!(hl_bound(6, 2, s, kind), sauer_bound(6, s + 1));
            }
        }
        assert_eq!(hl_bound_label(HlKind::N), "bound");
        assert_eq!(hl_bound_label(HlKind::Gp), "maximum");
    }

    #[test]
    fn clique_examples() {
        assert_eq!(clique_forb1(&sv(3, &[2, 2, 2])).0, big(3));
        let (w, c) = clique_forb1(&sv(3, &[2, 1, 1]));
        assert_eq!((w, c), (big(2), vec![0, 1]));
        assert_eq!(clique_forb1(&sv(4, &[1; 6])).0, big(1));
        assert_eq!(clique_forb1(&sv(1, &[])).0, big(1));
    }

    #[test]
    fn partition_examples() {
        let (v, comp) = partition_bound(2, &sv(3, &[1, 2, 2])).unwrap();
        assert_eq!(v, big(4));
        assert_eq!(comp.parts(), &[1, 1]);
        for n in 0..8 {
            for s in 1..5 {
                assert_eq!(partition_bound(n, &sv(2, &[s])).unwrap().0, sauer_bound(n, s));
            }
        }
        assert_eq!(partition_bound(0, &sv(3, &[1, 3, 2])).unwrap().0, big(1));
        assert!(matches!(
            partition_bound(2, &sv(3, &[2, 2, 2])),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn partition_paths_agree() {
        let cases: &[&[usize]] = &[&[2], &[3, 1], &[2, 2, 2], &[1, 4, 2, 3], &[3, 3, 1, 2, 2]];
        for th in cases {
            for n in 0..=8 {
                assert_eq!(partition_by_enumeration(n, th), partition_by_dp(n, th), "{th:?} n={n}");
            }
        }
    }

    #[test]
    fn large_alphabet_uses_dp() {
        let k = 8;
        let mut e = vec![1; a(k).pair_count()];
        for i in 0..k - 1 {
            let p = SymbolPair::new(i, k - 1, a(k)).unwrap();
            e[p.index(a(k))] = 2;
        }
        let (v, comp) = partition_bound(7, &sv(k, &e)).unwrap();
        // seven blocks of one column, each contributing 2
        assert_eq!(v, big(128));
        assert_eq!(comp.parts(), &[1; 7]);
    }

    #[test]
    fn warnings() {
        assert!(hypothesis_warnings(Formula::UniformSets, 6, 2, 3, 2).is_empty());
        assert_eq!(hypothesis_warnings(Formula::UniformSets, 6, 2, 4, 2).len(), 1);
        assert_eq!(hypothesis_warnings(Formula::ConstantWeight, 4, 3, 4, 9).len(), 2);
        assert!(hypothesis_warnings(Formula::Multinomial, 1, 1, 1, 1).is_empty());
    }

    #[test]
    fn ln_of_huge_values() {
        let v = pow(3, 2000);
        assert!((ln(&v) - 2000.0 * 3f64.ln()).abs() < 1e-6);
        assert!((ln(&big(48)) - 48f64.ln()).abs() < 1e-12);
    }
}
