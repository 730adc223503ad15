use std::fs;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use ijshatter::{Alphabet, Code, ConfigMatrix, CoordSet, SVector, SymbolPair};

pub fn read_code(path: &Path) -> Result<Code> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Code::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_matrix(path: &Path) -> Result<ConfigMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ConfigMatrix::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn alphabet(k: usize) -> Result<Alphabet> {
    Ok(Alphabet::new(k)?)
}

pub fn svec(k: usize, text: &str) -> Result<SVector> {
    Ok(SVector::parse(alphabet(k)?, text)?)
}

fn numbers(text: &str) -> Result<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad number {t:?} in {text:?}")))
        .collect()
}

/// `"i,j"`.
pub fn pair(text: &str, alphabet: Alphabet) -> Result<SymbolPair> {
    match numbers(text)?[..] {
        [i, j] => Ok(SymbolPair::new(i, j, alphabet)?),
        _ => bail!("expected a pair i,j, found {text:?}"),
    }
}

/// 1-based coordinates, `"1,3"`.
pub fn coords(text: &str, n: usize) -> Result<CoordSet> {
    Ok(CoordSet::new(numbers(text)?, n)?)
}

/// 0-based library indices shown 1-based.
pub fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}
