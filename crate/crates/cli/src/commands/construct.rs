use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context as _, Result};
use clap::ValueEnum;
use ijshatter::constructions::{full_pair_cube, lower_bound_code, partition_construct, product_construct, sauer_extremal};
use serde_json::json;

use crate::input::{alphabet, pair, read_matrix, svec};
use crate::report::Outcome;
use crate::Context;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    /// Binary down-set of all sets smaller than s.
    Sauer,
    /// Side-by-side product of one binary block per pair.
    Product,
    /// Product of Sauer blocks, one per pair.
    Lower,
    /// Column-partition construction.
    #[value(alias = "egyesek")]
    Partition,
    /// All words over one symbol pair.
    Paircube,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub svec: Option<String>,
    /// Symbol pair i,j for `paircube`.
    #[arg(long)]
    pub pair: Option<String>,
    /// `i,j=FILE`, one binary block per pair, for `product`.
    #[arg(long = "block")]
    pub blocks: Vec<String>,
    /// Write the code here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &Args, _ctx: &Context) -> Result<Outcome> {
    let n = || args.n.context("this construction needs --n");
    let k = || args.k.context("this construction needs --k");
    let sv = || -> Result<_> {
        let Some(text) = &args.svec else { bail!("this construction needs --svec") };
        svec(k()?, text)
    };
    let code = match args.kind {
        Kind::Sauer => sauer_extremal(n()?, args.s.context("sauer needs --s")?),
        Kind::Lower => lower_bound_code(n()?, &sv()?),
        Kind::Partition => partition_construct(n()?, &sv()?)?,
        Kind::Paircube => {
            let a = alphabet(k()?)?;
            let p = pair(args.pair.as_deref().context("paircube needs --pair")?, a)?;
            full_pair_cube(n()?, p, a)?
        }
        Kind::Product => {
            let a = alphabet(k()?)?;
            let mut blocks = BTreeMap::new();
            for spec in &args.blocks {
                let (p, file) = spec.split_once('=').with_context(|| format!("expected i,j=FILE, found {spec:?}"))?;
                blocks.insert(pair(p, a)?, read_matrix(file.as_ref())?);
            }
            product_construct(a, &blocks)?
        }
    };
    let serialized = code.serialize();
    let mut text = String::new();
    let file = match &args.out {
        Some(path) => {
            fs::write(path, &serialized).with_context(|| format!("writing {}", path.display()))?;
            text.push_str(&format!("{} words written to {}\n", code.len(), path.display()));
            Some(path.display().to_string())
        }
        None => {
            text.push_str(&serialized);
            None
        }
    };
    let results = json!({
        "kind": args.kind.to_possible_value().expect("no skipped variants").get_name(),
        "words": code.len(),
        "length": code.length(),
        "k": code.k(),
        "code": serialized,
        "file": file,
    });
    Ok(Outcome::new(results, text))
}
