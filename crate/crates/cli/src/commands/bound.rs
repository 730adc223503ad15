use std::fmt::Write as _;

use anyhow::{bail, Context as _, Result};
use clap::ValueEnum;
use ijshatter::bounds::{
    clique_forb1, fp_bound, hl_bound, hl_bound_label, hr_hamming_bound, hr_uniform_bound, hypothesis_warnings,
    km_bound, multinomial_bound, partition_bound, sauer_bound, Formula,
};
use ijshatter::HlKind;
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::input::svec;
use crate::report::Outcome;
use crate::Context;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Which {
    #[value(alias = "eq1")]
    Sauer,
    #[value(alias = "eq2")]
    Km,
    Fp,
    HrUniform,
    HrHamming,
    #[value(alias = "eq4")]
    Multinomial,
    Hl,
    Clique,
    #[value(alias = "egyesek")]
    Partition,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    G,
    P,
    Gp,
    N,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated thresholds in pair order (0,1),(0,2),..
    #[arg(long)]
    pub svec: Option<String>,
    /// Dimension for `hl`.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
}

fn need(value: Option<usize>, flag: &str) -> Result<usize> {
    value.with_context(|| format!("this bound needs --{flag}"))
}

pub fn run(args: &Args, _ctx: &Context) -> Result<Outcome> {
    let n = || need(args.n, "n");
    let k = || need(args.k, "k");
    let s = || need(args.s, "s");
    let d = || need(args.d, "d");
    let sv = || -> Result<_> {
        let Some(text) = &args.svec else { bail!("this bound needs --svec") };
        svec(k()?, text)
    };
    let mut extra = Value::Null;
    let mut label = "bound";
    let (value, warnings): (BigUint, Vec<String>) = match args.which {
        Which::Sauer => (sauer_bound(n()?, s()?), hypothesis_warnings(Formula::Sauer, n()?, 2, s()?, 0)),
        Which::Km => (
            km_bound(n()?, k()?, s()?),
            hypothesis_warnings(Formula::KarpovskyMilman, n()?, k()?, s()?, 0),
        ),
        Which::Fp => (fp_bound(n()?, s()?), hypothesis_warnings(Formula::UniformSets, n()?, 2, s()?, d()?)),
        Which::HrUniform => (
            hr_uniform_bound(n()?, k()?, s()?, d()?),
            hypothesis_warnings(Formula::ConstantWeight, n()?, k()?, s()?, d()?),
        ),
        Which::HrHamming => (
            hr_hamming_bound(n()?, k()?, s()?, d()?)?,
            hypothesis_warnings(Formula::ConstantSupport, n()?, k()?, s()?, d()?),
        ),
        Which::Multinomial => (multinomial_bound(n()?, &sv()?), Vec::new()),
        Which::Hl => {
            let kind = match args.kind.context("hl needs --kind")? {
                Kind::G => HlKind::G,
                Kind::P => HlKind::P,
                Kind::Gp => HlKind::Gp,
                Kind::N => HlKind::N,
            };
            label = hl_bound_label(kind);
            (hl_bound(n()?, k()?, s()?, kind), Vec::new())
        }
        Which::Clique => {
            let (value, clique) = clique_forb1(&sv()?);
            extra = json!({"clique": clique});
            label = "exact";
            (value, Vec::new())
        }
        Which::Partition => {
            let (value, composition) = partition_bound(n()?, &sv()?)?;
            extra = json!({"composition": composition});
            label = "exact";
            (value, Vec::new())
        }
    };
    let mut text = format!("{value}\n");
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let results = json!({
        "which": args.which.to_possible_value().expect("no skipped variants").get_name(),
        "value": value.to_string(),
        "label": label,
        "warnings": warnings,
        "details": extra,
    });
    Ok(Outcome::new(results, text))
}
