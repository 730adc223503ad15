use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use ijshatter::shattering::{enumerate_violations, is_ij_shattered, is_km_shattered};
use serde_json::json;

use crate::input::{coords, pair, read_code, svec};
use crate::report::Outcome;
use crate::Context;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Code file.
    pub code: PathBuf,
    /// 1-based coordinates, e.g. 1,3.
    #[arg(long)]
    pub coords: Option<String>,
    /// Symbol pair i,j; without it the test is full (KM) shattering.
    #[arg(long)]
    pub pair: Option<String>,
    /// List every shattered set forbidden by this s-vector instead.
    #[arg(long, conflicts_with_all = ["coords", "pair"])]
    pub svec: Option<String>,
}

pub fn run(args: &Args, _ctx: &Context) -> Result<Outcome> {
    let code = read_code(&args.code)?;
    if let Some(text) = &args.svec {
        let s = svec(code.k(), text)?;
        let violations = enumerate_violations(&code, &s)?;
        let mut out = String::new();
        for (p, c) in &violations {
            let _ = writeln!(out, "{p} {:?}", c.coords());
        }
        let _ = writeln!(out, "{} violations", violations.len());
        let list: Vec<_> = violations
            .iter()
            .map(|(p, c)| json!({"pair": [p.i, p.j], "coords": c.coords()}))
            .collect();
        return Ok(Outcome::new(json!({"violations": list}), out).holds(violations.is_empty()));
    }
    let Some(coord_text) = &args.coords else {
        bail!("give --coords (with optional --pair) or --svec");
    };
    let set = coords(coord_text, code.length())?;
    let (shattered, how) = match &args.pair {
        Some(p) => {
            let p = pair(p, code.alphabet())?;
            (is_ij_shattered(&code, &set, p)?, json!([p.i, p.j]))
        }
        None => (is_km_shattered(&code, &set)?, json!(null)),
    };
    let results = json!({"coords": set.coords(), "pair": how, "shattered": shattered});
    let text = format!("{}\n", if shattered { "shattered" } else { "not shattered" });
    Ok(Outcome::new(results, text).holds(shattered))
}
