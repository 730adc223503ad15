use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use ijshatter::shattering::{
    bi_dimension_with_witness, check_envelope, dimension_report, hl_dimension, km_dimension_with_witness,
};
use ijshatter::{DimensionKind, HlKind};
use serde_json::json;

use crate::input::read_code;
use crate::report::Outcome;
use crate::Context;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Code file.
    pub code: PathBuf,
}

pub fn run(args: &Args, _ctx: &Context) -> Result<Outcome> {
    let code = read_code(&args.code)?;
    for kind in DimensionKind::ALL {
        check_envelope(&code, kind)?;
    }
    let report = dimension_report(&code);
    let (_, km_witness) = km_dimension_with_witness(&code);
    let bi = bi_dimension_with_witness(&code);
    let hl: Vec<_> = [HlKind::N, HlKind::Gp, HlKind::G, HlKind::P]
        .into_iter()
        .map(|kind| (kind, hl_dimension(&code, kind)))
        .collect();

    let mut text = String::new();
    for kind in DimensionKind::ALL {
        let _ = writeln!(text, "{kind:<2} {}", report.get(kind));
    }
    let mut witnesses = json!({
        "KM": km_witness.map(|c| c.coords().to_vec()),
        "BI": bi.witness.as_ref().map(|(p, c)| json!({"pair": [p.i, p.j], "coords": c.coords()})),
    });
    for (kind, dim) in &hl {
        witnesses[kind.dimension_kind().name()] = json!(dim.witness.as_ref().map(|w| json!({
            "coords": w.coords.coords(),
            "y": w.y,
            "z": w.z,
        })));
    }
    let results = json!({
        "words": code.len(),
        "length": code.length(),
        "k": code.k(),
        "dimensions": report,
        "witnesses": witnesses,
        "chain_holds": report.chain_holds(),
    });
    Ok(Outcome::new(results, text))
}
