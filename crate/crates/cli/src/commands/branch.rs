use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use ijshatter::branching::{branch_certificates, branch_decompose, branch_decompose_with_words, check_branch_bound};
use serde_json::json;

use crate::input::{read_code, svec};
use crate::report::Outcome;
use crate::Context;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Code file.
    pub code: PathBuf,
    /// Print the whole tree, one node per line.
    #[arg(long)]
    pub trace: bool,
    /// Also check every leaf's branching counts against this s-vector.
    #[arg(long)]
    pub svec: Option<String>,
}

pub fn run(args: &Args, _ctx: &Context) -> Result<Outcome> {
    let code = read_code(&args.code)?;
    let tree = if args.trace {
        branch_decompose_with_words(&code)
    } else {
        branch_decompose(&code)
    };
    let certificates = branch_certificates(&tree, &code);
    let bound = match &args.svec {
        Some(text) => Some(check_branch_bound(&code, &svec(code.k(), text)?)?),
        None => None,
    };

    let mut text = String::new();
    if args.trace {
        text.push_str(&tree.trace());
    }
    let _ = writeln!(text, "leaves {} nodes {}", tree.leaf_count(), tree.nodes().len());
    for c in &certificates {
        let _ = writeln!(text, "certificate {} {:?}", c.pair, c.coords.coords());
    }
    if let Some(holds) = bound {
        let _ = writeln!(text, "branch bound {}", if holds { "holds" } else { "fails" });
    }
    let certs: Vec<_> = certificates
        .iter()
        .map(|c| json!({"pair": [c.pair.i, c.pair.j], "coords": c.coords.coords()}))
        .collect();
    let profiles: Vec<_> = tree
        .profile_counts()
        .into_iter()
        .map(|(alpha, count)| json!({"profile": alpha, "leaves": count}))
        .collect();
    let results = json!({
        "leaves": tree.leaf_count(),
        "nodes": tree.nodes().len(),
        "identity_holds": tree.identity_failures().is_empty(),
        "certificates": certs,
        "profiles": profiles,
        "branch_bound": bound,
        "trace": args.trace.then(|| tree.trace()),
    });
    Ok(Outcome::new(results, text).holds(bound.unwrap_or(true)))
}
