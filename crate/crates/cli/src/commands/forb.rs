use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use anyhow::{bail, Context as _, Result};
use ijshatter::configurations::shatter_family;
use ijshatter::search::{forb_search_config, forb_search_shatter};
use ijshatter::SearchOptions;
use serde_json::json;

use crate::input::{alphabet, read_matrix, svec};
use crate::report::Outcome;
use crate::Context;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Forbid (i,j)-shattered sets of these sizes.
    #[arg(long)]
    pub svec: Option<String>,
    /// Forbidden configuration files.
    #[arg(long, num_args = 1..)]
    pub config: Vec<PathBuf>,
    /// Stop after this many search nodes; the answer is then not proven optimal.
    #[arg(long)]
    pub limit: Option<u64>,
    /// Raise the k^n candidate envelope.
    #[arg(long)]
    pub max_candidates: Option<usize>,
    /// Where to write the witness code.
    #[arg(long, default_value = "forb_witness.txt")]
    pub witness: PathBuf,
}

pub fn run(args: &Args, ctx: &Context) -> Result<Outcome> {
    let a = alphabet(args.k)?;
    let cancel = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&cancel);
    // a second handler registration fails harmlessly, e.g. under tests
    let _ = ctrlc::set_handler(move || flag.store(true, Ordering::Relaxed));
    let mut options = SearchOptions::default().with_threads(ctx.threads).with_cancel(cancel);
    if let Some(limit) = args.limit {
        options = options.with_node_limit(limit);
    }
    if let Some(max) = args.max_candidates {
        options = options.with_max_candidates(max);
    }
    let s = args.svec.as_deref().map(|t| svec(args.k, t)).transpose()?;
    let result = match (&s, args.config.is_empty()) {
        (None, true) => bail!("give --svec, --config, or both"),
        (Some(s), true) => forb_search_shatter(args.n, s, &options)?,
        (_, false) => {
            let mut family = Vec::new();
            for path in &args.config {
                family.push(read_matrix(path)?);
            }
            if let Some(s) = &s {
                family.extend(shatter_family(s));
            }
            forb_search_config(args.n, a, &family, &options)?
        }
    };
    fs::write(&args.witness, result.witness.serialize())
        .with_context(|| format!("writing {}", args.witness.display()))?;
    let text = format!(
        "{}{}\nwitness in {}\n{} nodes\n",
        result.value,
        if result.optimal { "" } else { " (search stopped early; lower bound only)" },
        args.witness.display(),
        result.nodes_explored
    );
    let results = json!({
        "value": result.value,
        "witness_file": args.witness.display().to_string(),
        "nodes": result.nodes_explored,
        "optimal": result.optimal,
    });
    Ok(Outcome::new(results, text))
}
