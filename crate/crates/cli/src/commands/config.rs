use std::path::PathBuf;

use anyhow::Result;
use clap::Subcommand;
use ijshatter::configurations::config_contains;
use serde_json::json;

use crate::input::{one_based, read_matrix};
use crate::report::Outcome;
use crate::Context;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(subcommand)]
    pub action: Action,
}

#[derive(Subcommand, Debug)]
pub enum Action {
    /// Does A contain F as a configuration? Exit 1 when it does not.
    Contains {
        /// Host matrix A.
        a: PathBuf,
        /// Pattern matrix F.
        f: PathBuf,
    },
}

pub fn run(args: &Args, _ctx: &Context) -> Result<Outcome> {
    match &args.action {
        Action::Contains { a, f } => {
            let host = read_matrix(a)?;
            let pattern = read_matrix(f)?;
            let witness = config_contains(&host, &pattern);
            // rows and columns are reported 1-based, like coordinates
            let results = json!({
                "contains": witness.is_some(),
                "witness": witness.as_ref().map(|w| json!({
                    "rows": one_based(&w.row_indices),
                    "cols": one_based(&w.col_indices),
                    "row_map": one_based(&w.row_map),
                    "col_map": one_based(&w.col_map),
                })),
            });
            let text = match &witness {
                Some(w) => format!(
                    "contained: rows {:?} cols {:?}\n",
                    one_based(&w.row_map),
                    one_based(&w.col_map)
                ),
                None => "not contained\n".to_string(),
            };
            Ok(Outcome::new(results, text).holds(witness.is_some()))
        }
    }
}
