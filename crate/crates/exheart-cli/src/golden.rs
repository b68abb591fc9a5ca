//! Workspaces shipped with the binary and run by `exheart paper-examples`.

use crate::run::{Options, Report, Runner};
use crate::workspace::{parse, Diagnostic};

pub const EXAMPLES: &[(&str, &str)] = &[
    ("a2_example", include_str!("../workspaces/a2_example.exh")),
    ("dual_numbers", include_str!("../workspaces/dual_numbers.exh")),
];

/// Parses `text` and runs every query in it, in order.
pub fn run_text(text: &str, opts: Options) -> Result<Vec<Report>, Diagnostic> {
    let ws = parse(text, None)?;
    let mut runner = Runner::new(&ws, opts);
    Ok(ws.queries.iter().map(|q| runner.run(q)).collect())
}

pub fn run_examples(opts: Options) -> Vec<(&'static str, Vec<Report>)> {
    EXAMPLES
        .iter()
        .map(|(name, text)| (*name, run_text(text, opts).expect("bundled workspace parses")))
        .collect()
}
