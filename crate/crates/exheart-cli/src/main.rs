use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use exheart::linalg::FieldSpec;
use exheart_cli::golden::run_examples;
use exheart_cli::run::{exit_code, render_json, render_text, Options, Report, Runner};
use exheart_cli::workspace::{parse, parse_field, Query};

#[derive(Parser)]
#[command(name = "exheart", version, about = "Acyclicity, Ext-resolutions and hearts for subcategories of quiver representations")]
struct Cli {
    /// `q` or `fp:<p>`; overrides the workspace's [field] section.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Multiplicity bound for exhaustive scans.
    #[arg(long, global = true, default_value_t = 2)]
    bound: usize,
    /// Degree window `lo:hi` for heart enumeration.
    #[arg(long, global = true, value_parser = parse_window, default_value = "-3:3", allow_hyphen_values = true)]
    window: (i32, i32),
    /// Depth cap for resolutions.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarize the workspace, or one subcategory.
    Check { workspace: PathBuf, subcat: Option<String> },
    /// Per-degree acyclicity table of a complex.
    Classify { workspace: PathBuf, complex: String, subcat: Option<String> },
    /// Certify a complex as an Ext-resolution, or resolve the functor presented by a map.
    Resolve { workspace: PathBuf, target: String, subcat: String },
    /// Values, effaceability and completion membership of the functor presented by a map.
    Functor { workspace: PathBuf, map: String, subcat: String },
    /// `compute <E> <LHb|RHb|LH<n>>` or `member <complex> <E> <heart>`.
    Heart {
        workspace: PathBuf,
        #[arg(num_args = 2..=3, required = true)]
        args: Vec<String>,
    },
    /// Verify the t-pairs and hearts of hearts on the enumerated window.
    Tpair { workspace: PathBuf, subcat: String },
    /// Scan monos and epis between small objects.
    Maxneg { workspace: PathBuf, subcat: String },
    /// Compare the three characterizing conditions.
    Characterize { workspace: PathBuf, subcat: String },
    /// Compare the left heart with the resolving completion.
    Crosscheck { workspace: PathBuf, subcat: String },
    /// Run the bundled example workspaces.
    PaperExamples,
    /// Run every query listed in a workspace.
    Run { workspace: PathBuf },
}

fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i32 = a.parse().map_err(|_| format!("bad bound `{a}`"))?;
    let hi: i32 = b.parse().map_err(|_| format!("bad bound `{b}`"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn words(verb: &str, rest: &[&str]) -> Vec<String> {
    std::iter::once(verb).chain(rest.iter().copied()).map(String::from).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options { bound: cli.bound, window: cli.window, depth: cli.depth };
    let emit = |reports: &[Report]| match cli.format {
        Format::Text => print!("{}", render_text(reports)),
        Format::Json => print!("{}", render_json(reports)),
    };
    let (path, query) = match &cli.cmd {
        Cmd::PaperExamples => {
            let mut all = Vec::new();
            for (name, reports) in run_examples(opts) {
                if let Format::Text = cli.format {
                    println!("== {name}");
                    emit(&reports);
                }
                all.extend(reports);
            }
            if let Format::Json = cli.format {
                emit(&all);
            }
            return ExitCode::from(exit_code(&all) as u8);
        }
        Cmd::Run { workspace } => (workspace, None),
        Cmd::Check { workspace, subcat } => (workspace, Some(words("check", &subcat.iter().map(String::as_str).collect::<Vec<_>>()))),
        Cmd::Classify { workspace, complex, subcat } => {
            let mut w = words("classify", &[complex]);
            w.extend(subcat.iter().cloned());
            (workspace, Some(w))
        }
        Cmd::Resolve { workspace, target, subcat } => (workspace, Some(words("resolve", &[target, subcat]))),
        Cmd::Functor { workspace, map, subcat } => (workspace, Some(words("functor", &[map, subcat]))),
        Cmd::Heart { workspace, args } => (workspace, Some(words("heart", &args.iter().map(String::as_str).collect::<Vec<_>>()))),
        Cmd::Tpair { workspace, subcat } => (workspace, Some(words("tpair", &[subcat]))),
        Cmd::Maxneg { workspace, subcat } => (workspace, Some(words("maxneg", &[subcat]))),
        Cmd::Characterize { workspace, subcat } => (workspace, Some(words("characterize", &[subcat]))),
        Cmd::Crosscheck { workspace, subcat } => (workspace, Some(words("crosscheck", &[subcat]))),
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(1);
        }
    };
    let ws = match parse(&text, cli.field) {
        Ok(ws) => ws,
        Err(d) => {
            eprintln!("{}: {d}", path.display());
            return ExitCode::from(1);
        }
    };
    let mut runner = Runner::new(&ws, opts);
    let reports: Vec<Report> = match query {
        Some(words) => vec![runner.run(&Query { line: 0, words, expect: None })],
        None => ws.queries.iter().map(|q| runner.run(q)).collect(),
    };
    emit(&reports);
    ExitCode::from(exit_code(&reports) as u8)
}
