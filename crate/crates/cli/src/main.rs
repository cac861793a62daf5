use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kempe_core::coloring::{Coloring, ListAssignment};
use kempe_core::degenerate::{list_ordering, minimal_degree_bound, RecolorSetting, Recolorer};
use kempe_core::delta::delta_equalize;
use kempe_core::error::KempeError;
use kempe_core::graph::Graph;
use kempe_core::io::{parse_pace_td, read_graph, read_json, write_json};
use kempe_core::kempe::{verify_sequence, MoveSequence, SequenceFile};
use kempe_core::lvm::lvm_sequence;
use kempe_core::mad::mad_equalize;
use kempe_core::oracle::{build_reconf_with, Budget};
use kempe_core::treewidth::{chordal_equalize, peo, tw_equalize, TreeDecomposition};

const EXIT_INPUT: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_WRONG_END: u8 = 4;

#[derive(Parser)]
#[command(name = "kempe", version, about = "Build, check and brute-force Kempe-change recoloring sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a sequence of Kempe changes from one coloring to another.
    Recolor(RecolorArgs),
    /// Enumerate all k-colorings and report the Kempe classes.
    Oracle(OracleArgs),
    /// Replay a sequence file and check every intermediate coloring.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Lvm,
    Degenerate,
    List,
    Mad,
    Treewidth,
    Delta,
    Chordal,
}

#[derive(clap::Args)]
struct RecolorArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum)]
    method: Method,
    /// List assignment JSON for `--method list` (defaults to [k] everywhere).
    #[arg(long)]
    lists: Option<PathBuf>,
    /// Slack in the hypothesis mad(G) <= k - epsilon.
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Tree decomposition in PACE .td format.
    #[arg(long, conflicts_with = "min_fill")]
    td_file: Option<PathBuf>,
    /// Use the min-fill completion (the default without --td-file).
    #[arg(long)]
    min_fill: bool,
    /// Where to write the sequence JSON; without it the sequence is embedded in the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    /// Maximum number of colorings to enumerate.
    #[arg(long, default_value_t = Budget::default().max_colorings)]
    budget: usize,
    #[arg(long, default_value_t = Budget::default().max_n)]
    max_n: usize,
    #[arg(long, default_value_t = Budget::default().max_k)]
    max_k: usize,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Start coloring; defaults to the one stored in the sequence file.
    #[arg(long)]
    start: Option<PathBuf>,
    #[arg(long)]
    sequence: PathBuf,
    #[arg(long)]
    lists: Option<PathBuf>,
    /// Expected final coloring.
    #[arg(long)]
    end: Option<PathBuf>,
}

#[derive(Serialize)]
struct Bound {
    claimed: Option<usize>,
    observed: usize,
    within: Option<bool>,
}

#[derive(Serialize)]
struct RunReport {
    method: Method,
    instance: String,
    length: usize,
    replay_ok: bool,
    bound: Bound,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sequence: Option<SequenceFile>,
}

fn diagnostic(kind: &str, message: impl std::fmt::Display, index: Option<usize>) {
    let mut line = serde_json::json!({ "level": "error", "kind": kind, "message": message.to_string() });
    if let Some(i) = index {
        line["index"] = i.into();
    }
    eprintln!("{line}");
}

fn warn_line(message: &str) {
    eprintln!("{}", serde_json::json!({ "level": "warning", "message": message }));
}

fn exit_for(e: &KempeError) -> u8 {
    match e {
        KempeError::Io(_) | KempeError::Parse(_) | KempeError::InvalidGraph(_) | KempeError::InvalidDecomposition(_) => {
            EXIT_INPUT
        }
        KempeError::InternalInvariantBroken(_)
        | KempeError::InvalidMove { .. }
        | KempeError::ImproperIntermediate { .. } => EXIT_VERIFY,
        _ => EXIT_PRECONDITION,
    }
}

fn fail(e: KempeError) -> ExitCode {
    let index = match &e {
        KempeError::InvalidMove { index, .. } | KempeError::ImproperIntermediate { index } => Some(*index),
        _ => None,
    };
    diagnostic(&format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("error").to_string(), &e, index);
    ExitCode::from(exit_for(&e))
}

struct Produced {
    sequence: MoveSequence,
    claimed: Option<usize>,
    warnings: Vec<String>,
    lists: Option<ListAssignment>,
}

fn produce(args: &RecolorArgs, g: &Graph, a: &Coloring, b: &Coloring) -> Result<Produced, KempeError> {
    let n = g.n();
    let k = args.k;
    let plain = |sequence, claimed| Produced { sequence, claimed, warnings: Vec::new(), lists: None };
    Ok(match args.method {
        Method::Lvm => plain(lvm_sequence(g, a, b, k)?, None),
        Method::Degenerate => {
            let (d, ord) = minimal_degree_bound(g);
            let rec = Recolorer::new(g, &ord, RecolorSetting::Degree { k, d })?;
            plain(rec.equalize(a, b)?.combined, Some(4 * n * n))
        }
        Method::List => {
            let lists = match &args.lists {
                Some(p) => read_json::<ListAssignment>(p)?,
                None => ListAssignment::full(n, k),
            };
            let ord = list_ordering(g, &lists)?;
            let rec = Recolorer::new(g, &ord, RecolorSetting::List(lists.clone()))?;
            let eq = rec.equalize(a, b)?;
            Produced {
                sequence: eq.combined,
                claimed: Some(2 * (g.edge_count() + n)),
                warnings: Vec::new(),
                lists: Some(lists),
            }
        }
        Method::Mad => {
            let out = mad_equalize(g, k, args.epsilon, a, b)?;
            let t = out.layering.t() as u32;
            let claimed = (2 * (k.max(1) - 1)).checked_pow(t).and_then(|p| p.checked_mul(n * n)).map(|x| x + n);
            plain(out.sequence, claimed)
        }
        Method::Treewidth => {
            let td: Option<TreeDecomposition> = match &args.td_file {
                Some(p) => Some(parse_pace_td(&std::fs::read_to_string(p)?)?),
                None => None,
            };
            let out = tw_equalize(g, td.as_ref(), a, b, k)?;
            let width = out.completion.width.max(1);
            plain(out.sequence, Some(8 * width * n * n))
        }
        Method::Delta => {
            let out = delta_equalize(g, k, a, b)?;
            Produced { sequence: out.sequence, claimed: None, warnings: out.warnings, lists: None }
        }
        Method::Chordal => {
            let ord = peo(g)?;
            plain(chordal_equalize(g, &ord, a, b, k)?, Some(n))
        }
    })
}

fn recolor(args: RecolorArgs) -> ExitCode {
    let loaded = (|| -> Result<(Graph, Coloring, Coloring), KempeError> {
        let g = read_graph(&args.graph)?;
        let a = read_json::<Coloring>(&args.from)?.with_palette(args.k)?;
        let b = read_json::<Coloring>(&args.to)?.with_palette(args.k)?;
        Ok((g, a, b))
    })();
    let (g, a, b) = match loaded {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let produced = match produce(&args, &g, &a, &b) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    for w in &produced.warnings {
        warn_line(w);
    }
    let replay = verify_sequence(&g, &a, &produced.sequence, produced.lists.as_ref());
    let replay_ok = replay.as_ref() == Ok(&b);
    let length = produced.sequence.len();
    let file = SequenceFile::new(a.clone(), &produced.sequence);
    let embedded = match &args.out {
        Some(p) => {
            if let Err(e) = write_json(p, &file) {
                return fail(e);
            }
            None
        }
        None => Some(file),
    };
    let report = RunReport {
        method: args.method,
        instance: format!("{} (n = {}, m = {}, k = {})", args.graph.display(), g.n(), g.edge_count(), args.k),
        length,
        replay_ok,
        bound: Bound { claimed: produced.claimed, observed: length, within: produced.claimed.map(|c| length <= c) },
        warnings: produced.warnings,
        sequence: embedded,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    match replay {
        Ok(end) if end == b => ExitCode::SUCCESS,
        Ok(_) => {
            diagnostic("VerificationFailed", "replay does not end at the target coloring", None);
            ExitCode::from(EXIT_VERIFY)
        }
        Err(e) => {
            diagnostic("VerificationFailed", &e, None);
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

fn oracle(args: OracleArgs) -> ExitCode {
    let budget = Budget { max_n: args.max_n, max_k: args.max_k, max_colorings: args.budget };
    let result = read_graph(&args.graph).and_then(|g| Ok(build_reconf_with(&g, args.k, &budget)?.report(&g)));
    match result {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn verify(args: VerifyArgs) -> ExitCode {
    let loaded = (|| -> Result<_, KempeError> {
        let g = read_graph(&args.graph)?;
        let file: SequenceFile = read_json(&args.sequence)?;
        let start = match &args.start {
            Some(p) => read_json::<Coloring>(p)?,
            None => file.start.clone(),
        };
        let lists = args.lists.as_ref().map(|p| read_json::<ListAssignment>(p)).transpose()?;
        let end = args.end.as_ref().map(|p| read_json::<Coloring>(p)).transpose()?;
        Ok((g, file, start, lists, end))
    })();
    let (g, file, start, lists, end) = match loaded {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    match verify_sequence(&g, &start, &file.sequence(), lists.as_ref()) {
        Ok(last) => {
            if let Some(expected) = end {
                if expected.colors() != last.colors() {
                    diagnostic("WrongEnd", format!("final coloring {:?} differs from expected", last.colors()), None);
                    return ExitCode::from(EXIT_WRONG_END);
                }
            }
            println!("{}", serde_json::json!({ "ok": true, "moves": file.moves.len(), "end": last }));
            ExitCode::SUCCESS
        }
        Err(e @ (KempeError::InvalidMove { .. } | KempeError::ImproperIntermediate { .. })) => fail(e),
        Err(e) => {
            diagnostic("InvalidStart", &e, None);
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Recolor(a) => recolor(a),
        Command::Oracle(a) => oracle(a),
        Command::Verify(a) => verify(a),
    }
}
