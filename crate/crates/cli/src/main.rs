use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use matroid_forge::adversary::{indistinguishable_alternative, parse_queries, random_queries, TargetKind};
use matroid_forge::lemmas::{verify_lemma, LemmaId};
use matroid_forge::matroid::{enumerate_facts, FactKind};
use matroid_forge::surgery::{relax, tighten, Surgered};
use matroid_forge::{build_gn, BiasedGraph, EdgeSet, Error, FrameMatroid, LiftMatroid, Limits, Multigraph, RankOracle};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Serialize)]
#[command(name = "matroid-forge", version, about = "Lift/frame matroid rank oracles and the G_n query game")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on subsets visited by exhaustive scans [env: MATROID_FORGE_MAX_SUBSETS].
    #[arg(long, global = true)]
    max_subsets: Option<u64>,
    /// Cap on the edge count handed to cycle enumeration.
    #[arg(long, global = true)]
    max_cycle_edges: Option<usize>,
    /// Cap on exhaustive rank-axiom work.
    #[arg(long, global = true)]
    max_axiom_checks: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Model {
    Lm,
    Fm,
    LmRelaxed,
    FmTightened,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Write the canonical G_n graph file.
    Gen {
        #[arg(long)]
        n: usize,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank of one subset.
    Rank {
        #[command(flatten)]
        source: Source,
        /// Edge names (`e1,f_1_3`) or a hex bitmask.
        subset: String,
    },
    /// List the covering-pair sites of G_n.
    ZList {
        #[arg(long)]
        n: usize,
    },
    /// Run one structural check on G_n.
    VerifyLemma {
        #[arg(value_parser = parse_lemma)]
        id: LemmaId,
        #[arg(long)]
        n: usize,
    },
    /// Play the query game against G_n.
    Game {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_kind, default_value = "frame")]
        kind: TargetKind,
        /// Query file: one hex subset per line, `#` comments.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        transcript: Option<PathBuf>,
        /// Number of uniformly random queries.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dump circuits, hyperplanes, cocircuits or bases.
    Facts {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_fact_kind)]
        kind: FactKind,
    },
}

#[derive(Args, Serialize)]
struct Source {
    /// Use the canonical G_n with no balanced cycles.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    n: Option<usize>,
    /// Graph file (JSON).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Balanced cycles: a JSON array of edge-name lists.
    #[arg(long, requires = "graph")]
    bias: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Model::Lm)]
    model: Model,
    /// Surgery site for the relaxed and tightened models.
    #[arg(long)]
    site: Option<String>,
}

fn parse_lemma(s: &str) -> Result<LemmaId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<TargetKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_fact_kind(s: &str) -> Result<FactKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Verification(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn limits(global: &Global) -> Result<Limits, Error> {
    let mut lim = Limits::default();
    if let Ok(v) = std::env::var("MATROID_FORGE_MAX_SUBSETS") {
        lim.max_subsets = v
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("MATROID_FORGE_MAX_SUBSETS=`{v}` is not a positive integer")))?;
    }
    if let Some(v) = global.max_subsets {
        lim.max_subsets = v;
    }
    if let Some(v) = global.max_cycle_edges {
        lim.max_cycle_edges = v;
    }
    if let Some(v) = global.max_axiom_checks {
        lim.max_axiom_checks = v;
    }
    if lim.max_subsets == 0 || lim.max_cycle_edges == 0 || lim.max_axiom_checks == 0 {
        return Err(Error::Input("caps must be positive".into()));
    }
    Ok(lim)
}

/// Edge names first, then a hex bitmask.
fn parse_subset(graph: &Multigraph, text: &str) -> Result<EdgeSet, Error> {
    let set = match graph.parse_edge_names(text) {
        Ok(set) => set,
        Err(names_err) => EdgeSet::parse_hex(text).map_err(|_| names_err)?,
    };
    set.check_within(graph.edge_count())?;
    Ok(set)
}

fn read(path: &PathBuf) -> Result<String, Error> {
    Ok(fs::read_to_string(path)?)
}

fn load_graph(source: &Source, lim: &Limits) -> Result<BiasedGraph, Error> {
    if let Some(n) = source.n {
        return Ok(BiasedGraph::unbiased(build_gn(n)?.graph));
    }
    let path = source.graph.as_ref().expect("clap requires --n or --graph");
    let bg = BiasedGraph::from_json(&read(path)?, lim)?;
    let Some(bias) = &source.bias else {
        return Ok(bg);
    };
    let lists: Vec<Vec<String>> = serde_json::from_str(&read(bias)?)?;
    let graph = bg.graph().clone();
    let balanced = lists
        .iter()
        .map(|names| graph.parse_edge_names(&names.join(",")))
        .collect::<Result<Vec<_>, _>>()?;
    BiasedGraph::new(graph, balanced, lim)
}

enum Oracle {
    Lift(LiftMatroid),
    Frame(FrameMatroid),
    Relaxed(Surgered<LiftMatroid>),
    Tightened(Surgered<FrameMatroid>),
}

impl RankOracle for Oracle {
    fn ground_len(&self) -> usize {
        match self {
            Oracle::Lift(m) => m.ground_len(),
            Oracle::Frame(m) => m.ground_len(),
            Oracle::Relaxed(m) => m.ground_len(),
            Oracle::Tightened(m) => m.ground_len(),
        }
    }

    fn rank(&self, set: EdgeSet) -> usize {
        match self {
            Oracle::Lift(m) => m.rank(set),
            Oracle::Frame(m) => m.rank(set),
            Oracle::Relaxed(m) => m.rank(set),
            Oracle::Tightened(m) => m.rank(set),
        }
    }
}

fn build_oracle(source: &Source, lim: &Limits) -> Result<(Oracle, Multigraph), Error> {
    let bg = Arc::new(load_graph(source, lim)?);
    let graph = bg.graph().clone();
    let site = match (&source.site, source.model) {
        (None, Model::LmRelaxed | Model::FmTightened) => {
            return Err(Error::Input("--site is required for surgered models".into()))
        }
        (Some(s), _) => Some(parse_subset(&graph, s)?),
        (None, _) => None,
    };
    let oracle = match source.model {
        Model::Lm => Oracle::Lift(LiftMatroid::new(bg)),
        Model::Fm => Oracle::Frame(FrameMatroid::new(bg)),
        Model::LmRelaxed => Oracle::Relaxed(relax(LiftMatroid::new(bg), site.unwrap())?),
        Model::FmTightened => Oracle::Tightened(tighten(FrameMatroid::new(bg), site.unwrap())?),
    };
    Ok((oracle, graph))
}

/// Writes the report; a closed stdout is not an error worth a panic.
fn emit(cli: &Cli, lim: &Limits, body: Value, text: impl FnOnce() -> String) {
    let out = match cli.global.format {
        Format::Json => {
            let mut out = json!({
                "version": VERSION,
                "config": cli,
                "limits": {
                    "max_subsets": lim.max_subsets,
                    "max_cycle_edges": lim.max_cycle_edges,
                    "max_axiom_checks": lim.max_axiom_checks,
                },
            });
            if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
                o.extend(b);
            }
            serde_json::to_string_pretty(&out).expect("report serializes") + "\n"
        }
        Format::Text => text(),
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn run(cli: &Cli) -> CmdResult {
    let lim = limits(&cli.global)?;
    match &cli.command {
        Command::Gen { n, out } => {
            let gn = build_gn(*n)?;
            let file = gn.graph.to_json();
            match out {
                Some(path) => fs::write(path, file + "\n").map_err(Error::from)?,
                None => {
                    let out = match cli.global.format {
                        Format::Json => file + "\n",
                        Format::Text => gn
                            .graph
                            .edges()
                            .iter()
                            .map(|e| {
                                let (a, b) = e.ends;
                                format!("{} {} {}\n", e.name, gn.graph.vertex_name(a), gn.graph.vertex_name(b))
                            })
                            .collect(),
                    };
                    let _ = std::io::stdout().lock().write_all(out.as_bytes());
                }
            }
        }
        Command::Rank { source, subset } => {
            let (m, graph) = build_oracle(source, &lim)?;
            let set = parse_subset(&graph, subset)?;
            let rank = m.rank(set);
            emit(cli, &lim, json!({ "subset": graph.names_of(set), "rank": rank }), || format!("{rank}\n"));
        }
        Command::ZList { n } => {
            let gn = build_gn(*n)?;
            let sites: Vec<_> = gn.z_family().map(|p| gn.describe(&p)).collect();
            emit(cli, &lim, json!({ "family_size": sites.len(), "sites": sites }), || {
                sites
                    .iter()
                    .map(|s| format!("{} {:?} {}\n", s.hex, s.selection, s.z.join(",")))
                    .collect()
            });
        }
        Command::VerifyLemma { id, n } => {
            let gn = build_gn(*n)?;
            let start = Instant::now();
            let report = verify_lemma(*id, &gn, &lim)?;
            eprintln!("{} at n={n}: {:.3}s", id.name(), start.elapsed().as_secs_f64());
            let passed = report.passed;
            emit(cli, &lim, json!({ "report": report }), || {
                format!(
                    "{} n={} {} ({} sites)\n",
                    id.name(),
                    n,
                    if passed { "pass" } else { "FAIL" },
                    report.sites_checked
                )
            });
            if !passed {
                return Err(Failure::Verification(format!("{} failed at n={n}", id.name())));
            }
        }
        Command::Game {
            n,
            kind,
            transcript,
            random,
            seed,
        } => {
            let gn = build_gn(*n)?;
            let queries = match (transcript, random) {
                (Some(path), _) => parse_queries(&read(path)?)?,
                (None, Some(k)) => random_queries(&gn, *k, &mut ChaCha8Rng::seed_from_u64(*seed)),
                (None, None) => unreachable!("clap requires --transcript or --random"),
            };
            let outcome = indistinguishable_alternative(&gn, *kind, &queries)?;
            let record = outcome.to_record(&gn);
            let ok = record.all_agree;
            emit(cli, &lim, json!({ "outcome": record }), || {
                format!(
                    "site {} ({})\nagreement {}/{}\n",
                    record.site.hex,
                    record.site.z.join(","),
                    record.agreed,
                    record.queries
                )
            });
            if !ok {
                return Err(Failure::Verification("alternative disagrees on some query".into()));
            }
        }
        Command::Facts { source, kind } => {
            let (m, graph) = build_oracle(source, &lim)?;
            let facts: Vec<Vec<String>> = enumerate_facts(&m, *kind, &lim)?
                .into_iter()
                .map(|s| graph.names_of(s))
                .collect();
            emit(cli, &lim, json!({ "count": facts.len(), "facts": facts }), || {
                facts.iter().map(|f| f.join(",") + "\n").collect()
            });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
    }
}
