use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wordrep::coloring::{color_s_n_2, find_min_coloring, DEFAULT_CHROMATIC_LIMIT};
use wordrep::orientation::{
    brute_force_semitransitive, brute_force_semitransitive_parallel, OracleVerdict,
    DEFAULT_ORACLE_BUDGET,
};
use wordrep::solver::{
    solve, ResumeOrder, SolverConfig, SourceRule, Verdict, DEFAULT_MAX_CYCLE_LEN,
};
use wordrep::subiso::find_induced_embedding;
use wordrep::trace::{
    emit_trace, extract_graph, parse_trace, verify_trace, ProofTrace, TraceArc, VerificationReport,
    WITNESS_TRACE_TEX,
};
use wordrep::words::{find_uniform_representant, represents, Word, DEFAULT_WORD_BUDGET};
use wordrep::{Color, DeBruijnDigraph, LabeledGraph};

mod repro;

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(
    name = "wordrep",
    version,
    about = "Word-representability of graphs via semi-transitive orientations"
)]
struct Cli {
    /// Worker threads for the brute-force oracle; 1 keeps everything sequential.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the de Bruijn digraph B(n,k) or its simplified graph S(n,k).
    Debruijn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        simplified: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Three-color S(n,2) by trailing-run parity and check it is proper.
    Color3 {
        #[arg(long)]
        n: usize,
    },
    /// Exact chromatic number, up to a bound.
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
    /// Decide semi-transitivity. Exit 0 = semi-transitive, 1 = not, 2 = budget exceeded.
    Check {
        #[arg(long)]
        graph: PathBuf,
        /// `maxdeg`, `none`, or a vertex label.
        #[arg(long, default_value = "maxdeg")]
        source: String,
        /// Write the refutation trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, env = "WORDREP_BUDGET", default_value_t = wordrep::solver::DEFAULT_BUDGET, value_parser = parse_budget)]
        budget: u64,
        /// Longest cycle the forcing rules look at.
        #[arg(long = "cycle-len", default_value_t = DEFAULT_MAX_CYCLE_LEN as u16, value_parser = clap::value_parser!(u16).range(3..=12))]
        cycle_len: u16,
        /// Branch on both orientations of the first edge.
        #[arg(long = "no-wlog")]
        no_wlog: bool,
        #[arg(long, value_enum, default_value_t = Resume::Newest)]
        resume: Resume,
    },
    /// Enumerate all orientations. Exit 0 = one is semi-transitive, 1 = none, 2 = too many edges.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        /// Largest number of orientations to enumerate; accepts forms like 2e7.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET, value_parser = parse_budget)]
        budget: u64,
    },
    /// Replay a proof trace against a graph. Exit 0 = accepted, 1 = rejected.
    VerifyTrace {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        input: TraceInput,
        /// Arc assumed before line 1, e.g. "15->17"; overrides the trace file.
        #[arg(long, value_parser = parse_arc)]
        wlog: Option<TraceArc>,
        /// Vertex assumed to be a source; overrides the trace file.
        #[arg(long)]
        source: Option<String>,
    },
    /// The graph spanned by every pair a trace mentions.
    ExtractGraph {
        #[command(flatten)]
        input: TraceInput,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find an induced copy of a pattern in a host. Exit 0 = found, 1 = none.
    Findsub {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        /// Fix a pattern vertex's image, as `PATTERN=HOST`. Repeatable.
        #[arg(long = "anchor", value_parser = parse_anchor)]
        anchors: Vec<(String, String)>,
    },
    /// Does a word represent a graph? Exit 0 = yes, 1 = no.
    RepresentCheck {
        #[arg(long)]
        graph: PathBuf,
        /// Whitespace-separated vertex labels.
        #[arg(long)]
        word: String,
    },
    /// Search for a uniform representant. Exit 0 = found, 1 = none up to --kmax.
    WordSearch {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_WORD_BUDGET, value_parser = parse_budget)]
        budget: u64,
    },
    /// Rerun the full reproduction pipeline and summarize it. Exit 0 = every stage passed.
    Repro {
        /// Seed for the sampled oracle comparison.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Random graphs in the sampled oracle comparison.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct TraceInput {
    /// Trace file, LaTeX or plain; `-` reads standard input.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Use the bundled 100-line witness trace.
    #[arg(long)]
    witness: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Resume {
    Newest,
    Oldest,
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let v = match s.parse::<u64>() {
        Ok(v) => v,
        Err(_) => {
            let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
            if f.fract() != 0.0 || !(0.0..1.8e19).contains(&f) {
                return Err(format!("`{s}` is not a whole number"));
            }
            f as u64
        }
    };
    if v == 0 {
        return Err("budget must be positive".into());
    }
    Ok(v)
}

fn parse_arc(s: &str) -> Result<TraceArc, String> {
    TraceArc::parse(s).ok_or_else(|| format!("`{s}` is not of the form TAIL->HEAD"))
}

fn parse_anchor(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((p, h)) if !p.is_empty() && !h.is_empty() => {
            Ok((p.trim().to_owned(), h.trim().to_owned()))
        }
        _ => Err(format!("`{s}` is not of the form PATTERN=HOST")),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<LabeledGraph> {
    LabeledGraph::from_json_str(&read_input(path)?)
        .with_context(|| format!("parsing graph {}", path.display()))
}

fn load_trace(input: &TraceInput) -> Result<ProofTrace> {
    let text = match &input.trace {
        Some(p) => read_input(p)?,
        None => WITNESS_TRACE_TEX.to_owned(),
    };
    Ok(parse_trace(&text)?)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            emit(text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
pub(crate) fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub(crate) fn print_json(v: &Value) {
    emit(&serde_json::to_string_pretty(v).expect("json value serializes"));
}

pub(crate) fn run_oracle<'g>(
    g: &'g LabeledGraph,
    budget: u64,
    jobs: u16,
) -> Result<OracleVerdict<'g>> {
    if jobs <= 1 {
        return Ok(brute_force_semitransitive(g, budget)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.into())
        .build()?;
    Ok(pool.install(|| brute_force_semitransitive_parallel(g, budget))?)
}

pub(crate) fn report_json(r: &VerificationReport) -> Value {
    let failure = r.first_failure().map(|l| {
        let (at, why) = l.outcome.as_ref().unwrap_err();
        json!({ "line": l.number, "at": at.to_string(), "reason": why.to_string() })
    });
    json!({
        "accepted": r.verdict,
        "lines": r.lines.len(),
        "accepted_lines": r.accepted_lines(),
        "ledger_balanced": r.ledger_balanced(),
        "first_failure": failure,
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Debruijn {
            n,
            k,
            simplified,
            format,
            output,
        } => {
            let b = DeBruijnDigraph::new(n, k)?;
            let text = match (simplified, format) {
                (true, Format::Json) => b.simplify().graph().to_json_string(),
                (true, Format::Dot) => b.simplify().to_dot(),
                (false, Format::Json) => {
                    let arcs: Vec<Value> = b
                        .arcs()
                        .iter()
                        .enumerate()
                        .map(|(i, &(u, v))| {
                            json!([b.labels()[u.index()], b.labels()[v.index()], b.arc_label(i)])
                        })
                        .collect();
                    serde_json::to_string_pretty(&json!({ "labels": b.labels(), "arcs": arcs }))?
                }
                (false, Format::Dot) => b.to_dot(),
            };
            write_output(output.as_deref(), &text)?;
            eprintln!(
                "B({n},{k}): {} vertices, {} arcs",
                b.vertex_count(),
                b.arcs().len()
            );
            Ok(0)
        }
        Command::Color3 { n } => {
            let (s, colors) = color_s_n_2(n)?;
            let g = s.graph();
            let map: serde_json::Map<String, Value> = g
                .vertices()
                .map(|v| {
                    let c = [Color::Red, Color::Blue, Color::Green][colors.color(v)];
                    (g.label(v).to_owned(), json!(c.name()))
                })
                .collect();
            let proper = g.is_proper_coloring(&colors)?;
            print_json(&json!({ "n": n, "proper": proper, "colors": map }));
            eprintln!(
                "S({n},2): {} vertices, {} edges, proper 3-coloring: {proper}",
                g.vertex_count(),
                g.edge_count()
            );
            Ok(if proper { 0 } else { 1 })
        }
        Command::Chromatic { graph, max } => {
            let g = load_graph(&graph)?;
            let coloring = find_min_coloring(&g, max, DEFAULT_CHROMATIC_LIMIT)?;
            let value = match &coloring {
                Some(c) => {
                    let map: serde_json::Map<String, Value> = g
                        .vertices()
                        .map(|v| (g.label(v).to_owned(), json!(c.color(v))))
                        .collect();
                    json!({ "chromatic_number": c.color_count(), "max": max, "coloring": map })
                }
                None => json!({ "chromatic_number": null, "max": max, "coloring": null }),
            };
            print_json(&value);
            match coloring {
                Some(c) => eprintln!("chromatic number {}", c.color_count()),
                None => eprintln!("chromatic number exceeds {max}"),
            }
            Ok(0)
        }
        Command::Check {
            graph,
            source,
            trace,
            budget,
            cycle_len,
            no_wlog,
            resume,
        } => {
            let g = load_graph(&graph)?;
            let cfg = SolverConfig {
                source: match source.as_str() {
                    "maxdeg" => SourceRule::MaxDegree,
                    "none" => SourceRule::None,
                    l => SourceRule::Vertex(l.to_owned()),
                },
                wlog: !no_wlog,
                budget,
                trace: true,
                max_cycle_len: cycle_len.into(),
                resume: match resume {
                    Resume::Newest => ResumeOrder::Newest,
                    Resume::Oldest => ResumeOrder::Oldest,
                },
            };
            let verdict = solve(&g, &cfg)?;
            let (value, code) = match &verdict {
                Verdict::SemiTransitive(o) => (
                    json!({ "verdict": verdict.name(), "orientation": o.to_label_pairs() }),
                    0,
                ),
                Verdict::NonSemiTransitive(t) => {
                    let t = t.as_ref().expect("trace requested");
                    let report = verify_trace(&g, t);
                    if let Some(p) = &trace {
                        fs::write(p, emit_trace(t))
                            .with_context(|| format!("writing {}", p.display()))?;
                    }
                    let v = json!({
                        "verdict": verdict.name(),
                        "trace_lines": t.lines.len(),
                        "trace_verified": report.verdict,
                    });
                    (v, 1)
                }
                Verdict::BudgetExceeded { nodes } => {
                    (json!({ "verdict": verdict.name(), "nodes": nodes }), 2)
                }
            };
            print_json(&value);
            eprintln!("{}: {}", graph.display(), verdict.name());
            Ok(code)
        }
        Command::Oracle { graph, budget } => {
            let g = load_graph(&graph)?;
            match run_oracle(&g, budget, cli.jobs) {
                Ok(OracleVerdict::Exists(o)) => {
                    print_json(&json!({ "verdict": "Exists", "orientation": o.to_label_pairs() }));
                    eprintln!("semi-transitive orientation found");
                    Ok(0)
                }
                Ok(OracleVerdict::NotExists) => {
                    print_json(&json!({ "verdict": "NotExists", "orientation": null }));
                    eprintln!(
                        "none of the 2^{} orientations is semi-transitive",
                        g.edge_count()
                    );
                    Ok(1)
                }
                Err(e) => {
                    print_json(&json!({ "verdict": "BudgetExceeded", "error": e.to_string() }));
                    eprintln!("{e}");
                    Ok(2)
                }
            }
        }
        Command::VerifyTrace {
            graph,
            input,
            wlog,
            source,
        } => {
            let g = load_graph(&graph)?;
            let mut t = load_trace(&input)?;
            if wlog.is_some() {
                t.preamble.wlog = wlog;
            }
            if let Some(s) = source {
                t.preamble.source = Some(s);
            }
            let r = verify_trace(&g, &t);
            print_json(&report_json(&r));
            eprintln!(
                "{}/{} lines accepted, ledger balanced: {}, trace {}",
                r.accepted_lines(),
                r.lines.len(),
                r.ledger_balanced(),
                if r.verdict { "accepted" } else { "rejected" }
            );
            Ok(if r.verdict { 0 } else { 1 })
        }
        Command::ExtractGraph { input, output } => {
            let t = load_trace(&input)?;
            let g = extract_graph(&t);
            write_output(output.as_deref(), &g.to_json_string())?;
            eprintln!("{} vertices, {} edges", g.vertex_count(), g.edge_count());
            Ok(0)
        }
        Command::Findsub {
            pattern,
            host,
            anchors,
        } => {
            let p = load_graph(&pattern)?;
            let h = load_graph(&host)?;
            match find_induced_embedding(&p, &h, &anchors)? {
                Some(e) => {
                    print_json(&json!({ "found": true, "mapping": e.label_map(&p, &h) }));
                    eprintln!("induced embedding found");
                    Ok(0)
                }
                None => {
                    print_json(&json!({ "found": false, "mapping": null }));
                    eprintln!("no induced embedding");
                    Ok(1)
                }
            }
        }
        Command::RepresentCheck { graph, word } => {
            let g = load_graph(&graph)?;
            let w = Word::parse_labels(&g, &word)?;
            let ok = represents(&w, &g)?;
            print_json(&json!({ "represents": ok }));
            eprintln!(
                "word {} the graph",
                if ok {
                    "represents"
                } else {
                    "does not represent"
                }
            );
            Ok(if ok { 0 } else { 1 })
        }
        Command::WordSearch {
            graph,
            kmax,
            budget,
        } => {
            let g = load_graph(&graph)?;
            match find_uniform_representant(&g, kmax, budget)? {
                Some(w) => {
                    let k = if g.vertex_count() == 0 {
                        0
                    } else {
                        w.len() / g.vertex_count()
                    };
                    print_json(&json!({ "word": w.to_labels(&g), "k": k }));
                    eprintln!("{k}-uniform representant found");
                    Ok(0)
                }
                None => {
                    print_json(&json!({ "word": null, "k": null }));
                    eprintln!("no uniform representant with at most {kmax} copies of each letter");
                    Ok(1)
                }
            }
        }
        Command::Repro { seed, samples } => repro::run(seed, samples, cli.jobs),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        assert_eq!(parse_budget("2e7"), Ok(20_000_000));
        assert_eq!(parse_budget("18446744073709551615"), Ok(u64::MAX));
        assert!(parse_budget("0").is_err());
        assert!(parse_budget("1.5").is_err());
        assert!(parse_budget("-3").is_err());
        assert!(parse_budget("lots").is_err());
    }

    #[test]
    fn anchors() {
        assert_eq!(parse_anchor("1=102"), Ok(("1".into(), "102".into())));
        assert!(parse_anchor("1102").is_err());
        assert!(parse_anchor("=102").is_err());
        assert_eq!(parse_arc("15->17"), Ok(TraceArc::new("15", "17")));
        assert!(parse_arc("15-17").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
