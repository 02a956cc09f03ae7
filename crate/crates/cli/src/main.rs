//! Command-line front end: graph generators, drawing enumeration, the
//! nested-cycle pipeline, maximality checks and audits.
//!
//! Exit codes: 0 the property holds, 1 it fails, 2 invalid input,
//! 3 inconclusive (search budget exhausted). Results go to stdout or the
//! requested files; timings and counters go to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kplane::audit::{audit_graph, AuditReport};
use kplane::enumerate::{k_planarity, Decision, Dedup, EnumerateOptions, Outcome};
use kplane::graphs::{
    gen_complete, gen_cycle, gen_gadget_x, gen_gk, gen_gk_minus, gen_k9_minus, gen_x_plus,
    LabeledGraph, VertexId,
};
use kplane::pipeline::{run_pipeline, PipelineOptions};
use kplane::saturation::{addable_edges, graph_maximal};
use kplane::{enumerate_drawings, Drawing};

#[derive(Parser)]
#[command(
    name = "kplane",
    version,
    about = "Exhaustive search over simple 2-plane drawings"
)]
struct Cli {
    /// Worker threads (1 runs everything sequentially).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated graph as an edge list.
    Gen {
        #[arg(value_enum)]
        family: Family,
        /// Size parameter: cycle length, complete-graph order or G_k index.
        #[arg(long)]
        k: Option<u32>,
        /// Edges removed from K9, as `u-v,u-v`.
        #[arg(long, default_value = "")]
        remove: String,
        /// Output file (stdout when absent).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Enumerate the simple k-plane drawings of a graph.
    Enumerate {
        /// Edge-list file or a built-in name (k5, c10, gadget-x, x-plus, gk2, gk-minus2).
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 2)]
        k: u8,
        #[arg(long, value_enum, default_value_t = DedupArg::Labeled)]
        dedup: DedupArg,
        /// Comma-separated vertex labels of the cycle kept fixed by `--dedup canonical`.
        #[arg(long)]
        cycle: Option<String>,
        /// Restrict the cycle maps to those preserving the braided matching.
        #[arg(long)]
        parity: bool,
        #[arg(long)]
        limit: Option<usize>,
        /// Directory receiving one JSON file per drawing and `stats.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the nested ten-cycle extension pipeline.
    Pipeline {
        #[arg(long, conflicts_with = "closure")]
        max_iter: Option<u32>,
        /// Run until no drawing is left to expand.
        #[arg(long)]
        closure: bool,
        /// State directory; an existing run there is resumed.
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Check maximality of a graph or saturation of a drawing.
    Check {
        #[arg(long, required_unless_present = "drawing")]
        graph: Option<String>,
        #[arg(long, conflicts_with = "graph")]
        drawing: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        maximal: bool,
        #[arg(long, requires = "drawing")]
        saturated: bool,
        #[arg(long, default_value_t = 2)]
        k: u8,
    },
    /// Audit the density argument on the admissible drawings of a graph.
    Audit {
        #[arg(long)]
        graph: String,
        /// Audit every admissible drawing instead of the first.
        #[arg(long)]
        all_admissible: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Convert a drawing JSON file to Graphviz DOT.
    Export {
        #[arg(long)]
        drawing: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Complete,
    GadgetX,
    XPlus,
    Gk,
    GkMinus,
    K9Minus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DedupArg {
    Raw,
    Labeled,
    LabeledMirror,
    Canonical,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Exit(2, msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<Exit>()
                .map(|x| x.0)
                .or_else(|| e.downcast_ref::<kplane::Error>().map(|_| 2))
                .unwrap_or(2);
            ExitCode::from(code)
        }
    }
}

fn budget() -> Result<Option<u64>> {
    match std::env::var("KPLANE_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| invalid(format!("KPLANE_BUDGET must be a number, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn decision_code(d: Decision) -> u8 {
    match d {
        Decision::Yes => 0,
        Decision::No => 1,
        Decision::Inconclusive => 3,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let parallel = cli.threads > 1;
    match &cli.cmd {
        Cmd::Gen {
            family,
            k,
            remove,
            out,
        } => cmd_gen(*family, *k, remove, out.as_deref()),
        Cmd::Enumerate {
            graph,
            k,
            dedup,
            cycle,
            parity,
            limit,
            out,
        } => {
            let g = load_graph(graph)?;
            let dedup = match dedup {
                DedupArg::Raw => Dedup::Raw,
                DedupArg::Labeled => Dedup::Labeled,
                DedupArg::LabeledMirror => Dedup::LabeledMirror,
                DedupArg::Canonical => Dedup::Canonical {
                    cycle: cycle.as_deref().map(|c| cycle_ids(&g, c)).transpose()?,
                    parity: *parity,
                },
            };
            if cycle.is_some() && !matches!(dedup, Dedup::Canonical { .. }) {
                return Err(invalid("--cycle needs --dedup canonical"));
            }
            let mut opts = EnumerateOptions::new(*k, dedup);
            opts.limit = *limit;
            opts.node_budget = budget()?;
            opts.parallel = parallel;
            let run = enumerate_drawings(&g, &opts)?;
            eprintln!(
                "nodes_expanded={} wall_ms={}",
                run.stats.nodes_expanded, run.stats.wall_ms
            );
            if let Some(dir) = out {
                fs::create_dir_all(dir)?;
                let width = run.drawings.len().max(1).to_string().len();
                for (i, d) in run.drawings.iter().enumerate() {
                    fs::write(
                        dir.join(format!("drawing-{i:0width$}.json")),
                        d.to_json_string(),
                    )?;
                }
                let stats = serde_json::json!({
                    "graph": graph,
                    "n": g.n(),
                    "m": g.m(),
                    "drawings": run.drawings.len(),
                    "outcome": run.outcome,
                    "nodes_expanded": run.stats.nodes_expanded,
                });
                fs::write(
                    dir.join("stats.json"),
                    serde_json::to_string_pretty(&stats)?,
                )?;
            }
            println!("{}", run.drawings.len());
            Ok(if run.outcome == Outcome::BudgetExhausted {
                3
            } else {
                0
            })
        }
        Cmd::Pipeline {
            max_iter,
            closure,
            state,
        } => {
            let max_iter = match (max_iter, closure) {
                (Some(n), false) => Some(*n),
                (None, true) => None,
                (None, false) => Some(2),
                (Some(_), true) => unreachable!("clap rejects the combination"),
            };
            let run = run_pipeline(&PipelineOptions {
                max_iter,
                parallel,
                node_budget: budget()?,
                state_dir: state.clone(),
            })?;
            for it in &run.report.iterations {
                eprintln!("{}", serde_json::to_string(it)?);
            }
            println!("{}", serde_json::to_string_pretty(&run.report)?);
            let exhausted = run.report.iterations.iter().any(|i| i.budget_exhausted > 0);
            Ok(if exhausted { 3 } else { 0 })
        }
        Cmd::Check {
            graph,
            drawing,
            maximal,
            saturated,
            k,
        } => {
            if let Some(spec) = graph {
                if !maximal {
                    return Err(invalid("check --graph needs --maximal"));
                }
                let g = load_graph(spec)?;
                let d = graph_maximal(&g, *k, budget()?)?;
                println!("{}", decision_name(d));
                Ok(decision_code(d))
            } else {
                if !saturated {
                    return Err(invalid("check --drawing needs --saturated"));
                }
                let path = drawing.as_ref().expect("clap requires graph or drawing");
                let d = load_drawing(path)?;
                let add = addable_edges(&d, *k);
                for (u, v) in &add {
                    println!("addable {} {}", d.label(*u), d.label(*v));
                }
                println!(
                    "{}",
                    if add.is_empty() {
                        "saturated"
                    } else {
                        "not saturated"
                    }
                );
                Ok(if add.is_empty() { 0 } else { 1 })
            }
        }
        Cmd::Audit {
            graph,
            all_admissible,
            report,
        } => {
            let g = load_graph(graph)?;
            if k_planarity(&g, 2, budget()?)? == Decision::No {
                return Err(invalid("graph is not 2-planar"));
            }
            let r: AuditReport = audit_graph(&g, *all_admissible, budget()?)?;
            let text = serde_json::to_string_pretty(&r)?;
            match report {
                Some(p) => fs::write(p, text)?,
                None => println!("{text}"),
            }
            eprintln!(
                "verdict={} margin={} admissible={}",
                decision_name(r.verdict.verdict),
                r.verdict.margin,
                r.drawings.len()
            );
            Ok(decision_code(r.verdict.verdict))
        }
        Cmd::Export { drawing, out } => {
            let d = load_drawing(drawing)?;
            let dot = d.to_dot();
            match out {
                Some(p) => fs::write(p, dot)?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
    }
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::Yes => "yes",
        Decision::No => "no",
        Decision::Inconclusive => "inconclusive",
    }
}

fn cmd_gen(family: Family, k: Option<u32>, remove: &str, out: Option<&Path>) -> Result<u8> {
    let need_k = || k.ok_or_else(|| invalid("this family needs --k"));
    let g = match family {
        Family::Cycle => gen_cycle(need_k()? as usize)?,
        Family::Complete => gen_complete(need_k()? as usize),
        Family::GadgetX => gen_gadget_x(),
        Family::XPlus => gen_x_plus(),
        Family::Gk => gen_gk(need_k()?)?,
        Family::GkMinus => gen_gk_minus(need_k()?, false)?,
        Family::K9Minus => gen_k9_minus(&parse_pairs(remove)?)?,
    };
    let text = g.to_edge_list();
    match out {
        Some(p) => {
            fs::write(p, text)?;
            println!("n={} m={}", g.n(), g.m());
        }
        None => {
            print!("{text}");
            eprintln!("n={} m={}", g.n(), g.m());
        }
    }
    Ok(0)
}

fn parse_pairs(s: &str) -> Result<Vec<(VertexId, VertexId)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (a, b) = p
                .split_once('-')
                .ok_or_else(|| invalid(format!("bad edge {p:?}")))?;
            let parse = |x: &str| {
                x.parse::<VertexId>()
                    .map_err(|_| invalid(format!("bad vertex {x:?}")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn cycle_ids(g: &LabeledGraph, labels: &str) -> Result<Vec<VertexId>> {
    labels
        .split(',')
        .map(|l| {
            g.vertex_by_label(l.trim())
                .ok_or_else(|| invalid(format!("unknown vertex label {l:?}")))
        })
        .collect()
}

/// Reads an edge-list file, or builds a named graph when no such file exists.
fn load_graph(spec: &str) -> Result<LabeledGraph> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return LabeledGraph::from_edge_list(&text).map_err(|e| invalid(e.to_string()));
    }
    let num = |prefix: &str| {
        spec.strip_prefix(prefix)
            .and_then(|r| r.parse::<u32>().ok())
    };
    let g = match spec {
        "gadget-x" => gen_gadget_x(),
        "x-plus" => gen_x_plus(),
        _ if num("gk-minus").is_some() => gen_gk_minus(num("gk-minus").unwrap(), false)?,
        _ if num("gk").is_some() => gen_gk(num("gk").unwrap())?,
        _ if num("k").is_some() => gen_complete(num("k").unwrap() as usize),
        _ if num("c").is_some() => gen_cycle(num("c").unwrap() as usize)?,
        _ => {
            return Err(invalid(format!(
                "{spec:?} is neither a file nor a known graph"
            )))
        }
    };
    Ok(g)
}

fn load_drawing(path: &Path) -> Result<Drawing> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Drawing::from_json_str(&text).map_err(|e| invalid(e.to_string()))
}
