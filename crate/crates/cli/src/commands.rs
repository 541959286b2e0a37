//! The single-graph subcommands and shared input plumbing.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};
use serde::Serialize;

use greedymatch::{
    check_trace, generate, optimal_matching_with_limit, parse_graph, sequential_greedy,
    serialize_graph, simulate, EdgeWeight, GraphKind, Matching, SimConfig, WeightPolicy,
    WeightedGraph,
};

use crate::cli::{GenArgs, OptArgs, OutputFormat, RunArgs, SeqArgs};
use crate::experiment::{evaluate_sim, reference_for, write_rows};

/// Weight assignment named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Distinct,
    Uniform,
    Equal,
    Adversarial { base: u64 },
    List(Vec<EdgeWeight>),
}

impl WeightSpec {
    pub fn policy(&self) -> WeightPolicy {
        match self {
            WeightSpec::Distinct => WeightPolicy::DistinctRandom,
            WeightSpec::Uniform => WeightPolicy::UniformRandom,
            WeightSpec::Equal => WeightPolicy::AllEqual,
            WeightSpec::Adversarial { base } => {
                WeightPolicy::AdversarialHalfRatio { base: *base }
            }
            WeightSpec::List(weights) => WeightPolicy::Explicit(weights.clone()),
        }
    }
}

impl FromStr for WeightSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distinct" => Ok(WeightSpec::Distinct),
            "uniform" => Ok(WeightSpec::Uniform),
            "equal" => Ok(WeightSpec::Equal),
            "adversarial" => Ok(WeightSpec::Adversarial { base: 1000 }),
            other => {
                if let Some(base) = other.strip_prefix("adversarial:") {
                    let base: u64 = base
                        .parse()
                        .map_err(|_| format!("bad adversarial base {base:?}"))?;
                    if base == 0 {
                        return Err("adversarial base must be positive".into());
                    }
                    return Ok(WeightSpec::Adversarial { base });
                }
                let weights = other
                    .split(',')
                    .map(|w| {
                        w.trim()
                            .parse::<EdgeWeight>()
                            .map_err(|e| format!("bad weight {w:?}: {e}"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(WeightSpec::List(weights))
            }
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Distinct => write!(f, "distinct"),
            WeightSpec::Uniform => write!(f, "uniform"),
            WeightSpec::Equal => write!(f, "equal"),
            WeightSpec::Adversarial { base } => write!(f, "adversarial:{base}"),
            WeightSpec::List(weights) => {
                let list: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                write!(f, "{}", list.join(","))
            }
        }
    }
}

/// Parses a family name and fills in its parameters.
pub fn resolve_kind(
    name: &str,
    n: usize,
    p: f64,
    left: Option<usize>,
) -> Result<GraphKind, String> {
    Ok(match GraphKind::from_str(name)? {
        GraphKind::Gnp { .. } => GraphKind::Gnp { p },
        GraphKind::Bipartite { .. } => GraphKind::Bipartite {
            left: left.unwrap_or(n / 2),
            p,
        },
        other => other,
    })
}

pub fn load_graph(path: &Path) -> Result<WeightedGraph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn format_matching(m: &Matching) -> String {
    if m.is_empty() {
        return "(none)".to_string();
    }
    let pairs: Vec<String> = m
        .edges()
        .iter()
        .map(|e| format!("({},{})", e.u(), e.v()))
        .collect();
    pairs.join(" ")
}

/// Row shape for `seq` and `opt` in csv and jsonl output.
#[derive(Debug, Serialize)]
struct SoloRow {
    graph: String,
    n: usize,
    m: usize,
    weight: String,
    matching: String,
}

fn write_solo(format: OutputFormat, id: &str, g: &WeightedGraph, m: &Matching) -> Result<()> {
    match format {
        OutputFormat::Text => {
            println!(
                "graph: {id} ({} vertices, {} edges)",
                g.vertex_count(),
                g.edge_count()
            );
            println!("matching: {}", format_matching(m));
            println!("weight: {}", m.total_weight());
        }
        OutputFormat::Csv => {
            let mut out = csv::Writer::from_writer(std::io::stdout().lock());
            out.serialize(SoloRow {
                graph: id.to_string(),
                n: g.vertex_count(),
                m: g.edge_count(),
                weight: m.total_weight().to_string(),
                matching: format_matching(m),
            })?;
            out.flush()?;
        }
        OutputFormat::Jsonl => {
            let row = SoloRow {
                graph: id.to_string(),
                n: g.vertex_count(),
                m: g.edge_count(),
                weight: m.total_weight().to_string(),
                matching: format_matching(m),
            };
            println!("{}", serde_json::to_string(&row)?);
        }
    }
    Ok(())
}

pub fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let spec: WeightSpec = args.weights.parse().map_err(anyhow::Error::msg)?;
    let kind =
        resolve_kind(&args.kind, args.n, args.p, args.left).map_err(anyhow::Error::msg)?;
    let g = generate(kind, args.n, args.seed, &spec.policy())?;
    let mut text = format!(
        "# {} n={} seed={} weights={}\n",
        args.kind, args.n, args.seed, spec
    );
    text.push_str(&serialize_graph(&g));
    match &args.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}

pub fn cmd_run(args: &RunArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let id = args.graph.display().to_string();
    let mut config = SimConfig::new(args.scheduler, args.seed);
    config.continuous_liveness_check = args.deep_check;
    let run = simulate(&g, &config)
        .with_context(|| format!("simulating {id}"))?;
    if let Some(path) = &args.trace {
        let file = File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        run.trace.write_jsonl(&mut out)?;
        out.flush()?;
    }

    match args.format {
        OutputFormat::Text => {
            println!(
                "graph: {id} ({} vertices, {} edges)",
                g.vertex_count(),
                g.edge_count()
            );
            println!("scheduler: {}, seed {}", args.scheduler, args.seed);
            println!("matching: {}", format_matching(&run.matching));
            println!("weight: {}", run.matching.total_weight());
            println!(
                "messages: {}/{} ({} req + {} drop)",
                run.stats.messages_total,
                2 * g.edge_count(),
                run.stats.messages_req,
                run.stats.messages_drop
            );
            println!("steps: {}", run.stats.steps);
            let mut failed = false;
            if args.check {
                let verdicts = check_trace(&g, &run.trace)
                    .with_context(|| format!("checking trace of {id}"))?;
                let line: Vec<String> = verdicts.iter().map(|v| v.to_string()).collect();
                println!("checks: {}", line.join("; "));
                failed = verdicts.iter().any(|v| v.outcome.is_fail());
                let reference = sequential_greedy(&g);
                if run.matching.edges() == reference.edges() {
                    println!("sequential reference: equal");
                } else {
                    println!(
                        "sequential reference: DIFFERENT (weight {})",
                        reference.total_weight()
                    );
                    failed = true;
                }
            }
            Ok(if failed { 1 } else { 0 })
        }
        OutputFormat::Csv | OutputFormat::Jsonl => {
            let reference = reference_for(&g, args.oracle_limit)?;
            let eval = evaluate_sim(
                &id,
                &g,
                &reference,
                &run,
                args.scheduler,
                args.seed,
                args.check,
            )?;
            let mut out = std::io::stdout().lock();
            write_rows(&mut out, args.format, std::iter::once(&eval.row))?;
            out.flush()?;
            let failed = args.check
                && (eval.check_failed || eval.reference_mismatch || eval.below_half);
            Ok(if failed { 1 } else { 0 })
        }
    }
}

pub fn cmd_seq(args: &SeqArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let m = sequential_greedy(&g);
    write_solo(args.format, &args.graph.display().to_string(), &g, &m)?;
    Ok(0)
}

pub fn cmd_opt(args: &OptArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let m = optimal_matching_with_limit(&g, args.oracle_limit)
        .with_context(|| format!("exact search on {}", args.graph.display()))?;
    write_solo(args.format, &args.graph.display().to_string(), &g, &m)?;
    Ok(0)
}
