//! Batch driver: runs graphs x schedulers x seeds, emits one report row
//! per run, and compares every run against the sequential reference and
//! the exact optimum where the graph is small enough.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use greedymatch::{
    check_trace, generate, optimal_matching_with_limit, sequential_greedy, simulate,
    GraphKind, Matching, MatchingError, SchedulerPolicy, SimConfig, SimRun, WeightedGraph,
};

use crate::cli::{ExperimentArgs, OutputFormat};
use crate::commands::{load_graph, resolve_kind, WeightSpec};

/// One run flattened for reports. Weights and ratios are exact rational
/// strings; `w_opt` and `ratio` read "unverified" when the graph exceeds
/// the oracle limit.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub scheduler: String,
    pub seed: u64,
    pub w_dist: String,
    pub w_seq: String,
    pub w_opt: String,
    pub ratio: String,
    pub messages: u64,
    pub message_limit: u64,
    pub steps: u64,
    pub checks: String,
}

impl ReportRow {
    fn text_line(&self) -> String {
        format!(
            "{} [{} s{}] dist={} seq={} opt={} ratio={} msgs={}/{} steps={} checks={}",
            self.graph,
            self.scheduler,
            self.seed,
            self.w_dist,
            self.w_seq,
            self.w_opt,
            self.ratio,
            self.messages,
            self.message_limit,
            self.steps,
            self.checks
        )
    }
}

/// Per-graph reference data, computed once and shared across runs.
pub struct Reference {
    pub seq: Matching,
    pub opt: Option<Matching>,
}

pub fn reference_for(g: &WeightedGraph, oracle_limit: usize) -> Result<Reference> {
    let seq = sequential_greedy(g);
    let opt = match optimal_matching_with_limit(g, oracle_limit) {
        Ok(m) => Some(m),
        Err(MatchingError::GraphTooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Reference { seq, opt })
}

/// A report row plus the exact quantities the summary needs.
pub struct RunEvaluation {
    pub row: ReportRow,
    pub check_failed: bool,
    pub reference_mismatch: bool,
    pub below_half: bool,
    pub ratio: Option<BigRational>,
    /// messages_total / (2m); None for edgeless graphs.
    pub fill: Option<BigRational>,
}

/// Scores an already simulated run against the reference data.
pub fn evaluate_sim(
    id: &str,
    g: &WeightedGraph,
    reference: &Reference,
    run: &SimRun,
    policy: SchedulerPolicy,
    seed: u64,
    check: bool,
) -> Result<RunEvaluation> {
    let w_dist = run.matching.total_weight();
    let reference_mismatch = run.matching.edges() != reference.seq.edges();
    let (checks, check_failed) = if check {
        let verdicts = check_trace(g, &run.trace)
            .with_context(|| format!("checking trace of {id}"))?;
        match verdicts.iter().find(|v| v.outcome.is_fail()) {
            Some(bad) => (format!("fail({})", bad.kind), true),
            None => ("pass".to_string(), false),
        }
    } else {
        ("off".to_string(), false)
    };

    let one = BigRational::one();
    let (w_opt, ratio_text, ratio) = match &reference.opt {
        Some(opt) => {
            let w_opt = opt.total_weight();
            // An edgeless graph has weight 0 on both sides; call that ratio 1.
            let ratio = if g.edge_count() == 0 {
                one.clone()
            } else {
                &w_dist / &w_opt
            };
            (w_opt.to_string(), ratio.to_string(), Some(ratio))
        }
        None => ("unverified".to_string(), "unverified".to_string(), None),
    };
    let two = &one + &one;
    let below_half = ratio.as_ref().is_some_and(|r| r * &two < one);

    let message_limit = 2 * g.edge_count() as u64;
    let fill = if g.edge_count() == 0 {
        None
    } else {
        Some(
            BigRational::from_integer(run.stats.messages_total.into())
                / BigRational::from_integer(message_limit.into()),
        )
    };

    Ok(RunEvaluation {
        row: ReportRow {
            graph: id.to_string(),
            n: g.vertex_count(),
            m: g.edge_count(),
            scheduler: policy.to_string(),
            seed,
            w_dist: w_dist.to_string(),
            w_seq: reference.seq.total_weight().to_string(),
            w_opt,
            ratio: ratio_text,
            messages: run.stats.messages_total,
            message_limit,
            steps: run.stats.steps,
            checks,
        },
        check_failed,
        reference_mismatch,
        below_half,
        ratio,
        fill,
    })
}

/// Simulates one run and scores it.
pub fn evaluate_run(
    id: &str,
    g: &WeightedGraph,
    reference: &Reference,
    policy: SchedulerPolicy,
    seed: u64,
    check: bool,
) -> Result<RunEvaluation> {
    let run = simulate(g, &SimConfig::new(policy, seed))
        .with_context(|| format!("simulating {id} ({policy}, seed {seed})"))?;
    evaluate_sim(id, g, reference, &run, policy, seed, check)
}

pub fn write_rows<'a>(
    out: &mut dyn Write,
    format: OutputFormat,
    rows: impl Iterator<Item = &'a ReportRow>,
) -> Result<()> {
    match format {
        OutputFormat::Text => {
            for row in rows {
                writeln!(out, "{}", row.text_line())?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        OutputFormat::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut *out, row)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug)]
pub struct Summary {
    pub runs: usize,
    pub graphs: usize,
    pub check_failures: usize,
    pub reference_mismatches: usize,
    pub verified_runs: usize,
    pub below_half: usize,
    pub min_ratio: Option<BigRational>,
    pub mean_ratio: Option<BigRational>,
    pub max_fill: Option<BigRational>,
}

impl Summary {
    pub fn failed(&self) -> bool {
        self.check_failures > 0 || self.reference_mismatches > 0 || self.below_half > 0
    }
}

fn approx(r: &BigRational) -> String {
    match r.to_f64() {
        Some(x) => format!("{r} (~{x:.4})"),
        None => r.to_string(),
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "runs: {}", self.runs)?;
        writeln!(f, "graphs: {}", self.graphs)?;
        writeln!(f, "check failures: {}", self.check_failures)?;
        writeln!(f, "reference mismatches: {}", self.reference_mismatches)?;
        writeln!(f, "verified against optimum: {}", self.verified_runs)?;
        writeln!(f, "runs below half of optimum: {}", self.below_half)?;
        if let Some(min) = &self.min_ratio {
            writeln!(f, "min ratio: {}", approx(min))?;
        }
        if let Some(mean) = &self.mean_ratio {
            writeln!(f, "mean ratio: {}", approx(mean))?;
        }
        if let Some(fill) = &self.max_fill {
            writeln!(f, "max message fill: {}", approx(fill))?;
        }
        Ok(())
    }
}

pub fn summarize(evals: &[RunEvaluation], graphs: usize) -> Summary {
    let mut summary = Summary {
        runs: evals.len(),
        graphs,
        check_failures: 0,
        reference_mismatches: 0,
        verified_runs: 0,
        below_half: 0,
        min_ratio: None,
        mean_ratio: None,
        max_fill: None,
    };
    let mut ratio_sum = BigRational::zero();
    for eval in evals {
        if eval.check_failed {
            summary.check_failures += 1;
        }
        if eval.reference_mismatch {
            summary.reference_mismatches += 1;
        }
        if eval.below_half {
            summary.below_half += 1;
        }
        if let Some(r) = &eval.ratio {
            summary.verified_runs += 1;
            ratio_sum += r;
            match &summary.min_ratio {
                Some(min) if min <= r => {}
                _ => summary.min_ratio = Some(r.clone()),
            }
        }
        if let Some(fill) = &eval.fill {
            match &summary.max_fill {
                Some(max) if max >= fill => {}
                _ => summary.max_fill = Some(fill.clone()),
            }
        }
    }
    if summary.verified_runs > 0 {
        summary.mean_ratio =
            Some(ratio_sum / BigRational::from_integer((summary.verified_runs as u64).into()));
    }
    summary
}

fn family_tag(kind: GraphKind) -> String {
    match kind {
        GraphKind::Path => "path".to_string(),
        GraphKind::Cycle => "cycle".to_string(),
        GraphKind::Star => "star".to_string(),
        GraphKind::Complete => "complete".to_string(),
        GraphKind::Gnp { p } => format!("gnp{p}"),
        GraphKind::RandomTree => "tree".to_string(),
        GraphKind::Bipartite { left, .. } => format!("bip{left}"),
    }
}

pub fn cmd_experiment(args: &ExperimentArgs) -> Result<i32> {
    let spec: WeightSpec = args.weights.parse().map_err(anyhow::Error::msg)?;
    let schedulers: Vec<SchedulerPolicy> = if args.scheduler == "all" {
        SchedulerPolicy::ALL.to_vec()
    } else {
        vec![args.scheduler.parse().map_err(anyhow::Error::msg)?]
    };

    let mut sources: Vec<(String, WeightedGraph)> = Vec::new();
    for path in &args.graphs {
        sources.push((path.display().to_string(), load_graph(path)?));
    }
    for family in &args.families {
        let kind = resolve_kind(family, args.n, args.p, args.left)
            .map_err(anyhow::Error::msg)?;
        for i in 0..args.count {
            let seed = args.graph_seed + i as u64;
            let g = generate(kind, args.n, seed, &spec.policy())
                .with_context(|| format!("generating {family} n={} seed={seed}", args.n))?;
            sources.push((format!("{}-n{}-s{}", family_tag(kind), args.n, seed), g));
        }
    }
    if sources.is_empty() {
        bail!("no graphs: pass --graph FILE or --family KIND");
    }

    let mut evals = Vec::new();
    for (id, g) in &sources {
        let reference = reference_for(g, args.oracle_limit)?;
        for &policy in &schedulers {
            for seed in 0..args.seeds.max(1) {
                evals.push(evaluate_run(id, g, &reference, policy, seed, !args.no_check)?);
            }
        }
    }
    let summary = summarize(&evals, sources.len());

    let to_file = args.output.is_some();
    let mut sink: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    write_rows(&mut sink, args.format, evals.iter().map(|e| &e.row))?;
    sink.flush()?;
    drop(sink);

    if args.format == OutputFormat::Text && !to_file {
        println!();
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(if summary.failed() { 1 } else { 0 })
}
