use std::fmt::Write as _;

use anyhow::bail;
use clap::Args;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use cdel_core::engine::{solve_minimum_with, Strategy};
use cdel_core::gen::{planted, rng};

use crate::output::emit;
use crate::{Format, SearchArgs};

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub clusters: usize,
    #[arg(long, default_value_t = 5)]
    pub min_size: usize,
    #[arg(long, default_value_t = 8)]
    pub max_size: usize,
    #[arg(long, default_value_t = 2)]
    pub min_q: usize,
    #[arg(long, default_value_t = 6)]
    pub max_q: usize,
    /// Timeout and path rule apply to every run; `--strategy` is ignored.
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Serialize)]
struct InstanceRow {
    seed: u64,
    sizes: Vec<usize>,
    q: usize,
    optimum: Option<usize>,
    /// Nodes per strategy, in `strategies` order; `None` marks a timeout or error.
    nodes: Vec<Option<u64>>,
}

#[derive(Serialize)]
struct StrategySummary {
    strategy: String,
    mean_nodes: f64,
    max_nodes: u64,
    failures: usize,
    total_ms: u128,
}

#[derive(Serialize)]
struct BenchReport {
    strategies: Vec<String>,
    summary: Vec<StrategySummary>,
    /// Instances whose optimum exceeds the planted `q` or where strategies disagree.
    anomalies: Vec<String>,
    instances: Vec<InstanceRow>,
}

pub fn run(args: &BenchArgs, fmt: Format) -> anyhow::Result<u8> {
    if args.min_size == 0 || args.min_size > args.max_size || args.min_q > args.max_q {
        bail!("empty size or q range");
    }
    let mut r = rng(args.seed);
    let specs: Vec<(u64, Vec<usize>, usize)> = (0..args.count)
        .map(|_| {
            let sizes = (0..args.clusters).map(|_| r.gen_range(args.min_size..=args.max_size)).collect();
            (r.gen(), sizes, r.gen_range(args.min_q..=args.max_q))
        })
        .collect();

    let base_cfg = args.search.config()?;
    let runs: Vec<anyhow::Result<(InstanceRow, Vec<u128>)>> = specs
        .par_iter()
        .map(|(seed, sizes, q)| {
            let inst = planted(sizes, *q, *seed)?;
            let mut nodes = Vec::new();
            let mut ms = Vec::new();
            let mut optima = Vec::new();
            for s in Strategy::ALL {
                let mut cfg = base_cfg.clone();
                cfg.strategy = s;
                match solve_minimum_with(&inst.graph, &cfg) {
                    Ok(out) => {
                        nodes.push(Some(out.stats.nodes_expanded));
                        ms.push(out.stats.elapsed.as_millis());
                        optima.push(out.optimum);
                    }
                    Err(_) => {
                        nodes.push(None);
                        ms.push(0);
                    }
                }
            }
            optima.dedup();
            let optimum = if optima.len() == 1 { optima.first().copied() } else { None };
            Ok((InstanceRow { seed: *seed, sizes: sizes.clone(), q: *q, optimum, nodes }, ms))
        })
        .collect();

    let mut instances = Vec::new();
    let mut totals = vec![(0u64, 0u64, 0usize, 0u128); Strategy::ALL.len()];
    let mut anomalies = Vec::new();
    for run in runs {
        let (row, ms) = run?;
        for (i, n) in row.nodes.iter().enumerate() {
            match n {
                Some(n) => {
                    totals[i].0 += n;
                    totals[i].1 = totals[i].1.max(*n);
                }
                None => totals[i].2 += 1,
            }
            totals[i].3 += ms[i];
        }
        match row.optimum {
            Some(opt) if opt <= row.q => {}
            Some(opt) => anomalies.push(format!("seed {}: optimum {opt} above q = {}", row.seed, row.q)),
            None if row.nodes.iter().all(Option::is_some) => anomalies.push(format!("seed {}: strategies disagree", row.seed)),
            None => {}
        }
        instances.push(row);
    }
    let summary = Strategy::ALL
        .iter()
        .zip(&totals)
        .map(|(s, &(sum, max, failures, ms))| StrategySummary {
            strategy: s.to_string(),
            mean_nodes: sum as f64 / (instances.len() - failures).max(1) as f64,
            max_nodes: max,
            failures,
            total_ms: ms,
        })
        .collect();
    let report = BenchReport { strategies: Strategy::ALL.iter().map(|s| s.to_string()).collect(), summary, anomalies, instances };
    let code = if report.anomalies.is_empty() { 0 } else { 1 };
    emit(&report, fmt, |r| {
        let mut s = format!("{} planted instances\n", r.instances.len());
        for x in &r.summary {
            let _ = writeln!(s, "  {:<11} mean nodes {:>9.1}  max {:>7}  failures {}  {} ms", x.strategy, x.mean_nodes, x.max_nodes, x.failures, x.total_ms);
        }
        for a in &r.anomalies {
            let _ = writeln!(s, "  anomaly: {a}");
        }
        s
    })?;
    Ok(code)
}
