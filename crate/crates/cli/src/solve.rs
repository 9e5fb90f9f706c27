use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use cdel_core::engine::{solve_decision_with, solve_minimum_with, SearchStats};
use cdel_core::oracle::exact_min_deletion;
use cdel_core::{CoreError, EdgeSet};

use crate::output::{edges_text, emit};
use crate::{read_graph, Format, SearchArgs};

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Edge-list files; several files are solved in parallel and reported in order.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Deletion budget. Without it the minimum is computed.
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub file: PathBuf,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Yes,
    No,
    Solved,
    Timeout,
    Error,
}

impl Status {
    fn exit_code(self) -> u8 {
        match self {
            Status::Yes | Status::Solved => 0,
            Status::No => 1,
            Status::Timeout | Status::Error => 2,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct SolveRecord {
    pub file: String,
    pub strategy: String,
    pub k: Option<usize>,
    pub status: Status,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub optimum: Option<usize>,
    pub witness: Option<Vec<[usize; 2]>>,
    pub stats: Option<SearchStats>,
    pub error: Option<String>,
}

fn pairs(s: &EdgeSet) -> Vec<[usize; 2]> {
    s.iter().map(|e| [e.a, e.b]).collect()
}

fn solve_one(path: &PathBuf, args: &SolveArgs) -> SolveRecord {
    let mut rec = SolveRecord {
        file: path.display().to_string(),
        strategy: args.search.strategy.to_string(),
        k: args.k,
        status: Status::Error,
        n: None,
        m: None,
        optimum: None,
        witness: None,
        stats: None,
        error: None,
    };
    let result = (|| -> anyhow::Result<()> {
        let g = read_graph(path)?;
        rec.n = Some(g.n());
        rec.m = Some(g.edge_count());
        let cfg = args.search.config()?;
        match args.k {
            Some(k) => {
                let out = solve_decision_with(&g, k, &cfg)?;
                rec.status = if out.witness.is_some() { Status::Yes } else { Status::No };
                rec.witness = out.witness.as_ref().map(pairs);
                rec.stats = Some(out.stats);
            }
            None => {
                let out = solve_minimum_with(&g, &cfg)?;
                rec.status = Status::Solved;
                rec.optimum = Some(out.optimum);
                rec.witness = Some(pairs(&out.witness));
                rec.stats = Some(out.stats);
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        let timed_out = e.downcast_ref::<CoreError>().is_some_and(|c| matches!(c, CoreError::Timeout));
        rec.status = if timed_out { Status::Timeout } else { Status::Error };
        rec.error = Some(format!("{e:#}"));
        // never present partial search results as final
        rec.witness = None;
        rec.stats = None;
    }
    rec
}

fn record_text(r: &SolveRecord) -> String {
    let mut s = format!("{}: {:?}", r.file, r.status).to_lowercase();
    if let Some(k) = r.k {
        let _ = write!(s, " (k = {k})");
    }
    if let Some(opt) = r.optimum {
        let _ = write!(s, " optimum {opt}");
    }
    s.push('\n');
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "  delete: {}", edges_text(w));
    }
    if let Some(st) = &r.stats {
        let c = &st.rule_counts;
        let _ = writeln!(
            s,
            "  nodes {} depth {} rules b1={} b2={} b3={} b4={} b5={} naive={} in {:.3}s",
            st.nodes_expanded,
            st.max_depth,
            c.b1,
            c.b2,
            c.b3,
            c.b4,
            c.b5,
            c.naive,
            st.elapsed.as_secs_f64()
        );
    }
    if let Some(e) = &r.error {
        let _ = writeln!(s, "  {e}");
    }
    s
}

pub fn solve(args: &SolveArgs, fmt: Format) -> anyhow::Result<u8> {
    let records: Vec<SolveRecord> = args.files.par_iter().map(|p| solve_one(p, args)).collect();
    let code = records.iter().map(|r| r.status.exit_code()).max().unwrap_or(0);
    if let [single] = records.as_slice() {
        emit(single, fmt, record_text)?;
    } else {
        emit(&records, fmt, |rs| rs.iter().map(record_text).collect())?;
    }
    Ok(code)
}

#[derive(Serialize)]
struct OracleRecord {
    file: String,
    n: usize,
    m: usize,
    optimum: usize,
    witness: Vec<[usize; 2]>,
}

pub fn oracle(args: &OracleArgs, fmt: Format) -> anyhow::Result<u8> {
    let g = read_graph(&args.file)?;
    let r = exact_min_deletion(&g)?;
    let rec = OracleRecord {
        file: args.file.display().to_string(),
        n: g.n(),
        m: g.edge_count(),
        optimum: r.optimum,
        witness: pairs(&r.witness),
    };
    emit(&rec, fmt, |r| format!("{}: optimum {}\n  delete: {}\n", r.file, r.optimum, edges_text(&r.witness)))?;
    Ok(0)
}
