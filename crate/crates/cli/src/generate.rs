use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Subcommand};
use serde::Serialize;

use cdel_core::gen::{gnp, layered_counterexample, planted, COUNTEREXAMPLE_LABELS, COUNTEREXAMPLE_NOTE};
use cdel_core::io::write_edge_list;
use cdel_core::Graph;

use crate::output::emit;
use crate::Format;

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Disjoint cliques plus `q` random edges between them.
    Planted {
        /// Clique sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the JSON record of the planted bound; defaults to `<out>.json`.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Erdős–Rényi G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    Path {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    Cycle {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The 17-vertex layered graph whose frontier stage deletes 8 edges one by one.
    #[command(alias = "paper-counterexample")]
    LayeredCounterexample {
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
pub struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Written {
    path: String,
    n: usize,
    m: usize,
    sidecar: Option<String>,
}

fn write(g: &Graph, comments: &[&str], out: &OutArgs, sidecar: Option<&PathBuf>, fmt: Format) -> anyhow::Result<u8> {
    let text = write_edge_list(g, comments);
    let Some(path) = &out.out else {
        print!("{text}");
        return Ok(0);
    };
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    let rec = Written {
        path: path.display().to_string(),
        n: g.n(),
        m: g.edge_count(),
        sidecar: sidecar.map(|p| p.display().to_string()),
    };
    emit(&rec, fmt, |r| format!("wrote {} (n = {}, m = {})\n", r.path, r.n, r.m))?;
    Ok(0)
}

pub fn run(cmd: &GenCommand, fmt: Format) -> anyhow::Result<u8> {
    match cmd {
        GenCommand::Planted { sizes, q, seed, sidecar, out } => {
            let p = planted(sizes, *q, *seed)?;
            let header = format!("planted cliques {sizes:?}, q = {q}, seed = {seed}");
            let json = serde_json::to_string_pretty(&p)?;
            let side = sidecar.clone().or_else(|| out.out.as_ref().map(|o| PathBuf::from(format!("{}.json", o.display()))));
            match &side {
                Some(s) => std::fs::write(s, json).with_context(|| format!("writing {}", s.display()))?,
                // graph on stdout and no sidecar path: the record goes to stderr
                None => eprintln!("{json}"),
            }
            write(&p.graph, &[&header], out, side.as_ref(), fmt)
        }
        GenCommand::Gnp { n, p, seed, out } => {
            let g = gnp(*n, *p, *seed)?;
            write(&g, &[&format!("G({n}, {p}), seed = {seed}")], out, None, fmt)
        }
        GenCommand::Path { n, out } => write(&Graph::path(*n), &[&format!("path on {n} vertices")], out, None, fmt),
        GenCommand::Cycle { n, out } => {
            if *n < 3 {
                bail!("a cycle needs at least 3 vertices");
            }
            write(&Graph::cycle(*n), &[&format!("cycle on {n} vertices")], out, None, fmt)
        }
        GenCommand::LayeredCounterexample { out } => {
            let labels = COUNTEREXAMPLE_LABELS.iter().enumerate().map(|(i, l)| format!("{i}={l}")).collect::<Vec<_>>().join(" ");
            let comments = [COUNTEREXAMPLE_NOTE, "P3 is 0-1-2.", labels.as_str()];
            write(&layered_counterexample(), &comments, out, None, fmt)
        }
    }
}
