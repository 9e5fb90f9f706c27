use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Subcommand};
use serde::Serialize;

use cdel_core::bnmath::{branching_number, r_vector, BranchingVector};
use cdel_core::config::{analyze_all, enumerate_configurations, EnumerationLimits};
use cdel_core::structure::{lemma_audit, AuditHypotheses, LemmaAuditReport, P3Context, Verdict};
use cdel_core::EdgeSet;

use crate::output::emit;
use crate::{read_graph, Format};

#[derive(Subcommand, Debug)]
pub enum AnalyzeCommand {
    /// Layers, frontiers and structural claims around one induced P3.
    Structure(StructureArgs),
    /// Branching number of a vector such as `2,2`, or of `R(p)`.
    Bn(BnArgs),
    /// Certifies the frontier-stage bound over every configuration graph.
    Configs(ConfigArgs),
    /// Every quoted branching number next to its computed value.
    #[command(alias = "paper-table")]
    BoundTable,
}

#[derive(Args, Debug)]
pub struct StructureArgs {
    pub file: PathBuf,
    /// The P3 as `u,v,w`; defaults to the least induced P3.
    #[arg(long, value_delimiter = ',')]
    pub p3: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct BnArgs {
    /// Comma-separated positive entries.
    #[arg(required_unless_present = "r")]
    pub vector: Option<String>,
    /// Use the frontier-chain vector `R(p)` instead.
    #[arg(long, conflicts_with = "vector")]
    pub r: Option<u32>,
}

#[derive(Args, Debug)]
pub struct ConfigArgs {
    /// Branching numbers at or above this count as violations.
    #[arg(long, default_value_t = 1.393)]
    pub threshold: f64,
    /// Wall-clock cap in seconds; uncovered strata are listed when it is hit.
    #[arg(long)]
    pub time_cap: Option<f64>,
    #[arg(long, default_value_t = EnumerationLimits::default().max_side)]
    pub max_side: usize,
    #[arg(long, default_value_t = EnumerationLimits::default().max_b1)]
    pub max_b1: usize,
    #[arg(long, default_value_t = EnumerationLimits::default().max_stubs)]
    pub max_stubs: usize,
    #[arg(long, default_value_t = EnumerationLimits::default().f_cap)]
    pub f_cap: usize,
    /// Print the enumerated configurations instead of analysing them.
    #[arg(long)]
    pub list: bool,
}

pub fn run(cmd: &AnalyzeCommand, fmt: Format) -> anyhow::Result<u8> {
    match cmd {
        AnalyzeCommand::Structure(a) => structure(a, fmt),
        AnalyzeCommand::Bn(a) => bn(a, fmt),
        AnalyzeCommand::Configs(a) => configs(a, fmt),
        AnalyzeCommand::BoundTable => bound_table(fmt),
    }
}

#[derive(Serialize)]
struct StructureRecord {
    file: String,
    p3: [usize; 3],
    /// `"inf"` when no frontier edge qualifies.
    j: String,
    context: P3Context,
    hypotheses: AuditHypotheses,
    audit: LemmaAuditReport,
}

fn structure(args: &StructureArgs, fmt: Format) -> anyhow::Result<u8> {
    let g = read_graph(&args.file)?;
    let (u, v, w) = match args.p3.as_deref() {
        Some(&[u, v, w]) => (u, v, w),
        Some(_) => bail!("--p3 takes exactly three vertices"),
        None => g.find_induced_p3().context("the graph has no induced P3")?,
    };
    let ctx = P3Context::build(&g, (u, v, w), &EdgeSet::new())?;
    let hypotheses = AuditHypotheses::evaluate(&g, &ctx);
    let audit = lemma_audit(&ctx, &g, hypotheses);
    let failed = !audit.all_passed();
    let rec = StructureRecord {
        file: args.file.display().to_string(),
        p3: [u, v, w],
        j: ctx.j.map_or("inf".into(), |j| j.to_string()),
        context: ctx,
        hypotheses,
        audit,
    };
    emit(&rec, fmt, |r| {
        let c = &r.context;
        let mut s = format!("P3 {:?}: |B| = {}, |C| = {}, |D| = {}, j = {}\n", r.p3, c.b.len(), c.c.len(), c.d.len(), r.j);
        for (i, layer) in c.layers.iter().enumerate() {
            let _ = writeln!(s, "  B_{i}: {layer:?}  |E_{i}| = {}", c.frontier(i).len());
        }
        for v in &r.audit.verdicts {
            let verdict = match &v.verdict {
                Verdict::Pass => "pass".to_string(),
                Verdict::Skipped => "skipped".to_string(),
                Verdict::Fail { witness, detail } => format!("FAIL {detail} at {witness:?}"),
            };
            let _ = writeln!(s, "  {:?}: {verdict}", v.claim);
        }
        s
    })?;
    Ok(if failed { 1 } else { 0 })
}

#[derive(Serialize)]
struct BnRecord {
    vector: String,
    entries: BranchingVector,
    branching_number: f64,
}

fn parse_vector(text: &str) -> anyhow::Result<BranchingVector> {
    let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
    let entries = trimmed
        .split(',')
        .map(|t| t.trim().parse::<u32>().with_context(|| format!("bad vector entry '{t}'")))
        .collect::<anyhow::Result<Vec<u32>>>()?;
    if entries.is_empty() || entries.contains(&0) {
        bail!("branching vectors need positive entries");
    }
    Ok(BranchingVector::new(&entries))
}

pub fn bn(args: &BnArgs, fmt: Format) -> anyhow::Result<u8> {
    let (label, v) = match (&args.vector, args.r) {
        (_, Some(p)) => (format!("R({p})"), r_vector(p)),
        (Some(text), None) => {
            let v = parse_vector(text)?;
            (v.to_string(), v)
        }
        (None, None) => bail!("give a vector or --r"),
    };
    let rec = BnRecord { vector: label, branching_number: branching_number(&v), entries: v };
    emit(&rec, fmt, |r| format!("{} -> {:.6}\n", r.vector, r.branching_number))?;
    Ok(0)
}

#[derive(Serialize)]
struct ConfigListing {
    limits: EnumerationLimits,
    count: usize,
    encodings: Vec<String>,
}

pub fn configs(args: &ConfigArgs, fmt: Format) -> anyhow::Result<u8> {
    let limits = EnumerationLimits { max_side: args.max_side, max_b1: args.max_b1, max_stubs: args.max_stubs, f_cap: args.f_cap };
    if args.list {
        let encodings: Vec<String> = enumerate_configurations(&limits).into_iter().map(|c| c.encoding).collect();
        let rec = ConfigListing { limits, count: encodings.len(), encodings };
        emit(&rec, fmt, |r| r.encodings.iter().map(|e| format!("{e}\n")).collect())?;
        return Ok(0);
    }
    let cap = args.time_cap.map(Duration::try_from_secs_f64).transpose().context("--time-cap must be non-negative")?;
    let report = analyze_all(args.threshold, &limits, cap)?;
    let code = if !report.violations.is_empty() {
        1
    } else if !report.coverage.complete {
        2
    } else {
        0
    };
    emit(&report, fmt, |r| {
        let mut s = format!(
            "{} configurations, max branching number {:.6} (threshold {}), {} violations\n  argmax {}\n  vector {}\n",
            r.configs_checked,
            r.max_branching_number,
            r.threshold,
            r.violations.len(),
            r.argmax_config,
            r.argmax_vector
        );
        let cov = &r.coverage;
        let _ = writeln!(s, "  coverage {}/{} strata{}", cov.strata_covered, cov.strata_total, if cov.complete { " (complete)" } else { "" });
        for u in &cov.uncovered_strata {
            let _ = writeln!(s, "  uncovered: {u}");
        }
        s
    })?;
    Ok(code)
}

#[derive(Serialize)]
struct BoundRow {
    vector: String,
    computed: f64,
    quoted_bound: String,
    pass: bool,
}

fn row(vector: &str, computed: f64, quoted_bound: &str, pass: bool) -> BoundRow {
    BoundRow { vector: vector.into(), computed, quoted_bound: quoted_bound.into(), pass }
}

fn bound_table(fmt: Format) -> anyhow::Result<u8> {
    let bn = |e: &[u32]| branching_number(&BranchingVector::new(e));
    let b5 = [bn(&[5, 8, 5, 8, 5, 8, 5, 8]), bn(&[5, 8, 5, 8, 3, 6]), bn(&[3, 6, 3, 6])];
    let r5 = branching_number(&r_vector(5));
    let r2 = r_vector(2);
    let certified = analyze_all(1.393, &EnumerationLimits::default(), None)?;
    // rules used by new1404: the long-path rule, B2, B5 and B4 through the certified configurations
    let overall = [bn(&[3, 3]), bn(&[1, 4]), certified.max_branching_number].into_iter().chain(b5).fold(1.0, f64::max);
    let rows = vec![
        row("(3,3)", bn(&[3, 3]), "< 1.26", bn(&[3, 3]) < 1.26),
        row("(1,4)", bn(&[1, 4]), "< 1.381", bn(&[1, 4]) < 1.381),
        row("(2,2)", bn(&[2, 2]), "< 1.415", bn(&[2, 2]) < 1.415),
        row("R(5)", r5, "~ 1.406", format!("{r5:.3}") == "1.406"),
        row("(3,5,5,7)", branching_number(&r2), "= R(2)", r2.entries() == [3, 5, 5, 7]),
        row("(5,8,5,8,5,8,5,8)", b5[0], "< 1.404", b5[0] < 1.404),
        row("(5,8,5,8,3,6)", b5[1], "< 1.402", b5[1] < 1.402),
        row("(3,6,3,6)", b5[2], "< 1.398", b5[2] < 1.398),
        row(
            "configurations",
            certified.max_branching_number,
            "< 1.393",
            certified.coverage.complete && certified.max_branching_number < 1.393,
        ),
        row("new1404 overall", overall, "< 1.404", overall < 1.404),
    ];
    let all = rows.iter().all(|r| r.pass);
    emit(&rows, fmt, |rows| {
        rows.iter().map(|r| format!("{:<20} {:.6}  {:<8} {}\n", r.vector, r.computed, r.quoted_bound, if r.pass { "pass" } else { "FAIL" })).collect()
    })?;
    Ok(if all { 0 } else { 1 })
}
