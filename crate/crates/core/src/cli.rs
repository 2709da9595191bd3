//! Command-line front end. Data outputs are deterministic: stable ordering,
//! fixed decimals, no timestamps.

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::corpus::{collection_stats, diff_corpora, qrels_distribution};
use crate::error::{Error, Result};
use crate::fusion::{default_k_grid, rrf_fuse, rrf_sweep, FusionConfig, DEFAULT_DEPTH, DEFAULT_K};
use crate::metrics::{arp, default_measures, evaluate, MeasureId, ScoreTable};
use crate::plot;
use crate::replicability::{
    core_topics, paired_ttest_bonferroni, replicability_report, reports_table, topic_drift,
    AlignMode, EePair, EeSide, ReplicabilityReport,
};
use crate::report::{fmt_value, round_to, Format, TextTable};
use crate::significance::TTestVariant;
use crate::trec::{
    parse_manifest, parse_qrels, parse_queries, parse_run, write_run, CorpusManifest, LengthUnit,
    Qrels, QuerySet, Run,
};

/// Exit code for a report in which every ER and ΔRI is undefined.
pub const EXIT_ALL_UNDEFINED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "tempeval", version, about = "Longitudinal IR evaluation toolkit")]
pub struct Cli {
    #[command(flatten)]
    output: OutputSpec,

    #[command(subcommand)]
    command: Command,
}

/// Where and how results are written.
#[derive(Debug, Clone, Args)]
pub struct OutputSpec {
    /// Output format: tsv, json or markdown.
    #[arg(long, global = true, env = "TEMPEVAL_FORMAT", default_value = "tsv")]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Decimal places in numeric cells.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=17))]
    precision: u8,
}

impl OutputSpec {
    fn precision(&self) -> usize {
        usize::from(self.precision)
    }

    fn emit(&self, content: &str) -> Result<()> {
        match &self.output {
            Some(path) => fs::write(path, content).map_err(|e| Error::from(e).in_file(path)),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    fn render(&self, table: &TextTable, left_aligned: usize) -> String {
        match self.format {
            Format::Markdown => table.to_markdown(left_aligned),
            _ => table.to_tsv(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a run against qrels: per-topic scores and ARP.
    Eval(EvalArgs),
    /// ARP per run with Bonferroni-corrected paired t-tests against a baseline.
    Compare(CompareArgs),
    /// Replicability measures of a system against a pivot across two EEs.
    Replicability(ReplicabilityArgs),
    /// Reciprocal rank fusion of runs.
    Fuse(FuseArgs),
    /// Document evolution between two corpus manifests.
    CorpusDiff(CorpusDiffArgs),
    /// Document and query length statistics of one snapshot.
    CorpusStats(CorpusStatsArgs),
    /// Number of judgments per topic and grade.
    QrelsDist(QrelsDistArgs),
    /// Core topics shared by several query sets.
    Harmonize(HarmonizeArgs),
}

fn parse_measures(s: &str) -> Result<Vec<MeasureId>> {
    s.split(',')
        .filter(|m| !m.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, Args)]
struct MeasureArgs {
    /// Comma-separated measures, e.g. map,bpref,rr,p@20,ndcg,ndcg@20.
    #[arg(long, default_value = "map,bpref,rr,p@20,ndcg,ndcg@20")]
    measures: String,
}

impl MeasureArgs {
    fn list(&self) -> Result<Vec<MeasureId>> {
        let m = parse_measures(&self.measures)?;
        if m.is_empty() {
            return Ok(default_measures());
        }
        Ok(m)
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    qrels: PathBuf,
    #[command(flatten)]
    measures: MeasureArgs,
    /// Label of the evaluation environment, e.g. WT.
    #[arg(long, default_value = "")]
    ee_label: String,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Run files; the baseline is one of them.
    #[arg(required = true)]
    runs: Vec<PathBuf>,
    #[arg(long)]
    qrels: PathBuf,
    /// Tag of the baseline run.
    #[arg(long)]
    baseline: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bonferroni family size; defaults to the number of non-baseline runs.
    #[arg(long)]
    family_size: Option<usize>,
    /// Bold the best value of each measure (markdown only).
    #[arg(long)]
    bold_best: bool,
    #[command(flatten)]
    measures: MeasureArgs,
}

#[derive(Debug, Args)]
struct ReplicabilityArgs {
    #[arg(long)]
    pivot_ee1: PathBuf,
    #[arg(long)]
    pivot_ee2: PathBuf,
    #[arg(long)]
    system_ee1: PathBuf,
    #[arg(long)]
    system_ee2: PathBuf,
    #[arg(long)]
    qrels_ee1: PathBuf,
    #[arg(long)]
    qrels_ee2: PathBuf,
    #[arg(long)]
    queries_ee1: PathBuf,
    #[arg(long)]
    queries_ee2: PathBuf,
    /// Topic alignment: by-text (normalized query strings) or by-id.
    #[arg(long, default_value = "by-text", value_parser = parse_mode)]
    mode: AlignMode,
    #[arg(long, default_value = "EE1")]
    ee1_label: String,
    #[arg(long, default_value = "EE2")]
    ee2_label: String,
    /// Use Welch's unequal-variance t-test instead of Student's.
    #[arg(long)]
    welch: bool,
    /// Directory for ER-vs-ΔRI scatter plots, one SVG per measure.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Directory for per-topic drift tables and bar charts of the system.
    #[arg(long)]
    drift: Option<PathBuf>,
    #[command(flatten)]
    measures: MeasureArgs,
}

#[derive(Debug, Args)]
struct FuseArgs {
    #[arg(required = true)]
    runs: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: f64,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    #[arg(long, default_value = "rrf")]
    tag: String,
    /// Pick k by sweeping against these qrels instead of using --k.
    #[arg(long)]
    sweep_qrels: Option<PathBuf>,
    #[arg(long, default_value = "ndcg")]
    sweep_measure: String,
    /// Comma-separated k grid for the sweep; defaults to 10,20,...,100.
    #[arg(long)]
    k_values: Option<String>,
}

#[derive(Debug, Args)]
struct CorpusDiffArgs {
    old: PathBuf,
    new: PathBuf,
    #[arg(long, default_value = "chars")]
    unit: LengthUnit,
    /// Also write a stacked-bar SVG here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorpusStatsArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    /// Topic ids left out of the query length statistics.
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<String>,
    #[arg(long, default_value = "tokens")]
    unit: LengthUnit,
}

#[derive(Debug, Args)]
struct QrelsDistArgs {
    qrels: PathBuf,
}

#[derive(Debug, Args)]
struct HarmonizeArgs {
    #[arg(required = true, num_args = 2..)]
    queries: Vec<PathBuf>,
    #[arg(long, default_value = "by-text", value_parser = parse_mode)]
    mode: AlignMode,
    /// Comma-separated EE labels; defaults to the file stems.
    #[arg(long, value_delimiter = ',')]
    labels: Vec<String>,
}

fn parse_mode(s: &str) -> std::result::Result<AlignMode, String> {
    match s {
        "by-text" | "text" => Ok(AlignMode::ByText),
        "by-id" | "id" => Ok(AlignMode::ById),
        other => Err(format!("unknown mode {other:?}, expected by-text or by-id")),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::from(e).in_file(path))
}

fn warn_all(path: &Path, warnings: &[String]) {
    for w in warnings {
        log::warn!("{}: {w}", path.display());
    }
}

fn read_run(path: &Path) -> Result<Run> {
    let parsed = parse_run(open(path)?).map_err(|e| e.in_file(path))?;
    warn_all(path, &parsed.warnings);
    Ok(parsed.value)
}

fn read_qrels(path: &Path) -> Result<Qrels> {
    let parsed = parse_qrels(open(path)?).map_err(|e| e.in_file(path))?;
    warn_all(path, &parsed.warnings);
    Ok(parsed.value)
}

fn read_queries(path: &Path, label: &str) -> Result<QuerySet> {
    parse_queries(open(path)?, label).map_err(|e| e.in_file(path))
}

fn read_manifest(path: &Path, unit: LengthUnit) -> Result<CorpusManifest> {
    parse_manifest(open(path)?, file_label(path), unit).map_err(|e| e.in_file(path))
}

fn file_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn to_json_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

/// File-name-safe form of a measure name.
fn measure_slug(m: MeasureId) -> String {
    m.to_string().to_ascii_lowercase().replace('@', "_")
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command; `Ok` carries the exit code for outcomes that are
/// not errors but still non-zero.
pub fn execute(cli: &Cli) -> Result<i32> {
    let out = &cli.output;
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Replicability(a) => cmd_replicability(a, out),
        Command::Fuse(a) => cmd_fuse(a, out),
        Command::CorpusDiff(a) => cmd_corpus_diff(a, out),
        Command::CorpusStats(a) => cmd_corpus_stats(a, out),
        Command::QrelsDist(a) => cmd_qrels_dist(a, out),
        Command::Harmonize(a) => cmd_harmonize(a, out),
    }
}

/// ARP of each table as one row: `System, measure...`.
fn arp_table(tables: &[ScoreTable], measures: &[MeasureId], precision: usize) -> Result<TextTable> {
    let mut t = TextTable::new(
        std::iter::once("System".to_string()).chain(measures.iter().map(ToString::to_string)),
    );
    for table in tables {
        let mut row = vec![table.run_tag.clone()];
        for &m in measures {
            row.push(fmt_value(arp(table, m, None)?, precision));
        }
        t.push(row);
    }
    Ok(t)
}

fn cmd_eval(a: &EvalArgs, out: &OutputSpec) -> Result<i32> {
    let measures = a.measures.list()?;
    let run = read_run(&a.run)?;
    let qrels = read_qrels(&a.qrels)?;
    let table = evaluate(&run, &qrels, &measures)
        .map_err(|e| e.in_file(&a.qrels))?
        .with_ee_label(&a.ee_label);
    let p = out.precision();
    let text = match out.format {
        Format::Json => to_json_string(&table.to_json(p)),
        Format::Tsv => table.to_text_table(p).to_tsv(),
        Format::Markdown => format!(
            "{}\n{}",
            arp_table(std::slice::from_ref(&table), table.measures(), p)?.to_markdown(1),
            table.to_text_table(p).to_markdown(2)
        ),
    };
    out.emit(&text)?;
    Ok(0)
}

fn cmd_compare(a: &CompareArgs, out: &OutputSpec) -> Result<i32> {
    let measures = a.measures.list()?;
    let qrels = read_qrels(&a.qrels)?;
    let mut tables = Vec::with_capacity(a.runs.len());
    let mut tags = BTreeSet::new();
    for path in &a.runs {
        let run = read_run(path)?;
        if !tags.insert(run.tag.clone()) {
            return Err(Error::InvalidArgument(format!("run tag {} used twice", run.tag)).in_file(path));
        }
        tables.push(evaluate(&run, &qrels, &measures)?);
    }
    let base_idx = tables
        .iter()
        .position(|t| t.run_tag == a.baseline)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("baseline tag {:?} not among the runs", a.baseline))
        })?;
    let baseline = tables.remove(base_idx);

    // per measure: significance of each non-baseline table
    let mut results = Vec::with_capacity(measures.len());
    for &m in &measures {
        results.push(paired_ttest_bonferroni(&tables, &baseline, m, a.alpha, a.family_size)?);
    }

    let p = out.precision();
    let all: Vec<&ScoreTable> = std::iter::once(&baseline).chain(&tables).collect();
    if out.format == Format::Json {
        let systems: Vec<_> = all
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut arps = serde_json::Map::new();
                let mut pvals = serde_json::Map::new();
                let mut sig = serde_json::Map::new();
                for (mi, &m) in measures.iter().enumerate() {
                    let v = arp(t, m, None).unwrap_or_default();
                    arps.insert(m.to_string(), json!(round_to(v, p)));
                    if i > 0 {
                        let r = &results[mi][i - 1];
                        pvals.insert(m.to_string(), json!(round_to(r.p_value, p)));
                        sig.insert(m.to_string(), json!(r.significant));
                    }
                }
                json!({
                    "run_tag": t.run_tag,
                    "baseline": i == 0,
                    "arp": arps,
                    "p_values": pvals,
                    "significant": sig,
                })
            })
            .collect();
        let doc = json!({
            "alpha": a.alpha,
            "family_size": a.family_size.unwrap_or(tables.len()),
            "measures": measures.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "systems": systems,
        });
        out.emit(&to_json_string(&doc))?;
        return Ok(0);
    }

    let markdown = out.format == Format::Markdown;
    let mut best = Vec::with_capacity(measures.len());
    for &m in &measures {
        let mut top = f64::NEG_INFINITY;
        for t in &all {
            top = top.max(arp(t, m, None)?);
        }
        best.push(top);
    }
    let mut table = TextTable::new(
        std::iter::once("System".to_string()).chain(measures.iter().map(ToString::to_string)),
    );
    for (i, t) in all.iter().enumerate() {
        let mut row = vec![t.run_tag.clone()];
        for (mi, &m) in measures.iter().enumerate() {
            let v = arp(t, m, None)?;
            let mut cell = fmt_value(v, p);
            if i > 0 && results[mi][i - 1].significant {
                cell.push_str(if markdown { "\\*" } else { "*" });
            }
            if markdown && a.bold_best && v == best[mi] {
                cell = format!("**{cell}**");
            }
            row.push(cell);
        }
        table.push(row);
    }
    out.emit(&out.render(&table, 1))?;
    Ok(0)
}

fn cmd_replicability(a: &ReplicabilityArgs, out: &OutputSpec) -> Result<i32> {
    let measures = a.measures.list()?;
    let variant = if a.welch {
        TTestVariant::Welch
    } else {
        TTestVariant::Student
    };
    let q1 = read_queries(&a.queries_ee1, &a.ee1_label)?;
    let q2 = read_queries(&a.queries_ee2, &a.ee2_label)?;
    let mut alignment = core_topics(&[q1, q2], a.mode)?;
    for w in &alignment.warnings {
        log::warn!("{w}");
    }

    let qrels1 = read_qrels(&a.qrels_ee1)?;
    let qrels2 = read_qrels(&a.qrels_ee2)?;
    let before = alignment.len();
    alignment.retain(|i, t| if i == 0 { qrels1.contains_topic(t) } else { qrels2.contains_topic(t) });
    if alignment.len() < before {
        log::warn!(
            "{} core topics lack qrels in one of the EEs and were dropped",
            before - alignment.len()
        );
    }
    if alignment.is_empty() {
        return Err(Error::EmptyResult("no core topic has qrels in both EEs".into()));
    }
    let core1 = alignment.topics_for(0);
    let core2 = alignment.topics_for(1);

    let eval = |run: &Path, qrels: &Qrels, label: &str| -> Result<ScoreTable> {
        Ok(evaluate(&read_run(run)?, qrels, &measures)?.with_ee_label(label))
    };
    let pivot1 = eval(&a.pivot_ee1, &qrels1, &a.ee1_label)?;
    let pivot2 = eval(&a.pivot_ee2, &qrels2, &a.ee2_label)?;
    let system1 = eval(&a.system_ee1, &qrels1, &a.ee1_label)?;
    let system2 = eval(&a.system_ee2, &qrels2, &a.ee2_label)?;

    let side = |label: &str, pivot: &ScoreTable, system: &ScoreTable, core: &[String]| EeSide {
        label: label.to_string(),
        pivot: pivot.clone(),
        system: system.clone(),
        core_topics: core.to_vec(),
    };
    let pivot_pair = EePair::new(
        side(&a.ee1_label, &pivot1, &pivot1, &core1),
        side(&a.ee2_label, &pivot2, &pivot2, &core2),
    )?;
    let system_pair = EePair::new(
        side(&a.ee1_label, &pivot1, &system1, &core1),
        side(&a.ee2_label, &pivot2, &system2, &core2),
    )?;
    let pivot_report = replicability_report(&pivot_pair, &measures, variant)?;
    let system_report = replicability_report(&system_pair, &measures, variant)?;
    let reports = [pivot_report, system_report];

    let p = out.precision();
    let text = match out.format {
        Format::Json => to_json_string(&json!({
            "core_topics": alignment.len(),
            "mode": alignment.mode,
            "discarded_duplicates": alignment.discarded,
            "t_test": variant,
            "reports": reports.iter().map(|r| r.to_json(p)).collect::<Vec<_>>(),
        })),
        Format::Tsv => reports_table(&reports, p, true).to_tsv(),
        Format::Markdown => reports_table(&reports, p, false).to_markdown(2),
    };
    out.emit(&text)?;

    if let Some(dir) = &a.plot {
        write_scatter_plots(dir, &reports)?;
    }
    if let Some(dir) = &a.drift {
        fs::create_dir_all(dir).map_err(|e| Error::from(e).in_file(dir))?;
        for &m in &measures {
            let drift = topic_drift(&system1, &system2, &core1, &core2, m)?;
            let mut t = TextTable::new(["topic_ee1", "topic_ee2", "delta"]);
            for d in &drift {
                t.push([d.topic_ee1.clone(), d.topic_ee2.clone(), fmt_value(d.delta, p)]);
            }
            let stem = dir.join(format!("drift_{}", measure_slug(m)));
            let title = format!(
                "{} Δ{m} per topic, {} to {}",
                system1.run_tag, a.ee1_label, a.ee2_label
            );
            write_file(&stem.with_extension("tsv"), &t.to_tsv())?;
            write_file(&stem.with_extension("svg"), &plot::drift_svg(&title, &drift))?;
        }
    }

    Ok(if reports[1].all_undefined() {
        EXIT_ALL_UNDEFINED
    } else {
        0
    })
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::from(e).in_file(path))
}

fn write_scatter_plots(dir: &Path, reports: &[ReplicabilityReport]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::from(e).in_file(dir))?;
    let Some(first) = reports.first() else {
        return Ok(());
    };
    for row in &first.rows {
        let m = row.measure;
        let points: Vec<(String, f64, f64)> = reports
            .iter()
            .filter_map(|r| {
                let row = r.row(m)?;
                Some((r.system_tag.clone(), row.er?, row.delta_ri?))
            })
            .collect();
        let title = format!("ER vs ΔRI ({m}), {} to {}", first.ee1_label, first.ee2_label);
        write_file(
            &dir.join(format!("er_dri_{}.svg", measure_slug(m))),
            &plot::er_delta_ri_svg(&title, &points),
        )?;
    }
    Ok(())
}

fn cmd_fuse(a: &FuseArgs, out: &OutputSpec) -> Result<i32> {
    if a.runs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "fusion needs at least 2 runs, got {}",
            a.runs.len()
        )));
    }
    let runs = a
        .runs
        .iter()
        .map(|p| read_run(p))
        .collect::<Result<Vec<_>>>()?;
    let mut config = FusionConfig {
        k: a.k,
        depth: a.depth,
        tag: a.tag.clone(),
    };
    if let Some(qrels_path) = &a.sweep_qrels {
        let qrels = read_qrels(qrels_path)?;
        let measure: MeasureId = a.sweep_measure.parse()?;
        let grid = match &a.k_values {
            Some(s) => s
                .split(',')
                .map(|k| {
                    k.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad k value {k:?}")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => default_k_grid(),
        };
        let sweep = rrf_sweep(&runs, &qrels, measure, &grid, &config)?;
        for (k, v) in &sweep.arps {
            log::info!("k = {k}: {measure} = {v:.4}");
        }
        eprintln!("best k = {} ({measure})", sweep.best_k);
        config.k = sweep.best_k;
    }
    let fused = rrf_fuse(&runs, &config)?;
    let mut buf = Vec::new();
    write_run(&fused, &mut buf)?;
    out.emit(&String::from_utf8(buf).expect("run output is UTF-8"))?;
    Ok(0)
}

fn cmd_corpus_diff(a: &CorpusDiffArgs, out: &OutputSpec) -> Result<i32> {
    let old = read_manifest(&a.old, a.unit)?;
    let new = read_manifest(&a.new, a.unit)?;
    let (stats, warnings) = diff_corpora(&old, &new);
    for w in &warnings {
        log::warn!("{w}");
    }
    let text = match out.format {
        Format::Json => to_json_string(&serde_json::to_value(stats).expect("stats serialize")),
        _ => {
            let mut t = TextTable::new(["category", "count"]);
            for (name, v) in [
                ("added", stats.added),
                ("removed", stats.removed),
                ("increased", stats.increased),
                ("decreased", stats.decreased),
                ("unchanged", stats.unchanged),
                ("matched_urls", stats.matched_urls),
            ] {
                t.push([name.to_string(), v.to_string()]);
            }
            out.render(&t, 1)
        }
    };
    out.emit(&text)?;
    if let Some(svg) = &a.svg {
        let label = format!("{}→{}", old.ee_label, new.ee_label);
        write_file(svg, &plot::evolution_svg(&[(label, stats)]))?;
    }
    Ok(0)
}

fn cmd_corpus_stats(a: &CorpusStatsArgs, out: &OutputSpec) -> Result<i32> {
    let manifest = read_manifest(&a.manifest, a.unit)?;
    let queries = read_queries(&a.queries, &file_label(&a.queries))?;
    let exclusions: BTreeSet<String> = a.exclude.iter().cloned().collect();
    let s = collection_stats(&manifest, &queries, &exclusions);
    let p = out.precision();
    let text = match out.format {
        Format::Json => to_json_string(&serde_json::to_value(&s).expect("stats serialize")),
        _ => {
            let mut t = TextTable::new(["statistic", "value"]);
            let rows = [
                ("documents", s.doc_count.to_string()),
                ("mean document length", fmt_value(s.doc_length.mean, p)),
                ("min document length", fmt_value(s.doc_length.min, 0)),
                ("max document length", fmt_value(s.doc_length.max, 0)),
                ("queries", s.query_count.to_string()),
                ("excluded queries", s.excluded_queries.to_string()),
                ("mean query length", fmt_value(s.query_length.mean, p)),
                ("min query length", fmt_value(s.query_length.min, 0)),
                ("max query length", fmt_value(s.query_length.max, 0)),
            ];
            for (k, v) in rows {
                t.push([k.to_string(), v]);
            }
            out.render(&t, 1)
        }
    };
    out.emit(&text)?;
    Ok(0)
}

fn cmd_qrels_dist(a: &QrelsDistArgs, out: &OutputSpec) -> Result<i32> {
    let qrels = read_qrels(&a.qrels)?;
    let d = qrels_distribution(&qrels).map_err(|e| e.in_file(&a.qrels))?;
    let p = out.precision();
    let text = match out.format {
        Format::Json => to_json_string(&serde_json::to_value(&d).expect("distribution serializes")),
        _ => {
            let grades: Vec<_> = d.per_grade.keys().copied().collect();
            let mut t = TextTable::new(
                std::iter::once("topic".to_string())
                    .chain(grades.iter().map(|g| format!("grade {g}")))
                    .chain(std::iter::once("total".to_string())),
            );
            for (topic, g) in &d.per_topic {
                let mut row = vec![topic.clone()];
                row.extend(grades.iter().map(|k| g.counts.get(k).copied().unwrap_or(0).to_string()));
                row.push(g.total.to_string());
                t.push(row);
            }
            for (name, pick) in [("mean", 0), ("min", 1), ("max", 2)] {
                let sel = |s: &crate::corpus::Summary| [s.mean, s.min, s.max][pick];
                let mut row = vec![name.to_string()];
                row.extend(grades.iter().map(|g| fmt_value(sel(&d.per_grade[g]), p)));
                row.push(fmt_value(sel(&d.overall), p));
                t.push(row);
            }
            out.render(&t, 1)
        }
    };
    out.emit(&text)?;
    Ok(0)
}

fn cmd_harmonize(a: &HarmonizeArgs, out: &OutputSpec) -> Result<i32> {
    if !a.labels.is_empty() && a.labels.len() != a.queries.len() {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {} query files",
            a.labels.len(),
            a.queries.len()
        )));
    }
    let sets = a
        .queries
        .iter()
        .enumerate()
        .map(|(i, path)| {
            let label = a.labels.get(i).cloned().unwrap_or_else(|| file_label(path));
            read_queries(path, &label)
        })
        .collect::<Result<Vec<_>>>()?;
    let alignment = core_topics(&sets, a.mode)?;
    for w in &alignment.warnings {
        log::warn!("{w}");
    }
    eprintln!("{} core topics", alignment.len());
    let text = match out.format {
        Format::Json => to_json_string(&serde_json::to_value(&alignment).expect("alignment serializes")),
        _ => out.render(&alignment.to_text_table(), alignment.ee_labels.len() + 1),
    };
    out.emit(&text)?;
    Ok(0)
}
