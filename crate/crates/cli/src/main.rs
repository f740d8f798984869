//! `callnet`: extract → build → analyze → report.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use callnet_core::community::write_partition_csv;
use callnet_core::extract::relation::{read_relation_table, write_records, TableFormat};
use callnet_core::extract::{extract_archive, NameStyle};
use callnet_core::graph::edgelist::{import_edge_list, write_edge_list};
use callnet_core::graph::gexf::{import_gexf, write_gexf};
use callnet_core::graph::{build_graph, BuildOptions, DirectedGraph};
use callnet_core::metrics::PathSampling;
use callnet_core::report::{
    analyze, render_table, render_top_csv, AnalysisReport, AnalyzeOptions, Stage,
};
use callnet_core::topology::{write_fit_csv, write_histogram_csv};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn output_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Internal(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(
    name = "callnet",
    version,
    about = "Static call graph extraction and network analysis for JVM archives"
)]
struct Cli {
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the caller/callee relation table from a .jar/.war/.ear/.zip.
    Extract(ExtractArgs),
    /// Build the method/class graph from a relation table and write GEXF.
    Build(BuildArgs),
    /// Compute network measures and write a JSON report.
    Analyze(AnalyzeArgs),
    /// Render a JSON report as a text table or top-k CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct ExtractArgs {
    archive: PathBuf,
    /// Output file (default: stdout).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Table format (default: from the output extension, else csv).
    #[arg(long)]
    format: Option<TableFormat>,
    /// Render method names with their JVM descriptors.
    #[arg(long)]
    descriptors: bool,
    /// Skip undecodable entries instead of failing.
    #[arg(long)]
    tolerant: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Gexf,
    Edgelist,
}

#[derive(Args)]
struct BuildArgs {
    table: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Keep only rows whose caller and callee classes lie in this package.
    #[arg(long, default_value = "")]
    prefix: String,
    /// Table format (default: from the input extension).
    #[arg(long)]
    format: Option<TableFormat>,
    #[arg(long, value_enum, default_value = "gexf")]
    output_format: GraphFormat,
}

#[derive(Args)]
struct AnalyzeArgs {
    graph: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "gexf")]
    input_format: GraphFormat,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random graphs in the small-world baseline.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    replicates: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    top: u64,
    /// All-sources BFS regardless of size.
    #[arg(long, conflicts_with = "sampled_paths")]
    exact_paths: bool,
    /// BFS from this many seeded sources.
    #[arg(long, value_name = "K")]
    sampled_paths: Option<usize>,
    /// Smallest degree included in the power-law fit.
    #[arg(long, default_value_t = 1)]
    x_min: usize,
    /// Stage to skip (repeatable): paths, betweenness, pagerank, community,
    /// small-world, power-law.
    #[arg(long = "skip", value_name = "STAGE")]
    skip: Vec<Stage>,
    /// Record the generation time in the report.
    #[arg(long)]
    stamp: bool,
    /// Directory for degree histogram and fit CSVs.
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    /// Write the Louvain partition as vertex,community CSV.
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct ReportArgs {
    report: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn write_output(
    out: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(output_err(path))?;
            let mut w = BufWriter::new(file);
            write(&mut w)
                .and_then(|_| w.flush())
                .map_err(output_err(path))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
                .and_then(|_| lock.flush())
                .map_err(|e| CliError::Internal(format!("stdout: {e}")))
        }
    }
}

fn cmd_extract(a: ExtractArgs) -> Result<(), CliError> {
    let result = extract_archive(&a.archive, a.tolerant).map_err(input_err)?;
    let format = a.format.unwrap_or_else(|| {
        a.out
            .as_deref()
            .map(TableFormat::from_path)
            .unwrap_or_default()
    });
    let style = if a.descriptors {
        NameStyle::WithDescriptor
    } else {
        NameStyle::Plain
    };
    write_output(a.out.as_deref(), |w| {
        write_records(&result.table, w, format, style).map_err(|e| io::Error::other(e))
    })?;
    for s in &result.skipped {
        eprintln!("skipped {}: {}", s.entry, s.reason);
    }
    eprintln!(
        "extracted {} records from {} classes ({} call sites, {} unresolvable, {} skipped entries)",
        result.table.records.len(),
        result.stats.classes,
        result.stats.call_sites,
        result.stats.skipped_unresolvable,
        result.skipped.len()
    );
    Ok(())
}

fn cmd_build(a: BuildArgs) -> Result<(), CliError> {
    let format = a.format.unwrap_or_else(|| TableFormat::from_path(&a.table));
    let table = read_relation_table(&a.table, format).map_err(input_err)?;
    let g = build_graph(&table, &BuildOptions::with_prefix(&a.prefix)).map_err(input_err)?;
    write_output(a.out.as_deref(), |w| match a.output_format {
        GraphFormat::Gexf => write_gexf(&g, w),
        GraphFormat::Edgelist => write_edge_list(&g, w),
    })?;
    eprintln!(
        "built graph: {} vertexes, {} edges",
        g.vertex_count(),
        g.edge_count()
    );
    Ok(())
}

fn load_graph(path: &Path, format: GraphFormat) -> Result<DirectedGraph, CliError> {
    match format {
        GraphFormat::Gexf => import_gexf(path),
        GraphFormat::Edgelist => import_edge_list(path, true),
    }
    .map_err(input_err)
}

fn unix_timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph, a.input_format)?;
    let sampling = match (a.exact_paths, a.sampled_paths) {
        (true, _) => PathSampling::Exact,
        (false, Some(0)) => {
            return Err(CliError::Usage("--sampled-paths must be at least 1".into()))
        }
        (false, Some(k)) => PathSampling::Sampled {
            sources: k,
            seed: a.seed,
        },
        (false, None) => PathSampling::Auto,
    };
    let opts = AnalyzeOptions {
        input: a.graph.display().to_string(),
        seed: a.seed,
        replicates: a.replicates as usize,
        top_k: a.top as usize,
        sampling,
        x_min: a.x_min,
        skip: a.skip.iter().copied().collect(),
        timestamp: a.stamp.then(unix_timestamp),
        ..Default::default()
    };
    let analysis = analyze(&g, &opts).map_err(input_err)?;
    let report = &analysis.report;
    write_output(a.out.as_deref(), |w| {
        w.write_all(report.to_json().as_bytes())
    })?;

    if let (Some(path), Some(p)) = (&a.partition_out, &analysis.partition) {
        let file = File::create(path).map_err(output_err(path))?;
        write_partition_csv(&g, p, BufWriter::new(file))
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    if let (Some(dir), Some(pl)) = (&a.plot_dir, &report.power_law) {
        fs::create_dir_all(dir).map_err(output_err(dir))?;
        for outcome in [&pl.total, &pl.in_degree, &pl.out_degree] {
            let kind = outcome.degree.as_str();
            let path = dir.join(format!("degree_histogram_{kind}.csv"));
            let file = File::create(&path).map_err(output_err(&path))?;
            write_histogram_csv(&outcome.histogram, BufWriter::new(file))
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let path = dir.join(format!("power_law_fit_{kind}.csv"));
            if let Ok(fit) =
                callnet_core::topology::fit_power_law(&outcome.histogram, outcome.x_min)
            {
                let file = File::create(&path).map_err(output_err(&path))?;
                write_fit_csv(&fit, BufWriter::new(file))
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
        }
    }
    if let Some(run) = &report.pagerank_run {
        if !run.converged {
            eprintln!(
                "warning: PageRank did not converge in {} iterations (last delta {:e})",
                run.iterations, run.last_delta
            );
        }
    }
    if !report.incomplete.is_empty() {
        eprintln!(
            "report incomplete: skipped {}",
            report.incomplete.join(", ")
        );
    }
    Ok(())
}

fn cmd_report(a: ReportArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&a.report)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.report.display())))?;
    let report = AnalysisReport::from_json(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.report.display())))?;
    let rendered = match a.format {
        ReportFormat::Table => render_table(&report),
        ReportFormat::Csv => render_top_csv(&report),
        ReportFormat::Json => report.to_json(),
    };
    write_output(a.out.as_deref(), |w| w.write_all(rendered.as_bytes()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Extract(a) => cmd_extract(a),
        Command::Build(a) => cmd_build(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Report(a) => cmd_report(a),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("callnet: {e}");
            ExitCode::from(e.code())
        }
    }
}
