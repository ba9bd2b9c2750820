//! `minids` — solve, generate, verify and benchmark minimum independent
//! dominating set instances.
//!
//! Exit codes: 0 success, 1 runtime failure (unreadable input, invalid
//! solution, refused oracle), 2 usage errors.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use minids_core::dimacs;
use minids_core::gen::GenParams;
use minids_core::graph::Graph;
use minids_core::harness::{self, Mode, RunRecord};
use minids_core::ilps::{IlpsConfig, IlpsRun, InitKind, RunResult};
use minids_core::oracle;
use minids_core::rng::seed_for_run;

#[derive(Parser)]
#[command(
    name = "minids",
    about = "Minimum independent dominating set solver (k-swap local search + iterated local & plateau search)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver on one instance.
    Solve(SolveArgs),
    /// Generate an instance and write it as DIMACS ASCII.
    Gen(GenArgs),
    /// Check that a solution file is an independent dominating set.
    Verify(VerifyArgs),
    /// Exact minimum via exhaustive search (small instances only).
    Oracle(OracleArgs),
    /// Run an experiment spec (JSON) and write CSV/JSON results.
    Experiment(ExperimentArgs),
}

/// Instance selection shared by several subcommands.
#[derive(Args, Clone)]
struct InstanceArgs {
    /// DIMACS ASCII file to load.
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Generator spec, e.g. random:1000:0.5, grid:10x10, hamming:6:2,
    /// johnson:8:2:4 (append :seed=N to pin the generator seed).
    #[arg(long)]
    gen: Option<String>,
    /// Work on the complement of the loaded graph.
    #[arg(long)]
    complement: bool,
}

impl InstanceArgs {
    fn load(&self, default_seed: u64) -> Result<(Graph, String), String> {
        let (graph, label) = match (&self.input, &self.gen) {
            (Some(path), None) => {
                let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
                let outcome = dimacs::parse_dimacs(BufReader::new(file))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                if outcome.duplicate_edges > 0 {
                    eprintln!(
                        "warning: {} duplicate edge line(s) collapsed",
                        outcome.duplicate_edges
                    );
                }
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                (outcome.graph, label)
            }
            (None, Some(spec)) => {
                let params = GenParams::parse(spec, default_seed).map_err(|e| e.to_string())?;
                (params.build(), params.to_string())
            }
            _ => return Err("set exactly one of --input or --gen".into()),
        };
        if self.complement {
            Ok((graph.complement(), format!("{label}:complement")))
        } else {
            Ok((graph, label))
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Neighborhood order of the local search.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    k: u8,
    /// Penalty delay (halving period of the vertex penalties).
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    delta: u32,
    /// Expected number of vertices forced in per kick.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    nu: u32,
    /// Wall-clock limit per run, seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Iteration limit per run.
    #[arg(long)]
    max_iterations: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Independent runs (seeds seed, seed+1, ...).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    runs: u32,
    #[arg(long, value_enum, default_value_t = InitArg::Greedy)]
    init: InitArg,
    /// With k=3: run the plateau search only when the current size is
    /// within this margin of the incumbent.
    #[arg(long)]
    plateau_gate: Option<u32>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    /// Write a JSON-lines per-iteration trace (single run only).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Greedy,
    Random,
}

impl From<InitArg> for InitKind {
    fn from(value: InitArg) -> Self {
        match value {
            InitArg::Greedy => InitKind::Greedy,
            InitArg::Random => InitKind::Random,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct GenArgs {
    /// Generator spec (see `solve --gen`).
    spec: String,
    #[arg(long)]
    complement: bool,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Generator seed for random kinds.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Solution file: whitespace/newline-separated 1-based vertex ids.
    #[arg(long)]
    solution: PathBuf,
    /// Generator seed when --gen is used.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment spec file (JSON).
    spec: PathBuf,
    /// Directory for runs.csv / runs.json / aggregates.csv.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

/// JSON report for `solve`.
#[derive(Serialize)]
struct SolveReport {
    instance: String,
    n: usize,
    m: usize,
    k: u8,
    delta: u32,
    nu: u32,
    runs: Vec<RunReport>,
}

#[derive(Serialize)]
struct RunReport {
    run: u32,
    seed: u64,
    best_size: u32,
    /// Sorted, 1-based vertex ids.
    solution: Vec<u32>,
    ttb_s: f64,
    iterations: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let (graph, label) = args.instance.load(args.seed)?;
    if args.time_limit.is_none() && args.max_iterations.is_none() {
        return Err("set --time-limit and/or --max-iterations".into());
    }
    if args.trace.is_some() && args.runs != 1 {
        return Err("--trace requires --runs 1".into());
    }
    let base_config = IlpsConfig {
        k: args.k,
        delta: args.delta,
        nu: args.nu,
        time_limit: args.time_limit.map(Duration::from_secs_f64),
        max_iterations: args.max_iterations,
        seed: args.seed,
        init: args.init.into(),
        plateau_gate: args.plateau_gate,
    };
    base_config.validate()?;

    let results: Vec<RunResult> = if let Some(trace_path) = &args.trace {
        vec![run_traced(&graph, &base_config, trace_path)?]
    } else {
        let configs: Vec<IlpsConfig> = (0..args.runs)
            .map(|run| {
                let mut config = base_config.clone();
                config.seed = seed_for_run(args.seed, run as u64);
                config
            })
            .collect();
        harness::thread_pool().install(|| {
            use rayon::prelude::*;
            configs
                .par_iter()
                .map(|config| minids_core::ilps::ilps(&graph, config))
                .collect()
        })
    };

    let report = SolveReport {
        instance: label,
        n: graph.vertex_count(),
        m: graph.edge_count(),
        k: args.k,
        delta: args.delta,
        nu: args.nu,
        runs: results
            .iter()
            .enumerate()
            .map(|(run, result)| RunReport {
                run: run as u32,
                seed: result.seed,
                best_size: result.best_size,
                solution: result.best_solution.iter().map(|&v| v + 1).collect(),
                ttb_s: result.time_to_best,
                iterations: result.iterations,
            })
            .collect(),
    };

    match args.output {
        OutputFormat::Text => {
            for run in &report.runs {
                println!(
                    "run {} seed {}: best size {} (ttb {:.3}s, {} iterations)",
                    run.run, run.seed, run.best_size, run.ttb_s, run.iterations
                );
                let ids: Vec<String> = run.solution.iter().map(|v| v.to_string()).collect();
                println!("solution: {}", ids.join(" "));
            }
            if report.runs.len() > 1 {
                let best = report.runs.iter().map(|r| r.best_size).min().unwrap();
                println!("best over {} runs: {best}", report.runs.len());
            }
        }
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        OutputFormat::Csv => {
            let records: Vec<RunRecord> = report
                .runs
                .iter()
                .map(|run| RunRecord {
                    instance: report.instance.clone(),
                    n: graph.vertex_count(),
                    p_or_density: graph.density(),
                    k: args.k,
                    delta: args.delta,
                    nu: args.nu,
                    run: run.run,
                    seed: run.seed,
                    best_size: run.best_size,
                    ttb_s: run.ttb_s,
                    iterations: run.iterations,
                })
                .collect();
            let mut out = Vec::new();
            harness::write_records_csv(&records, &mut out).map_err(|e| e.to_string())?;
            print!("{}", String::from_utf8_lossy(&out));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_traced(
    graph: &Graph,
    config: &IlpsConfig,
    trace_path: &Path,
) -> Result<RunResult, String> {
    let file =
        File::create(trace_path).map_err(|e| format!("{}: {e}", trace_path.display()))?;
    let mut writer = BufWriter::new(file);
    let mut run = IlpsRun::new(graph, config.clone());
    while !run.finished() {
        let record = run.step();
        serde_json::to_writer(&mut writer, &record).map_err(|e| e.to_string())?;
        writer.write_all(b"\n").map_err(|e| e.to_string())?;
    }
    writer.flush().map_err(|e| e.to_string())?;
    Ok(run.into_result())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let params = GenParams::parse(&args.spec, args.seed).map_err(|e| e.to_string())?;
    let mut graph = params.build();
    if args.complement {
        graph = graph.complement();
    }
    match &args.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
            dimacs::write_dimacs(&graph, BufWriter::new(file)).map_err(|e| e.to_string())?;
        }
        None => {
            let stdout = std::io::stdout();
            dimacs::write_dimacs(&graph, stdout.lock()).map_err(|e| e.to_string())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_solution_ids(path: &Path, n: usize) -> Result<Vec<u32>, String> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut ids = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| e.to_string())?;
        for token in line.split([' ', '\t', ',']) {
            let token = token.trim();
            if token.is_empty() || token.starts_with('#') {
                continue;
            }
            let id: u64 = token
                .parse()
                .map_err(|_| format!("bad vertex id `{token}` in {}", path.display()))?;
            if id < 1 || id > n as u64 {
                return Err(format!("vertex id {id} out of range 1..={n}"));
            }
            ids.push(id as u32 - 1);
        }
    }
    Ok(ids)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let (graph, label) = args.instance.load(args.seed)?;
    let ids = read_solution_ids(&args.solution, graph.vertex_count())?;
    match minids_core::verify_solution(&graph, &ids) {
        Ok(()) => {
            println!(
                "valid: {} vertices form an independent dominating set of {label}",
                ids.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(defect) => Err(format!("invalid solution for {label}: {defect}")),
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, String> {
    let (graph, label) = args.instance.load(args.seed)?;
    let (size, solution) = oracle::exact_min_ids(&graph).map_err(|e| e.to_string())?;
    match args.output {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct OracleReport {
                instance: String,
                n: usize,
                minimum_size: u32,
                solution: Vec<u32>,
            }
            let report = OracleReport {
                instance: label,
                n: graph.vertex_count(),
                minimum_size: size,
                solution: solution.iter().map(|&v| v + 1).collect(),
            };
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        _ => {
            println!("minimum independent dominating set of {label}: size {size}");
            let ids: Vec<String> = solution.iter().map(|&v| (v + 1).to_string()).collect();
            println!("solution: {}", ids.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<ExitCode, String> {
    let spec = harness::load_spec(&args.spec)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| e.to_string())?;
    if spec.mode == Mode::CoverStudy {
        let rows = harness::run_cover_experiment(&spec).map_err(|e| e.to_string())?;
        let path = args.out_dir.join("cover.csv");
        let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        harness::write_cover_csv(&rows, BufWriter::new(file)).map_err(|e| e.to_string())?;
        for row in &rows {
            let mean = row
                .mean_iterations
                .map(|m| format!("{m:.2}"))
                .unwrap_or_else(|| "censored".into());
            println!(
                "{} k={} delta={} nu={}: mean iterations {mean} ({} censored)",
                row.instance, row.k, row.delta, row.nu, row.censored
            );
        }
        return Ok(ExitCode::SUCCESS);
    }
    let (records, aggregates) = harness::run_experiment(&spec).map_err(|e| e.to_string())?;
    let runs_csv = args.out_dir.join("runs.csv");
    let file = File::create(&runs_csv).map_err(|e| format!("{}: {e}", runs_csv.display()))?;
    harness::write_records_csv(&records, BufWriter::new(file)).map_err(|e| e.to_string())?;
    let runs_json = args.out_dir.join("runs.json");
    let file = File::create(&runs_json).map_err(|e| format!("{}: {e}", runs_json.display()))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &records).map_err(|e| e.to_string())?;
    let agg_csv = args.out_dir.join("aggregates.csv");
    let file = File::create(&agg_csv).map_err(|e| format!("{}: {e}", agg_csv.display()))?;
    harness::write_aggregates_csv(&aggregates, BufWriter::new(file)).map_err(|e| e.to_string())?;
    for row in &aggregates {
        println!(
            "{} k={} delta={} nu={}: min {} avg {:.1} max {} (mean ttb {:.1}s, {} runs)",
            row.instance, row.k, row.delta, row.nu, row.min, row.avg, row.max, row.mean_ttb_s,
            row.runs
        );
    }
    println!(
        "wrote {}, {}, {}",
        runs_csv.display(),
        runs_json.display(),
        agg_csv.display()
    );
    Ok(ExitCode::SUCCESS)
}
