//! `msp`: solve, generate, verify and benchmark market split instances.
//!
//! Exit codes: 0 feasible / valid / success, 1 infeasible / invalid,
//! 2 error (including time-limit exhaustion in `solve`).

mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use msp_core::instances::{generate_instance, parse_instance, verify_solution, write_instance};
use msp_core::solver::{solve, Backend, SolveMode, SolveResult, SolverConfig, Verdict};
use msp_core::{MspInstance, SolutionVector};

use bench::{k_from_file_name, verdict_label, BenchRecord, BenchReport, ClassKey};

#[derive(Parser)]
#[command(name = "msp", version, about = "Market split feasibility solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file.
    Solve(SolveArgs),
    /// Write seeded random instances of the (m, 10(m-1), K) class.
    Generate(GenerateArgs),
    /// Check a 0/1 solution string against an instance.
    Verify(VerifyArgs),
    /// Solve every instance in a directory and print a timing table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Serial,
    Parallel,
}

#[derive(Args, Clone)]
struct Tuning {
    /// Merge the first R rows into one surrogate row (1 = no reduction).
    #[arg(long = "reduce", default_value_t = 1)]
    reduce: usize,
    /// Pairs per validation chunk (default from a 512 MiB budget).
    #[arg(long)]
    chunk_pairs: Option<usize>,
    /// Validation worker threads (0 = available parallelism).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Batches buffered between enumeration and validation.
    #[arg(long, default_value_t = 4)]
    pipeline_depth: usize,
    #[arg(long, value_enum, default_value = "parallel")]
    backend: BackendArg,
    /// Emit a machine-readable `stats` record.
    #[arg(long)]
    stats: bool,
}

impl Tuning {
    fn config(&self, mode: SolveMode, time_limit: Option<f64>) -> SolverConfig {
        SolverConfig {
            mode,
            reduce_rows: self.reduce,
            chunk_pairs: self.chunk_pairs,
            backend: match self.backend {
                BackendArg::Serial => Backend::Serial,
                BackendArg::Parallel => Backend::Parallel,
            },
            pipeline_depth: self.pipeline_depth,
            worker_count: self.workers,
            time_limit: time_limit.map(Duration::from_secs_f64),
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    path: PathBuf,
    /// Enumerate every solution instead of stopping at the first.
    #[arg(long)]
    all: bool,
    /// Give up after this many seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[command(flatten)]
    tuning: Tuning,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    m: usize,
    /// Coefficients are drawn from [0, K).
    #[arg(long = "K", alias = "k")]
    k: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    path: PathBuf,
    /// n characters of 0/1, x_1 leftmost.
    solution: String,
}

#[derive(Args)]
struct BenchArgs {
    dir: PathBuf,
    /// Per-instance limit in seconds; unsolved entries print as `-`.
    #[arg(long)]
    time_limit: Option<f64>,
    #[command(flatten)]
    tuning: Tuning,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<MspInstance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn stats_record(res: &SolveResult) -> String {
    let s = &res.stats;
    let v = &s.validation;
    format!(
        "verdict={} solutions={} batches={} left_pairs={} right_pairs={} candidate_pairs={} \
         hash_hits={} exact_hits={} filtered_residuals={} chunk_pairs_matched={} \
         peak_table_entries={} peak_h1={} peak_h2={} solved_rows={} used_oracle={} exhausted={} \
         table_s={:.6} enumerate_s={:.6} validate_s={:.6} total_s={:.6}",
        verdict_label(res.verdict),
        res.solutions.len(),
        s.batches,
        s.left_pairs,
        s.right_pairs,
        v.candidate_pairs,
        v.hash_hits,
        v.exact_hits,
        v.filtered_residuals,
        v.chunk_pairs_matched,
        s.peak_table_entries,
        s.peak_h1,
        s.peak_h2,
        s.solved_rows,
        s.used_oracle,
        s.exhausted,
        s.table_time.as_secs_f64(),
        s.enumerate_time.as_secs_f64(),
        s.validate_time.as_secs_f64(),
        s.total_time.as_secs_f64(),
    )
}

fn cmd_solve(args: SolveArgs) -> Result<u8, String> {
    let inst = load(&args.path)?;
    let mode = if args.all {
        SolveMode::AllSolutions
    } else {
        SolveMode::FirstSolution
    };
    let cfg = args.tuning.config(mode, args.time_limit);
    let res = solve(&inst, &cfg).map_err(|e| e.to_string())?;
    match res.verdict {
        Verdict::Feasible => println!("FEASIBLE"),
        Verdict::Infeasible => println!("INFEASIBLE"),
        Verdict::Unknown => println!("UNKNOWN"),
    }
    for x in &res.solutions {
        println!("{x}");
    }
    if args.tuning.stats {
        println!("stats {}", stats_record(&res));
    }
    Ok(match res.verdict {
        Verdict::Feasible => 0,
        Verdict::Infeasible => 1,
        Verdict::Unknown => 2,
    })
}

fn cmd_generate(args: GenerateArgs) -> Result<u8, String> {
    fs::create_dir_all(&args.out_dir).map_err(|e| format!("{}: {e}", args.out_dir.display()))?;
    for i in 0..args.count {
        let seed = args.seed.wrapping_add(i);
        let inst = generate_instance(args.m, args.k, seed).map_err(|e| e.to_string())?;
        let name = format!("msp_m{}_n{}_K{}_s{}.txt", inst.m(), inst.n(), args.k, seed);
        let path = args.out_dir.join(name);
        fs::write(&path, write_instance(&inst)).map_err(|e| format!("{}: {e}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, String> {
    let inst = load(&args.path)?;
    let x = SolutionVector::parse(args.solution.trim())
        .ok_or_else(|| format!("solution must consist of 0 and 1, got {:?}", args.solution))?;
    let ok = verify_solution(&inst, &x).map_err(|e| e.to_string())?;
    println!("{}", if ok { "VALID" } else { "INVALID" });
    Ok(if ok { 0 } else { 1 })
}

fn cmd_bench(args: BenchArgs) -> Result<u8, String> {
    let mut paths: Vec<PathBuf> = fs::read_dir(&args.dir)
        .map_err(|e| format!("{}: {e}", args.dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(format!("{}: no instance files", args.dir.display()));
    }
    let cfg = args.tuning.config(SolveMode::FirstSolution, args.time_limit);
    let mut report = BenchReport::default();
    for path in paths {
        let inst = load(&path)?;
        let res = solve(&inst, &cfg).map_err(|e| format!("{}: {e}", path.display()))?;
        let class = ClassKey {
            m: inst.m(),
            n: inst.n(),
            k: k_from_file_name(&path).unwrap_or(inst.k_bound()),
            reduce: args.tuning.reduce,
        };
        if args.tuning.stats {
            println!(
                "bench path={} class={} {}",
                path.display(),
                class.label().replace(' ', ""),
                stats_record(&res)
            );
        }
        report.records.push(BenchRecord {
            path,
            class,
            verdict: res.verdict,
            seconds: res.stats.total_time.as_secs_f64(),
        });
    }
    print!("{}", report.render());
    Ok(0)
}
