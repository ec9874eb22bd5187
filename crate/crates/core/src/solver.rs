//! End-to-end feasibility solving.
//!
//! The first row of the (optionally reduced) instance is enumerated with the
//! quarter-heap enumerator. Each candidate batch goes through a bounded
//! buffer to a pool of validation workers while the enumerator keeps going.

use std::borrow::Cow;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use crossbeam_channel::{bounded, RecvTimeoutError, SendTimeoutError};
use thiserror::Error;

use crate::enumerate1d::{build_quarter_tables, CandidateBatch, EnumError, Enumerator};
use crate::instances::{surrogate_reduce, verify_solution, InstanceError, MspInstance, SolutionVector};
use crate::oracle::{brute_force_all, OracleError, MAX_BRUTE_FORCE_N};
use crate::validate::{
    default_chunk_pairs, BatchOutcome, CpuValidator, ExecMode, ValidationContext, ValidationStats,
    Validator, DEFAULT_MEMORY_BUDGET,
};

/// Instances with fewer columns go to the oracle regardless of configuration.
pub const MIN_QUARTER_COLUMNS: usize = 4;

/// Default column count up to which exhaustion beats building tables.
pub const DEFAULT_ORACLE_THRESHOLD: usize = 12;

/// How often a blocked producer re-checks cancellation and the deadline.
const SEND_POLL: Duration = Duration::from_millis(20);

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    FirstSolution,
    AllSolutions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Serial,
    Parallel,
}

impl Backend {
    /// A single-threaded pool only adds scheduling overhead, so `Parallel`
    /// degrades to serial execution there.
    fn exec_mode(self) -> ExecMode {
        match self {
            Backend::Parallel if rayon::current_num_threads() > 1 => ExecMode::Parallel,
            _ => ExecMode::Serial,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: SolveMode,
    /// Number of leading rows merged into one surrogate row; 1 disables it.
    pub reduce_rows: usize,
    /// Pairs per validation chunk; `None` derives it from a 512 MiB budget.
    pub chunk_pairs: Option<usize>,
    pub backend: Backend,
    /// Capacity of the batch buffer between enumeration and validation.
    pub pipeline_depth: usize,
    /// Validation threads; 0 picks the available parallelism.
    pub worker_count: usize,
    /// Instances with `n` at most this go straight to exhaustive search.
    pub oracle_threshold: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: SolveMode::FirstSolution,
            reduce_rows: 1,
            chunk_pairs: None,
            backend: Backend::Parallel,
            pipeline_depth: 4,
            worker_count: 0,
            oracle_threshold: DEFAULT_ORACLE_THRESHOLD,
            time_limit: None,
        }
    }
}

impl SolverConfig {
    /// Single-threaded, depth-one pipeline with the serial backend.
    pub fn sequential(mode: SolveMode) -> Self {
        SolverConfig {
            mode,
            backend: Backend::Serial,
            pipeline_depth: 1,
            worker_count: 1,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.reduce_rows == 0 {
            return Err(SolveError::Config("reduce_rows must be at least 1".into()));
        }
        if self.chunk_pairs == Some(0) {
            return Err(SolveError::Config("chunk_pairs must be positive".into()));
        }
        if self.pipeline_depth == 0 {
            return Err(SolveError::Config("pipeline_depth must be positive".into()));
        }
        if self.oracle_threshold > MAX_BRUTE_FORCE_N {
            return Err(SolveError::Config(format!(
                "oracle_threshold must not exceed {MAX_BRUTE_FORCE_N}"
            )));
        }
        Ok(())
    }

    fn workers(&self) -> usize {
        if self.worker_count > 0 {
            self.worker_count
        } else {
            thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
    /// Time limit reached before a solution or exhaustion.
    Unknown,
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub batches: u64,
    pub left_pairs: u64,
    pub right_pairs: u64,
    pub validation: ValidationStats,
    pub peak_table_entries: usize,
    pub peak_h1: usize,
    pub peak_h2: usize,
    /// Rows of the instance that was actually enumerated.
    pub solved_rows: usize,
    pub used_oracle: bool,
    /// Whether enumeration ran to exhaustion.
    pub exhausted: bool,
    pub timed_out: bool,
    pub table_time: Duration,
    pub enumerate_time: Duration,
    /// Summed over workers.
    pub validate_time: Duration,
    pub total_time: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub verdict: Verdict,
    /// Ascending by encoding. Exhaustive in all-solutions mode, a single
    /// vector in first-solution mode.
    pub solutions: Vec<SolutionVector>,
    pub stats: SolveStats,
}

/// Solves with the CPU validator selected by `cfg.backend`.
pub fn solve(inst: &MspInstance, cfg: &SolverConfig) -> Result<SolveResult, SolveError> {
    let validator = CpuValidator::new(cfg.backend.exec_mode());
    solve_with_validator(inst, cfg, &validator)
}

pub fn solve_with_validator(
    inst: &MspInstance,
    cfg: &SolverConfig,
    validator: &dyn Validator,
) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    let start = Instant::now();
    let work: Cow<'_, MspInstance> = if cfg.reduce_rows > 1 {
        Cow::Owned(surrogate_reduce(inst, cfg.reduce_rows)?)
    } else {
        Cow::Borrowed(inst)
    };

    let mut stats = SolveStats {
        solved_rows: work.m(),
        ..Default::default()
    };
    let mut solutions;
    let n = work.n();
    if n < MIN_QUARTER_COLUMNS || n <= cfg.oracle_threshold {
        stats.used_oracle = true;
        stats.exhausted = true;
        solutions = brute_force_all(&work)?;
    } else {
        let t0 = Instant::now();
        let tables = build_quarter_tables(&work, 0)?;
        stats.table_time = t0.elapsed();
        stats.peak_table_entries = tables.total_entries();

        let ctx = ValidationContext {
            inst: &work,
            tables: &tables,
            chunk_pairs: cfg
                .chunk_pairs
                .unwrap_or_else(|| default_chunk_pairs(work.m(), DEFAULT_MEMORY_BUDGET)),
            cancel: &AtomicBool::new(false),
        };
        let deadline = cfg.time_limit.map(|l| start + l);
        let enumerator = Enumerator::new(&tables, work.rhs()[0]);
        let run = pipeline_run(enumerator, validator, &ctx, cfg, deadline);

        stats.batches = run.enum_stats.batches;
        stats.peak_h1 = run.enum_stats.peak_h1;
        stats.peak_h2 = run.enum_stats.peak_h2;
        stats.left_pairs = run.left_pairs;
        stats.right_pairs = run.right_pairs;
        stats.validation = run.validation;
        stats.exhausted = run.exhausted;
        stats.timed_out = run.timed_out;
        stats.enumerate_time = run.enumerate_time;
        stats.validate_time = run.validate_time;
        solutions = run.solutions;
    }

    // The reduced system is equivalent, but only the original is trusted.
    solutions.retain(|x| {
        let ok = verify_solution(inst, x).unwrap_or(false);
        debug_assert!(ok, "solution {x} fails the original system");
        ok
    });
    solutions.sort();
    debug_assert!(solutions.windows(2).all(|w| w[0] != w[1]));
    if cfg.mode == SolveMode::FirstSolution {
        solutions.truncate(1);
    }

    let verdict = if !solutions.is_empty() {
        Verdict::Feasible
    } else if stats.exhausted {
        Verdict::Infeasible
    } else {
        Verdict::Unknown
    };
    stats.total_time = start.elapsed();
    Ok(SolveResult {
        verdict,
        solutions,
        stats,
    })
}

/// Internals of one enumerate-and-validate run.
#[derive(Debug, Default)]
pub struct PipelineOutcome {
    pub solutions: Vec<SolutionVector>,
    pub validation: ValidationStats,
    pub enum_stats: crate::enumerate1d::EnumeratorStats,
    pub left_pairs: u64,
    pub right_pairs: u64,
    pub exhausted: bool,
    pub timed_out: bool,
    /// Some batch was skipped or cut short by the cancel flag.
    pub any_cancelled: bool,
    pub enumerate_time: Duration,
    pub validate_time: Duration,
}

impl PipelineOutcome {
    fn absorb(&mut self, outcome: BatchOutcome, elapsed: Duration) {
        self.any_cancelled |= outcome.cancelled;
        self.validation += outcome.stats;
        self.solutions.extend(outcome.solutions);
        self.validate_time += elapsed;
    }
}

/// Runs the enumerator as the producer and `validator` on the consumer side.
///
/// With `pipeline_depth == 1` and one worker everything runs on the calling
/// thread, batch by batch. Otherwise a bounded buffer of `pipeline_depth`
/// batches feeds the workers and blocks the producer when full. In
/// first-solution mode the first confirmed solution raises the cancel flag,
/// which the producer checks per batch and validators check per chunk pair.
/// A watchdog thread raises the same flag at `deadline`, so a long batch is
/// abandoned at its next chunk boundary rather than run to completion.
pub fn pipeline_run(
    enumerator: Enumerator<'_>,
    validator: &dyn Validator,
    ctx: &ValidationContext<'_>,
    cfg: &SolverConfig,
    deadline: Option<Instant>,
) -> PipelineOutcome {
    let fired = AtomicBool::new(false);
    let (stop_tx, stop_rx) = bounded::<()>(0);
    let mut out = thread::scope(|scope| {
        if let Some(deadline) = deadline {
            let fired = &fired;
            scope.spawn(move || {
                let wait = deadline.saturating_duration_since(Instant::now());
                if let Err(RecvTimeoutError::Timeout) = stop_rx.recv_timeout(wait) {
                    fired.store(true, Ordering::SeqCst);
                    ctx.cancel.store(true, Ordering::SeqCst);
                }
            });
        }
        let out = run_stages(enumerator, validator, ctx, cfg, deadline);
        drop(stop_tx);
        out
    });
    // A deadline that passed after every batch was fully validated is harmless.
    let complete = out.exhausted && !out.any_cancelled;
    if !complete && (fired.load(Ordering::SeqCst) || out.timed_out) {
        out.timed_out = true;
        out.exhausted = false;
    }
    out
}

fn run_stages(
    mut enumerator: Enumerator<'_>,
    validator: &dyn Validator,
    ctx: &ValidationContext<'_>,
    cfg: &SolverConfig,
    deadline: Option<Instant>,
) -> PipelineOutcome {
    let first_only = cfg.mode == SolveMode::FirstSolution;
    let past_deadline = || deadline.is_some_and(|d| Instant::now() >= d);
    let workers = cfg.workers();
    let mut out = PipelineOutcome::default();

    if cfg.pipeline_depth == 1 && workers == 1 {
        loop {
            if past_deadline() {
                out.timed_out = true;
                break;
            }
            let t0 = Instant::now();
            let batch = enumerator.next_batch();
            out.enumerate_time += t0.elapsed();
            let Some(batch) = batch else {
                out.exhausted = true;
                break;
            };
            out.left_pairs += batch.left_pairs.len() as u64;
            out.right_pairs += batch.right_pairs.len() as u64;
            let t1 = Instant::now();
            let outcome = validator.validate(&batch, ctx);
            out.absorb(outcome, t1.elapsed());
            if (first_only && !out.solutions.is_empty()) || out.any_cancelled {
                break;
            }
        }
        out.enum_stats = enumerator.stats();
        return out;
    }

    let (tx, rx) = bounded::<(u64, CandidateBatch)>(cfg.pipeline_depth);
    let results: Mutex<Vec<(u64, BatchOutcome, Duration)>> = Mutex::new(Vec::new());
    let cancel = ctx.cancel;

    thread::scope(|scope| {
        for _ in 0..workers {
            let rx = rx.clone();
            let results = &results;
            scope.spawn(move || {
                for (seq, batch) in rx.iter() {
                    if cancel.load(Ordering::Relaxed) {
                        let skipped = BatchOutcome {
                            cancelled: true,
                            ..Default::default()
                        };
                        results.lock().expect("results lock").push((seq, skipped, Duration::ZERO));
                        continue;
                    }
                    let t0 = Instant::now();
                    let outcome = validator.validate(&batch, ctx);
                    let elapsed = t0.elapsed();
                    if first_only && !outcome.solutions.is_empty() {
                        cancel.store(true, Ordering::Relaxed);
                    }
                    results.lock().expect("results lock").push((seq, outcome, elapsed));
                }
            });
        }
        drop(rx);

        let mut seq = 0u64;
        'produce: loop {
            if cancel.load(Ordering::Relaxed) {
                break;
            }
            if past_deadline() {
                out.timed_out = true;
                cancel.store(true, Ordering::Relaxed);
                break;
            }
            let t0 = Instant::now();
            let batch = enumerator.next_batch();
            out.enumerate_time += t0.elapsed();
            let Some(batch) = batch else {
                out.exhausted = true;
                break;
            };
            out.left_pairs += batch.left_pairs.len() as u64;
            out.right_pairs += batch.right_pairs.len() as u64;
            let mut item = (seq, batch);
            seq += 1;
            loop {
                match tx.send_timeout(item, SEND_POLL) {
                    Ok(()) => break,
                    Err(SendTimeoutError::Timeout(back)) => {
                        if cancel.load(Ordering::Relaxed) {
                            break 'produce;
                        }
                        if past_deadline() {
                            out.timed_out = true;
                            cancel.store(true, Ordering::Relaxed);
                            break 'produce;
                        }
                        item = back;
                    }
                    Err(SendTimeoutError::Disconnected(_)) => break 'produce,
                }
            }
        }
        drop(tx);
    });

    let mut results = results.into_inner().expect("results lock");
    results.sort_by_key(|r| r.0);
    for (_, outcome, elapsed) in results {
        out.absorb(outcome, elapsed);
    }
    out.enum_stats = enumerator.stats();
    out
}
