//! Batch validation of candidate pairs against the full constraint system.
//!
//! For a batch `(Q, R)` a combination `(q, r)` is a solution exactly when the
//! left residual `A x_q` equals the right residual `d - A x_r`. Instead of
//! comparing all `|Q| * |R|` combinations, both residual sets are hashed to
//! 64 bits, the left hashes are sorted and every right hash is located by
//! binary search. Hash hits are then confirmed by exact vector equality and a
//! full check of the assembled vector, so the hash only affects speed.
//!
//! Oversized batches are split into chunks of at most `chunk_pairs` pairs per
//! side and every (left chunk, right chunk) combination is matched.

use std::ops::AddAssign;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use crate::enumerate1d::{CandidateBatch, QuarterTables};
use crate::instances::{verify_solution, MspInstance, SolutionVector};

pub const HASH_SEED: u64 = 0xCBF2_9CE4_8422_2325;
pub const HASH_PRIME: u64 = 0x0000_0100_0000_01B3;

/// Default memory budget for one chunk pair's residuals and hashes.
pub const DEFAULT_MEMORY_BUDGET: usize = 512 << 20;

#[inline]
pub fn hash_two(h: u64, v: u64) -> u64 {
    (h ^ v).wrapping_mul(HASH_PRIME)
}

/// Fold of [`hash_two`] over the coordinates, seeded with [`HASH_SEED`].
#[inline]
pub fn encode_vector(vec: &[u64]) -> u64 {
    vec.iter().fold(HASH_SEED, |h, &v| hash_two(h, v))
}

/// Signature of a residual encoder. Anything other than [`encode_vector`] is
/// a test seam; correctness never depends on it.
pub type EncodeFn = fn(&[u64]) -> u64;

/// Pairs per chunk such that one chunk pair fits in `budget_bytes`.
pub fn default_chunk_pairs(m: usize, budget_bytes: usize) -> usize {
    // Per pair: m residual words, one hash, one carried index, the pair itself.
    let per_pair = 8 * m + 8 + 4 + 8;
    (budget_bytes / (2 * per_pair)).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Serial,
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `A x` over `(A-index, B-index)` pairs.
    Left,
    /// `d - A x` over `(C-index, D-index)` pairs.
    Right,
}

/// Residual vectors of one side of a batch, flat with stride `m`.
#[derive(Clone, Debug)]
pub struct ResidualSet {
    pub side: Side,
    pub m: usize,
    vectors: Vec<u64>,
    pairs: Vec<(u32, u32)>,
    /// Right pairs dropped because some coordinate exceeded `d`.
    pub filtered: u64,
}

impl ResidualSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn vector(&self, t: usize) -> &[u64] {
        &self.vectors[t * self.m..(t + 1) * self.m]
    }

    pub fn pair(&self, t: usize) -> (u32, u32) {
        self.pairs[t]
    }
}

/// Hashes aligned with a [`ResidualSet`]; `(hash, index into the set)`.
#[derive(Clone, Debug)]
pub struct EncodedSet {
    pub entries: Vec<(u64, u32)>,
    pub sorted: bool,
    /// Hashes alone, in sorted order; filled by `sort`.
    keys: Vec<u64>,
}

impl EncodedSet {
    pub fn from_entries(entries: Vec<(u64, u32)>) -> Self {
        EncodedSet {
            entries,
            sorted: false,
            keys: Vec::new(),
        }
    }

    pub fn encode(set: &ResidualSet, encode: EncodeFn, mode: ExecMode) -> Self {
        let entries = match mode {
            ExecMode::Serial => (0..set.len())
                .map(|t| (encode(set.vector(t)), t as u32))
                .collect(),
            ExecMode::Parallel => (0..set.len())
                .into_par_iter()
                .map(|t| (encode(set.vector(t)), t as u32))
                .collect(),
        };
        EncodedSet::from_entries(entries)
    }

    /// Sorts by hash; equal hashes stay ordered by index.
    pub fn sort(&mut self, mode: ExecMode) {
        match mode {
            ExecMode::Serial => self.entries.sort_unstable(),
            ExecMode::Parallel => self.entries.par_sort_unstable(),
        }
        self.keys = self.entries.iter().map(|e| e.0).collect();
        self.sorted = true;
    }

    /// Range of sorted entries whose hash equals `h`: a lower-bound search
    /// followed by a scan over the equal run.
    fn equal_range(&self, h: u64) -> std::ops::Range<usize> {
        debug_assert!(self.sorted);
        let keys = &self.keys;
        let lo = keys.partition_point(|&k| k < h);
        let hi = lo + keys[lo..].iter().take_while(|&&k| k == h).count();
        lo..hi
    }
}

pub fn left_residuals(pairs: &[(u32, u32)], tables: &QuarterTables, mode: ExecMode) -> ResidualSet {
    let m = tables.m;
    let fill = |(i, j): (u32, u32), out: &mut [u64]| {
        let ca = tables.a.contrib(i as usize);
        let cb = tables.b.contrib(j as usize);
        for ((o, x), y) in out.iter_mut().zip(ca).zip(cb) {
            *o = x + y;
        }
    };
    let mut vectors = vec![0u64; pairs.len() * m];
    match mode {
        ExecMode::Serial => vectors
            .chunks_exact_mut(m)
            .zip(pairs)
            .for_each(|(out, &p)| fill(p, out)),
        ExecMode::Parallel => vectors
            .par_chunks_exact_mut(m)
            .zip(pairs)
            .for_each(|(out, &p)| fill(p, out)),
    }
    ResidualSet {
        side: Side::Left,
        m,
        vectors,
        pairs: pairs.to_vec(),
        filtered: 0,
    }
}

/// Writes `d - (c_k + d_l)` into `out`; false if a coordinate would go negative.
fn fill_right(tables: &QuarterTables, d: &[u64], (k, l): (u32, u32), out: &mut [u64]) -> bool {
    let cc = tables.c.contrib(k as usize);
    let cd = tables.d.contrib(l as usize);
    let mut ok = true;
    for (((o, x), y), rhs) in out.iter_mut().zip(cc).zip(cd).zip(d) {
        match rhs.checked_sub(x + y) {
            Some(v) => *o = v,
            None => ok = false,
        }
    }
    ok
}

pub fn right_residuals(
    pairs: &[(u32, u32)],
    tables: &QuarterTables,
    d: &[u64],
    mode: ExecMode,
) -> ResidualSet {
    let m = tables.m;
    let mut vectors = vec![0u64; pairs.len() * m];
    let keep: Vec<bool> = match mode {
        ExecMode::Serial => vectors
            .chunks_exact_mut(m)
            .zip(pairs)
            .map(|(out, &p)| fill_right(tables, d, p, out))
            .collect(),
        ExecMode::Parallel => vectors
            .par_chunks_exact_mut(m)
            .zip(pairs)
            .map(|(out, &p)| fill_right(tables, d, p, out))
            .collect(),
    };
    // Compact the kept vectors to the front, preserving order.
    let mut kept = Vec::with_capacity(pairs.len());
    for (t, (&ok, &p)) in keep.iter().zip(pairs).enumerate() {
        if ok {
            let dst = kept.len();
            if dst != t {
                vectors.copy_within(t * m..(t + 1) * m, dst * m);
            }
            kept.push(p);
        }
    }
    vectors.truncate(kept.len() * m);
    let filtered = (pairs.len() - kept.len()) as u64;
    ResidualSet {
        side: Side::Right,
        m,
        vectors,
        pairs: kept,
        filtered,
    }
}

/// Left residuals `A x` and right residuals `d - A x` of a whole batch.
pub fn compute_residuals(
    batch: &CandidateBatch,
    tables: &QuarterTables,
    d: &[u64],
    mode: ExecMode,
) -> (ResidualSet, ResidualSet) {
    let left = left_residuals(&batch.left_pairs, tables, mode);
    let right = right_residuals(&batch.right_pairs, tables, d, mode);
    debug_assert!((0..left.len()).all(|t| left.vector(t)[tables.row] == batch.alpha));
    debug_assert!((0..right.len()).all(|t| right.vector(t)[tables.row] == batch.alpha));
    (left, right)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidationStats {
    /// Left-by-right combinations covered, summed over chunk pairs.
    pub candidate_pairs: u64,
    pub left_vectors: u64,
    pub right_vectors: u64,
    pub filtered_residuals: u64,
    pub hash_hits: u64,
    pub exact_hits: u64,
    pub chunk_pairs_matched: u64,
}

impl AddAssign for ValidationStats {
    fn add_assign(&mut self, o: Self) {
        self.candidate_pairs += o.candidate_pairs;
        self.left_vectors += o.left_vectors;
        self.right_vectors += o.right_vectors;
        self.filtered_residuals += o.filtered_residuals;
        self.hash_hits += o.hash_hits;
        self.exact_hits += o.exact_hits;
        self.chunk_pairs_matched += o.chunk_pairs_matched;
    }
}

#[derive(Clone, Debug, Default)]
pub struct BatchOutcome {
    pub solutions: Vec<SolutionVector>,
    pub stats: ValidationStats,
    /// Set when cancellation stopped the batch before every chunk pair ran.
    pub cancelled: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ValidationOptions {
    pub mode: ExecMode,
    pub encode: EncodeFn,
}

impl ValidationOptions {
    pub fn new(mode: ExecMode) -> Self {
        ValidationOptions {
            mode,
            encode: encode_vector,
        }
    }
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions::new(ExecMode::Serial)
    }
}

/// Result of confirming one hash hit.
enum Confirm {
    Mismatch,
    Equal(Option<SolutionVector>),
}

/// Sorted-set size from which probes are searched in ascending hash order.
const PROBE_SORT_MIN: usize = 1 << 17;

/// Binary-searches every probe hash in the sorted set and confirms each hit.
/// `confirm(sorted_idx, probe_idx)` does the exact check.
fn join<F>(sorted: &EncodedSet, probe: &EncodedSet, mode: ExecMode, confirm: F) -> BatchOutcome
where
    F: Fn(usize, usize) -> Confirm + Sync,
{
    debug_assert!(sorted.sorted);
    let one = |&(h, p): &(u64, u32)| {
        let mut found = Vec::new();
        let (mut hash_hits, mut exact_hits) = (0u64, 0u64);
        for &(_, q) in &sorted.entries[sorted.equal_range(h)] {
            hash_hits += 1;
            if let Confirm::Equal(x) = confirm(q as usize, p as usize) {
                exact_hits += 1;
                found.extend(x);
            }
        }
        (found, hash_hits, exact_hits)
    };
    let mut out = BatchOutcome::default();
    let mut absorb = |(found, hh, eh): (Vec<SolutionVector>, u64, u64)| {
        out.stats.hash_hits += hh;
        out.stats.exact_hits += eh;
        out.solutions.extend(found);
    };
    // Random lookups into a set past cache size are dominated by misses;
    // probing in hash order turns them into a near-sequential sweep.
    let ordered;
    let probes = if sorted.entries.len() >= PROBE_SORT_MIN && !probe.sorted {
        let mut copy = probe.entries.clone();
        match mode {
            ExecMode::Serial => copy.sort_unstable(),
            ExecMode::Parallel => copy.par_sort_unstable(),
        }
        ordered = copy;
        &ordered
    } else {
        &probe.entries
    };
    match mode {
        ExecMode::Serial => probes.iter().map(one).for_each(&mut absorb),
        ExecMode::Parallel => probes
            .par_iter()
            .map(one)
            .filter(|r| r.1 > 0)
            .collect::<Vec<_>>()
            .into_iter()
            .for_each(&mut absorb),
    }
    out.stats.candidate_pairs = sorted.entries.len() as u64 * probe.entries.len() as u64;
    out.stats.chunk_pairs_matched = 1;
    out
}

fn confirm_vectors(
    lv: &[u64],
    rv: &[u64],
    left: (u32, u32),
    right: (u32, u32),
    inst: &MspInstance,
    tables: &QuarterTables,
) -> Confirm {
    if lv != rv {
        return Confirm::Mismatch;
    }
    let x = tables.assemble(left, right);
    Confirm::Equal(verify_solution(inst, &x).unwrap_or(false).then_some(x))
}

/// Sort-and-search matching of two residual sets from the same batch: the
/// left hashes are sorted and each right hash is looked up.
pub fn match_batch(
    left: &ResidualSet,
    right: &ResidualSet,
    inst: &MspInstance,
    tables: &QuarterTables,
    opts: &ValidationOptions,
) -> BatchOutcome {
    let mut enc = EncodedSet::encode(left, opts.encode, opts.mode);
    enc.sort(opts.mode);
    let probe = EncodedSet::encode(right, opts.encode, opts.mode);
    let mut out = join(&enc, &probe, opts.mode, |q, t| {
        confirm_vectors(left.vector(q), right.vector(t), left.pair(q), right.pair(t), inst, tables)
    });
    out.stats.left_vectors = left.len() as u64;
    out.stats.right_vectors = right.len() as u64;
    out.stats.filtered_residuals = right.filtered;
    out
}

fn left_into(tables: &QuarterTables, (i, j): (u32, u32), out: &mut [u64]) {
    let ca = tables.a.contrib(i as usize);
    let cb = tables.b.contrib(j as usize);
    for ((o, x), y) in out.iter_mut().zip(ca).zip(cb) {
        *o = x + y;
    }
}

/// Hashes of the left residuals of `pairs`, computed without storing them.
fn encode_left(pairs: &[(u32, u32)], tables: &QuarterTables, opts: &ValidationOptions) -> EncodedSet {
    let m = tables.m;
    let hash = |buf: &mut Vec<u64>, (t, &p): (usize, &(u32, u32))| {
        left_into(tables, p, buf);
        ((opts.encode)(buf), t as u32)
    };
    let entries = match opts.mode {
        ExecMode::Serial => {
            let mut buf = vec![0u64; m];
            pairs.iter().enumerate().map(|e| hash(&mut buf, e)).collect()
        }
        ExecMode::Parallel => pairs
            .par_iter()
            .enumerate()
            .map_init(|| vec![0u64; m], hash)
            .collect(),
    };
    EncodedSet::from_entries(entries)
}

/// Hashes of the non-negative right residuals of `pairs` and the number of
/// pairs filtered out.
fn encode_right(
    pairs: &[(u32, u32)],
    tables: &QuarterTables,
    d: &[u64],
    opts: &ValidationOptions,
) -> (EncodedSet, u64) {
    let m = tables.m;
    let hash = |buf: &mut Vec<u64>, (t, &p): (usize, &(u32, u32))| {
        fill_right(tables, d, p, buf).then(|| ((opts.encode)(buf), t as u32))
    };
    let entries: Vec<(u64, u32)> = match opts.mode {
        ExecMode::Serial => {
            let mut buf = vec![0u64; m];
            pairs.iter().enumerate().filter_map(|e| hash(&mut buf, e)).collect()
        }
        ExecMode::Parallel => pairs
            .par_iter()
            .enumerate()
            .map_init(|| vec![0u64; m], hash)
            .flatten()
            .collect(),
    };
    let filtered = (pairs.len() - entries.len()) as u64;
    (
        EncodedSet::from_entries(entries),
        filtered,
    )
}

/// Matches one chunk pair, sorting whichever side is smaller.
fn match_chunk_pair(
    left_pairs: &[(u32, u32)],
    left: &mut EncodedSet,
    right_pairs: &[(u32, u32)],
    right: &mut EncodedSet,
    inst: &MspInstance,
    tables: &QuarterTables,
    mode: ExecMode,
) -> BatchOutcome {
    let m = tables.m;
    let d = inst.rhs();
    let check = |q: usize, t: usize| {
        let mut lv = vec![0u64; m];
        let mut rv = vec![0u64; m];
        left_into(tables, left_pairs[q], &mut lv);
        let ok = fill_right(tables, d, right_pairs[t], &mut rv);
        debug_assert!(ok);
        confirm_vectors(&lv, &rv, left_pairs[q], right_pairs[t], inst, tables)
    };
    if left.entries.len() <= right.entries.len() {
        if !left.sorted {
            left.sort(mode);
        }
        join(left, right, mode, check)
    } else {
        if !right.sorted {
            right.sort(mode);
        }
        join(right, left, mode, |t, q| check(q, t))
    }
}

/// Matches a batch in chunks of at most `chunk_pairs` pairs per side,
/// quadratically over the chunk grid. `cancel` is polled between chunk pairs.
///
/// Residuals are hashed as they are computed and recomputed for the rare
/// hash hits, so no residual vectors are buffered.
pub fn validate_chunked(
    batch: &CandidateBatch,
    tables: &QuarterTables,
    inst: &MspInstance,
    chunk_pairs: usize,
    opts: &ValidationOptions,
    cancel: Option<&AtomicBool>,
) -> BatchOutcome {
    let chunk = chunk_pairs.max(1);
    let mut out = BatchOutcome::default();
    if batch.left_pairs.is_empty() || batch.right_pairs.is_empty() {
        return out;
    }
    let d = inst.rhs();
    debug_assert!(batch.left_pairs.iter().all(|&(i, j)| {
        tables.a.weight(i as usize) + tables.b.weight(j as usize) == batch.alpha
    }));

    // With a single right chunk its hashes are reused across left chunks.
    let mut cached_right = (batch.right_pairs.len() <= chunk).then(|| {
        let (enc, filtered) = encode_right(&batch.right_pairs, tables, d, opts);
        out.stats.right_vectors += enc.entries.len() as u64;
        out.stats.filtered_residuals += filtered;
        enc
    });

    for (lc, left_chunk) in batch.left_pairs.chunks(chunk).enumerate() {
        let mut left = encode_left(left_chunk, tables, opts);
        out.stats.left_vectors += left.entries.len() as u64;

        for right_chunk in batch.right_pairs.chunks(chunk) {
            if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
                out.cancelled = true;
                return out;
            }
            let mut fresh;
            let right = match cached_right.as_mut() {
                Some(r) => r,
                None => {
                    let (enc, filtered) = encode_right(right_chunk, tables, d, opts);
                    if lc == 0 {
                        out.stats.right_vectors += enc.entries.len() as u64;
                        out.stats.filtered_residuals += filtered;
                    }
                    fresh = enc;
                    &mut fresh
                }
            };
            let part = match_chunk_pair(left_chunk, &mut left, right_chunk, right, inst, tables, opts.mode);
            out.stats.candidate_pairs += part.stats.candidate_pairs;
            out.stats.chunk_pairs_matched += 1;
            out.stats.hash_hits += part.stats.hash_hits;
            out.stats.exact_hits += part.stats.exact_hits;
            out.solutions.extend(part.solutions);
        }
    }
    out
}

/// Everything a validator needs besides the batch itself.
pub struct ValidationContext<'a> {
    pub inst: &'a MspInstance,
    pub tables: &'a QuarterTables,
    pub chunk_pairs: usize,
    pub cancel: &'a AtomicBool,
}

/// Submit a batch, receive its confirmed solutions and statistics. An
/// accelerator backend would implement this trait.
pub trait Validator: Send + Sync {
    fn validate(&self, batch: &CandidateBatch, ctx: &ValidationContext<'_>) -> BatchOutcome;

    fn name(&self) -> &'static str;
}

/// CPU validator; [`ExecMode::Serial`] is the conformance reference.
#[derive(Clone, Copy, Debug)]
pub struct CpuValidator {
    pub options: ValidationOptions,
}

impl CpuValidator {
    pub fn new(mode: ExecMode) -> Self {
        CpuValidator {
            options: ValidationOptions::new(mode),
        }
    }

    pub fn with_encoder(mode: ExecMode, encode: EncodeFn) -> Self {
        CpuValidator {
            options: ValidationOptions { mode, encode },
        }
    }
}

impl Validator for CpuValidator {
    fn validate(&self, batch: &CandidateBatch, ctx: &ValidationContext<'_>) -> BatchOutcome {
        validate_chunked(
            batch,
            ctx.tables,
            ctx.inst,
            ctx.chunk_pairs,
            &self.options,
            Some(ctx.cancel),
        )
    }

    fn name(&self) -> &'static str {
        match self.options.mode {
            ExecMode::Serial => "serial",
            ExecMode::Parallel => "parallel",
        }
    }
}
