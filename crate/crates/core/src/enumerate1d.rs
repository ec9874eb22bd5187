//! All-solutions Schroeppel-Shamir enumeration of one constraint row.
//!
//! The columns are split into four contiguous blocks A, B, C, D. Each block's
//! power set is materialized as a [`QuarterTable`], sorted by the subset sum of
//! the enumerated row (A and B ascending, C and D descending). Two heaps then
//! walk the sums of A+B in ascending and C+D in descending order without ever
//! materializing either product list:
//!
//! * H1 holds one entry `(i, j)` per B-index `j`, keyed `w_A[i] + w_B[j]`.
//! * H2 holds one entry `(k, l)` per D-index `l`, keyed `w_C[k] + w_D[l]`.
//!
//! Whenever the two tops sum to the target, every H1 entry with the same key
//! and every H2 entry with the same key is drained at once and handed out as a
//! [`CandidateBatch`]. Draining the whole key level (rather than just the
//! tops) is what makes the enumeration complete.

use std::cmp::{Ordering, Reverse};
use std::collections::binary_heap::{BinaryHeap, PeekMut};
use std::ops::Range;

use thiserror::Error;

use crate::instances::{MspInstance, SolutionVector};

/// Widest block a table will materialize (2^30 entries).
pub const MAX_BLOCK_WIDTH: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("quarter split needs at least 4 columns, got {0}")]
    TooFewColumns(usize),
    #[error("block of {0} columns exceeds the table limit of {MAX_BLOCK_WIDTH}")]
    BlockTooWide(usize),
    #[error("row {row} out of range for m = {m}")]
    RowOutOfRange { row: usize, m: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SortOrder {
    Ascending,
    Descending,
}

/// Sorted power set of one block of columns with buffered per-row sums.
#[derive(Clone, Debug)]
pub struct QuarterTable {
    columns: Range<usize>,
    order: SortOrder,
    m: usize,
    masks: Vec<u32>,
    weights: Vec<u64>,
    contribs: Vec<u64>,
}

impl QuarterTable {
    /// Enumerates every subset of `columns`, keyed by its sum over `row`.
    pub fn build(
        inst: &MspInstance,
        row: usize,
        columns: Range<usize>,
        order: SortOrder,
    ) -> Result<Self, EnumError> {
        let m = inst.m();
        if row >= m {
            return Err(EnumError::RowOutOfRange { row, m });
        }
        let width = columns.len();
        if width > MAX_BLOCK_WIDTH {
            return Err(EnumError::BlockTooWide(width));
        }
        let size = 1usize << width;

        // Subset s extends s without its lowest bit by one column.
        let mut raw = vec![0u64; size * m];
        for s in 1..size {
            let prev = s & (s - 1);
            let col = columns.start + s.trailing_zeros() as usize;
            for i in 0..m {
                raw[s * m + i] = raw[prev * m + i] + inst.coeff(i, col);
            }
        }

        let mut perm: Vec<u32> = (0..size as u32).collect();
        match order {
            SortOrder::Ascending => {
                perm.sort_unstable_by_key(|&s| (raw[s as usize * m + row], s))
            }
            SortOrder::Descending => {
                perm.sort_unstable_by_key(|&s| (Reverse(raw[s as usize * m + row]), s))
            }
        }

        let mut contribs = Vec::with_capacity(size * m);
        let mut weights = Vec::with_capacity(size);
        for &s in &perm {
            let v = &raw[s as usize * m..(s as usize + 1) * m];
            contribs.extend_from_slice(v);
            weights.push(v[row]);
        }
        Ok(QuarterTable {
            columns,
            order,
            m,
            masks: perm,
            weights,
            contribs,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn columns(&self) -> Range<usize> {
        self.columns.clone()
    }

    pub fn order(&self) -> SortOrder {
        self.order
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, idx: usize) -> u64 {
        self.weights[idx]
    }

    /// Subset of the block at `idx`, bit `b` selecting column `columns().start + b`.
    pub fn mask(&self, idx: usize) -> u32 {
        self.masks[idx]
    }

    /// Per-row subset sums of the entry at `idx` (length m).
    pub fn contrib(&self, idx: usize) -> &[u64] {
        &self.contribs[idx * self.m..(idx + 1) * self.m]
    }

    /// Writes this entry's columns into `x`.
    pub fn apply_mask(&self, idx: usize, x: &mut SolutionVector) {
        let mask = self.masks[idx];
        for b in 0..self.columns.len() {
            if (mask >> b) & 1 == 1 {
                x.set(self.columns.start + b, true);
            }
        }
    }
}

/// The four block tables of a quarter split.
#[derive(Clone, Debug)]
pub struct QuarterTables {
    pub a: QuarterTable,
    pub b: QuarterTable,
    pub c: QuarterTable,
    pub d: QuarterTable,
    pub n: usize,
    pub m: usize,
    /// Row whose subset sums order the tables.
    pub row: usize,
}

impl QuarterTables {
    pub fn total_entries(&self) -> usize {
        self.a.len() + self.b.len() + self.c.len() + self.d.len()
    }

    /// Characteristic vector of the union of a left and a right pair.
    pub fn assemble(&self, left: (u32, u32), right: (u32, u32)) -> SolutionVector {
        let mut x = SolutionVector::zeros(self.n);
        self.a.apply_mask(left.0 as usize, &mut x);
        self.b.apply_mask(left.1 as usize, &mut x);
        self.c.apply_mask(right.0 as usize, &mut x);
        self.d.apply_mask(right.1 as usize, &mut x);
        x
    }
}

/// Sizes of the four contiguous blocks: as equal as possible, larger first.
pub fn block_sizes(n: usize) -> [usize; 4] {
    let base = n / 4;
    let extra = n % 4;
    std::array::from_fn(|q| base + usize::from(q < extra))
}

pub fn build_quarter_tables(inst: &MspInstance, row: usize) -> Result<QuarterTables, EnumError> {
    let n = inst.n();
    if n < 4 {
        return Err(EnumError::TooFewColumns(n));
    }
    let sizes = block_sizes(n);
    if let Some(&w) = sizes.iter().find(|&&w| w > MAX_BLOCK_WIDTH) {
        return Err(EnumError::BlockTooWide(w));
    }
    let mut start = 0;
    let mut ranges = sizes.iter().map(|&w| {
        let r = start..start + w;
        start += w;
        r
    });
    let mut next = |order| {
        let cols = ranges.next().expect("four blocks");
        QuarterTable::build(inst, row, cols, order)
    };
    Ok(QuarterTables {
        a: next(SortOrder::Ascending)?,
        b: next(SortOrder::Ascending)?,
        c: next(SortOrder::Descending)?,
        d: next(SortOrder::Descending)?,
        n,
        m: inst.m(),
        row,
    })
}

/// End of the equal-weight run beginning at `start` (exclusive).
pub fn run_end(weights: &[u64], start: usize) -> usize {
    let w = weights[start];
    start + 1 + weights[start + 1..].iter().take_while(|&&v| v == w).count()
}

/// Linear scan for the end of the equal-weight run at `start`.
pub fn run_extract(table: &QuarterTable, start: usize) -> usize {
    run_end(table.weights(), start)
}

/// `(run_index, fixed_index)` keyed by the combined weight of the two
/// referenced entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairHeapEntry {
    pub key: u64,
    pub run_index: u32,
    pub fixed_index: u32,
}

impl PairHeapEntry {
    /// Packs into an integer whose natural order is the H2 (max-heap) order:
    /// key ascending, then fixed_index descending. H1 wraps the same layout
    /// with the fixed index stored as is, under `Reverse`.
    fn pack(self, invert_fixed: bool) -> u128 {
        let fixed = if invert_fixed { !self.fixed_index } else { self.fixed_index };
        (u128::from(self.key) << 64) | (u128::from(fixed) << 32) | u128::from(self.run_index)
    }

    fn unpack(word: u128, invert_fixed: bool) -> Self {
        let fixed = (word >> 32) as u32;
        PairHeapEntry {
            key: (word >> 64) as u64,
            fixed_index: if invert_fixed { !fixed } else { fixed },
            run_index: word as u32,
        }
    }
}

// Both heaps break key ties by ascending fixed_index.
type MinHeap = BinaryHeap<Reverse<u128>>;
type MaxHeap = BinaryHeap<u128>;

fn min_entry(word: &Reverse<u128>) -> PairHeapEntry {
    PairHeapEntry::unpack(word.0, false)
}

fn max_entry(word: &u128) -> PairHeapEntry {
    PairHeapEntry::unpack(*word, true)
}

/// All left pairs of weight `alpha` and right pairs of weight `beta`, with
/// `alpha + beta` equal to the enumerated target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateBatch {
    pub alpha: u64,
    pub beta: u64,
    /// `(index into A, index into B)`.
    pub left_pairs: Vec<(u32, u32)>,
    /// `(index into C, index into D)`.
    pub right_pairs: Vec<(u32, u32)>,
}

impl CandidateBatch {
    /// Number of `(left, right)` combinations the batch stands for.
    pub fn combinations(&self) -> u64 {
        self.left_pairs.len() as u64 * self.right_pairs.len() as u64
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumeratorStats {
    pub batches: u64,
    pub h1_pops: u64,
    pub h2_pops: u64,
    pub peak_h1: usize,
    pub peak_h2: usize,
}

/// Heap state of the enumeration. Advanced by [`Enumerator::next_batch`].
pub struct Enumerator<'t> {
    tables: &'t QuarterTables,
    target: u64,
    h1: MinHeap,
    h2: MaxHeap,
    stats: EnumeratorStats,
}

impl<'t> Enumerator<'t> {
    pub fn new(tables: &'t QuarterTables, target: u64) -> Self {
        let (a, b, c, d) = (&tables.a, &tables.b, &tables.c, &tables.d);
        let h1: MinHeap = (0..b.len())
            .map(|j| {
                let e = PairHeapEntry {
                    key: a.weight(0) + b.weight(j),
                    run_index: 0,
                    fixed_index: j as u32,
                };
                Reverse(e.pack(false))
            })
            .collect();
        let h2: MaxHeap = (0..d.len())
            .map(|l| {
                let e = PairHeapEntry {
                    key: c.weight(0) + d.weight(l),
                    run_index: 0,
                    fixed_index: l as u32,
                };
                e.pack(true)
            })
            .collect();
        let stats = EnumeratorStats {
            peak_h1: h1.len(),
            peak_h2: h2.len(),
            ..Default::default()
        };
        Enumerator {
            tables,
            target,
            h1,
            h2,
            stats,
        }
    }

    pub fn tables(&self) -> &'t QuarterTables {
        self.tables
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn stats(&self) -> EnumeratorStats {
        self.stats
    }

    pub fn heap_sizes(&self) -> (usize, usize) {
        (self.h1.len(), self.h2.len())
    }

    /// Current top keys of H1 and H2.
    pub fn top_keys(&self) -> (Option<u64>, Option<u64>) {
        (self.h1.peek().map(|e| min_entry(e).key), self.h2.peek().map(|e| max_entry(e).key))
    }

    /// Replaces the H1 top `(i, j)` by `(next, j)`, or drops it when `next`
    /// runs off table A. Returns the old top.
    fn replace_left(&mut self, next: impl FnOnce(&QuarterTable, usize) -> usize) -> PairHeapEntry {
        let tables = self.tables;
        let mut top = self.h1.peek_mut().expect("non-empty");
        let e = min_entry(&top);
        self.stats.h1_pops += 1;
        let next = next(&tables.a, e.run_index as usize);
        if next < tables.a.len() {
            let key = tables.a.weight(next) + tables.b.weight(e.fixed_index as usize);
            let succ = PairHeapEntry {
                key,
                run_index: next as u32,
                fixed_index: e.fixed_index,
            };
            *top = Reverse(succ.pack(false));
        } else {
            PeekMut::pop(top);
        }
        e
    }

    fn replace_right(&mut self, next: impl FnOnce(&QuarterTable, usize) -> usize) -> PairHeapEntry {
        let tables = self.tables;
        let mut top = self.h2.peek_mut().expect("non-empty");
        let e = max_entry(&top);
        self.stats.h2_pops += 1;
        let next = next(&tables.c, e.run_index as usize);
        if next < tables.c.len() {
            let key = tables.c.weight(next) + tables.d.weight(e.fixed_index as usize);
            let succ = PairHeapEntry {
                key,
                run_index: next as u32,
                fixed_index: e.fixed_index,
            };
            *top = succ.pack(true);
        } else {
            PeekMut::pop(top);
        }
        e
    }

    /// Advances to the next level where the heap tops meet the target and
    /// drains it. Returns `None` once either heap is empty.
    pub fn next_batch(&mut self) -> Option<CandidateBatch> {
        loop {
            let (alpha, beta) = match (self.h1.peek(), self.h2.peek()) {
                (Some(l), Some(r)) => (min_entry(l).key, max_entry(r).key),
                _ => return None,
            };
            // alpha + beta is bounded by the row sum, which fits in u64.
            match (alpha + beta).cmp(&self.target) {
                Ordering::Less => {
                    self.replace_left(|_, i| i + 1);
                }
                Ordering::Greater => {
                    self.replace_right(|_, k| k + 1);
                }
                Ordering::Equal => {
                    let mut batch = CandidateBatch {
                        alpha,
                        beta,
                        ..Default::default()
                    };
                    while self.h1.peek().is_some_and(|e| min_entry(e).key == alpha) {
                        // The successor starts a heavier run, so the loop ends.
                        let top = self.replace_left(run_extract);
                        let end = run_extract(&self.tables.a, top.run_index as usize);
                        batch
                            .left_pairs
                            .extend((top.run_index..end as u32).map(|i| (i, top.fixed_index)));
                    }
                    while self.h2.peek().is_some_and(|e| max_entry(e).key == beta) {
                        let top = self.replace_right(run_extract);
                        let end = run_extract(&self.tables.c, top.run_index as usize);
                        batch
                            .right_pairs
                            .extend((top.run_index..end as u32).map(|k| (k, top.fixed_index)));
                    }
                    self.stats.batches += 1;
                    return Some(batch);
                }
            }
        }
    }
}

impl Iterator for Enumerator<'_> {
    type Item = CandidateBatch;

    fn next(&mut self) -> Option<CandidateBatch> {
        self.next_batch()
    }
}
