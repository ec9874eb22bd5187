//! Reference solvers for conformance testing: plain exhaustion over `{0,1}^n`
//! and the Horowitz-Sahni two-list method for all solutions of one row.

use thiserror::Error;

use crate::instances::{MspInstance, SolutionVector};

pub const MAX_BRUTE_FORCE_N: usize = 28;
pub const MAX_TWO_LIST_N: usize = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("brute force limited to n <= {MAX_BRUTE_FORCE_N}, got {0}")]
    BruteForceTooLarge(usize),
    #[error("two-list limited to {MAX_TWO_LIST_N} weights, got {0}")]
    TwoListTooLarge(usize),
}

/// Every solution of `A x = d`, ascending by integer encoding.
pub fn brute_force_all(inst: &MspInstance) -> Result<Vec<SolutionVector>, OracleError> {
    let n = inst.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(OracleError::BruteForceTooLarge(n));
    }
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        let satisfied = inst.rows().zip(inst.rhs()).all(|(row, &d)| {
            let mut sum = 0u64;
            for (j, &a) in row.iter().enumerate() {
                if (x >> j) & 1 == 1 {
                    sum += a;
                }
            }
            sum == d
        });
        if satisfied {
            out.push(SolutionVector::from_mask(x, n));
        }
    }
    Ok(out)
}

/// Subset sums of `weights` paired with their masks, sorted by sum then mask.
fn sorted_power_set(weights: &[u64]) -> Vec<(u64, u64)> {
    let mut sums = vec![(0u64, 0u64)];
    for (b, &w) in weights.iter().enumerate() {
        let len = sums.len();
        for t in 0..len {
            let (s, mask) = sums[t];
            sums.push((s + w, mask | (1 << b)));
        }
    }
    sums.sort_unstable();
    sums
}

/// Masks of all subsets of `weights` summing to `target`, ascending. Bit `j`
/// of a mask selects `weights[j]`.
pub fn two_list_all(weights: &[u64], target: u64) -> Result<Vec<u64>, OracleError> {
    if weights.len() > MAX_TWO_LIST_N {
        return Err(OracleError::TwoListTooLarge(weights.len()));
    }
    let half = weights.len() / 2;
    let low = sorted_power_set(&weights[..half]);
    let high: Vec<(u64, u64)> = sorted_power_set(&weights[half..])
        .into_iter()
        .map(|(s, mask)| (s, mask << half))
        .collect();

    let mut out = Vec::new();
    // `i` walks `low` upward, `j` walks `high` downward.
    let mut i = 0;
    let mut j = high.len();
    while i < low.len() && j > 0 {
        let sum = low[i].0 as u128 + high[j - 1].0 as u128;
        if sum < target as u128 {
            i += 1;
        } else if sum > target as u128 {
            j -= 1;
        } else {
            let i_end = i + low[i..].iter().take_while(|e| e.0 == low[i].0).count();
            let j_start = j - high[..j].iter().rev().take_while(|e| e.0 == high[j - 1].0).count();
            for l in &low[i..i_end] {
                for h in &high[j_start..j] {
                    out.push(l.1 | h.1);
                }
            }
            i = i_end;
            j = j_start;
        }
    }
    out.sort_unstable();
    Ok(out)
}
