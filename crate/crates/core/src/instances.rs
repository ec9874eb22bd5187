//! Market split instances: the data model, the plain-text file format,
//! seeded generation of the Cornuéjols-Dawande class and surrogate-row
//! reduction.
//!
//! File format (UTF-8): lines starting with `#` are comments and blank lines
//! are ignored. The first remaining line is `m n`; it is followed by exactly
//! `m` lines of `n + 1` integers, `a_i1 ... a_in d_i`. The canonical rendering
//! uses single spaces, one trailing newline per line and no comments.

use std::fmt;
use std::io::{self, BufRead, Write};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest value accepted by the parser (exclusive).
pub const MAX_PARSED_VALUE: u64 = 1 << 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: malformed header: {reason}")]
    Header { line: usize, reason: String },
    #[error("line {line}: row {row}: expected {expected} values, found {found}")]
    RowLength {
        line: usize,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: not a non-negative integer: {token:?}")]
    BadToken { line: usize, token: String },
    #[error("line {line}: value {token} is not below 2^63")]
    ValueTooLarge { line: usize, token: String },
    #[error("line {line}: row {row}: coefficient sum overflows 64 bits")]
    RowSumOverflowAt { line: usize, row: usize },
    #[error("row {row}: coefficient sum overflows 64 bits")]
    RowSumOverflow { row: usize },
    #[error("expected {expected} constraint rows, found {found}")]
    MissingRows { expected: usize, found: usize },
    #[error("line {line}: unexpected data after the last row")]
    TrailingData { line: usize },
    #[error("empty input: no header line")]
    Empty,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid generator parameters: {0}")]
    Generator(String),
    #[error("r out of range: r = {r} but must satisfy 2 <= r <= m = {m}")]
    ReductionRange { r: usize, m: usize },
    #[error("reduction overflow: merging {r} rows exceeds 64 bits; largest admissible r is {max_admissible}")]
    ReductionOverflow { r: usize, max_admissible: usize },
    #[error("solution length {found} does not match n = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] IoErrorWrapper),
}

/// `io::Error` is neither `PartialEq` nor `Clone`; this keeps the message.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("i/o error: {0}")]
pub struct IoErrorWrapper(pub String);

impl From<io::Error> for InstanceError {
    fn from(e: io::Error) -> Self {
        InstanceError::Io(IoErrorWrapper(e.to_string()))
    }
}

/// An n-dimensional subset sum system `A x = d` over binary `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MspInstance {
    m: usize,
    n: usize,
    a: Vec<u64>,
    d: Vec<u64>,
    k_bound: u64,
}

impl MspInstance {
    /// `a` is row-major with `m * n` entries. `k_bound` is informational
    /// (0 when unknown).
    pub fn new(
        m: usize,
        n: usize,
        a: Vec<u64>,
        d: Vec<u64>,
        k_bound: u64,
    ) -> Result<Self, InstanceError> {
        if m == 0 || n == 0 {
            return Err(InstanceError::Shape(format!(
                "m and n must be positive (m = {m}, n = {n})"
            )));
        }
        if a.len() != m * n {
            return Err(InstanceError::Shape(format!(
                "expected {} coefficients, got {}",
                m * n,
                a.len()
            )));
        }
        if d.len() != m {
            return Err(InstanceError::Shape(format!(
                "expected {m} right-hand sides, got {}",
                d.len()
            )));
        }
        for (i, row) in a.chunks_exact(n).enumerate() {
            if checked_row_sum(row).is_none() {
                return Err(InstanceError::RowSumOverflow { row: i + 1 });
            }
        }
        Ok(MspInstance { m, n, a, d, k_bound })
    }

    /// Builds an instance from nested rows.
    pub fn from_rows(rows: &[Vec<u64>], d: &[u64]) -> Result<Self, InstanceError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(InstanceError::Shape("ragged coefficient rows".into()));
        }
        MspInstance::new(m, n, rows.concat(), d.to_vec(), 0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_bound(&self) -> u64 {
        self.k_bound
    }

    pub fn rhs(&self) -> &[u64] {
        &self.d
    }

    /// Row-major coefficients.
    pub fn coefficients(&self) -> &[u64] {
        &self.a
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn coeff(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        // Checked at construction.
        self.row(i).iter().sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.a.chunks_exact(self.n)
    }
}

fn checked_row_sum(row: &[u64]) -> Option<u64> {
    row.iter().try_fold(0u64, |acc, &v| acc.checked_add(v))
}

/// Characteristic vector of a subset of the columns. Ordered by the integer
/// encoding `sum_j x_j 2^(j-1)`, so `x_1` is the least significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolutionVector {
    bits: Vec<bool>,
}

impl SolutionVector {
    pub fn new(bits: Vec<bool>) -> Self {
        SolutionVector { bits }
    }

    pub fn zeros(n: usize) -> Self {
        SolutionVector {
            bits: vec![false; n],
        }
    }

    /// Parses a string of `0` and `1` characters, `x_1` leftmost.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(SolutionVector::new)
    }

    /// Low `n` bits of `mask`, bit `j` giving `x_{j+1}`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        SolutionVector {
            bits: (0..n).map(|j| (mask >> j) & 1 == 1).collect(),
        }
    }

    /// The integer encoding, if it fits in 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        if self.bits.len() > 64 && self.bits[64..].iter().any(|&b| b) {
            return None;
        }
        Some(
            self.bits
                .iter()
                .take(64)
                .enumerate()
                .filter(|(_, &b)| b)
                .fold(0u64, |acc, (j, _)| acc | (1 << j)),
        )
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.bits[j] = value;
    }

    pub fn get(&self, j: usize) -> bool {
        self.bits[j]
    }
}

impl Ord for SolutionVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Compare as integers: higher positions are more significant.
        let len = self.bits.len().max(other.bits.len());
        for j in (0..len).rev() {
            let a = self.bits.get(j).copied().unwrap_or(false);
            let b = other.bits.get(j).copied().unwrap_or(false);
            if a != b {
                return a.cmp(&b);
            }
        }
        self.bits.len().cmp(&other.bits.len())
    }
}

impl PartialOrd for SolutionVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SolutionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn parse_value(token: &str, line: usize) -> Result<u64, InstanceError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(InstanceError::BadToken {
            line,
            token: token.to_string(),
        });
    }
    match token.parse::<u64>() {
        Ok(v) if v < MAX_PARSED_VALUE => Ok(v),
        _ => Err(InstanceError::ValueTooLarge {
            line,
            token: token.to_string(),
        }),
    }
}

/// Parses an instance from text in the documented format.
pub fn parse_instance(text: &str) -> Result<MspInstance, InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(InstanceError::Empty)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(InstanceError::Header {
            line: header_line,
            reason: format!("expected `m n`, found {} values", tokens.len()),
        });
    }
    let header_value = |t: &str| -> Result<usize, InstanceError> {
        t.parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| InstanceError::Header {
                line: header_line,
                reason: format!("{t:?} is not a positive integer"),
            })
    };
    let m = header_value(tokens[0])?;
    let n = header_value(tokens[1])?;
    let width = n.checked_add(1).ok_or_else(|| InstanceError::Header {
        line: header_line,
        reason: "n too large".into(),
    })?;

    let mut a = Vec::with_capacity(m.saturating_mul(n).min(1 << 20));
    let mut d = Vec::with_capacity(m.min(1 << 10));
    for row in 1..=m {
        let (line, content) = lines.next().ok_or(InstanceError::MissingRows {
            expected: m,
            found: row - 1,
        })?;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != width {
            return Err(InstanceError::RowLength {
                line,
                row,
                expected: width,
                found: tokens.len(),
            });
        }
        let values = tokens
            .iter()
            .map(|t| parse_value(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        if checked_row_sum(&values[..n]).is_none() {
            return Err(InstanceError::RowSumOverflowAt { line, row });
        }
        a.extend_from_slice(&values[..n]);
        d.push(values[n]);
    }
    if let Some((line, _)) = lines.next() {
        return Err(InstanceError::TrailingData { line });
    }
    MspInstance::new(m, n, a, d, 0)
}

/// Reads and parses an instance from any buffered reader.
pub fn read_instance<R: BufRead>(mut reader: R) -> Result<MspInstance, InstanceError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_instance(&text)
}

/// Canonical rendering of `inst`.
pub fn write_instance(inst: &MspInstance) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", inst.m, inst.n));
    for (row, d) in inst.rows().zip(&inst.d) {
        for v in row {
            out.push_str(&v.to_string());
            out.push(' ');
        }
        out.push_str(&d.to_string());
        out.push('\n');
    }
    out
}

pub fn write_instance_to<W: Write>(inst: &MspInstance, mut w: W) -> io::Result<()> {
    w.write_all(write_instance(inst).as_bytes())
}

/// Uniform draw from `0..bound` by rejection on the raw 64-bit stream.
fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    // Largest multiple of `bound` representable; draws at or above it are
    // rejected so every residue is equally likely.
    let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
    loop {
        let v = rng.next_u64();
        if v <= zone {
            return v % bound;
        }
    }
}

/// Generates an `(m, 10(m-1), K)` instance with coefficients uniform in
/// `[0, K)` and `d_i = floor(sum_j a_ij / 2)`.
///
/// The generator is ChaCha8 keyed with the little-endian bytes of `seed`
/// followed by 24 zero bytes. Coefficients are drawn row-major, each by
/// rejection sampling on `next_u64` (accept `v <= zone`, take `v % K`). This
/// sequence is part of the contract: the same `(m, K, seed)` must produce the
/// same file forever.
pub fn generate_instance(m: usize, k: u64, seed: u64) -> Result<MspInstance, InstanceError> {
    if m < 2 {
        return Err(InstanceError::Generator(format!("m must be at least 2, got {m}")));
    }
    if k < 2 {
        return Err(InstanceError::Generator(format!("K must be at least 2, got {k}")));
    }
    let n = 10 * (m - 1);
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);

    let a: Vec<u64> = (0..m * n).map(|_| uniform_below(&mut rng, k)).collect();
    let d = a.chunks_exact(n).map(|row| row.iter().sum::<u64>() / 2).collect();
    MspInstance::new(m, n, a, d, k)
}

/// Merges the first `r` rows into the single row
/// `sum_{i<r} (nD)^i * row_i`, keeping rows `r..m` unchanged.
///
/// `D` is one more than the largest coefficient of the merged rows. If some
/// merged right-hand side is not below `nD`, `D` is raised until it is; this
/// keeps the base-`nD` digits of the merged target unambiguous.
pub fn surrogate_reduce(inst: &MspInstance, r: usize) -> Result<MspInstance, InstanceError> {
    if r < 2 || r > inst.m {
        return Err(InstanceError::ReductionRange { r, m: inst.m });
    }
    match merge_rows(inst, r) {
        Some((row, target)) => {
            let n = inst.n;
            let mut a = row;
            a.extend_from_slice(&inst.a[r * n..]);
            let mut d = vec![target];
            d.extend_from_slice(&inst.d[r..]);
            MspInstance::new(inst.m - r + 1, n, a, d, 0)
        }
        None => {
            let max_admissible = (2..r)
                .rev()
                .find(|&rr| merge_rows(inst, rr).is_some())
                .unwrap_or(1);
            Err(InstanceError::ReductionOverflow { r, max_admissible })
        }
    }
}

/// Base used when merging the first `r` rows, if representable.
pub fn surrogate_base(inst: &MspInstance, r: usize) -> Option<u64> {
    let n = inst.n as u64;
    let max_coeff = inst.a[..r * inst.n].iter().copied().max().unwrap_or(0);
    let mut big_d = max_coeff.checked_add(1)?;
    let max_rhs = inst.d[..r].iter().copied().max().unwrap_or(0);
    if n.checked_mul(big_d).is_none_or(|b| b <= max_rhs) {
        big_d = big_d.max(max_rhs / n + 1);
    }
    n.checked_mul(big_d)
}

fn merge_rows(inst: &MspInstance, r: usize) -> Option<(Vec<u64>, u64)> {
    let n = inst.n;
    let base = surrogate_base(inst, r)?;
    let mut weights = Vec::with_capacity(r);
    let mut w = 1u64;
    for i in 0..r {
        if i > 0 {
            w = w.checked_mul(base)?;
        }
        weights.push(w);
    }
    let mut row = vec![0u64; n];
    for (i, &w) in weights.iter().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = slot.checked_add(inst.coeff(i, j).checked_mul(w)?)?;
        }
    }
    checked_row_sum(&row)?;
    let target = weights
        .iter()
        .zip(&inst.d)
        .try_fold(0u64, |acc, (&w, &d)| acc.checked_add(d.checked_mul(w)?))?;
    Some((row, target))
}

/// Exact check of `A x = d`.
pub fn verify_solution(inst: &MspInstance, x: &SolutionVector) -> Result<bool, InstanceError> {
    if x.len() != inst.n {
        return Err(InstanceError::LengthMismatch {
            expected: inst.n,
            found: x.len(),
        });
    }
    Ok(inst.rows().zip(&inst.d).all(|(row, &d)| {
        let lhs: u64 = row
            .iter()
            .zip(x.bits())
            .filter(|(_, &b)| b)
            .map(|(&a, _)| a)
            .sum();
        lhs == d
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> MspInstance {
        MspInstance::from_rows(&[vec![1, 2, 3], vec![2, 1, 3]], &[3, 3]).unwrap()
    }

    #[test]
    fn parses_small_example() {
        let inst = parse_instance("2 3\n1 2 3 3\n2 1 3 3\n").unwrap();
        assert_eq!(inst, example());
        let one = parse_instance("1 1\n5 5\n").unwrap();
        assert_eq!((one.m(), one.n(), one.row(0), one.rhs()), (1, 1, &[5][..], &[5][..]));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let inst = parse_instance("# market split\n\n2 3\n# row one\n1 2 3 3\n2 1 3 3\n\n").unwrap();
        assert_eq!(inst, example());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_instance("2 3\n1 2 3\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: row 1: expected 4 values, found 3");

        assert!(matches!(
            parse_instance("2\n"),
            Err(InstanceError::Header { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("1 2\n1 x 3\n"),
            Err(InstanceError::BadToken { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("1 2\n1 -1 3\n"),
            Err(InstanceError::BadToken { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("1 1\n9223372036854775808 1\n"),
            Err(InstanceError::ValueTooLarge { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("1 3\n9223372036854775807 9223372036854775807 2 1\n"),
            Err(InstanceError::RowSumOverflowAt { line: 2, row: 1 })
        ));
        assert!(matches!(
            parse_instance("2 1\n1 1\n"),
            Err(InstanceError::MissingRows { expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_instance("1 1\n1 1\n1 1\n"),
            Err(InstanceError::TrailingData { line: 3 })
        ));
        assert_eq!(parse_instance("# only\n"), Err(InstanceError::Empty));
    }

    #[test]
    fn writes_canonical_text() {
        let inst = MspInstance::from_rows(&[vec![1, 2]], &[1]).unwrap();
        assert_eq!(write_instance(&inst), "1 2\n1 2 1\n");
        let messy = parse_instance("#c\n2   3\n1 2  3 3\n 2 1 3 3 \n").unwrap();
        let canon = write_instance(&messy);
        assert_eq!(canon, "2 3\n1 2 3 3\n2 1 3 3\n");
        assert_eq!(write_instance(&parse_instance(&canon).unwrap()), canon);
    }

    #[test]
    fn construction_rejects_row_overflow() {
        let err = MspInstance::from_rows(&[vec![u64::MAX, 1]], &[0]).unwrap_err();
        assert_eq!(err, InstanceError::RowSumOverflow { row: 1 });
    }

    #[test]
    fn generator_shape_and_determinism() {
        let inst = generate_instance(4, 100, 11).unwrap();
        assert_eq!((inst.m(), inst.n(), inst.k_bound()), (4, 30, 100));
        assert!(inst.coefficients().iter().all(|&a| a < 100));
        for i in 0..inst.m() {
            assert_eq!(inst.rhs()[i], inst.row_sum(i) / 2);
        }
        assert_eq!(generate_instance(3, 50, 7), generate_instance(3, 50, 7));
        assert_ne!(generate_instance(3, 50, 7), generate_instance(3, 50, 8));
        assert!(generate_instance(1, 100, 0).is_err());
        assert!(generate_instance(3, 1, 0).is_err());
    }

    #[test]
    fn generator_stream_is_pinned() {
        // Frozen output; a change here breaks every previously generated file.
        let inst = generate_instance(2, 10, 0).unwrap();
        assert_eq!(
            write_instance(&inst),
            include_str!("../tests/data/gen_m2_k10_s0.txt")
        );
    }

    #[test]
    fn surrogate_small_example() {
        let inst = MspInstance::from_rows(&[vec![1, 2], vec![3, 1]], &[3, 4]).unwrap();
        let red = surrogate_reduce(&inst, 2).unwrap();
        assert_eq!(red.m(), 1);
        assert_eq!(red.row(0), &[25, 10]);
        assert_eq!(red.rhs(), &[35]);
        let x = SolutionVector::parse("11").unwrap();
        assert!(verify_solution(&inst, &x).unwrap());
        assert!(verify_solution(&red, &x).unwrap());
    }

    #[test]
    fn surrogate_keeps_tail_rows() {
        let inst =
            MspInstance::from_rows(&[vec![1, 2], vec![3, 1], vec![7, 9]], &[3, 4, 16]).unwrap();
        let red = surrogate_reduce(&inst, 2).unwrap();
        assert_eq!(red.m(), 2);
        assert_eq!(red.row(1), &[7, 9]);
        assert_eq!(red.rhs()[1], 16);
    }

    #[test]
    fn surrogate_range_and_overflow() {
        let inst = example();
        assert_eq!(
            surrogate_reduce(&inst, 99).unwrap_err().to_string(),
            "r out of range: r = 99 but must satisfy 2 <= r <= m = 2"
        );
        assert!(surrogate_reduce(&inst, 1).is_err());

        // Coefficients 2^40 with n = 4: base ~ 2^42, so not even two rows fit.
        let big = 1u64 << 40;
        let rows = vec![vec![big; 4], vec![big; 4], vec![big; 4]];
        let inst = MspInstance::from_rows(&rows, &[0, 0, 0]).unwrap();
        assert_eq!(
            surrogate_reduce(&inst, 2).unwrap_err(),
            InstanceError::ReductionOverflow { r: 2, max_admissible: 1 }
        );
        let small = vec![vec![1u64 << 10; 4], vec![1u64 << 10; 4], vec![1u64 << 10; 4]];
        let inst = MspInstance::from_rows(&small, &[0, 0, 0]).unwrap();
        assert!(surrogate_reduce(&inst, 3).is_ok());

        let rows = vec![vec![1u64 << 28; 4], vec![1u64 << 28; 4], vec![1u64 << 28; 4]];
        let inst = MspInstance::from_rows(&rows, &[0, 0, 0]).unwrap();
        assert!(surrogate_reduce(&inst, 2).is_ok());
        assert_eq!(
            surrogate_reduce(&inst, 3).unwrap_err(),
            InstanceError::ReductionOverflow { r: 3, max_admissible: 2 }
        );
    }

    #[test]
    fn surrogate_base_covers_large_targets() {
        // d_1 = 9 exceeds nD = 2 * 3 = 6. With base 6 the merged target
        // 9 + 6 * 3 = 27 would equal x = (1, 1)'s merged sum 3 + 6 * 4.
        let inst = MspInstance::from_rows(&[vec![1, 2], vec![2, 2]], &[9, 3]).unwrap();
        let red = surrogate_reduce(&inst, 2).unwrap();
        for mask in 0..4u64 {
            let x = SolutionVector::from_mask(mask, 2);
            assert_eq!(
                verify_solution(&inst, &x).unwrap(),
                verify_solution(&red, &x).unwrap()
            );
        }
        assert!(surrogate_base(&inst, 2).unwrap() > 9);
    }

    #[test]
    fn verify_examples() {
        let inst = example();
        assert!(verify_solution(&inst, &SolutionVector::parse("110").unwrap()).unwrap());
        assert!(verify_solution(&inst, &SolutionVector::parse("001").unwrap()).unwrap());
        assert!(!verify_solution(&inst, &SolutionVector::parse("100").unwrap()).unwrap());
        assert!(!verify_solution(&inst, &SolutionVector::zeros(3)).unwrap());
        let zero = MspInstance::from_rows(&[vec![1, 2, 3]], &[0]).unwrap();
        assert!(verify_solution(&zero, &SolutionVector::zeros(3)).unwrap());
        assert_eq!(
            verify_solution(&inst, &SolutionVector::parse("11").unwrap()),
            Err(InstanceError::LengthMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn solution_vector_order_and_text() {
        let a = SolutionVector::parse("110").unwrap();
        let b = SolutionVector::parse("001").unwrap();
        assert_eq!(a.to_mask(), Some(3));
        assert_eq!(b.to_mask(), Some(4));
        assert!(a < b);
        assert_eq!(a.to_string(), "110");
        assert_eq!(SolutionVector::from_mask(4, 3), b);
        assert!(SolutionVector::parse("10x").is_none());
    }
}
