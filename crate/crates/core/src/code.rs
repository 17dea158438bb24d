//! LDPC code model: sparse binary parity-check matrices, the alist
//! interchange format, and syndrome predicates.
//!
//! A code is defined by an `m x n` parity-check matrix **H** stored as
//! adjacency lists in both directions (check rows and variable columns).
//! Indices are 0-based everywhere in the API; the alist format on disk is
//! 1-based per the MacKay convention and is translated on parse/write.
//!
//! Matrices are validated on admission: every check row must have degree
//! at least 3 (the degree-3 decomposition used by the LP decoder is
//! undefined below that), and every variable must participate in at least
//! one check.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::fmt;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Admission and generation errors for parity-check matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeError {
    /// The matrix has no rows or no columns.
    EmptyMatrix,
    /// A check row has fewer than 3 variable neighbours.
    RowDegreeTooSmall { row: usize, degree: usize },
    /// A row references a variable index outside `0..n`.
    IndexOutOfRange { row: usize, index: usize, n: usize },
    /// A row lists the same variable twice.
    DuplicateIndex { row: usize, index: usize },
    /// A variable participates in no check at all.
    UncoveredVariable { index: usize },
    /// Degree parameters cannot produce a valid matrix.
    InfeasibleDegrees(String),
    /// The randomized generator failed to find a simple graph.
    GenerationFailed { attempts: usize },
    /// A bit vector contains a value other than 0 or 1.
    NonBinaryValue { index: usize, value: u8 },
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::EmptyMatrix => write!(f, "parity-check matrix must have at least one row and one column"),
            CodeError::RowDegreeTooSmall { row, degree } => {
                write!(f, "check row {row} has degree {degree}; rows of degree < 3 are not admissible")
            }
            CodeError::IndexOutOfRange { row, index, n } => {
                write!(f, "check row {row} references variable {index}, but n = {n}")
            }
            CodeError::DuplicateIndex { row, index } => {
                write!(f, "check row {row} lists variable {index} more than once")
            }
            CodeError::UncoveredVariable { index } => {
                write!(f, "variable {index} participates in no check")
            }
            CodeError::InfeasibleDegrees(msg) => write!(f, "infeasible degree parameters: {msg}"),
            CodeError::GenerationFailed { attempts } => {
                write!(f, "failed to sample a simple Tanner graph after {attempts} attempts")
            }
            CodeError::NonBinaryValue { index, value } => {
                write!(f, "bit {index} has value {value}; expected 0 or 1")
            }
        }
    }
}

impl std::error::Error for CodeError {}

/// Parse errors for the alist format, each tagged with the offending
/// (1-based) line number of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlistError {
    /// Input ended before all declared sections were read.
    UnexpectedEnd { line: usize },
    /// A line could not be tokenized as the expected integers.
    Malformed { line: usize, message: String },
    /// An adjacency entry is outside the declared dimensions.
    IndexOutOfRange { line: usize, index: usize, limit: usize },
    /// The number of listed neighbours differs from the declared degree.
    DegreeMismatch { line: usize, declared: usize, found: usize },
    /// Row and column adjacency sections contradict each other.
    Inconsistent { line: usize, message: String },
    /// The parsed matrix failed admission checks.
    Admission(CodeError),
}

impl fmt::Display for AlistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlistError::UnexpectedEnd { line } => write!(f, "line {line}: unexpected end of alist input"),
            AlistError::Malformed { line, message } => write!(f, "line {line}: {message}"),
            AlistError::IndexOutOfRange { line, index, limit } => {
                write!(f, "line {line}: index {index} out of range 1..={limit}")
            }
            AlistError::DegreeMismatch { line, declared, found } => {
                write!(f, "line {line}: declared degree {declared} but found {found} entries")
            }
            AlistError::Inconsistent { line, message } => write!(f, "line {line}: {message}"),
            AlistError::Admission(e) => write!(f, "matrix failed admission: {e}"),
        }
    }
}

impl std::error::Error for AlistError {}

// ---------------------------------------------------------------------------
// Bit vectors
// ---------------------------------------------------------------------------

/// A binary vector over {0,1}, e.g. a codeword candidate or a syndrome.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<u8>,
}

impl BitVector {
    /// Wrap a 0/1 byte vector, rejecting any other value.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self, CodeError> {
        for (index, &value) in bits.iter().enumerate() {
            if value > 1 {
                return Err(CodeError::NonBinaryValue { index, value });
            }
        }
        Ok(BitVector { bits })
    }

    /// The all-zero vector of length `n`.
    pub fn zeros(n: usize) -> Self {
        BitVector { bits: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: u8) {
        debug_assert!(value <= 1);
        self.bits[i] = value;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len(), other.len(), "bit vector length mismatch");
        for (a, b) in self.bits.iter_mut().zip(other.bits.iter()) {
            *a ^= b;
        }
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming_distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len(), other.len(), "bit vector length mismatch");
        self.bits
            .iter()
            .zip(other.bits.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Compact `"0110..."` rendering.
    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
    }
}

// ---------------------------------------------------------------------------
// Parity-check matrix
// ---------------------------------------------------------------------------

/// Sparse binary parity-check matrix with adjacency in both directions.
///
/// `rows[j]` holds the sorted variable indices of check `j`; `cols[i]` is
/// the exact transpose. Immutable after construction, so instances can be
/// shared freely across concurrent decoders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    m: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Build from per-check variable lists (0-based). Rows are sorted and
    /// validated: indices in range, no duplicates, degree >= 3, and every
    /// variable covered by at least one check.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        let m = rows.len();
        if m == 0 || n == 0 {
            return Err(CodeError::EmptyMatrix);
        }
        let mut sorted_rows = rows;
        for (j, row) in sorted_rows.iter_mut().enumerate() {
            row.sort_unstable();
            if row.len() < 3 {
                return Err(CodeError::RowDegreeTooSmall { row: j, degree: row.len() });
            }
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(CodeError::DuplicateIndex { row: j, index: w[0] });
                }
            }
            if let Some(&max) = row.last() {
                if max >= n {
                    return Err(CodeError::IndexOutOfRange { row: j, index: max, n });
                }
            }
        }
        let mut cols = vec![Vec::new(); n];
        for (j, row) in sorted_rows.iter().enumerate() {
            for &i in row {
                cols[i].push(j);
            }
        }
        if let Some(i) = cols.iter().position(|c| c.is_empty()) {
            return Err(CodeError::UncoveredVariable { index: i });
        }
        Ok(ParityCheckMatrix { m, n, rows: sorted_rows, cols })
    }

    /// Number of check nodes (rows).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of variable nodes (columns / codeword bits).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Code rate `(n - m) / n` (design rate; assumes full-rank H).
    pub fn rate(&self) -> f64 {
        (self.n as f64 - self.m as f64) / self.n as f64
    }

    /// Sorted variable neighbours of check `j`.
    #[inline]
    pub fn row(&self, j: usize) -> &[usize] {
        &self.rows[j]
    }

    /// Sorted check neighbours of variable `i`.
    #[inline]
    pub fn col(&self, i: usize) -> &[usize] {
        &self.cols[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Total number of edges (ones in H).
    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Maximum check degree.
    pub fn max_row_degree(&self) -> usize {
        self.rows.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Maximum variable degree.
    pub fn max_col_degree(&self) -> usize {
        self.cols.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Syndrome `H x` over GF(2): component `j` is the XOR of `x` over
    /// the neighbours of check `j`.
    ///
    /// Panics if `x.len() != n`.
    pub fn syndrome(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.n, "syndrome input length must equal n");
        let mut s = BitVector::zeros(self.m);
        for (j, row) in self.rows.iter().enumerate() {
            let mut parity = 0u8;
            for &i in row {
                parity ^= x.bit(i);
            }
            s.set(j, parity);
        }
        s
    }

    /// True when `x` satisfies every parity check.
    pub fn is_codeword(&self, x: &BitVector) -> bool {
        assert_eq!(x.len(), self.n, "codeword length must equal n");
        self.rows.iter().all(|row| {
            let mut parity = 0u8;
            for &i in row {
                parity ^= x.bit(i);
            }
            parity == 0
        })
    }
}

// ---------------------------------------------------------------------------
// alist parse / write
// ---------------------------------------------------------------------------

fn parse_int_line(line_no: usize, line: &str) -> Result<Vec<usize>, AlistError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| AlistError::Malformed {
                line: line_no,
                message: format!("expected a non-negative integer, found {tok:?}"),
            })
        })
        .collect()
}

/// Parse a MacKay-convention alist file.
///
/// Layout: line 1 `n m`; line 2 max column / row degree; lines 3-4 the
/// per-column and per-row degrees; then `n` column adjacency lines and `m`
/// row adjacency lines with 1-based indices. Zero entries (the padding
/// convention for irregular codes) are accepted and discarded. Blank lines
/// are skipped.
pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix, AlistError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let mut last_line = 0usize;
    let mut next = |ctx: &mut usize| -> Result<(usize, &str), AlistError> {
        match lines.next() {
            Some((no, l)) => {
                *ctx = no;
                Ok((no, l))
            }
            None => Err(AlistError::UnexpectedEnd { line: *ctx }),
        }
    };

    let (no, header) = next(&mut last_line)?;
    let header = parse_int_line(no, header)?;
    if header.len() != 2 {
        return Err(AlistError::Malformed {
            line: no,
            message: format!("header must be \"n m\", found {} fields", header.len()),
        });
    }
    let (n, m) = (header[0], header[1]);
    if n == 0 || m == 0 {
        return Err(AlistError::Malformed { line: no, message: "n and m must be positive".into() });
    }

    let (no, maxdeg) = next(&mut last_line)?;
    let maxdeg = parse_int_line(no, maxdeg)?;
    if maxdeg.len() != 2 {
        return Err(AlistError::Malformed {
            line: no,
            message: format!("expected max column/row degree pair, found {} fields", maxdeg.len()),
        });
    }

    let (no, col_deg_line) = next(&mut last_line)?;
    let col_degs = parse_int_line(no, col_deg_line)?;
    if col_degs.len() != n {
        return Err(AlistError::Malformed {
            line: no,
            message: format!("expected {n} column degrees, found {}", col_degs.len()),
        });
    }
    let (no, row_deg_line) = next(&mut last_line)?;
    let row_degs = parse_int_line(no, row_deg_line)?;
    if row_degs.len() != m {
        return Err(AlistError::Malformed {
            line: no,
            message: format!("expected {m} row degrees, found {}", row_degs.len()),
        });
    }

    // Column adjacency: n lines of 1-based check indices.
    let mut cols: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
    for i in 0..n {
        let (no, line) = next(&mut last_line)?;
        let entries = parse_int_line(no, line)?;
        let mut list = Vec::with_capacity(col_degs[i]);
        for &e in &entries {
            if e == 0 {
                continue; // padding
            }
            if e > m {
                return Err(AlistError::IndexOutOfRange { line: no, index: e, limit: m });
            }
            list.push(e - 1);
        }
        if list.len() != col_degs[i] {
            return Err(AlistError::DegreeMismatch { line: no, declared: col_degs[i], found: list.len() });
        }
        list.sort_unstable();
        cols.push((no, list));
    }

    // Row adjacency: m lines of 1-based variable indices.
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(m);
    for j in 0..m {
        let (no, line) = next(&mut last_line)?;
        let entries = parse_int_line(no, line)?;
        let mut list = Vec::with_capacity(row_degs[j]);
        for &e in &entries {
            if e == 0 {
                continue;
            }
            if e > n {
                return Err(AlistError::IndexOutOfRange { line: no, index: e, limit: n });
            }
            list.push(e - 1);
        }
        if list.len() != row_degs[j] {
            return Err(AlistError::DegreeMismatch { line: no, declared: row_degs[j], found: list.len() });
        }
        rows.push(list);
    }

    if let Some((no, _)) = lines.next() {
        return Err(AlistError::Malformed { line: no, message: "unexpected trailing content".into() });
    }

    // The column section is redundant; verify it is the transpose of rows.
    let mut cols_from_rows = vec![Vec::new(); n];
    for (j, row) in rows.iter().enumerate() {
        for &i in row {
            if i < n {
                cols_from_rows[i].push(j);
            }
        }
    }
    for (i, (line_no, listed)) in cols.iter().enumerate() {
        let mut derived = cols_from_rows[i].clone();
        derived.sort_unstable();
        if listed != &derived {
            return Err(AlistError::Inconsistent {
                line: *line_no,
                message: format!("column {} adjacency does not match the row section", i + 1),
            });
        }
    }

    ParityCheckMatrix::from_rows(n, rows).map_err(AlistError::Admission)
}

/// Emit a matrix in canonical alist form: exact degrees, no padding zeros,
/// 1-based indices, one trailing newline. `parse_alist` of the output
/// reproduces the adjacency exactly.
pub fn write_alist(h: &ParityCheckMatrix) -> String {
    let join = |v: &[usize]| {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", h.n(), h.m()));
    out.push_str(&format!("{} {}\n", h.max_col_degree(), h.max_row_degree()));
    let col_degs: Vec<usize> = (0..h.n()).map(|i| h.col(i).len()).collect();
    let row_degs: Vec<usize> = (0..h.m()).map(|j| h.row(j).len()).collect();
    out.push_str(&join(&col_degs));
    out.push('\n');
    out.push_str(&join(&row_degs));
    out.push('\n');
    for i in 0..h.n() {
        let one_based: Vec<usize> = h.col(i).iter().map(|&j| j + 1).collect();
        out.push_str(&join(&one_based));
        out.push('\n');
    }
    for j in 0..h.m() {
        let one_based: Vec<usize> = h.row(j).iter().map(|&i| i + 1).collect();
        out.push_str(&join(&one_based));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Random code generation (test fixtures)
// ---------------------------------------------------------------------------

#[inline]
fn uniform_index(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    // Multiply-shift mapping of a 64-bit draw onto 0..bound.
    ((rng.next_u64() as u128 * bound as u128) >> 64) as usize
}

fn shuffle(rng: &mut ChaCha8Rng, items: &mut [usize]) {
    // Fisher-Yates; hand-rolled so the fixture bit patterns do not depend
    // on rand's shuffle implementation.
    for k in (1..items.len()).rev() {
        let j = uniform_index(rng, k + 1);
        items.swap(k, j);
    }
}

const MAX_SAMPLING_ATTEMPTS: usize = 20_000;

/// Sample a random Tanner graph with the exact given degree sequences
/// (configuration model, resampled until simple). Deterministic in `seed`.
pub fn random_code_from_degree_sequences(
    var_degrees: &[usize],
    check_degrees: &[usize],
    seed: u64,
) -> Result<ParityCheckMatrix, CodeError> {
    let n = var_degrees.len();
    let m = check_degrees.len();
    if n == 0 || m == 0 {
        return Err(CodeError::EmptyMatrix);
    }
    let var_sockets: usize = var_degrees.iter().sum();
    let check_sockets: usize = check_degrees.iter().sum();
    if var_sockets != check_sockets {
        return Err(CodeError::InfeasibleDegrees(format!(
            "variable sockets ({var_sockets}) != check sockets ({check_sockets})"
        )));
    }
    if let Some(d) = var_degrees.iter().position(|&d| d == 0) {
        return Err(CodeError::UncoveredVariable { index: d });
    }
    for (j, &d) in check_degrees.iter().enumerate() {
        if d < 3 {
            return Err(CodeError::RowDegreeTooSmall { row: j, degree: d });
        }
        if d > n {
            return Err(CodeError::InfeasibleDegrees(format!(
                "check {j} needs {d} distinct variables but n = {n}"
            )));
        }
    }

    let mut sockets: Vec<usize> = Vec::with_capacity(var_sockets);
    for (i, &d) in var_degrees.iter().enumerate() {
        sockets.extend(std::iter::repeat_n(i, d));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..MAX_SAMPLING_ATTEMPTS {
        shuffle(&mut rng, &mut sockets);
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(m);
        let mut cursor = 0usize;
        for &d in check_degrees {
            let mut row: Vec<usize> = sockets[cursor..cursor + d].to_vec();
            cursor += d;
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                continue 'attempt; // repeated edge: resample
            }
            rows.push(row);
        }
        return ParityCheckMatrix::from_rows(n, rows);
    }
    Err(CodeError::GenerationFailed { attempts: MAX_SAMPLING_ATTEMPTS })
}

/// Sample a (dv, dc)-regular code with `n` variables. Requires `n * dv`
/// divisible by `dc` and `dc >= 3`. Deterministic in `seed`.
pub fn random_regular_code(n: usize, dv: usize, dc: usize, seed: u64) -> Result<ParityCheckMatrix, CodeError> {
    if dc < 3 {
        return Err(CodeError::InfeasibleDegrees(format!("check degree {dc} < 3")));
    }
    if dv == 0 {
        return Err(CodeError::InfeasibleDegrees("variable degree 0".into()));
    }
    if n == 0 || !(n * dv).is_multiple_of(dc) {
        return Err(CodeError::InfeasibleDegrees(format!(
            "n*dv = {} is not divisible by dc = {dc}",
            n * dv
        )));
    }
    let m = n * dv / dc;
    random_code_from_degree_sequences(&vec![dv; n], &vec![dc; m], seed)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn single_check() -> ParityCheckMatrix {
        ParityCheckMatrix::from_rows(3, vec![vec![0, 1, 2]]).unwrap()
    }

    const TRIPLE_ALIST: &str = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 3\n";

    #[test]
    fn parse_smallest_admissible_code() {
        let h = parse_alist(TRIPLE_ALIST).unwrap();
        assert_eq!(h.m(), 1);
        assert_eq!(h.n(), 3);
        assert_eq!(h.row(0), &[0, 1, 2]);
        assert_eq!(h.col(1), &[0]);
    }

    #[test]
    fn write_single_check_is_eight_lines() {
        let text = write_alist(&single_check());
        assert_eq!(text, TRIPLE_ALIST);
        assert_eq!(text.trim_end().lines().count(), 8);
    }

    #[test]
    fn parse_write_round_trip_regular() {
        let h = random_regular_code(24, 3, 6, 7).unwrap();
        let again = parse_alist(&write_alist(&h)).unwrap();
        assert_eq!(h, again);
    }

    #[test]
    fn padding_zeros_accepted_and_not_emitted() {
        // Same single-check code with zero padding in the adjacency lines.
        let padded = "3 1\n1 3\n1 1 1\n3\n1 0\n1 0\n1 0\n1 2 3 0\n";
        let h = parse_alist(padded).unwrap();
        assert_eq!(h, single_check());
        assert!(!write_alist(&h).contains(" 0"));
    }

    #[test]
    fn malformed_header_reports_line() {
        match parse_alist("3\n") {
            Err(AlistError::Malformed { line: 1, .. }) => {}
            other => panic!("expected malformed header, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_reports_line() {
        let bad = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 4\n";
        match parse_alist(bad) {
            Err(AlistError::IndexOutOfRange { line: 8, index: 4, limit: 3 }) => {}
            other => panic!("expected out-of-range on line 8, got {other:?}"),
        }
    }

    #[test]
    fn degree_mismatch_reports_line() {
        let bad = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2\n";
        match parse_alist(bad) {
            Err(AlistError::DegreeMismatch { line: 8, declared: 3, found: 2 }) => {}
            other => panic!("expected degree mismatch on line 8, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_sections_rejected() {
        // Column section claims variable 1 is in the check, row section
        // says variables 1,2,3 -- degrees made consistent per section.
        let bad = "3 1\n1 3\n1 1 1\n3\n1\n1\n1\n1 2 2\n";
        assert!(parse_alist(bad).is_err());
    }

    #[test]
    fn degenerate_rows_rejected_at_admission() {
        let err = ParityCheckMatrix::from_rows(3, vec![vec![]]).unwrap_err();
        assert_eq!(err, CodeError::RowDegreeTooSmall { row: 0, degree: 0 });
        let err = ParityCheckMatrix::from_rows(3, vec![vec![0, 1]]).unwrap_err();
        assert_eq!(err, CodeError::RowDegreeTooSmall { row: 0, degree: 2 });
    }

    #[test]
    fn uncovered_variable_rejected() {
        let err = ParityCheckMatrix::from_rows(4, vec![vec![0, 1, 2]]).unwrap_err();
        assert_eq!(err, CodeError::UncoveredVariable { index: 3 });
    }

    #[test]
    fn syndrome_even_and_odd_parity() {
        let h = single_check();
        let even = BitVector::from_bits(vec![1, 1, 0]).unwrap();
        let odd = BitVector::from_bits(vec![1, 0, 0]).unwrap();
        assert_eq!(h.syndrome(&even).as_slice(), &[0]);
        assert_eq!(h.syndrome(&odd).as_slice(), &[1]);
        assert!(h.is_codeword(&even));
        assert!(!h.is_codeword(&odd));
    }

    #[test]
    fn zero_vector_has_zero_syndrome() {
        let h = random_regular_code(24, 3, 6, 3).unwrap();
        let zero = BitVector::zeros(24);
        assert_eq!(h.syndrome(&zero).weight(), 0);
    }

    #[test]
    fn regular_generator_degree_accounting() {
        let h = random_regular_code(24, 3, 6, 7).unwrap();
        assert_eq!(h.m(), 12);
        assert!((0..h.m()).all(|j| h.row(j).len() == 6));
        assert!((0..h.n()).all(|i| h.col(i).len() == 3));
    }

    #[test]
    fn regular_generator_deterministic() {
        let a = random_regular_code(24, 3, 6, 7).unwrap();
        let b = random_regular_code(24, 3, 6, 7).unwrap();
        assert_eq!(a, b);
        let c = random_regular_code(24, 3, 6, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn regular_generator_divisibility_precondition() {
        match random_regular_code(10, 3, 4, 1) {
            Err(CodeError::InfeasibleDegrees(_)) => {}
            other => panic!("expected infeasible degrees, got {other:?}"),
        }
    }

    #[test]
    fn bit_vector_validation() {
        assert!(BitVector::from_bits(vec![0, 1, 1]).is_ok());
        assert_eq!(
            BitVector::from_bits(vec![0, 2]).unwrap_err(),
            CodeError::NonBinaryValue { index: 1, value: 2 }
        );
    }
}
