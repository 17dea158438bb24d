//! Check-node decomposition and the block-sparse constraint system of the
//! LP decoding model.
//!
//! Each degree-`d` parity check is replaced by `d - 2` degree-3 checks
//! chained through `d - 3` auxiliary variables. A degree-3 parity
//! constraint relaxes to four linear inequalities on its triple of
//! variables, written `F (v_a, v_b, v_c) <= t` with the fixed 4x3 block
//! [`F_BLOCK`] and right-hand side [`T_BLOCK`]. Stacking one block per
//! triple yields the constraint matrix `A` of the linear program
//!
//! ```text
//!     minimize  q' v    subject to  A v <= b,  v in [0,1]^N
//! ```
//!
//! with `N = n + aux` extended variables and `M = 4 * triples` rows.
//!
//! `A` is never stored explicitly on the decode path: its entries are all
//! in {0, -1, 1}, its columns are mutually orthogonal, and every product
//! with `A` or `A'` reduces to signed additions over the triples. The
//! [`ConstraintSystem`] keeps only the triples, the column adjacency, and
//! the diagonal of `A'A`.

use crate::code::ParityCheckMatrix;
use std::fmt;

/// The fixed relaxation block: rows are the four inequality normals of a
/// degree-3 parity constraint. Columns are pairwise orthogonal and each
/// has squared norm 4.
pub const F_BLOCK: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Right-hand side of one relaxation block.
pub const T_BLOCK: [f64; 4] = [2.0, 0.0, 0.0, 0.0];

/// One degree-3 constraint: three distinct indices into the extended
/// variable vector (original bits first, then auxiliaries).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple(pub usize, pub usize, pub usize);

impl Triple {
    #[inline]
    pub fn slot(&self, s: usize) -> usize {
        match s {
            0 => self.0,
            1 => self.1,
            2 => self.2,
            _ => panic!("triple slot out of range"),
        }
    }
}

/// Errors from the decomposition step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    /// Decomposition is undefined for checks of degree < 3.
    CheckDegreeTooSmall { degree: usize },
}

impl fmt::Display for PolytopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeError::CheckDegreeTooSmall { degree } => {
                write!(f, "cannot decompose a check of degree {degree}; need degree >= 3")
            }
        }
    }
}

impl std::error::Error for PolytopeError {}

/// Decompose one check row into its chain of degree-3 triples.
///
/// For a row `x1..xd` and fresh auxiliary indices starting at `next_aux`,
/// the chain is `(x1, x2, u1), (u1, x3, u2), ..., (u_{d-3}, x_{d-1}, xd)`;
/// a degree-3 row yields the single triple `(x1, x2, x3)`. Returns the
/// triples and the number of auxiliaries consumed (`d - 3`).
pub fn decompose_check(row: &[usize], next_aux: usize) -> Result<(Vec<Triple>, usize), PolytopeError> {
    let d = row.len();
    if d < 3 {
        return Err(PolytopeError::CheckDegreeTooSmall { degree: d });
    }
    if d == 3 {
        return Ok((vec![Triple(row[0], row[1], row[2])], 0));
    }
    let aux_count = d - 3;
    let mut triples = Vec::with_capacity(d - 2);
    triples.push(Triple(row[0], row[1], next_aux));
    for k in 0..aux_count - 1 {
        triples.push(Triple(next_aux + k, row[k + 2], next_aux + k + 1));
    }
    triples.push(Triple(next_aux + aux_count - 1, row[d - 2], row[d - 1]));
    Ok((triples, aux_count))
}

// ---------------------------------------------------------------------------
// Constraint system
// ---------------------------------------------------------------------------

/// Structural validation failure, naming the violated property.
#[derive(Debug, Clone, PartialEq)]
pub enum Fact1Violation {
    /// Dense materialization would exceed the size guard.
    DimensionTooLarge { rows: usize, cols: usize },
    /// An entry of A is not in {0, -1, 1}.
    EntryOutOfRange { row: usize, col: usize, value: f64 },
    /// The nonzero count differs from 12 per triple.
    NonzeroCount { expected: usize, found: usize },
    /// An off-diagonal entry of A'A is nonzero (columns not orthogonal).
    ColumnsNotOrthogonal { i: usize, j: usize, value: f64 },
    /// diag(A'A) differs from the stored column norms.
    DiagonalMismatch { i: usize, expected: f64, found: f64 },
    /// A triple repeats an index or points outside the extended range.
    BadTriple { triple: usize, message: String },
    /// A variable appears in no triple.
    UncoveredColumn { col: usize },
    /// The per-check triple chains are malformed.
    BrokenChain { check: usize, message: String },
}

impl fmt::Display for Fact1Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact1Violation::DimensionTooLarge { rows, cols } => {
                write!(f, "dense validation skipped: {rows} x {cols} exceeds the size guard")
            }
            Fact1Violation::EntryOutOfRange { row, col, value } => {
                write!(f, "A[{row}][{col}] = {value} is outside {{0, -1, 1}}")
            }
            Fact1Violation::NonzeroCount { expected, found } => {
                write!(f, "A has {found} nonzeros, expected {expected}")
            }
            Fact1Violation::ColumnsNotOrthogonal { i, j, value } => {
                write!(f, "(A'A)[{i}][{j}] = {value}, columns {i} and {j} are not orthogonal")
            }
            Fact1Violation::DiagonalMismatch { i, expected, found } => {
                write!(f, "(A'A)[{i}][{i}] = {found}, expected e[{i}] = {expected}")
            }
            Fact1Violation::BadTriple { triple, message } => write!(f, "triple {triple}: {message}"),
            Fact1Violation::UncoveredColumn { col } => write!(f, "variable {col} appears in no triple"),
            Fact1Violation::BrokenChain { check, message } => write!(f, "check {check}: {message}"),
        }
    }
}

impl std::error::Error for Fact1Violation {}

/// Summary of a successful structural validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact1Report {
    pub rows: usize,
    pub cols: usize,
    pub nonzeros: usize,
    /// Whether the dense A'A check ran (false when only the sparse
    /// structural walk was possible).
    pub dense_checked: bool,
}

/// The standard-form LP data in block-sparse form.
///
/// Holds the triples (one per degree-3 constraint), the cost vector
/// `q = [llrs; 0]`, the stacked right-hand side `b`, the column adjacency
/// of `A` (which triples touch each variable, and in which slot), and the
/// diagonal `e = diag(A'A)`. The original check rows are retained for
/// syndrome-based early termination.
///
/// Immutable after construction apart from [`set_cost`](Self::set_cost);
/// the apply operations are pure and safe to call concurrently.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    n: usize,
    aux_count: usize,
    triples: Vec<Triple>,
    /// Original check rows, for early-termination syndrome tests.
    checks: Vec<Vec<usize>>,
    /// Triple range of check j: triples[check_starts[j]..check_starts[j+1]].
    check_starts: Vec<usize>,
    q: Vec<f64>,
    b: Vec<f64>,
    /// CSR-style column adjacency: for variable i, the (triple, slot)
    /// pairs in adj_entries[adj_starts[i]..adj_starts[i+1]], triple order.
    adj_starts: Vec<usize>,
    adj_entries: Vec<(u32, u8)>,
    e: Vec<f64>,
    inv_e: Vec<f64>,
}

/// Assemble the constraint system for a code and cost vector.
///
/// `llrs` must have length `h.n()`. Triples are laid out check by check in
/// row order, chain order within a check; auxiliary variables are numbered
/// from `n` upward in the same order.
pub fn build_system(h: &ParityCheckMatrix, llrs: &[f64]) -> ConstraintSystem {
    assert_eq!(llrs.len(), h.n(), "cost vector length must equal n");
    let n = h.n();
    let mut triples = Vec::new();
    let mut check_starts = Vec::with_capacity(h.m() + 1);
    let mut next_aux = n;
    check_starts.push(0);
    for j in 0..h.m() {
        let (chain, consumed) = decompose_check(h.row(j), next_aux)
            .expect("admitted matrices have check degree >= 3");
        next_aux += consumed;
        triples.extend(chain);
        check_starts.push(triples.len());
    }
    let aux_count = next_aux - n;
    let extended = n + aux_count;

    let mut counts = vec![0usize; extended];
    for t in &triples {
        counts[t.0] += 1;
        counts[t.1] += 1;
        counts[t.2] += 1;
    }
    let mut adj_starts = Vec::with_capacity(extended + 1);
    let mut acc = 0usize;
    adj_starts.push(0);
    for &c in &counts {
        acc += c;
        adj_starts.push(acc);
    }
    let mut fill = adj_starts.clone();
    let mut adj_entries = vec![(0u32, 0u8); acc];
    for (tau, t) in triples.iter().enumerate() {
        for slot in 0..3usize {
            let i = t.slot(slot);
            adj_entries[fill[i]] = (tau as u32, slot as u8);
            fill[i] += 1;
        }
    }

    let e: Vec<f64> = counts.iter().map(|&c| 4.0 * c as f64).collect();
    let inv_e: Vec<f64> = e.iter().map(|&x| if x > 0.0 { 1.0 / x } else { 0.0 }).collect();

    let mut q = Vec::with_capacity(extended);
    q.extend_from_slice(llrs);
    q.resize(extended, 0.0);

    let mut b = vec![0.0; 4 * triples.len()];
    for tau in 0..triples.len() {
        b[4 * tau] = T_BLOCK[0];
    }

    ConstraintSystem {
        n,
        aux_count,
        triples,
        checks: h.rows().to_vec(),
        check_starts,
        q,
        b,
        adj_starts,
        adj_entries,
        e,
        inv_e,
    }
}

impl ConstraintSystem {
    /// Number of original variables (codeword bits).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of auxiliary variables introduced by the decomposition.
    pub fn aux_count(&self) -> usize {
        self.aux_count
    }

    /// Extended dimension `N = n + aux_count`.
    pub fn extended_dim(&self) -> usize {
        self.n + self.aux_count
    }

    /// Number of constraint rows `M = 4 * triple_count`.
    pub fn constraint_dim(&self) -> usize {
        4 * self.triples.len()
    }

    /// Number of degree-3 constraints.
    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Original check rows (variable index lists).
    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    /// Triples belonging to check `j`, in chain order.
    pub fn check_triples(&self, j: usize) -> &[Triple] {
        &self.triples[self.check_starts[j]..self.check_starts[j + 1]]
    }

    /// (triple, slot) pairs containing variable `i`, in triple order.
    #[inline]
    pub fn col_adj(&self, i: usize) -> &[(u32, u8)] {
        &self.adj_entries[self.adj_starts[i]..self.adj_starts[i + 1]]
    }

    pub fn cost(&self) -> &[f64] {
        &self.q
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// diag(A'A): `e[i] = 4 *` (number of triples containing `i`).
    pub fn column_norms(&self) -> &[f64] {
        &self.e
    }

    pub fn inv_column_norms(&self) -> &[f64] {
        &self.inv_e
    }

    /// Replace the cost vector with `[llrs; 0]`, leaving the structure
    /// untouched. Lets one system decode many frames of the same code.
    pub fn set_cost(&mut self, llrs: &[f64]) {
        assert_eq!(llrs.len(), self.n, "cost vector length must equal n");
        self.q[..self.n].copy_from_slice(llrs);
    }

    /// `A v`, computed block by block with signed additions only.
    ///
    /// Panics if lengths do not match the system dimensions.
    pub fn apply_a(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.constraint_dim()];
        self.apply_a_into(v, &mut out);
        out
    }

    pub fn apply_a_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.extended_dim(), "apply_a input length mismatch");
        assert_eq!(out.len(), self.constraint_dim(), "apply_a output length mismatch");
        for (tau, t) in self.triples.iter().enumerate() {
            let (a, b, c) = (v[t.0], v[t.1], v[t.2]);
            let base = 4 * tau;
            out[base] = a + b + c;
            out[base + 1] = a - b - c;
            out[base + 2] = b - a - c;
            out[base + 3] = c - a - b;
        }
    }

    /// `A' y`: component `i` accumulates the signed block sums of every
    /// triple containing `i`, in triple order (fixed reduction order, so
    /// results are reproducible).
    pub fn apply_at(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.extended_dim()];
        self.apply_at_into(y, &mut out);
        out
    }

    pub fn apply_at_into(&self, y: &[f64], out: &mut [f64]) {
        assert_eq!(y.len(), self.constraint_dim(), "apply_at input length mismatch");
        assert_eq!(out.len(), self.extended_dim(), "apply_at output length mismatch");
        for i in 0..self.extended_dim() {
            let mut acc = 0.0;
            for &(tau, slot) in self.col_adj(i) {
                let base = 4 * tau as usize;
                // Columns of the block: (1,1,-1,-1), (1,-1,1,-1), (1,-1,-1,1).
                acc += match slot {
                    0 => y[base] + y[base + 1] - y[base + 2] - y[base + 3],
                    1 => y[base] - y[base + 1] + y[base + 2] - y[base + 3],
                    _ => y[base] - y[base + 1] - y[base + 2] + y[base + 3],
                };
            }
            out[i] = acc;
        }
    }

    /// Syndrome test on a hard decision over the original bits.
    pub fn hard_decision_satisfies_checks(&self, bits: &[u8]) -> bool {
        debug_assert_eq!(bits.len(), self.n);
        self.checks.iter().all(|row| {
            let mut parity = 0u8;
            for &i in row {
                parity ^= bits[i];
            }
            parity == 0
        })
    }

    /// Sparse structural walk, valid at any size: triples well-formed,
    /// every column covered, adjacency and norms consistent, per-check
    /// chains sharing auxiliaries exactly as constructed.
    pub fn validate_structure(&self) -> Result<Fact1Report, Fact1Violation> {
        let extended = self.extended_dim();
        for (tau, t) in self.triples.iter().enumerate() {
            let idx = [t.0, t.1, t.2];
            if idx.iter().any(|&i| i >= extended) {
                return Err(Fact1Violation::BadTriple {
                    triple: tau,
                    message: format!("index out of range (N = {extended})"),
                });
            }
            if t.0 == t.1 || t.0 == t.2 || t.1 == t.2 {
                return Err(Fact1Violation::BadTriple {
                    triple: tau,
                    message: "indices are not distinct".into(),
                });
            }
        }
        let mut counts = vec![0usize; extended];
        for t in &self.triples {
            counts[t.0] += 1;
            counts[t.1] += 1;
            counts[t.2] += 1;
        }
        if let Some(col) = counts.iter().position(|&c| c == 0) {
            return Err(Fact1Violation::UncoveredColumn { col });
        }
        for (i, &c) in counts.iter().enumerate() {
            let expected = 4.0 * c as f64;
            if self.e[i] != expected {
                return Err(Fact1Violation::DiagonalMismatch { i, expected, found: self.e[i] });
            }
            if self.col_adj(i).len() != c {
                return Err(Fact1Violation::BadTriple {
                    triple: 0,
                    message: format!("column adjacency of variable {i} is inconsistent"),
                });
            }
        }
        // Chain shape per check: consecutive triples share exactly one
        // auxiliary; different checks share no auxiliary.
        let mut aux_owner = vec![usize::MAX; extended];
        for j in 0..self.checks.len() {
            let chain = &self.triples[self.check_starts[j]..self.check_starts[j + 1]];
            for t in chain {
                for &i in &[t.0, t.1, t.2] {
                    if i >= self.n {
                        if aux_owner[i] != usize::MAX && aux_owner[i] != j {
                            return Err(Fact1Violation::BrokenChain {
                                check: j,
                                message: format!("auxiliary {i} is shared with check {}", aux_owner[i]),
                            });
                        }
                        aux_owner[i] = j;
                    }
                }
            }
            for w in chain.windows(2) {
                let a = [w[0].0, w[0].1, w[0].2];
                let b = [w[1].0, w[1].1, w[1].2];
                let shared: Vec<usize> =
                    a.iter().copied().filter(|i| b.contains(i)).collect();
                if shared.len() != 1 || shared[0] < self.n {
                    return Err(Fact1Violation::BrokenChain {
                        check: j,
                        message: "consecutive triples must share exactly one auxiliary".into(),
                    });
                }
            }
        }
        Ok(Fact1Report {
            rows: self.constraint_dim(),
            cols: extended,
            nonzeros: 12 * self.triple_count(),
            dense_checked: false,
        })
    }

    /// Materialize A densely and verify the structural facts the decoder
    /// relies on: entries in {0, -1, 1}, exactly 12 nonzeros per triple,
    /// and A'A diagonal with diagonal `e`. All comparisons are exact.
    ///
    /// Guarded to small systems; larger ones get `DimensionTooLarge`
    /// (use [`validate_structure`](Self::validate_structure) instead).
    pub fn validate_fact1(&self) -> Result<Fact1Report, Fact1Violation> {
        const DENSE_GUARD: usize = 8_000_000;
        let rows = self.constraint_dim();
        let cols = self.extended_dim();
        if rows.saturating_mul(cols) > DENSE_GUARD {
            return Err(Fact1Violation::DimensionTooLarge { rows, cols });
        }

        let dense = self.materialize_dense();

        let mut nonzeros = 0usize;
        for (r, row) in dense.iter().enumerate() {
            for (c, &value) in row.iter().enumerate() {
                if value != 0.0 && value != 1.0 && value != -1.0 {
                    return Err(Fact1Violation::EntryOutOfRange { row: r, col: c, value });
                }
                if value != 0.0 {
                    nonzeros += 1;
                }
            }
        }
        let expected_nnz = 12 * self.triple_count();
        if nonzeros != expected_nnz {
            return Err(Fact1Violation::NonzeroCount { expected: expected_nnz, found: nonzeros });
        }

        // Gram matrix from the dense array alone (zero terms contribute
        // nothing, so skipping them is exact).
        let mut gram = vec![vec![0.0f64; cols]; cols];
        for row in &dense {
            let nz: Vec<usize> = (0..cols).filter(|&c| row[c] != 0.0).collect();
            for &a in &nz {
                for &b in &nz {
                    gram[a][b] += row[a] * row[b];
                }
            }
        }
        for i in 0..cols {
            for j in 0..cols {
                if i == j {
                    if gram[i][i] != self.e[i] {
                        return Err(Fact1Violation::DiagonalMismatch {
                            i,
                            expected: self.e[i],
                            found: gram[i][i],
                        });
                    }
                } else if gram[i][j] != 0.0 {
                    return Err(Fact1Violation::ColumnsNotOrthogonal { i, j, value: gram[i][j] });
                }
            }
        }

        self.validate_structure()?;
        Ok(Fact1Report { rows, cols, nonzeros, dense_checked: true })
    }

    /// Explicit dense copy of A (verification only, never on the decode
    /// path).
    pub fn materialize_dense(&self) -> Vec<Vec<f64>> {
        let rows = self.constraint_dim();
        let cols = self.extended_dim();
        let mut dense = vec![vec![0.0f64; cols]; rows];
        for (tau, t) in self.triples.iter().enumerate() {
            for (r, f_row) in F_BLOCK.iter().enumerate() {
                for slot in 0..3 {
                    dense[4 * tau + r][t.slot(slot)] += f_row[slot];
                }
            }
        }
        dense
    }

    /// Coordinate-triplet text dump of A (`row col value`, one entry per
    /// line, row-major) for external verification.
    pub fn dump_coordinates(&self) -> String {
        let mut out = String::new();
        for (tau, t) in self.triples.iter().enumerate() {
            for (r, f_row) in F_BLOCK.iter().enumerate() {
                let mut entries: Vec<(usize, f64)> =
                    (0..3).map(|slot| (t.slot(slot), f_row[slot])).collect();
                entries.sort_by_key(|&(col, _)| col);
                for (col, value) in entries {
                    out.push_str(&format!("{} {} {}\n", 4 * tau + r, col, value));
                }
            }
        }
        out
    }

    /// Test-support constructor from raw triples: builds adjacency, norms
    /// and right-hand side without enforcing triple well-formedness, so
    /// that the validators can be exercised on broken systems.
    pub fn from_raw_triples(
        n: usize,
        aux_count: usize,
        triples: Vec<Triple>,
        checks: Vec<Vec<usize>>,
        cost: Vec<f64>,
    ) -> ConstraintSystem {
        let extended = n + aux_count;
        assert_eq!(cost.len(), extended);
        let mut counts = vec![0usize; extended];
        for t in &triples {
            counts[t.0] += 1;
            counts[t.1] += 1;
            counts[t.2] += 1;
        }
        let mut adj_starts = Vec::with_capacity(extended + 1);
        let mut acc = 0usize;
        adj_starts.push(0);
        for &c in &counts {
            acc += c;
            adj_starts.push(acc);
        }
        let mut fill = adj_starts.clone();
        let mut adj_entries = vec![(0u32, 0u8); acc];
        for (tau, t) in triples.iter().enumerate() {
            for slot in 0..3usize {
                let i = t.slot(slot);
                adj_entries[fill[i]] = (tau as u32, slot as u8);
                fill[i] += 1;
            }
        }
        let e: Vec<f64> = counts.iter().map(|&c| 4.0 * c as f64).collect();
        let inv_e: Vec<f64> = e.iter().map(|&x| if x > 0.0 { 1.0 / x } else { 0.0 }).collect();
        let mut b = vec![0.0; 4 * triples.len()];
        for tau in 0..triples.len() {
            b[4 * tau] = T_BLOCK[0];
        }
        let check_starts = vec![0, triples.len()];
        ConstraintSystem {
            n,
            aux_count,
            triples,
            checks,
            check_starts,
            q: cost,
            b,
            adj_starts,
            adj_entries,
            e,
            inv_e,
        }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
