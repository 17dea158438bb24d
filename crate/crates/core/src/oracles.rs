//! Independent reference implementations used to certify the fast paths
//! at small scale: explicit dense matrices, exhaustive codeword
//! enumeration, an exact simplex LP solver, and bitwise-MAP
//! marginalization.
//!
//! Everything here sits behind size guards and stays off the performance
//! path; it exists to certify, not to compete.

use crate::admm::{DecoderConfig, DecoderState};
use crate::code::{BitVector, ParityCheckMatrix};
use crate::polytope::ConstraintSystem;
use std::fmt;

/// Size guards exceeded, or no solution where one is required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooLarge { what: &'static str, size: usize, limit: usize },
    SimplexStalled { pivots: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { what, size, limit } => {
                write!(f, "{what} of size {size} exceeds the oracle guard {limit}")
            }
            OracleError::SimplexStalled { pivots } => {
                write!(f, "simplex did not terminate within {pivots} pivots")
            }
        }
    }
}

impl std::error::Error for OracleError {}

// ---------------------------------------------------------------------------
// Degree-3 polytope membership
// ---------------------------------------------------------------------------

const P3_TOLERANCE: f64 = 1e-9;

/// Membership in the convex hull of the even-parity binary triples: the
/// sum inequality, the three sign-pattern inequalities, and the six box
/// bounds, all checked directly with tolerance 1e-9.
pub fn p3_membership(x1: f64, x2: f64, x3: f64) -> bool {
    let t = P3_TOLERANCE;
    x1 + x2 + x3 <= 2.0 + t
        && x1 - x2 - x3 <= t
        && -x1 + x2 - x3 <= t
        && -x1 - x2 + x3 <= t
        && (-t..=1.0 + t).contains(&x1)
        && (-t..=1.0 + t).contains(&x2)
        && (-t..=1.0 + t).contains(&x3)
}

// ---------------------------------------------------------------------------
// Codeword enumeration and brute-force ML
// ---------------------------------------------------------------------------

const ENUMERATION_LIMIT: usize = 24;

/// GF(2) row reduction of H packed into u64 words; returns a basis of the
/// nullspace (the codeword space).
pub fn nullspace_basis(h: &ParityCheckMatrix) -> Vec<BitVector> {
    let n = h.n();
    let m = h.m();
    let words = n.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = vec![vec![0u64; words]; m];
    for (j, packed) in rows.iter_mut().enumerate() {
        for &i in h.row(j) {
            packed[i / 64] |= 1u64 << (i % 64);
        }
    }

    let get = |row: &[u64], i: usize| (row[i / 64] >> (i % 64)) & 1 == 1;
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let mut pivot = None;
        for r in rank..m {
            if get(&rows[r], col) {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && get(row, col) {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= b;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }

    let is_pivot: Vec<bool> = {
        let mut flags = vec![false; n];
        for &c in &pivot_cols {
            flags[c] = true;
        }
        flags
    };
    let mut basis = Vec::new();
    for free_col in (0..n).filter(|&c| !is_pivot[c]) {
        let mut vec = BitVector::zeros(n);
        vec.set(free_col, 1);
        // Back-substitute: pivot row r has its pivot at pivot_cols[r].
        for (r, &pc) in pivot_cols.iter().enumerate() {
            if get(&rows[r], free_col) {
                vec.set(pc, 1);
            }
        }
        basis.push(vec);
    }
    basis
}

/// All codewords of H by enumerating the nullspace. Guarded to dimension
/// `n - rank <= 24`.
pub fn enumerate_codewords(h: &ParityCheckMatrix) -> Result<Vec<BitVector>, OracleError> {
    let basis = nullspace_basis(h);
    let k = basis.len();
    if k > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge {
            what: "codeword space dimension",
            size: k,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut words = Vec::with_capacity(1usize << k);
    for mask in 0usize..(1 << k) {
        let mut x = BitVector::zeros(h.n());
        for (b, basis_vec) in basis.iter().enumerate() {
            if (mask >> b) & 1 == 1 {
                x.xor_assign(basis_vec);
            }
        }
        words.push(x);
    }
    Ok(words)
}

/// A maximum-likelihood codeword with its objective and the full tie set.
#[derive(Debug, Clone, PartialEq)]
pub struct MlSolution {
    /// Lexicographically smallest minimizer.
    pub bits: BitVector,
    pub objective: f64,
    /// Every codeword whose objective is within 1e-9 of the minimum,
    /// sorted lexicographically (contains `bits`).
    pub ties: Vec<BitVector>,
}

/// Exhaustive ML decoding: minimize the LLR cost over all codewords.
/// Guarded to `n <= 24`.
pub fn brute_force_ml(h: &ParityCheckMatrix, llrs: &[f64]) -> Result<MlSolution, OracleError> {
    assert_eq!(llrs.len(), h.n(), "LLR length must equal n");
    if h.n() > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge { what: "code length", size: h.n(), limit: ENUMERATION_LIMIT });
    }
    let objective_of = |x: &BitVector| -> f64 {
        llrs.iter()
            .enumerate()
            .filter(|(i, _)| x.bit(*i) == 1)
            .map(|(_, &g)| g)
            .sum()
    };
    let mut codewords = enumerate_codewords(h)?;
    codewords.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
    let mut best = f64::INFINITY;
    for x in &codewords {
        let obj = objective_of(x);
        if obj < best {
            best = obj;
        }
    }
    let ties: Vec<BitVector> = codewords
        .into_iter()
        .filter(|x| objective_of(x) <= best + 1e-9)
        .collect();
    Ok(MlSolution { bits: ties[0].clone(), objective: best, ties })
}

// ---------------------------------------------------------------------------
// Dense reference system and ADMM step
// ---------------------------------------------------------------------------

/// The LP data with A held as an explicit dense matrix.
#[derive(Debug, Clone)]
pub struct DenseSystem {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub q: Vec<f64>,
    pub e: Vec<f64>,
}

impl DenseSystem {
    pub fn from_system(sys: &ConstraintSystem) -> DenseSystem {
        DenseSystem {
            a: sys.materialize_dense(),
            b: sys.rhs().to_vec(),
            q: sys.cost().to_vec(),
            e: sys.column_norms().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.q.len()
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        self.a
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    fn column_dot(&self, i: usize, y: &[f64]) -> f64 {
        self.a.iter().zip(y).map(|(row, yy)| row[i] * yy).sum()
    }
}

/// One full ADMM iteration with explicit matrices and naive projections,
/// mirroring the closed-form coordinate solutions. Mutates the state the
/// same way the sparse path does (including `w_prev` and `k`).
pub fn dense_admm_step(dsys: &DenseSystem, state: &mut DecoderState, cfg: &DecoderConfig) {
    let cols = dsys.cols();
    let rows = dsys.rows();
    // v-step: per-coordinate minimizer of the separable quadratic,
    // projected onto [0, 1].
    let shift: Vec<f64> = (0..rows)
        .map(|j| dsys.b[j] - state.w[j] - state.lambda[j])
        .collect();
    for i in 0..cols {
        let unconstrained = (dsys.column_dot(i, &shift) - dsys.q[i] / cfg.mu) / dsys.e[i];
        state.v[i] = unconstrained.clamp(0.0, 1.0);
    }
    // w-step and dual step on the (optionally relaxed) row values.
    let av = dsys.matvec(&state.v);
    std::mem::swap(&mut state.w, &mut state.w_prev);
    for j in 0..rows {
        let h = if cfg.alpha == 1.0 {
            av[j]
        } else {
            cfg.alpha * av[j] - (1.0 - cfg.alpha) * (state.w_prev[j] - dsys.b[j])
        };
        state.w[j] = (dsys.b[j] - h - state.lambda[j]).max(0.0);
        state.lambda[j] += h + state.w[j] - dsys.b[j];
    }
    state.k += 1;
}

// ---------------------------------------------------------------------------
// Exact LP by primal simplex
// ---------------------------------------------------------------------------

/// An LP optimum and its objective.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub v: Vec<f64>,
    pub objective: f64,
}

const SIMPLEX_DIM_LIMIT: usize = 48;
const SIMPLEX_PIVOT_LIMIT: usize = 200_000;
const SIMPLEX_EPS: f64 = 1e-9;

/// Reference LP optimum of `min q'v, Av <= b, 0 <= v <= 1` by a
/// self-contained primal simplex with Bland's rule.
///
/// The tableau carries a slack per row of A and a complement per upper
/// bound; the all-slack basis is feasible because `b >= 0`. Bland's rule
/// guarantees termination despite the degenerate zero rows of `b`.
/// Guarded to `N <= 48`.
pub fn exact_lp(dsys: &DenseSystem) -> Result<LpSolution, OracleError> {
    let n = dsys.cols();
    let m = dsys.rows();
    if n > SIMPLEX_DIM_LIMIT {
        return Err(OracleError::TooLarge { what: "LP dimension", size: n, limit: SIMPLEX_DIM_LIMIT });
    }
    let rows = m + n;
    let cols = n + m + n; // v, slacks, bound complements
    let rhs_col = cols;

    let mut tab = vec![vec![0.0f64; cols + 1]; rows];
    for (j, row) in dsys.a.iter().enumerate() {
        tab[j][..n].copy_from_slice(row);
        tab[j][n + j] = 1.0;
        tab[j][rhs_col] = dsys.b[j];
    }
    for i in 0..n {
        tab[m + i][i] = 1.0;
        tab[m + i][n + m + i] = 1.0;
        tab[m + i][rhs_col] = 1.0;
    }
    let cost = |var: usize| -> f64 { if var < n { dsys.q[var] } else { 0.0 } };
    let mut basis: Vec<usize> = (n..n + m).chain(n + m..n + m + n).collect();

    for _pivot in 0..SIMPLEX_PIVOT_LIMIT {
        // Reduced costs from scratch (small tableaus; clarity over speed).
        let mut entering = None;
        for var in 0..cols {
            if basis.contains(&var) {
                continue;
            }
            let mut reduced = cost(var);
            for (r, &bv) in basis.iter().enumerate() {
                reduced -= cost(bv) * tab[r][var];
            }
            if reduced < -SIMPLEX_EPS {
                entering = Some(var); // Bland: smallest eligible index
                break;
            }
        }
        let Some(enter) = entering else {
            // Optimal: read the solution off the basis.
            let mut v = vec![0.0f64; n];
            for (r, &bv) in basis.iter().enumerate() {
                if bv < n {
                    v[bv] = tab[r][rhs_col];
                }
            }
            let objective = dsys.q.iter().zip(&v).map(|(q, x)| q * x).sum();
            return Ok(LpSolution { v, objective });
        };

        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..rows {
            if tab[r][enter] > SIMPLEX_EPS {
                let ratio = tab[r][rhs_col] / tab[r][enter];
                let better = ratio < best_ratio - SIMPLEX_EPS
                    || (ratio < best_ratio + SIMPLEX_EPS
                        && leave.is_none_or(|l| basis[r] < basis[l]));
                if better {
                    best_ratio = ratio.min(best_ratio);
                    leave = Some(r);
                }
            }
        }
        let Some(leave) = leave else {
            // Cannot happen: the feasible region is a box intersection,
            // hence bounded.
            return Err(OracleError::SimplexStalled { pivots: _pivot });
        };

        let pivot_value = tab[leave][enter];
        for value in tab[leave].iter_mut() {
            *value /= pivot_value;
        }
        for r in 0..rows {
            if r != leave && tab[r][enter].abs() > 0.0 {
                let factor = tab[r][enter];
                let pivot_row = tab[leave].clone();
                for (value, p) in tab[r].iter_mut().zip(&pivot_row) {
                    *value -= factor * p;
                }
            }
        }
        basis[leave] = enter;
    }
    Err(OracleError::SimplexStalled { pivots: SIMPLEX_PIVOT_LIMIT })
}

// ---------------------------------------------------------------------------
// Exact bitwise-MAP marginals
// ---------------------------------------------------------------------------

const MARGINAL_LIMIT: usize = 16;

/// Exact per-bit posteriors `P(x_i = 1 | received)` by enumerating the
/// codewords under the memoryless channel: the posterior weight of a
/// codeword `x` is proportional to `exp(-llr . x)`. Guarded to `n <= 16`.
pub fn marginalize_map(h: &ParityCheckMatrix, llrs: &[f64]) -> Result<Vec<f64>, OracleError> {
    assert_eq!(llrs.len(), h.n(), "LLR length must equal n");
    if h.n() > MARGINAL_LIMIT {
        return Err(OracleError::TooLarge { what: "code length", size: h.n(), limit: MARGINAL_LIMIT });
    }
    let codewords = enumerate_codewords(h)?;
    let log_weights: Vec<f64> = codewords
        .iter()
        .map(|x| {
            -llrs
                .iter()
                .enumerate()
                .filter(|(i, _)| x.bit(*i) == 1)
                .map(|(_, &g)| g)
                .sum::<f64>()
        })
        .collect();
    let max_lw = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_weights.iter().map(|lw| (lw - max_lw).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut posteriors = vec![0.0f64; h.n()];
    for (x, &weight) in codewords.iter().zip(&weights) {
        for i in 0..h.n() {
            if x.bit(i) == 1 {
                posteriors[i] += weight;
            }
        }
    }
    for p in posteriors.iter_mut() {
        *p /= total;
    }
    Ok(posteriors)
}

// ---------------------------------------------------------------------------
// Instrumented sparse iteration (complexity measurement)
// ---------------------------------------------------------------------------

/// Additions and multiplications performed by one iteration's update
/// steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCount {
    pub adds: u64,
    pub mults: u64,
}

/// One full sparse iteration that counts every floating-point addition
/// and multiplication of the three update steps while producing exactly
/// the same iterates as the plain path (tests assert the trajectories
/// match). Counts cover the variable updates only, not the termination
/// tests; the division constants `q_i/(mu e_i)` and `1/e_i` are hoisted
/// per decode, so the per-iteration multiplications are exactly the `N`
/// coordinate scalings when `alpha = 1`.
pub fn counted_sparse_iteration(
    sys: &ConstraintSystem,
    state: &mut DecoderState,
    cfg: &DecoderConfig,
) -> OpCount {
    let mut ops = OpCount::default();
    let n_ext = sys.extended_dim();
    let b = sys.rhs();
    let inv_e = sys.inv_column_norms();
    let scaled = crate::admm::scaled_costs(sys, cfg.mu);

    // v-step: accumulate column products in one sweep over the triples.
    let mut acc = vec![0.0; n_ext];
    for (tau, t) in sys.triples().iter().enumerate() {
        let base = 4 * tau;
        let s0 = b[base] - state.w[base] - state.lambda[base];
        let s1 = b[base + 1] - state.w[base + 1] - state.lambda[base + 1];
        let s2 = b[base + 2] - state.w[base + 2] - state.lambda[base + 2];
        let s3 = b[base + 3] - state.w[base + 3] - state.lambda[base + 3];
        ops.adds += 8;
        let sum01 = s0 + s1;
        let dif01 = s0 - s1;
        let sum23 = s2 + s3;
        let dif23 = s2 - s3;
        ops.adds += 4;
        acc[t.0] += sum01 - sum23;
        acc[t.1] += dif01 + dif23;
        acc[t.2] += dif01 - dif23;
        ops.adds += 6;
    }
    for i in 0..n_ext {
        state.v[i] = (acc[i] * inv_e[i] - scaled[i]).clamp(0.0, 1.0);
        ops.mults += 1;
        ops.adds += 1;
    }

    // w- and dual steps block by block.
    std::mem::swap(&mut state.w, &mut state.w_prev);
    for (tau, t) in sys.triples().iter().enumerate() {
        let (va, vb, vc) = (state.v[t.0], state.v[t.1], state.v[t.2]);
        let av_block = [va + vb + vc, va - vb - vc, vb - va - vc, vc - va - vb];
        ops.adds += 8;
        let base = 4 * tau;
        for (r, &av_j) in av_block.iter().enumerate() {
            let j = base + r;
            let h = if cfg.alpha == 1.0 {
                av_j
            } else {
                ops.mults += 2;
                ops.adds += 2;
                cfg.alpha * av_j - (1.0 - cfg.alpha) * (state.w_prev[j] - b[j])
            };
            let wj = (b[j] - h - state.lambda[j]).max(0.0);
            state.w[j] = wj;
            ops.adds += 2;
            state.lambda[j] += h + wj - b[j];
            ops.adds += 3;
        }
    }
    state.k += 1;
    ops
}

// ---------------------------------------------------------------------------
// 1-D golden-section minimizer (separability checks)
// ---------------------------------------------------------------------------

/// Golden-section minimizer of a unimodal function over [0, 1], to about
/// 1e-9 bracket width.
pub fn argmin_unit_interval(f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-9 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admm::{decode, init_state, iterate, DecoderConfig};
    use crate::code::{random_regular_code, ParityCheckMatrix};
    use crate::polytope::build_system;

    fn single_check() -> ParityCheckMatrix {
        ParityCheckMatrix::from_rows(3, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn p3_examples() {
        assert!(p3_membership(1.0, 1.0, 0.0));
        assert!(!p3_membership(1.0, 0.0, 0.0)); // x1 - x2 - x3 = 1 > 0
        assert!(p3_membership(0.5, 0.5, 0.5));
        assert!(!p3_membership(1.0, 1.0, 1.0)); // sum 3 > 2
    }

    #[test]
    fn p3_binary_membership_is_even_parity() {
        for mask in 0u8..8 {
            let bit = |k: u8| f64::from((mask >> k) & 1);
            let member = p3_membership(bit(0), bit(1), bit(2));
            let even = mask.count_ones() % 2 == 0;
            assert_eq!(member, even, "triple {mask:03b}");
        }
    }

    #[test]
    fn nullspace_of_single_check() {
        let h = single_check();
        let words = enumerate_codewords(&h).unwrap();
        assert_eq!(words.len(), 4);
        for x in &words {
            assert!(h.is_codeword(x));
        }
    }

    #[test]
    fn codeword_enumeration_matches_syndrome_exhaustively() {
        let h = random_regular_code(12, 3, 6, 21).unwrap();
        let words = enumerate_codewords(&h).unwrap();
        let mut by_enumeration = 0usize;
        for mask in 0u32..(1 << 12) {
            let bits: Vec<u8> = (0..12).map(|i| ((mask >> i) & 1) as u8).collect();
            let x = BitVector::from_bits(bits).unwrap();
            let is_cw = h.is_codeword(&x);
            assert_eq!(is_cw, h.syndrome(&x).weight() == 0);
            if is_cw {
                by_enumeration += 1;
                assert!(words.contains(&x));
            }
        }
        assert_eq!(by_enumeration, words.len());
    }

    #[test]
    fn ml_single_check_example() {
        let sol = brute_force_ml(&single_check(), &[-2.0, -3.0, 1.0]).unwrap();
        assert_eq!(sol.bits.to_bit_string(), "110");
        assert_eq!(sol.objective, -5.0);
        assert_eq!(sol.ties.len(), 1);
    }

    #[test]
    fn ml_positive_costs_pick_zero_word() {
        let h = random_regular_code(12, 3, 4, 5).unwrap();
        let llrs: Vec<f64> = (0..12).map(|i| 0.5 + (i as f64) * 0.1).collect();
        let sol = brute_force_ml(&h, &llrs).unwrap();
        assert_eq!(sol.bits.weight(), 0);
        assert_eq!(sol.objective, 0.0);
        assert!(h.is_codeword(&sol.bits));
    }

    #[test]
    fn ml_reports_ties() {
        // Symmetric costs: 110 and 011 tie at -2.
        let sol = brute_force_ml(&single_check(), &[-1.0, -1.0, -1.0]).unwrap();
        assert_eq!(sol.objective, -2.0);
        assert_eq!(sol.ties.len(), 3); // 011, 101, 110
        assert_eq!(sol.bits.to_bit_string(), "011");
    }

    #[test]
    fn dense_and_sparse_steps_walk_identical_trajectories() {
        let sys = build_system(&single_check(), &[-2.0, -3.0, 1.0]);
        let dsys = DenseSystem::from_system(&sys);
        let cfg = DecoderConfig { alpha: 1.0, ..DecoderConfig::default() };
        let mut sparse = init_state(&sys);
        let mut dense = init_state(&sys);
        for step in 0..100 {
            iterate(&sys, &mut sparse, &cfg);
            dense_admm_step(&dsys, &mut dense, &cfg);
            for i in 0..sys.extended_dim() {
                assert!(
                    (sparse.v[i] - dense.v[i]).abs() <= 1e-12,
                    "v[{i}] differs at step {step}"
                );
            }
            for j in 0..sys.constraint_dim() {
                assert!((sparse.w[j] - dense.w[j]).abs() <= 1e-12);
                assert!((sparse.lambda[j] - dense.lambda[j]).abs() <= 1e-12);
            }
            assert!(dense.v.iter().all(|&x| (0.0..=1.0).contains(&x)));
            assert!(dense.w.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn simplex_single_triple() {
        let sys = build_system(&single_check(), &[-2.0, -3.0, 1.0]);
        let sol = exact_lp(&DenseSystem::from_system(&sys)).unwrap();
        assert!((sol.objective - (-5.0)).abs() < 1e-9);
        assert!((sol.v[0] - 1.0).abs() < 1e-9);
        assert!((sol.v[1] - 1.0).abs() < 1e-9);
        assert!(sol.v[2].abs() < 1e-9);
    }

    #[test]
    fn simplex_zero_cost() {
        let sys = build_system(&single_check(), &[0.0; 3]);
        let sol = exact_lp(&DenseSystem::from_system(&sys)).unwrap();
        assert!(sol.objective.abs() < 1e-9);
    }

    #[test]
    fn lp_lower_bounds_ml_on_random_instances() {
        let mut seed = 0x1234u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) * 4.0 - 2.0
        };
        for code_seed in 0..8u64 {
            let h = random_regular_code(8, 3, 4, 100 + code_seed).unwrap();
            let llrs: Vec<f64> = (0..8).map(|_| next()).collect();
            let sys = build_system(&h, &llrs);
            let lp = exact_lp(&DenseSystem::from_system(&sys)).unwrap();
            let ml = brute_force_ml(&h, &llrs).unwrap();
            assert!(
                lp.objective <= ml.objective + 1e-9,
                "relaxation must lower-bound ML (seed {code_seed})"
            );
        }
    }

    // A fractional LP optimum strictly below the ML objective exists once
    // the Tanner graph has cycles; this frozen instance exhibits one.
    #[test]
    fn fractional_optimum_instance_exists() {
        let mut found = None;
        let mut seed = 0xABCDEFu64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) * 4.0 - 2.0
        };
        'search: for code_seed in 0..40u64 {
            let h = random_regular_code(10, 3, 5, 300 + code_seed).unwrap();
            for _ in 0..40 {
                let llrs: Vec<f64> = (0..10).map(|_| next()).collect();
                let sys = build_system(&h, &llrs);
                let lp = exact_lp(&DenseSystem::from_system(&sys)).unwrap();
                let ml = brute_force_ml(&h, &llrs).unwrap();
                if lp.objective < ml.objective - 1e-6 {
                    found = Some((lp, ml));
                    break 'search;
                }
            }
        }
        let (lp, ml) = found.expect("no fractional instance found in the search budget");
        assert!(lp.objective < ml.objective - 1e-6);
        assert!(
            lp.v.iter().any(|&x| x > 1e-6 && x < 1.0 - 1e-6),
            "optimum should be fractional"
        );
    }

    #[test]
    fn marginals_noiseless_and_symmetric() {
        let h = single_check();
        let strong = marginalize_map(&h, &[8.0, 8.0, 8.0]).unwrap();
        assert!(strong.iter().all(|&p| p < 1e-3));
        let symmetric = marginalize_map(&h, &[0.0, 0.0, 0.0]).unwrap();
        for &p in &symmetric {
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn counted_iteration_matches_plain_path() {
        let h = random_regular_code(24, 3, 6, 31).unwrap();
        let llrs: Vec<f64> = (0..24).map(|i| ((i * 29 % 13) as f64 - 6.0) / 4.0).collect();
        let sys = build_system(&h, &llrs);
        let cfg = DecoderConfig { alpha: 1.0, ..DecoderConfig::default() };
        let mut plain = init_state(&sys);
        let mut counted = init_state(&sys);
        let mut ops = OpCount::default();
        for _ in 0..20 {
            iterate(&sys, &mut plain, &cfg);
            ops = counted_sparse_iteration(&sys, &mut counted, &cfg);
            assert_eq!(plain.v, counted.v);
            assert_eq!(plain.w, counted.w);
            assert_eq!(plain.lambda, counted.lambda);
        }
        // Only the N coordinate scalings multiply at alpha = 1.
        assert_eq!(ops.mults, sys.extended_dim() as u64);
        assert!(ops.adds > 0);
    }

    #[test]
    fn golden_section_agrees_with_closed_form_coordinate_update() {
        let sys = build_system(&single_check(), &[-1.5, 0.7, 2.2]);
        let dsys = DenseSystem::from_system(&sys);
        let cfg = DecoderConfig { mu: 0.8, alpha: 1.0, ..DecoderConfig::default() };
        let mut state = init_state(&sys);
        state.w = vec![0.3, 0.1, 0.0, 0.4];
        state.lambda = vec![-0.2, 0.5, 0.1, 0.0];
        let mut closed = state.clone();
        crate::admm::v_update(&sys, &mut closed, &cfg);
        for i in 0..3 {
            // Scalar objective of coordinate i given the others fixed:
            // 0.5 mu e_i t^2 + (q_i + mu a_i'(w - b + lambda)) t.
            let linear: f64 = (0..dsys.rows())
                .map(|j| dsys.a[j][i] * (state.w[j] - dsys.b[j] + state.lambda[j]))
                .sum();
            let objective = |t: f64| {
                0.5 * cfg.mu * dsys.e[i] * t * t + (dsys.q[i] + cfg.mu * linear) * t
            };
            let by_search = argmin_unit_interval(objective);
            assert!(
                (by_search - closed.v[i]).abs() < 1e-6,
                "coordinate {i}: search {by_search} vs closed form {}",
                closed.v[i]
            );
        }
    }

    #[test]
    fn decode_with_positive_costs_returns_zero_word_small_codes() {
        // LP optimum with nonnegative costs is the zero codeword.
        let cfg = DecoderConfig { alpha: 1.0, ..DecoderConfig::default() };
        for seed in 0..6u64 {
            let h = random_regular_code(16, 3, 4, 500 + seed).unwrap();
            let llrs: Vec<f64> = (0..16)
                .map(|i| 0.2 + ((i as u64 * 97 + seed * 31) % 23) as f64 / 10.0)
                .collect();
            let sys = build_system(&h, &llrs);
            let result = decode(&sys, &cfg);
            assert_eq!(result.bits.weight(), 0, "seed {seed}");
            let ml = brute_force_ml(&h, &llrs).unwrap();
            assert_eq!(ml.bits.weight(), 0);
        }
    }
}
