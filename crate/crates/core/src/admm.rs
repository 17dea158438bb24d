//! Scaled-dual ADMM iteration for the decomposed LP decoding problem.
//!
//! The slack form of the LP reads `min q'v` subject to `Av + w = b`,
//! `v in [0,1]^N`, `w >= 0`. One iteration performs three steps:
//!
//! 1. v-step: every coordinate is updated independently (the columns of A
//!    are orthogonal, so the quadratic penalty separates) to
//!    `v_i = clamp01( (a_i' (b - w - lambda) - q_i / mu) / e_i )`,
//!    where `a_i` is column `i` of A and `e_i = ||a_i||^2`.
//! 2. w-step: `w_j = max(0, b_j - a_j'v - lambda_j)` with row `a_j'`.
//! 3. dual step: `lambda_j += a_j'v + w_j - b_j`.
//!
//! All products with A reduce to signed additions over the degree-3
//! triples; the only per-iteration multiplications are the `N` coordinate
//! scalings in the v-step (the `q_i / (mu e_i)` constants are hoisted out
//! of the loop).
//!
//! With over-relaxation `alpha in [1, 2)`, the `a_j'v` term in the w- and
//! dual steps is replaced by `alpha a_j'v - (1 - alpha)(w_j - b_j)`;
//! `alpha = 1` recovers the plain iteration. The stopping rule always uses
//! the unrelaxed residual, so a `Converged` status certifies
//! `||Av + w - b||^2 <= xi` and `||w - w_prev||^2 <= xi` regardless of
//! `alpha`. Early termination checks the syndrome of the hard decision
//! once per iteration, before the residual test.

use crate::code::BitVector;
use crate::polytope::ConstraintSystem;
use serde::{Deserialize, Serialize};

/// Hard-decision coordinates within this distance of an integer count as
/// integral (same scale as the default stopping tolerance).
pub const INTEGRALITY_TOLERANCE: f64 = 1e-5;

// ---------------------------------------------------------------------------
// Configuration, state, result
// ---------------------------------------------------------------------------

/// Decoder parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    /// Augmented-Lagrangian penalty, > 0.
    pub mu: f64,
    /// Stopping tolerance on both squared residual norms, > 0.
    pub xi: f64,
    /// Iteration cap, >= 1.
    pub max_iter: usize,
    /// Over-relaxation coefficient in [1, 2); 1 disables it.
    pub alpha: f64,
    /// Check the hard-decision syndrome every iteration and stop early.
    pub early_termination: bool,
    /// Hard-decision cut: bit = 1 iff v > threshold (strict).
    pub hard_decision_threshold: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            mu: 0.6,
            xi: 1e-5,
            max_iter: 500,
            alpha: 1.9,
            early_termination: true,
            hard_decision_threshold: 0.5,
        }
    }
}

impl DecoderConfig {
    /// Panics on out-of-range parameters; call sites that accept user
    /// input should range-check before constructing the config.
    pub fn validate(&self) {
        assert!(self.mu > 0.0, "penalty mu must be positive");
        assert!(self.xi > 0.0, "tolerance xi must be positive");
        assert!(self.max_iter >= 1, "max_iter must be at least 1");
        assert!(
            (1.0..2.0).contains(&self.alpha),
            "over-relaxation alpha must lie in [1, 2)"
        );
        assert!(
            self.hard_decision_threshold > 0.0 && self.hard_decision_threshold < 1.0,
            "hard-decision threshold must lie in (0, 1)"
        );
    }
}

/// Iterates of the decoder. After every v-step each `v_i` lies in [0, 1];
/// after every w-step each `w_j >= 0`. `w_prev` holds the previous slack
/// vector for the dual-change stopping test.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderState {
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub w_prev: Vec<f64>,
    pub lambda: Vec<f64>,
    pub k: usize,
}

/// Why the iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminationStatus {
    /// Both squared residual norms fell below `xi`.
    Converged,
    /// The hard decision satisfied every parity check.
    EarlyTerminated,
    /// The iteration cap was reached.
    MaxIter,
}

/// Decoder output.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Hard decision over the first `n` coordinates.
    pub bits: BitVector,
    /// All original coordinates within [`INTEGRALITY_TOLERANCE`] of {0,1}.
    pub integral: bool,
    /// `q'v` at exit.
    pub objective: f64,
    /// Iterations performed.
    pub iterations: usize,
    pub status: TerminationStatus,
    /// Integral and not stopped by the iteration cap: the hard decision
    /// is certified as the maximum-likelihood codeword.
    pub ml_certified: bool,
}

// ---------------------------------------------------------------------------
// Update steps
// ---------------------------------------------------------------------------

#[inline]
fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Relaxed constraint value substituted for `a_j'v` in the w- and dual
/// steps when `alpha != 1`.
#[inline]
fn relaxed_row_value(av_j: f64, w_prev_j: f64, b_j: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        av_j
    } else {
        alpha * av_j - (1.0 - alpha) * (w_prev_j - b_j)
    }
}

/// Per-coordinate constants `q_i / (mu e_i)` of the v-step.
pub(crate) fn scaled_costs(sys: &ConstraintSystem, mu: f64) -> Vec<f64> {
    sys.cost()
        .iter()
        .zip(sys.inv_column_norms())
        .map(|(&q, &inv_e)| (q / mu) * inv_e)
        .collect()
}

/// The v-step: accumulate the column products `a_i'(b - w - lambda)` in
/// one sequential sweep over the triples (shared block partials, scatter
/// adds in triple order), then scale and project each coordinate.
pub(crate) fn v_step(
    sys: &ConstraintSystem,
    scaled_cost: &[f64],
    w: &[f64],
    lambda: &[f64],
    acc: &mut [f64],
    v: &mut [f64],
) {
    let b = sys.rhs();
    let inv_e = sys.inv_column_norms();
    acc.fill(0.0);
    for (tau, t) in sys.triples().iter().enumerate() {
        let base = 4 * tau;
        let s0 = b[base] - w[base] - lambda[base];
        let s1 = b[base + 1] - w[base + 1] - lambda[base + 1];
        let s2 = b[base + 2] - w[base + 2] - lambda[base + 2];
        let s3 = b[base + 3] - w[base + 3] - lambda[base + 3];
        // Column products of the block share the pairwise partial sums.
        let sum01 = s0 + s1;
        let dif01 = s0 - s1;
        let sum23 = s2 + s3;
        let dif23 = s2 - s3;
        acc[t.0] += sum01 - sum23;
        acc[t.1] += dif01 + dif23;
        acc[t.2] += dif01 - dif23;
    }
    for i in 0..v.len() {
        v[i] = clamp01(acc[i] * inv_e[i] - scaled_cost[i]);
    }
}

/// Fresh iterates: `w`, `lambda` all zero, `k = 0`, and `v` at the
/// uninformative point 0.5 (the first v-step overwrites it from `w` and
/// `lambda` alone, so the choice only affects reporting).
pub fn init_state(sys: &ConstraintSystem) -> DecoderState {
    let m_dim = sys.constraint_dim();
    DecoderState {
        v: vec![0.5; sys.extended_dim()],
        w: vec![0.0; m_dim],
        w_prev: vec![0.0; m_dim],
        lambda: vec![0.0; m_dim],
        k: 0,
    }
}

/// Advance `v` from the current `(w, lambda)`. Every coordinate reads the
/// same step-k data, so the update order is immaterial; the result is
/// clamped to [0, 1] componentwise.
pub fn v_update(sys: &ConstraintSystem, state: &mut DecoderState, cfg: &DecoderConfig) {
    let scaled = scaled_costs(sys, cfg.mu);
    let mut acc = vec![0.0; sys.extended_dim()];
    let mut v = std::mem::take(&mut state.v);
    v_step(sys, &scaled, &state.w, &state.lambda, &mut acc, &mut v);
    state.v = v;
}

/// Advance `w` from the already-updated `v`; the previous slack moves to
/// `w_prev`. Componentwise clamp at zero.
pub fn w_update(sys: &ConstraintSystem, state: &mut DecoderState, cfg: &DecoderConfig) {
    let av = sys.apply_a(&state.v);
    std::mem::swap(&mut state.w, &mut state.w_prev);
    let b = sys.rhs();
    for j in 0..av.len() {
        let h = relaxed_row_value(av[j], state.w_prev[j], b[j], cfg.alpha);
        state.w[j] = (b[j] - h - state.lambda[j]).max(0.0);
    }
}

/// Add the (relaxed) primal residual to the scaled dual variable.
pub fn lambda_update(sys: &ConstraintSystem, state: &mut DecoderState, cfg: &DecoderConfig) {
    let av = sys.apply_a(&state.v);
    let b = sys.rhs();
    for j in 0..av.len() {
        let h = relaxed_row_value(av[j], state.w_prev[j], b[j], cfg.alpha);
        state.lambda[j] += h + state.w[j] - b[j];
    }
}

/// Stop iff both `||Av + w - b||^2` and `||w - w_prev||^2` are at most
/// `xi`. Uses the true (unrelaxed) `Av`.
pub fn stopping_check(sys: &ConstraintSystem, state: &mut DecoderState, cfg: &DecoderConfig) -> bool {
    let av = sys.apply_a(&state.v);
    let b = sys.rhs();
    let mut primal_sq = 0.0;
    let mut dual_sq = 0.0;
    for j in 0..av.len() {
        let r = av[j] + state.w[j] - b[j];
        primal_sq += r * r;
        let dw = state.w[j] - state.w_prev[j];
        dual_sq += dw * dw;
    }
    primal_sq <= cfg.xi && dual_sq <= cfg.xi
}

/// One full iteration through the test-surface steps, bumping `k`.
pub fn iterate(sys: &ConstraintSystem, state: &mut DecoderState, cfg: &DecoderConfig) {
    v_update(sys, state, cfg);
    w_update(sys, state, cfg);
    lambda_update(sys, state, cfg);
    state.k += 1;
}

/// Threshold the first `n` coordinates: bit = 1 iff `v_i > threshold`
/// (strict, so a coordinate exactly at the threshold maps to 0).
pub fn hard_decision(v: &[f64], n: usize, threshold: f64) -> BitVector {
    let mut bits = BitVector::zeros(n);
    for i in 0..n {
        if v[i] > threshold {
            bits.set(i, 1);
        }
    }
    bits
}

fn fill_hard_decision(v: &[f64], n: usize, threshold: f64, bits: &mut [u8]) {
    for i in 0..n {
        bits[i] = if v[i] > threshold { 1 } else { 0 };
    }
}

/// Run the full decoder on the system's current cost vector.
///
/// Iterates the three update steps until the hard decision satisfies all
/// parity checks (when early termination is enabled), both residual norms
/// drop below `xi`, or the iteration cap is reached. Running out of
/// iterations is a status, not an error.
pub fn decode(sys: &ConstraintSystem, cfg: &DecoderConfig) -> DecodeResult {
    cfg.validate();
    let n = sys.n();
    let n_ext = sys.extended_dim();
    let m_dim = sys.constraint_dim();
    let b = sys.rhs();

    let mut v = vec![0.5; n_ext];
    let mut w = vec![0.0; m_dim];
    let mut w_prev = vec![0.0; m_dim];
    let mut lambda = vec![0.0; m_dim];
    let scaled = scaled_costs(sys, cfg.mu);
    let mut acc = vec![0.0; n_ext];
    let mut bits = vec![0u8; n];

    let mut status = TerminationStatus::MaxIter;
    let mut iterations = cfg.max_iter;

    for k in 0..cfg.max_iter {
        v_step(sys, &scaled, &w, &lambda, &mut acc, &mut v);

        // w- and dual steps block by block, accumulating both stopping
        // norms on the fly (row-major, fixed order).
        std::mem::swap(&mut w, &mut w_prev);
        let mut primal_sq = 0.0;
        let mut dual_sq = 0.0;
        for (tau, t) in sys.triples().iter().enumerate() {
            let (va, vb, vc) = (v[t.0], v[t.1], v[t.2]);
            let av_block = [va + vb + vc, va - vb - vc, vb - va - vc, vc - va - vb];
            let base = 4 * tau;
            for (r, &av_j) in av_block.iter().enumerate() {
                let j = base + r;
                let h = relaxed_row_value(av_j, w_prev[j], b[j], cfg.alpha);
                let wj = (b[j] - h - lambda[j]).max(0.0);
                w[j] = wj;
                lambda[j] += h + wj - b[j];
                let residual = av_j + wj - b[j];
                primal_sq += residual * residual;
                let dw = wj - w_prev[j];
                dual_sq += dw * dw;
            }
        }

        if cfg.early_termination {
            fill_hard_decision(&v, n, cfg.hard_decision_threshold, &mut bits);
            if sys.hard_decision_satisfies_checks(&bits) {
                status = TerminationStatus::EarlyTerminated;
                iterations = k + 1;
                break;
            }
        }
        if primal_sq <= cfg.xi && dual_sq <= cfg.xi {
            status = TerminationStatus::Converged;
            iterations = k + 1;
            break;
        }
    }

    let bits = hard_decision(&v, n, cfg.hard_decision_threshold);
    let integral = v[..n]
        .iter()
        .all(|&x| (x - x.round()).abs() <= INTEGRALITY_TOLERANCE);
    let objective: f64 = sys.cost().iter().zip(&v).map(|(q, x)| q * x).sum();
    DecodeResult {
        bits,
        integral,
        objective,
        iterations,
        status,
        ml_certified: integral && status != TerminationStatus::MaxIter,
    }
}

/// Build a system for the given LLRs and decode in one call.
pub fn decode_llrs(
    h: &crate::code::ParityCheckMatrix,
    llrs: &[f64],
    cfg: &DecoderConfig,
) -> DecodeResult {
    let sys = crate::polytope::build_system(h, llrs);
    decode(&sys, cfg)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
