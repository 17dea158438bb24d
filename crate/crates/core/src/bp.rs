//! Flooding-schedule sum-product decoder, the performance and timing
//! baseline.
//!
//! Messages live in the LLR domain. Each iteration updates every
//! check-to-variable message with the tanh rule,
//!
//! ```text
//! L(c -> v) = 2 atanh( prod_{v' in N(c) \ v} tanh(L(v' -> c) / 2) )
//! ```
//!
//! then refreshes the posteriors and the extrinsic variable-to-check
//! messages. Variable-to-check messages are saturated at +-30 so the
//! atanh never overflows. Decoding stops as soon as the hard decision
//! satisfies every check (when early termination is on) or at the
//! iteration cap.

use crate::admm::{DecodeResult, TerminationStatus};
use crate::code::ParityCheckMatrix;
use serde::{Deserialize, Serialize};

/// Saturation bound on variable-to-check messages.
const MESSAGE_CLAMP: f64 = 30.0;

/// Baseline decoder parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpConfig {
    /// Iteration cap, >= 1.
    pub max_iter: usize,
    /// Stop once the hard decision satisfies all checks.
    pub early_termination: bool,
}

impl Default for BpConfig {
    fn default() -> Self {
        // Same cap as the LP decoder, for comparable timing runs.
        BpConfig { max_iter: 500, early_termination: true }
    }
}

struct Workspace {
    /// Edge messages in variable-major order: edges of variable i occupy
    /// var_edge_start[i]..var_edge_start[i+1], one per neighbouring check.
    var_to_check: Vec<f64>,
    check_to_var: Vec<f64>,
    var_edge_start: Vec<usize>,
    /// For check j, the edge indices of its neighbours in row order.
    check_edges: Vec<Vec<usize>>,
    posteriors: Vec<f64>,
    hard: Vec<u8>,
}

impl Workspace {
    fn new(h: &ParityCheckMatrix) -> Workspace {
        let n = h.n();
        let mut var_edge_start = Vec::with_capacity(n + 1);
        var_edge_start.push(0);
        for i in 0..n {
            var_edge_start.push(var_edge_start[i] + h.col(i).len());
        }
        let num_edges = var_edge_start[n];
        let mut check_edges = Vec::with_capacity(h.m());
        for j in 0..h.m() {
            let edges = h
                .row(j)
                .iter()
                .map(|&i| {
                    let pos = h.col(i).iter().position(|&jj| jj == j).expect("transpose adjacency");
                    var_edge_start[i] + pos
                })
                .collect();
            check_edges.push(edges);
        }
        Workspace {
            var_to_check: vec![0.0; num_edges],
            check_to_var: vec![0.0; num_edges],
            var_edge_start,
            check_edges,
            posteriors: vec![0.0; n],
            hard: vec![0u8; n],
        }
    }
}

fn check_node_update(ws: &mut Workspace, scratch: &mut Vec<f64>) {
    for edges in &ws.check_edges {
        let degree = edges.len();
        scratch.clear();
        scratch.extend(edges.iter().map(|&e| (ws.var_to_check[e] * 0.5).tanh()));
        // Exclusive products via prefix/suffix sweeps.
        let mut suffix = vec![1.0f64; degree + 1];
        for k in (0..degree).rev() {
            suffix[k] = suffix[k + 1] * scratch[k];
        }
        let mut prefix = 1.0f64;
        for k in 0..degree {
            let product = (prefix * suffix[k + 1]).clamp(-(1.0 - 1e-15), 1.0 - 1e-15);
            ws.check_to_var[edges[k]] = 2.0 * product.atanh();
            prefix *= scratch[k];
        }
    }
}

fn variable_node_update(ws: &mut Workspace, llrs: &[f64]) {
    for i in 0..llrs.len() {
        let start = ws.var_edge_start[i];
        let end = ws.var_edge_start[i + 1];
        let mut total = llrs[i];
        for e in start..end {
            total += ws.check_to_var[e];
        }
        ws.posteriors[i] = total;
        ws.hard[i] = if total < 0.0 { 1 } else { 0 };
        for e in start..end {
            ws.var_to_check[e] = (total - ws.check_to_var[e]).clamp(-MESSAGE_CLAMP, MESSAGE_CLAMP);
        }
    }
}

fn run(
    h: &ParityCheckMatrix,
    ws: &mut Workspace,
    llrs: &[f64],
    max_iter: usize,
    early_termination: bool,
) -> (usize, bool) {
    assert_eq!(llrs.len(), h.n(), "LLR length must equal n");
    for i in 0..h.n() {
        let clamped = llrs[i].clamp(-MESSAGE_CLAMP, MESSAGE_CLAMP);
        for e in ws.var_edge_start[i]..ws.var_edge_start[i + 1] {
            ws.var_to_check[e] = clamped;
        }
    }
    let mut scratch = Vec::new();
    let mut iterations = max_iter;
    let mut satisfied = false;
    for iter in 0..max_iter {
        check_node_update(ws, &mut scratch);
        variable_node_update(ws, llrs);
        if early_termination {
            let zero_syndrome = h.rows().iter().all(|row| {
                let mut parity = 0u8;
                for &i in row {
                    parity ^= ws.hard[i];
                }
                parity == 0
            });
            if zero_syndrome {
                iterations = iter + 1;
                satisfied = true;
                break;
            }
        }
    }
    (iterations, satisfied)
}

fn result_from(ws: &Workspace, llrs: &[f64], iterations: usize, satisfied: bool) -> DecodeResult {
    let mut bits = crate::code::BitVector::zeros(llrs.len());
    for (i, &b) in ws.hard.iter().enumerate() {
        bits.set(i, b);
    }
    let objective: f64 = llrs
        .iter()
        .enumerate()
        .filter(|(i, _)| bits.bit(*i) == 1)
        .map(|(_, &g)| g)
        .sum();
    DecodeResult {
        bits,
        integral: true,
        objective,
        iterations,
        status: if satisfied { TerminationStatus::EarlyTerminated } else { TerminationStatus::MaxIter },
        ml_certified: false,
    }
}

/// Reusable decoder that keeps the edge-index workspace across frames.
pub struct BpDecoder {
    h: ParityCheckMatrix,
    ws: Workspace,
}

impl BpDecoder {
    pub fn new(h: ParityCheckMatrix) -> BpDecoder {
        let ws = Workspace::new(&h);
        BpDecoder { h, ws }
    }

    pub fn decode(&mut self, llrs: &[f64], cfg: &BpConfig) -> DecodeResult {
        assert!(cfg.max_iter >= 1, "max_iter must be at least 1");
        let (iterations, satisfied) =
            run(&self.h, &mut self.ws, llrs, cfg.max_iter, cfg.early_termination);
        result_from(&self.ws, llrs, iterations, satisfied)
    }
}

/// Decode one frame with the sum-product baseline. The hard decision
/// comes from the posterior LLR signs (positive means bit 0); `integral`
/// is always true and `ml_certified` always false — BP carries no
/// optimality certificate.
pub fn bp_decode(h: &ParityCheckMatrix, llrs: &[f64], cfg: &BpConfig) -> DecodeResult {
    let mut ws = Workspace::new(h);
    assert!(cfg.max_iter >= 1, "max_iter must be at least 1");
    let (iterations, satisfied) = run(h, &mut ws, llrs, cfg.max_iter, cfg.early_termination);
    result_from(&ws, llrs, iterations, satisfied)
}

/// Posterior LLRs after a fixed number of flooding iterations, with no
/// early stop — on a cycle-free code these converge to the exact bitwise
/// marginals once the iteration count covers the tree diameter.
pub fn bp_posterior_llrs(h: &ParityCheckMatrix, llrs: &[f64], iterations: usize) -> Vec<f64> {
    let mut ws = Workspace::new(h);
    run(h, &mut ws, llrs, iterations.max(1), false);
    ws.posteriors
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ParityCheckMatrix;
    use crate::oracles::marginalize_map;

    fn single_check() -> ParityCheckMatrix {
        ParityCheckMatrix::from_rows(3, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn noiseless_all_zero_converges_in_one_iteration() {
        let h = crate::code::random_regular_code(24, 3, 6, 2).unwrap();
        let result = bp_decode(&h, &[9.0; 24], &BpConfig::default());
        assert_eq!(result.bits.weight(), 0);
        assert_eq!(result.iterations, 1);
        assert_eq!(result.status, TerminationStatus::EarlyTerminated);
        assert!(result.integral);
        assert!(!result.ml_certified);
    }

    #[test]
    fn tanh_rule_flips_weak_contrary_bit() {
        // Two confident zeros pull the third bit to zero: the message into
        // bit 2 is 2 atanh(tanh(2)^2), which dominates its |-0.5| prior.
        let h = single_check();
        let expected_message = 2.0 * (2.0f64.tanh() * 2.0f64.tanh()).atanh();
        let posteriors = bp_posterior_llrs(&h, &[4.0, 4.0, -0.5], 1);
        assert!((posteriors[2] - (-0.5 + expected_message)).abs() < 1e-12);
        assert!(posteriors[2] > 0.0);
        let result = bp_decode(&h, &[4.0, 4.0, -0.5], &BpConfig::default());
        assert_eq!(result.bits.to_bit_string(), "000");
        assert_eq!(result.iterations, 1);
    }

    #[test]
    fn posteriors_match_exact_marginals_on_tree() {
        // Chain of three checks: cycle-free, so flooding BP is exact after
        // the diameter.
        let h = ParityCheckMatrix::from_rows(
            7,
            vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6]],
        )
        .unwrap();
        let llrs = [0.8, -1.3, 0.4, 2.0, -0.7, 0.3, -1.1];
        let posterior_llrs = bp_posterior_llrs(&h, &llrs, 12);
        let exact = marginalize_map(&h, &llrs).unwrap();
        for i in 0..7 {
            let p_one = 1.0 / (1.0 + posterior_llrs[i].exp());
            assert!(
                (p_one - exact[i]).abs() < 1e-6,
                "bit {i}: BP {p_one} vs exact {}",
                exact[i]
            );
        }
    }

    #[test]
    fn negating_inputs_negates_messages() {
        // Needs even check degrees (the all-ones word must be a codeword
        // for global sign symmetry to hold).
        let h = crate::code::random_regular_code(24, 3, 6, 7).unwrap();
        let llrs: Vec<f64> = (0..24).map(|i| (i as f64 * 0.53).sin() * 1.9).collect();
        let negated: Vec<f64> = llrs.iter().map(|x| -x).collect();
        let pos = bp_posterior_llrs(&h, &llrs, 1);
        let neg = bp_posterior_llrs(&h, &negated, 1);
        for i in 0..24 {
            // libm tanh/atanh are odd only to the last ulp.
            let tolerance = 1e-13 * pos[i].abs().max(1.0);
            assert!((pos[i] + neg[i]).abs() <= tolerance, "bit {i}: {} vs {}", pos[i], neg[i]);
        }
    }

    #[test]
    fn deterministic_under_fixed_schedule() {
        let h = crate::code::random_regular_code(24, 3, 6, 13).unwrap();
        let llrs: Vec<f64> = (0..24).map(|i| (i as f64 * 0.91).sin() * 1.7).collect();
        let a = bp_decode(&h, &llrs, &BpConfig::default());
        let b = bp_decode(&h, &llrs, &BpConfig::default());
        assert_eq!(a, b);
    }

    #[test]
    fn saturation_keeps_messages_finite() {
        // Unclamped, tanh(250) rounds to exactly 1 and the atanh blows up.
        let h = single_check();
        let posteriors = bp_posterior_llrs(&h, &[500.0, 500.0, -0.5], 1);
        assert!(posteriors.iter().all(|p| p.is_finite()));
        let result = bp_decode(&h, &[500.0, 500.0, -0.5], &BpConfig::default());
        assert_eq!(result.bits.to_bit_string(), "000");
    }

    #[test]
    fn runs_out_of_iterations_without_convergence() {
        let h = crate::code::random_regular_code(24, 3, 6, 19).unwrap();
        // Tiny contradictory LLRs give BP nothing to work with.
        let llrs: Vec<f64> = (0..24).map(|i| if i % 2 == 0 { 0.01 } else { -0.01 }).collect();
        let cfg = BpConfig { max_iter: 3, early_termination: true };
        let result = bp_decode(&h, &llrs, &cfg);
        assert!(result.iterations <= 3);
    }
}
