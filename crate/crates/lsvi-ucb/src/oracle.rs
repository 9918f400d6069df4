//! Exact dynamic programming on a [`LinearMDP`]: optimal values, exact
//! evaluation of deterministic policies, and per-episode regret.
//!
//! Everything here is ground truth for the learners. Backward induction runs
//! on explicitly materialized transition rows (the φᵀμ products), which at
//! desk scale is cheap and keeps the arithmetic transparent; rows whose sum
//! drifts from 1 by more than 1e-12 (but within the validation tolerance
//! 1e-9) are renormalized so the induction stays exactly stochastic.

use crate::error::{Error, Result};
use crate::mdp::LinearMDP;

/// Optimal state and state-action values, h-major, with the conventional
/// all-zero row `V_{H+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTables {
    n_states: usize,
    n_actions: usize,
    horizon: usize,
    /// `H·|S|·|A|` scalars: `Q*_h(s,a)` at `(h·|S| + s)·|A| + a`.
    q_star: Vec<f64>,
    /// `(H+1)·|S|` scalars: `V*_h(s)` at `h·|S| + s`; the last block is zero.
    v_star: Vec<f64>,
}

impl ValueTables {
    /// `Q*_h(s,a)` (0-based step).
    #[inline]
    pub fn q(&self, h: usize, s: usize, a: usize) -> f64 {
        self.q_star[(h * self.n_states + s) * self.n_actions + a]
    }

    /// `V*_h(s)` (0-based step; `h = H` is the zero boundary row).
    #[inline]
    pub fn v(&self, h: usize, s: usize) -> f64 {
        self.v_star[h * self.n_states + s]
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The greedy policy with respect to `Q*`, ties broken by lowest action
    /// index.
    pub fn greedy_policy(&self) -> DeterministicPolicy {
        let mut actions = Vec::with_capacity(self.horizon * self.n_states);
        for h in 0..self.horizon {
            for s in 0..self.n_states {
                let mut best = 0;
                let mut best_q = self.q(h, s, 0);
                for a in 1..self.n_actions {
                    let q = self.q(h, s, a);
                    if q > best_q {
                        best_q = q;
                        best = a;
                    }
                }
                actions.push(best);
            }
        }
        DeterministicPolicy { n_states: self.n_states, horizon: self.horizon, actions }
    }
}

/// A time-dependent deterministic policy `π(s, h) → a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicPolicy {
    n_states: usize,
    horizon: usize,
    /// `H·|S|` action indices, h-major.
    actions: Vec<usize>,
}

impl DeterministicPolicy {
    /// Builds a policy from an h-major action table.
    pub fn new(n_states: usize, horizon: usize, actions: Vec<usize>) -> Result<Self> {
        if actions.len() != n_states * horizon {
            return Err(Error::DimensionMismatch(format!(
                "policy table needs {}x{} = {} entries, got {}",
                horizon,
                n_states,
                horizon * n_states,
                actions.len()
            )));
        }
        Ok(DeterministicPolicy { n_states, horizon, actions })
    }

    /// Action taken in state `s` at step `h` (0-based).
    #[inline]
    pub fn action(&self, h: usize, s: usize) -> usize {
        self.actions[h * self.n_states + s]
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    fn check_shape(&self, mdp: &LinearMDP) -> Result<()> {
        if self.n_states != mdp.n_states() || self.horizon != mdp.horizon() {
            return Err(Error::DimensionMismatch(format!(
                "policy shaped ({}, {}) does not fit MDP with |S|={}, H={}",
                self.horizon,
                self.n_states,
                mdp.n_states(),
                mdp.horizon()
            )));
        }
        if self.actions.iter().any(|&a| a >= mdp.n_actions()) {
            return Err(Error::Validation(format!(
                "policy uses an action index >= |A| = {}",
                mdp.n_actions()
            )));
        }
        Ok(())
    }
}

/// Materializes the transition row `p(·|s,a,h)`, renormalizing rounding-level
/// drift and rejecting anything past the validation tolerance.
fn transition_row(mdp: &LinearMDP, s: usize, a: usize, h: usize) -> Result<Vec<f64>> {
    let mut p = mdp.transition_probs(s, a, h)?;
    let sum: f64 = p.iter().sum();
    let dev = (sum - 1.0).abs();
    if dev > 1e-9 {
        return Err(Error::Validation(format!(
            "transition row (s={s}, a={a}, h={h}) sums to {sum}, outside 1 ± 1e-9"
        )));
    }
    if dev > 1e-12 {
        for e in &mut p {
            *e /= sum;
        }
    }
    Ok(p)
}

/// Exact optimal values by backward induction over the Bellman equations.
pub fn optimal_values(mdp: &LinearMDP) -> Result<ValueTables> {
    let (n_states, n_actions, horizon) = (mdp.n_states(), mdp.n_actions(), mdp.horizon());
    let mut q_star = vec![0.0; horizon * n_states * n_actions];
    let mut v_star = vec![0.0; (horizon + 1) * n_states];
    for h in (0..horizon).rev() {
        let v_next_start = (h + 1) * n_states;
        for s in 0..n_states {
            let mut best = f64::NEG_INFINITY;
            for a in 0..n_actions {
                let p = transition_row(mdp, s, a, h)?;
                let expect: f64 = p
                    .iter()
                    .zip(&v_star[v_next_start..v_next_start + n_states])
                    .map(|(pi, vi)| pi * vi)
                    .sum();
                let q = mdp.reward(s, a, h)? + expect;
                q_star[(h * n_states + s) * n_actions + a] = q;
                if q > best {
                    best = q;
                }
            }
            v_star[h * n_states + s] = best;
        }
    }
    Ok(ValueTables { n_states, n_actions, horizon, q_star, v_star })
}

/// Exact value table `V^π_h(s)` of a deterministic policy, laid out like
/// `v_star` (with the zero boundary row at `h = H`).
pub fn policy_value(mdp: &LinearMDP, pi: &DeterministicPolicy) -> Result<Vec<f64>> {
    pi.check_shape(mdp)?;
    let (n_states, horizon) = (mdp.n_states(), mdp.horizon());
    let mut v = vec![0.0; (horizon + 1) * n_states];
    for h in (0..horizon).rev() {
        let v_next_start = (h + 1) * n_states;
        for s in 0..n_states {
            let a = pi.action(h, s);
            let p = transition_row(mdp, s, a, h)?;
            let expect: f64 = p
                .iter()
                .zip(&v[v_next_start..v_next_start + n_states])
                .map(|(pi_, vi)| pi_ * vi)
                .sum();
            v[h * n_states + s] = mdp.reward(s, a, h)? + expect;
        }
    }
    Ok(v)
}

/// Exact value table of the uniform-random policy (each action with
/// probability `1/|A|` at every state and step), laid out like `v_star`.
pub fn uniform_policy_value(mdp: &LinearMDP) -> Result<Vec<f64>> {
    let (n_states, n_actions, horizon) = (mdp.n_states(), mdp.n_actions(), mdp.horizon());
    let mut v = vec![0.0; (horizon + 1) * n_states];
    for h in (0..horizon).rev() {
        let v_next_start = (h + 1) * n_states;
        for s in 0..n_states {
            let mut acc = 0.0;
            for a in 0..n_actions {
                let p = transition_row(mdp, s, a, h)?;
                let expect: f64 = p
                    .iter()
                    .zip(&v[v_next_start..v_next_start + n_states])
                    .map(|(pi, vi)| pi * vi)
                    .sum();
                acc += mdp.reward(s, a, h)? + expect;
            }
            v[h * n_states + s] = acc / n_actions as f64;
        }
    }
    Ok(v)
}

/// One regret summand: `V*_1(s1) − V^π_1(s1)`.
///
/// Values in `[−1e-9, 0)` are floating-point noise and clamp to zero; a gap
/// more negative than that means the tables are inconsistent and is an error.
pub fn episode_regret(
    mdp: &LinearMDP,
    vt: &ValueTables,
    pi: &DeterministicPolicy,
    s1: usize,
) -> Result<f64> {
    if s1 >= mdp.n_states() {
        return Err(Error::DimensionMismatch(format!(
            "initial state {s1} out of range for |S|={}",
            mdp.n_states()
        )));
    }
    let v_pi = policy_value(mdp, pi)?;
    let gap = vt.v(0, s1) - v_pi[s1];
    if gap < -1e-9 {
        return Err(Error::Numerical(format!(
            "policy value exceeds optimal value by {:e}",
            -gap
        )));
    }
    Ok(gap.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, DenseMatrix};
    use crate::mdp::{generate_synthetic, SyntheticSpec};
    use crate::streams::{stream, StreamId};
    use rand::Rng;

    fn tiny_spec(seed: u64) -> SyntheticSpec {
        SyntheticSpec { n_states: 3, n_actions: 2, dim: 2, horizon: 3, seed }
    }

    /// Independent row materialization: explicit φ·μ summation, no
    /// renormalization, no shared helper.
    fn brute_row(mdp: &LinearMDP, s: usize, a: usize, h: usize) -> Vec<f64> {
        let phi = mdp.feature(s, a);
        (0..mdp.n_states())
            .map(|sp| (0..mdp.dim()).map(|j| phi[j] * mdp.measure_row(h, j)[sp]).sum())
            .collect()
    }

    /// Exact value of one deterministic policy by standalone backward
    /// induction on brute-force rows.
    fn brute_policy_value(mdp: &LinearMDP, actions: &[usize]) -> Vec<f64> {
        let (n_s, h_n) = (mdp.n_states(), mdp.horizon());
        let mut v = vec![0.0; n_s];
        for h in (0..h_n).rev() {
            let mut v_new = vec![0.0; n_s];
            for s in 0..n_s {
                let a = actions[h * n_s + s];
                let p = brute_row(mdp, s, a, h);
                let expect: f64 = p.iter().zip(&v).map(|(pi, vi)| pi * vi).sum();
                v_new[s] = mdp.reward(s, a, h).unwrap() + expect;
            }
            v = v_new;
        }
        v
    }

    #[test]
    fn one_step_horizon_takes_the_best_reward() {
        let spec = SyntheticSpec { n_states: 4, n_actions: 3, dim: 2, horizon: 1, seed: 5 };
        let mdp = generate_synthetic(&spec).unwrap();
        let vt = optimal_values(&mdp).unwrap();
        for s in 0..4 {
            let want = (0..3)
                .map(|a| mdp.reward(s, a, 0).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((vt.v(0, s) - want).abs() <= 1e-15);
        }
    }

    #[test]
    fn zero_rewards_give_zero_values_and_regret() {
        // Same transitions as a synthetic instance, but θ_h = 0 everywhere.
        let base = generate_synthetic(&tiny_spec(2)).unwrap();
        let mut features = Vec::new();
        for s in 0..3 {
            features.extend_from_slice(base.state_features(s));
        }
        let mut measures = Vec::new();
        for h in 0..3 {
            for j in 0..2 {
                measures.extend_from_slice(base.measure_row(h, j));
            }
        }
        let mdp = LinearMDP::from_tables(3, 2, 2, 3, 2, features, vec![0.0; 6], measures).unwrap();
        let vt = optimal_values(&mdp).unwrap();
        for h in 0..3 {
            for s in 0..3 {
                assert_eq!(vt.v(h, s), 0.0);
            }
        }
        let pi = DeterministicPolicy::new(3, 3, vec![1; 9]).unwrap();
        assert_eq!(episode_regret(&mdp, &vt, &pi, 0).unwrap(), 0.0);
    }

    #[test]
    fn optimal_values_match_policy_enumeration() {
        let mdp = generate_synthetic(&tiny_spec(31)).unwrap();
        let vt = optimal_values(&mdp).unwrap();
        let cells = mdp.n_states() * mdp.horizon();
        let n_policies = (mdp.n_actions() as u64).pow(cells as u32);
        let mut best = vec![f64::NEG_INFINITY; mdp.n_states()];
        for code in 0..n_policies {
            let mut c = code;
            let actions: Vec<usize> = (0..cells)
                .map(|_| {
                    let a = (c % mdp.n_actions() as u64) as usize;
                    c /= mdp.n_actions() as u64;
                    a
                })
                .collect();
            let v = brute_policy_value(&mdp, &actions);
            for (b, vi) in best.iter_mut().zip(&v) {
                if *vi > *b {
                    *b = *vi;
                }
            }
        }
        for s in 0..mdp.n_states() {
            assert!(
                (vt.v(0, s) - best[s]).abs() <= 1e-12,
                "state {s}: dp {} vs enumeration {}",
                vt.v(0, s),
                best[s]
            );
        }
    }

    #[test]
    fn greedy_policy_recovers_optimal_value() {
        let mdp = generate_synthetic(&tiny_spec(8)).unwrap();
        let vt = optimal_values(&mdp).unwrap();
        let v_pi = policy_value(&mdp, &vt.greedy_policy()).unwrap();
        for h in 0..=3 {
            for s in 0..3 {
                let want = if h < 3 { vt.v(h, s) } else { 0.0 };
                assert!((v_pi[h * 3 + s] - want).abs() <= 1e-12);
            }
        }
        let pi = vt.greedy_policy();
        assert_eq!(episode_regret(&mdp, &vt, &pi, 1).unwrap(), 0.0);
    }

    #[test]
    fn one_step_policy_value_is_the_chosen_reward() {
        let spec = SyntheticSpec { n_states: 3, n_actions: 2, dim: 2, horizon: 1, seed: 17 };
        let mdp = generate_synthetic(&spec).unwrap();
        let pi = DeterministicPolicy::new(3, 1, vec![1, 0, 1]).unwrap();
        let v = policy_value(&mdp, &pi).unwrap();
        for s in 0..3 {
            let want = mdp.reward(s, pi.action(0, s), 0).unwrap();
            assert!((v[s] - want).abs() <= 1e-15);
        }
    }

    #[test]
    fn policy_value_matches_monte_carlo_rollouts() {
        let mdp = generate_synthetic(&tiny_spec(12)).unwrap();
        let pi = DeterministicPolicy::new(3, 3, vec![0, 1, 1, 1, 0, 0, 1, 1, 0]).unwrap();
        let exact = policy_value(&mdp, &pi).unwrap()[0];
        let n = 1_000_000u64;
        let mut rng = stream(99, StreamId::Trial { index: 0 });
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let mut s = 0usize;
            let mut ret = 0.0;
            for h in 0..mdp.horizon() {
                let a = pi.action(h, s);
                ret += mdp.reward(s, a, h).unwrap();
                s = mdp.transition_sample(s, a, h, &mut rng).unwrap();
            }
            sum += ret;
            sum_sq += ret * ret;
        }
        let mean = sum / n as f64;
        let var = (sum_sq / n as f64 - mean * mean).max(0.0);
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * se + 1e-9,
            "mc {mean} vs exact {exact}, se {se}"
        );
    }

    #[test]
    fn regret_matches_enumeration_tables() {
        let mdp = generate_synthetic(&tiny_spec(44)).unwrap();
        let vt = optimal_values(&mdp).unwrap();
        let actions = vec![1, 0, 0, 0, 1, 0, 1, 1, 1];
        let pi = DeterministicPolicy::new(3, 3, actions.clone()).unwrap();
        let v_pi = brute_policy_value(&mdp, &actions);
        // Enumerated optimum (same loop as the dedicated enumeration test).
        let mut best = vec![f64::NEG_INFINITY; 3];
        for code in 0..512u64 {
            let mut c = code;
            let acts: Vec<usize> = (0..9)
                .map(|_| {
                    let a = (c % 2) as usize;
                    c /= 2;
                    a
                })
                .collect();
            let v = brute_policy_value(&mdp, &acts);
            for (b, vi) in best.iter_mut().zip(&v) {
                *b = b.max(*vi);
            }
        }
        for s1 in 0..3 {
            let want = best[s1] - v_pi[s1];
            let got = episode_regret(&mdp, &vt, &pi, s1).unwrap();
            assert!((got - want).abs() <= 1e-12, "s1={s1}: {got} vs {want}");
        }
    }

    #[test]
    fn bellman_consistency_and_value_bounds() {
        let spec = SyntheticSpec { n_states: 6, n_actions: 3, dim: 4, horizon: 5, seed: 3 };
        let mdp = generate_synthetic(&spec).unwrap();
        let vt = optimal_values(&mdp).unwrap();
        let tol = 1e-12 * mdp.horizon() as f64;
        for h in 0..mdp.horizon() {
            for s in 0..mdp.n_states() {
                let v = vt.v(h, s);
                assert!(v >= 0.0 && v <= (mdp.horizon() - h) as f64 + 1e-12);
                for a in 0..mdp.n_actions() {
                    let p = brute_row(&mdp, s, a, h);
                    let expect: f64 =
                        (0..mdp.n_states()).map(|sp| p[sp] * vt.v(h + 1, sp)).sum();
                    let resid =
                        (vt.q(h, s, a) - mdp.reward(s, a, h).unwrap() - expect).abs();
                    assert!(resid <= tol, "bellman residual {resid:e} at ({s},{a},{h})");
                }
            }
        }
    }

    #[test]
    fn policy_action_values_are_linear_in_features() {
        // For any deterministic policy on a linear MDP, Q^π_h is exactly
        // linear in φ: regressing it on the features leaves ~0 residual.
        let spec = SyntheticSpec { n_states: 4, n_actions: 3, dim: 3, horizon: 3, seed: 21 };
        let mdp = generate_synthetic(&spec).unwrap();
        let mut rng = stream(5, StreamId::Trial { index: 1 });
        let actions: Vec<usize> =
            (0..12).map(|_| rng.gen_range(0..mdp.n_actions())).collect();
        let pi = DeterministicPolicy::new(4, 3, actions).unwrap();
        let v_pi = policy_value(&mdp, &pi).unwrap();
        for h in 0..mdp.horizon() {
            // Q^π_h(s,a) for all cells, plus the unregularized normal equations.
            let d = mdp.dim();
            let mut gram = DenseMatrix::zeros(d);
            let mut rhs = vec![0.0; d];
            let mut cells = Vec::new();
            for s in 0..mdp.n_states() {
                for a in 0..mdp.n_actions() {
                    let p = brute_row(&mdp, s, a, h);
                    let expect: f64 =
                        (0..mdp.n_states()).map(|sp| p[sp] * v_pi[(h + 1) * 4 + sp]).sum();
                    let q = mdp.reward(s, a, h).unwrap() + expect;
                    let phi = mdp.feature(s, a).to_vec();
                    gram.add_outer(&phi, 1.0).unwrap();
                    for (r, f) in rhs.iter_mut().zip(&phi) {
                        *r += f * q;
                    }
                    cells.push((phi, q));
                }
            }
            let w = gram.inverse().unwrap().mat_vec(&rhs).unwrap();
            for (phi, q) in &cells {
                let resid = (dot(phi, &w) - q).abs();
                assert!(resid <= 1e-8, "h={h}: residual {resid:e}");
            }
        }
    }
}
