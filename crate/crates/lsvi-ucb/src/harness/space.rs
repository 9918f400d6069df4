//! Logical space metering: exact counts of the 64-bit scalars an agent
//! retains, grouped by component.
//!
//! Space is measured logically rather than via OS resident-set size: the
//! scalar count is the machine-independent quantity the variants' space
//! guarantees actually bound, and it is exactly reproducible. Per component:
//! `d²` for every maintained Gram inverse (baseline/fixed: `H` acting
//! inverses; adaptive: `H` acting + `H` full-history + up to `H·(m+1)`
//! window matrices), `d` per weight vector, and per retained episode per
//! step: `d` (the executed feature) + `|A|·d` (next-state feature rows) + 1
//! (the reward).

use crate::agents::Agent;

/// Scalar counts by component. `total()` is their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpaceMeter {
    /// Acting and full-history Gram inverses (`d²` each).
    pub gram_inverses: u64,
    /// Weight vectors (`d` each).
    pub weights: u64,
    /// Retained executed features and next-state feature rows.
    pub stored_features: u64,
    /// Retained rewards (one scalar each).
    pub stored_rewards: u64,
    /// Lookback-window matrices (`d²` each, adaptive only).
    pub window_matrices: u64,
}

impl SpaceMeter {
    pub fn total(&self) -> u64 {
        self.gram_inverses
            + self.weights
            + self.stored_features
            + self.stored_rewards
            + self.window_matrices
    }
}

/// The agent's current space meter, from its incrementally maintained
/// counters plus the fixed structural components.
pub fn space_account(agent: &Agent) -> SpaceMeter {
    let d = agent.dim() as u64;
    let h = agent.horizon() as u64;
    let full_grams: u64 = agent
        .steps()
        .iter()
        .filter(|st| st.full_gram().is_some())
        .count() as u64;
    SpaceMeter {
        gram_inverses: (h + full_grams) * d * d,
        weights: h * d,
        stored_features: agent.stored_feature_scalars(),
        stored_rewards: agent.stored_reward_scalars(),
        window_matrices: agent.window_matrix_scalars(),
    }
}

/// From-scratch recount walking every retained structure. Must equal
/// [`space_account`] exactly at all times; the runner audits this.
pub fn space_recount(agent: &Agent) -> SpaceMeter {
    let d = agent.dim() as u64;
    let mut meter = SpaceMeter::default();
    for st in agent.steps() {
        meter.gram_inverses += d * d;
        if st.full_gram().is_some() {
            meter.gram_inverses += d * d;
        }
        meter.weights += st.weights().len() as u64;
        meter.stored_rewards += st.retained().len() as u64;
        meter.window_matrices += st.window().len() as u64 * d * d;
        meter.stored_features += st.sample_feature_scalars();
    }
    meter
}
