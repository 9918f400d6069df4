//! The three learners: optimistic least-squares value iteration (the
//! baseline), a fixed-interval reset variant, and an adaptive reset variant.
//!
//! All three share one regression/bonus core. Per episode the agent runs a
//! backward pass over steps `h = H..1`; at each learning step it re-solves
//! the ridge regression `w_h = Λ_h⁻¹ Σ_{i∈I_h} φᵢ(rᵢ + qᵢ)` over its retained
//! episodes, where the bootstrap targets `qᵢ = max_a Q_{h+1}(s_{h+1,i}, a)`
//! come from the step-`h+1` snapshot as it stands within the same pass, and
//! `Q_h(s,a) = min(w_hᵀφ + β‖φ‖_{Λ_h⁻¹}, H)`. It then acts greedily for `H`
//! steps and absorbs the new transition into its memory.
//!
//! The variants differ only in which episodes learn and when memory is
//! discarded:
//!
//! - **baseline** learns and retains every episode;
//! - **fixed** learns during phases of `⌊K^ρ⌋` episodes and deletes its
//!   workspace on the phase-boundary episode (acting with the stale snapshot
//!   that episode, learning from empty memory the next);
//! - **adaptive** additionally rate-limits learning: per step it keeps a
//!   full-history Gram inverse `L_h⁻¹` (rank-one updated every episode, never
//!   rebuilt) plus a ring of its last `m+1` values, learns only while
//!   `learn_its < budget` and `tot_its < ⌊K^ρ⌋` and the window's maximum
//!   pairwise Frobenius deviation reaches `τ`, and resets that step's
//!   workspace when either counter saturates.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::harness::EpisodeRecord;
use crate::harness::space::space_account;
use crate::linalg::{dot, ellipsoid_bonus, frobenius_distance, DenseMatrix, GramInverse};
use crate::mdp::LinearMDP;
use crate::oracle::{episode_regret, DeterministicPolicy, ValueTables};
use crate::streams::{stream, StreamId};

/// Which learner to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Baseline,
    Fixed,
    Adaptive,
}

impl Variant {
    /// Stable lowercase label used in records, CSV, and run ids.
    pub fn label(self) -> &'static str {
        match self {
            Variant::Baseline => "baseline",
            Variant::Fixed => "fixed",
            Variant::Adaptive => "adaptive",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Variant::Baseline),
            "fixed" => Ok(Variant::Fixed),
            "adaptive" => Ok(Variant::Adaptive),
            other => Err(Error::Config(format!(
                "unknown variant {other:?} (expected baseline, fixed, or adaptive)"
            ))),
        }
    }
}

/// Learner hyperparameters.
///
/// `tau` is in absolute Frobenius units; the harness derives it from the
/// relative constant as `τ = τ_c · d²`. `budget`, `m`, `rho`, and `tau` only
/// affect the variants that read them.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparameters {
    /// Ridge λ > 0.
    pub lambda: f64,
    /// Bonus scale β ≥ 0 (0 disables optimism; useful for ablation).
    pub beta: f64,
    /// Phase exponent ρ ∈ (0, 1]; phases last `⌊K^ρ⌋` episodes.
    pub rho: f64,
    /// Lookback window length parameter (ring holds `m+1` matrices).
    pub m: usize,
    /// Learn-condition threshold τ ≥ 0.
    pub tau: f64,
    /// Maximum learning episodes per phase and step (adaptive).
    pub budget: u64,
    /// Episode count K.
    pub episodes: u64,
    pub variant: Variant,
}

impl Hyperparameters {
    /// Checks ranges; called by [`Agent::new`].
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Config(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::Config(format!("beta must be non-negative, got {}", self.beta)));
        }
        if !(self.rho.is_finite() && self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::Config(format!("rho must lie in (0, 1], got {}", self.rho)));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::Config(format!("tau must be non-negative, got {}", self.tau)));
        }
        if self.budget == 0 {
            return Err(Error::Config("budget must be >= 1".into()));
        }
        if self.episodes == 0 {
            return Err(Error::Config("episode count must be >= 1".into()));
        }
        Ok(())
    }

    /// The default bonus scale `β = c·d·H·sqrt(ln(2·d·T/p))` with `c = 1`,
    /// `p = 0.01`, and `T = H·K`.
    pub fn default_bonus_scale(dim: usize, horizon: usize, episodes: u64) -> f64 {
        let d = dim as f64;
        let h = horizon as f64;
        let t = h * episodes as f64;
        d * h * (2.0 * d * t / 0.01).ln().sqrt()
    }
}

/// `⌊base^exponent⌋` with a tiny forward nudge so exactly-representable
/// powers (e.g. `K^1`, perfect squares at `ρ = 0.5`) do not round down.
pub fn floor_power(base: u64, exponent: f64) -> u64 {
    ((base as f64).powf(exponent) + 1e-9).floor() as u64
}

/// One retained episode at one step: the executed feature, its reward, and
/// the next state's feature rows for all actions (flat, action-major).
#[derive(Debug, Clone)]
struct RetainedSample {
    feature: Vec<f64>,
    reward: f64,
    next_rows: Vec<f64>,
}

/// Per-step learner memory.
///
/// `gram` and `weights` are the acting snapshot `(Λ_h⁻¹, w_h)`; `retained`
/// and `samples` are the regression set `I_h` with its stored data;
/// `full_gram` and `window` exist only for the adaptive variant (the
/// full-history `L_h⁻¹` and the ring of its last `m+1` values).
#[derive(Debug, Clone)]
pub struct StepLearnerState {
    gram: GramInverse,
    weights: Vec<f64>,
    retained: Vec<u64>,
    samples: Vec<RetainedSample>,
    learn_its: u64,
    tot_its: u64,
    window: Vec<DenseMatrix>,
    full_gram: Option<GramInverse>,
    /// Set by a reset: the acting snapshot persists, but the next regression
    /// at this step must start again from `(1/λ)·I`.
    needs_reinit: bool,
}

impl StepLearnerState {
    fn new(dim: usize, lambda: f64, adaptive: bool, refresh: u64) -> Result<Self> {
        Ok(StepLearnerState {
            gram: GramInverse::new(dim, lambda)?.with_refresh(refresh),
            weights: vec![0.0; dim],
            retained: Vec::new(),
            samples: Vec::new(),
            learn_its: 0,
            tot_its: 0,
            window: Vec::new(),
            full_gram: if adaptive {
                Some(GramInverse::new(dim, lambda)?.with_refresh(refresh))
            } else {
                None
            },
            needs_reinit: false,
        })
    }

    /// The acting Gram inverse `Λ_h⁻¹`.
    pub fn gram(&self) -> &GramInverse {
        &self.gram
    }

    /// The acting weight vector `w_h`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Episode indices in the retained set `I_h`, in insertion order.
    pub fn retained(&self) -> &[u64] {
        &self.retained
    }

    pub fn learn_its(&self) -> u64 {
        self.learn_its
    }

    pub fn tot_its(&self) -> u64 {
        self.tot_its
    }

    /// The lookback ring of full-history inverses (adaptive; empty otherwise).
    pub fn window(&self) -> &[DenseMatrix] {
        &self.window
    }

    /// The full-history Gram inverse `L_h⁻¹` (adaptive only).
    pub fn full_gram(&self) -> Option<&GramInverse> {
        self.full_gram.as_ref()
    }

    /// Scalar count of this step's retained feature data (executed features
    /// plus next-state rows), for the space meter's from-scratch recount.
    pub fn sample_feature_scalars(&self) -> u64 {
        self.samples
            .iter()
            .map(|s| (s.feature.len() + s.next_rows.len()) as u64)
            .sum()
    }
}

/// What the planning pass did this episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlanSummary {
    /// Number of steps h at which learning occurred.
    pub learn_events: u64,
    /// Number of per-step workspace resets.
    pub resets: u64,
}

/// Read-only view of the acting value function: per step `(w_h, Λ_h⁻¹)`,
/// plus β and the clip level H.
pub struct PolicySnapshot<'a> {
    steps: &'a [StepLearnerState],
    beta: f64,
    clip: f64,
}

impl PolicySnapshot<'_> {
    /// `Q_h` evaluated on an explicit feature vector:
    /// `min(w_hᵀφ + β·‖φ‖_{Λ_h⁻¹}, H)`.
    pub fn q_from_feature(&self, h: usize, phi: &[f64]) -> Result<f64> {
        let st = &self.steps[h];
        let raw = dot(&st.weights, phi) + self.beta * ellipsoid_bonus(phi, &st.gram)?;
        Ok(raw.min(self.clip))
    }

    /// `Q_h(s, a)` on the given MDP's features.
    pub fn q_value(&self, h: usize, s: usize, a: usize, mdp: &LinearMDP) -> Result<f64> {
        if h >= self.steps.len() || s >= mdp.n_states() || a >= mdp.n_actions() {
            return Err(Error::DimensionMismatch(format!(
                "indices (h={h}, s={s}, a={a}) out of range"
            )));
        }
        self.q_from_feature(h, mdp.feature(s, a))
    }

    /// `argmax_a Q_h(s, a)`, ties broken by lowest action index.
    pub fn greedy_action(&self, h: usize, s: usize, mdp: &LinearMDP) -> Result<usize> {
        let mut best = 0;
        let mut best_q = self.q_value(h, s, 0, mdp)?;
        for a in 1..mdp.n_actions() {
            let q = self.q_value(h, s, a, mdp)?;
            if q > best_q {
                best_q = q;
                best = a;
            }
        }
        Ok(best)
    }
}

/// Returns whether the Learn condition fires: the maximum pairwise Frobenius
/// distance over the window is at least `tau`.
///
/// With fewer than two matrices there is no deviation history yet and the
/// agent must bootstrap, so the condition is true.
pub fn learn_condition(window: &[DenseMatrix], tau: f64) -> Result<bool> {
    if window.len() < 2 {
        return Ok(true);
    }
    let mut max_dist: f64 = 0.0;
    for (i, a) in window.iter().enumerate() {
        for b in &window[i + 1..] {
            max_dist = max_dist.max(frobenius_distance(a, b)?);
        }
    }
    Ok(max_dist >= tau)
}

/// Ridge-regression refresh of one step's weights from its retained data:
/// `w = Λ⁻¹(Σφᵢrᵢ + Σφᵢqᵢ)` where `qᵢ` is the caller-supplied bootstrap
/// value for retained episode `i`.
pub fn regression_update(
    state: &mut StepLearnerState,
    next_q_max: &[f64],
    _hp: &Hyperparameters,
) -> Result<()> {
    if next_q_max.len() != state.samples.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} bootstrap targets for {} retained episodes",
            next_q_max.len(),
            state.samples.len()
        )));
    }
    let d = state.gram.dim();
    let mut u = vec![0.0; d];
    let mut z = vec![0.0; d];
    for (sample, &q) in state.samples.iter().zip(next_q_max) {
        for j in 0..d {
            u[j] += sample.feature[j] * sample.reward;
            z[j] += sample.feature[j] * q;
        }
    }
    let rhs: Vec<f64> = u.iter().zip(&z).map(|(a, b)| a + b).collect();
    state.weights = state.gram.inv().mat_vec(&rhs)?;
    Ok(())
}

/// How the episode's initial state is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialStatePick {
    /// The same state every episode.
    Fixed(usize),
    /// Uniform over states, drawn from the episode's own stream.
    UniformRandom,
}

/// One executed step of a rollout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajStep {
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
}

/// One executed episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub episode: u64,
    pub initial_state: usize,
    pub steps: Vec<TrajStep>,
}

/// Result of [`step_episode`]: the metrics row plus the executed trajectory.
#[derive(Debug, Clone)]
pub struct EpisodeOutcome {
    pub record: EpisodeRecord,
    pub trajectory: Trajectory,
}

/// A learner instance over a fixed MDP shape.
#[derive(Debug, Clone)]
pub struct Agent {
    hp: Hyperparameters,
    dim: usize,
    n_actions: usize,
    horizon: usize,
    steps: Vec<StepLearnerState>,
    /// Phase origin K₀ (fixed variant).
    phase_start: u64,
    /// Phase length `⌊K^ρ⌋`, also the adaptive `tot_its` cap.
    phase_len: u64,
    /// Steps marked during planning for retention of this episode's data.
    retain_pending: Vec<bool>,
    gram_refresh: u64,
    // Incrementally maintained logical-space counters (64-bit scalar counts);
    // the harness audits them against a from-scratch recount.
    feature_scalars: u64,
    reward_scalars: u64,
    window_scalars: u64,
}

impl Agent {
    pub fn new(hp: Hyperparameters, dim: usize, n_actions: usize, horizon: usize) -> Result<Self> {
        hp.validate()?;
        if dim == 0 || n_actions == 0 || horizon == 0 {
            return Err(Error::Config("agent needs dim, |A|, H all >= 1".into()));
        }
        let adaptive = hp.variant == Variant::Adaptive;
        let steps = (0..horizon)
            .map(|_| StepLearnerState::new(dim, hp.lambda, adaptive, 0))
            .collect::<Result<Vec<_>>>()?;
        let phase_len = floor_power(hp.episodes, hp.rho).max(1);
        Ok(Agent {
            hp,
            dim,
            n_actions,
            horizon,
            steps,
            phase_start: 0,
            phase_len,
            retain_pending: vec![false; horizon],
            gram_refresh: 0,
            feature_scalars: 0,
            reward_scalars: 0,
            window_scalars: 0,
        })
    }

    /// Enables periodic dense rebuilds of every maintained inverse (stress
    /// mode, off by default). Only valid on a fresh agent.
    pub fn with_gram_refresh(mut self, every: u64) -> Result<Self> {
        if self.steps.iter().any(|st| st.gram.rank_one_count() > 0) {
            return Err(Error::Config("gram refresh must be set before any episode".into()));
        }
        self.gram_refresh = every;
        let adaptive = self.hp.variant == Variant::Adaptive;
        for st in &mut self.steps {
            *st = StepLearnerState::new(self.dim, self.hp.lambda, adaptive, every)?;
        }
        Ok(self)
    }

    pub fn hyperparameters(&self) -> &Hyperparameters {
        &self.hp
    }

    pub fn variant(&self) -> Variant {
        self.hp.variant
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Per-step learner states (read-only).
    pub fn steps(&self) -> &[StepLearnerState] {
        &self.steps
    }

    /// Phase length `⌊K^ρ⌋` (minimum 1).
    pub fn phase_len(&self) -> u64 {
        self.phase_len
    }

    /// Incremental counter: retained feature scalars (executed features plus
    /// next-state rows) across all steps.
    pub fn stored_feature_scalars(&self) -> u64 {
        self.feature_scalars
    }

    /// Incremental counter: retained rewards across all steps.
    pub fn stored_reward_scalars(&self) -> u64 {
        self.reward_scalars
    }

    /// Incremental counter: scalars held by the lookback windows.
    pub fn window_matrix_scalars(&self) -> u64 {
        self.window_scalars
    }

    /// The current acting snapshot.
    pub fn snapshot(&self) -> PolicySnapshot<'_> {
        PolicySnapshot { steps: &self.steps, beta: self.hp.beta, clip: self.horizon as f64 }
    }

    /// Materializes the full greedy policy of the current snapshot over all
    /// states and steps (the policy the oracle scores for exact regret).
    pub fn greedy_policy(&self, mdp: &LinearMDP) -> Result<DeterministicPolicy> {
        let snap = self.snapshot();
        let mut actions = Vec::with_capacity(self.horizon * mdp.n_states());
        for h in 0..self.horizon {
            for s in 0..mdp.n_states() {
                actions.push(snap.greedy_action(h, s, mdp)?);
            }
        }
        DeterministicPolicy::new(mdp.n_states(), self.horizon, actions)
    }

    fn fresh_gram(&self) -> Result<GramInverse> {
        Ok(GramInverse::new(self.dim, self.hp.lambda)?.with_refresh(self.gram_refresh))
    }

    /// Discards one step's workspace: retained data and counters go, the
    /// acting snapshot stays, and the next regression starts from λI.
    fn wipe_step(&mut self, h: usize) {
        let st = &mut self.steps[h];
        self.feature_scalars -= st.sample_feature_scalars();
        self.reward_scalars -= st.samples.len() as u64;
        st.samples.clear();
        st.retained.clear();
        st.learn_its = 0;
        st.tot_its = 0;
        st.needs_reinit = true;
    }

    /// Bootstrap targets `qᵢ = max_a Q_{h+1}(s_{h+1,i}, a)` for every
    /// retained episode at step `h`, from the snapshot as it currently
    /// stands (zero at the horizon boundary).
    fn bootstrap_targets(&self, h: usize) -> Result<Vec<f64>> {
        let samples = &self.steps[h].samples;
        if h + 1 == self.horizon {
            return Ok(vec![0.0; samples.len()]);
        }
        let snap = self.snapshot();
        let d = self.dim;
        let mut targets = Vec::with_capacity(samples.len());
        for sample in samples {
            let mut best = f64::NEG_INFINITY;
            for a in 0..self.n_actions {
                let row = &sample.next_rows[a * d..(a + 1) * d];
                let q = snap.q_from_feature(h + 1, row)?;
                if q > best {
                    best = q;
                }
            }
            targets.push(best);
        }
        Ok(targets)
    }

    /// One learning pass at step `h`: consume a pending reinit if any, then
    /// re-solve the regression against the current step-`h+1` snapshot.
    fn refit_step(&mut self, h: usize) -> Result<()> {
        if self.steps[h].needs_reinit {
            debug_assert!(self.steps[h].samples.is_empty());
            self.steps[h].gram = self.fresh_gram()?;
            self.steps[h].needs_reinit = false;
        }
        let targets = self.bootstrap_targets(h)?;
        let hp = self.hp.clone();
        regression_update(&mut self.steps[h], &targets, &hp)
    }

    /// The variant-specific backward pass for episode `k` (1-based): decides
    /// per step whether to learn, reset, or coast, and marks which steps
    /// retain this episode's data.
    pub fn plan(&mut self, k: u64) -> Result<PlanSummary> {
        if k == 0 || k > self.hp.episodes {
            return Err(Error::Config(format!(
                "episode {k} outside 1..={}",
                self.hp.episodes
            )));
        }
        let mut summary = PlanSummary::default();
        match self.hp.variant {
            Variant::Baseline => {
                for h in (0..self.horizon).rev() {
                    self.refit_step(h)?;
                    self.retain_pending[h] = true;
                    summary.learn_events += 1;
                }
            }
            Variant::Fixed => {
                let into_phase = k - self.phase_start;
                if into_phase < self.phase_len {
                    for h in (0..self.horizon).rev() {
                        self.refit_step(h)?;
                        self.retain_pending[h] = true;
                        summary.learn_events += 1;
                    }
                } else {
                    // Phase boundary: delete the workspace and advance the
                    // phase origin. No learning this episode; the stale
                    // snapshot acts.
                    debug_assert_eq!(into_phase, self.phase_len);
                    self.phase_start += self.phase_len;
                    for h in 0..self.horizon {
                        self.wipe_step(h);
                        summary.resets += 1;
                    }
                }
            }
            Variant::Adaptive => {
                for h in (0..self.horizon).rev() {
                    self.roll_window(h);
                    let st = &mut self.steps[h];
                    if st.learn_its < self.hp.budget && st.tot_its < self.phase_len {
                        st.tot_its += 1;
                        if learn_condition(&st.window, self.hp.tau)? {
                            st.learn_its += 1;
                            self.refit_step(h)?;
                            self.retain_pending[h] = true;
                            summary.learn_events += 1;
                        }
                    } else {
                        self.wipe_step(h);
                        summary.resets += 1;
                    }
                }
            }
        }
        Ok(summary)
    }

    /// Pushes the current full-history inverse `L_{h,k}⁻¹` into the lookback
    /// ring, evicting beyond `m+1` entries.
    fn roll_window(&mut self, h: usize) {
        let d2 = (self.dim * self.dim) as u64;
        let st = &mut self.steps[h];
        let current = st
            .full_gram
            .as_ref()
            .expect("adaptive agent maintains a full-history gram")
            .inv()
            .clone();
        st.window.push(current);
        self.window_scalars += d2;
        while st.window.len() > self.hp.m + 1 {
            st.window.remove(0);
            self.window_scalars -= d2;
        }
    }

    /// Folds one executed episode into memory: the full-history inverses
    /// advance on every episode (adaptive), and steps marked by the plan
    /// retain the episode's data and fold it into their acting Gram.
    pub fn absorb(&mut self, k: u64, trajectory: &Trajectory, mdp: &LinearMDP) -> Result<()> {
        if trajectory.steps.len() != self.horizon {
            return Err(Error::DimensionMismatch(format!(
                "trajectory has {} steps, horizon is {}",
                trajectory.steps.len(),
                self.horizon
            )));
        }
        for h in 0..self.horizon {
            let ts = &trajectory.steps[h];
            let phi = mdp.feature(ts.state, ts.action);
            if let Some(full) = self.steps[h].full_gram.as_mut() {
                full.rank_one_update(phi)?;
            }
            if self.retain_pending[h] {
                self.steps[h].gram.rank_one_update(phi)?;
                let next_rows = mdp.state_features(ts.next_state).to_vec();
                self.feature_scalars += (phi.len() + next_rows.len()) as u64;
                self.reward_scalars += 1;
                let sample =
                    RetainedSample { feature: phi.to_vec(), reward: ts.reward, next_rows };
                self.steps[h].samples.push(sample);
                self.steps[h].retained.push(k);
            }
            self.retain_pending[h] = false;
        }
        Ok(())
    }
}

/// Resolves episode `k`'s initial state: either the configured fixed state
/// (range-checked) or a uniform draw from the episode's own named stream.
pub fn pick_initial_state(
    mdp: &LinearMDP,
    k: u64,
    root_seed: u64,
    init: InitialStatePick,
) -> Result<usize> {
    match init {
        InitialStatePick::Fixed(s) => {
            if s >= mdp.n_states() {
                return Err(Error::Config(format!(
                    "fixed initial state {s} out of range for |S|={}",
                    mdp.n_states()
                )));
            }
            Ok(s)
        }
        InitialStatePick::UniformRandom => {
            let mut rng = stream(root_seed, StreamId::InitialState { episode: k });
            let u: f64 = rng.gen();
            Ok(((u * mdp.n_states() as f64) as usize).min(mdp.n_states() - 1))
        }
    }
}

/// Runs one full episode: plan (variant-specific learning/reset logic),
/// measure logical space, act greedily for `H` steps on the episode's own
/// named streams, score the executed policy exactly against the oracle, and
/// absorb the new data.
///
/// `cum_regret_before` is the running total from previous episodes; the
/// returned record carries the updated total. `process_time_s` is left at
/// zero for the caller to fill in.
pub fn step_episode(
    agent: &mut Agent,
    mdp: &LinearMDP,
    vt: &ValueTables,
    k: u64,
    root_seed: u64,
    init: InitialStatePick,
    cum_regret_before: f64,
) -> Result<EpisodeOutcome> {
    if agent.dim() != mdp.dim()
        || agent.n_actions() != mdp.n_actions()
        || agent.horizon() != mdp.horizon()
    {
        return Err(Error::DimensionMismatch(
            "agent shape does not match the MDP".into(),
        ));
    }
    let summary = agent.plan(k)?;
    let logical_space = space_account(agent).total();

    let policy = agent.greedy_policy(mdp)?;
    let initial_state = pick_initial_state(mdp, k, root_seed, init)?;

    let mut steps = Vec::with_capacity(agent.horizon());
    let mut s = initial_state;
    for h in 0..agent.horizon() {
        let a = policy.action(h, s);
        let reward = mdp.reward(s, a, h)?;
        let mut rng = stream(root_seed, StreamId::Transition { episode: k, step: h as u64 });
        let next = mdp.transition_sample(s, a, h, &mut rng)?;
        steps.push(TrajStep { state: s, action: a, reward, next_state: next });
        s = next;
    }
    let trajectory = Trajectory { episode: k, initial_state, steps };

    let regret = episode_regret(mdp, vt, &policy, initial_state)?;
    agent.absorb(k, &trajectory, mdp)?;

    let record = EpisodeRecord {
        episode: k,
        variant: agent.variant(),
        regret,
        cum_regret: cum_regret_before + regret,
        logical_space,
        process_time_s: 0.0,
        learn_events: summary.learn_events,
        resets: summary.resets,
    };
    Ok(EpisodeOutcome { record, trajectory })
}
