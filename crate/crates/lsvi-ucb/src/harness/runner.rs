//! Seeded experiment execution: one independent job per seed (parallel via
//! a work-stealing pool, outputs identical to sequential execution), plus
//! the hyperparameter grid sweep.

use rayon::prelude::*;

use crate::agents::{pick_initial_state, step_episode, Agent, InitialStatePick, Variant};
use crate::diagnostics::WeightTrace;
use crate::error::{Error, Result};
use crate::harness::config::{EnvironmentSource, ExperimentConfig};
use crate::harness::space::{space_account, space_recount};
use crate::harness::EpisodeRecord;
use crate::mdp::LinearMDP;
use crate::oracle::{episode_regret, optimal_values};

/// Which policy acts: the learner's, or the oracle's greedy policy (a
/// zero-regret replay that exercises the whole measurement pipeline).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyMode {
    Learned,
    OptimalReplay,
}

/// One seed's completed run.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// `{variant}-s{seed}` (sweeps insert the grid-point label).
    pub run_id: String,
    pub seed: u64,
    pub variant: Variant,
    pub records: Vec<EpisodeRecord>,
    /// Per-episode acting weights at the configured step, when requested.
    pub weight_trace: Option<WeightTrace>,
}

/// Cumulative CPU time consumed by the calling thread, in seconds.
pub fn thread_cpu_time() -> f64 {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return 0.0;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

/// Builds or loads the environment for one run seed. Synthetic instances
/// are valid by construction (simplex draws); file-loaded instances are
/// validated and rejected with the full violation report.
pub fn load_environment(cfg: &ExperimentConfig, run_seed: u64) -> Result<LinearMDP> {
    match &cfg.env {
        EnvironmentSource::Synthetic { .. } => {
            let spec = cfg.synthetic_spec(run_seed).expect("synthetic env has a spec");
            crate::mdp::generate_synthetic(&spec)
        }
        EnvironmentSource::File(path) => {
            let bytes = std::fs::read(path)?;
            let mdp = LinearMDP::deserialize(&bytes)?;
            let report = mdp.validate();
            if !report.is_valid() {
                return Err(Error::Validation(format!(
                    "environment file {} failed validation: {report}",
                    path.display()
                )));
            }
            Ok(mdp)
        }
    }
}

fn audit_space(agent: &Agent, k: u64) -> Result<()> {
    let incremental = space_account(agent);
    let recount = space_recount(agent);
    if incremental != recount {
        return Err(Error::Numerical(format!(
            "space meter audit failed at episode {k}: incremental {incremental:?} != recount {recount:?}"
        )));
    }
    Ok(())
}

/// Runs one (config, seed) job to completion. Fully deterministic given the
/// pair, except the `process_time_s` column.
pub fn run_single(cfg: &ExperimentConfig, seed: u64, mode: PolicyMode) -> Result<RunResult> {
    cfg.check()?;
    let t0 = thread_cpu_time();
    let mdp = load_environment(cfg, seed)?;
    if let InitialStatePick::Fixed(s) = cfg.initial_state {
        if s >= mdp.n_states() {
            return Err(Error::Config(format!(
                "run.initial_state {s} out of range for |S|={}",
                mdp.n_states()
            )));
        }
    }
    if cfg.record_snapshots && cfg.snapshot_step >= mdp.horizon() {
        return Err(Error::Config(format!(
            "run.snapshot_step {} out of range for H={}",
            cfg.snapshot_step,
            mdp.horizon()
        )));
    }
    let vt = optimal_values(&mdp)?;
    let hp = cfg.resolve_hyperparameters(mdp.dim(), mdp.horizon())?;
    let mut agent = Agent::new(hp, mdp.dim(), mdp.n_actions(), mdp.horizon())?;
    let optimal_policy = vt.greedy_policy();

    let mut records = Vec::with_capacity(cfg.episodes as usize);
    let mut trace = cfg.record_snapshots.then(|| WeightTrace {
        step: cfg.snapshot_step,
        episodes: Vec::with_capacity(cfg.episodes as usize),
        weights: Vec::with_capacity(cfg.episodes as usize),
    });
    let mut cum = 0.0;
    for k in 1..=cfg.episodes {
        let mut record = match mode {
            PolicyMode::Learned => {
                let out = step_episode(&mut agent, &mdp, &vt, k, seed, cfg.initial_state, cum)?;
                out.record
            }
            PolicyMode::OptimalReplay => {
                let s1 = pick_initial_state(&mdp, k, seed, cfg.initial_state)?;
                let regret = episode_regret(&mdp, &vt, &optimal_policy, s1)?;
                EpisodeRecord {
                    episode: k,
                    variant: cfg.variant,
                    regret,
                    cum_regret: cum + regret,
                    logical_space: space_account(&agent).total(),
                    process_time_s: 0.0,
                    learn_events: 0,
                    resets: 0,
                }
            }
        };
        cum = record.cum_regret;
        if k % 50 == 0 || k == cfg.episodes {
            audit_space(&agent, k)?;
        }
        if let Some(trace) = trace.as_mut() {
            trace.episodes.push(k);
            trace.weights.push(agent.steps()[cfg.snapshot_step].weights().to_vec());
        }
        record.process_time_s = thread_cpu_time() - t0;
        records.push(record);
    }
    Ok(RunResult {
        run_id: format!("{}-s{seed}", cfg.variant.label()),
        seed,
        variant: cfg.variant,
        records,
        weight_trace: trace,
    })
}

/// Runs every configured seed as an independent parallel job, returning
/// results in seed order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    run_experiment_with_mode(cfg, PolicyMode::Learned)
}

/// [`run_experiment`] with an explicit policy mode (the oracle-replay mode
/// is used by tests and the `report` pipeline).
pub fn run_experiment_with_mode(
    cfg: &ExperimentConfig,
    mode: PolicyMode,
) -> Result<Vec<RunResult>> {
    cfg.check()?;
    cfg.seeds
        .par_iter()
        .map(|&seed| run_single(cfg, seed, mode))
        .collect()
}

/// The hyperparameter grid for `sweep`: every combination of the listed
/// values, restricted per variant to the knobs it actually reads, and for
/// the adaptive variant to points with `rho >= budget_exponent` (a phase
/// must be able to spend its learning budget).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub rho: Vec<f64>,
    pub m: Vec<usize>,
    pub tau_c: Vec<f64>,
    pub budget_exponent: Vec<f64>,
}

impl Default for SweepGrid {
    /// The reference grid: ρ ∈ {0.5, 0.75}, m ∈ {10, 50}, τ_c = 0.1,
    /// budget exponent ∈ {0.5, 0.75}.
    fn default() -> Self {
        SweepGrid {
            rho: vec![0.5, 0.75],
            m: vec![10, 50],
            tau_c: vec![0.1],
            budget_exponent: vec![0.5, 0.75],
        }
    }
}

/// One grid point (fields the variant ignores are carried unchanged from
/// the base config).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub rho: f64,
    pub m: usize,
    pub tau_c: f64,
    pub budget_exponent: f64,
}

impl SweepPoint {
    fn label(&self, variant: Variant) -> String {
        match variant {
            Variant::Baseline => "base".into(),
            Variant::Fixed => format!("rho{}", self.rho),
            Variant::Adaptive => format!(
                "rho{}-m{}-tc{}-c{}",
                self.rho, self.m, self.tau_c, self.budget_exponent
            ),
        }
    }
}

/// One grid point's completed runs.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub point: SweepPoint,
    pub label: String,
    pub results: Vec<RunResult>,
}

/// Enumerates the grid for the config's variant and runs every point over
/// every seed. Point order is deterministic (row-major over the grid
/// vectors); seeds run in parallel within each point.
pub fn run_sweep(base: &ExperimentConfig, grid: &SweepGrid) -> Result<Vec<SweepRun>> {
    base.check()?;
    if grid.rho.is_empty()
        || grid.m.is_empty()
        || grid.tau_c.is_empty()
        || grid.budget_exponent.is_empty()
    {
        return Err(Error::Config("sweep grid has an empty dimension".into()));
    }
    let mut points = Vec::new();
    match base.variant {
        Variant::Baseline => points.push(SweepPoint {
            rho: base.rho,
            m: base.m,
            tau_c: base.tau_c,
            budget_exponent: base.budget_exponent,
        }),
        Variant::Fixed => {
            for &rho in &grid.rho {
                points.push(SweepPoint {
                    rho,
                    m: base.m,
                    tau_c: base.tau_c,
                    budget_exponent: base.budget_exponent,
                });
            }
        }
        Variant::Adaptive => {
            for &rho in &grid.rho {
                for &m in &grid.m {
                    for &tau_c in &grid.tau_c {
                        for &c in &grid.budget_exponent {
                            if rho >= c {
                                points.push(SweepPoint { rho, m, tau_c, budget_exponent: c });
                            }
                        }
                    }
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Config(
            "sweep grid is empty after the rho >= budget_exponent restriction".into(),
        ));
    }
    let mut runs = Vec::with_capacity(points.len());
    for point in points {
        let mut cfg = base.clone();
        cfg.rho = point.rho;
        cfg.m = point.m;
        cfg.tau_c = point.tau_c;
        cfg.budget_exponent = point.budget_exponent;
        let label = point.label(base.variant);
        let mut results = run_experiment(&cfg)?;
        for r in &mut results {
            r.run_id = format!("{}-{label}-s{}", base.variant.label(), r.seed);
        }
        runs.push(SweepRun { point, label, results });
    }
    Ok(runs)
}
