//! Experiment configuration: a flat key-value text format with dotted keys
//! (`env.n_states`, `hp.rho`, …), one `key = value` per line, UTF-8.
//!
//! Every key can also be set on the command line (`--set hp.rho=0.5`),
//! applied after the file. The canonical echo — the exact effective
//! configuration — is a sorted key→value map with normalized value
//! rendering, embedded in JSON output so runs are self-describing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::agents::{floor_power, Hyperparameters, InitialStatePick, Variant};
use crate::error::{Error, Result};
use crate::mdp::SyntheticSpec;

/// Where the MDP comes from: generated synthetically or loaded from a file.
///
/// For a synthetic environment, `seed: None` means each run derives the
/// instance from its own run seed (independent instances per seed);
/// `Some(s)` pins one shared instance across all runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvironmentSource {
    Synthetic {
        n_states: usize,
        n_actions: usize,
        dim: usize,
        horizon: usize,
        seed: Option<u64>,
    },
    File(PathBuf),
}

/// The full experiment configuration. `Default` is the desk-scale reference
/// setup: a synthetic |S|=50, |A|=5, d=8, H=10 instance, baseline variant,
/// K=1000, λ=1, β from the default formula, seeds 0..=4, fixed initial
/// state 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub env: EnvironmentSource,
    pub variant: Variant,
    /// Episode count K ≥ 1 (total step count is T = H·K).
    pub episodes: u64,
    pub lambda: f64,
    /// Bonus scale; `None` resolves to the default formula at run time.
    pub beta: Option<f64>,
    pub rho: f64,
    pub m: usize,
    /// Relative learn threshold; the absolute τ is `tau_c · d²`.
    pub tau_c: f64,
    /// Budget = `⌊K^budget_exponent⌋` (adaptive variant).
    pub budget_exponent: f64,
    pub seeds: Vec<u64>,
    pub initial_state: InitialStatePick,
    /// Record per-episode weight vectors at `snapshot_step` for diagnostics.
    pub record_snapshots: bool,
    pub snapshot_step: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            env: EnvironmentSource::Synthetic {
                n_states: 50,
                n_actions: 5,
                dim: 8,
                horizon: 10,
                seed: None,
            },
            variant: Variant::Baseline,
            episodes: 1000,
            lambda: 1.0,
            beta: None,
            rho: 0.75,
            m: 10,
            tau_c: 0.1,
            budget_exponent: 0.5,
            seeds: vec![0, 1, 2, 3, 4],
            initial_state: InitialStatePick::Fixed(0),
            record_snapshots: false,
            snapshot_step: 0,
            out_dir: None,
        }
    }
}

fn parse_u64(key: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got {value:?}")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got {value:?}")))
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let x: f64 = value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got {value:?}")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key}: value must be finite, got {value:?}")));
    }
    Ok(x)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got {value:?}"))),
    }
}

impl ExperimentConfig {
    /// Parses the text format: `key = value` lines, `#` comments, blank
    /// lines ignored. Unknown keys are errors.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got {raw:?}", lineno + 1))
            })?;
            cfg.apply(key.trim(), value.trim())?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    /// Applies one `dotted.key=value` override (the `--set` flag).
    pub fn apply_set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            Error::Config(format!("--set expects dotted.key=value, got {assignment:?}"))
        })?;
        self.apply(key.trim(), value.trim())?;
        self.check()
    }

    fn synthetic_field(&mut self, key: &str) -> Result<&mut usize> {
        match &mut self.env {
            EnvironmentSource::Synthetic { n_states, n_actions, dim, horizon, .. } => {
                Ok(match key {
                    "env.n_states" => n_states,
                    "env.n_actions" => n_actions,
                    "env.dim" => dim,
                    "env.horizon" => horizon,
                    _ => unreachable!(),
                })
            }
            EnvironmentSource::File(_) => Err(Error::Config(format!(
                "{key} conflicts with env.path; pick one environment source"
            ))),
        }
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "env.path" => self.env = EnvironmentSource::File(PathBuf::from(value)),
            "env.n_states" | "env.n_actions" | "env.dim" | "env.horizon" => {
                let parsed = parse_usize(key, value)?;
                *self.synthetic_field(key)? = parsed;
            }
            "env.seed" => match &mut self.env {
                EnvironmentSource::Synthetic { seed, .. } => {
                    *seed = if value == "per-run" {
                        None
                    } else {
                        Some(parse_u64(key, value)?)
                    };
                }
                EnvironmentSource::File(_) => {
                    return Err(Error::Config(
                        "env.seed conflicts with env.path; pick one environment source".into(),
                    ))
                }
            },
            "hp.variant" => self.variant = value.parse()?,
            "hp.episodes" => self.episodes = parse_u64(key, value)?,
            "hp.lambda" => self.lambda = parse_f64(key, value)?,
            "hp.beta" => {
                self.beta = if value == "default" { None } else { Some(parse_f64(key, value)?) };
            }
            "hp.rho" => self.rho = parse_f64(key, value)?,
            "hp.m" => self.m = parse_usize(key, value)?,
            "hp.tau_c" => self.tau_c = parse_f64(key, value)?,
            "hp.budget_exponent" => self.budget_exponent = parse_f64(key, value)?,
            "run.seeds" => {
                let seeds = value
                    .split(',')
                    .map(|s| parse_u64(key, s.trim()))
                    .collect::<Result<Vec<_>>>()?;
                if seeds.is_empty() {
                    return Err(Error::Config("run.seeds: need at least one seed".into()));
                }
                self.seeds = seeds;
            }
            "run.initial_state" => {
                self.initial_state = if value == "uniform" {
                    InitialStatePick::UniformRandom
                } else {
                    InitialStatePick::Fixed(parse_usize(key, value)?)
                };
            }
            "run.record_snapshots" => self.record_snapshots = parse_bool(key, value)?,
            "run.snapshot_step" => self.snapshot_step = parse_usize(key, value)?,
            "out.dir" => self.out_dir = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Structural validation (ranges that do not need the MDP).
    pub fn check(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::Config("hp.episodes must be >= 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("run.seeds: need at least one seed".into()));
        }
        if let EnvironmentSource::Synthetic { n_states, n_actions, dim, horizon, .. } = &self.env {
            if *n_states == 0 || *n_actions == 0 || *dim == 0 || *horizon == 0 {
                return Err(Error::Config("env sizes must all be >= 1".into()));
            }
        }
        if !(self.tau_c.is_finite() && self.tau_c >= 0.0) {
            return Err(Error::Config(format!(
                "hp.tau_c must be non-negative, got {}",
                self.tau_c
            )));
        }
        if !(self.budget_exponent.is_finite() && self.budget_exponent > 0.0) {
            return Err(Error::Config(format!(
                "hp.budget_exponent must be positive, got {}",
                self.budget_exponent
            )));
        }
        Ok(())
    }

    /// Total step count T = H·K (0 when the horizon comes from a file and is
    /// not yet known; use the loaded MDP's horizon then).
    pub fn total_steps(&self) -> u64 {
        match &self.env {
            EnvironmentSource::Synthetic { horizon, .. } => *horizon as u64 * self.episodes,
            EnvironmentSource::File(_) => 0,
        }
    }

    /// The synthetic instance spec for one run seed, honoring a pinned
    /// `env.seed` when present.
    pub fn synthetic_spec(&self, run_seed: u64) -> Option<SyntheticSpec> {
        match &self.env {
            EnvironmentSource::Synthetic { n_states, n_actions, dim, horizon, seed } => {
                Some(SyntheticSpec {
                    n_states: *n_states,
                    n_actions: *n_actions,
                    dim: *dim,
                    horizon: *horizon,
                    seed: seed.unwrap_or(run_seed),
                })
            }
            EnvironmentSource::File(_) => None,
        }
    }

    /// Resolves the agent hyperparameters against the (loaded) MDP shape:
    /// β defaults to the standard formula, τ = τ_c·d², and the budget is
    /// `⌊K^budget_exponent⌋`.
    pub fn resolve_hyperparameters(&self, dim: usize, horizon: usize) -> Result<Hyperparameters> {
        let beta = self
            .beta
            .unwrap_or_else(|| Hyperparameters::default_bonus_scale(dim, horizon, self.episodes));
        let hp = Hyperparameters {
            lambda: self.lambda,
            beta,
            rho: self.rho,
            m: self.m,
            tau: self.tau_c * (dim * dim) as f64,
            budget: floor_power(self.episodes, self.budget_exponent).max(1),
            episodes: self.episodes,
            variant: self.variant,
        };
        hp.validate()?;
        Ok(hp)
    }

    /// The canonical echo: every effective key in sorted order with
    /// normalized value rendering. Two configs are equivalent iff their
    /// canonical maps are equal.
    pub fn canonical_map(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        match &self.env {
            EnvironmentSource::Synthetic { n_states, n_actions, dim, horizon, seed } => {
                map.insert("env.n_states".into(), n_states.to_string());
                map.insert("env.n_actions".into(), n_actions.to_string());
                map.insert("env.dim".into(), dim.to_string());
                map.insert("env.horizon".into(), horizon.to_string());
                map.insert(
                    "env.seed".into(),
                    seed.map_or_else(|| "per-run".into(), |s| s.to_string()),
                );
            }
            EnvironmentSource::File(path) => {
                map.insert("env.path".into(), path.display().to_string());
            }
        }
        map.insert("hp.variant".into(), self.variant.label().into());
        map.insert("hp.episodes".into(), self.episodes.to_string());
        map.insert("hp.lambda".into(), self.lambda.to_string());
        map.insert(
            "hp.beta".into(),
            self.beta.map_or_else(|| "default".into(), |b| b.to_string()),
        );
        map.insert("hp.rho".into(), self.rho.to_string());
        map.insert("hp.m".into(), self.m.to_string());
        map.insert("hp.tau_c".into(), self.tau_c.to_string());
        map.insert("hp.budget_exponent".into(), self.budget_exponent.to_string());
        map.insert(
            "run.seeds".into(),
            self.seeds.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
        );
        map.insert(
            "run.initial_state".into(),
            match self.initial_state {
                InitialStatePick::Fixed(s) => s.to_string(),
                InitialStatePick::UniformRandom => "uniform".into(),
            },
        );
        map.insert("run.record_snapshots".into(), self.record_snapshots.to_string());
        map.insert("run.snapshot_step".into(), self.snapshot_step.to_string());
        if let Some(dir) = &self.out_dir {
            map.insert("out.dir".into(), dir.display().to_string());
        }
        map
    }

    /// Renders the canonical map back into the text format (a fixpoint of
    /// [`ExperimentConfig::from_text`]).
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.canonical_map() {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_text() {
        let cfg = ExperimentConfig::default();
        let parsed = ExperimentConfig::from_text(&cfg.canonical_text()).unwrap();
        assert_eq!(cfg, parsed);
        assert_eq!(cfg.canonical_map(), parsed.canonical_map());
    }

    #[test]
    fn parses_overrides_comments_and_blank_lines() {
        let text = "\
# reference adaptive setup
hp.variant = adaptive
hp.rho = 0.75

hp.tau_c = 0.1
run.seeds = 7, 8,9
env.n_states = 12
run.initial_state = uniform
";
        let cfg = ExperimentConfig::from_text(text).unwrap();
        assert_eq!(cfg.variant, Variant::Adaptive);
        assert_eq!(cfg.rho, 0.75);
        assert_eq!(cfg.seeds, vec![7, 8, 9]);
        assert_eq!(cfg.initial_state, InitialStatePick::UniformRandom);
        match cfg.env {
            EnvironmentSource::Synthetic { n_states, .. } => assert_eq!(n_states, 12),
            _ => panic!("expected synthetic env"),
        }
    }

    #[test]
    fn rejects_unknown_keys_bad_values_and_source_conflicts() {
        assert!(matches!(
            ExperimentConfig::from_text("nope.key = 1").unwrap_err(),
            Error::Config(_)
        ));
        assert!(matches!(
            ExperimentConfig::from_text("hp.episodes = many").unwrap_err(),
            Error::Config(_)
        ));
        assert!(matches!(
            ExperimentConfig::from_text("hp.episodes = 0").unwrap_err(),
            Error::Config(_)
        ));
        assert!(matches!(
            ExperimentConfig::from_text("env.path = m.bin\nenv.dim = 4").unwrap_err(),
            Error::Config(_)
        ));
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.apply_set("hp.rho").is_err());
        assert!(cfg.apply_set("run.seeds=").is_err());
    }

    #[test]
    fn set_overrides_apply_on_top_of_text() {
        let mut cfg = ExperimentConfig::from_text("hp.rho = 0.5").unwrap();
        cfg.apply_set("hp.rho=0.6").unwrap();
        cfg.apply_set("hp.beta=12.5").unwrap();
        cfg.apply_set("hp.beta=default").unwrap();
        assert_eq!(cfg.rho, 0.6);
        assert_eq!(cfg.beta, None);
    }

    #[test]
    fn resolves_default_beta_tau_and_budget() {
        let mut cfg = ExperimentConfig::default();
        cfg.variant = Variant::Adaptive;
        cfg.episodes = 1000;
        let hp = cfg.resolve_hyperparameters(8, 10).unwrap();
        let want_beta = Hyperparameters::default_bonus_scale(8, 10, 1000);
        assert_eq!(hp.beta, want_beta);
        assert_eq!(hp.tau, 0.1 * 64.0);
        assert_eq!(hp.budget, 31); // ⌊1000^0.5⌋
        cfg.beta = Some(2.0);
        assert_eq!(cfg.resolve_hyperparameters(8, 10).unwrap().beta, 2.0);
    }

    #[test]
    fn canonical_map_is_sorted_and_complete() {
        let cfg = ExperimentConfig::default();
        let map = cfg.canonical_map();
        let keys: Vec<&String> = map.keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(map.len(), 17);
        assert_eq!(map["hp.beta"], "default");
        assert_eq!(map["env.seed"], "per-run");
    }
}
