//! Sweep the adaptive variant's hyperparameter grid (ρ, m, τ_c, budget
//! exponent, restricted to ρ ≥ exponent) on a small instance.
//!
//! ```sh
//! cargo run --example sweep_grid
//! ```

use lsvi_ucb::error::Result;
use lsvi_ucb::harness::report::mean_curve;
use lsvi_ucb::harness::runner::{run_sweep, SweepGrid};
use lsvi_ucb::harness::ExperimentConfig;

fn main() -> Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.apply_set("env.n_states=12")?;
    cfg.apply_set("env.n_actions=3")?;
    cfg.apply_set("env.dim=4")?;
    cfg.apply_set("env.horizon=6")?;
    cfg.apply_set("env.seed=2")?;
    cfg.apply_set("hp.variant=adaptive")?;
    cfg.apply_set("hp.episodes=150")?;
    cfg.apply_set("hp.beta=1.0")?;
    cfg.apply_set("run.seeds=0,1")?;

    let grid = SweepGrid::default();
    println!(
        "grid: rho {:?} x m {:?} x tau_c {:?} x budget exponent {:?} (rho >= exponent)",
        grid.rho, grid.m, grid.tau_c, grid.budget_exponent
    );
    for sweep_run in run_sweep(&cfg, &grid)? {
        let curve = mean_curve(&sweep_run.results)?;
        let (_, final_regret) = *curve.last().unwrap();
        let learns: u64 = sweep_run
            .results
            .iter()
            .flat_map(|r| r.records.iter())
            .map(|rec| rec.learn_events)
            .sum();
        println!(
            "{}: mean cumulative regret {final_regret:.4}, total learn events {learns}",
            sweep_run.label
        );
    }
    Ok(())
}
