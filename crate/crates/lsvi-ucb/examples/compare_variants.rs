//! Run all three learners on a shared instance and compare cumulative
//! regret, logical space, and reset activity.
//!
//! ```sh
//! cargo run --example compare_variants
//! ```

use lsvi_ucb::error::Result;
use lsvi_ucb::harness::report::{mean_curve, space_summary};
use lsvi_ucb::harness::{run_experiment, ExperimentConfig};

fn main() -> Result<()> {
    for variant in ["baseline", "fixed", "adaptive"] {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_set("env.n_states=20")?;
        cfg.apply_set("env.n_actions=4")?;
        cfg.apply_set("env.dim=6")?;
        cfg.apply_set("env.horizon=8")?;
        cfg.apply_set("env.seed=1")?; // one shared instance across variants
        cfg.apply_set("hp.episodes=300")?;
        cfg.apply_set("hp.beta=1.0")?;
        cfg.apply_set("hp.rho=0.75")?;
        cfg.apply_set("hp.m=10")?;
        cfg.apply_set("hp.tau_c=0.1")?;
        cfg.apply_set("hp.budget_exponent=0.5")?;
        cfg.apply_set("run.seeds=0,1,2")?;
        cfg.apply_set(&format!("hp.variant={variant}"))?;

        let results = run_experiment(&cfg)?;
        let curve = mean_curve(&results)?;
        let (_, final_regret) = *curve.last().unwrap();
        println!("{variant}: mean cumulative regret {final_regret:.4}");
        for r in &results {
            println!("  {} {}", r.run_id, space_summary(&r.records)?);
        }
    }
    Ok(())
}
