//! Run the baseline learner on a small instance and summarize its regret
//! decay and space growth.
//!
//! ```sh
//! cargo run --example run_baseline
//! ```

use lsvi_ucb::error::Result;
use lsvi_ucb::harness::report::{space_summary, sublinearity_report};
use lsvi_ucb::harness::{run_experiment, ExperimentConfig};

fn main() -> Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.apply_set("env.n_states=20")?;
    cfg.apply_set("env.n_actions=4")?;
    cfg.apply_set("env.dim=6")?;
    cfg.apply_set("env.horizon=8")?;
    cfg.apply_set("hp.episodes=400")?;
    cfg.apply_set("hp.beta=1.0")?; // small bonus so learning shows quickly
    cfg.apply_set("run.seeds=0,1,2")?;

    let results = run_experiment(&cfg)?;
    for r in &results {
        let last = r.records.last().unwrap();
        println!(
            "{}: cumulative regret {:.4} after {} episodes ({:.2}s CPU)",
            r.run_id, last.cum_regret, last.episode, last.process_time_s
        );
        println!("  space: {}", space_summary(&r.records)?);
        let report = sublinearity_report(&r.records)?;
        for line in report.to_string().lines() {
            println!("  {line}");
        }
    }
    Ok(())
}
