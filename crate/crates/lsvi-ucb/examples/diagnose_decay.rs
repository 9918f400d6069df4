//! Run the convergence diagnostics: Gram-inverse step-norm decay, minimum
//! eigenvalue growth, the ellipsoid inequality, and an agent weight trace.
//!
//! ```sh
//! cargo run --example diagnose_decay
//! ```

use lsvi_ucb::diagnostics::{
    ellipsoid_inequality_check, lambda_step_norm_series, min_eigenvalue_series,
    min_eigenvalue_trial_frequency, scaled_median_ratio, weight_step_norm_series,
    GaussianFeatureSpec,
};
use lsvi_ucb::error::Result;
use lsvi_ucb::harness::runner::{run_single, PolicyMode};
use lsvi_ucb::harness::ExperimentConfig;

fn main() -> Result<()> {
    // 1. Consecutive Gram-inverse differences decay like 1/k²: the
    //    k²-scaled medians of an early and a late window should agree to a
    //    modest factor.
    let spec = GaussianFeatureSpec::identity(8, 2000, 0)?;
    let series = lambda_step_norm_series(&spec)?;
    let ratio = scaled_median_ratio(&series, 2.0, (100, 400), (500, 2000))?;
    println!("lambda step norms: k²-scaled median late/early ratio = {ratio:.3}");
    println!(
        "  partial sum over k in [45, 2000] = {:.6}",
        series.partial_sum(45, 2000)
    );

    // 2. λ_min(Σ wwᵀ) grows linearly; the k·c_min/100 threshold holds in
    //    almost every trial.
    let eig_spec = GaussianFeatureSpec::identity(8, 512, 0)?;
    let eig_series = min_eigenvalue_series(&eig_spec)?;
    for (k, v) in eig_series.indices().iter().zip(eig_series.values()) {
        println!("  lambda_min after {k} draws: {v:.4}");
    }
    let passes = min_eigenvalue_trial_frequency(&eig_spec, 100)?;
    println!("min-eigenvalue threshold 512/100: {passes}/100 trials pass");

    // 3. |x'Ax − x'A'x| ≤ ‖x‖²·‖A − A'‖ on random positive-definite pairs.
    let ellipsoid = ellipsoid_inequality_check(2000, 6, 0)?;
    println!("ellipsoid inequality: {ellipsoid}");

    // 4. Weight-step norms from a real agent run (exploratory: agent
    //    features are simplex draws, not Gaussian).
    let mut cfg = ExperimentConfig::default();
    cfg.apply_set("env.n_states=12")?;
    cfg.apply_set("env.n_actions=3")?;
    cfg.apply_set("env.dim=4")?;
    cfg.apply_set("env.horizon=6")?;
    cfg.apply_set("hp.episodes=200")?;
    cfg.apply_set("hp.beta=1.0")?;
    cfg.apply_set("run.record_snapshots=true")?;
    cfg.apply_set("run.snapshot_step=0")?;
    let run = run_single(&cfg, 0, PolicyMode::Learned)?;
    let weight_series = weight_step_norm_series(&run)?;
    let nonzero = weight_series.values().iter().filter(|&&v| v > 0.0).count();
    println!(
        "weight steps at h=0: {} of {} episodes moved the weights (exploratory)",
        nonzero,
        weight_series.len()
    );
    Ok(())
}
