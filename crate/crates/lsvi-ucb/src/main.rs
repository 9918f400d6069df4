//! Thin command-line front end over the library: `generate`, `run`,
//! `sweep`, `diagnose`, and `report`.
//!
//! Exit codes: 0 success, 2 config error, 3 environment validation error,
//! 4 numerical/format failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lsvi_ucb::diagnostics::{
    ellipsoid_inequality_check, lambda_step_norm_series, min_eigenvalue_trial_frequency,
    scaled_median_ratio, series_csv, GaussianFeatureSpec,
};
use lsvi_ucb::error::{Error, Result};
use lsvi_ucb::harness::report::{mean_curve, space_summary, sublinearity_from_curve};
use lsvi_ucb::harness::runner::{run_sweep, SweepGrid};
use lsvi_ucb::harness::{
    emit_csv, emit_json, parse_csv, run_experiment, ExperimentConfig,
};
use lsvi_ucb::mdp::generate_synthetic;

#[derive(Parser)]
#[command(
    name = "lsvi-ucb",
    version,
    about = "Optimistic least-squares value iteration benchmark harness"
)]
struct Cli {
    /// Config file: flat `dotted.key = value` lines.
    #[arg(long, global = true, value_name = "path")]
    config: Option<PathBuf>,
    /// Override one config key (repeatable), applied after the file.
    #[arg(long = "set", global = true, value_name = "dotted.key=value")]
    set: Vec<String>,
    /// Output directory (default: the config's out.dir, else the cwd).
    #[arg(long, global = true, value_name = "dir")]
    out: Option<PathBuf>,
    /// Seeds, comma-separated (shorthand for --set run.seeds=...).
    #[arg(long, global = true, value_delimiter = ',', value_name = "list")]
    seeds: Option<Vec<u64>>,
    /// Agent variant (shorthand for --set hp.variant=...).
    #[arg(long, global = true, value_name = "baseline|fixed|adaptive")]
    variant: Option<String>,
    /// Suppress progress and summary output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the configured synthetic MDP and write its serialization.
    Generate {
        /// Instance seed (default: env.seed, else the first run seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one experiment: every configured seed, one CSV + JSON.
    Run,
    /// Run the hyperparameter grid for the configured variant.
    Sweep,
    /// Run the convergence diagnostics and emit their series.
    Diagnose(DiagnoseArgs),
    /// Summarize previously emitted CSV metrics.
    Report {
        /// Metrics CSV files.
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Feature dimension for the Gaussian-draw series.
    #[arg(long, default_value_t = 8)]
    dim: usize,
    /// Sample count for the Gram-inverse step-norm series.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Sample count per minimum-eigenvalue trial.
    #[arg(long, default_value_t = 512)]
    eig_samples: usize,
    /// Trials in the minimum-eigenvalue ensemble.
    #[arg(long, default_value_t = 100)]
    eig_trials: u64,
    /// Trials in the ellipsoid-inequality check.
    #[arg(long, default_value_t = 10_000)]
    ellipsoid_trials: u64,
    /// Dimension for the ellipsoid-inequality check.
    #[arg(long, default_value_t = 6)]
    ellipsoid_dim: usize,
    /// Root seed for all diagnostic streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_text(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    for assignment in &cli.set {
        cfg.apply_set(assignment)?;
    }
    if let Some(seeds) = &cli.seeds {
        if seeds.is_empty() {
            return Err(Error::Config("--seeds: need at least one seed".into()));
        }
        cfg.seeds = seeds.clone();
    }
    if let Some(variant) = &cli.variant {
        cfg.variant = variant.parse()?;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = Some(out.clone());
    }
    cfg.check()?;
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn cmd_generate(cfg: &ExperimentConfig, seed: Option<u64>, quiet: bool) -> Result<()> {
    let pinned = match &cfg.env {
        lsvi_ucb::harness::EnvironmentSource::Synthetic { seed, .. } => *seed,
        _ => None,
    };
    let instance_seed = seed.or(pinned).unwrap_or(cfg.seeds[0]);
    let spec = cfg.synthetic_spec(instance_seed).ok_or_else(|| {
        Error::Config("generate needs a synthetic environment (env.n_states, ...)".into())
    })?;
    let mdp = generate_synthetic(&spec)?;
    let dir = out_dir(cfg);
    ensure_dir(&dir)?;
    let path = dir.join(format!("mdp-s{instance_seed}.bin"));
    std::fs::write(&path, mdp.serialize())?;
    if !quiet {
        println!(
            "wrote {} (|S|={}, |A|={}, d={}, H={}, seed={})",
            path.display(),
            mdp.n_states(),
            mdp.n_actions(),
            mdp.dim(),
            mdp.horizon(),
            instance_seed
        );
    }
    Ok(())
}

fn cmd_run(cfg: &ExperimentConfig, quiet: bool) -> Result<()> {
    let results = run_experiment(cfg)?;
    let dir = out_dir(cfg);
    ensure_dir(&dir)?;
    let csv_path = dir.join("runs.csv");
    let json_path = dir.join("runs.json");
    emit_csv(&results, &csv_path)?;
    emit_json(&results, cfg, &json_path)?;
    if !quiet {
        for r in &results {
            let last = r.records.last().expect("K >= 1");
            let space = space_summary(&r.records)?;
            println!(
                "{}: K={}, cum regret {:.6}, {}",
                r.run_id, last.episode, last.cum_regret, space
            );
        }
        println!("wrote {} and {}", csv_path.display(), json_path.display());
    }
    Ok(())
}

fn cmd_sweep(cfg: &ExperimentConfig, quiet: bool) -> Result<()> {
    let runs = run_sweep(cfg, &SweepGrid::default())?;
    let all: Vec<_> = runs.iter().flat_map(|sr| sr.results.iter().cloned()).collect();
    let dir = out_dir(cfg);
    ensure_dir(&dir)?;
    let csv_path = dir.join("sweep.csv");
    emit_csv(&all, &csv_path)?;
    if !quiet {
        for sr in &runs {
            let curve = mean_curve(&sr.results)?;
            let final_regret = curve.last().map(|(_, r)| *r).unwrap_or(0.0);
            println!(
                "{}: {} seeds, mean cum regret {:.6}",
                sr.label,
                sr.results.len(),
                final_regret
            );
        }
        println!("wrote {}", csv_path.display());
    }
    Ok(())
}

fn cmd_diagnose(cfg: &ExperimentConfig, args: &DiagnoseArgs, quiet: bool) -> Result<()> {
    let lambda_spec = GaussianFeatureSpec::identity(args.dim, args.samples, args.seed)?;
    let lambda_series = lambda_step_norm_series(&lambda_spec)?;
    let n = args.samples as u64;
    let ratio = scaled_median_ratio(&lambda_series, 2.0, (n / 20, n / 5), (n / 4, n))?;

    let eig_spec = GaussianFeatureSpec::identity(args.dim, args.eig_samples, args.seed)?;
    let passes = min_eigenvalue_trial_frequency(&eig_spec, args.eig_trials)?;

    let ellipsoid =
        ellipsoid_inequality_check(args.ellipsoid_trials, args.ellipsoid_dim, args.seed)?;

    let dir = out_dir(cfg);
    ensure_dir(&dir)?;
    let csv_path = dir.join("diagnostics.csv");
    std::fs::write(&csv_path, series_csv(&[&lambda_series], args.seed)?)?;

    if !quiet {
        println!(
            "lambda step-norm series: n={}, k^2-scaled median late/early ratio = {ratio:.4}",
            args.samples
        );
        println!(
            "min-eigenvalue threshold k*c_min/100 = {:.4}: {passes}/{} trials pass",
            args.eig_samples as f64 * eig_spec.min_covariance_eigenvalue() / 100.0,
            args.eig_trials
        );
        println!("ellipsoid inequality: {ellipsoid}");
        println!("wrote {}", csv_path.display());
    }
    if !ellipsoid.passed() {
        return Err(Error::Numerical(format!(
            "ellipsoid inequality violated in {} of {} trials",
            ellipsoid.violations.len(),
            ellipsoid.trials
        )));
    }
    Ok(())
}

fn cmd_report(paths: &[PathBuf]) -> Result<()> {
    for path in paths {
        let rows = parse_csv(&std::fs::read_to_string(path)?)?;
        println!("{}:", path.display());
        let results = lsvi_ucb::harness::emit::rows_to_results(&rows)?;
        for r in &results {
            println!("  {}: {}", r.run_id, space_summary(&r.records)?);
        }
        // Group runs by variant and report the mean-curve decay when the
        // runs are long enough.
        let mut variants: Vec<_> = results.iter().map(|r| r.variant).collect();
        variants.dedup();
        variants.sort_by_key(|v| v.label());
        variants.dedup();
        for variant in variants {
            let group: Vec<_> =
                results.iter().filter(|r| r.variant == variant).cloned().collect();
            let curve = mean_curve(&group)?;
            match sublinearity_from_curve(&curve) {
                Ok(report) => {
                    println!("  {} mean-curve decay over {} run(s):", variant, group.len());
                    for line in report.to_string().lines() {
                        println!("    {line}");
                    }
                }
                Err(Error::Config(msg)) => {
                    println!("  {variant}: no decay report ({msg})");
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Report { csv } => cmd_report(csv),
        Command::Generate { seed } => {
            let cfg = build_config(cli)?;
            cmd_generate(&cfg, *seed, cli.quiet)
        }
        Command::Run => {
            let cfg = build_config(cli)?;
            cmd_run(&cfg, cli.quiet)
        }
        Command::Sweep => {
            let cfg = build_config(cli)?;
            cmd_sweep(&cfg, cli.quiet)
        }
        Command::Diagnose(args) => {
            let cfg = build_config(cli)?;
            cmd_diagnose(&cfg, args, cli.quiet)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
