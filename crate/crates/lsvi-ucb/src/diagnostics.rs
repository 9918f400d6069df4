//! Empirical checks of the convergence machinery behind the adaptive
//! variant: decay of consecutive Gram-inverse differences, decay of
//! consecutive weight-vector differences, minimum-eigenvalue growth of
//! Gaussian feature outer-product sums, and the quadratic-form/operator-norm
//! ellipsoid inequality.
//!
//! High-probability statements are tested as seed-ensemble frequencies;
//! unknowable dimensional constants are tested as decay-rate ratios between
//! early and late windows with a fixed slack factor. Everything is seeded
//! and deterministic: single-series operations consume the trial-0 stream of
//! their spec's seed, ensembles use one stream per trial index.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::harness::emit::{csv_string_rows, CsvRow};
use crate::harness::runner::RunResult;
use crate::linalg::{
    cholesky, jacobi_eigenvalues, operator_norm_estimate, DenseMatrix, GramInverse,
};
use crate::streams::{stream, StreamId};

/// Power-iteration depth for operator norms of the (small) difference
/// matrices tracked here.
const OPNORM_ITERATIONS: usize = 80;

/// A feature distribution: i.i.d. `N(0, Σ)` with `Σ ≻ 0`.
#[derive(Debug, Clone)]
pub struct GaussianFeatureSpec {
    dim: usize,
    covariance: DenseMatrix,
    n_samples: usize,
    seed: u64,
    chol: DenseMatrix,
    min_eigenvalue: f64,
}

impl GaussianFeatureSpec {
    /// Validates symmetry (within 1e-12 entrywise) and positive
    /// definiteness (via the full eigendecomposition), and caches the
    /// Cholesky factor used for sampling.
    pub fn new(
        dim: usize,
        covariance: DenseMatrix,
        n_samples: usize,
        seed: u64,
    ) -> Result<Self> {
        if dim == 0 || n_samples == 0 {
            return Err(Error::Config("need dim >= 1 and n_samples >= 1".into()));
        }
        if covariance.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "covariance is {}x{0}, expected {dim}x{dim}",
                covariance.dim()
            )));
        }
        for i in 0..dim {
            for j in 0..i {
                if (covariance.get(i, j) - covariance.get(j, i)).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let eigs = jacobi_eigenvalues(&covariance)?;
        let min_eigenvalue = eigs[0];
        if min_eigenvalue <= 0.0 {
            return Err(Error::Config(format!(
                "covariance must be positive definite; smallest eigenvalue {min_eigenvalue}"
            )));
        }
        let chol = cholesky(&covariance)?;
        Ok(GaussianFeatureSpec { dim, covariance, n_samples, seed, chol, min_eigenvalue })
    }

    /// The standard-Gaussian spec `Σ = I`.
    pub fn identity(dim: usize, n_samples: usize, seed: u64) -> Result<Self> {
        Self::new(dim, DenseMatrix::identity(dim), n_samples, seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn covariance(&self) -> &DenseMatrix {
        &self.covariance
    }

    /// `λ_min(Σ)`, the non-degeneracy constant.
    pub fn min_covariance_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    fn draw(&self, rng: &mut impl Rng) -> Result<Vec<f64>> {
        let z: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
        self.chol.mat_vec(&z)
    }

    /// All `n_samples` feature draws from the given trial's stream.
    pub fn sample_trial(&self, trial: u64) -> Result<Vec<Vec<f64>>> {
        let mut rng = stream(self.seed, StreamId::Trial { index: trial });
        (0..self.n_samples).map(|_| self.draw(&mut rng)).collect()
    }
}

/// A non-negative series indexed by sample count, for decay inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    indices: Vec<u64>,
    values: Vec<f64>,
    label: String,
}

impl DecaySeries {
    pub fn new(indices: Vec<u64>, values: Vec<f64>, label: &str) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} indices vs {} values",
                indices.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::NonFinite(format!(
                "series value {bad} is negative or non-finite"
            )));
        }
        Ok(DecaySeries { indices, values, label: label.to_string() })
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ v_k` over `k ∈ [from, to]` (inclusive, by index value).
    pub fn partial_sum(&self, from: u64, to: u64) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .filter(|(k, _)| **k >= from && **k <= to)
            .map(|(_, v)| v)
            .sum()
    }
}

/// Consecutive Gram-inverse differences under rank-one updates (λ = 1):
/// `v_k = ‖Λ⁻¹_{k−1} − Λ⁻¹_k‖_{2→2}` after folding in the `k`-th draw.
/// This is the general path; callers feed it real or degenerate draws.
pub fn lambda_series_from_draws(
    dim: usize,
    draws: &[Vec<f64>],
    label: &str,
) -> Result<DecaySeries> {
    let mut gram = GramInverse::new(dim, 1.0)?;
    let mut indices = Vec::with_capacity(draws.len());
    let mut values = Vec::with_capacity(draws.len());
    for (i, x) in draws.iter().enumerate() {
        let prev = gram.inv().clone();
        gram.rank_one_update(x)?;
        let diff = prev.sub(gram.inv())?;
        indices.push(i as u64 + 1);
        values.push(operator_norm_estimate(&diff, OPNORM_ITERATIONS));
    }
    DecaySeries::new(indices, values, label)
}

/// The Gram-inverse step-norm series on `n_samples` Gaussian draws.
pub fn lambda_step_norm_series(spec: &GaussianFeatureSpec) -> Result<DecaySeries> {
    let draws = spec.sample_trial(0)?;
    lambda_series_from_draws(spec.dim, &draws, "lambda-step-norm")
}

/// Minimum eigenvalue of `Σ_{i≤k} wᵢwᵢᵀ` at doubling checkpoints
/// `k ∈ {d, 2d, 4d, …}` (plus a final checkpoint at `n` when `n < d`, where
/// the sum is still rank-deficient). Values are clamped at 0: the sum is
/// positive semidefinite, so any negative eigenvalue reading is eigensolver
/// noise.
pub fn min_eig_series_from_draws(
    dim: usize,
    draws: &[Vec<f64>],
    label: &str,
) -> Result<DecaySeries> {
    let mut acc = DenseMatrix::zeros(dim);
    let mut next = dim;
    let mut indices = Vec::new();
    let mut values = Vec::new();
    let n = draws.len();
    for (i, w) in draws.iter().enumerate() {
        acc.add_outer(w, 1.0)?;
        let k = i + 1;
        if k == next || (k == n && n < dim) {
            let eigs = jacobi_eigenvalues(&acc)?;
            indices.push(k as u64);
            values.push(eigs[0].max(0.0));
            if k == next {
                next *= 2;
            }
        }
    }
    DecaySeries::new(indices, values, label)
}

/// The minimum-eigenvalue growth series on `n_samples` Gaussian draws.
pub fn min_eigenvalue_series(spec: &GaussianFeatureSpec) -> Result<DecaySeries> {
    let draws = spec.sample_trial(0)?;
    min_eig_series_from_draws(spec.dim, &draws, "min-eigenvalue")
}

/// Counts trials whose final `λ_min(Σ_{i≤k} wᵢwᵢᵀ)` reaches the
/// `k·λ_min(Σ)/100` threshold, one independent stream per trial.
pub fn min_eigenvalue_trial_frequency(
    spec: &GaussianFeatureSpec,
    trials: u64,
) -> Result<u64> {
    if trials == 0 {
        return Err(Error::Config("need at least one trial".into()));
    }
    let threshold = spec.n_samples as f64 * spec.min_eigenvalue / 100.0;
    let mut passes = 0;
    for t in 0..trials {
        let mut acc = DenseMatrix::zeros(spec.dim);
        let mut rng = stream(spec.seed, StreamId::Trial { index: t });
        for _ in 0..spec.n_samples {
            let w = spec.draw(&mut rng)?;
            acc.add_outer(&w, 1.0)?;
        }
        if jacobi_eigenvalues(&acc)?[0] >= threshold {
            passes += 1;
        }
    }
    Ok(passes)
}

/// A failed ellipsoid-inequality trial: the witnessing triple plus both
/// sides of the inequality.
#[derive(Debug, Clone)]
pub struct EllipsoidWitness {
    pub trial: u64,
    pub x: Vec<f64>,
    pub a: DenseMatrix,
    pub a_prime: DenseMatrix,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of [`ellipsoid_inequality_check`].
#[derive(Debug, Clone)]
pub struct EllipsoidReport {
    pub trials: u64,
    pub dim: usize,
    pub violations: Vec<EllipsoidWitness>,
}

impl EllipsoidReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for EllipsoidReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed() {
            write!(f, "{} trials at d={}: no violations", self.trials, self.dim)
        } else {
            writeln!(
                f,
                "{} trials at d={}: {} violation(s):",
                self.trials,
                self.dim,
                self.violations.len()
            )?;
            for v in &self.violations {
                writeln!(
                    f,
                    "  trial {}: |x'Ax - x'A'x| = {} > {} = |x|^2 |A - A'| + slack (x = {:?})",
                    v.trial, v.lhs, v.rhs, v.x
                )?;
            }
            Ok(())
        }
    }
}

/// Both sides of the ellipsoid inequality for one explicit triple:
/// `(|xᵀAx − xᵀA′x|, ‖x‖²₂·‖A − A′‖_{2→2})`. The operator norm uses the
/// full eigendecomposition, so the bound is exact up to eigensolver
/// tolerance.
pub fn ellipsoid_check_triple(
    x: &[f64],
    a: &DenseMatrix,
    a_prime: &DenseMatrix,
) -> Result<(f64, f64)> {
    let lhs = (a.quadratic_form(x)? - a_prime.quadratic_form(x)?).abs();
    let diff = a.sub(a_prime)?;
    let eigs = jacobi_eigenvalues(&diff)?;
    let opnorm = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let x_sq: f64 = x.iter().map(|e| e * e).sum();
    Ok((lhs, x_sq * opnorm))
}

/// Randomized check of the ellipsoid inequality: per trial, draws
/// `A = GᵀG + 10⁻⁶I` and `A′ = G′ᵀG′ + 10⁻⁶I` from standard-normal `G`,
/// `G′`, and a standard-normal `x`, and asserts
/// `|‖x‖²_A − ‖x‖²_{A′}| ≤ ‖x‖²₂·‖A − A′‖ + 10⁻⁹`.
pub fn ellipsoid_inequality_check(trials: u64, d: usize, seed: u64) -> Result<EllipsoidReport> {
    if trials == 0 || d == 0 {
        return Err(Error::Config("need trials >= 1 and d >= 1".into()));
    }
    let mut violations = Vec::new();
    for t in 0..trials {
        let mut rng = stream(seed, StreamId::Trial { index: t });
        let draw_pd = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<DenseMatrix> {
            let entries: Vec<f64> =
                (0..d * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let g = DenseMatrix::from_row_major(d, &entries)?;
            // GᵀG: symmetric PSD; the εI shift makes it definite.
            let mut gram = DenseMatrix::zeros(d);
            for i in 0..d {
                for j in 0..d {
                    let mut acc = 0.0;
                    for r in 0..d {
                        acc += g.get(r, i) * g.get(r, j);
                    }
                    gram.set(i, j, acc);
                }
            }
            for i in 0..d {
                gram.set(i, i, gram.get(i, i) + 1e-6);
            }
            Ok(gram)
        };
        let a = draw_pd(&mut rng)?;
        let a_prime = draw_pd(&mut rng)?;
        let x: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let (lhs, rhs) = ellipsoid_check_triple(&x, &a, &a_prime)?;
        if lhs > rhs + 1e-9 {
            violations.push(EllipsoidWitness { trial: t, x, a, a_prime, lhs, rhs });
        }
    }
    Ok(EllipsoidReport { trials, dim: d, violations })
}

/// Per-episode acting weight vectors at one step, recorded by the runner
/// when `run.record_snapshots` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTrace {
    /// The step h whose weights were recorded.
    pub step: usize,
    /// Episode indices, ascending.
    pub episodes: Vec<u64>,
    /// The acting weight vector at each episode.
    pub weights: Vec<Vec<f64>>,
}

/// Consecutive weight-step norms from a recorded trace:
/// `v_k = ‖w_{k+1} − w_k‖₂`, indexed by the earlier episode.
pub fn trace_step_norm_series(trace: &WeightTrace) -> Result<DecaySeries> {
    if trace.episodes.len() != trace.weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} episodes vs {} weight vectors",
            trace.episodes.len(),
            trace.weights.len()
        )));
    }
    if trace.weights.len() < 2 {
        return Err(Error::Config(
            "weight-step series needs at least two recorded episodes".into(),
        ));
    }
    let d = trace.weights[0].len();
    let mut indices = Vec::with_capacity(trace.weights.len() - 1);
    let mut values = Vec::with_capacity(trace.weights.len() - 1);
    for i in 0..trace.weights.len() - 1 {
        let (w0, w1) = (&trace.weights[i], &trace.weights[i + 1]);
        if w0.len() != d || w1.len() != d {
            return Err(Error::DimensionMismatch(
                "weight trace vectors have inconsistent dimension".into(),
            ));
        }
        let step: f64 = w0
            .iter()
            .zip(w1)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        indices.push(trace.episodes[i]);
        values.push(step);
    }
    let label = format!("weight-step-norm-h{}", trace.step);
    DecaySeries::new(indices, values, &label)
}

/// The weight-step series of a completed run. Errors when the run did not
/// record snapshots.
///
/// Agent runs draw features from the simplex, not a Gaussian, so this
/// series is exploratory: inspect it, don't gate on it.
pub fn weight_step_norm_series(run: &RunResult) -> Result<DecaySeries> {
    let trace = run.weight_trace.as_ref().ok_or_else(|| {
        Error::Config(
            "run did not record weight snapshots; set run.record_snapshots = true".into(),
        )
    })?;
    trace_step_norm_series(trace)
}

/// Decay-rate statistic: the ratio of medians of `kᵉ·v_k` between a late
/// and an early index window (inclusive). A ratio near 1 means `v_k` decays
/// like `k^{−e}`; both-zero windows return 1.
pub fn scaled_median_ratio(
    series: &DecaySeries,
    exponent: f64,
    early: (u64, u64),
    late: (u64, u64),
) -> Result<f64> {
    let window_median = |(lo, hi): (u64, u64)| -> Result<f64> {
        let mut scaled: Vec<f64> = series
            .indices()
            .iter()
            .zip(series.values())
            .filter(|(k, _)| **k >= lo && **k <= hi)
            .map(|(k, v)| (*k as f64).powf(exponent) * v)
            .collect();
        if scaled.is_empty() {
            return Err(Error::Config(format!(
                "window [{lo}, {hi}] selects no series entries"
            )));
        }
        scaled.sort_by(|a, b| a.total_cmp(b));
        let n = scaled.len();
        Ok(if n % 2 == 1 {
            scaled[n / 2]
        } else {
            0.5 * (scaled[n / 2 - 1] + scaled[n / 2])
        })
    };
    let early_med = window_median(early)?;
    let late_med = window_median(late)?;
    if early_med == 0.0 {
        return Ok(if late_med == 0.0 { 1.0 } else { f64::INFINITY });
    }
    Ok(late_med / early_med)
}

/// Renders a series in the metrics CSV schema: `run_id` is the series
/// label, the `variant` column is `"diagnostic"`, the value rides in the
/// `regret` column with its running sum in `cum_regret`, and the agent-only
/// columns are zero.
pub fn series_rows(series: &DecaySeries, seed: u64) -> Vec<CsvRow> {
    let mut running = 0.0;
    series
        .indices()
        .iter()
        .zip(series.values())
        .map(|(k, v)| {
            running += v;
            CsvRow {
                run_id: series.label().to_string(),
                seed,
                variant: "diagnostic".into(),
                episode: *k,
                regret: *v,
                cum_regret: running,
                logical_space: 0,
                process_time_s: 0.0,
                learn_events: 0,
                resets: 0,
            }
        })
        .collect()
}

/// One CSV document for a batch of series.
pub fn series_csv(series: &[&DecaySeries], seed: u64) -> Result<String> {
    let rows: Vec<CsvRow> = series.iter().flat_map(|s| series_rows(s, seed)).collect();
    csv_string_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::emit::parse_csv;

    #[test]
    fn zero_draws_leave_every_step_norm_zero() {
        let draws = vec![vec![0.0; 3]; 5];
        let series = lambda_series_from_draws(3, &draws, "zero").unwrap();
        assert_eq!(series.indices(), &[1, 2, 3, 4, 5]);
        assert!(series.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scalar_lambda_series_matches_closed_form() {
        let spec = GaussianFeatureSpec::identity(1, 40, 11).unwrap();
        let draws = spec.sample_trial(0).unwrap();
        let series = lambda_series_from_draws(1, &draws, "scalar").unwrap();
        let mut lam = 1.0;
        for (i, x) in draws.iter().enumerate() {
            let next = lam + x[0] * x[0];
            let want = x[0] * x[0] / (lam * next);
            assert!(
                (series.values()[i] - want).abs() <= 1e-12,
                "k={}: {} vs {}",
                i + 1,
                series.values()[i],
                want
            );
            lam = next;
        }
    }

    #[test]
    fn rank_deficient_eigenvalue_checkpoint_is_zero() {
        let spec = GaussianFeatureSpec::identity(4, 3, 5).unwrap();
        let draws = spec.sample_trial(0).unwrap();
        let series = min_eig_series_from_draws(4, &draws, "deficient").unwrap();
        assert_eq!(series.indices(), &[3]);
        assert!(series.values()[0] <= 1e-10, "got {}", series.values()[0]);
    }

    #[test]
    fn scalar_min_eigenvalue_matches_running_sum() {
        let spec = GaussianFeatureSpec::identity(1, 9, 3).unwrap();
        let draws = spec.sample_trial(0).unwrap();
        let series = min_eig_series_from_draws(1, &draws, "scalar").unwrap();
        assert_eq!(series.indices(), &[1, 2, 4, 8]);
        for (&k, &v) in series.indices().iter().zip(series.values()) {
            let want: f64 = draws[..k as usize].iter().map(|x| x[0] * x[0]).sum();
            assert!((v - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn ellipsoid_trivial_triples_hold_exactly() {
        let a = DenseMatrix::identity(3);
        let (lhs, rhs) = ellipsoid_check_triple(&[1.0, -2.0, 0.5], &a, &a).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs <= 1e-10); // ‖A − A‖ is exactly the zero matrix
        let mut b = DenseMatrix::identity(3);
        b.set(0, 0, 5.0);
        let (lhs, rhs) = ellipsoid_check_triple(&[0.0, 0.0, 0.0], &a, &b).unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn ellipsoid_randomized_trials_pass() {
        let report = ellipsoid_inequality_check(200, 4, 19).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.trials, 200);
        assert!(format!("{report}").contains("no violations"));
    }

    #[test]
    fn ellipsoid_check_rejects_empty_setups() {
        assert!(ellipsoid_inequality_check(0, 4, 1).is_err());
        assert!(ellipsoid_inequality_check(10, 0, 1).is_err());
    }

    #[test]
    fn weight_trace_series_counts_changes() {
        let constant = WeightTrace {
            step: 0,
            episodes: vec![1, 2, 3, 4],
            weights: vec![vec![0.0, 0.0]; 4],
        };
        let series = trace_step_norm_series(&constant).unwrap();
        assert_eq!(series.indices(), &[1, 2, 3]);
        assert!(series.values().iter().all(|&v| v == 0.0));

        let one_change = WeightTrace {
            step: 2,
            episodes: vec![1, 2, 3, 4],
            weights: vec![
                vec![0.0, 0.0],
                vec![0.0, 0.0],
                vec![3.0, 4.0],
                vec![3.0, 4.0],
            ],
        };
        let series = trace_step_norm_series(&one_change).unwrap();
        assert_eq!(series.label(), "weight-step-norm-h2");
        assert_eq!(series.values(), &[0.0, 5.0, 0.0]);
        assert_eq!(series.values().iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn missing_trace_is_an_error() {
        let run = RunResult {
            run_id: "baseline-s0".into(),
            seed: 0,
            variant: crate::agents::Variant::Baseline,
            records: Vec::new(),
            weight_trace: None,
        };
        assert!(matches!(weight_step_norm_series(&run).unwrap_err(), Error::Config(_)));
    }

    #[test]
    fn scaled_median_ratio_is_one_for_exact_power_law() {
        let indices: Vec<u64> = (1..=100).collect();
        let values: Vec<f64> = indices.iter().map(|&k| 1.0 / (k * k) as f64).collect();
        let series = DecaySeries::new(indices, values, "power").unwrap();
        let ratio = scaled_median_ratio(&series, 2.0, (5, 20), (50, 100)).unwrap();
        assert!((ratio - 1.0).abs() <= 1e-12);
        // Flat-zero series → both medians zero → ratio 1 by convention.
        let zero = DecaySeries::new(vec![1, 2, 3, 4], vec![0.0; 4], "z").unwrap();
        assert_eq!(scaled_median_ratio(&zero, 2.0, (1, 2), (3, 4)).unwrap(), 1.0);
        // Empty window → error.
        assert!(scaled_median_ratio(&zero, 2.0, (9, 10), (3, 4)).is_err());
    }

    #[test]
    fn partial_sums_are_stable_across_seeds() {
        let sums: Vec<f64> = [101u64, 202]
            .iter()
            .map(|&seed| {
                let spec = GaussianFeatureSpec::identity(4, 400, seed).unwrap();
                let series = lambda_step_norm_series(&spec).unwrap();
                series.partial_sum(20, 400) // [√K, K]
            })
            .collect();
        assert!(sums.iter().all(|&s| s.is_finite() && s > 0.0));
        let ratio = sums[0] / sums[1];
        assert!(ratio < 2.0 && ratio > 0.5, "partial sums {sums:?}");
    }

    #[test]
    fn spec_rejects_asymmetry_indefiniteness_and_shape_mismatch() {
        let mut asym = DenseMatrix::identity(2);
        asym.set(0, 1, 0.5);
        assert!(GaussianFeatureSpec::new(2, asym, 10, 0).is_err());

        let mut indefinite = DenseMatrix::identity(2);
        indefinite.set(0, 0, -1.0);
        assert!(GaussianFeatureSpec::new(2, indefinite, 10, 0).is_err());

        let singular = DenseMatrix::zeros(2);
        assert!(GaussianFeatureSpec::new(2, singular, 10, 0).is_err());

        assert!(GaussianFeatureSpec::new(3, DenseMatrix::identity(2), 10, 0).is_err());
        assert!(GaussianFeatureSpec::new(2, DenseMatrix::identity(2), 0, 0).is_err());
    }

    #[test]
    fn covariance_shapes_the_draws() {
        let mut cov = DenseMatrix::identity(2);
        cov.set(0, 0, 4.0);
        let spec = GaussianFeatureSpec::new(2, cov, 2000, 7).unwrap();
        assert_eq!(spec.min_covariance_eigenvalue(), 1.0);
        let draws = spec.sample_trial(0).unwrap();
        let var0: f64 =
            draws.iter().map(|x| x[0] * x[0]).sum::<f64>() / draws.len() as f64;
        let var1: f64 =
            draws.iter().map(|x| x[1] * x[1]).sum::<f64>() / draws.len() as f64;
        assert!((var0 - 4.0).abs() < 0.5, "var0 {var0}");
        assert!((var1 - 1.0).abs() < 0.2, "var1 {var1}");
    }

    #[test]
    fn series_emit_in_the_metrics_schema() {
        let series = DecaySeries::new(vec![1, 2], vec![0.5, 0.25], "lambda-step-norm").unwrap();
        let csv = series_csv(&[&series], 42).unwrap();
        let rows = parse_csv(&csv).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].run_id, "lambda-step-norm");
        assert_eq!(rows[0].variant, "diagnostic");
        assert_eq!(rows[0].seed, 42);
        assert_eq!(rows[1].regret, 0.25);
        assert_eq!(rows[1].cum_regret, 0.75);
    }
}
