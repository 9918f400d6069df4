//! Post-run summaries: average-regret decay (the observable consequence of
//! sublinear regret) and space/learning totals.

use std::fmt;

use crate::error::{Error, Result};
use crate::harness::runner::RunResult;
use crate::harness::EpisodeRecord;

/// Average-regret decay summary for one cumulative-regret curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SublinearityReport {
    pub episodes: u64,
    /// `R(k)/k` at `k ∈ {K/4, K/2, K}` as `(k, value)` pairs.
    pub avg_regret: [(u64, f64); 3],
    /// `[R(K)/K] ÷ [R(K/4)/(K/4)]`; 0 when the curve is identically zero.
    pub decay_ratio: f64,
    /// `a` in the least-squares fit `a·√k + b` over `k ∈ [K/2, K]`.
    pub fit_scale: f64,
    /// `b` in the same fit.
    pub fit_offset: f64,
    /// `‖residual‖₂ / ‖curve‖₂` over the fit window.
    pub fit_relative_residual: f64,
    /// The curve never accumulated any regret.
    pub zero_regret: bool,
    /// Average regret is not decaying (decay ratio ≥ 0.999).
    pub non_sublinear: bool,
}

impl fmt::Display for SublinearityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "episodes: {}", self.episodes)?;
        for (k, v) in self.avg_regret {
            writeln!(f, "avg regret R(k)/k at k={k}: {v}")?;
        }
        writeln!(f, "decay ratio R(K)/K : R(K/4)/(K/4): {}", self.decay_ratio)?;
        writeln!(
            f,
            "sqrt fit over [K/2, K]: a={}, b={}, relative residual={}",
            self.fit_scale, self.fit_offset, self.fit_relative_residual
        )?;
        if self.zero_regret {
            writeln!(f, "flag: zero regret")?;
        }
        if self.non_sublinear {
            writeln!(f, "flag: non-sublinear")?;
        }
        Ok(())
    }
}

/// The cumulative-regret curve of one run as `(episode, cum_regret)` pairs.
pub fn cumulative_curve(records: &[EpisodeRecord]) -> Vec<(u64, f64)> {
    records.iter().map(|r| (r.episode, r.cum_regret)).collect()
}

/// Pointwise mean cumulative-regret curve across runs (seeds). All runs
/// must cover the same episode range.
pub fn mean_curve(results: &[RunResult]) -> Result<Vec<(u64, f64)>> {
    let first = results
        .first()
        .ok_or_else(|| Error::Config("mean curve needs at least one run".into()))?;
    let n = first.records.len();
    let mut curve: Vec<(u64, f64)> = first.records.iter().map(|r| (r.episode, 0.0)).collect();
    for run in results {
        if run.records.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "run {} has {} episodes, expected {n}",
                run.run_id,
                run.records.len()
            )));
        }
        for (acc, rec) in curve.iter_mut().zip(&run.records) {
            if rec.episode != acc.0 {
                return Err(Error::DimensionMismatch(format!(
                    "run {} episode column mismatch at k={}",
                    run.run_id, acc.0
                )));
            }
            acc.1 += rec.cum_regret;
        }
    }
    let m = results.len() as f64;
    for acc in &mut curve {
        acc.1 /= m;
    }
    Ok(curve)
}

/// Least-squares fit of `y ≈ a·√k + b` over the given points. Returns
/// `(a, b, relative_residual)` where the residual is `‖y − ŷ‖₂/‖y‖₂`
/// (0 for an identically zero target).
pub fn fit_sqrt(points: &[(u64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::Config("sqrt fit needs at least two points".into()));
    }
    let n = points.len() as f64;
    let (mut s_x, mut s_xx, mut s_y, mut s_xy) = (0.0, 0.0, 0.0, 0.0);
    for &(k, y) in points {
        let x = (k as f64).sqrt();
        s_x += x;
        s_xx += x * x;
        s_y += y;
        s_xy += x * y;
    }
    let det = n * s_xx - s_x * s_x;
    if det.abs() < 1e-12 * n * s_xx.max(1.0) {
        return Err(Error::Numerical("sqrt fit is degenerate (repeated abscissa)".into()));
    }
    let a = (n * s_xy - s_x * s_y) / det;
    let b = (s_xx * s_y - s_x * s_xy) / det;
    let mut resid_sq = 0.0;
    let mut y_sq = 0.0;
    for &(k, y) in points {
        let fitted = a * (k as f64).sqrt() + b;
        resid_sq += (y - fitted) * (y - fitted);
        y_sq += y * y;
    }
    let rel = if y_sq == 0.0 { 0.0 } else { (resid_sq / y_sq).sqrt() };
    Ok((a, b, rel))
}

/// Builds the decay report from a cumulative-regret curve covering episodes
/// `1..=K` with `K ≥ 100`.
pub fn sublinearity_from_curve(curve: &[(u64, f64)]) -> Result<SublinearityReport> {
    let k_max = curve.len() as u64;
    if k_max < 100 {
        return Err(Error::Config(format!(
            "sublinearity report needs K >= 100 episodes, got {k_max}"
        )));
    }
    for (i, &(k, _)) in curve.iter().enumerate() {
        if k != i as u64 + 1 {
            return Err(Error::Format(format!(
                "curve must cover episodes 1..=K contiguously; position {i} holds k={k}"
            )));
        }
    }
    let at = |k: u64| curve[(k - 1) as usize].1;
    let quarter = k_max / 4;
    let half = k_max / 2;
    let avg = |k: u64| at(k) / k as f64;
    let avg_regret = [(quarter, avg(quarter)), (half, avg(half)), (k_max, avg(k_max))];
    let zero_regret = at(k_max) == 0.0;
    let decay_ratio = if zero_regret {
        0.0
    } else if at(quarter) == 0.0 {
        f64::INFINITY
    } else {
        avg(k_max) / avg(quarter)
    };
    let window: Vec<(u64, f64)> = curve[(half - 1) as usize..].to_vec();
    let (fit_scale, fit_offset, fit_relative_residual) = fit_sqrt(&window)?;
    Ok(SublinearityReport {
        episodes: k_max,
        avg_regret,
        decay_ratio,
        fit_scale,
        fit_offset,
        fit_relative_residual,
        zero_regret,
        non_sublinear: !zero_regret && decay_ratio >= 0.999,
    })
}

/// Builds the decay report from one run's records.
pub fn sublinearity_report(records: &[EpisodeRecord]) -> Result<SublinearityReport> {
    sublinearity_from_curve(&cumulative_curve(records))
}

/// Space and event totals for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceSummary {
    pub min_logical_space: u64,
    pub max_logical_space: u64,
    pub final_logical_space: u64,
    pub total_learn_events: u64,
    pub total_resets: u64,
}

impl fmt::Display for SpaceSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "logical space min/max/final: {}/{}/{}; learn events: {}; resets: {}",
            self.min_logical_space,
            self.max_logical_space,
            self.final_logical_space,
            self.total_learn_events,
            self.total_resets
        )
    }
}

/// Summarizes the space column and event counters of one run.
pub fn space_summary(records: &[EpisodeRecord]) -> Result<SpaceSummary> {
    let last = records
        .last()
        .ok_or_else(|| Error::Config("space summary needs at least one record".into()))?;
    Ok(SpaceSummary {
        min_logical_space: records.iter().map(|r| r.logical_space).min().unwrap(),
        max_logical_space: records.iter().map(|r| r.logical_space).max().unwrap(),
        final_logical_space: last.logical_space,
        total_learn_events: records.iter().map(|r| r.learn_events).sum(),
        total_resets: records.iter().map(|r| r.resets).sum(),
    })
}
