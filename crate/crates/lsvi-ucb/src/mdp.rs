//! Finite linear MDPs: representation, synthetic generation, sampling,
//! validation, and the `LMDPv001` on-disk format.
//!
//! A linear MDP over `|S|` states, `|A|` actions, and horizon `H` is given by
//! a feature map `φ(s,a) ∈ ℝᵈ`, per-step measure tables `μ_h` (d rows, each a
//! signed measure over S), and per-step reward weights `θ_h ∈ ℝᵈ`. Transition
//! probabilities are `p_h(s'|s,a) = ⟨φ(s,a), μ_h(s')⟩` and rewards are
//! `r_h(s,a) = ⟨φ(s,a), θ_h⟩`. The synthetic generator draws every φ, θ, and
//! μ-row uniformly from the probability simplex, which makes all invariants
//! hold by construction.

use std::fmt;

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::streams::{stream, StreamId};

const MAGIC: &[u8; 8] = b"LMDPv001";

/// Parameters of the synthetic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub n_states: usize,
    pub n_actions: usize,
    pub dim: usize,
    pub horizon: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.n_states == 0 || self.n_actions == 0 || self.dim == 0 || self.horizon == 0 {
            return Err(Error::Config(format!(
                "synthetic spec sizes must all be >= 1, got |S|={}, |A|={}, d={}, H={}",
                self.n_states, self.n_actions, self.dim, self.horizon
            )));
        }
        Ok(())
    }
}

/// A finite linear MDP.
///
/// Immutable after construction; tables are stored flat and row-major:
/// features `(s, a)`-major, measures `(h, row)`-major, reward weights
/// `h`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMDP {
    n_states: usize,
    n_actions: usize,
    dim: usize,
    horizon: usize,
    seed: u64,
    /// `|S|·|A|·d` scalars; φ(s,a) at `((s·|A|)+a)·d`.
    features: Vec<f64>,
    /// `H·d` scalars; θ_h at `h·d`.
    reward_weights: Vec<f64>,
    /// `H·d·|S|` scalars; μ_h row j at `((h·d)+j)·|S|`.
    measures: Vec<f64>,
}

impl LinearMDP {
    /// Builds an MDP from explicit tables, checking shapes and finiteness.
    ///
    /// Semantic validity (transition simplex, reward range) is the job of
    /// [`validate`](LinearMDP::validate), so deliberately broken instances can
    /// be constructed for testing.
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        n_states: usize,
        n_actions: usize,
        dim: usize,
        horizon: usize,
        seed: u64,
        features: Vec<f64>,
        reward_weights: Vec<f64>,
        measures: Vec<f64>,
    ) -> Result<Self> {
        if n_states == 0 || n_actions == 0 || dim == 0 || horizon == 0 {
            return Err(Error::Config("MDP sizes must all be >= 1".into()));
        }
        let want = (
            n_states * n_actions * dim,
            horizon * dim,
            horizon * dim * n_states,
        );
        let got = (features.len(), reward_weights.len(), measures.len());
        if want != got {
            return Err(Error::DimensionMismatch(format!(
                "table lengths (features, weights, measures): expected {want:?}, got {got:?}"
            )));
        }
        if features
            .iter()
            .chain(&reward_weights)
            .chain(&measures)
            .any(|e| !e.is_finite())
        {
            return Err(Error::NonFinite("MDP table entry is NaN or infinite".into()));
        }
        Ok(LinearMDP {
            n_states,
            n_actions,
            dim,
            horizon,
            seed,
            features,
            reward_weights,
            measures,
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Seed recorded at generation time (echoed through serialization).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Feature vector φ(s,a). Panics on out-of-range indices.
    #[inline]
    pub fn feature(&self, s: usize, a: usize) -> &[f64] {
        let start = (s * self.n_actions + a) * self.dim;
        &self.features[start..start + self.dim]
    }

    /// All action features of one state as a contiguous `|A|·d` block.
    #[inline]
    pub fn state_features(&self, s: usize) -> &[f64] {
        let start = s * self.n_actions * self.dim;
        &self.features[start..start + self.n_actions * self.dim]
    }

    /// Row `j` of the measure table μ_h (a vector over states).
    #[inline]
    pub fn measure_row(&self, h: usize, j: usize) -> &[f64] {
        let start = (h * self.dim + j) * self.n_states;
        &self.measures[start..start + self.n_states]
    }

    /// Reward weight vector θ_h.
    #[inline]
    pub fn reward_weight(&self, h: usize) -> &[f64] {
        &self.reward_weights[h * self.dim..(h + 1) * self.dim]
    }

    fn check_indices(&self, s: usize, a: usize, h: usize) -> Result<()> {
        if s >= self.n_states || a >= self.n_actions || h >= self.horizon {
            return Err(Error::DimensionMismatch(format!(
                "indices (s={s}, a={a}, h={h}) out of range for |S|={}, |A|={}, H={}",
                self.n_states, self.n_actions, self.horizon
            )));
        }
        Ok(())
    }

    /// Deterministic reward `⟨φ(s,a), θ_h⟩`.
    pub fn reward(&self, s: usize, a: usize, h: usize) -> Result<f64> {
        self.check_indices(s, a, h)?;
        Ok(dot(self.feature(s, a), self.reward_weight(h)))
    }

    /// Transition distribution `φ(s,a)ᵀμ_h` as a dense vector over states.
    pub fn transition_probs(&self, s: usize, a: usize, h: usize) -> Result<Vec<f64>> {
        self.check_indices(s, a, h)?;
        let phi = self.feature(s, a);
        let mut p = vec![0.0; self.n_states];
        for j in 0..self.dim {
            let w = phi[j];
            if w == 0.0 {
                continue;
            }
            let row = self.measure_row(h, j);
            for (pi, m) in p.iter_mut().zip(row) {
                *pi += w * m;
            }
        }
        Ok(p)
    }

    /// Draws the next state by inverse-CDF sampling on the provided stream.
    pub fn transition_sample(
        &self,
        s: usize,
        a: usize,
        h: usize,
        rng: &mut impl Rng,
    ) -> Result<usize> {
        let p = self.transition_probs(s, a, h)?;
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, pi) in p.iter().enumerate() {
            // Entries may carry −1e-12-scale rounding noise; clamp for the CDF walk.
            acc += pi.max(0.0);
            if u < acc {
                return Ok(i);
            }
        }
        Ok(self.n_states - 1)
    }

    /// Checks every `(s,a,h)` against the transition-simplex and reward-range
    /// invariants and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for h in 0..self.horizon {
            for s in 0..self.n_states {
                for a in 0..self.n_actions {
                    let p = self.transition_probs(s, a, h).expect("in-range indices");
                    let min = p.iter().cloned().fold(f64::INFINITY, f64::min);
                    if min < -1e-12 {
                        violations.push(Violation {
                            kind: ViolationKind::TransitionNegative,
                            state: s,
                            action: a,
                            step: h,
                            magnitude: min,
                        });
                    }
                    let sum: f64 = p.iter().sum();
                    if (sum - 1.0).abs() > 1e-9 {
                        violations.push(Violation {
                            kind: ViolationKind::TransitionSum,
                            state: s,
                            action: a,
                            step: h,
                            magnitude: sum,
                        });
                    }
                    let r = self.reward(s, a, h).expect("in-range indices");
                    if !(-1e-12..=1.0 + 1e-12).contains(&r) {
                        violations.push(Violation {
                            kind: ViolationKind::RewardRange,
                            state: s,
                            action: a,
                            step: h,
                            magnitude: r,
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Encodes the MDP in the `LMDPv001` container format.
    pub fn serialize(&self) -> Vec<u8> {
        let n_f64 = self.features.len() + self.reward_weights.len() + self.measures.len();
        let mut buf = Vec::with_capacity(8 + 5 * 8 + n_f64 * 8 + 4);
        buf.extend_from_slice(MAGIC);
        for v in [
            self.n_states as u64,
            self.n_actions as u64,
            self.dim as u64,
            self.horizon as u64,
            self.seed,
        ] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        for table in [&self.features, &self.reward_weights, &self.measures] {
            for x in table.iter() {
                buf.extend_from_slice(&x.to_le_bytes());
            }
        }
        let crc = crc32fast::hash(&buf[MAGIC.len()..]);
        buf.extend_from_slice(&crc.to_le_bytes());
        buf
    }

    /// Decodes an `LMDPv001` container, checking magic, shape, and checksum.
    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        let header_len = MAGIC.len() + 5 * 8;
        if bytes.len() < header_len + 4 {
            return Err(Error::Format(format!(
                "container too short: {} bytes, need at least {}",
                bytes.len(),
                header_len + 4
            )));
        }
        if &bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::Format("bad magic: not an LMDPv001 container".into()));
        }
        let mut fields = [0u64; 5];
        for (i, f) in fields.iter_mut().enumerate() {
            let start = MAGIC.len() + i * 8;
            *f = u64::from_le_bytes(bytes[start..start + 8].try_into().expect("8 bytes"));
        }
        let [n_states, n_actions, dim, horizon, seed] = fields;
        let feat_n = n_states
            .checked_mul(n_actions)
            .and_then(|x| x.checked_mul(dim));
        let weight_n = horizon.checked_mul(dim);
        let measure_n = weight_n.and_then(|x| x.checked_mul(n_states));
        let (Some(feat_n), Some(weight_n), Some(measure_n)) = (feat_n, weight_n, measure_n)
        else {
            return Err(Error::Format("header sizes overflow".into()));
        };
        let total_f64 = feat_n + weight_n + measure_n;
        let expected = header_len as u64 + total_f64 * 8 + 4;
        if bytes.len() as u64 != expected {
            return Err(Error::Format(format!(
                "shape mismatch: header implies {} bytes, got {}",
                expected,
                bytes.len()
            )));
        }
        let crc_start = bytes.len() - 4;
        let stored = u32::from_le_bytes(bytes[crc_start..].try_into().expect("4 bytes"));
        let computed = crc32fast::hash(&bytes[MAGIC.len()..crc_start]);
        if stored != computed {
            return Err(Error::Format(format!(
                "checksum mismatch: stored {stored:#010x}, computed {computed:#010x}"
            )));
        }
        let mut values = Vec::with_capacity(total_f64 as usize);
        for chunk in bytes[header_len..crc_start].chunks_exact(8) {
            let x = f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
            if !x.is_finite() {
                return Err(Error::Format("non-finite table entry".into()));
            }
            values.push(x);
        }
        let feat_n = feat_n as usize;
        let weight_n = weight_n as usize;
        let measures = values.split_off(feat_n + weight_n);
        let reward_weights = values.split_off(feat_n);
        LinearMDP::from_tables(
            n_states as usize,
            n_actions as usize,
            dim as usize,
            horizon as usize,
            seed,
            values,
            reward_weights,
            measures,
        )
    }
}

/// Which invariant a table cell broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A transition probability below −1e-12.
    TransitionNegative,
    /// A transition row summing outside 1 ± 1e-9.
    TransitionSum,
    /// A reward outside [−1e-12, 1 + 1e-12].
    RewardRange,
}

/// One invariant violation at a specific `(s, a, h)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub state: usize,
    pub action: usize,
    pub step: usize,
    /// The offending value (minimum entry, row sum, or reward).
    pub magnitude: f64,
}

/// Exhaustive list of invariant violations; empty means the MDP is valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            let what = match v.kind {
                ViolationKind::TransitionNegative => "negative transition entry",
                ViolationKind::TransitionSum => "transition row sum",
                ViolationKind::RewardRange => "reward out of range",
            };
            writeln!(
                f,
                "  (s={}, a={}, h={}): {what} = {}",
                v.state, v.action, v.step, v.magnitude
            )?;
        }
        Ok(())
    }
}

/// Uniform draw from the probability simplex in `n` dimensions: `n` i.i.d.
/// unit exponentials normalized by their sum.
pub fn sample_simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let sum: f64 = v.iter().sum();
    if sum == 0.0 {
        return vec![1.0 / n as f64; n];
    }
    for e in &mut v {
        *e /= sum;
    }
    v
}

/// Draws a synthetic linear MDP: every φ(s,a), θ_h, and μ_h-row uniform on
/// the simplex, each from its own named stream, so the result is a pure
/// function of its [`SyntheticSpec`].
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<LinearMDP> {
    spec.validate()?;
    let SyntheticSpec { n_states, n_actions, dim, horizon, seed } = *spec;

    let mut features = Vec::with_capacity(n_states * n_actions * dim);
    for s in 0..n_states {
        for a in 0..n_actions {
            let mut rng = stream(seed, StreamId::FeatureCell { state: s as u64, action: a as u64 });
            features.extend(sample_simplex(&mut rng, dim));
        }
    }

    let mut reward_weights = Vec::with_capacity(horizon * dim);
    for h in 0..horizon {
        let mut rng = stream(seed, StreamId::RewardWeights { step: h as u64 });
        reward_weights.extend(sample_simplex(&mut rng, dim));
    }

    let mut measures = Vec::with_capacity(horizon * dim * n_states);
    for h in 0..horizon {
        for j in 0..dim {
            let mut rng = stream(seed, StreamId::MeasureRow { step: h as u64, coord: j as u64 });
            measures.extend(sample_simplex(&mut rng, n_states));
        }
    }

    LinearMDP::from_tables(
        n_states,
        n_actions,
        dim,
        horizon,
        seed,
        features,
        reward_weights,
        measures,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn paper_scale_spec() -> SyntheticSpec {
        SyntheticSpec { n_states: 500, n_actions: 15, dim: 30, horizon: 50, seed: 404 }
    }

    fn small_spec() -> SyntheticSpec {
        SyntheticSpec { n_states: 6, n_actions: 3, dim: 4, horizon: 5, seed: 11 }
    }

    fn assert_simplex(v: &[f64]) {
        assert!(v.iter().all(|&x| x >= 0.0), "negative entry in {v:?}");
        let sum: f64 = v.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");
    }

    #[test]
    fn paper_scale_instance_has_right_shapes_and_simplex_rows() {
        let mdp = generate_synthetic(&paper_scale_spec()).unwrap();
        assert_eq!(
            (mdp.n_states(), mdp.n_actions(), mdp.dim(), mdp.horizon()),
            (500, 15, 30, 50)
        );
        for s in (0..500).step_by(97) {
            for a in 0..15 {
                assert_simplex(mdp.feature(s, a));
            }
        }
        for h in 0..50 {
            assert_simplex(mdp.reward_weight(h));
            for j in 0..30 {
                assert_simplex(mdp.measure_row(h, j));
            }
        }
    }

    #[test]
    fn one_dimensional_simplex_is_a_point() {
        let spec = SyntheticSpec { n_states: 1, n_actions: 1, dim: 1, horizon: 1, seed: 0 };
        let mdp = generate_synthetic(&spec).unwrap();
        assert_eq!(mdp.feature(0, 0), &[1.0]);
        assert_eq!(mdp.reward_weight(0), &[1.0]);
        assert_eq!(mdp.measure_row(0, 0), &[1.0]);
        assert_eq!(mdp.reward(0, 0, 0).unwrap(), 1.0);
        assert_eq!(mdp.transition_probs(0, 0, 0).unwrap(), vec![1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(mdp.transition_sample(0, 0, 0, &mut rng).unwrap(), 0);
    }

    #[test]
    fn regeneration_is_bit_identical() {
        let spec = SyntheticSpec { n_states: 3, n_actions: 2, dim: 2, horizon: 2, seed: 99 };
        let a = generate_synthetic(&spec).unwrap();
        let b = generate_synthetic(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn point_mass_measures_always_transition_to_state_zero() {
        // Every μ-row is a point mass on state 0, so p(0|s,a) = Σⱼ φⱼ = 1.
        let (s_n, a_n, d, h_n) = (4, 2, 3, 2);
        let features: Vec<f64> = (0..s_n * a_n)
            .flat_map(|_| vec![0.5, 0.3, 0.2])
            .collect();
        let reward_weights = vec![0.2; h_n * d];
        let mut measures = vec![0.0; h_n * d * s_n];
        for h in 0..h_n {
            for j in 0..d {
                measures[(h * d + j) * s_n] = 1.0;
            }
        }
        let mdp =
            LinearMDP::from_tables(s_n, a_n, d, h_n, 0, features, reward_weights, measures)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for s in 0..s_n {
            for a in 0..a_n {
                for h in 0..h_n {
                    assert_eq!(mdp.transition_sample(s, a, h, &mut rng).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn transition_frequencies_match_probabilities() {
        let mdp = generate_synthetic(&small_spec()).unwrap();
        let (s, a, h) = (2, 1, 3);
        let p = mdp.transition_probs(s, a, h).unwrap();
        let n = 100_000;
        let mut counts = vec![0u64; mdp.n_states()];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..n {
            counts[mdp.transition_sample(s, a, h, &mut rng).unwrap()] += 1;
        }
        let tv: f64 = counts
            .iter()
            .zip(&p)
            .map(|(&c, &q)| (c as f64 / n as f64 - q).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.01, "total variation {tv}");
    }

    #[test]
    fn uniform_reward_weights_give_one_over_d() {
        let d = 4;
        let features = sample_simplex(&mut ChaCha8Rng::seed_from_u64(3), d);
        let reward_weights = vec![1.0 / d as f64; d];
        let measures = vec![1.0; d]; // single state: each row is the point mass (1)
        let mdp =
            LinearMDP::from_tables(1, 1, d, 1, 0, features, reward_weights, measures).unwrap();
        let r = mdp.reward(0, 0, 0).unwrap();
        assert!((r - 0.25).abs() <= 1e-15, "got {r}");
    }

    #[test]
    fn reward_matches_direct_summation() {
        let mdp = generate_synthetic(&small_spec()).unwrap();
        let (s, a, h) = (4, 2, 1);
        let phi = mdp.feature(s, a);
        let theta = mdp.reward_weight(h);
        let want: f64 = (0..mdp.dim()).map(|j| phi[j] * theta[j]).sum();
        let got = mdp.reward(s, a, h).unwrap();
        assert!((got - want).abs() <= 1e-15);
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let mdp = generate_synthetic(&small_spec()).unwrap();
        assert!(matches!(mdp.reward(6, 0, 0), Err(Error::DimensionMismatch(_))));
        assert!(matches!(mdp.reward(0, 3, 0), Err(Error::DimensionMismatch(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            mdp.transition_sample(0, 0, 5, &mut rng),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn synthetic_instance_validates_clean() {
        assert!(generate_synthetic(&small_spec()).unwrap().validate().is_valid());
    }

    #[test]
    fn validation_flags_oversized_reward() {
        // φ(0,0) is a point mass on coordinate 0 and θ there is 2.
        let (s_n, a_n, d, h_n) = (2, 1, 2, 1);
        let features = vec![1.0, 0.0, 1.0, 0.0];
        let reward_weights = vec![2.0, 0.0];
        let mut measures = vec![0.0; h_n * d * s_n];
        measures[0] = 1.0; // row 0: point mass on state 0
        measures[2] = 1.0; // row 1: point mass on state 0
        let mdp =
            LinearMDP::from_tables(s_n, a_n, d, h_n, 0, features, reward_weights, measures)
                .unwrap();
        let report = mdp.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::RewardRange && v.magnitude == 2.0));
    }

    #[test]
    fn validation_flags_scaled_measure_row() {
        let spec = SyntheticSpec { n_states: 3, n_actions: 2, dim: 2, horizon: 2, seed: 8 };
        let mdp = generate_synthetic(&spec).unwrap();
        let mut measures: Vec<f64> = mdp.measures.clone();
        // Scale μ_0 row 0 by one half; every (s,a) with φ₀ > 0 at h=0 now
        // has a deficient transition sum.
        for e in measures.iter_mut().take(3) {
            *e *= 0.5;
        }
        let broken = LinearMDP::from_tables(
            3,
            2,
            2,
            2,
            8,
            mdp.features.clone(),
            mdp.reward_weights.clone(),
            measures,
        )
        .unwrap();
        let report = broken.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::TransitionSum && v.step == 0));
        assert!(report.violations.iter().any(|v| v.magnitude < 0.95));
    }

    #[test]
    fn serialization_round_trips_bit_exactly() {
        let mdp = generate_synthetic(&small_spec()).unwrap();
        let bytes = mdp.serialize();
        let back = LinearMDP::deserialize(&bytes).unwrap();
        assert_eq!(mdp, back);
        assert!(back.validate().is_valid());
    }

    #[test]
    fn truncated_stream_is_a_shape_mismatch() {
        let bytes = generate_synthetic(&small_spec()).unwrap().serialize();
        let err = LinearMDP::deserialize(&bytes[..bytes.len() - 9]).unwrap_err();
        assert!(matches!(err, Error::Format(ref m) if m.contains("shape mismatch")), "{err}");
    }

    #[test]
    fn corrupted_payload_fails_the_checksum() {
        let mut bytes = generate_synthetic(&small_spec()).unwrap().serialize();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0xff;
        let err = LinearMDP::deserialize(&bytes).unwrap_err();
        assert!(matches!(err, Error::Format(ref m) if m.contains("checksum")), "{err}");
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let mut bytes = generate_synthetic(&small_spec()).unwrap().serialize();
        bytes[0] = b'X';
        let err = LinearMDP::deserialize(&bytes).unwrap_err();
        assert!(matches!(err, Error::Format(ref m) if m.contains("magic")), "{err}");
    }
}
