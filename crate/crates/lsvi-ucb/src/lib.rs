//! Optimistic least-squares value iteration (LSVI-UCB) on finite linear
//! MDPs, together with two space-bounded variants that periodically discard
//! their regression workspace, an exact dynamic-programming oracle for
//! regret, convergence diagnostics, and a reproducible benchmark harness.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense symmetric kernels — maintained Gram inverses
//!   (Sherman–Morrison with re-symmetrization), ellipsoid bonuses, Frobenius
//!   geometry, Jacobi eigenvalues, Cholesky.
//! - [`streams`]: named counter-based RNG streams; every random consumer is
//!   keyed by role and index so runs are reproducible draw-for-draw.
//! - [`mdp`]: finite linear MDPs — synthetic generation on the simplex,
//!   sampling, validation, and the `LMDPv001` container format.
//! - [`oracle`]: exact backward induction for optimal values, policy
//!   evaluation, and per-episode regret.
//! - [`agents`]: the three learners (baseline, fixed-interval reset,
//!   adaptive reset) sharing one regression/bonus core.
//! - [`diagnostics`]: empirical convergence checks (step-norm decay, minimum
//!   eigenvalue growth, the ellipsoid inequality).
//! - [`harness`]: experiment configuration, seeded multi-run execution,
//!   logical-space metering, CSV/JSON emission, and sublinearity reports.
//!
//! The `lsvi-ucb` binary exposes the harness as a small CLI
//! (`generate`/`run`/`sweep`/`diagnose`/`report`), and the crate's
//! `examples/` directory has one runnable entry point per major capability.

pub mod agents;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod mdp;
pub mod oracle;
pub mod streams;

pub use agents::{Agent, Hyperparameters, Variant};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, RunResult};
pub use mdp::{generate_synthetic, LinearMDP, SyntheticSpec};
pub use oracle::{optimal_values, DeterministicPolicy, ValueTables};
