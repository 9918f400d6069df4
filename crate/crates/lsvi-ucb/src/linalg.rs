//! Dense symmetric-matrix kernels: maintained Gram inverses, quadratic-form
//! bonuses, Frobenius geometry, and the small eigensolvers the diagnostics
//! need.
//!
//! Everything here is plain `f64` and row-major. Matrices are square by
//! construction. The one mutable object is [`GramInverse`], which keeps the
//! inverse of a ridge-regularized sum of outer products up to date one
//! rank-one update at a time.

use crate::error::{Error, Result};

/// Square dense matrix with row-major storage.
///
/// Entries are always finite; constructors and updates reject NaN/Inf input.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix { dim, entries: vec![0.0; dim * dim] }
    }

    /// Identity scaled by `c`.
    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c;
        }
        m
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        DenseMatrix::scaled_identity(dim, 1.0)
    }

    /// Builds a matrix from a row-major slice, rejecting bad shape or
    /// non-finite entries.
    pub fn from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} = {} entries, got {}",
                dim,
                dim,
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("matrix entry is NaN or infinite".into()));
        }
        Ok(DenseMatrix { dim, entries: entries.to_vec() })
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// Sets the entry at `(row, col)`.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.entries[row * self.dim + col] = value;
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// `y = self · x`.
    pub fn mat_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix dim {} vs vector length {}",
                self.dim,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.dim];
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            *yi = dot(row, x);
        }
        Ok(y)
    }

    /// Quadratic form `xᵀ · self · x` without allocating.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix dim {} vs vector length {}",
                self.dim,
                x.len()
            )));
        }
        let mut acc = 0.0;
        for (i, xi) in x.iter().enumerate() {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            acc += xi * dot(row, x);
        }
        Ok(acc)
    }

    /// Dense product `self · other` (used by the small eigens/diagnostics;
    /// never in the per-episode hot path).
    pub fn mat_mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix dims {} vs {}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += aik * other.entries[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Adds `scale · v vᵀ` in place.
    pub fn add_outer(&mut self, v: &[f64], scale: f64) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix dim {} vs vector length {}",
                self.dim,
                v.len()
            )));
        }
        for i in 0..self.dim {
            let vi = scale * v[i];
            for j in 0..self.dim {
                self.entries[i * self.dim + j] += vi * v[j];
            }
        }
        Ok(())
    }

    /// Entry-wise difference `self − other`.
    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix dims {} vs {}",
                self.dim, other.dim
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(DenseMatrix { dim: self.dim, entries })
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    /// Inverse via Gauss–Jordan elimination with partial pivoting.
    ///
    /// This is the slow, independent route: the maintained [`GramInverse`]
    /// chains are checked against it, and the optional refresh mode rebuilds
    /// through it.
    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut inv = DenseMatrix::identity(n).entries;
        for col in 0..n {
            // Partial pivot: largest |entry| in this column at or below the diagonal.
            let mut pivot_row = col;
            let mut pivot_abs = a[col * n + col].abs();
            for r in col + 1..n {
                let cand = a[r * n + col].abs();
                if cand > pivot_abs {
                    pivot_abs = cand;
                    pivot_row = r;
                }
            }
            if pivot_abs == 0.0 {
                return Err(Error::Numerical(format!(
                    "singular matrix: zero pivot in column {col}"
                )));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                    inv.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= pivot;
                inv[col * n + j] /= pivot;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] -= factor * a[col * n + j];
                    inv[r * n + j] -= factor * inv[col * n + j];
                }
            }
        }
        if inv.iter().any(|e| !e.is_finite()) {
            return Err(Error::Numerical("inverse overflowed to non-finite".into()));
        }
        Ok(DenseMatrix { dim: n, entries: inv })
    }

    /// Averages the matrix with its transpose in place.
    fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                let avg = 0.5 * (self.entries[i * n + j] + self.entries[j * n + i]);
                self.entries[i * n + j] = avg;
                self.entries[j * n + i] = avg;
            }
        }
    }
}

/// Maintained inverse of `λI + Σᵢ uᵢuᵢᵀ`.
///
/// Starts at `(1/λ)·I` and folds in one outer product per
/// [`rank_one_update`](GramInverse::rank_one_update) via the Sherman–Morrison
/// identity, re-symmetrizing after every update so long chains cannot drift
/// off the symmetric cone. An optional refresh interval rebuilds the inverse
/// from the accumulated matrix by dense inversion every `n` updates; it is
/// off by default and exists for stress testing the maintained route.
#[derive(Debug, Clone)]
pub struct GramInverse {
    inv: DenseMatrix,
    ridge: f64,
    rank_one_count: u64,
    /// Accumulated `λI + Σ uuᵀ`, kept only when refresh mode is on.
    accum: Option<DenseMatrix>,
    refresh_every: u64,
}

impl GramInverse {
    /// Fresh inverse of `ridge · I`.
    pub fn new(dim: usize, ridge: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("gram inverse needs dim >= 1".into()));
        }
        if !(ridge.is_finite() && ridge > 0.0) {
            return Err(Error::Config(format!("ridge must be finite and positive, got {ridge}")));
        }
        Ok(GramInverse {
            inv: DenseMatrix::scaled_identity(dim, 1.0 / ridge),
            ridge,
            rank_one_count: 0,
            accum: None,
            refresh_every: 0,
        })
    }

    /// Enables a periodic dense rebuild every `every` updates (0 disables).
    pub fn with_refresh(mut self, every: u64) -> Self {
        self.refresh_every = every;
        self.accum = if every > 0 {
            Some(DenseMatrix::scaled_identity(self.inv.dim(), self.ridge))
        } else {
            None
        };
        self
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.inv.dim()
    }

    /// Ridge parameter λ.
    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    /// Number of rank-one updates applied since initialization.
    pub fn rank_one_count(&self) -> u64 {
        self.rank_one_count
    }

    /// The maintained inverse matrix.
    pub fn inv(&self) -> &DenseMatrix {
        &self.inv
    }

    /// Folds `u uᵀ` into the represented matrix, updating the inverse.
    ///
    /// For a positive definite base the denominator `1 + uᵀA⁻¹u` is at least
    /// 1, so the update itself cannot fail; only non-finite input is
    /// rejected.
    pub fn rank_one_update(&mut self, u: &[f64]) -> Result<()> {
        let n = self.inv.dim();
        if u.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "gram dim {} vs update vector length {}",
                n,
                u.len()
            )));
        }
        if u.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("rank-one update vector has NaN/Inf".into()));
        }
        let au = self.inv.mat_vec(u)?;
        let denom = 1.0 + dot(u, &au);
        for i in 0..n {
            let scale = au[i] / denom;
            for j in 0..n {
                self.inv.entries[i * n + j] -= scale * au[j];
            }
        }
        self.inv.symmetrize();
        self.rank_one_count += 1;
        if let Some(accum) = self.accum.as_mut() {
            accum.add_outer(u, 1.0)?;
            if self.refresh_every > 0 && self.rank_one_count % self.refresh_every == 0 {
                self.inv = accum.inverse()?;
                self.inv.symmetrize();
            }
        }
        Ok(())
    }
}

/// `sqrt(Σᵢⱼ (aᵢⱼ − bᵢⱼ)²)`.
pub fn frobenius_distance(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    Ok(a.sub(b)?.frobenius_norm())
}

/// Exploration-bonus norm `sqrt(xᵀ · g.inv · x)`.
///
/// A quadratic form that comes out negative beyond rounding slack
/// (`1e-12·(1+‖x‖²)`) means the maintained inverse has lost positive
/// definiteness; that is reported as a numerical failure instead of being
/// clamped silently. Negatives inside the slack are rounding noise and clamp
/// to zero.
pub fn ellipsoid_bonus(x: &[f64], g: &GramInverse) -> Result<f64> {
    if x.len() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "gram dim {} vs vector length {}",
            g.dim(),
            x.len()
        )));
    }
    let form = g.inv().quadratic_form(x)?;
    let slack = 1e-12 * (1.0 + dot(x, x));
    if form < -slack {
        return Err(Error::Numerical(format!(
            "negative quadratic form {form:e} signals a corrupted inverse"
        )));
    }
    Ok(form.max(0.0).sqrt())
}

/// Largest absolute eigenvalue of a symmetric matrix, estimated by power
/// iteration on `a·a` from a fixed normalized all-ones start vector.
///
/// Deterministic; at the default 200 iterations it is accurate to about 1e-6
/// relative for well-separated spectra. Returns 0 when the iterate collapses
/// (e.g. the zero matrix).
pub fn operator_norm_estimate(a: &DenseMatrix, iterations: usize) -> f64 {
    let n = a.dim();
    if n == 0 {
        return 0.0;
    }
    // a·a is positive semidefinite with eigenvalues λᵢ², so the Rayleigh
    // quotient converges to max λᵢ² even when a itself is indefinite.
    let squared = a.mat_mul(a).expect("same-dim product");
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..iterations {
        let w = squared.mat_vec(&v).expect("dim checked");
        let norm = dot(&w, &w).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    let bv = squared.mat_vec(&v).expect("dim checked");
    dot(&v, &bv).max(0.0).sqrt()
}

/// All eigenvalues of a symmetric matrix via cyclic Jacobi rotations,
/// returned in ascending order.
///
/// Sweeps run until the off-diagonal Frobenius norm drops below
/// `1e-10 · (1 + ‖a‖_F)`; failure to converge within 100 sweeps is a
/// numerical error.
pub fn jacobi_eigenvalues(a: &DenseMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let mut m = a.clone();
    m.symmetrize();
    let tol = 1e-10 * (1.0 + m.frobenius_norm());
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m.get(i, j) * m.get(i, j);
                }
            }
        }
        if off.sqrt() <= tol {
            let mut eigs: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            return Ok(eigs);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Rotate rows and columns p and q.
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
            }
        }
    }
    Err(Error::Numerical(
        "jacobi eigensolver did not converge within 100 sweeps".into(),
    ))
}

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ = a`.
///
/// Fails with a numerical error when the matrix is not positive definite.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.dim();
    let mut l = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::Numerical(format!(
                        "cholesky pivot {sum:e} at row {i}: matrix not positive definite"
                    )));
                }
                l.set(i, i, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Plain dot product; operands must be the same length.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
