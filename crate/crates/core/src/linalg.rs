//! Dense symmetric linear algebra.
//!
//! Everything here is driven by one eigensolver: cyclic Jacobi rotations on
//! a dense symmetric matrix. Jacobi is slower than tridiagonal QR beyond a few
//! dozen rows, but at the orders this crate works with it converges in a
//! handful of sweeps and resolves eigenvalues to high relative accuracy,
//! which is what multiplicity counting needs.
//!
//! Eigenvalues are clustered into groups under a relative tolerance
//! `tol * max(1, max|λ|)`. Rank, PSD and pseudoinverse decisions all use the
//! same scale.

use std::ops::Index;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm, relative to the full Frobenius norm, at which
/// the Jacobi iteration stops.
const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Numerical tolerances shared by the whole pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative eigenvalue clustering tolerance.
    pub eig: f64,
    /// Relative threshold for PSD and rank decisions.
    pub psd: f64,
    /// Relative residual accepted by solves and eigenvector checks.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig: 1e-9,
            psd: 1e-9,
            residual: 1e-8,
        }
    }
}

/// Real symmetric matrix. Entries are stored symmetrically.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    /// Wraps a square matrix, rejecting skew components larger than roundoff
    /// and then symmetrising exactly.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.amax().max(1.0);
        let skew = (&m - m.transpose()).amax();
        if skew > 1e-12 * scale {
            return Err(Error::InvalidInput(format!(
                "matrix is not symmetric (skew {skew:e})"
            )));
        }
        Ok(Self((&m + m.transpose()) * 0.5))
    }

    /// Builds from the upper triangle of `f` (`i <= j`), mirrored.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = f(i, j);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        Self(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// All-ones matrix `E`.
    pub fn ones(n: usize) -> Self {
        Self(DMatrix::from_element(n, n, 1.0))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &SymMatrix) -> Self {
        Self(&self.0 + &other.0 * s)
    }

    /// `Mᵀ · self · M`, symmetrised.
    pub fn congruence(&self, m: &DMatrix<f64>) -> Self {
        let c = m.transpose() * &self.0 * m;
        Self((&c + c.transpose()) * 0.5)
    }

    pub fn check_finite(&self) -> Result<()> {
        let n = self.order();
        for j in 0..n {
            for i in 0..n {
                if !self.0[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn check_zero_diagonal(&self) -> Result<()> {
        match (0..self.order()).find(|&i| self.0[(i, i)] != 0.0) {
            Some(i) => Err(Error::NonzeroDiagonal(i)),
            None => Ok(()),
        }
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// One eigenvalue cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenGroup {
    /// Mean of the clustered eigenvalues.
    pub value: f64,
    pub multiplicity: usize,
    /// `order × multiplicity`, orthonormal columns.
    pub basis: DMatrix<f64>,
}

/// Clustered spectral decomposition, groups in strictly decreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub groups: Vec<EigenGroup>,
    /// Absolute clustering tolerance that produced `groups`.
    pub tol: f64,
}

impl Spectrum {
    pub fn order(&self) -> usize {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }

    pub fn max(&self) -> &EigenGroup {
        self.groups.first().expect("empty spectrum")
    }

    pub fn min(&self) -> &EigenGroup {
        self.groups.last().expect("empty spectrum")
    }

    /// Eigenvalues repeated by multiplicity, decreasing.
    pub fn values(&self) -> Vec<f64> {
        self.groups
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.value, g.multiplicity))
            .collect()
    }

    /// `(value, eigenvector)` pairs, decreasing.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, DVector<f64>)> + '_ {
        self.groups.iter().flat_map(|g| {
            (0..g.multiplicity).map(move |k| (g.value, g.basis.column(k).into_owned()))
        })
    }

    /// `Σ value · basis · basisᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.order();
        let mut m = DMatrix::zeros(n, n);
        for g in &self.groups {
            m += &g.basis * g.basis.transpose() * g.value;
        }
        m
    }

    /// Index of the group within `tol` of `value`, if any.
    pub fn find(&self, value: f64) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| (g.value - value).abs() <= self.tol)
    }
}

/// Raw cyclic Jacobi on a row-major copy of `m`. Returns unsorted eigenvalues
/// and, if requested, the eigenvector matrix (columns).
fn jacobi(m: &DMatrix<f64>, want_vectors: bool) -> (Vec<f64>, Option<DMatrix<f64>>) {
    let n = m.nrows();
    let mut a: Vec<f64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });

    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let kp = c * akp - s * akq;
                    let kq = s * akp + c * akq;
                    a[k * n + p] = kp;
                    a[p * n + k] = kp;
                    a[k * n + q] = kq;
                    a[q * n + k] = kq;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i]).collect();
    let vectors = v.map(|v| DMatrix::from_row_slice(n, n, &v));
    (values, vectors)
}

/// Eigenvalues of `m` in decreasing order, without eigenvectors.
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    let (mut values, _) = jacobi(m.as_matrix(), false);
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Absolute threshold `tol * max(1, max|λ|)`.
pub fn relative_threshold(values: &[f64], tol: f64) -> f64 {
    tol * values.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()))
}

/// Clustered eigendecomposition with the default tolerance.
pub fn eigh(m: &SymMatrix) -> Result<Spectrum> {
    eigh_with(m, Tolerances::default().eig)
}

/// Clustered eigendecomposition; `tol` is relative to `max(1, max|λ|)`.
pub fn eigh_with(m: &SymMatrix, tol: f64) -> Result<Spectrum> {
    m.check_finite()?;
    let n = m.order();
    let (values, vectors) = jacobi(m.as_matrix(), true);
    let vectors = vectors.expect("vectors requested");

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let abs_tol = relative_threshold(&values, tol);

    let mut groups = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[idx[end - 1]] - values[idx[end]] <= abs_tol {
            end += 1;
        }
        let members = &idx[start..end];
        let value = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
        let cols: Vec<DVector<f64>> = members.iter().map(|&i| vectors.column(i).into_owned()).collect();
        let basis = DMatrix::from_columns(&orthonormalize(&cols));
        groups.push(EigenGroup {
            value,
            multiplicity: members.len(),
            basis,
        });
        start = end;
    }
    Ok(Spectrum { groups, tol: abs_tol })
}

/// Modified Gram–Schmidt. Columns whose remainder falls below `1e-10` of
/// their original norm are dropped.
pub fn orthonormalize(cols: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(cols.len());
    for c in cols {
        let norm0 = c.norm();
        let mut v = c.clone();
        for q in &out {
            let proj = q.dot(&v);
            v.axpy(-proj, q, 1.0);
        }
        let norm = v.norm();
        if norm > 1e-10 * norm0.max(f64::MIN_POSITIVE) {
            out.push(v / norm);
        }
    }
    out
}

/// PSD test and numerical rank: PSD iff `λ_min >= -tol·scale`, rank counts
/// `|λ| > tol·scale`, with `scale = max(1, max|λ|)`.
pub fn psd_rank(m: &SymMatrix, tol: f64) -> Result<(bool, usize)> {
    let values = eigenvalues(m)?;
    Ok(psd_rank_of_values(&values, tol))
}

pub fn psd_rank_of_values(values: &[f64], tol: f64) -> (bool, usize) {
    let thr = relative_threshold(values, tol);
    let is_psd = values.iter().all(|&x| x >= -thr);
    let rank = values.iter().filter(|&&x| x.abs() > thr).count();
    (is_psd, rank)
}

/// Spectral pseudoinverse; eigenvalues with `|λ| <= tol·scale` map to zero.
pub fn pinv(m: &SymMatrix, tol: f64) -> Result<SymMatrix> {
    let sp = eigh_with(m, tol)?;
    let thr = relative_threshold(&sp.values(), tol);
    let n = m.order();
    let mut inv = DMatrix::zeros(n, n);
    for g in sp.groups.iter().filter(|g| g.value.abs() > thr) {
        inv += &g.basis * g.basis.transpose() / g.value;
    }
    SymMatrix::new(inv)
}

/// Minimum-norm solution of `d·w = b`, rejecting right-hand sides outside
/// the column space (relative residual above `tol.residual`).
pub fn solve_in_colspace(d: &SymMatrix, b: &DVector<f64>, tol: &Tolerances) -> Result<DVector<f64>> {
    if b.len() != d.order() {
        return Err(Error::InvalidInput(format!(
            "vector length {} does not match matrix order {}",
            b.len(),
            d.order()
        )));
    }
    let w = pinv(d, tol.eig)?.as_matrix() * b;
    let bnorm = b.norm();
    let residual = (d.as_matrix() * &w - b).norm();
    if residual > tol.residual * bnorm.max(f64::MIN_POSITIVE) {
        return Err(Error::NotInColumnSpace {
            residual: residual / bnorm.max(f64::MIN_POSITIVE),
        });
    }
    Ok(w)
}

/// Factors a PSD matrix as `P·Pᵀ` with `rank` columns, largest eigenvalue first.
pub fn gram_factor(b: &SymMatrix, rank: usize, tol: f64) -> Result<DMatrix<f64>> {
    let n = b.order();
    if rank > n {
        return Err(Error::InvalidInput(format!(
            "rank {rank} exceeds matrix order {n}"
        )));
    }
    let sp = eigh_with(b, tol)?;
    let values = sp.values();
    let thr = relative_threshold(&values, tol);
    let min = *values.last().unwrap_or(&0.0);
    if min < -thr {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let cols: Vec<DVector<f64>> = sp
        .pairs()
        .take(rank)
        .map(|(lambda, v)| v * lambda.max(0.0).sqrt())
        .collect();
    Ok(if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    })
}
