//! Euclidean distance matrices.
//!
//! A hollow symmetric `D` is an EDM of embedding dimension `r` iff its
//! projected Gram matrix `X = −½ VᵀDV` is PSD of rank `r`. This module builds
//! on that test to recover point configurations (origin at the centroid or at
//! the circumcenter), Gale matrices, and sphere data for spherical EDMs.
//!
//! Sphericity is decided by `rank(D) == r + 1`. Two further characterizations
//! (`D·Z = 0` for a Gale matrix `Z`, and `eᵀw > 0` for `Dw = e`) are evaluated
//! alongside and any disagreement is reported as [`Error::Inconsistent`].

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::centering::{build_v, projected_gram, VBasis, VScheme};
use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues, gram_factor, psd_rank_of_values, relative_threshold, solve_in_colspace, eigh_with,
    Spectrum, SymMatrix, Tolerances,
};

#[derive(Clone, Debug, PartialEq)]
pub struct EdmCheck {
    pub is_edm: bool,
    pub embedding_dim: usize,
    /// Clustered spectrum of the projected Gram matrix.
    pub x_spectrum: Spectrum,
}

impl EdmCheck {
    pub fn min_eigenvalue(&self) -> f64 {
        self.x_spectrum.min().value
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereInfo {
    /// `(1 / (2 eᵀw))^{1/2}`.
    pub radius: f64,
    /// `(aᵀa + eᵀDe / (2n²))^{1/2}` from the center solve.
    pub radius_from_center: f64,
    /// Sphere center `a`, in the coordinates of the centroid configuration.
    pub center: DVector<f64>,
    /// Any solution of `Dw = e`.
    pub w: DVector<f64>,
    pub ew: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaleMatrix {
    /// `n × (n − r − 1)`.
    pub z: DMatrix<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Centering {
    /// Origin at the centroid: `Pᵀe = 0`.
    Centroid,
    /// Origin at the center of the circumscribed sphere: `Pᵀw = 0`.
    Circumcenter,
}

/// Point coordinates, one row per node.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub points: DMatrix<f64>,
    pub centering: Centering,
}

impl Configuration {
    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        (self.points.row(i) - self.points.row(j)).norm_squared()
    }

    /// Matrix of pairwise squared distances.
    pub fn distance_matrix(&self) -> SymMatrix {
        SymMatrix::from_fn(self.len(), |i, j| {
            if i == j {
                0.0
            } else {
                self.squared_distance(i, j)
            }
        })
    }
}

/// EDM operations sharing one basis of `e⊥` and one set of tolerances.
#[derive(Clone, Debug)]
pub struct EdmContext {
    pub v: VBasis,
    pub tol: Tolerances,
}

impl EdmContext {
    pub fn new(n: usize, tol: Tolerances) -> Result<Self> {
        Ok(Self {
            v: build_v(n, VScheme::Dense)?,
            tol,
        })
    }

    pub fn with_basis(v: VBasis, tol: Tolerances) -> Self {
        Self { v, tol }
    }

    pub fn is_edm(&self, d: &SymMatrix) -> Result<EdmCheck> {
        let x = projected_gram(d, &self.v)?;
        let x_spectrum = eigh_with(&x, self.tol.eig)?;
        let (is_edm, embedding_dim) = psd_rank_of_values(&x_spectrum.values(), self.tol.psd);
        Ok(EdmCheck {
            is_edm,
            embedding_dim,
            x_spectrum,
        })
    }

    fn require_edm(&self, d: &SymMatrix) -> Result<EdmCheck> {
        let check = self.is_edm(d)?;
        if !check.is_edm {
            return Err(Error::NotEdm {
                min_eigenvalue: check.min_eigenvalue(),
            });
        }
        Ok(check)
    }

    /// Centroid configuration `V·U·Λ^{1/2}` from the top `r` eigenpairs of `X`.
    fn centroid_points(&self, check: &EdmCheck) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = check
            .x_spectrum
            .pairs()
            .take(check.embedding_dim)
            .map(|(lambda, u)| &self.v.columns * u * lambda.max(0.0).sqrt())
            .collect();
        if cols.is_empty() {
            DMatrix::zeros(self.v.n, 0)
        } else {
            DMatrix::from_columns(&cols)
        }
    }

    pub fn recover_configuration(&self, d: &SymMatrix, centering: Centering) -> Result<Configuration> {
        let check = self.require_edm(d)?;
        let points = match centering {
            Centering::Centroid => self.centroid_points(&check),
            Centering::Circumcenter => {
                let sphere = self.spherical_info(d)?.ok_or(Error::NotSpherical)?;
                let n = d.order();
                let b = if (2.0 * sphere.ew - 1.0).abs() <= self.tol.residual {
                    // unit radius: B = E − D/2
                    SymMatrix::ones(n).add_scaled(-0.5, d)
                } else {
                    // B = −½ (I − e sᵀ) D (I − s eᵀ), s = w / eᵀw
                    let s = &sphere.w / sphere.ew;
                    let e = DVector::from_element(n, 1.0);
                    let left = DMatrix::identity(n, n) - &e * s.transpose();
                    let b = &left * d.as_matrix() * left.transpose() * -0.5;
                    SymMatrix::new((&b + b.transpose()) * 0.5)?
                };
                gram_factor(&b, check.embedding_dim, self.tol.psd)?
            }
        };
        Ok(Configuration { points, centering })
    }

    pub fn gale_matrix(&self, d: &SymMatrix) -> Result<GaleMatrix> {
        let check = self.require_edm(d)?;
        self.gale_from_check(&check)
    }

    fn gale_from_check(&self, check: &EdmCheck) -> Result<GaleMatrix> {
        let n = self.v.n;
        if check.embedding_dim + 1 >= n {
            return Err(Error::FullEmbeddingDimension);
        }
        let thr = relative_threshold(&check.x_spectrum.values(), self.tol.psd);
        let cols: Vec<DVector<f64>> = check
            .x_spectrum
            .groups
            .iter()
            .filter(|g| g.value.abs() <= thr)
            .flat_map(|g| g.basis.column_iter().map(|c| &self.v.columns * c))
            .collect();
        if cols.len() != n - check.embedding_dim - 1 {
            return Err(Error::Inconsistent(format!(
                "Gale matrix has {} columns, expected {}",
                cols.len(),
                n - check.embedding_dim - 1
            )));
        }
        Ok(GaleMatrix {
            z: DMatrix::from_columns(&cols),
        })
    }

    /// Sphere data for a spherical EDM, `None` when the generating points do
    /// not lie on a common sphere.
    pub fn spherical_info(&self, d: &SymMatrix) -> Result<Option<SphereInfo>> {
        let check = self.require_edm(d)?;
        let n = d.order();
        let r = check.embedding_dim;
        if r == 0 {
            // all points coincide
            return Ok(None);
        }

        let (_, rank_d) = psd_rank_of_values(&eigenvalues(d)?, self.tol.psd);
        let by_rank = r + 1 == n || rank_d == r + 1;

        let e = DVector::from_element(n, 1.0);
        let w = solve_in_colspace(d, &e, &self.tol)?;
        let ew = e.dot(&w);
        let by_ew = ew > self.tol.residual * w.norm() * (n as f64).sqrt();

        if by_ew != by_rank {
            return Err(Error::Inconsistent(format!(
                "rank(D) = {rank_d} with r = {r} disagrees with eᵀw = {ew:e}"
            )));
        }
        if r + 1 < n {
            let z = self.gale_from_check(&check)?.z;
            let dz = (d.as_matrix() * z).amax();
            let by_gale = dz <= self.tol.residual * d.max_abs().max(1.0) * (n as f64).sqrt();
            if by_gale != by_rank {
                return Err(Error::Inconsistent(format!(
                    "rank(D) = {rank_d} with r = {r} disagrees with |DZ| = {dz:e}"
                )));
            }
        }
        if !by_rank {
            return Ok(None);
        }

        let radius = (0.5 / ew).sqrt();

        // P a = ½ (I − E/n) diag(PPᵀ)
        let p = self.centroid_points(&check);
        let sq = DVector::from_iterator(n, p.row_iter().map(|row| row.norm_squared()));
        let rhs = (&sq - DVector::from_element(n, sq.mean())) * 0.5;
        let ptp = p.transpose() * &p;
        let center = ptp
            .cholesky()
            .ok_or_else(|| Error::Inconsistent("configuration is rank deficient".into()))?
            .solve(&(p.transpose() * &rhs));
        let ede = d.as_matrix().sum();
        let radius_from_center = (center.norm_squared() + ede / (2.0 * (n * n) as f64)).sqrt();

        Ok(Some(SphereInfo {
            radius,
            radius_from_center,
            center,
            w,
            ew,
        }))
    }
}

fn context_for(d: &SymMatrix) -> Result<EdmContext> {
    EdmContext::new(d.order(), Tolerances::default())
}

/// EDM test with default tolerances.
pub fn is_edm(d: &SymMatrix) -> Result<EdmCheck> {
    context_for(d)?.is_edm(d)
}

pub fn recover_configuration(d: &SymMatrix, centering: Centering) -> Result<Configuration> {
    context_for(d)?.recover_configuration(d, centering)
}

pub fn gale_matrix(d: &SymMatrix) -> Result<GaleMatrix> {
    context_for(d)?.gale_matrix(d)
}

pub fn spherical_info(d: &SymMatrix) -> Result<Option<SphereInfo>> {
    context_for(d)?.spherical_info(d)
}

/// Radius of a regular EDM (one with `e` as an eigenvector), `None` otherwise.
/// `d` is assumed to be an EDM.
pub fn is_regular_edm(d: &SymMatrix, tol: &Tolerances) -> Option<f64> {
    let n = d.order();
    let de = d.as_matrix() * DVector::from_element(n, 1.0);
    let mean = de.mean();
    let spread = de.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    (spread <= tol.residual * mean.abs().max(1.0))
        .then(|| (de.sum() / (2.0 * (n * n) as f64)).sqrt())
}
