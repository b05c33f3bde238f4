//! Two-distance representations of a graph.
//!
//! With the first squared distance normalised to 1, a representation of `G`
//! with second squared distance `β` exists in `ℝ^r` iff `D = A + βĀ` is an
//! EDM of embedding dimension `r`. Its projected Gram matrix is
//!
//! ```text
//! 2X = β·I + (β − 1)·VᵀAV
//! ```
//!
//! so everything is governed by the extreme eigenvalues `μ_min`, `μ_max` of
//! `VᵀAV` and their eigenspaces:
//!
//! * feasible `β` lie in `[β_l, 1) ∪ (1, β_u]` with `β_l = μ_max/(μ_max+1)`
//!   and `β_u = |μ_min|/(|μ_min|−1)`; the lower endpoint degenerates to 0 when
//!   `μ_max = 0` (complete multipartite graphs), the upper one to `+∞` when
//!   `μ_min = −1` (cluster graphs);
//! * the rank of `X` drops by `m(μ_max)` at `β_l` and by `m(μ_min)` at `β_u`;
//! * `D_u` is spherical iff `A·V·U_u = μ_min·V·U_u`, likewise for `D_l`.
//!
//! J-spherical representations use the other normalisation: first squared
//! distance 2 and unit radius. The unique such representation has Gram
//! matrix `I − δĀ` with `δ = 1/λ₁(Ā)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::centering::{build_v, project_adjacency, VBasis, VScheme};
use crate::edm::{Centering, Configuration, EdmContext, SphereInfo};
use crate::error::{Error, Result};
use crate::graphs::{adjacency_matrix, classify, Graph, GraphClass};
use crate::linalg::{eigh_with, gram_factor, orthonormalize, EigenGroup, Spectrum, SymMatrix, Tolerances};

/// Which end of the feasible `β` range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        }
    }
}

/// Extreme eigenvalues of `VᵀAV` and their eigenspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectedSpectrum {
    pub mu_min: f64,
    pub mu_max: f64,
    pub m_min: usize,
    pub m_max: usize,
    /// Orthonormal eigenbasis for `μ_min`, `(n−1) × m_min`.
    pub u_u: DMatrix<f64>,
    /// Orthonormal eigenbasis for `μ_max`, `(n−1) × m_max`.
    pub u_l: DMatrix<f64>,
    /// The full clustered spectrum of `VᵀAV`.
    pub spectrum: Spectrum,
}

impl ProjectedSpectrum {
    fn from_spectrum(spectrum: Spectrum) -> Self {
        let (hi, lo) = (spectrum.max(), spectrum.min());
        Self {
            mu_min: lo.value,
            mu_max: hi.value,
            m_min: lo.multiplicity,
            m_max: hi.multiplicity,
            u_u: lo.basis.clone(),
            u_l: hi.basis.clone(),
            spectrum,
        }
    }

    /// Every group except `μ_min`: the `(W_u, Λ_u)` part of the decomposition
    /// `VᵀAV = μ_min·U_u·U_uᵀ + W_u·Λ_u·W_uᵀ`.
    pub fn rest(&self) -> &[EigenGroup] {
        let k = self.spectrum.groups.len();
        &self.spectrum.groups[..k - 1]
    }
}

/// Spectrum of `VᵀAV` for a `k`-regular graph: the spectrum of `A` with one
/// copy of `k` (eigenvector `e`) removed, eigenvectors mapped through `Vᵀ`.
fn projected_spectrum_regular(a: &SymMatrix, k: f64, v: &VBasis, tol: f64) -> Result<Spectrum> {
    let n = a.order();
    let sp = eigh_with(a, tol)?;
    let e = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let vt = v.columns.transpose();
    let mut groups = Vec::with_capacity(sp.groups.len());
    for g in sp.groups {
        let basis = if (g.value - k).abs() <= sp.tol {
            let mut cols = vec![e.clone()];
            cols.extend(g.basis.column_iter().map(|c| c.into_owned()));
            let mut q = orthonormalize(&cols);
            q.remove(0);
            q.truncate(g.multiplicity - 1);
            if q.is_empty() {
                continue;
            }
            DMatrix::from_columns(&q)
        } else {
            g.basis
        };
        groups.push(EigenGroup {
            value: g.value,
            multiplicity: basis.ncols(),
            basis: &vt * basis,
        });
    }
    Ok(Spectrum { groups, tol: sp.tol })
}

/// Closed or half-open interval of feasible second distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaInterval {
    pub lo: f64,
    pub lo_closed: bool,
    /// `None` is `+∞`.
    pub hi: Option<f64>,
    pub hi_closed: bool,
}

impl BetaInterval {
    pub fn contains(&self, beta: f64) -> bool {
        let above = if self.lo_closed { beta >= self.lo } else { beta > self.lo };
        let below = match self.hi {
            None => true,
            Some(hi) if self.hi_closed => beta <= hi,
            Some(hi) => beta < hi,
        };
        above && below
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaIntervals {
    pub intervals: Vec<BetaInterval>,
}

impl BetaIntervals {
    pub fn contains(&self, beta: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(beta))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanRepresentation {
    pub beta: f64,
    /// `A + βĀ`.
    pub d: SymMatrix,
    pub rank: usize,
    pub config: Configuration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JSpherical {
    /// `λ₁(Ā)`.
    pub lambda1: f64,
    pub multiplicity: usize,
    pub delta: f64,
    /// Second squared distance `2 + 2δ`.
    pub beta: f64,
    pub dim_j: usize,
    /// `2(E − I) + 2δĀ`.
    pub d: SymMatrix,
    /// Unit-norm rows, origin at the sphere center.
    pub config: Configuration,
}

/// Everything the CLI reports for one graph.
///
/// `beta_*`, `rho_*` and `dim_e`/`dim_s` use first squared distance 1;
/// `delta`, `beta_j` and `dim_j` use first squared distance 2 on the unit
/// sphere. Both first distances are recorded in `alpha_euclidean` and
/// `alpha_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReprReport {
    pub n: usize,
    pub class: GraphClass,
    pub mu_min: f64,
    pub mu_max: f64,
    pub m_min: usize,
    pub m_max: usize,
    pub alpha_euclidean: f64,
    pub beta_l: Option<f64>,
    pub beta_u: Option<f64>,
    pub beta_intervals: BetaIntervals,
    pub dim_e: usize,
    pub dim_e_beta: f64,
    pub dim_s: usize,
    pub dim_s_beta: f64,
    pub dim_s_rho: f64,
    pub spherical_at_l: bool,
    pub spherical_at_u: bool,
    pub rho_l: Option<f64>,
    pub rho_u: Option<f64>,
    pub lambda1_complement: f64,
    pub m_lambda1_complement: usize,
    pub alpha_j: f64,
    pub delta: f64,
    pub beta_j: f64,
    pub dim_j: usize,
    pub lower_bound_e: f64,
    pub lower_bound_s: f64,
}

/// Per-graph state: adjacency matrices, one basis `V`, the projected
/// spectrum and the top of the complement spectrum, all computed once.
#[derive(Clone, Debug)]
pub struct GraphAnalysis {
    pub graph: Graph,
    pub class: GraphClass,
    pub a: SymMatrix,
    pub abar: SymMatrix,
    pub ctx: EdmContext,
    pub ps: ProjectedSpectrum,
    /// Clustered spectrum of `Ā`.
    pub complement_spectrum: Spectrum,
}

impl GraphAnalysis {
    pub fn new(g: &Graph, tol: Tolerances) -> Result<Self> {
        Self::with_scheme(g, tol, VScheme::Dense)
    }

    pub fn with_scheme(g: &Graph, tol: Tolerances, scheme: VScheme) -> Result<Self> {
        let n = g.order();
        if n < 2 {
            return Err(Error::InvalidInput("representations need n >= 2".into()));
        }
        let v = build_v(n, scheme)?;
        let a = adjacency_matrix(g);
        let abar = adjacency_matrix(&g.complement());
        let spectrum = match g.regular_degree() {
            Some(k) => projected_spectrum_regular(&a, k as f64, &v, tol.eig)?,
            None => eigh_with(&project_adjacency(&a, &v)?, tol.eig)?,
        };
        let complement_spectrum = eigh_with(&abar, tol.eig)?;
        Ok(Self {
            graph: g.clone(),
            class: classify(g),
            a,
            abar,
            ctx: EdmContext::with_basis(v, tol),
            ps: ProjectedSpectrum::from_spectrum(spectrum),
            complement_spectrum,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.order()
    }

    pub fn tol(&self) -> &Tolerances {
        &self.ctx.tol
    }

    pub fn v(&self) -> &VBasis {
        &self.ctx.v
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.graph.is_degenerate() {
            Err(Error::Degenerate)
        } else {
            Ok(())
        }
    }

    /// `μ_max > 0`: the lower endpoint `β_l` exists.
    pub fn has_lower(&self) -> bool {
        self.ps.mu_max > self.ps.spectrum.tol
    }

    /// `μ_min < −1`: the upper endpoint `β_u` is finite.
    pub fn has_upper(&self) -> bool {
        self.ps.mu_min < -1.0 - self.ps.spectrum.tol
    }

    pub fn beta_l(&self) -> Option<f64> {
        let mu = self.ps.mu_max;
        self.has_lower().then(|| mu / (mu + 1.0))
    }

    pub fn beta_u(&self) -> Option<f64> {
        let mu = self.ps.mu_min.abs();
        self.has_upper().then(|| mu / (mu - 1.0))
    }

    pub fn endpoint(&self, side: Side) -> Result<f64> {
        match side {
            Side::Lower => self.beta_l(),
            Side::Upper => self.beta_u(),
        }
        .ok_or(Error::MissingEndpoint(side.name()))
    }

    pub fn beta_feasible_set(&self) -> Result<BetaIntervals> {
        self.require_nondegenerate()?;
        let lower = match self.beta_l() {
            Some(lo) => BetaInterval { lo, lo_closed: true, hi: Some(1.0), hi_closed: false },
            None => BetaInterval { lo: 0.0, lo_closed: false, hi: Some(1.0), hi_closed: false },
        };
        let upper = BetaInterval {
            lo: 1.0,
            lo_closed: false,
            hi: self.beta_u(),
            hi_closed: self.beta_u().is_some(),
        };
        Ok(BetaIntervals {
            intervals: vec![lower, upper],
        })
    }

    /// A feasible `β` strictly inside `(β_l, 1)`, where `X` has full rank.
    pub fn interior_beta(&self) -> f64 {
        (self.beta_l().unwrap_or(0.0) + 1.0) / 2.0
    }

    /// `(dim_E, witness β)`; ties go to `β_l`.
    pub fn dim_euclidean(&self) -> Result<(usize, f64)> {
        self.require_nondegenerate()?;
        let n = self.n();
        let lower = self.beta_l().map(|b| (n - 1 - self.ps.m_max, b));
        let upper = self.beta_u().map(|b| (n - 1 - self.ps.m_min, b));
        match (lower, upper) {
            (Some(l), Some(u)) => Ok(if u.0 < l.0 { u } else { l }),
            (Some(x), None) | (None, Some(x)) => Ok(x),
            (None, None) => Err(Error::Inconsistent(format!(
                "no finite endpoint with mu_max = {}, mu_min = {}",
                self.ps.mu_max, self.ps.mu_min
            ))),
        }
    }

    /// `‖A·Z − μ·Z‖_max` for the Gale matrix `Z = V·U` at the given endpoint.
    pub fn endpoint_residual(&self, side: Side) -> Result<f64> {
        self.endpoint(side)?;
        let (u, mu) = match side {
            Side::Lower => (&self.ps.u_l, self.ps.mu_max),
            Side::Upper => (&self.ps.u_u, self.ps.mu_min),
        };
        let z = &self.v().columns * u;
        Ok((self.a.as_matrix() * &z - &z * mu).amax())
    }

    /// Whether `A + β_endpoint·Ā` is a spherical EDM.
    pub fn endpoint_sphericity(&self, side: Side) -> Result<bool> {
        let residual = self.endpoint_residual(side)?;
        let bound = self.tol().residual * self.a.max_abs().max(1.0) * (self.n() as f64).sqrt();
        Ok(residual <= bound)
    }

    fn sphericity_or_false(&self, side: Side) -> bool {
        self.endpoint_sphericity(side).unwrap_or(false)
    }

    /// `A + βĀ`.
    pub fn two_distance_matrix(&self, beta: f64) -> SymMatrix {
        self.a.add_scaled(beta, &self.abar)
    }

    pub fn sphere_at(&self, beta: f64) -> Result<Option<SphereInfo>> {
        self.ctx.spherical_info(&self.two_distance_matrix(beta))
    }

    /// `(dim_S, witness β, radius at the witness)`.
    pub fn dim_spherical(&self) -> Result<(usize, f64, f64)> {
        self.require_nondegenerate()?;
        let n = self.n();
        let lower = self
            .beta_l()
            .filter(|_| self.sphericity_or_false(Side::Lower))
            .map(|b| (n - 1 - self.ps.m_max, b));
        let upper = self
            .beta_u()
            .filter(|_| self.sphericity_or_false(Side::Upper))
            .map(|b| (n - 1 - self.ps.m_min, b));
        let (r, beta) = match (lower, upper) {
            (Some(l), Some(u)) => {
                if u.0 < l.0 {
                    u
                } else {
                    l
                }
            }
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => (n - 1, self.interior_beta()),
        };
        let sphere = self.sphere_at(beta)?.ok_or_else(|| {
            Error::Inconsistent(format!("witness beta = {beta} is not spherical"))
        })?;
        Ok((r, beta, sphere.radius))
    }

    /// Radius of `D_u` from the spectral decomposition of `VᵀAV`:
    ///
    /// ```text
    /// ρ² = (eᵀAV·W_u(μ_min·I − Λ_u)⁻¹W_uᵀ·VᵀAe + μ_min(n² − n) + eᵀAe) / (2n²(μ_min + 1))
    /// ```
    pub fn radius_at_beta_u_closed_form(&self) -> Result<f64> {
        if !self.endpoint_sphericity(Side::Upper)? {
            return Err(Error::NotSpherical);
        }
        let n = self.n() as f64;
        let mu = self.ps.mu_min;
        let ae = self.a.as_matrix() * DVector::from_element(self.n(), 1.0);
        let y = self.v().columns.transpose() * &ae;
        let quad: f64 = self
            .ps
            .rest()
            .iter()
            .map(|g| (g.basis.transpose() * &y).norm_squared() / (mu - g.value))
            .sum();
        let rho2 = (quad + mu * (n * n - n) + ae.sum()) / (2.0 * n * n * (mu + 1.0));
        Ok(rho2.sqrt())
    }

    /// Representation with second squared distance `beta`, centered at the
    /// centroid.
    pub fn euclidean_representation(&self, beta: f64) -> Result<EuclideanRepresentation> {
        self.require_nondegenerate()?;
        if !(beta > 0.0 && beta.is_finite()) || beta == 1.0 {
            return Err(Error::InvalidInput(format!(
                "beta must be positive, finite and different from 1 (got {beta})"
            )));
        }
        let d = self.two_distance_matrix(beta);
        let check = self.ctx.is_edm(&d)?;
        if !check.is_edm {
            return Err(Error::Infeasible {
                beta,
                eigenvalue: check.min_eigenvalue(),
            });
        }
        let config = self.ctx.recover_configuration(&d, Centering::Centroid)?;
        Ok(EuclideanRepresentation {
            beta,
            rank: check.embedding_dim,
            d,
            config,
        })
    }

    /// Spherical representation at an endpoint, centered at the circumcenter.
    pub fn spherical_representation(&self, side: Side) -> Result<EuclideanRepresentation> {
        self.require_nondegenerate()?;
        let beta = self.endpoint(side)?;
        if !self.endpoint_sphericity(side)? {
            return Err(Error::NotSpherical);
        }
        let d = self.two_distance_matrix(beta);
        let config = self.ctx.recover_configuration(&d, Centering::Circumcenter)?;
        Ok(EuclideanRepresentation {
            beta,
            rank: config.dim(),
            d,
            config,
        })
    }

    /// `(λ₁(Ā), multiplicity)`.
    pub fn lambda1_complement(&self) -> (f64, usize) {
        let top = self.complement_spectrum.max();
        (top.value, top.multiplicity)
    }

    pub fn j_spherical(&self) -> Result<JSpherical> {
        self.require_nondegenerate()?;
        let n = self.n();
        let (lambda1, multiplicity) = self.lambda1_complement();
        let delta = 1.0 / lambda1;
        let dim_j = n - multiplicity;
        let b = SymMatrix::identity(n).add_scaled(-delta, &self.abar);
        let points = gram_factor(&b, dim_j, self.tol().psd)?;
        let d = SymMatrix::ones(n)
            .add_scaled(-1.0, &SymMatrix::identity(n))
            .scale(2.0)
            .add_scaled(2.0 * delta, &self.abar);
        Ok(JSpherical {
            lambda1,
            multiplicity,
            delta,
            beta: 2.0 + 2.0 * delta,
            dim_j,
            d,
            config: Configuration {
                points,
                centering: Centering::Circumcenter,
            },
        })
    }

    /// Full report. Endpoint sphericity is cross-checked against the rank
    /// test on `D_l` / `D_u`; a disagreement is an [`Error::Inconsistent`].
    pub fn report(&self) -> Result<ReprReport> {
        self.require_nondegenerate()?;
        let n = self.n();
        let mut rho = [None, None];
        let mut spherical = [false, false];
        for (k, side) in [Side::Lower, Side::Upper].into_iter().enumerate() {
            let Some(beta) = self.endpoint(side).ok() else { continue };
            let by_residual = self.endpoint_sphericity(side)?;
            let sphere = self.sphere_at(beta)?;
            if by_residual != sphere.is_some() {
                return Err(Error::Inconsistent(format!(
                    "{} endpoint: eigenvector residual {:e} disagrees with the rank test",
                    side.name(),
                    self.endpoint_residual(side)?
                )));
            }
            spherical[k] = by_residual;
            rho[k] = sphere.map(|s| s.radius);
        }
        let (dim_e, dim_e_beta) = self.dim_euclidean()?;
        let (dim_s, dim_s_beta, dim_s_rho) = self.dim_spherical()?;
        let (lambda1, m1) = self.lambda1_complement();
        let delta = 1.0 / lambda1;
        let (lower_bound_e, lower_bound_s) = lower_bounds(n);
        Ok(ReprReport {
            n,
            class: self.class.clone(),
            mu_min: self.ps.mu_min,
            mu_max: self.ps.mu_max,
            m_min: self.ps.m_min,
            m_max: self.ps.m_max,
            alpha_euclidean: 1.0,
            beta_l: self.beta_l(),
            beta_u: self.beta_u(),
            beta_intervals: self.beta_feasible_set()?,
            dim_e,
            dim_e_beta,
            dim_s,
            dim_s_beta,
            dim_s_rho,
            spherical_at_l: spherical[0],
            spherical_at_u: spherical[1],
            rho_l: rho[0],
            rho_u: rho[1],
            lambda1_complement: lambda1,
            m_lambda1_complement: m1,
            alpha_j: 2.0,
            delta,
            beta_j: 2.0 + 2.0 * delta,
            dim_j: n - m1,
            lower_bound_e,
            lower_bound_s,
        })
    }
}

fn analysis(g: &Graph) -> Result<GraphAnalysis> {
    GraphAnalysis::new(g, Tolerances::default())
}

pub fn projected_spectrum(g: &Graph) -> Result<ProjectedSpectrum> {
    Ok(analysis(g)?.ps)
}

pub fn beta_feasible_set(g: &Graph) -> Result<BetaIntervals> {
    analysis(g)?.beta_feasible_set()
}

pub fn dim_euclidean(g: &Graph) -> Result<(usize, f64)> {
    analysis(g)?.dim_euclidean()
}

pub fn endpoint_sphericity(g: &Graph, side: Side) -> Result<bool> {
    analysis(g)?.endpoint_sphericity(side)
}

pub fn dim_spherical(g: &Graph) -> Result<(usize, f64, f64)> {
    analysis(g)?.dim_spherical()
}

pub fn radius_at_beta_u_closed_form(g: &Graph) -> Result<f64> {
    analysis(g)?.radius_at_beta_u_closed_form()
}

pub fn j_spherical(g: &Graph) -> Result<JSpherical> {
    analysis(g)?.j_spherical()
}

pub fn euclidean_representation(g: &Graph, beta: f64) -> Result<EuclideanRepresentation> {
    analysis(g)?.euclidean_representation(beta)
}

/// Whether the J-spherical representations of `g1` and `g2` share their
/// second squared distance, i.e. `λ₁(Ā₁) = λ₁(Ā₂)`.
pub fn same_second_distance(g1: &Graph, g2: &Graph) -> Result<bool> {
    let (a1, a2) = (analysis(g1)?, analysis(g2)?);
    a1.require_nondegenerate()?;
    a2.require_nondegenerate()?;
    let (l1, l2) = (a1.lambda1_complement().0, a2.lambda1_complement().0);
    Ok((l1 - l2).abs() <= a1.tol().eig * l1.abs().max(l2.abs()).max(1.0))
}

/// Lower bounds on `dim_E` and `dim_S` from the maximum size of two-distance
/// sets: `n <= (r+1)(r+2)/2` and `n <= r(r+3)/2` (spherical).
pub fn lower_bounds(n: usize) -> (f64, f64) {
    let n = n as f64;
    (
        0.5 * ((8.0 * n + 1.0).sqrt() - 3.0),
        0.5 * ((8.0 * n + 9.0).sqrt() - 3.0),
    )
}

/// Full report with default tolerances.
pub fn analyze(g: &Graph, tol: Tolerances) -> Result<ReprReport> {
    GraphAnalysis::new(g, tol)?.report()
}
