//! Orthonormal bases of `e⊥` and projection onto them.
//!
//! `V` is an `n × (n−1)` matrix with `Vᵀe = 0` and `VᵀV = I`. Two explicit
//! constructions are provided; any two valid choices differ by an orthogonal
//! change of basis, so spectra of projected matrices do not depend on it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum VScheme {
    /// First row `y·eᵀ`, remaining rows `I + x·E`, `y = −1/√n`, `x = −1/(n+√n)`.
    #[default]
    Dense,
    /// Block layout that isolates the first three nodes (needs `n >= 4`).
    Block,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VBasis {
    pub n: usize,
    pub columns: DMatrix<f64>,
    pub scheme: VScheme,
}

fn dense_v(n: usize) -> DMatrix<f64> {
    let nf = n as f64;
    let y = -1.0 / nf.sqrt();
    let x = -1.0 / (nf + nf.sqrt());
    DMatrix::from_fn(n, n - 1, |i, j| match i {
        0 => y,
        _ if i - 1 == j => 1.0 + x,
        _ => x,
    })
}

fn block_v(n: usize) -> DMatrix<f64> {
    let nf = n as f64;
    let a = ((nf - 3.0) / (3.0 * nf)).sqrt();
    let b = -(3.0 / (nf * (nf - 3.0))).sqrt();
    let v3 = dense_v(3);
    let mut v = DMatrix::zeros(n, n - 1);
    v.view_mut((0, 0), (3, 2)).copy_from(&v3);
    if n >= 5 {
        v.view_mut((3, 2), (n - 3, n - 4)).copy_from(&dense_v(n - 3));
    }
    for i in 0..3 {
        v[(i, n - 2)] = a;
    }
    for i in 3..n {
        v[(i, n - 2)] = b;
    }
    v
}

pub fn build_v(n: usize, scheme: VScheme) -> Result<VBasis> {
    let min = match scheme {
        VScheme::Dense => 2,
        VScheme::Block => 4,
    };
    if n < min {
        return Err(Error::InvalidInput(format!(
            "{scheme:?} basis needs n >= {min}, got {n}"
        )));
    }
    let columns = match scheme {
        VScheme::Dense => dense_v(n),
        VScheme::Block => block_v(n),
    };
    Ok(VBasis { n, columns, scheme })
}

impl VBasis {
    fn check_order(&self, m: &SymMatrix) -> Result<()> {
        if m.order() != self.n {
            return Err(Error::InvalidInput(format!(
                "matrix order {} does not match basis order {}",
                m.order(),
                self.n
            )));
        }
        Ok(())
    }

    /// `Vᵀ m V`.
    pub fn project(&self, m: &SymMatrix) -> Result<SymMatrix> {
        self.check_order(m)?;
        Ok(m.congruence(&self.columns))
    }

    /// `V x V ᵀ`, lifting an `(n−1)`-order matrix back to `n × n`.
    pub fn lift(&self, x: &SymMatrix) -> SymMatrix {
        let c = &self.columns * x.as_matrix() * self.columns.transpose();
        SymMatrix::new((&c + c.transpose()) * 0.5).expect("lift of a symmetric matrix")
    }
}

/// Projected Gram matrix `X = −½ Vᵀ d V` of a hollow symmetric matrix.
pub fn projected_gram(d: &SymMatrix, v: &VBasis) -> Result<SymMatrix> {
    d.check_zero_diagonal()?;
    Ok(v.project(d)?.scale(-0.5))
}

/// `Vᵀ a V`.
pub fn project_adjacency(a: &SymMatrix, v: &VBasis) -> Result<SymMatrix> {
    v.project(a)
}
