//! Dense complex linear algebra helpers on top of nalgebra.

use crate::{Error, Result, C64};
use nalgebra::{DMatrix, DVector};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Determinant by LU factorisation.
pub fn det(m: &CMatrix) -> C64 {
    m.clone().lu().determinant()
}

/// Solve `m x = rhs`.
pub fn solve(m: &CMatrix, rhs: &CVector) -> Result<CVector> {
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::Singular("linear system is singular".into()))
}

/// Operator norm bound `max_ij |m_ij| * n`, used for relative residuals.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `|| m m^dagger - I ||_max`.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m * m.adjoint() - CMatrix::identity(n, n)))
}

/// Eigen-decomposition `u = V diag(lambda) V^dagger` of a unitary matrix with
/// orthonormal columns of `V`.
pub fn unitary_eigen(u: &CMatrix) -> Result<(Vec<C64>, CMatrix)> {
    let n = u.nrows();
    if n != u.ncols() {
        return Err(Error::Matrix("unitary_eigen needs a square matrix".into()));
    }
    if unitarity_defect(u) > 1e-9 {
        return Err(Error::Matrix("matrix is not unitary".into()));
    }
    // Cayley transform of a rotated copy is Hermitian with the same eigenvectors
    for phi in [0.377_f64, 1.234, 2.718, 4.0, 5.5] {
        let rot = C64::from_polar(1.0, phi);
        let id = CMatrix::identity(n, n);
        let Some(inv) = (&id - u.map(|z| z * rot)).try_inverse() else {
            continue;
        };
        let cay = (&id + u.map(|z| z * rot)) * inv;
        let h = cay.map(|z| z * C64::new(0.0, 1.0));
        let h = (&h + h.adjoint()).map(|z| z * 0.5);
        let v = h.symmetric_eigen().eigenvectors;
        let vals: Vec<C64> = (0..n)
            .map(|j| {
                let col = v.column(j);
                (col.adjoint() * u * col)[(0, 0)]
            })
            .collect();
        let lam = CMatrix::from_diagonal(&CVector::from_vec(vals.clone()));
        if max_abs(&(u * &v - &v * lam)) < 1e-11 {
            return Ok((vals, v));
        }
    }
    Err(Error::Matrix("unitary diagonalisation failed".into()))
}
