//! Comparing column spaces through principal angles.

use crate::error::Result;
use crate::linalg::{lstsq, orthonormal_basis, svd, Matrix};

/// Relative tolerance used to decide the dimension of an evaluation subspace.
pub const SUBSPACE_RANK_TOL: f64 = 1e-10;

/// Sine of the largest principal angle between the column spaces of `a` and
/// `b`, i.e. `‖Q_b − Q_a Q_aᵀ Q_b‖₂`. Spaces of different dimension are at
/// distance 1; two empty spaces at distance 0.
pub fn subspace_gap(a: &Matrix, b: &Matrix) -> Result<f64> {
    let qa = orthonormal_basis(a, SUBSPACE_RANK_TOL)?;
    let qb = orthonormal_basis(b, SUBSPACE_RANK_TOL)?;
    if qa.ncols() != qb.ncols() {
        return Ok(1.0);
    }
    if qa.ncols() == 0 {
        return Ok(0.0);
    }
    let resid = &qb - &qa * (qa.transpose() * &qb);
    let s = svd(&resid)?;
    Ok(s.singular_values.first().copied().unwrap_or(0.0).min(1.0))
}

/// Relative residual of expressing the columns of `b` in the columns of `a`:
/// `‖A W − B‖ / ‖B‖` for the least-squares `W` (zero when `B = 0`).
pub fn span_residual(a: &Matrix, b: &Matrix) -> Result<f64> {
    let nb = b.norm();
    if nb == 0.0 {
        return Ok(0.0);
    }
    if a.ncols() == 0 {
        return Ok(1.0);
    }
    let (_, r) = lstsq(a, b, SUBSPACE_RANK_TOL)?;
    Ok(r / nb)
}
