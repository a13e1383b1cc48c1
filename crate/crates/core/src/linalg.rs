//! Dense symmetric eigensolvers, SVD and tolerance-controlled least squares.
//!
//! Everything here is built on cyclic Jacobi rotations. Jacobi leaves exact
//! zeros and already-decoupled blocks untouched, so structured inputs (block
//! diagonal Gram matrices, exactly vanishing columns) come back with clean,
//! reproducible eigenvectors instead of an arbitrary rotation of a degenerate
//! eigenspace.

use nalgebra::{DMatrix, DVector};

use crate::error::{AviError, Result};

pub type Matrix = DMatrix<f64>;

/// Default relative rank tolerance for pseudo-inverses and whitening.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;
const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenpairs sorted by descending eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    /// Column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: Matrix,
    pub retained_rank: usize,
}

impl EigResult {
    fn empty(dim: usize) -> Self {
        EigResult {
            eigenvalues: Vec::new(),
            eigenvectors: Matrix::zeros(dim, 0),
            retained_rank: 0,
        }
    }
}

/// Thin SVD `M = U diag(s) Vᵀ` with singular values sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

fn check_finite(m: &Matrix, what: &'static str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(AviError::NonFinite(what))
    }
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

fn symmetrized(a: &Matrix) -> Result<Matrix> {
    if a.nrows() != a.ncols() {
        return Err(AviError::Dimension(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    check_finite(a, "symmetric eigenproblem input")?;
    let scale = max_abs(a);
    if scale > 0.0 {
        let mut asym = 0.0_f64;
        for i in 0..a.nrows() {
            for j in (i + 1)..a.ncols() {
                asym = asym.max((a[(i, j)] - a[(j, i)]).abs());
            }
        }
        let rel = asym / scale;
        if rel > SYMMETRY_TOL {
            return Err(AviError::Asymmetric(rel));
        }
    }
    Ok((a + a.transpose()) * 0.5)
}

/// Flip the column so that its entry of largest magnitude is positive.
/// Near-ties (within 1e-12 relative) resolve to the first such entry.
pub fn canonicalize_sign(v: &mut Matrix, col: usize) {
    let peak = v.column(col).iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    if peak == 0.0 {
        return;
    }
    let lead = v
        .column(col)
        .iter()
        .copied()
        .find(|x| x.abs() >= peak * (1.0 - 1e-12))
        .unwrap_or(0.0);
    if lead < 0.0 {
        v.column_mut(col).neg_mut();
    }
}

/// Cyclic Jacobi on a symmetric matrix. Returns unsorted (eigenvalues, eigenvectors).
fn jacobi(mut a: Matrix) -> (Vec<f64>, Matrix) {
    let n = a.nrows();
    let mut v = Matrix::identity(n, n);
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].abs();
            }
        }
        if off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let g = 100.0 * apq.abs();
                if sweep > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_finite() {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp;
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)]).collect(), v)
}

/// Sort eigenpairs descending (stable for ties), apply the sign convention.
fn sorted_pairs(values: Vec<f64>, vectors: &Matrix) -> (Vec<f64>, Matrix) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut out = Matrix::zeros(vectors.nrows(), order.len());
    for (dst, &src) in order.iter().enumerate() {
        out.set_column(dst, &vectors.column(src));
        canonicalize_sign(&mut out, dst);
    }
    (order.iter().map(|&i| values[i]).collect(), out)
}

/// Eigendecomposition of a symmetric matrix.
pub fn sym_eig(a: &Matrix) -> Result<EigResult> {
    let a = symmetrized(a)?;
    let n = a.nrows();
    let (values, vectors) = jacobi(a);
    let (eigenvalues, eigenvectors) = sorted_pairs(values, &vectors);
    Ok(EigResult {
        eigenvalues,
        eigenvectors,
        retained_rank: n,
    })
}

/// Solve `A V = B V Λ` on the numerical range of `B`.
///
/// `B` is whitened on its eigenvectors with eigenvalue above
/// `rank_tol * σ_max`; null directions of `B` are discarded. The returned
/// vectors satisfy `VᵀBV = I` and `VᵀAV = Λ`. Eigenvalues are clamped at zero
/// since both inputs are Gram matrices.
pub fn gen_sym_eig(a: &Matrix, b: &Matrix, rank_tol: f64) -> Result<EigResult> {
    if a.shape() != b.shape() {
        return Err(AviError::Dimension(format!(
            "generalized eigenproblem with A {:?} and B {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = a.nrows();
    let a = symmetrized(a)?;
    let bdec = sym_eig(b)?;
    let sigma_max = bdec.eigenvalues.first().copied().unwrap_or(0.0);
    if !(sigma_max > 0.0) {
        return Ok(EigResult::empty(n));
    }
    let keep: Vec<usize> = bdec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rank_tol * sigma_max)
        .map(|(i, _)| i)
        .collect();
    let r = keep.len();
    let mut whiten = Matrix::zeros(n, r);
    for (j, &i) in keep.iter().enumerate() {
        let scale = 1.0 / bdec.eigenvalues[i].sqrt();
        whiten.set_column(j, &(bdec.eigenvectors.column(i) * scale));
    }
    let reduced = whiten.transpose() * &a * &whiten;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let (values, u) = jacobi(reduced);
    let mapped = &whiten * u;
    let (mut eigenvalues, eigenvectors) = sorted_pairs(values, &mapped);
    for l in eigenvalues.iter_mut() {
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(EigResult {
        eigenvalues,
        eigenvectors,
        retained_rank: r,
    })
}

/// [`gen_sym_eig`] for `A = CᵀC`, without forming `A`.
///
/// After whitening `B`, the eigenpairs come from the SVD of `C·T` (`λ = s²`),
/// so eigenvalues near zero keep absolute accuracy `~ε_mach·‖C‖²` in `λ`
/// rather than `~ε_mach·‖C‖²` in `√λ`.
pub fn gen_sym_eig_factored(c: &Matrix, b: &Matrix, rank_tol: f64) -> Result<EigResult> {
    let n = c.ncols();
    if b.shape() != (n, n) {
        return Err(AviError::Dimension(format!(
            "generalized eigenproblem with C {:?} and B {:?}",
            c.shape(),
            b.shape()
        )));
    }
    check_finite(c, "evaluation matrix")?;
    let bdec = sym_eig(b)?;
    let sigma_max = bdec.eigenvalues.first().copied().unwrap_or(0.0);
    if !(sigma_max > 0.0) {
        return Ok(EigResult::empty(n));
    }
    let keep: Vec<usize> = bdec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rank_tol * sigma_max)
        .map(|(i, _)| i)
        .collect();
    let r = keep.len();
    let mut whiten = Matrix::zeros(n, r);
    for (j, &i) in keep.iter().enumerate() {
        let scale = 1.0 / bdec.eigenvalues[i].sqrt();
        whiten.set_column(j, &(bdec.eigenvectors.column(i) * scale));
    }
    let m = c * &whiten;
    // pad to at least r rows so the SVD returns a full r×r right basis
    let m = if m.nrows() < r {
        let mut padded = Matrix::zeros(r, r);
        padded.rows_mut(0, m.nrows()).copy_from(&m);
        padded
    } else {
        m
    };
    let d = svd_tall(&m);
    let mut eigenvectors = &whiten * &d.v;
    for j in 0..r {
        canonicalize_sign(&mut eigenvectors, j);
    }
    Ok(EigResult {
        eigenvalues: d.singular_values.iter().map(|s| s * s).collect(),
        eigenvectors,
        retained_rank: r,
    })
}

/// One-sided Jacobi SVD for a tall (or square) matrix.
fn svd_tall(m: &Matrix) -> Svd {
    let (rows, cols) = m.shape();
    let mut u = m.clone();
    let mut v = Matrix::identity(cols, cols);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..rows {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.is_finite() {
                    let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..cols {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| u.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut uo = Matrix::zeros(rows, cols);
    let mut vo = Matrix::zeros(cols, cols);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        if s > 0.0 {
            uo.set_column(dst, &(u.column(src) / s));
        }
        vo.set_column(dst, &v.column(src));
    }
    Svd {
        u: uo,
        singular_values: order.iter().map(|&i| norms[i]).collect(),
        v: vo,
    }
}

/// Thin singular value decomposition. Columns of `u` belonging to zero
/// singular values are left zero.
pub fn svd(m: &Matrix) -> Result<Svd> {
    check_finite(m, "svd input")?;
    if m.nrows() >= m.ncols() {
        Ok(svd_tall(m))
    } else {
        let t = svd_tall(&m.transpose());
        Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        })
    }
}

fn retained(s: &[f64], rank_tol: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if !(smax > 0.0) {
        return 0;
    }
    s.iter().take_while(|&&x| x > rank_tol * smax).count()
}

/// Number of singular values above `rank_tol * σ_max`.
pub fn numerical_rank(m: &Matrix, rank_tol: f64) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    Ok(retained(&svd(m)?.singular_values, rank_tol))
}

/// Orthonormal basis of the numerical column space of `m`.
pub fn orthonormal_basis(m: &Matrix, rank_tol: f64) -> Result<Matrix> {
    if m.is_empty() {
        return Ok(Matrix::zeros(m.nrows(), 0));
    }
    let d = svd(m)?;
    let r = retained(&d.singular_values, rank_tol);
    Ok(d.u.columns(0, r).into_owned())
}

/// Tolerance-controlled pseudo-inverse.
pub fn pinv(m: &Matrix, rank_tol: f64) -> Result<Matrix> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(Matrix::zeros(cols, rows));
    }
    let d = svd(m)?;
    let r = retained(&d.singular_values, rank_tol);
    let mut out = Matrix::zeros(cols, rows);
    for j in 0..r {
        let inv = 1.0 / d.singular_values[j];
        out += d.v.column(j) * (d.u.column(j).transpose() * inv);
    }
    Ok(out)
}

/// Least squares `min ‖M W − Y‖_F` through the pseudo-inverse. Returns `W`
/// and the Frobenius residual.
pub fn lstsq(m: &Matrix, y: &Matrix, rank_tol: f64) -> Result<(Matrix, f64)> {
    if m.nrows() != y.nrows() {
        return Err(AviError::Dimension(format!(
            "lstsq with {} rows in M and {} rows in Y",
            m.nrows(),
            y.nrows()
        )));
    }
    check_finite(y, "lstsq right-hand side")?;
    let w = pinv(m, rank_tol)? * y;
    let residual = (m * &w - y).norm();
    Ok((w, residual))
}

/// Vector form of [`lstsq`] for a single right-hand side.
pub fn lstsq_vec(m: &Matrix, y: &DVector<f64>, rank_tol: f64) -> Result<(DVector<f64>, f64)> {
    let ym = Matrix::from_column_slice(y.len(), 1, y.as_slice());
    let (w, r) = lstsq(m, &ym, rank_tol)?;
    Ok((w.column(0).into_owned(), r))
}
