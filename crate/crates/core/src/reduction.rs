//! Removal of redundant vanishing polynomials.
//!
//! A vanishing polynomial `g` of degree `d` is dropped when, at every point,
//! its gradient lies in the span of the gradients of the kept vanishing
//! polynomials of degree below `d` (per-point least squares, max residual
//! against a threshold). Fits whose normalization is not the full gradient
//! mapping first get a per-degree rank deflation on the gradient Gram matrix.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};
use crate::linalg::{lstsq_vec, numerical_rank, Matrix};
use crate::model::{BasisModel, PolyHandle};
use crate::points::PointSet;
use crate::sbc::NormalizationKind;

/// Default residual threshold for noise-free data.
pub const DEFAULT_THRESHOLD: f64 = 1e-9;

/// Generators used by the gradient test.
pub const GENERATOR_POLICY: &str = "kept_lower_degree";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovedPolynomial {
    pub handle: PolyHandle,
    pub max_residual: f64,
    pub per_point_residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeptPolynomial {
    pub handle: PolyHandle,
    /// `None` when the polynomial was exempt from the test.
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDeflation {
    pub degree: usize,
    /// `|G_t|` before deflation.
    pub size: usize,
    /// Numerical rank of the gradient Gram matrix.
    pub rank: usize,
    pub removed: Vec<PolyHandle>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub threshold: f64,
    pub generator_policy: String,
    pub kept: Vec<KeptPolynomial>,
    pub removed: Vec<RemovedPolynomial>,
    pub rank_deflated: Vec<RankDeflation>,
}

impl ReductionReport {
    pub fn kept_handles(&self) -> Vec<PolyHandle> {
        self.kept.iter().map(|k| k.handle).collect()
    }

    pub fn kept_in_degree(&self, degree: usize) -> usize {
        self.kept
            .iter()
            .filter(|k| k.handle.degree == degree)
            .count()
    }
}

/// One vanishing polynomial as seen by the reduction: its degree, extent of
/// vanishing and `|X| × n` gradient at the points.
#[derive(Debug, Clone)]
pub struct GradientCandidate {
    pub degree: usize,
    pub extent: f64,
    pub grads: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Kept {
        max_residual: Option<f64>,
    },
    Removed {
        max_residual: f64,
        per_point: Vec<f64>,
    },
    Deflated,
}

/// Per-point residuals of `min_v ‖∇g(x) − Σ v_j ∇g_j(x)‖`.
pub fn gradient_residuals(
    grads: &Matrix,
    generators: &[&Matrix],
    rank_tol: f64,
) -> Result<Vec<f64>> {
    let (m, n) = grads.shape();
    for g in generators {
        if g.shape() != (m, n) {
            return Err(AviError::Dimension(format!(
                "generator gradient {:?} against candidate {:?}",
                g.shape(),
                (m, n)
            )));
        }
    }
    let mut out = Vec::with_capacity(m);
    let mut basis = Matrix::zeros(n, generators.len());
    for i in 0..m {
        let y = grads.row(i).transpose();
        if generators.is_empty() {
            out.push(y.norm());
            continue;
        }
        for (j, g) in generators.iter().enumerate() {
            basis.set_column(j, &g.row(i).transpose());
        }
        let (_, r) = lstsq_vec(&basis, &y, rank_tol)?;
        out.push(r);
    }
    Ok(out)
}

fn stacked(grads: &[&Matrix]) -> Matrix {
    let rows = grads.first().map_or(0, |g| g.len());
    let mut out = Matrix::zeros(rows, grads.len());
    for (j, g) in grads.iter().enumerate() {
        out.set_column(j, &DVector::from_column_slice(g.as_slice()));
    }
    out
}

/// Rank deflation within one degree. Polynomials are visited in ascending
/// extent (ties by position) and dropped while `|G_t|` exceeds the rank of
/// the stacked gradients, skipping any whose removal would lower that rank.
/// Returns `(removed positions, rank)`.
pub fn rank_deflate_degree(
    grads: &[&Matrix],
    extents: &[f64],
    rank_tol: f64,
) -> Result<(Vec<usize>, usize)> {
    if grads.len() != extents.len() {
        return Err(AviError::Dimension(format!(
            "{} gradients with {} extents",
            grads.len(),
            extents.len()
        )));
    }
    if grads.is_empty() {
        return Ok((Vec::new(), 0));
    }
    let rank = numerical_rank(&stacked(grads), rank_tol)?;
    let mut order: Vec<usize> = (0..grads.len()).collect();
    order.sort_by(|&a, &b| extents[a].total_cmp(&extents[b]));
    let mut alive = vec![true; grads.len()];
    let mut removed = Vec::new();
    for &i in &order {
        if grads.len() - removed.len() <= rank {
            break;
        }
        alive[i] = false;
        let rest: Vec<&Matrix> = (0..grads.len())
            .filter(|&j| alive[j])
            .map(|j| grads[j])
            .collect();
        if numerical_rank(&stacked(&rest), rank_tol)? == rank {
            removed.push(i);
        } else {
            alive[i] = true;
        }
    }
    removed.sort_unstable();
    Ok((removed, rank))
}

/// `(degree, size, rank, removed candidate indices)` of one deflated degree.
pub type Deflation = (usize, usize, usize, Vec<usize>);

/// The reduction over arbitrary gradient candidates. Returns one verdict per
/// candidate and, per deflated degree, `(degree, size, rank, removed)`.
pub fn reduce_candidates(
    cands: &[GradientCandidate],
    threshold: f64,
    rank_tol: f64,
    deflate: bool,
) -> Result<(Vec<Verdict>, Vec<Deflation>)> {
    if !(threshold >= 0.0) {
        return Err(AviError::InvalidArgument(format!(
            "threshold must be non-negative, got {threshold}"
        )));
    }
    let mut verdicts: Vec<Option<Verdict>> = vec![None; cands.len()];
    let mut degrees: Vec<usize> = cands.iter().map(|c| c.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut deflations = Vec::new();
    if deflate {
        for &d in &degrees {
            let idx: Vec<usize> = (0..cands.len()).filter(|&i| cands[i].degree == d).collect();
            let grads: Vec<&Matrix> = idx.iter().map(|&i| &cands[i].grads).collect();
            let extents: Vec<f64> = idx.iter().map(|&i| cands[i].extent).collect();
            let (gone, rank) = rank_deflate_degree(&grads, &extents, rank_tol)?;
            let gone: Vec<usize> = gone.iter().map(|&p| idx[p]).collect();
            for &i in &gone {
                verdicts[i] = Some(Verdict::Deflated);
            }
            if !gone.is_empty() {
                deflations.push((d, idx.len(), rank, gone));
            }
        }
    }
    let lowest = (0..cands.len())
        .filter(|&i| verdicts[i].is_none())
        .map(|i| cands[i].degree)
        .min();
    let mut generators: Vec<usize> = Vec::new();
    for &d in &degrees {
        let idx: Vec<usize> = (0..cands.len())
            .filter(|&i| cands[i].degree == d && verdicts[i].is_none())
            .collect();
        let gens: Vec<&Matrix> = generators.iter().map(|&j| &cands[j].grads).collect();
        for &i in &idx {
            if d <= 1 || Some(d) == lowest {
                verdicts[i] = Some(Verdict::Kept { max_residual: None });
                continue;
            }
            let per_point = gradient_residuals(&cands[i].grads, &gens, rank_tol)?;
            let max_residual = per_point.iter().copied().fold(0.0, f64::max);
            verdicts[i] = Some(if max_residual <= threshold {
                Verdict::Removed {
                    max_residual,
                    per_point,
                }
            } else {
                Verdict::Kept {
                    max_residual: Some(max_residual),
                }
            });
        }
        generators.extend(
            idx.into_iter()
                .filter(|&i| matches!(verdicts[i], Some(Verdict::Kept { .. }))),
        );
    }
    Ok((
        verdicts
            .into_iter()
            .map(|v| v.expect("every candidate judged"))
            .collect(),
        deflations,
    ))
}

/// Reduce the vanishing polynomials of `model`; `x` are the raw fit points.
pub fn reduce_basis(model: &BasisModel, x: &PointSet, threshold: f64) -> Result<ReductionReport> {
    let x = model.prepare(x)?;
    let handles = model.g_handles();
    let grads = model.gradient(&handles, &x)?;
    let cands: Vec<GradientCandidate> = handles
        .iter()
        .zip(grads)
        .map(|(h, g)| {
            Ok(GradientCandidate {
                degree: h.degree,
                extent: model.extent(*h)?,
                grads: g,
            })
        })
        .collect::<Result<_>>()?;
    let deflate = model.normalization != NormalizationKind::Gradient;
    let (verdicts, deflations) = reduce_candidates(&cands, threshold, model.rank_tol, deflate)?;
    let mut report = ReductionReport {
        threshold,
        generator_policy: GENERATOR_POLICY.to_string(),
        kept: Vec::new(),
        removed: Vec::new(),
        rank_deflated: deflations
            .into_iter()
            .map(|(degree, size, rank, gone)| RankDeflation {
                degree,
                size,
                rank,
                removed: gone.into_iter().map(|i| handles[i]).collect(),
            })
            .collect(),
    };
    for (h, v) in handles.iter().zip(verdicts) {
        match v {
            Verdict::Kept { max_residual } => report.kept.push(KeptPolynomial {
                handle: *h,
                max_residual,
            }),
            Verdict::Removed {
                max_residual,
                per_point,
            } => report.removed.push(RemovedPolynomial {
                handle: *h,
                max_residual,
                per_point_residuals: per_point,
            }),
            Verdict::Deflated => {}
        }
    }
    Ok(report)
}
