//! Consistency of the fitted basis under translation and scaling of the data.
//!
//! Three fits are compared: `(X, ε)`, `(X − b, ε)` and `(αX, |α|ε)`. Nothing
//! is matched polynomial by polynomial; eigenvectors are only defined up to
//! sign and rotation inside degenerate eigenspaces. Instead the report holds
//! per-degree counts, sorted eigenvalue ratios and principal-angle gaps
//! between the per-degree evaluation subspaces on a shared probe set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::subspace::{span_residual, subspace_gap};
use crate::error::{AviError, Result};
use crate::linalg::Matrix;
use crate::model::{BasisModel, PolyHandle, PolyKind};
use crate::points::PointSet;
use crate::sbc::{fit, FitConfig, NormalizationKind, NUMERICAL_ZERO};

const PROBE_SEED: u64 = 0x5eed_cafe;
const MIN_PROBES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeGap {
    pub degree: usize,
    /// Gap between nonvanishing evaluation subspaces.
    pub f: f64,
    /// Gap between vanishing evaluation subspaces.
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub normalization: NormalizationKind,
    pub epsilon: f64,
    pub translation: Vec<f64>,
    pub alpha: f64,
    /// `(|G_t|, |F_t|)` per degree.
    pub counts_base: Vec<(usize, usize)>,
    pub counts_translated: Vec<(usize, usize)>,
    pub counts_scaled: Vec<(usize, usize)>,
    /// Sorted `λ̂_i / λ_i` per degree (expected `α²`); `None` where both are
    /// numerically zero.
    pub eigenvalue_ratios: Vec<Vec<Option<f64>>>,
    /// Sorted `λ̃_i / λ_i` per degree (expected 1).
    pub translated_eigenvalue_ratios: Vec<Vec<Option<f64>>>,
    pub scaled_gaps: Vec<DegreeGap>,
    pub translated_gaps: Vec<DegreeGap>,
    /// Largest relative residual of expressing one model's per-degree
    /// evaluations through the other's.
    pub max_eval_discrepancy: f64,
    pub num_probes: usize,
}

impl InvarianceReport {
    pub fn counts_match(&self) -> bool {
        self.counts_base == self.counts_translated && self.counts_base == self.counts_scaled
    }

    /// Largest `|ratio / expected − 1|` over the scaled eigenvalue ratios;
    /// infinite when the spectra have different lengths.
    pub fn max_ratio_error(&self) -> f64 {
        worst_ratio(&self.eigenvalue_ratios, self.alpha * self.alpha)
    }

    pub fn max_translated_ratio_error(&self) -> f64 {
        worst_ratio(&self.translated_eigenvalue_ratios, 1.0)
    }

    pub fn max_gap(&self) -> f64 {
        self.scaled_gaps
            .iter()
            .chain(&self.translated_gaps)
            .flat_map(|g| [g.f, g.g])
            .fold(0.0, f64::max)
    }
}

fn worst_ratio(ratios: &[Vec<Option<f64>>], expected: f64) -> f64 {
    ratios
        .iter()
        .flatten()
        .map(|r| match r {
            Some(v) => (v / expected - 1.0).abs(),
            None => 0.0,
        })
        .fold(
            0.0,
            |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) },
        )
}

fn is_zero(l: f64, top: f64) -> bool {
    l.max(0.0).sqrt() <= NUMERICAL_ZERO * top.max(0.0).sqrt().max(1.0)
}

fn ratios(base: &BasisModel, other: &BasisModel) -> Vec<Vec<Option<f64>>> {
    base.degrees
        .iter()
        .zip(&other.degrees)
        .map(|(a, b)| {
            let ta = a.eigvals.first().copied().unwrap_or(0.0);
            let tb = b.eigvals.first().copied().unwrap_or(0.0);
            let mut out: Vec<Option<f64>> = a
                .eigvals
                .iter()
                .zip(&b.eigvals)
                .map(|(&la, &lb)| {
                    if is_zero(la, ta) && is_zero(lb, tb) {
                        None
                    } else {
                        Some(lb / la)
                    }
                })
                .collect();
            if a.eigvals.len() != b.eigvals.len() {
                out.push(Some(f64::NAN));
            }
            out
        })
        .collect()
}

/// Random probe points covering the bounding box of `x`, widened by one
/// unit of its extent on each side.
pub fn probe_points(x: &PointSet, count: usize, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x.dim();
    let m = x.matrix();
    let mut rows = Vec::with_capacity(count);
    let bounds: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let lo = m.column(k).min();
            let hi = m.column(k).max();
            let pad = (hi - lo).max(1.0);
            (lo - pad, hi + pad)
        })
        .collect();
    for _ in 0..count {
        rows.push(
            bounds
                .iter()
                .map(|&(lo, hi)| rng.random_range(lo..hi))
                .collect(),
        );
    }
    PointSet::from_rows(&rows)
}

fn handles_of(model: &BasisModel, degree: usize, kind: PolyKind) -> Vec<PolyHandle> {
    model
        .record(degree)
        .map(|r| {
            r.columns_of(kind)
                .into_iter()
                .map(|column| PolyHandle {
                    degree,
                    column,
                    kind,
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Per-degree gaps between `a` evaluated at `pa` and `b` evaluated at `pb`,
/// plus the worst relative span residual in either direction.
fn compare(
    a: &BasisModel,
    pa: &PointSet,
    b: &BasisModel,
    pb: &PointSet,
) -> Result<(Vec<DegreeGap>, f64)> {
    let top = a.max_degree().max(b.max_degree());
    let mut gaps = Vec::with_capacity(top);
    let mut worst = 0.0_f64;
    for t in 1..=top {
        let mut pair = [0.0; 2];
        for (slot, kind) in [PolyKind::F, PolyKind::G].into_iter().enumerate() {
            let ha = handles_of(a, t, kind);
            let hb = handles_of(b, t, kind);
            let ea: Matrix = if ha.is_empty() {
                Matrix::zeros(pa.len(), 0)
            } else {
                a.evaluate(&ha, pa)?
            };
            let eb: Matrix = if hb.is_empty() {
                Matrix::zeros(pb.len(), 0)
            } else {
                b.evaluate(&hb, pb)?
            };
            pair[slot] = subspace_gap(&ea, &eb)?;
            worst = worst
                .max(span_residual(&ea, &eb)?)
                .max(span_residual(&eb, &ea)?);
        }
        gaps.push(DegreeGap {
            degree: t,
            f: pair[0],
            g: pair[1],
        });
    }
    Ok((gaps, worst))
}

/// Invariance diagnostics with the gradient normalization.
pub fn invariance_report(
    x: &PointSet,
    b: &[f64],
    alpha: f64,
    epsilon: f64,
) -> Result<InvarianceReport> {
    let cfg = FitConfig::new(epsilon, NormalizationKind::Gradient);
    invariance_report_with(x, b, alpha, &cfg)
}

/// Invariance diagnostics for an arbitrary fit configuration. Points are used
/// as given: the centering and rescaling flags of `cfg` are ignored.
pub fn invariance_report_with(
    x: &PointSet,
    b: &[f64],
    alpha: f64,
    cfg: &FitConfig,
) -> Result<InvarianceReport> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(AviError::InvalidArgument(format!(
            "scale factor must be finite and nonzero, got {alpha}"
        )));
    }
    let cfg = FitConfig {
        center: false,
        unit_mean_norm: false,
        ..cfg.clone()
    };
    let xt = x.translated(b)?;
    let xs = x.scaled(alpha)?;
    let base = fit(x, &cfg)?;
    let translated = fit(&xt, &cfg)?;
    let scaled = fit(
        &xs,
        &FitConfig {
            epsilon: cfg.epsilon * alpha.abs(),
            ..cfg.clone()
        },
    )?;

    let dims = base
        .degrees
        .iter()
        .map(|r| r.partition.len())
        .max()
        .unwrap_or(0);
    let probes = probe_points(x, MIN_PROBES.max(4 * dims), PROBE_SEED)?;
    let (scaled_gaps, d1) = compare(&base, &probes, &scaled, &probes.scaled(alpha)?)?;
    let (translated_gaps, d2) = compare(&base, &probes, &translated, &probes.translated(b)?)?;

    Ok(InvarianceReport {
        normalization: cfg.normalization.clone(),
        epsilon: cfg.epsilon,
        translation: b.to_vec(),
        alpha,
        counts_base: base.counts(),
        counts_translated: translated.counts(),
        counts_scaled: scaled.counts(),
        eigenvalue_ratios: ratios(&base, &scaled),
        translated_eigenvalue_ratios: ratios(&base, &translated),
        scaled_gaps,
        translated_gaps,
        max_eval_discrepancy: d1.max(d2),
        num_probes: probes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_points() -> PointSet {
        PointSet::from_rows(&[
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ])
        .unwrap()
    }

    #[test]
    fn identity_transform() {
        let r = invariance_report(&four_points(), &[0.0, 0.0], 1.0, 0.0).unwrap();
        assert!(r.counts_match());
        assert_eq!(r.max_ratio_error(), 0.0);
        assert!(r.max_gap() <= 1e-9);
    }

    #[test]
    fn four_points_scaled_by_two() {
        let r = invariance_report(&four_points(), &[0.0, 0.0], 2.0, 0.0).unwrap();
        assert!(r.counts_match());
        assert!(r.max_ratio_error() <= 1e-6, "{:?}", r.eigenvalue_ratios);
        assert!(r.eigenvalue_ratios[0]
            .iter()
            .all(|v| (v.unwrap() - 4.0).abs() <= 4e-6));
    }

    #[test]
    fn four_points_translated() {
        let r = invariance_report(&four_points(), &[10.0, -3.0], 1.0, 0.0).unwrap();
        assert!(r.counts_match());
        for g in &r.translated_gaps {
            assert!(g.g <= 1e-6 && g.f <= 1e-6, "{g:?}");
        }
    }

    #[test]
    fn zero_scale_is_rejected() {
        assert!(invariance_report(&four_points(), &[0.0, 0.0], 0.0, 0.0).is_err());
    }
}
