//! Spread of the norms of the vanishing polynomials under a normalization.

use crate::error::{AviError, Result};
use crate::model::{BasisModel, PolyHandle, DEFAULT_EXPANSION_CAP};
use crate::points::PointSet;
use crate::sbc::NormalizationKind;

/// Norm of each handle under `kind`. Gradient norms are taken at `x` (raw
/// fit points, preprocessed like the model); the identity norm is the
/// length of the combination vector.
pub fn handle_norms(
    model: &BasisModel,
    x: &PointSet,
    handles: &[PolyHandle],
    kind: &NormalizationKind,
) -> Result<Vec<f64>> {
    match kind {
        NormalizationKind::Identity => handles
            .iter()
            .map(|h| {
                model.check_handle(*h)?;
                Ok(match model.record(h.degree) {
                    Some(r) => r.eigvecs.column(h.column).norm(),
                    None => 1.0,
                })
            })
            .collect(),
        NormalizationKind::Coefficient => Ok(model
            .expand_many(handles, DEFAULT_EXPANSION_CAP)?
            .iter()
            .map(|p| p.coefficient_norm())
            .collect()),
        NormalizationKind::Gradient => {
            let x = model.prepare(x)?;
            Ok(model
                .gradient(handles, &x)?
                .iter()
                .map(|g| g.norm())
                .collect())
        }
        NormalizationKind::SubsampledGradient { variables, points } => {
            let x = model.prepare(x)?;
            if points.iter().any(|&i| i >= x.len()) || variables.iter().any(|&k| k >= x.dim()) {
                return Err(AviError::InvalidArgument(
                    "subsample index out of range".into(),
                ));
            }
            Ok(model
                .gradient(handles, &x)?
                .iter()
                .map(|g| g.select_rows(points).select_columns(variables).norm())
                .collect())
        }
    }
}

/// Largest over smallest norm of the vanishing polynomials (degree ≥ 1)
/// under `kind`; `+∞` when the smallest norm is zero.
pub fn n_ratio(model: &BasisModel, x: &PointSet, kind: &NormalizationKind) -> Result<f64> {
    let handles = model.g_handles();
    if handles.is_empty() {
        return Err(AviError::InvalidArgument(
            "model has no vanishing polynomials".into(),
        ));
    }
    let norms = handle_norms(model, x, &handles, kind)?;
    let max = norms.iter().copied().fold(0.0, f64::max);
    let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
    if handles.len() == 1 {
        return Ok(1.0);
    }
    Ok(if min > 0.0 { max / min } else { f64::INFINITY })
}
