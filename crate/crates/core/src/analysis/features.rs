//! Feature vectors from per-class vanishing polynomials.

use crate::error::{AviError, Result};
use crate::linalg::Matrix;
use crate::model::{BasisModel, PolyHandle};
use crate::points::PointSet;

/// `|g(x)|` for every vanishing polynomial of every class model, class by
/// class, ascending degree within a class. `x` is a raw point; each model
/// applies its own preprocessing.
pub fn extract_features(class_models: &[BasisModel], x: &[f64]) -> Result<Vec<f64>> {
    let sets: Vec<(&BasisModel, Vec<PolyHandle>)> =
        class_models.iter().map(|m| (m, m.g_handles())).collect();
    let rows = feature_matrix(&sets, &PointSet::from_rows(&[x.to_vec()])?)?;
    Ok(rows.row(0).iter().copied().collect())
}

/// Features for many points at once, with an explicit handle list per model
/// (for instance the polynomials kept by a reduction).
pub fn feature_matrix(
    models: &[(&BasisModel, Vec<PolyHandle>)],
    points: &PointSet,
) -> Result<Matrix> {
    let width: usize = models.iter().map(|(_, h)| h.len()).sum();
    let mut out = Matrix::zeros(points.len(), width);
    let mut at = 0;
    for (model, handles) in models {
        if model.num_vars != points.dim() {
            return Err(AviError::Dimension(format!(
                "{}-dimensional points for a class model in {} variables",
                points.dim(),
                model.num_vars
            )));
        }
        if handles.is_empty() {
            continue;
        }
        let vals = model.evaluate(handles, &model.prepare(points)?)?;
        out.columns_mut(at, handles.len()).copy_from(&vals.abs());
        at += handles.len();
    }
    Ok(out)
}
