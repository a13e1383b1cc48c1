use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};
use crate::linalg::Matrix;

/// Transforms applied to raw coordinates before fitting: `x ↦ (x − center) · scale`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Preprocessing {
    #[serde(with = "crate::io::opt_f64_vec")]
    pub center: Option<Vec<f64>>,
    #[serde(with = "crate::io::opt_f64")]
    pub scale: Option<f64>,
}

impl Preprocessing {
    pub fn is_identity(&self) -> bool {
        self.center.is_none() && self.scale.is_none()
    }

    /// Apply to a single raw point.
    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(k, &v)| {
                let c = self.center.as_ref().map_or(0.0, |b| b[k]);
                (v - c) * self.scale.unwrap_or(1.0)
            })
            .collect()
    }
}

/// A finite, non-empty set of points stored as a `|X| × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Matrix,
    preprocessing: Preprocessing,
}

impl PointSet {
    pub fn new(points: Matrix) -> Result<Self> {
        if points.nrows() == 0 {
            return Err(AviError::EmptyPointSet);
        }
        if points.ncols() == 0 {
            return Err(AviError::Dimension("points with zero coordinates".into()));
        }
        if !points.iter().all(|x| x.is_finite()) {
            return Err(AviError::NonFinite("point coordinates"));
        }
        Ok(PointSet {
            points,
            preprocessing: Preprocessing::default(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(AviError::EmptyPointSet)?;
        let n = first.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(AviError::Dimension(format!(
                "row {bad} has {} coordinates, expected {n}",
                rows[bad].len()
            )));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(Matrix::from_row_slice(rows.len(), n, &flat))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn preprocessing(&self) -> &Preprocessing {
        &self.preprocessing
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.points.row(i).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i)).collect()
    }

    /// Mean absolute value over all coordinates.
    pub fn mean_abs(&self) -> f64 {
        self.points.iter().map(|x| x.abs()).sum::<f64>() / self.points.len() as f64
    }

    /// Mean Euclidean norm of the points.
    pub fn mean_norm(&self) -> f64 {
        (0..self.len())
            .map(|i| self.points.row(i).norm())
            .sum::<f64>()
            / self.len() as f64
    }

    pub fn translated(&self, b: &[f64]) -> Result<Self> {
        if b.len() != self.dim() {
            return Err(AviError::Dimension(format!(
                "translation of length {} for {}-dimensional points",
                b.len(),
                self.dim()
            )));
        }
        let mut m = self.points.clone();
        for mut row in m.row_iter_mut() {
            for (k, v) in row.iter_mut().enumerate() {
                *v -= b[k];
            }
        }
        Self::new(m)
    }

    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(&self.points * alpha)
    }

    /// Subtract the column means; recorded in the preprocessing.
    pub fn centered(&self) -> Self {
        let n = self.dim();
        let means: Vec<f64> = (0..n).map(|k| self.points.column(k).mean()).collect();
        let mut out = self.apply(&Preprocessing {
            center: Some(means.clone()),
            scale: None,
        });
        out.preprocessing = Preprocessing {
            // composed with any earlier transform, expressed in raw coordinates
            center: Some({
                let s = self.preprocessing.scale.unwrap_or(1.0);
                let prev = self.preprocessing.center.clone().unwrap_or(vec![0.0; n]);
                prev.iter().zip(&means).map(|(p, m)| p + m / s).collect()
            }),
            scale: self.preprocessing.scale,
        };
        out
    }

    /// Rescale so that the mean point norm is one; recorded in the preprocessing.
    pub fn unit_mean_norm(&self) -> Self {
        let mn = self.mean_norm();
        let s = if mn > 0.0 { 1.0 / mn } else { 1.0 };
        PointSet {
            points: &self.points * s,
            preprocessing: Preprocessing {
                center: self.preprocessing.center.clone(),
                scale: Some(self.preprocessing.scale.unwrap_or(1.0) * s),
            },
        }
    }

    /// Apply a recorded transform to these (raw) points.
    pub fn apply(&self, pre: &Preprocessing) -> Self {
        let mut m = self.points.clone();
        for mut row in m.row_iter_mut() {
            let raw: Vec<f64> = row.iter().copied().collect();
            for (k, v) in pre.apply_point(&raw).into_iter().enumerate() {
                row[k] = v;
            }
        }
        PointSet {
            points: m,
            preprocessing: pre.clone(),
        }
    }

    /// Subset of rows by index.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let mut rows = Vec::with_capacity(idx.len());
        for &i in idx {
            if i >= self.len() {
                return Err(AviError::InvalidArgument(format!(
                    "point index {i} out of range"
                )));
            }
            rows.push(self.row(i));
        }
        Self::from_rows(&rows)
    }
}
