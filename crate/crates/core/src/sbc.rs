//! Degree-by-degree basis construction with pluggable normalization.

use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};
use crate::linalg::{gen_sym_eig_factored, lstsq, Matrix, DEFAULT_RANK_TOL};
use crate::model::{
    BasisModel, DegreeRecord, Expander, Parent, PolyKind, Replay, Step, DEFAULT_EXPANSION_CAP,
};
use crate::points::PointSet;

/// Magnitude below which `√λ` counts as zero, relative to the largest `√λ`
/// of the degree (floored at one).
pub const NUMERICAL_ZERO: f64 = 1e-10;

/// Which normalization matrix constrains the generalized eigenproblem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalizationKind {
    /// Plain eigenproblem (VCA).
    Identity,
    /// Unit coefficient vectors.
    Coefficient,
    /// Unit stacked gradients at the fit points.
    Gradient,
    /// Unit stacked gradients over a subset of variables and points.
    SubsampledGradient {
        variables: Vec<usize>,
        points: Vec<usize>,
    },
}

impl NormalizationKind {
    pub fn name(&self) -> &'static str {
        match self {
            NormalizationKind::Identity => "vca",
            NormalizationKind::Coefficient => "coeff",
            NormalizationKind::Gradient => "grad",
            NormalizationKind::SubsampledGradient { .. } => "subgrad",
        }
    }

    pub fn uses_gradients(&self) -> bool {
        matches!(
            self,
            NormalizationKind::Gradient | NormalizationKind::SubsampledGradient { .. }
        )
    }

    fn validate(&self, n: usize, m: usize) -> Result<()> {
        if let NormalizationKind::SubsampledGradient { variables, points } = self {
            if variables.is_empty() || points.is_empty() {
                return Err(AviError::InvalidArgument(
                    "subsampled gradient needs non-empty variable and point subsets".into(),
                ));
            }
            if let Some(k) = variables.iter().find(|&&k| k >= n) {
                return Err(AviError::InvalidArgument(format!(
                    "variable index {k} out of range for {n} variables"
                )));
            }
            if let Some(i) = points.iter().find(|&&i| i >= m) {
                return Err(AviError::InvalidArgument(format!(
                    "point index {i} out of range for {m} points"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub epsilon: f64,
    pub normalization: NormalizationKind,
    /// Degree cap; `None` means `|X|`.
    pub max_degree: Option<usize>,
    pub rank_tol: f64,
    pub center: bool,
    pub unit_mean_norm: bool,
    /// Term cap for coefficient expansions.
    pub expansion_cap: u128,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            epsilon: 0.0,
            normalization: NormalizationKind::Gradient,
            max_degree: None,
            rank_tol: DEFAULT_RANK_TOL,
            center: false,
            unit_mean_norm: false,
            expansion_cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

impl FitConfig {
    pub fn new(epsilon: f64, normalization: NormalizationKind) -> Self {
        FitConfig {
            epsilon,
            normalization,
            ..Self::default()
        }
    }
}

/// Whatever is known about a candidate set; each normalization reads what it needs.
pub struct CandidateData<'a> {
    pub evals: &'a Matrix,
    /// One `|X| × |C|` matrix per variable.
    pub grads: Option<&'a [Matrix]>,
    /// One coefficient vector per candidate.
    pub coeffs: Option<&'a [Vec<f64>]>,
}

/// Symmetric PSD matrix whose quadratic form is the squared norm of the
/// normalized combination.
pub fn normalization_matrix(cand: &CandidateData, kind: &NormalizationKind) -> Result<Matrix> {
    let c = cand.evals.ncols();
    let missing =
        |what: &str| AviError::InvalidArgument(format!("{what} required by the normalization"));
    Ok(match kind {
        NormalizationKind::Identity => Matrix::identity(c, c),
        NormalizationKind::Coefficient => {
            let coeffs = cand
                .coeffs
                .ok_or_else(|| missing("coefficient expansions"))?;
            let mut b = Matrix::zeros(coeffs.len(), coeffs.len());
            for i in 0..coeffs.len() {
                for j in 0..=i {
                    let d: f64 = coeffs[i].iter().zip(&coeffs[j]).map(|(a, b)| a * b).sum();
                    b[(i, j)] = d;
                    b[(j, i)] = d;
                }
            }
            b
        }
        NormalizationKind::Gradient => {
            let grads = cand.grads.ok_or_else(|| missing("gradients"))?;
            let mut b = Matrix::zeros(c, c);
            for g in grads {
                b += g.transpose() * g;
            }
            b
        }
        NormalizationKind::SubsampledGradient { variables, points } => {
            let grads = cand.grads.ok_or_else(|| missing("gradients"))?;
            let mut b = Matrix::zeros(c, c);
            for &k in variables {
                let g = grads[k].select_rows(points);
                b += g.transpose() * &g;
            }
            b
        }
    })
}

/// Project candidates off the span of `f_eval`: returns `(C − F W, W)`.
pub fn orthogonalize(c_pre: &Matrix, f_eval: &Matrix, rank_tol: f64) -> Result<(Matrix, Matrix)> {
    let (w, _) = lstsq(f_eval, c_pre, rank_tol)?;
    Ok((c_pre - f_eval * &w, w))
}

/// Tag columns `G` when `√λ ≤ ε` or `√λ` is numerically zero.
pub fn classify(eigvals: &[f64], epsilon: f64) -> Vec<PolyKind> {
    let roots: Vec<f64> = eigvals.iter().map(|l| l.max(0.0).sqrt()).collect();
    let top = roots.iter().copied().fold(1.0_f64, f64::max);
    let cut = epsilon.max(NUMERICAL_ZERO * top);
    roots
        .iter()
        .map(|&r| if r <= cut { PolyKind::G } else { PolyKind::F })
        .collect()
}

fn constant_for(kind: &NormalizationKind, x: &PointSet) -> f64 {
    match kind {
        NormalizationKind::Identity => 1.0 / (x.len() as f64).sqrt(),
        NormalizationKind::Coefficient => 1.0,
        NormalizationKind::Gradient | NormalizationKind::SubsampledGradient { .. } => {
            let m = x.mean_abs();
            if m > 0.0 {
                m
            } else {
                1.0
            }
        }
    }
}

/// Fit a basis of the approximate vanishing ideal of `x`.
pub fn fit(x: &PointSet, cfg: &FitConfig) -> Result<BasisModel> {
    if !(cfg.epsilon >= 0.0) || !cfg.epsilon.is_finite() {
        return Err(AviError::InvalidArgument(format!(
            "epsilon must be finite and non-negative, got {}",
            cfg.epsilon
        )));
    }
    if !(cfg.rank_tol >= 0.0) {
        return Err(AviError::InvalidArgument(format!(
            "rank tolerance must be non-negative, got {}",
            cfg.rank_tol
        )));
    }
    let max_degree = cfg.max_degree.unwrap_or(x.len());
    if max_degree == 0 {
        return Err(AviError::InvalidArgument(
            "max degree must be at least 1".into(),
        ));
    }
    let mut x = x.clone();
    if cfg.center {
        x = x.centered();
    }
    if cfg.unit_mean_norm {
        x = x.unit_mean_norm();
    }
    let n = x.dim();
    let kind = &cfg.normalization;
    kind.validate(n, x.len())?;

    let constant_value = constant_for(kind, &x);
    let mut replay = Replay::new(constant_value, x.matrix(), kind.uses_gradients());
    let mut expander = (*kind == NormalizationKind::Coefficient)
        .then(|| Expander::new(n, constant_value, cfg.expansion_cap));
    let mut degrees = Vec::new();
    let mut truncated = false;

    for t in 1..=max_degree {
        let parents: Vec<Parent> = if t == 1 {
            (0..n).map(Parent::Variable).collect()
        } else {
            let f1 = replay.vals[1].ncols();
            let prev = replay.vals[t - 1].ncols();
            (0..f1)
                .flat_map(|linear| {
                    (0..prev).map(move |previous| Parent::Product { linear, previous })
                })
                .collect()
        };
        let pre = replay.candidates(&parents);
        let (_, weights) = orthogonalize(&pre.vals, &replay.stacked_vals(), cfg.rank_tol)?;
        let cand: Step = replay.orthogonalized(pre, &weights);

        let coeffs = match expander.as_mut() {
            Some(ex) => {
                let pre = ex.candidates(&parents, t)?;
                Some(ex.orthogonalized(pre, &weights))
            }
            None => None,
        };
        let b = normalization_matrix(
            &CandidateData {
                evals: &cand.vals,
                grads: cand.grads.as_deref(),
                coeffs: coeffs.as_deref(),
            },
            kind,
        )?;
        let eig = gen_sym_eig_factored(&cand.vals, &b, cfg.rank_tol)?;
        let partition = classify(&eig.eigenvalues, cfg.epsilon);
        replay.push_degree(&cand, &eig.eigenvectors, &partition);
        if let (Some(ex), Some(c)) = (expander.as_mut(), coeffs.as_ref()) {
            ex.push_degree(c, &eig.eigenvectors, &partition);
        }
        let nonvanishing = partition.iter().filter(|k| **k == PolyKind::F).count();
        degrees.push(DegreeRecord {
            degree: t,
            deflated: parents.len() - eig.retained_rank,
            parents,
            ortho_weights: weights,
            eigvecs: eig.eigenvectors,
            eigvals: eig.eigenvalues,
            partition,
        });
        if nonvanishing == 0 {
            break;
        }
        if t == max_degree {
            truncated = true;
        }
    }

    Ok(BasisModel {
        num_vars: n,
        constant_value,
        degrees,
        epsilon: cfg.epsilon,
        normalization: kind.clone(),
        rank_tol: cfg.rank_tol,
        preprocessing: x.preprocessing().clone(),
        truncated,
    })
}
