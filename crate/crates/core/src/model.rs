//! Structural representation of a fitted basis.
//!
//! A [`BasisModel`] never stores expanded polynomials. Each degree keeps the
//! parentage of its candidates, the orthogonalization weights and the
//! generalized eigenvectors; values, gradients and (on demand) coefficient
//! expansions are recovered by replaying that recursion.
//!
//! Column layout of `F^{t-1}`, used by the orthogonalization weights of
//! degree `t`: the constant first, then the nonvanishing polynomials of
//! degree 1, 2, …, t−1, each degree in the order of its eigenvector columns.

use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};
use crate::linalg::Matrix;
use crate::monomials::{count_monomials, MonomialIndex};
use crate::oracle::DensePolynomial;
use crate::points::{PointSet, Preprocessing};
use crate::sbc::NormalizationKind;

/// Default cap on the number of terms an expansion may produce.
pub const DEFAULT_EXPANSION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolyKind {
    /// Nonvanishing.
    F,
    /// Vanishing.
    G,
}

/// Reference to one basis polynomial: column `column` of the degree-`degree`
/// eigenvectors. The constant is `(0, 0, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyHandle {
    pub degree: usize,
    pub column: usize,
    pub kind: PolyKind,
}

impl PolyHandle {
    pub const CONSTANT: PolyHandle = PolyHandle {
        degree: 0,
        column: 0,
        kind: PolyKind::F,
    };
}

/// Where a candidate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parent {
    /// The raw coordinate `x_k` (degree one only).
    Variable(usize),
    /// Product of the `linear`-th degree-1 and the `previous`-th degree-(t−1)
    /// nonvanishing polynomials.
    Product { linear: usize, previous: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub degree: usize,
    pub parents: Vec<Parent>,
    /// `|F^{t-1}| × |C_t|`: candidate = pre-candidate − `F^{t-1}` · column.
    #[serde(with = "crate::io::matrix")]
    pub ortho_weights: Matrix,
    /// `|C_t| × r`, one basis polynomial per column.
    #[serde(with = "crate::io::matrix")]
    pub eigvecs: Matrix,
    #[serde(with = "crate::io::f64_vec")]
    pub eigvals: Vec<f64>,
    pub partition: Vec<PolyKind>,
    /// Null directions of the normalization matrix that were dropped.
    pub deflated: usize,
}

impl DegreeRecord {
    pub fn columns_of(&self, kind: PolyKind) -> Vec<usize> {
        self.partition
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == kind)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count(&self, kind: PolyKind) -> usize {
        self.partition.iter().filter(|k| **k == kind).count()
    }

    /// Extent of vanishing `√λ` of every column.
    pub fn extents(&self) -> Vec<f64> {
        self.eigvals.iter().map(|l| l.max(0.0).sqrt()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisModel {
    pub num_vars: usize,
    #[serde(with = "crate::io::f64_str")]
    pub constant_value: f64,
    pub degrees: Vec<DegreeRecord>,
    #[serde(with = "crate::io::f64_str")]
    pub epsilon: f64,
    pub normalization: NormalizationKind,
    #[serde(with = "crate::io::f64_str")]
    pub rank_tol: f64,
    pub preprocessing: Preprocessing,
    /// Fitting stopped at the degree cap while nonvanishing polynomials remained.
    pub truncated: bool,
}

impl BasisModel {
    pub fn max_degree(&self) -> usize {
        self.degrees.last().map_or(0, |r| r.degree)
    }

    pub fn record(&self, degree: usize) -> Option<&DegreeRecord> {
        degree.checked_sub(1).and_then(|i| self.degrees.get(i))
    }

    /// All handles of one kind in ascending degree, column order within a degree.
    pub fn handles(&self, kind: PolyKind) -> Vec<PolyHandle> {
        let mut out = Vec::new();
        if kind == PolyKind::F {
            out.push(PolyHandle::CONSTANT);
        }
        for r in &self.degrees {
            for column in r.columns_of(kind) {
                out.push(PolyHandle {
                    degree: r.degree,
                    column,
                    kind,
                });
            }
        }
        out
    }

    pub fn g_handles(&self) -> Vec<PolyHandle> {
        self.handles(PolyKind::G)
    }

    pub fn f_handles(&self) -> Vec<PolyHandle> {
        self.handles(PolyKind::F)
    }

    /// Every handle: F then G, each ascending in degree.
    pub fn all_handles(&self) -> Vec<PolyHandle> {
        let mut h = self.f_handles();
        h.extend(self.g_handles());
        h
    }

    /// `(|G_t|, |F_t|)` for t = 1..=max_degree.
    pub fn counts(&self) -> Vec<(usize, usize)> {
        self.degrees
            .iter()
            .map(|r| (r.count(PolyKind::G), r.count(PolyKind::F)))
            .collect()
    }

    /// Column label `d<t>_g<i>` / `d<t>_f<i>`, with `i` counting polynomials
    /// of that kind within the degree from zero.
    pub fn label(&self, h: PolyHandle) -> String {
        let i = match self.record(h.degree) {
            Some(r) => r.partition[..h.column.min(r.partition.len())]
                .iter()
                .filter(|k| **k == h.kind)
                .count(),
            None => 0,
        };
        let k = match h.kind {
            PolyKind::F => 'f',
            PolyKind::G => 'g',
        };
        format!("d{}_{k}{i}", h.degree)
    }

    /// `√λ` of a handle (NaN for the constant, which has no eigenvalue).
    pub fn extent(&self, h: PolyHandle) -> Result<f64> {
        self.check_handle(h)?;
        Ok(match self.record(h.degree) {
            Some(r) => r.eigvals[h.column].max(0.0).sqrt(),
            None => f64::NAN,
        })
    }

    pub fn check_handle(&self, h: PolyHandle) -> Result<()> {
        let bad = AviError::HandleOutOfRange {
            degree: h.degree,
            column: h.column,
        };
        if h.degree == 0 {
            return if h.column == 0 && h.kind == PolyKind::F {
                Ok(())
            } else {
                Err(bad)
            };
        }
        match self.record(h.degree) {
            Some(r) if h.column < r.partition.len() && r.partition[h.column] == h.kind => Ok(()),
            _ => Err(bad),
        }
    }

    /// Apply this model's recorded preprocessing to raw points.
    pub fn prepare(&self, raw: &PointSet) -> Result<PointSet> {
        if raw.dim() != self.num_vars {
            return Err(AviError::Dimension(format!(
                "{}-dimensional points for a model in {} variables",
                raw.dim(),
                self.num_vars
            )));
        }
        Ok(if self.preprocessing.is_identity() {
            raw.clone()
        } else {
            raw.apply(&self.preprocessing)
        })
    }

    fn check_points(&self, points: &PointSet) -> Result<()> {
        if points.dim() != self.num_vars {
            return Err(AviError::Dimension(format!(
                "{}-dimensional points for a model in {} variables",
                points.dim(),
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Evaluate `handles` at `points` (model coordinates); `|points| × |handles|`.
    pub fn evaluate(&self, handles: &[PolyHandle], points: &PointSet) -> Result<Matrix> {
        self.check_points(points)?;
        for h in handles {
            self.check_handle(*h)?;
        }
        let top = handles.iter().map(|h| h.degree).max().unwrap_or(0);
        let mut replay = Replay::new(self.constant_value, points.matrix(), false);
        let mut columns: Vec<Vec<(usize, usize)>> = vec![Vec::new(); top + 1];
        for (j, h) in handles.iter().enumerate() {
            columns[h.degree].push((j, h.column));
        }
        let mut out = Matrix::zeros(points.len(), handles.len());
        for &(j, _) in &columns[0] {
            out.set_column(j, &replay.vals[0].column(0));
        }
        for r in self.degrees.iter().take(top) {
            let step = replay.advance(r);
            for &(j, c) in &columns[r.degree] {
                out.set_column(j, &step.vals.column(c));
            }
        }
        Ok(out)
    }

    /// Gradients of `handles` at `points`, one `|points| × n` matrix per
    /// handle, computed by the product-rule recursion over stored parent
    /// values and gradients.
    pub fn gradient(&self, handles: &[PolyHandle], points: &PointSet) -> Result<Vec<Matrix>> {
        self.check_points(points)?;
        for h in handles {
            self.check_handle(*h)?;
        }
        let top = handles.iter().map(|h| h.degree).max().unwrap_or(0);
        let n = self.num_vars;
        let mut out = vec![Matrix::zeros(points.len(), n); handles.len()];
        let mut replay = Replay::new(self.constant_value, points.matrix(), true);
        for r in self.degrees.iter().take(top) {
            let step = replay.advance(r);
            let grads = step.grads.as_ref().expect("gradients requested");
            for (j, h) in handles.iter().enumerate() {
                if h.degree != r.degree {
                    continue;
                }
                for (k, g) in grads.iter().enumerate() {
                    out[j].set_column(k, &g.column(h.column));
                }
            }
        }
        Ok(out)
    }

    /// Symbolic expansion of one handle, with the default term cap.
    pub fn expand(&self, h: PolyHandle) -> Result<DensePolynomial> {
        self.expand_with_cap(h, DEFAULT_EXPANSION_CAP)
    }

    pub fn expand_with_cap(&self, h: PolyHandle, cap: u128) -> Result<DensePolynomial> {
        Ok(self.expand_many(&[h], cap)?.remove(0))
    }

    /// Expand several handles sharing one replay.
    pub fn expand_many(&self, handles: &[PolyHandle], cap: u128) -> Result<Vec<DensePolynomial>> {
        for h in handles {
            self.check_handle(*h)?;
        }
        let top = handles.iter().map(|h| h.degree).max().unwrap_or(0);
        let mut ex = Expander::new(self.num_vars, self.constant_value, cap);
        let mut out = vec![DensePolynomial::zero(self.num_vars); handles.len()];
        for (j, h) in handles.iter().enumerate() {
            if h.degree == 0 {
                out[j] = DensePolynomial::constant(self.num_vars, self.constant_value);
            }
        }
        for r in self.degrees.iter().take(top) {
            let pre = ex.candidates(&r.parents, r.degree)?;
            let cand = ex.orthogonalized(pre, &r.ortho_weights);
            let polys = ex.push_degree(&cand, &r.eigvecs, &r.partition);
            for (j, h) in handles.iter().enumerate() {
                if h.degree == r.degree {
                    out[j] = ex.index.sparse(&polys[h.column]);
                }
            }
        }
        Ok(out)
    }
}

/// Values (and optionally gradients) of one degree's basis polynomials.
pub(crate) struct Step {
    pub vals: Matrix,
    pub grads: Option<Vec<Matrix>>,
}

/// Degree-by-degree replay of the recursion at a fixed set of points.
///
/// Fitting drives the same methods, so replaying a fitted model at its
/// training points repeats the fit-time arithmetic exactly.
pub(crate) struct Replay<'a> {
    points: &'a Matrix,
    /// Nonvanishing values per degree (degree 0 is the constant column).
    pub vals: Vec<Matrix>,
    /// Nonvanishing gradients per degree, one matrix per variable.
    pub grads: Option<Vec<Vec<Matrix>>>,
}

impl<'a> Replay<'a> {
    pub fn new(constant: f64, points: &'a Matrix, with_grad: bool) -> Self {
        let (m, n) = points.shape();
        Replay {
            points,
            vals: vec![Matrix::from_element(m, 1, constant)],
            grads: with_grad.then(|| vec![vec![Matrix::zeros(m, 1); n]]),
        }
    }

    /// `F^{t-1}` evaluated at the points, columns in canonical order.
    pub fn stacked_vals(&self) -> Matrix {
        hstack(&self.vals, self.points.nrows())
    }

    fn stacked_grads(&self) -> Option<Vec<Matrix>> {
        let grads = self.grads.as_ref()?;
        let n = self.points.ncols();
        Some(
            (0..n)
                .map(|k| {
                    let per: Vec<Matrix> = grads.iter().map(|g| g[k].clone()).collect();
                    hstack(&per, self.points.nrows())
                })
                .collect(),
        )
    }

    /// Pre-candidate values and gradients for the given parentage.
    pub fn candidates(&self, parents: &[Parent]) -> Step {
        let (m, n) = self.points.shape();
        let mut vals = Matrix::zeros(m, parents.len());
        let mut grads = self
            .grads
            .as_ref()
            .map(|_| vec![Matrix::zeros(m, parents.len()); n]);
        let deg = self.vals.len();
        for (c, p) in parents.iter().enumerate() {
            match *p {
                Parent::Variable(k) => {
                    vals.set_column(c, &self.points.column(k));
                    if let Some(g) = grads.as_mut() {
                        g[k].column_mut(c).fill(1.0);
                    }
                }
                Parent::Product { linear, previous } => {
                    let lin = self.vals[1].column(linear);
                    let prev = self.vals[deg - 1].column(previous);
                    vals.set_column(c, &lin.component_mul(&prev));
                    if let (Some(g), Some(src)) = (grads.as_mut(), self.grads.as_ref()) {
                        for k in 0..n {
                            let dl = src[1][k].column(linear);
                            let dp = src[deg - 1][k].column(previous);
                            let col = dl.component_mul(&prev) + lin.component_mul(&dp);
                            g[k].set_column(c, &col);
                        }
                    }
                }
            }
        }
        Step { vals, grads }
    }

    /// Subtract the projection onto `F^{t-1}` with stored weights.
    pub fn orthogonalized(&self, pre: Step, weights: &Matrix) -> Step {
        let fvals = self.stacked_vals();
        let vals = pre.vals - fvals * weights;
        let grads = match (pre.grads, self.stacked_grads()) {
            (Some(pg), Some(fg)) => Some(
                pg.into_iter()
                    .zip(fg)
                    .map(|(p, f)| p - f * weights)
                    .collect(),
            ),
            _ => None,
        };
        Step { vals, grads }
    }

    /// Combine candidates with eigenvectors and record the nonvanishing columns.
    pub fn push_degree(&mut self, cand: &Step, eigvecs: &Matrix, partition: &[PolyKind]) -> Step {
        let vals = &cand.vals * eigvecs;
        let grads: Option<Vec<Matrix>> = cand
            .grads
            .as_ref()
            .map(|g| g.iter().map(|gk| gk * eigvecs).collect());
        let fcols: Vec<usize> = partition
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == PolyKind::F)
            .map(|(i, _)| i)
            .collect();
        self.vals.push(vals.select_columns(&fcols));
        if let (Some(store), Some(g)) = (self.grads.as_mut(), grads.as_ref()) {
            store.push(g.iter().map(|gk| gk.select_columns(&fcols)).collect());
        }
        Step { vals, grads }
    }

    pub fn advance(&mut self, r: &DegreeRecord) -> Step {
        let pre = self.candidates(&r.parents);
        let cand = self.orthogonalized(pre, &r.ortho_weights);
        self.push_degree(&cand, &r.eigvecs, &r.partition)
    }
}

pub(crate) fn hstack(blocks: &[Matrix], rows: usize) -> Matrix {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// The same recursion over dense coefficient vectors.
pub(crate) struct Expander {
    pub index: MonomialIndex,
    cap: u128,
    /// Coefficient vectors of nonvanishing polynomials per degree.
    polys: Vec<Vec<Vec<f64>>>,
}

impl Expander {
    pub fn new(num_vars: usize, constant: f64, cap: u128) -> Self {
        Expander {
            index: MonomialIndex::new(num_vars),
            cap,
            polys: vec![vec![vec![constant]]],
        }
    }

    fn padded(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        out.resize(self.index.len(), 0.0);
        out
    }

    /// Coefficient vectors of the pre-candidates of degree `t`.
    pub fn candidates(&mut self, parents: &[Parent], t: usize) -> Result<Vec<Vec<f64>>> {
        let n = self.index.num_vars();
        let projected = count_monomials(n, t);
        if projected > self.cap {
            return Err(AviError::ExpansionTooLarge {
                projected,
                cap: self.cap,
            });
        }
        self.index.extend_to(t);
        let len = self.index.len();
        let below = self.index.len_up_to(t - 1);
        let mut out = Vec::with_capacity(parents.len());
        for p in parents {
            let mut v = vec![0.0; len];
            match *p {
                Parent::Variable(k) => v[self.index.var_index(k)] = 1.0,
                Parent::Product { linear, previous } => {
                    let lin = &self.polys[1][linear];
                    let prev = &self.polys[t - 1][previous];
                    let c0 = lin.first().copied().unwrap_or(0.0);
                    let slopes: Vec<f64> = (0..n)
                        .map(|k| lin.get(self.index.var_index(k)).copied().unwrap_or(0.0))
                        .collect();
                    for (j, &q) in prev.iter().enumerate().take(below) {
                        if q == 0.0 {
                            continue;
                        }
                        v[j] += c0 * q;
                        for (k, &a) in slopes.iter().enumerate() {
                            v[self.index.times_var(k, j)] += a * q;
                        }
                    }
                }
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn orthogonalized(&self, mut pre: Vec<Vec<f64>>, weights: &Matrix) -> Vec<Vec<f64>> {
        let stacked: Vec<Vec<f64>> = self
            .polys
            .iter()
            .flatten()
            .map(|p| self.padded(p))
            .collect();
        for (c, v) in pre.iter_mut().enumerate() {
            for (f, poly) in stacked.iter().enumerate() {
                let w = weights[(f, c)];
                if w == 0.0 {
                    continue;
                }
                for (dst, src) in v.iter_mut().zip(poly) {
                    *dst -= w * src;
                }
            }
        }
        pre
    }

    pub fn push_degree(
        &mut self,
        cand: &[Vec<f64>],
        eigvecs: &Matrix,
        partition: &[PolyKind],
    ) -> Vec<Vec<f64>> {
        let len = self.index.len();
        let polys: Vec<Vec<f64>> = (0..eigvecs.ncols())
            .map(|i| {
                let mut acc = vec![0.0; len];
                for (c, v) in cand.iter().enumerate() {
                    let w = eigvecs[(c, i)];
                    for (dst, src) in acc.iter_mut().zip(v) {
                        *dst += w * src;
                    }
                }
                acc
            })
            .collect();
        self.polys.push(
            polys
                .iter()
                .zip(partition)
                .filter(|(_, k)| **k == PolyKind::F)
                .map(|(p, _)| p.clone())
                .collect(),
        );
        polys
    }
}

/// Arithmetic operations spent on one gradient evaluation.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCount {
    pub mul: u64,
    pub add: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.mul + self.add
    }
}

/// Gradient of one handle at one point through the explicit product-rule sum
/// `∂h/∂x_k = Σ_c u_c (q_c ∂p_c/∂x_k + p_c ∂q_c/∂x_k) + Σ_f v_f ∂f/∂x_k`,
/// counting the arithmetic of that final combination. Values and gradients
/// of lower-degree polynomials at `x` are taken as already available, and the
/// coefficients `u`, `v` are per-polynomial constants; neither is counted.
pub fn gradient_at_point_counted(
    model: &BasisModel,
    h: PolyHandle,
    x: &[f64],
) -> Result<(Vec<f64>, OpCount)> {
    model.check_handle(h)?;
    let n = model.num_vars;
    if x.len() != n {
        return Err(AviError::Dimension(format!(
            "point of dimension {} for {n} variables",
            x.len()
        )));
    }
    if h.degree == 0 {
        return Ok((vec![0.0; n], OpCount::default()));
    }
    let pt = Matrix::from_row_slice(1, n, x);
    let mut replay = Replay::new(model.constant_value, &pt, true);
    for r in model.degrees.iter().take(h.degree - 1) {
        replay.advance(r);
    }
    let r = model.record(h.degree).expect("checked handle");
    let u: Vec<f64> = r.eigvecs.column(h.column).iter().copied().collect();
    let v: Vec<f64> = (-(&r.ortho_weights * r.eigvecs.column(h.column)))
        .iter()
        .copied()
        .collect();
    let fgrads = replay.stacked_grads().expect("gradients tracked");
    let deg = replay.vals.len();
    let grads = replay.grads.as_ref().expect("gradients tracked");
    let mut ops = OpCount::default();
    let mut out = vec![0.0; n];
    for (c, p) in r.parents.iter().enumerate() {
        match *p {
            Parent::Variable(k) => {
                // ∂x_k/∂x_j = δ_kj
                out[k] += u[c];
                ops.add += 1;
            }
            Parent::Product { linear, previous } => {
                let pval = replay.vals[1][(0, linear)];
                let qval = replay.vals[deg - 1][(0, previous)];
                for k in 0..n {
                    let dp = grads[1][k][(0, linear)];
                    let dq = grads[deg - 1][k][(0, previous)];
                    out[k] += u[c] * (qval * dp + pval * dq);
                    ops.mul += 3;
                    ops.add += 2;
                }
            }
        }
    }
    for (f, &vf) in v.iter().enumerate() {
        for k in 0..n {
            out[k] += vf * fgrads[k][(0, f)];
            ops.mul += 1;
            ops.add += 1;
        }
    }
    Ok((out, ops))
}
