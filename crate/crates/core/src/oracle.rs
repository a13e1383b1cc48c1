//! Brute-force symbolic polynomials.
//!
//! [`DensePolynomial`] stores an explicit exponent-to-coefficient map. It is
//! the independent reference for everything the structural basis model
//! computes numerically: products, partial derivatives, evaluation and
//! finite differences. Integer-valued coefficients of moderate size stay
//! exact under all operations here, which is what the hard-equality tests
//! rely on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "TermList", try_from = "TermList")]
pub struct DensePolynomial {
    num_vars: usize,
    terms: BTreeMap<Exponent, f64>,
}

/// Serialized form: `{"num_vars": n, "terms": [[exponent, coefficient], ...]}`.
#[derive(Serialize, Deserialize)]
struct TermList {
    num_vars: usize,
    terms: Vec<(Exponent, f64)>,
}

impl From<DensePolynomial> for TermList {
    fn from(p: DensePolynomial) -> Self {
        TermList {
            num_vars: p.num_vars,
            terms: p.terms.into_iter().collect(),
        }
    }
}

impl TryFrom<TermList> for DensePolynomial {
    type Error = AviError;

    fn try_from(t: TermList) -> Result<Self> {
        DensePolynomial::from_terms(t.num_vars, t.terms)
    }
}

impl DensePolynomial {
    pub fn zero(num_vars: usize) -> Self {
        DensePolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: f64) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    /// The polynomial `x_k` (zero-based `k`).
    pub fn variable(num_vars: usize, k: usize) -> Result<Self> {
        if k >= num_vars {
            return Err(AviError::InvalidArgument(format!(
                "variable index {k} out of range for {num_vars} variables"
            )));
        }
        let mut e = vec![0; num_vars];
        e[k] = 1;
        let mut p = Self::zero(num_vars);
        p.add_term(e, 1.0);
        Ok(p)
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, f64)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(AviError::Dimension(format!(
                    "exponent of length {} for {num_vars} variables",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponent, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, f64> {
        &self.terms
    }

    pub fn coefficient(&self, e: &[u32]) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    /// Euclidean norm of the coefficients.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Drop coefficients with magnitude at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        DensePolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(AviError::Dimension(format!(
                "polynomials in {} and {} variables",
                self.num_vars, other.num_vars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `k` (zero-based).
    pub fn diff(&self, k: usize) -> Result<Self> {
        if k >= self.num_vars {
            return Err(AviError::InvalidArgument(format!(
                "derivative index {k} out of range for {} variables",
                self.num_vars
            )));
        }
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[k] -= 1;
            out.add_term(d, c * e[k] as f64);
        }
        Ok(out)
    }

    /// Symbolic gradient, one polynomial per variable.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.num_vars)
            .map(|k| self.diff(k).expect("index in range"))
            .collect()
    }

    /// Direct monomial-by-monomial evaluation.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.num_vars {
            return Err(AviError::Dimension(format!(
                "point of dimension {} for {} variables",
                x.len(),
                self.num_vars
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&p, &xi)| acc * xi.powi(p as i32))
            })
            .sum())
    }
}

impl std::fmt::Display for DensePolynomial {
    /// Terms by descending degree, variables named `x1..xn`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exponent, &f64)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| (b.iter().sum::<u32>(), b).cmp(&(a.iter().sum::<u32>(), a)));
        for (i, (e, c)) in terms.iter().enumerate() {
            let sign = match (i, **c < 0.0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sign}{}", c.abs())?;
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{}", k + 1)?,
                    _ => write!(f, "*x{}^{p}", k + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Sum of two polynomials.
pub fn poly_add(a: &DensePolynomial, b: &DensePolynomial) -> Result<DensePolynomial> {
    a.add(b)
}

/// Product of two polynomials.
pub fn poly_mul(a: &DensePolynomial, b: &DensePolynomial) -> Result<DensePolynomial> {
    a.mul(b)
}

pub fn poly_scale(a: &DensePolynomial, c: f64) -> DensePolynomial {
    a.scale(c)
}

pub fn poly_diff(p: &DensePolynomial, k: usize) -> Result<DensePolynomial> {
    p.diff(k)
}

pub fn poly_eval(p: &DensePolynomial, x: &[f64]) -> Result<f64> {
    p.eval(x)
}

/// Central differences `(f(x + h e_k) − f(x − h e_k)) / 2h`.
pub fn finite_diff_gradient<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    if !(h > 0.0) {
        return Err(AviError::InvalidArgument(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        probe[k] = x[k] + h;
        let up = f(&probe);
        probe[k] = x[k] - h;
        let down = f(&probe);
        probe[k] = x[k];
        out.push((up - down) / (2.0 * h));
    }
    Ok(out)
}
