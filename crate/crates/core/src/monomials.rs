//! Graded indexing of monomials, used for coefficient vectors.
//!
//! Monomials of total degree `≤ t` in `n` variables are laid out degree by
//! degree; within one degree, exponents are listed with the first variable's
//! power descending. Only inner products of coefficient vectors are consumed
//! downstream, so the layout is an internal detail.

use std::collections::HashMap;

use crate::error::{AviError, Result};
use crate::oracle::{DensePolynomial, Exponent};

/// Number of monomials of degree at most `t` in `n` variables, `C(n + t, t)`.
/// Saturates at `u128::MAX`.
pub fn count_monomials(n: usize, t: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=t as u128 {
        acc = match acc.checked_mul(n as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Debug, Clone)]
pub struct MonomialIndex {
    num_vars: usize,
    max_degree: usize,
    monomials: Vec<Exponent>,
    lookup: HashMap<Exponent, usize>,
    /// `degree_start[d]` is the offset of the first degree-`d` monomial.
    degree_start: Vec<usize>,
    /// `times_var[k][j]` is the index of `monomial_j · x_k`, for every
    /// monomial below the top degree.
    times_var: Vec<Vec<usize>>,
}

fn push_degree(n: usize, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
    if prefix.len() == n - 1 {
        let used: u32 = prefix.iter().sum();
        let mut e = prefix.clone();
        e.push(d as u32 - used);
        out.push(e);
        return;
    }
    let used: u32 = prefix.iter().sum();
    for p in (0..=(d as u32 - used)).rev() {
        prefix.push(p);
        push_degree(n, d, prefix, out);
        prefix.pop();
    }
}

impl MonomialIndex {
    pub fn new(num_vars: usize) -> Self {
        let zero = vec![0; num_vars];
        let mut lookup = HashMap::new();
        lookup.insert(zero.clone(), 0);
        MonomialIndex {
            num_vars,
            max_degree: 0,
            monomials: vec![zero],
            lookup,
            degree_start: vec![0, 1],
            times_var: vec![Vec::new(); num_vars],
        }
    }

    pub fn up_to(num_vars: usize, degree: usize) -> Self {
        let mut idx = Self::new(num_vars);
        idx.extend_to(degree);
        idx
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Number of monomials of degree at most `d` (`d ≤ max_degree`).
    pub fn len_up_to(&self, d: usize) -> usize {
        self.degree_start[d + 1]
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.lookup.get(e).copied()
    }

    /// Index of `x_k` (degree one must be present).
    pub fn var_index(&self, k: usize) -> usize {
        let mut e = vec![0; self.num_vars];
        e[k] = 1;
        self.lookup[&e]
    }

    /// Index of `monomial_j · x_k`; `j` must be below the top degree.
    pub fn times_var(&self, k: usize, j: usize) -> usize {
        self.times_var[k][j]
    }

    pub fn extend_to(&mut self, degree: usize) {
        if self.num_vars == 0 {
            self.max_degree = self.max_degree.max(degree);
            return;
        }
        while self.max_degree < degree {
            let d = self.max_degree + 1;
            let mut fresh = Vec::new();
            push_degree(self.num_vars, d, &mut Vec::new(), &mut fresh);
            for e in fresh {
                self.lookup.insert(e.clone(), self.monomials.len());
                self.monomials.push(e);
            }
            self.degree_start.push(self.monomials.len());
            let lo = self.degree_start[d - 1];
            let hi = self.degree_start[d];
            for k in 0..self.num_vars {
                for j in lo..hi {
                    let mut e = self.monomials[j].clone();
                    e[k] += 1;
                    let target = self.lookup[&e];
                    self.times_var[k].push(target);
                }
            }
            self.max_degree = d;
        }
    }

    /// Dense coefficient vector of `p` in this layout.
    pub fn dense(&self, p: &DensePolynomial) -> Result<Vec<f64>> {
        if p.num_vars() != self.num_vars {
            return Err(AviError::Dimension(format!(
                "polynomial in {} variables for an index over {}",
                p.num_vars(),
                self.num_vars
            )));
        }
        let mut out = vec![0.0; self.len()];
        for (e, c) in p.terms() {
            let deg: usize = e.iter().map(|&x| x as usize).sum();
            let i = self.index_of(e).ok_or(AviError::DegreeOverflow {
                degree: deg,
                bound: self.max_degree,
            })?;
            out[i] = *c;
        }
        Ok(out)
    }

    /// Inverse of [`MonomialIndex::dense`]; exact zeros are dropped.
    pub fn sparse(&self, coeffs: &[f64]) -> DensePolynomial {
        DensePolynomial::from_terms(
            self.num_vars,
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, c)| (self.monomials[i].clone(), *c)),
        )
        .expect("exponents have the index's arity")
    }
}

/// Coefficient vector of `p` over all monomials of degree at most
/// `degree_bound`, of length `C(n + t, t)`.
pub fn coefficient_vector(p: &DensePolynomial, degree_bound: usize) -> Result<Vec<f64>> {
    if let Some(d) = p.degree() {
        if d > degree_bound {
            return Err(AviError::DegreeOverflow {
                degree: d,
                bound: degree_bound,
            });
        }
    }
    MonomialIndex::up_to(p.num_vars(), degree_bound).dense(p)
}
