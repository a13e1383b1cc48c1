#![allow(dead_code)]

use avi::oracle::DensePolynomial;
use avi::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` points uniform in `[-1, 1]^n`.
pub fn uniform_points(rng: &mut ChaCha8Rng, m: usize, n: usize) -> PointSet {
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    PointSet::from_rows(&rows).unwrap()
}

/// A polynomial with every monomial of degree ≤ `deg` and coefficients in
/// `[-1, 1]`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, deg: usize) -> DensePolynomial {
    let mut terms = Vec::new();
    let mut stack = vec![(Vec::<u32>::new(), 0usize)];
    while let Some((e, d)) = stack.pop() {
        if e.len() == n {
            terms.push((e, rng.random_range(-1.0..1.0)));
            continue;
        }
        for k in 0..=(deg - d) {
            let mut e2 = e.clone();
            e2.push(k as u32);
            stack.push((e2, d + k));
        }
    }
    DensePolynomial::from_terms(n, terms).unwrap()
}
