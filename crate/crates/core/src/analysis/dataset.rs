//! Seeded synthetic point sets on algebraic varieties.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};
use crate::linalg::{pinv, Matrix, DEFAULT_RANK_TOL};
use crate::oracle::DensePolynomial;
use crate::points::PointSet;

fn default_half_width() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Variety {
    /// Ellipses `(a cos θ, b sin θ)` for each `(a, b)`, all rotated by
    /// `rotation` radians. Samples are spread round-robin over the ellipses
    /// with uniform θ.
    ConcentricEllipses {
        radii: Vec<(f64, f64)>,
        rotation: f64,
    },
    /// Common zeros of the polynomials, reached by Gauss-Newton from uniform
    /// starts in `[-w, w]^n`.
    PolynomialSystem {
        polynomials: Vec<DensePolynomial>,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
    /// Given points, used in order (cycling if fewer than `samples`).
    Custom { points: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub variety: Variety,
    pub samples: usize,
    /// Each entry adds the variable `Σ_k w_k x_k` over the base coordinates.
    #[serde(default)]
    pub extra_linear_vars: Vec<Vec<f64>>,
    #[serde(default)]
    pub noise_std_fraction: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Weight vector `(k, 1 − k)` of `y = k x1 + (1 − k) x2`.
pub fn two_way_mix(k: f64) -> Vec<f64> {
    vec![k, 1.0 - k]
}

/// Weight vector `(k, l, 1 − k − l)`.
pub fn three_way_mix(k: f64, l: f64) -> Vec<f64> {
    vec![k, l, 1.0 - k - l]
}

/// Three concentric ellipses rotated by 3π/4 with five mixed variables.
pub fn ellipses_spec(samples: usize, noise_std_fraction: f64, seed: u64) -> DatasetSpec {
    let s = 2f64.sqrt();
    DatasetSpec {
        variety: Variety::ConcentricEllipses {
            radii: vec![(s, 1.0 / s), (2.0 * s, 2.0 / s), (3.0 * s, 3.0 / s)],
            rotation: 3.0 * PI / 4.0,
        },
        samples,
        extra_linear_vars: [0.0, 0.2, 0.5, 0.8, 1.0]
            .iter()
            .map(|&k| two_way_mix(k))
            .collect(),
        noise_std_fraction,
        seed,
    }
}

/// The zero set of `{x1 x3 − x2², x1³ − x2 x3}`.
pub fn cubic_system() -> Vec<DensePolynomial> {
    let p = |t: &[([u32; 3], f64)]| {
        DensePolynomial::from_terms(3, t.iter().map(|(e, c)| (e.to_vec(), *c))).expect("arity 3")
    };
    vec![
        p(&[([1, 0, 1], 1.0), ([0, 2, 0], -1.0)]),
        p(&[([3, 0, 0], 1.0), ([0, 1, 1], -1.0)]),
    ]
}

/// The cubic system with nine mixed variables.
pub fn cubic_system_spec(samples: usize, noise_std_fraction: f64, seed: u64) -> DatasetSpec {
    let w = [0.2, 0.5, 0.8];
    DatasetSpec {
        variety: Variety::PolynomialSystem {
            polynomials: cubic_system(),
            half_width: 1.5,
        },
        samples,
        extra_linear_vars: w
            .iter()
            .flat_map(|&k| w.iter().map(move |&l| three_way_mix(k, l)))
            .collect(),
        noise_std_fraction,
        seed,
    }
}

fn system_residual(polys: &[DensePolynomial], x: &[f64]) -> Result<DVector<f64>> {
    Ok(DVector::from_iterator(
        polys.len(),
        polys
            .iter()
            .map(|p| p.eval(x))
            .collect::<Result<Vec<_>>>()?,
    ))
}

/// Gauss-Newton projection of `x0` onto the zero set, or `None` when it does
/// not converge.
fn project(
    polys: &[DensePolynomial],
    grads: &[Vec<DensePolynomial>],
    x0: Vec<f64>,
) -> Result<Option<Vec<f64>>> {
    let n = x0.len();
    let mut x = x0;
    for _ in 0..200 {
        let r = system_residual(polys, &x)?;
        if r.amax() <= 1e-14 {
            return Ok(Some(x));
        }
        let mut j = Matrix::zeros(polys.len(), n);
        for (i, g) in grads.iter().enumerate() {
            for k in 0..n {
                j[(i, k)] = g[k].eval(&x)?;
            }
        }
        let step = pinv(&j, DEFAULT_RANK_TOL)? * r;
        if !step.iter().all(|s| s.is_finite()) {
            return Ok(None);
        }
        for k in 0..n {
            x[k] -= step[k];
        }
    }
    let r = system_residual(polys, &x)?;
    Ok((r.amax() <= 1e-12).then_some(x))
}

/// Points on the variety, before mixing, centering and noise.
pub fn sample_variety(
    variety: &Variety,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<f64>>> {
    if samples == 0 {
        return Err(AviError::InvalidArgument(
            "at least one sample is required".into(),
        ));
    }
    match variety {
        Variety::ConcentricEllipses { radii, rotation } => {
            if radii.is_empty() {
                return Err(AviError::InvalidArgument("no ellipse radii given".into()));
            }
            let (s, c) = rotation.sin_cos();
            Ok((0..samples)
                .map(|i| {
                    let (a, b) = radii[i % radii.len()];
                    let th: f64 = rng.random_range(0.0..2.0 * PI);
                    let (u, v) = (a * th.cos(), b * th.sin());
                    vec![c * u - s * v, s * u + c * v]
                })
                .collect())
        }
        Variety::PolynomialSystem {
            polynomials,
            half_width,
        } => {
            let n = polynomials
                .first()
                .map(|p| p.num_vars())
                .ok_or_else(|| AviError::InvalidArgument("polynomial system is empty".into()))?;
            if polynomials.iter().any(|p| p.num_vars() != n) {
                return Err(AviError::Dimension(
                    "polynomials in different numbers of variables".into(),
                ));
            }
            let grads: Vec<Vec<DensePolynomial>> =
                polynomials.iter().map(|p| p.gradient()).collect();
            let mut out = Vec::with_capacity(samples);
            let mut attempts = 0usize;
            while out.len() < samples {
                attempts += 1;
                if attempts > 1000 * samples {
                    return Err(AviError::InvalidArgument(
                        "could not sample the polynomial system".into(),
                    ));
                }
                let x0: Vec<f64> = (0..n)
                    .map(|_| rng.random_range(-*half_width..*half_width))
                    .collect();
                if let Some(x) = project(polynomials, &grads, x0)? {
                    if x.iter().all(|v| v.abs() <= 2.0 * half_width) {
                        out.push(x);
                    }
                }
            }
            Ok(out)
        }
        Variety::Custom { points } => {
            if points.is_empty() {
                return Err(AviError::EmptyPointSet);
            }
            Ok((0..samples)
                .map(|i| points[i % points.len()].clone())
                .collect())
        }
    }
}

/// Sample, append mixed variables, mean-center, then add Gaussian noise with
/// standard deviation `noise_std_fraction` times the mean absolute coordinate.
pub fn generate_dataset(spec: &DatasetSpec) -> Result<PointSet> {
    if !(spec.noise_std_fraction >= 0.0) || !spec.noise_std_fraction.is_finite() {
        return Err(AviError::InvalidArgument(format!(
            "noise fraction must be non-negative, got {}",
            spec.noise_std_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base = sample_variety(&spec.variety, spec.samples, &mut rng)?;
    let n = base[0].len();
    if let Some(w) = spec.extra_linear_vars.iter().find(|w| w.len() != n) {
        return Err(AviError::Dimension(format!(
            "mixing weights of length {} for {n} base coordinates",
            w.len()
        )));
    }
    let rows: Vec<Vec<f64>> = base
        .into_iter()
        .map(|mut x| {
            let extra: Vec<f64> = spec
                .extra_linear_vars
                .iter()
                .map(|w| w.iter().zip(&x).map(|(a, b)| a * b).sum())
                .collect();
            x.extend(extra);
            x
        })
        .collect();
    let mut m = PointSet::from_rows(&rows)?.centered().matrix().clone();
    if spec.noise_std_fraction > 0.0 {
        let sigma =
            spec.noise_std_fraction * m.iter().map(|v| v.abs()).sum::<f64>() / m.len() as f64;
        let normal = Normal::new(0.0, sigma)
            .map_err(|e| AviError::InvalidArgument(format!("noise distribution: {e}")))?;
        for i in 0..m.nrows() {
            for k in 0..m.ncols() {
                m[(i, k)] += normal.sample(&mut rng);
            }
        }
    }
    PointSet::new(m)
}
