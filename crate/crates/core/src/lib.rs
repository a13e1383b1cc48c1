//! Basis construction for approximate vanishing ideals of point sets.
//!
//! Given a finite point set `X`, [`fit`] builds, degree by degree, a set of
//! nonvanishing polynomials `F` and approximately vanishing polynomials `G`
//! without any monomial order. The normalization that fixes the scale of
//! each polynomial is pluggable ([`NormalizationKind`]); with the gradient
//! normalization the result behaves consistently under translation and
//! scaling of the data, and [`reduce_basis`] can discard vanishing
//! polynomials whose gradients are generated by lower-degree ones.
//!
//! ```
//! use avi::{fit, FitConfig, NormalizationKind, PointSet};
//!
//! let x = PointSet::from_rows(&[
//!     vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0],
//! ]).unwrap();
//! let model = fit(&x, &FitConfig::new(0.0, NormalizationKind::Gradient)).unwrap();
//! assert_eq!(model.g_handles().len(), 4);
//! let values = model.evaluate(&model.g_handles(), &x).unwrap();
//! assert!(values.amax() < 1e-10);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod monomials;
pub mod oracle;
pub mod points;
pub mod reduction;
pub mod sbc;

pub use error::{AviError, Result};
pub use io::ModelFile;
pub use linalg::Matrix;
pub use model::{BasisModel, DegreeRecord, Parent, PolyHandle, PolyKind};
pub use oracle::DensePolynomial;
pub use points::{PointSet, Preprocessing};
pub use reduction::{reduce_basis, ReductionReport};
pub use sbc::{fit, FitConfig, NormalizationKind};
