//! Diagnostics and experiment utilities built on fitted models.

pub mod dataset;
pub mod epsilon;
pub mod features;
pub mod invariance;
pub mod ratio;
pub mod subspace;

pub use dataset::{generate_dataset, DatasetSpec, Variety};
pub use epsilon::{epsilon_search, EpsilonSearch, EpsilonTarget};
pub use features::extract_features;
pub use invariance::{invariance_report, InvarianceReport};
pub use ratio::n_ratio;
