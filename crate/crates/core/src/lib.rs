//! Restricted-isometry matrices built by hashing the rows of a fast structured
//! ensemble (subsampled Fourier/Hadamard, partial circulant) into buckets with
//! random signs.
//!
//! The operator `Φ/√(mB)` is applied matrix-free in `O(d log d + mB)` time, and
//! the crate ships the tooling around it: Johnson-Lindenstrauss embeddings via a
//! random sign diagonal, exact and Monte-Carlo restricted-isometry constants,
//! parameter planning, and IHT/CoSaMP sparse recovery.

pub mod analysis;
pub mod ensembles;
pub mod error;
pub mod io;
pub mod jl;
pub mod linalg;
pub mod recovery;
pub mod seed;
pub mod sketch;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use ensembles::{EnsembleKind, RowSource};
pub use sketch::{SignTable, SketchOperator, SketchSpec};

/// Library version embedded in every serialized report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
