//! Optimization-based cover learning for point clouds.
//!
//! The crate learns a *fuzzy cover* of a point cloud (a membership matrix
//! whose rows have maximum entry 1) by minimizing a sum of measure,
//! geometry, zero-dimensional topology and regularization losses defined on
//! a neighborhood graph. The learned cover induces a filtered nerve whose
//! persistent homology summarizes the shape of the data with very few
//! vertices.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`]: point clouds, k-NN / UMAP neighborhood graphs, nets and
//!   synthetic samplers.
//! * [`complex`]: covers, fuzzy covers, nerves and the filtered nerve of a
//!   fuzzy cover.
//! * [`persistence`]: union-find H₀ suplevel persistence with gradient
//!   attribution, and Z/2 boundary-matrix reduction.
//! * [`losses`]: the four loss estimators and their gradients.
//! * [`learner`]: softmax / p-normalization parametrization, spectral
//!   initialization, Adam, and [`learner::shape_discover`].
//! * [`baselines`]: Ball Mapper, 1D Mapper, witness (v = 0) and Vietoris–Rips.
//! * [`eval`]: homology recovery quotient, complex sizes and the
//!   topological-inference harness.
//! * [`cli`]: the `covercraft` command-line front-end.

// Index loops are the clearer form for the dense numeric kernels here.
#![allow(clippy::needless_range_loop)]

mod error;

pub mod baselines;
pub mod cli;
pub mod complex;
pub mod eval;
pub mod geometry;
pub mod learner;
pub mod losses;
pub mod persistence;

pub use error::{Error, Result};
pub(crate) use error::ensure;

pub use complex::{Cover, FilteredComplex, FuzzyCover, Simplex, SimplicialComplex};
pub use geometry::{PointCloud, WeightedGraph};
pub use learner::{shape_discover, LearnConfig, TrainTrace};
pub use persistence::Barcode;
