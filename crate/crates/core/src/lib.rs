//! Projection pursuit as a family of pluggable projection indexes optimized
//! over the unit sphere, with the surrounding diagnostics:
//!
//! * [`linalg`]: covariance, symmetric eigendecomposition, standardizing and
//!   whitening.
//! * [`preprocess`]: dense count matrices, zero-fraction gene filtering,
//!   quantile normalization and label joining.
//! * [`info`]: entropy, KL divergence, histogram differential entropy,
//!   binned mutual information, Hermite polynomials, KS distance to N(0,1).
//! * [`indexes`]: variance, mean, cumulant and log-cosh negentropy, Fisher
//!   discriminant, canonical correlation, Johnson-Lindenstrauss distortion.
//! * [`pursuit`]: multi-restart sphere ascent with deflation, PCA, embedding.
//! * [`spectra`]: Marcenko-Pastur density, simulated Wishart spectra and the
//!   random-projection Gaussianity experiment.
//! * [`cli`]: the `projpursuit` command-line pipeline.
//!
//! ```
//! use projpursuit::indexes::{LogCoshIndex, ProjectionIndex};
//! use projpursuit::pursuit::{prepare, pursue_k, PursuitConfig};
//! use projpursuit::synth::{two_clusters, TwoClusterSpec};
//!
//! let spec = TwoClusterSpec { n: 400, ..Default::default() };
//! let clusters = two_clusters(spec, 1)?;
//! let index = LogCoshIndex::default();
//! let prepared = prepare(&clusters.data, index.preparation())?;
//! let cfg = PursuitConfig { restarts: 4, ..Default::default() };
//! let fit = pursue_k(&prepared.data, &index, 1, &cfg)?;
//! let axis = prepared.input_direction(&fit.directions.rows()[0])?;
//! assert!(axis.dot(&clusters.separation_axis).abs() > 0.9);
//! # Ok::<(), projpursuit::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod indexes;
pub mod info;
pub mod linalg;
pub mod manifest;
pub mod plot;
pub mod preprocess;
pub mod pursuit;
pub mod quad;
pub mod random;
pub mod spectra;
pub mod synth;

pub use error::{Error, Result};
