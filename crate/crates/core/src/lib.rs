//! Bayes factors for one- and two-sample effect-size tests.
//!
//! Three routes are provided: the closed-form JZS Bayes factor by quadrature,
//! the Savage-Dickey density ratio on MCMC draws, and encompassing priors on
//! MCMC draws for directional and interval-null hypotheses. The
//! [`simulation`] module benchmarks the sampling route against the
//! closed-form one.
//!
//! ```
//! use bfkit::bayesfactor::jzs_bf;
//!
//! let r = jzs_bf(2.5705, 10, 1.0).unwrap();
//! assert!((r.bf01 - 0.4165).abs() < 1e-3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bayesfactor;
pub mod data;
pub mod density;
pub mod distributions;
pub mod error;
pub mod models;
pub mod quadrature;
pub mod sampler;
pub mod serde_float;
pub mod simulation;

pub use bayesfactor::{BayesFactorResult, Direction, HypothesisSpec, Method};
pub use error::{Error, Result};
pub use models::{Design, ModelSpec, ObservedSample, PriorFamily, PriorSpec};
pub use sampler::{sample_posterior, PosteriorDraws, SamplerSettings};
