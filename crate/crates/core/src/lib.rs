//! Sparse representations of white Gaussian noise over i.i.d. overcomplete
//! dictionaries.
//!
//! For a dictionary with measurement ratio `alpha = m / n`, an exact
//! representation `omega = D z / sqrt(n)` of a white Gaussian noise vector
//! exists in the large-system limit only when the sparsity fraction of `z`
//! is at least `kappa_star(alpha)`. This crate provides:
//!
//! - [`theory`]: the threshold maps `kappa_star` / `alpha_star`, the
//!   minimal residual energy and optimal norm below the threshold.
//! - [`density`]: the marginal law of the non-zero entries of the
//!   minimal-norm representation, with an exact tail sampler.
//! - [`ensembles`]: seedable Gaussian / Bernoulli dictionaries and noise.
//! - [`solvers`]: residual energy, weighted minimum-norm solves, IRLS,
//!   exhaustive best-k-support search and least squares on a support.
//! - [`experiments`]: the Monte Carlo protocols (threshold extrapolation,
//!   QQ validation, converse energy, noisy compressed-sensing region / MSE).
//! - [`cli`]: the `swn` command line front end.
//!
//! ```
//! let point = swn::theory::alpha_star(0.1).unwrap();
//! assert!((point.alpha_star - 0.4393).abs() < 1e-3);
//! ```

pub mod cli;
pub mod density;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod output;
pub mod rng;
pub mod solvers;
pub mod theory;

pub use error::{Error, Result};
