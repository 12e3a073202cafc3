//! Sparse-recovery machinery: residual energy, weighted minimum-norm solves,
//! IRLS, exhaustive best-support search and least squares on a support.

mod brute_force;
mod irls;
mod least_squares;

pub use brute_force::{brute_force_best_ksupport, BestSupport, MAX_ATOMS, MAX_SUBSETS};
pub use irls::{
    irls_min_l0, min_norm_solution, weighted_min_norm, IrlsParams, MinNormSolution, StageTrace,
    DEFAULT_MAX_CONDITION,
};
pub use least_squares::ls_on_support;

use nalgebra::DVector;
use serde::Serialize;

use crate::ensembles::ProblemInstance;
use crate::error::{Error, Result};

/// Candidate representation with diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct SparseSolution {
    #[serde(skip)]
    pub z: DVector<f64>,
    pub support: Vec<usize>,
    pub sparsity_fraction: f64,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when a Gram solve failed; `z` is then the last good iterate.
    pub failure: Option<String>,
    #[serde(skip)]
    pub stages: Vec<StageTrace>,
}

impl SparseSolution {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

/// `(1/m) || D z / sqrt(n) - omega ||^2`.
pub fn energy(z: &DVector<f64>, instance: &ProblemInstance) -> Result<f64> {
    if z.len() != instance.n {
        return Err(Error::Dimension {
            expected: instance.n,
            got: z.len(),
        });
    }
    let scale = 1.0 / (instance.n as f64).sqrt();
    let resid = &instance.dictionary * z * scale - &instance.omega;
    Ok(resid.norm_squared() / instance.m as f64)
}

/// Indices with `|z_i| > rel_tol * max |z|`.
pub fn support_of(z: &DVector<f64>, rel_tol: f64) -> Vec<usize> {
    let max = z.amax();
    if max == 0.0 {
        return Vec::new();
    }
    let cut = rel_tol * max;
    z.iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > cut)
        .map(|(i, _)| i)
        .collect()
}
