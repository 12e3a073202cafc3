use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{energy, support_of, SparseSolution};
use crate::ensembles::ProblemInstance;
use crate::error::{domain, Error, Result};
use crate::linalg::PivotedCholesky;

/// Gram solves whose condition estimate exceeds this are reported as failures.
pub const DEFAULT_MAX_CONDITION: f64 = 1e14;

/// Pivots below this fraction of the largest Gram diagonal end the factorization.
const RANK_TOL: f64 = 1e-15;

/// Regularised `l_p` IRLS with continuation in `p` and `epsilon`.
///
/// For every `p` in `p_schedule`, `epsilon` starts at `epsilon_init` and is
/// divided by `epsilon_decay` after each stage until it drops below
/// `epsilon_min`. A stage is a run of at most `max_iters` reweighted solves
/// at fixed `(p, epsilon)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IrlsParams {
    pub p_schedule: Vec<f64>,
    pub epsilon_init: f64,
    pub epsilon_decay: f64,
    pub epsilon_min: f64,
    pub max_iters: usize,
    /// Stage ends when `||z_new - z|| / ||z||` falls below this.
    pub convergence_tol: f64,
    /// An entry counts as non-zero when `|z_i| > zero_tol * max |z|`.
    pub zero_tol: f64,
    pub max_condition: f64,
}

impl Default for IrlsParams {
    fn default() -> Self {
        IrlsParams {
            p_schedule: vec![1.0, 0.5, 0.1],
            epsilon_init: 1.0,
            epsilon_decay: 10.0,
            epsilon_min: 1e-8,
            max_iters: 100,
            convergence_tol: 1e-8,
            zero_tol: 1e-6,
            max_condition: DEFAULT_MAX_CONDITION,
        }
    }
}

impl IrlsParams {
    pub fn validate(&self) -> Result<()> {
        if self.p_schedule.is_empty() {
            return domain("p_schedule must not be empty");
        }
        if let Some(p) = self.p_schedule.iter().find(|p| !(**p > 0.0 && **p <= 2.0)) {
            return domain(format!("p must lie in (0, 2], got {p}"));
        }
        if !(self.epsilon_init > 0.0 && self.epsilon_min > 0.0 && self.epsilon_min <= self.epsilon_init) {
            return domain("need 0 < epsilon_min <= epsilon_init");
        }
        if !(self.epsilon_decay > 1.0) {
            return domain("epsilon_decay must exceed 1");
        }
        if self.max_iters == 0 {
            return domain("max_iters must be positive");
        }
        if !(self.convergence_tol > 0.0 && self.zero_tol >= 0.0 && self.zero_tol < 1.0) {
            return domain("need convergence_tol > 0 and zero_tol in [0, 1)");
        }
        if !(self.max_condition > 1.0) {
            return domain("max_condition must exceed 1");
        }
        Ok(())
    }
}

/// Surrogate objective values recorded within one `(p, epsilon)` stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTrace {
    pub p: f64,
    pub epsilon: f64,
    pub converged: bool,
    /// `sum_i (z_i^2 + epsilon)^(p/2)` at the stage's starting point and
    /// after every iteration.
    pub surrogate: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct MinNormSolution {
    pub z: DVector<f64>,
    pub condition: f64,
}

/// `z = W D^T (D W D^T)^{-1} b` with `W = diag(weights)`: the minimiser of
/// `sum_i z_i^2 / w_i` subject to `D z = b`.
pub fn weighted_min_norm(
    dictionary: &DMatrix<f64>,
    rhs: &DVector<f64>,
    weights: &DVector<f64>,
    max_condition: f64,
) -> Result<MinNormSolution> {
    let (m, n) = dictionary.shape();
    if weights.len() != n {
        return Err(Error::Dimension { expected: n, got: weights.len() });
    }
    if rhs.len() != m {
        return Err(Error::Dimension { expected: m, got: rhs.len() });
    }
    if m > n {
        return domain(format!("need m <= n, got m = {m}, n = {n}"));
    }
    if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return domain("weights must be positive and finite");
    }
    let mut scaled = dictionary.clone();
    for (j, w) in weights.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*w);
    }
    let gram = &scaled * dictionary.transpose();
    let chol = PivotedCholesky::new(&gram, RANK_TOL);
    let condition = chol.condition_estimate();
    if !(condition <= max_condition) {
        return Err(Error::Numerical(format!(
            "Gram matrix condition estimate {condition:.3e} exceeds {max_condition:.3e}"
        )));
    }
    let lambda = chol
        .solve(rhs)
        .ok_or_else(|| Error::Numerical("rank-deficient Gram matrix".into()))?;
    let z = scaled.tr_mul(&lambda);
    Ok(MinNormSolution { z, condition })
}

/// Weighted minimum-norm exact representation of the instance's noise.
pub fn min_norm_solution(instance: &ProblemInstance, weights: &DVector<f64>) -> Result<MinNormSolution> {
    let rhs = &instance.omega * (instance.n as f64).sqrt();
    weighted_min_norm(&instance.dictionary, &rhs, weights, DEFAULT_MAX_CONDITION)
}

fn surrogate(z: &DVector<f64>, p: f64, eps: f64) -> f64 {
    z.iter().map(|v| (v * v + eps).powf(0.5 * p)).sum()
}

/// Approximates the sparsest exact representation by IRLS.
///
/// Gram failures and iteration exhaustion are reported on the returned
/// solution rather than as errors.
pub fn irls_min_l0(instance: &ProblemInstance, params: &IrlsParams) -> Result<SparseSolution> {
    params.validate()?;
    let n = instance.n;
    let rhs = &instance.omega * (n as f64).sqrt();
    let d = &instance.dictionary;

    let mut failure = None;
    let mut iterations = 0;
    let mut stages = Vec::new();
    let mut last_converged = false;

    let mut z = match weighted_min_norm(d, &rhs, &DVector::from_element(n, 1.0), params.max_condition) {
        Ok(s) => s.z,
        Err(e) => {
            return Ok(finish(instance, DVector::zeros(n), params, 0, false, Some(e.to_string()), stages));
        }
    };

    'outer: for &p in &params.p_schedule {
        let mut eps = params.epsilon_init;
        loop {
            let mut trace = StageTrace {
                p,
                epsilon: eps,
                converged: false,
                surrogate: vec![surrogate(&z, p, eps)],
            };
            for _ in 0..params.max_iters {
                let weights = z.map(|v| (v * v + eps).powf(1.0 - 0.5 * p));
                let next = match weighted_min_norm(d, &rhs, &weights, params.max_condition) {
                    Ok(s) => s.z,
                    Err(e) => {
                        failure = Some(e.to_string());
                        stages.push(trace);
                        break 'outer;
                    }
                };
                iterations += 1;
                let change = (&next - &z).norm() / z.norm().max(f64::MIN_POSITIVE);
                z = next;
                trace.surrogate.push(surrogate(&z, p, eps));
                if change < params.convergence_tol {
                    trace.converged = true;
                    break;
                }
            }
            last_converged = trace.converged;
            stages.push(trace);
            if eps <= params.epsilon_min {
                break;
            }
            eps /= params.epsilon_decay;
        }
    }

    let converged = failure.is_none() && last_converged;
    Ok(finish(instance, z, params, iterations, converged, failure, stages))
}

fn finish(
    instance: &ProblemInstance,
    z: DVector<f64>,
    params: &IrlsParams,
    iterations: usize,
    converged: bool,
    failure: Option<String>,
    stages: Vec<StageTrace>,
) -> SparseSolution {
    let support = support_of(&z, params.zero_tol);
    let energy = energy(&z, instance).unwrap_or(f64::NAN);
    SparseSolution {
        sparsity_fraction: support.len() as f64 / instance.n as f64,
        support,
        energy,
        iterations,
        converged,
        failure,
        stages,
        z,
    }
}
