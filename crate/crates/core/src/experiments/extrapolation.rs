use serde::Serialize;

use super::fit::{polyfit, PolyFit};
use super::harness::{Harness, MeanStat};
use crate::ensembles::{draw_instance, measurement_count, DictionaryKind};
use crate::error::{domain, Result};
use crate::rng::derive_seed;
use crate::solvers::{irls_min_l0, IrlsParams};
use crate::theory::kappa_star;

/// Averaged IRLS sparsity at one dictionary size.
#[derive(Debug, Clone, Serialize)]
pub struct SizePoint {
    pub n: usize,
    pub m: usize,
    pub sparsity: MeanStat,
    pub failed_trials: usize,
    pub unconverged_trials: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtrapolationReport {
    pub alpha: f64,
    pub n_list: Vec<usize>,
    pub points: Vec<SizePoint>,
    /// Sizes left out of the fit because no trial succeeded.
    pub excluded_n: Vec<usize>,
    pub fit: PolyFit,
    /// Fit intercept at `1/n = 0`.
    pub kappa_extrapolated: f64,
    pub kappa_theory: f64,
    pub weighted_fit: bool,
    pub trials: usize,
    pub seed: u64,
}

/// Quadratic fit of mean sparsity against `1/n`. Points without successful
/// trials are excluded; `weighted` uses inverse squared standard errors.
pub fn fit_extrapolation(points: &[SizePoint], weighted: bool) -> Result<(PolyFit, Vec<usize>)> {
    let (used, excluded): (Vec<&SizePoint>, Vec<&SizePoint>) =
        points.iter().partition(|p| p.sparsity.count > 0);
    let x: Vec<f64> = used.iter().map(|p| 1.0 / p.n as f64).collect();
    let y: Vec<f64> = used.iter().map(|p| p.sparsity.mean).collect();
    let w: Option<Vec<f64>> = weighted.then(|| {
        used.iter()
            .map(|p| {
                let se = p.sparsity.std_err;
                if se.is_finite() && se > 0.0 { 1.0 / (se * se) } else { 1.0 }
            })
            .collect()
    });
    let fit = polyfit(&x, &y, 2, w.as_deref())?;
    Ok((fit, excluded.iter().map(|p| p.n).collect()))
}

/// Averages the IRLS sparsity fraction over `trials` Gaussian instances for
/// each `n`, then extrapolates to `1/n = 0` with a quadratic fit.
pub fn sweep_min_sparsity(
    alpha: f64,
    n_list: &[usize],
    trials: usize,
    params: &IrlsParams,
    seed: u64,
    weighted: bool,
    harness: &Harness,
) -> Result<ExtrapolationReport> {
    let theory = kappa_star(alpha)?.kappa_star;
    params.validate()?;
    if trials < 10 {
        return domain(format!("need at least 10 trials, got {trials}"));
    }
    if n_list.len() < 3 {
        return domain("a quadratic fit needs at least three sizes");
    }
    for &n in n_list {
        if measurement_count(n, alpha) < 2 {
            return domain(format!("round(alpha * n) < 2 for n = {n}"));
        }
    }
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let outcomes = harness.map_trials(trials, |t| {
            let s = derive_seed(seed, "sweep", &[n as u64, t as u64]);
            let inst = draw_instance(n, alpha, DictionaryKind::Gaussian, s)?;
            irls_min_l0(&inst, params)
        });
        let mut good = Vec::with_capacity(trials);
        let mut failed = 0;
        let mut unconverged = 0;
        for o in outcomes {
            let sol = o?;
            if sol.failed() {
                failed += 1;
                continue;
            }
            unconverged += usize::from(!sol.converged);
            good.push(sol.sparsity_fraction);
        }
        points.push(SizePoint {
            n,
            m: measurement_count(n, alpha),
            sparsity: MeanStat::of(&good),
            failed_trials: failed,
            unconverged_trials: unconverged,
        });
    }
    let (fit, excluded_n) = fit_extrapolation(&points, weighted)?;
    Ok(ExtrapolationReport {
        alpha,
        n_list: n_list.to_vec(),
        kappa_extrapolated: fit.coeffs[0],
        fit,
        points,
        excluded_n,
        kappa_theory: theory,
        weighted_fit: weighted,
        trials,
        seed,
    })
}
