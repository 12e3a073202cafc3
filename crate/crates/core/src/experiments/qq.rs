use serde::Serialize;
use statrs::function::erf::erfc_inv;

use super::harness::{compensated_sum, Harness};
use crate::density::{density_params, sample_sparse_vector};
use crate::ensembles::{draw_dictionary, measurement_count, synthesize, DictionaryKind};
use crate::error::{domain, Result};
use crate::output::Table;
use crate::rng::stream;
use crate::theory::{q_function, second_moment_achievable};

/// Number of probability levels in the emitted QQ table.
const QQ_LEVELS: usize = 199;

#[derive(Debug, Clone, Serialize)]
pub struct QqReport {
    pub alpha: f64,
    pub kappa: f64,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub pooled_count: usize,
    pub mean: f64,
    pub mean_std_err: f64,
    pub variance: f64,
    pub variance_theory: f64,
    /// Kolmogorov-Smirnov distance to `N(0, variance)`.
    pub ks_vs_measured: f64,
    /// KS distance to `N(0, variance_theory)`.
    pub ks_vs_theory: f64,
    /// KS distance to `N(0, 1)`.
    pub ks_vs_standard: f64,
    /// Slope of the empirical quantiles against standard normal quantiles.
    pub qq_slope_vs_standard: f64,
    /// Columns `prob, standard_quantile, empirical_quantile, theory_quantile`.
    #[serde(skip)]
    pub quantiles: Table,
}

fn std_normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

/// KS distance between sorted samples and a continuous CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0f64, |d, (i, x)| {
        let f = cdf(*x);
        d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
    })
}

/// Synthesises `w = D z / sqrt(n)` from representations drawn with the
/// marginal law and pools the entries of `w` over all trials.
pub fn qq_experiment(
    alpha: f64,
    kappa: f64,
    n: usize,
    trials: usize,
    seed: u64,
    harness: &Harness,
) -> Result<QqReport> {
    let params = density_params(kappa, alpha)?;
    let variance_theory = second_moment_achievable(alpha, kappa)?;
    let m = measurement_count(n, alpha);
    if m == 0 || trials == 0 {
        return domain("qq experiment needs m >= 1 and at least one trial");
    }
    let chunks = harness.map_trials(trials, |t| -> Result<Vec<f64>> {
        let d = draw_dictionary(m, n, DictionaryKind::Gaussian, &mut stream(seed, "qq-dictionary", &[t as u64]));
        let z = sample_sparse_vector(n, &params, &mut stream(seed, "qq-representation", &[t as u64]))?;
        let w = synthesize(&d, &z.into())?;
        Ok(w.iter().copied().collect())
    });
    let mut pooled = Vec::with_capacity(m * trials);
    for c in chunks {
        pooled.extend(c?);
    }
    let count = pooled.len() as f64;
    let mean = compensated_sum(pooled.iter().copied()) / count;
    let variance = compensated_sum(pooled.iter().map(|v| (v - mean) * (v - mean))) / (count - 1.0);
    let mean_std_err = (variance / count).sqrt();

    pooled.sort_by(f64::total_cmp);
    let normal_cdf = |s: f64| move |x: f64| q_function(-x / s);
    let ks_vs_measured = ks_statistic(&pooled, normal_cdf(variance.sqrt()));
    let ks_vs_theory = ks_statistic(&pooled, normal_cdf(variance_theory.sqrt()));
    let ks_vs_standard = ks_statistic(&pooled, normal_cdf(1.0));

    let mut quantiles = Table::new(["prob", "standard_quantile", "empirical_quantile", "theory_quantile"]);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for j in 0..QQ_LEVELS {
        let p = (j as f64 + 0.5) / QQ_LEVELS as f64;
        let zq = std_normal_quantile(p);
        let idx = ((p * count).floor() as usize).min(pooled.len() - 1);
        let eq = pooled[idx];
        sxy += zq * eq;
        sxx += zq * zq;
        quantiles.push(vec![p, zq, eq, zq * variance_theory.sqrt()]);
    }

    Ok(QqReport {
        alpha,
        kappa,
        n,
        m,
        trials,
        seed,
        pooled_count: pooled.len(),
        mean,
        mean_std_err,
        variance,
        variance_theory,
        ks_vs_measured,
        ks_vs_theory,
        ks_vs_standard,
        qq_slope_vs_standard: sxy / sxx,
        quantiles,
    })
}
