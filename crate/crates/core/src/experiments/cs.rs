use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::harness::{Harness, MeanStat};
use crate::density::support_size;
use crate::ensembles::{draw_dictionary, draw_noise, measurement_count, DictionaryKind};
use crate::error::{domain, Error, Result};
use crate::rng::stream;
use crate::solvers::ls_on_support;
use crate::theory::kappa_star;

/// Law of the non-zero data entries in the MSE experiment.
pub const DATA_PRIOR: &str = "iid standard normal on a uniform random support";

/// Decodable-region geometry at `(alpha, kappa_x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CsRegion {
    pub alpha: f64,
    pub kappa_x: f64,
    pub kappa_star: f64,
    /// `kappa_x + kappa_star - kappa_x kappa_star`.
    pub kappa0: f64,
    /// Largest decodable `kappa_x` with noise: `(alpha - kappa_star) / (1 - kappa_star)`.
    pub noisy_bound: f64,
    pub decodable: bool,
    /// Noiseless weak threshold `alpha > kappa_x`.
    pub noiseless_decodable: bool,
}

pub fn cs_region(alpha: f64, kappa_x: f64) -> Result<CsRegion> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    if !(kappa_x > 0.0 && kappa_x < 1.0) {
        return domain(format!("kappa_x must lie in (0, 1), got {kappa_x}"));
    }
    let ks = kappa_star(alpha)?.kappa_star;
    let noisy_bound = (alpha - ks) / (1.0 - ks);
    Ok(CsRegion {
        alpha,
        kappa_x,
        kappa_star: ks,
        kappa0: kappa_x + ks - kappa_x * ks,
        noisy_bound,
        decodable: kappa_x <= noisy_bound,
        noiseless_decodable: alpha > kappa_x,
    })
}

/// Region geometry plus the measured LS error on an emulated oracle support.
#[derive(Debug, Clone, Serialize)]
pub struct CsOutcome {
    #[serde(flatten)]
    pub region: CsRegion,
    pub snr: f64,
    pub n: usize,
    pub m: usize,
    pub k_x: usize,
    pub k0: usize,
    pub trials: usize,
    pub seed: u64,
    pub data_prior: String,
    /// `kappa0 / snr`.
    pub mse_large_system: f64,
    /// `(m / (snr n)) k0 / (m - k0 - 1)`, the finite-size Wishart expectation.
    pub mse_wishart: f64,
    pub mse_measured: MeanStat,
    pub ratio_measured_to_wishart: f64,
    pub ratio_measured_to_large_system: f64,
    /// `alpha / (alpha - kappa0)`, the large-system value of `mse_wishart / mse_large_system`.
    pub asymptotic_factor: f64,
    pub rank_deficient_trials: usize,
}

/// `data_support` plus uniformly drawn extra indices, `k0` in total, sorted.
pub fn oracle_support<R: Rng + ?Sized>(
    data_support: &[usize],
    n: usize,
    k0: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if k0 < data_support.len() || k0 > n {
        return domain(format!("oracle support size {k0} incompatible with |data support| = {}, n = {n}", data_support.len()));
    }
    let mut in_support = vec![false; n];
    for &i in data_support {
        in_support[i] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|i| !in_support[*i]).collect();
    let extra = rand::seq::index::sample(rng, rest.len(), k0 - data_support.len());
    let mut out: Vec<usize> = data_support.to_vec();
    out.extend(extra.iter().map(|j| rest[j]));
    out.sort_unstable();
    Ok(out)
}

/// Monte Carlo MSE of least squares on an oracle support for
/// `y = sqrt(snr/m) D x + w`.
///
/// The `l0` decoder is emulated: its support is taken to be the data support
/// extended by uniformly random indices up to `k0 = round(kappa0 n)`.
pub fn cs_mse_experiment(
    alpha: f64,
    kappa_x: f64,
    snr: f64,
    n: usize,
    trials: usize,
    seed: u64,
    harness: &Harness,
) -> Result<CsOutcome> {
    let region = cs_region(alpha, kappa_x)?;
    if !region.decodable {
        return domain(format!(
            "kappa_x = {kappa_x} exceeds the decodable bound {} at alpha = {alpha}",
            region.noisy_bound
        ));
    }
    if !(snr > 0.0 && snr.is_finite()) {
        return domain(format!("snr must be positive, got {snr}"));
    }
    if trials == 0 {
        return domain("need at least one trial");
    }
    let m = measurement_count(n, alpha);
    let k_x = support_size(n, kappa_x)?;
    let k0 = ((region.kappa0 * n as f64).round() as usize).max(k_x);
    if k0 + 2 >= m {
        return domain(format!("k0 = {k0} must be below m - 2 = {}", m as i64 - 2));
    }
    let gain = (snr / m as f64).sqrt();
    let outcomes = harness.map_trials(trials, |t| -> Result<Option<f64>> {
        let t = t as u64;
        let d = draw_dictionary(m, n, DictionaryKind::Gaussian, &mut stream(seed, "cs-dictionary", &[t]));
        let w = draw_noise(m, &mut stream(seed, "cs-noise", &[t]));
        let mut data_rng = stream(seed, "cs-data", &[t]);
        let mut support: Vec<usize> = rand::seq::index::sample(&mut data_rng, n, k_x).into_vec();
        support.sort_unstable();
        let mut x = DVector::zeros(n);
        for &i in &support {
            x[i] = data_rng.sample(StandardNormal);
        }
        let y = &d * &x * gain + w;
        let omega0 = oracle_support(&support, n, k0, &mut stream(seed, "cs-oracle", &[t]))?;
        match ls_on_support(&y, &d, &omega0, snr, m) {
            Ok(xh) => Ok(Some((xh - x).norm_squared() / n as f64)),
            Err(Error::Numerical(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let mut errs = Vec::with_capacity(trials);
    let mut rank_deficient = 0;
    for o in outcomes {
        match o? {
            Some(e) => errs.push(e),
            None => rank_deficient += 1,
        }
    }
    let measured = MeanStat::of(&errs);
    let mse_large_system = region.kappa0 / snr;
    let mse_wishart = (m as f64 / (snr * n as f64)) * k0 as f64 / (m - k0 - 1) as f64;
    Ok(CsOutcome {
        snr,
        n,
        m,
        k_x,
        k0,
        trials,
        seed,
        data_prior: DATA_PRIOR.to_string(),
        mse_large_system,
        mse_wishart,
        ratio_measured_to_wishart: measured.mean / mse_wishart,
        ratio_measured_to_large_system: measured.mean / mse_large_system,
        asymptotic_factor: alpha / (alpha - region.kappa0),
        mse_measured: measured,
        rank_deficient_trials: rank_deficient,
        region,
    })
}
