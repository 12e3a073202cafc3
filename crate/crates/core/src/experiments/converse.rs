use serde::Serialize;

use super::harness::{Harness, MeanStat};
use crate::density::support_size;
use crate::ensembles::{draw_instance, measurement_count, DictionaryKind};
use crate::error::Result;
use crate::rng::derive_seed;
use crate::solvers::brute_force_best_ksupport;
use crate::theory::min_energy;

#[derive(Debug, Clone, Serialize)]
pub struct ConverseRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub energy: MeanStat,
    /// Minimal energy predicted at the nominal `(alpha, kappa)`.
    pub theory: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConverseReport {
    pub alpha: f64,
    pub kappa: f64,
    pub trials: usize,
    pub seed: u64,
    pub theory: f64,
    pub rows: Vec<ConverseRow>,
}

/// Mean exhaustive-search minimal energy with `k = round(kappa n)` atoms,
/// for each small `n`.
pub fn converse_energy_experiment(
    alpha: f64,
    kappa: f64,
    n_list: &[usize],
    trials: usize,
    seed: u64,
    harness: &Harness,
) -> Result<ConverseReport> {
    let theory = min_energy(alpha, kappa)?.min_energy;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let k = support_size(n, kappa)?;
        let energies = harness.map_trials(trials, |t| -> Result<f64> {
            let s = derive_seed(seed, "converse", &[n as u64, t as u64]);
            let inst = draw_instance(n, alpha, DictionaryKind::Gaussian, s)?;
            Ok(brute_force_best_ksupport(&inst, k)?.energy)
        });
        let energies = energies.into_iter().collect::<Result<Vec<f64>>>()?;
        rows.push(ConverseRow {
            n,
            m: measurement_count(n, alpha),
            k,
            energy: MeanStat::of(&energies),
            theory,
        });
    }
    Ok(ConverseReport { alpha, kappa, trials, seed, theory, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn k_equal_m_gives_zero() {
        // n = 8, alpha = 0.5 -> m = 4; kappa = 0.5 -> k = 4
        let r = converse_energy_experiment(0.5, 0.5, &[8], 20, 3, &Harness::serial()).unwrap();
        assert!(r.rows[0].energy.mean < 1e-20);
        assert_eq!(r.theory, 0.0);
    }

    #[test]
    fn budget_is_enforced() {
        let r = converse_energy_experiment(0.5, 0.5, &[30], 2, 3, &Harness::serial());
        assert!(matches!(r, Err(Error::Budget(_))));
    }
}
