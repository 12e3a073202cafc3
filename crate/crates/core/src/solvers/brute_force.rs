use itertools::Itertools;
use nalgebra::DVector;
use serde::Serialize;

use crate::ensembles::ProblemInstance;
use crate::error::{domain, Error, Result};
use crate::linalg::least_squares;

pub const MAX_ATOMS: usize = 24;
pub const MAX_SUBSETS: u128 = 1_000_000;

/// Best `k`-column explanation of the instance's noise.
#[derive(Debug, Clone, Serialize)]
pub struct BestSupport {
    pub support: Vec<usize>,
    pub energy: f64,
    /// Coefficients on `support`, in the `D z / sqrt(n)` scaling.
    pub z_on_support: Vec<f64>,
    /// Subsets skipped because their columns were linearly dependent.
    pub skipped: usize,
}

impl BestSupport {
    pub fn z(&self, n: usize) -> DVector<f64> {
        let mut z = DVector::zeros(n);
        for (i, v) in self.support.iter().zip(&self.z_on_support) {
            z[*i] = *v;
        }
        z
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Exhaustive search over all `k`-subsets of atoms for the least-squares
/// fit with the smallest residual energy. Ties go to the lexicographically
/// smallest support.
pub fn brute_force_best_ksupport(instance: &ProblemInstance, k: usize) -> Result<BestSupport> {
    let (m, n) = (instance.m, instance.n);
    if n > MAX_ATOMS {
        return Err(Error::Budget(format!("n = {n} exceeds {MAX_ATOMS}")));
    }
    if k > n {
        return domain(format!("k = {k} exceeds n = {n}"));
    }
    let subsets = binomial(n, k);
    if subsets > MAX_SUBSETS {
        return Err(Error::Budget(format!("C({n}, {k}) = {subsets} exceeds {MAX_SUBSETS}")));
    }
    if k > m {
        return domain(format!("k = {k} exceeds m = {m}; every such support is exact"));
    }
    let sqrt_n = (n as f64).sqrt();
    let mut best: Option<BestSupport> = None;
    let mut skipped = 0;
    for support in (0..n).combinations(k) {
        let cols = instance.dictionary.select_columns(&support);
        let Some(fit) = least_squares(&cols, &instance.omega, 1e-12) else {
            skipped += 1;
            continue;
        };
        let energy = fit.residual_sq / m as f64;
        if best.as_ref().is_none_or(|b| energy < b.energy) {
            best = Some(BestSupport {
                z_on_support: fit.x.iter().map(|c| c * sqrt_n).collect(),
                support,
                energy,
                skipped: 0,
            });
        }
    }
    let mut best = best.ok_or_else(|| Error::Numerical("every support was rank deficient".into()))?;
    best.skipped = skipped;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{draw_instance, DictionaryKind};
    use crate::solvers::energy;

    #[test]
    fn square_support_is_exact() {
        let inst = draw_instance(8, 1.0, DictionaryKind::Gaussian, 3).unwrap();
        let b = brute_force_best_ksupport(&inst, 8).unwrap();
        assert!(b.energy < 1e-24);
        assert_eq!(b.support, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn planted_column_is_found() {
        let mut inst = draw_instance(12, 0.5, DictionaryKind::Gaussian, 4).unwrap();
        inst.omega = inst.dictionary.column(5).clone_owned() * 0.7;
        let b = brute_force_best_ksupport(&inst, 1).unwrap();
        assert_eq!(b.support, vec![5]);
        assert!(b.energy < 1e-28);
        assert!((b.z_on_support[0] - 0.7 * (12.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn energy_non_increasing_in_k() {
        for seed in 0..5 {
            let inst = draw_instance(12, 0.75, DictionaryKind::Gaussian, seed).unwrap();
            let energies: Vec<f64> = (0..=inst.m)
                .map(|k| brute_force_best_ksupport(&inst, k).unwrap().energy)
                .collect();
            assert!(energies.windows(2).all(|w| w[1] <= w[0] + 1e-14));
            let b = brute_force_best_ksupport(&inst, 3).unwrap();
            let recomputed = energy(&b.z(inst.n), &inst).unwrap();
            assert!((recomputed - b.energy).abs() < 1e-10);
        }
    }

    #[test]
    fn ties_break_lexicographically() {
        // Identical columns give identical fits.
        let mut inst = draw_instance(6, 0.5, DictionaryKind::Bernoulli, 2).unwrap();
        for j in 0..6 {
            let c = inst.dictionary.column(0).clone_owned();
            inst.dictionary.set_column(j, &c);
        }
        let b = brute_force_best_ksupport(&inst, 1).unwrap();
        assert_eq!(b.support, vec![0]);
    }

    #[test]
    fn budget_guard() {
        let inst = draw_instance(30, 0.5, DictionaryKind::Gaussian, 1).unwrap();
        assert!(matches!(brute_force_best_ksupport(&inst, 2), Err(Error::Budget(_))));
        let inst = draw_instance(24, 0.5, DictionaryKind::Gaussian, 1).unwrap();
        assert!(matches!(brute_force_best_ksupport(&inst, 12), Err(Error::Budget(_))));
        assert_eq!(binomial(24, 12), 2_704_156);
    }
}
