use crate::error::Result;
use crate::output::Table;
use crate::theory::kappa_star;

use super::cs::cs_region;

/// Columns `alpha, kappa_star, trivial`: the sharp threshold and the
/// trivial `kappa = alpha` line.
pub fn threshold_curve(alpha_grid: &[f64]) -> Result<Table> {
    let mut t = Table::new(["alpha", "kappa_star", "trivial"]);
    for &a in alpha_grid {
        t.push(vec![a, kappa_star(a)?.kappa_star, a]);
    }
    Ok(t)
}

/// Columns `alpha, kappa_star, noisy_bound, noiseless_bound` for the
/// decodable region with and without noise.
pub fn noisy_region_curve(alpha_grid: &[f64]) -> Result<Table> {
    let mut t = Table::new(["alpha", "kappa_star", "noisy_bound", "noiseless_bound"]);
    for &a in alpha_grid {
        // kappa_x only affects the flags, not the bound
        let r = cs_region(a, 0.5)?;
        t.push(vec![a, r.kappa_star, r.noisy_bound, a]);
    }
    Ok(t)
}
