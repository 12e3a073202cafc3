//! Marginal law of the non-zero entries of the minimal-norm sparse
//! representation, strictly inside the achievable region.
//!
//! With `sigma^2 = alpha / (alpha_star (alpha_star - alpha))` and `xi` solving
//! `2 Q(xi) = kappa`, the density is zero on `|zeta| < xi sigma` and equal to
//! `phi(zeta / sigma) / (kappa sigma)` outside: a two-sided Gaussian tail
//! renormalised by its mass `kappa`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::theory::{alpha_star, normal_pdf, q_function, q_inverse};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalDensity {
    pub kappa: f64,
    pub alpha: f64,
    pub xi: f64,
    pub alpha_star: f64,
    pub scale_sq: f64,
    pub scale: f64,
    /// Half-width of the zero-density interval, `xi * scale`.
    pub gap: f64,
}

/// Parameters of the marginal law at `(kappa, alpha)`.
pub fn density_params(kappa: f64, alpha: f64) -> Result<MarginalDensity> {
    if !(kappa.is_finite() && kappa > 0.0 && kappa < 1.0) {
        return domain(format!("kappa must lie in (0, 1), got {kappa}"));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    let t = alpha_star(kappa)?;
    if alpha >= t.alpha_star {
        return domain(format!(
            "alpha = {alpha} is not below alpha_star({kappa}) = {}",
            t.alpha_star
        ));
    }
    let scale_sq = alpha / (t.alpha_star * (t.alpha_star - alpha));
    let scale = scale_sq.sqrt();
    Ok(MarginalDensity {
        kappa,
        alpha,
        xi: t.xi,
        alpha_star: t.alpha_star,
        scale_sq,
        scale,
        gap: t.xi * scale,
    })
}

impl MarginalDensity {
    pub fn pdf(&self, zeta: f64) -> f64 {
        if zeta.abs() < self.gap {
            0.0
        } else {
            normal_pdf(zeta / self.scale) / (self.kappa * self.scale)
        }
    }

    pub fn cdf(&self, zeta: f64) -> f64 {
        if zeta <= -self.gap {
            q_function(-zeta / self.scale) / self.kappa
        } else if zeta < self.gap {
            0.5
        } else {
            1.0 - q_function(zeta / self.scale) / self.kappa
        }
    }

    /// `E[zeta^2] = sigma^2 alpha_star / kappa`.
    pub fn second_moment(&self) -> f64 {
        self.scale_sq * self.alpha_star / self.kappa
    }

    /// Exact draw by inverting the upper-tail CDF beyond `xi`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let negative: bool = rng.random();
        // u in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let tail = u * q_function(self.xi);
        let t = q_inverse(tail).max(self.xi);
        let magnitude = self.scale * t;
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

pub fn pdf(zeta: f64, params: &MarginalDensity) -> f64 {
    params.pdf(zeta)
}

pub fn sample_nonzero<R: Rng + ?Sized>(params: &MarginalDensity, rng: &mut R) -> f64 {
    params.sample(rng)
}

/// Number of non-zeros `round(kappa n)` used for an `n`-atom representation.
pub fn support_size(n: usize, kappa: f64) -> Result<usize> {
    let k = (kappa * n as f64).round();
    if k < 1.0 {
        return domain(format!("round(kappa * n) = 0 for kappa = {kappa}, n = {n}"));
    }
    Ok((k as usize).min(n))
}

/// Length-`n` vector with `round(kappa n)` non-zeros on a uniformly random
/// support, values drawn i.i.d. from the marginal law.
pub fn sample_sparse_vector<R: Rng + ?Sized>(
    n: usize,
    params: &MarginalDensity,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let k = support_size(n, params.kappa)?;
    let mut z = vec![0.0; n];
    for idx in rand::seq::index::sample(rng, n, k) {
        z[idx] = params.sample(rng);
    }
    Ok(z)
}
