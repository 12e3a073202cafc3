//! Threshold maps between measurement ratio and sparsity fraction, and the
//! residual-energy law in the converse region.
//!
//! Both maps are parametrised by a common integral limit `xi >= 0`:
//!
//! ```text
//! kappa(xi) = sqrt(2/pi) * int_xi^inf exp(-t^2/2) dt     = 2 Q(xi)
//! alpha(xi) = sqrt(2/pi) * int_xi^inf t^2 exp(-t^2/2) dt = sqrt(2/pi) xi exp(-xi^2/2) + 2 Q(xi)
//! ```
//!
//! `kappa_star(alpha)` solves `alpha(xi) = alpha` and evaluates `kappa(xi)`;
//! `alpha_star(kappa)` solves `kappa(xi) = kappa` and evaluates `alpha(xi)`.

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Lower and upper end of the bracket searched for `xi`.
pub const XI_BRACKET: (f64, f64) = (0.0, 40.0);
/// Absolute tolerance on `xi` for the root finders.
pub const XI_TOL: f64 = 1e-12;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// A point described by the threshold maps.
///
/// `xi` is the integral limit solved for by whichever constructor produced
/// the point. Points built by [`kappa_star`] or [`alpha_star`] lie on the
/// critical curve, so `kappa == kappa_star` and `alpha == alpha_star`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub alpha: f64,
    pub kappa: f64,
    pub xi: f64,
    /// Sparsity threshold at `alpha`.
    pub kappa_star: f64,
    /// Measurement threshold at `kappa`.
    pub alpha_star: f64,
}

/// Residual-energy law at an `(alpha, kappa)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConverseLaw {
    pub alpha: f64,
    pub kappa: f64,
    pub alpha_star: f64,
    /// `true` when `kappa >= kappa_star(alpha)`, equivalently `alpha <= alpha_star(kappa)`.
    pub achievable: bool,
    /// Minimal mean-square residual. Zero in the achievable region.
    pub min_energy: f64,
    /// Per-atom squared norm of the unique minimiser. `+inf` unless strictly
    /// inside the converse region.
    pub opt_sq_norm: f64,
    /// Auxiliary parameter `x`, equal to `opt_sq_norm` in the converse region.
    pub aux_x: f64,
}

/// Upper-tail probability of the standard normal distribution.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of [`q_function`] for `p` in `(0, 1)`, refined by Newton steps on
/// `ln Q` so deep-tail probabilities keep full relative accuracy.
pub fn q_inverse(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::INFINITY;
    }
    if p >= 1.0 {
        return f64::NEG_INFINITY;
    }
    let mut t = std::f64::consts::SQRT_2 * statrs::function::erf::erfc_inv(2.0 * p);
    for _ in 0..3 {
        let q = q_function(t);
        let phi = normal_pdf(t);
        if !(q > 0.0 && phi > 0.0) {
            break;
        }
        let step = if t > 0.0 { (q.ln() - p.ln()) * q / phi } else { (q - p) / phi };
        t += step;
        if step.abs() <= 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    t
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `sqrt(2/pi) * int_xi^inf t^2 exp(-t^2/2) dt`, via integration by parts.
pub fn alpha_of_xi(xi: f64) -> f64 {
    SQRT_2_OVER_PI * xi * (-0.5 * xi * xi).exp() + 2.0 * q_function(xi)
}

/// `sqrt(2/pi) * int_xi^inf exp(-t^2/2) dt = 2 Q(xi)`.
pub fn kappa_of_xi(xi: f64) -> f64 {
    2.0 * q_function(xi)
}

fn d_alpha_d_xi(xi: f64) -> f64 {
    -SQRT_2_OVER_PI * xi * xi * (-0.5 * xi * xi).exp()
}

fn d_kappa_d_xi(xi: f64) -> f64 {
    -SQRT_2_OVER_PI * (-0.5 * xi * xi).exp()
}

/// Solves `f(xi) = target` for a strictly decreasing `f` on [`XI_BRACKET`]
/// with Newton steps safeguarded by bisection.
fn solve_decreasing(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = XI_BRACKET;
    if target >= f(lo) {
        return lo;
    }
    if target <= f(hi) {
        return hi;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let r = f(x) - target;
        if r == 0.0 {
            return x;
        }
        // f decreasing: positive residual means the root lies to the right.
        if r > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = if d != 0.0 { x - r / d } else { f64::NAN };
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= XI_TOL || hi - lo <= XI_TOL {
            return next;
        }
        x = next;
    }
    x
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0 && v <= 1.0) {
        return domain(format!("{name} must lie in (0, 1], got {v}"));
    }
    Ok(())
}

/// Integral limit solving `alpha(xi) = alpha`.
pub fn xi_of_alpha(alpha: f64) -> Result<f64> {
    check_unit_interval("alpha", alpha)?;
    Ok(solve_decreasing(alpha_of_xi, d_alpha_d_xi, alpha))
}

/// Integral limit solving `2 Q(xi) = kappa`.
pub fn xi_of_kappa(kappa: f64) -> Result<f64> {
    check_unit_interval("kappa", kappa)?;
    Ok(solve_decreasing(kappa_of_xi, d_kappa_d_xi, kappa))
}

/// Sparsest achievable sparsity fraction for measurement ratio `alpha`.
pub fn kappa_star(alpha: f64) -> Result<ThresholdPoint> {
    let xi = xi_of_alpha(alpha)?;
    let k = kappa_of_xi(xi);
    Ok(ThresholdPoint {
        alpha,
        kappa: k,
        xi,
        kappa_star: k,
        alpha_star: alpha,
    })
}

/// Largest measurement ratio at which a `kappa`-sparse representation exists.
pub fn alpha_star(kappa: f64) -> Result<ThresholdPoint> {
    let xi = xi_of_kappa(kappa)?;
    let a = alpha_of_xi(xi);
    Ok(ThresholdPoint {
        alpha: a,
        kappa,
        xi,
        kappa_star: kappa,
        alpha_star: a,
    })
}

/// Minimal residual energy and optimal squared norm at `(alpha, kappa)`.
///
/// The boundary `alpha == alpha_star(kappa)` counts as achievable; the norm
/// there is reported as `+inf`.
pub fn min_energy(alpha: f64, kappa: f64) -> Result<ConverseLaw> {
    check_unit_interval("alpha", alpha)?;
    let a_star = alpha_star(kappa)?.alpha_star;
    let achievable = alpha <= a_star;
    let (min_energy, opt_sq_norm) = if achievable {
        (0.0, f64::INFINITY)
    } else {
        ((alpha - a_star) / alpha, a_star / (alpha - a_star))
    };
    Ok(ConverseLaw {
        alpha,
        kappa,
        alpha_star: a_star,
        achievable,
        min_energy,
        opt_sq_norm,
        aux_x: opt_sq_norm,
    })
}

/// Per-entry second moment `alpha / (alpha_star - alpha)` of a representation
/// whose non-zeros follow the marginal law, strictly inside the achievable
/// region. This is also the variance of the entries of `D z / sqrt(n)`.
pub fn second_moment_achievable(alpha: f64, kappa: f64) -> Result<f64> {
    check_unit_interval("alpha", alpha)?;
    let a_star = alpha_star(kappa)?.alpha_star;
    if alpha >= a_star {
        return domain(format!(
            "alpha = {alpha} is not below alpha_star({kappa}) = {a_star}"
        ));
    }
    Ok(alpha / (a_star - alpha))
}
