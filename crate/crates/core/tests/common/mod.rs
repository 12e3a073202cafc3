//! Oracles independent of the library's closed forms.
#![allow(dead_code)]

/// Adaptive Simpson quadrature with Richardson correction.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}

pub fn phi(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `2 * integral_xi^inf t^2 phi(t) dt`, by quadrature.
pub fn alpha_by_quadrature(xi: f64) -> f64 {
    2.0 * integrate(&|t| t * t * phi(t), xi, xi + 40.0, 1e-14)
}

/// `2 * integral_xi^inf phi(t) dt`, by quadrature.
pub fn kappa_by_quadrature(xi: f64) -> f64 {
    2.0 * integrate(&phi, xi, xi + 40.0, 1e-15)
}

/// Integral of `f` over the real line outside `(-gap, gap)`.
pub fn integrate_outside(f: &dyn Fn(f64) -> f64, gap: f64, reach: f64, tol: f64) -> f64 {
    integrate(f, gap, reach, tol) + integrate(f, -reach, -gap, tol)
}

/// Finite-m mean squared error of least squares on a `k0`-column Gaussian
/// support: `(m / (snr * n)) * k0 / (m - k0 - 1)`.
pub fn wishart_mse(m: usize, n: usize, k0: usize, snr: f64) -> f64 {
    (m as f64 / (snr * n as f64)) * k0 as f64 / (m - k0 - 1) as f64
}
