mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use swn::theory::*;

proptest! {
    #[test]
    fn kappa_star_round_trips(alpha in 0.01f64..0.99) {
        let p = kappa_star(alpha).unwrap();
        let back = alpha_star(p.kappa_star).unwrap();
        prop_assert!((back.alpha_star - alpha).abs() < 1e-10);
    }

    #[test]
    fn alpha_star_round_trips(kappa in 0.005f64..0.99) {
        let p = alpha_star(kappa).unwrap();
        let back = kappa_star(p.alpha_star).unwrap();
        prop_assert!((back.kappa_star - kappa).abs() < 1e-10);
    }

    #[test]
    fn kappa_star_increasing(a in 0.01f64..0.98, step in 0.001f64..0.02) {
        let lo = kappa_star(a).unwrap().kappa_star;
        let hi = kappa_star(a + step).unwrap().kappa_star;
        prop_assert!(hi > lo);
    }

    #[test]
    fn threshold_below_trivial(alpha in 0.001f64..0.999) {
        prop_assert!(kappa_star(alpha).unwrap().kappa_star < alpha);
    }

    #[test]
    fn energy_identity(alpha in 0.05f64..1.0, kappa in 0.01f64..0.99) {
        let law = min_energy(alpha, kappa).unwrap();
        let a_star = alpha_star(kappa).unwrap().alpha_star;
        if alpha > a_star {
            prop_assert!(!law.achievable);
            prop_assert!((law.min_energy - (alpha - a_star) / alpha).abs() < 1e-12);
            prop_assert!(law.min_energy > 0.0 && law.min_energy < 1.0);
            prop_assert!((law.opt_sq_norm - a_star / (alpha - a_star)).abs() < 1e-9 * law.opt_sq_norm.max(1.0));
        } else {
            prop_assert!(law.achievable);
            prop_assert_eq!(law.min_energy, 0.0);
        }
    }

    #[test]
    fn q_inverse_inverts(p in 1e-15f64..0.999) {
        let x = q_inverse(p);
        prop_assert!((q_function(x) - p).abs() <= 1e-13 * p.max(1e-3));
    }
}

#[test]
fn closed_form_alpha_matches_quadrature() {
    use rand::Rng;
    let mut rng = swn::rng::stream(17, "quadrature-test", &[]);
    for _ in 0..200 {
        let xi: f64 = rng.random_range(0.0..8.0);
        let quad = common::alpha_by_quadrature(xi);
        assert!((alpha_of_xi(xi) - quad).abs() <= 1e-10, "xi = {xi}");
        let kq = common::kappa_by_quadrature(xi);
        assert!((kappa_of_xi(xi) - kq).abs() <= 1e-10, "xi = {xi}");
    }
}

#[test]
fn boundary_values() {
    assert_relative_eq!(kappa_star(1.0).unwrap().kappa_star, 1.0, epsilon = 1e-10);
    assert_relative_eq!(alpha_star(1.0).unwrap().alpha_star, 1.0, epsilon = 1e-10);
    for bad in [0.0, -0.1, 1.0001, f64::NAN] {
        assert!(kappa_star(bad).is_err());
        assert!(alpha_star(bad).is_err());
    }
}

#[test]
fn second_moment_reference() {
    // mpmath, 40 digits
    assert_relative_eq!(second_moment_achievable(0.2, 0.1).unwrap(), 0.835_819_673_004_385_5, max_relative = 1e-10);
    assert!(second_moment_achievable(0.5, 0.1).is_err());
}
