//! One IRLS run on a random instance, with per-stage diagnostics.

use swn::ensembles::{draw_instance, DictionaryKind};
use swn::solvers::{irls_min_l0, support_of, IrlsParams};
use swn::theory::kappa_star;

fn main() -> swn::Result<()> {
    let (n, alpha) = (120, 0.5);
    let inst = draw_instance(n, alpha, DictionaryKind::Gaussian, 7)?;
    let sol = irls_min_l0(&inst, &IrlsParams::default())?;

    println!("n = {n}, m = {}, {} iterations, converged: {}", inst.m, sol.iterations, sol.converged);
    println!("residual energy {:.3e}", sol.energy);
    for s in &sol.stages {
        println!(
            "  p = {:<4} eps = {:<8.0e} iters = {:>3} surrogate {:.6} -> {:.6}",
            s.p,
            s.epsilon,
            s.surrogate.len() - 1,
            s.surrogate[0],
            s.surrogate.last().unwrap()
        );
    }
    println!("\nsparsity fraction at cutoff:");
    for tol in [1e-6, 1e-3, 1e-2, 1e-1] {
        println!("  {tol:>6.0e}: {:.4}", support_of(&sol.z, tol).len() as f64 / n as f64);
    }
    println!("threshold kappa* = {:.4}", kappa_star(alpha)?.kappa_star);
    Ok(())
}
