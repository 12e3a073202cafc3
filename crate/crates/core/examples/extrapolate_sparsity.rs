//! IRLS sparsity sweep over the atom count, extrapolated to n -> infinity.
//!
//! ```text
//! cargo run --release --example extrapolate_sparsity -- [trials] [seed]
//! ```

use std::time::Instant;

use swn::experiments::{sweep_min_sparsity, Harness};
use swn::solvers::IrlsParams;

fn main() -> swn::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials: usize = args.next().map_or(50, |s| s.parse().expect("trials"));
    let seed: u64 = args.next().map_or(2024, |s| s.parse().expect("seed"));
    let n_list = [40, 60, 80, 120, 160, 200];

    let start = Instant::now();
    let report = sweep_min_sparsity(0.5, &n_list, trials, &IrlsParams::default(), seed, false, &Harness::default())?;
    println!("{:>5} {:>5} {:>10} {:>10} {:>7}", "n", "m", "kappa", "std_err", "failed");
    for p in &report.points {
        println!(
            "{:>5} {:>5} {:>10.5} {:>10.5} {:>7}",
            p.n, p.m, p.sparsity.mean, p.sparsity.std_err, p.failed_trials
        );
    }
    println!("fit coefficients (1, 1/n, 1/n^2): {:?}", report.fit.coeffs);
    println!(
        "extrapolated kappa = {:.5}, threshold kappa* = {:.5} ({:.1} s)",
        report.kappa_extrapolated,
        report.kappa_theory,
        start.elapsed().as_secs_f64()
    );

    // how much the count depends on the zero threshold
    println!("\nzero_tol sensitivity at n = 80:");
    for tol in [1e-6, 1e-4, 1e-2, 1e-1] {
        let params = IrlsParams { zero_tol: tol, ..Default::default() };
        let r = sweep_min_sparsity(0.5, &[40, 60, 80], trials.clamp(10, 20), &params, seed, false, &Harness::default())?;
        println!("  zero_tol {tol:>7.0e}: kappa(80) = {:.4}", r.points[2].sparsity.mean);
    }
    Ok(())
}
