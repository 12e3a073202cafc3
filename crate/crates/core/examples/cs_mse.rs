//! Least-squares error on the oracle support against the Wishart prediction.

use swn::experiments::{cs_mse_experiment, Harness};

fn main() -> swn::Result<()> {
    let r = cs_mse_experiment(0.5, 0.05, 10.0, 400, 200, 5, &Harness::default())?;
    println!("m = {}, data support {}, oracle support {}", r.m, r.k_x, r.k0);
    println!("measured MSE   {:.5} +- {:.5}", r.mse_measured.mean, r.mse_measured.std_err);
    println!("Wishart MSE    {:.5} (ratio {:.4})", r.mse_wishart, r.ratio_measured_to_wishart);
    println!("kappa0 / snr   {:.5} (ratio {:.4})", r.mse_large_system, r.ratio_measured_to_large_system);
    println!("alpha / (alpha - kappa0) = {:.4}", r.asymptotic_factor);
    Ok(())
}
