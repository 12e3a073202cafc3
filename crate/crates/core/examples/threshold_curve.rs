//! Prints the achievable sparsity threshold against the measurement ratio.

use swn::experiments::threshold_curve;
use swn::theory::{alpha_star, kappa_star, min_energy};

fn main() -> swn::Result<()> {
    let grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.05).collect();
    let table = threshold_curve(&grid)?;
    println!("{:>6} {:>10}", "alpha", "kappa*");
    for row in &table.rows {
        println!("{:>6.2} {:>10.6}", row[0], row[1]);
    }

    let k = alpha_star(0.1)?;
    println!("\nalpha*(0.1) = {:.6} at xi = {:.6}", k.alpha_star, k.xi);
    let a = kappa_star(0.5)?;
    println!("kappa*(0.5) = {:.6} at xi = {:.6}", a.kappa_star, a.xi);

    let law = min_energy(0.8, 0.1)?;
    println!("minimal energy at (alpha, kappa) = (0.8, 0.1): {:.6}", law.min_energy);
    Ok(())
}
