//! Decodable region for noisy compressed sensing next to the noiseless one.

use swn::experiments::{cs_region, noisy_region_curve};

fn main() -> swn::Result<()> {
    let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
    let t = noisy_region_curve(&grid)?;
    println!("{:>6} {:>10} {:>12} {:>10}", "alpha", "kappa*", "noisy", "noiseless");
    for row in &t.rows {
        println!("{:>6.2} {:>10.5} {:>12.5} {:>10.5}", row[0], row[1], row[2], row[3]);
    }
    for (a, k) in [(0.5, 0.05), (0.5, 0.45), (0.3, 0.2)] {
        let r = cs_region(a, k)?;
        println!("alpha = {a}, kappa_x = {k}: decodable {} (noiseless {})", r.decodable, r.noiseless_decodable);
    }
    Ok(())
}
