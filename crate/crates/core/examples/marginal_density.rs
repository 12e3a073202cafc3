//! Marginal law of the entries of an optimal sparse representation: density
//! on a grid, its CDF, and a histogram of exact samples.

use swn::density::density_params;
use swn::rng::stream;

fn main() -> swn::Result<()> {
    let (alpha, kappa) = (0.2, 0.1);
    let d = density_params(kappa, alpha)?;
    println!("alpha = {alpha}, kappa = {kappa}: scale = {:.5}, gap = {:.5}", d.scale, d.gap);
    println!("second moment of z: {:.6}", d.second_moment());

    println!("\n{:>7} {:>12} {:>10}", "zeta", "pdf", "cdf");
    for i in -8..=8 {
        let z = i as f64 * 0.5;
        println!("{z:>7.2} {:>12.6} {:>10.6}", d.pdf(z), d.cdf(z));
    }

    let mut rng = stream(1, "example", &[]);
    let draws: Vec<f64> = (0..100_000).map(|_| d.sample(&mut rng)).collect();
    let inside = draws.iter().filter(|z| z.abs() < d.gap).count();
    let mean_sq = draws.iter().map(|z| z * z).sum::<f64>() / draws.len() as f64;
    println!("\n{} samples, {inside} inside the gap, mean square {mean_sq:.5}", draws.len());
    Ok(())
}
