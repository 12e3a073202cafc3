//! Synthesises noise from random sparse representations and compares its
//! quantiles with the standard normal.

use swn::experiments::{qq_experiment, Harness};

fn main() -> swn::Result<()> {
    let trials = std::env::args().nth(1).map_or(2_000, |s| s.parse().expect("trials"));
    let r = qq_experiment(0.2, 0.1, 500, trials, 11, &Harness::default())?;
    println!("pooled entries:     {}", r.pooled_count);
    println!("variance:           {:.5} (theory {:.5})", r.variance, r.variance_theory);
    println!("KS vs fitted normal {:.5}", r.ks_vs_measured);
    println!("KS vs N(0,1)        {:.5}", r.ks_vs_standard);
    println!("QQ slope vs N(0,1)  {:.5}", r.qq_slope_vs_standard);
    println!("\n{:>8} {:>10} {:>10}", "prob", "normal", "empirical");
    for row in r.quantiles.rows.iter().step_by(20) {
        println!("{:>8.3} {:>10.4} {:>10.4}", row[0], row[1], row[2]);
    }
    Ok(())
}
