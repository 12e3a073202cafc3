//! Exhaustive best-k-subset energy versus the large-system converse law.

use swn::experiments::{converse_energy_experiment, Harness};

fn main() -> swn::Result<()> {
    let trials = std::env::args().nth(1).map_or(200, |s| s.parse().expect("trials"));
    let r = converse_energy_experiment(0.75, 0.125, &[8, 12, 16], trials, 3, &Harness::default())?;
    println!("theory (alpha - alpha*) / alpha = {:.5}", r.theory);
    println!("{:>4} {:>4} {:>3} {:>10} {:>9} {:>7}", "n", "m", "k", "energy", "std_err", "ratio");
    for row in &r.rows {
        println!(
            "{:>4} {:>4} {:>3} {:>10.5} {:>9.5} {:>7.3}",
            row.n,
            row.m,
            row.k,
            row.energy.mean,
            row.energy.std_err,
            row.energy.mean / row.theory
        );
    }
    Ok(())
}
