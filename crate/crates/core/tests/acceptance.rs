//! Acceptance gate: every criterion runs at its pinned tolerance and prints
//! one PASS/FAIL line. The process exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use swn::density::density_params;
use swn::experiments::{
    converse_energy_experiment, cs_mse_experiment, ks_statistic, qq_experiment, sweep_min_sparsity, Harness,
};
use swn::rng::stream;
use swn::solvers::IrlsParams;
use swn::theory::{alpha_of_xi, alpha_star, kappa_star, min_energy, second_moment_achievable};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within_budget(out: Outcome, elapsed: Duration, budget: Duration) -> Outcome {
    let ok = elapsed <= budget;
    check(
        out.pass && ok,
        format!("{}; {:.2} s (budget {:.0} s)", out.detail, elapsed.as_secs_f64(), budget.as_secs_f64()),
    )
}

fn threshold_fidelity() -> Outcome {
    let a = alpha_star(0.1).unwrap().alpha_star;
    let k1 = kappa_star(1.0).unwrap().kappa_star;
    let mut rng = stream(1, "acceptance-quadrature", &[]);
    let worst = (0..200)
        .map(|_| {
            let xi: f64 = rng.random_range(0.0..8.0);
            (alpha_of_xi(xi) - common::alpha_by_quadrature(xi)).abs()
        })
        .fold(0.0, f64::max);
    check(
        (0.43..=0.45).contains(&a) && (k1 - 1.0).abs() <= 1e-10 && worst <= 1e-10,
        format!("alpha*(0.1) = {a:.6}, |kappa*(1) - 1| = {:.1e}, max quadrature gap {worst:.1e}", (k1 - 1.0).abs()),
    )
}

fn density_soundness() -> Outcome {
    let mut worst_norm = 0.0f64;
    for &kappa in &[0.05, 0.1, 0.2, 0.4, 0.7] {
        let a_star = alpha_star(kappa).unwrap().alpha_star;
        for &frac in &[0.2, 0.5, 0.8, 0.95] {
            let d = density_params(kappa, frac * a_star).unwrap();
            let reach = d.gap + 40.0 * d.scale;
            let mass = common::integrate_outside(&|z| d.pdf(z), d.gap, reach, 1e-12);
            worst_norm = worst_norm.max((mass - 1.0).abs());
        }
    }
    let d = density_params(0.1, 0.2).unwrap();
    let mut rng = stream(2, "acceptance-ks", &[]);
    let mut draws: Vec<f64> = (0..100_000).map(|_| d.sample(&mut rng)).collect();
    draws.sort_by(f64::total_cmp);
    let ks = ks_statistic(&draws, |z| d.cdf(z));
    check(worst_norm <= 1e-8 && ks <= 0.01, format!("max normalisation error {worst_norm:.1e}, KS {ks:.4}"))
}

fn converse_energy() -> Outcome {
    let (alpha, kappa) = (0.75, 0.125);
    let r = converse_energy_experiment(alpha, kappa, &[12, 16], 500, 3, &Harness::default()).unwrap();
    let theory = min_energy(alpha, kappa).unwrap().min_energy;
    let (e12, e16) = (r.rows[0].energy.mean, r.rows[1].energy.mean);
    let (gap12, gap16) = ((e12 - theory).abs(), (e16 - theory).abs());
    let within = (e16 - theory).abs() <= 0.25 * theory;
    check(
        within && gap16 < gap12,
        format!(
            "theory {theory:.4}; n=12 (k={}) {e12:.4}, n=16 (k={}) {e16:.4} ({:+.1}%); gap {gap12:.4} -> {gap16:.4}",
            r.rows[0].k,
            r.rows[1].k,
            100.0 * (e16 / theory - 1.0)
        ),
    )
}

fn sparsity_extrapolation() -> Outcome {
    let n_list = [40, 60, 80, 120, 160, 200];
    let r = sweep_min_sparsity(0.5, &n_list, 50, &IrlsParams::default(), 4, false, &Harness::default()).unwrap();
    let rel = (r.kappa_extrapolated - r.kappa_theory).abs() / r.kappa_theory;
    let per_n: Vec<String> = r.points.iter().map(|p| format!("{}:{:.3}", p.n, p.sparsity.mean)).collect();
    check(
        rel <= 0.15,
        format!(
            "intercept {:.4} vs kappa*(0.5) = {:.4} ({:+.0}%); mean sparsity [{}]",
            r.kappa_extrapolated,
            r.kappa_theory,
            100.0 * (r.kappa_extrapolated / r.kappa_theory - 1.0),
            per_n.join(" ")
        ),
    )
}

fn noise_qq() -> Outcome {
    let r = qq_experiment(0.2, 0.1, 500, 10_000, 5, &Harness::default()).unwrap();
    let theory = second_moment_achievable(0.2, 0.1).unwrap();
    let rel = (r.variance - theory).abs() / theory;
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_qq.csv");
    let written = std::fs::File::create(&path)
        .map_err(swn::Error::from)
        .and_then(|f| r.quantiles.write_csv(f, None))
        .is_ok();
    check(
        r.pooled_count >= 1_000_000 && rel <= 0.02 && r.ks_vs_measured <= 0.01 && written,
        format!(
            "{} entries, variance {:.4} vs {theory:.4} ({:.2}%), KS {:.4}; QQ table at {}",
            r.pooled_count,
            r.variance,
            100.0 * rel,
            r.ks_vs_measured,
            path.display()
        ),
    )
}

fn cs_mse() -> Outcome {
    let r = cs_mse_experiment(0.5, 0.05, 10.0, 400, 200, 6, &Harness::default()).unwrap();
    let oracle = common::wishart_mse(r.m, r.n, r.k0, r.snr);
    let rel = (r.mse_measured.mean - oracle).abs() / oracle;
    check(
        rel <= 0.05,
        format!(
            "measured {:.5} vs Wishart {oracle:.5} ({:.2}%); ratio to kappa0/snr {:.3} (reported only)",
            r.mse_measured.mean,
            100.0 * rel,
            r.ratio_measured_to_large_system
        ),
    )
}

fn region_geometry() -> Outcome {
    let mut violations = 0;
    for i in 1..=99 {
        let alpha = i as f64 / 100.0;
        let ks = kappa_star(alpha).unwrap().kappa_star;
        if !(ks < alpha && (alpha - ks) / (1.0 - ks) < alpha) {
            violations += 1;
        }
    }
    check(violations == 0, format!("{violations} violations on 99 points"))
}

fn reproducibility() -> Outcome {
    let max_jobs = std::thread::available_parallelism().map_or(1, |n| n.get()).max(4);
    let run = |jobs: usize| -> Vec<f64> {
        let h = Harness::new(Some(jobs));
        let qq = qq_experiment(0.2, 0.1, 200, 300, 8, &h).unwrap();
        let cs = cs_mse_experiment(0.5, 0.05, 10.0, 200, 40, 8, &h).unwrap();
        let ce = converse_energy_experiment(0.75, 0.125, &[10, 12], 40, 8, &h).unwrap();
        let sw = sweep_min_sparsity(0.5, &[20, 30, 40], 10, &IrlsParams::default(), 8, false, &h).unwrap();
        let mut v = vec![qq.mean, qq.variance, qq.ks_vs_measured, cs.mse_measured.mean, sw.kappa_extrapolated];
        v.extend(qq.quantiles.rows.iter().flatten());
        v.extend(ce.rows.iter().map(|r| r.energy.mean));
        v.extend(sw.points.iter().map(|p| p.sparsity.mean));
        v
    };
    let (a, b) = (run(1), run(max_jobs));
    let diff: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum();
    check(a.len() == b.len() && diff <= 1e-12, format!("{} values, 1 vs {max_jobs} workers, aggregate difference {diff:.1e}", a.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 8] = [
        ("threshold fidelity", threshold_fidelity, 1),
        ("density soundness", density_soundness, 30),
        ("converse-energy law", converse_energy, 600),
        ("sparsity extrapolation", sparsity_extrapolation, 1800),
        ("noise QQ", noise_qq, 300),
        ("oracle-support MSE", cs_mse, 300),
        ("region geometry", region_geometry, 1),
        ("reproducibility", reproducibility, 600),
    ];
    let mut failed = Vec::new();
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = within_budget(f(), start.elapsed(), Duration::from_secs(*budget));
        println!("[{}] {}. {name}: {}", if out.pass { "PASS" } else { "FAIL" }, i + 1, out.detail);
        if !out.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
