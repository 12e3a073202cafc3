use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Runs independent trials on a dedicated worker pool.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Harness {
    /// Worker count; `None` uses the machine's parallelism.
    pub jobs: Option<usize>,
}

impl Harness {
    pub fn new(jobs: Option<usize>) -> Self {
        Harness { jobs }
    }

    pub fn serial() -> Self {
        Harness { jobs: Some(1) }
    }

    /// `f(0), ..., f(count - 1)`, in index order.
    pub fn map_trials<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            builder = builder.num_threads(j.max(1));
        }
        match builder.build() {
            Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&f).collect()),
            Err(_) => (0..count).map(f).collect(),
        }
    }
}

/// Neumaier-compensated sum in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStat {
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

impl MeanStat {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return MeanStat { mean: f64::NAN, std_err: f64::NAN, count };
        }
        let mean = compensated_sum(values.iter().copied()) / count as f64;
        let std_err = if count > 1 {
            let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
            (ss / (count - 1) as f64 / count as f64).sqrt()
        } else {
            f64::NAN
        };
        MeanStat { mean, std_err, count }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive() {
        let vals = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(vals), 2.0);
    }

    #[test]
    fn map_is_ordered_for_any_worker_count() {
        let a = Harness::serial().map_trials(100, |i| i * i);
        let b = Harness::new(Some(4)).map_trials(100, |i| i * i);
        assert_eq!(a, b);
        assert_eq!(a[7], 49);
    }

    #[test]
    fn mean_stat() {
        let s = MeanStat::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std_err - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(MeanStat::of(&[]).mean.is_nan());
    }
}
