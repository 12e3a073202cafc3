//! Monte Carlo protocols.
//!
//! Every trial draws from streams keyed by `(seed, protocol label, trial
//! coordinates)`, trials run on a [`Harness`] and results are reduced in
//! trial order with compensated summation, so reports do not depend on the
//! number of workers.

mod converse;
mod cs;
mod curve;
mod extrapolation;
mod fit;
mod harness;
mod qq;

pub use converse::{converse_energy_experiment, ConverseReport, ConverseRow};
pub use cs::{cs_mse_experiment, cs_region, oracle_support, CsOutcome, CsRegion, DATA_PRIOR};
pub use curve::{noisy_region_curve, threshold_curve};
pub use extrapolation::{fit_extrapolation, sweep_min_sparsity, ExtrapolationReport, SizePoint};
pub use fit::{polyfit, PolyFit};
pub use harness::{compensated_sum, Harness, MeanStat};
pub use qq::{ks_statistic, qq_experiment, QqReport};
