use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::linalg::least_squares;

/// Least-squares reconstruction restricted to `support`:
/// `sqrt(m / snr) (D_S^T D_S)^{-1} D_S^T y` on the support, zero elsewhere.
pub fn ls_on_support(
    y: &DVector<f64>,
    dictionary: &DMatrix<f64>,
    support: &[usize],
    snr: f64,
    m: usize,
) -> Result<DVector<f64>> {
    let (rows, n) = dictionary.shape();
    if y.len() != rows {
        return Err(Error::Dimension { expected: rows, got: y.len() });
    }
    if !(snr > 0.0 && snr.is_finite()) {
        return domain(format!("snr must be positive, got {snr}"));
    }
    if support.len() >= rows {
        return domain(format!(
            "support size {} must be below the number of measurements {rows}",
            support.len()
        ));
    }
    if let Some(bad) = support.iter().find(|&&i| i >= n) {
        return domain(format!("support index {bad} out of range for {n} atoms"));
    }
    let cols = dictionary.select_columns(support);
    let fit = least_squares(&cols, y, 1e-10)
        .ok_or_else(|| Error::Numerical("rank-deficient sub-dictionary".into()))?;
    let gain = (m as f64 / snr).sqrt();
    let mut x = DVector::zeros(n);
    for (i, c) in support.iter().zip(fit.x.iter()) {
        x[*i] = gain * c;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{draw_dictionary, draw_noise, DictionaryKind};
    use crate::rng::stream;

    fn setup() -> (DMatrix<f64>, DVector<f64>, Vec<usize>) {
        let d = draw_dictionary(30, 60, DictionaryKind::Gaussian, &mut stream(1, "d", &[]));
        let mut x = DVector::zeros(60);
        let support = vec![2, 9, 17, 40, 41];
        for (k, i) in support.iter().enumerate() {
            x[*i] = k as f64 - 1.7;
        }
        (d, x, support)
    }

    #[test]
    fn noiseless_recovery() {
        let (d, x, mut support) = setup();
        let snr = 4.0;
        let y = &d * &x * (snr / 30.0f64).sqrt();
        support.extend([0, 55]);
        let xh = ls_on_support(&y, &d, &support, snr, 30).unwrap();
        assert!((xh - x).norm() < 1e-12);
    }

    #[test]
    fn error_scales_with_inverse_root_snr() {
        let (d, x, support) = setup();
        let w = draw_noise(30, &mut stream(2, "w", &[]));
        let err = |snr: f64| {
            let y = &d * &x * (snr / 30.0f64).sqrt() + &w;
            ls_on_support(&y, &d, &support, snr, 30).unwrap() - &x
        };
        let e1 = err(3.0);
        let e2 = err(12.0);
        assert!((e1 * 0.5 - e2).norm() < 1e-12);
    }

    #[test]
    fn preconditions() {
        let (d, x, _) = setup();
        let y = &d * &x;
        let all: Vec<usize> = (0..30).collect();
        assert!(ls_on_support(&y, &d, &all, 1.0, 30).is_err());
        assert!(ls_on_support(&y, &d, &[1], 0.0, 30).is_err());
        assert!(ls_on_support(&y, &d, &[60], 1.0, 30).is_err());
        let mut dup = d.clone();
        let c = dup.column(3).clone_owned();
        dup.set_column(4, &c);
        assert!(matches!(ls_on_support(&y, &dup, &[3, 4], 1.0, 30), Err(Error::Numerical(_))));
    }
}
