use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::linalg::least_squares;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyFit {
    /// Ascending powers: `y ~ c0 + c1 x + c2 x^2 + ...`.
    pub coeffs: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Polynomial least squares, optionally weighted (weights multiply squared residuals).
pub fn polyfit(x: &[f64], y: &[f64], degree: usize, weights: Option<&[f64]>) -> Result<PolyFit> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), got: y.len() });
    }
    if x.len() < degree + 1 {
        return domain(format!("need at least {} points for degree {degree}, got {}", degree + 1, x.len()));
    }
    let sw: Vec<f64> = match weights {
        Some(w) if w.len() != x.len() => {
            return Err(Error::Dimension { expected: x.len(), got: w.len() })
        }
        Some(w) => w.iter().map(|v| v.sqrt()).collect(),
        None => vec![1.0; x.len()],
    };
    let a = DMatrix::from_fn(x.len(), degree + 1, |i, j| sw[i] * x[i].powi(j as i32));
    let b = DVector::from_fn(x.len(), |i, _| sw[i] * y[i]);
    let fit = least_squares(&a, &b, 1e-13).ok_or_else(|| Error::Numerical("degenerate abscissae".into()))?;
    let mut out = PolyFit { coeffs: fit.x.iter().copied().collect(), residuals: Vec::new() };
    out.residuals = x.iter().zip(y).map(|(xi, yi)| yi - out.eval(*xi)).collect();
    Ok(out)
}
