//! Small dense factorizations used by the solvers.

use nalgebra::{DMatrix, DVector};

/// Diagonally pivoted Cholesky factorization `P G P^T = L L^T` of a
/// symmetric positive semi-definite matrix. The pivot sequence makes the
/// factorization rank-revealing: the diagonal of `L` is non-increasing.
#[derive(Debug, Clone)]
pub struct PivotedCholesky {
    l: DMatrix<f64>,
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedCholesky {
    /// Factors `g`. Pivots below `rel_tol * max(diag(g))` end the
    /// factorization and fix the numerical rank.
    pub fn new(g: &DMatrix<f64>, rel_tol: f64) -> Self {
        let m = g.nrows();
        assert_eq!(m, g.ncols(), "square matrix required");
        let mut a = g.clone();
        let mut perm: Vec<usize> = (0..m).collect();
        let max_diag = (0..m).map(|i| a[(i, i)]).fold(0.0f64, f64::max);
        let floor = rel_tol * max_diag;
        let mut rank = m;
        for k in 0..m {
            let (p, piv) = (k..m)
                .map(|i| (i, a[(i, i)]))
                .fold((k, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(piv > floor) || piv <= 0.0 {
                rank = k;
                break;
            }
            if p != k {
                a.swap_rows(k, p);
                a.swap_columns(k, p);
                perm.swap(k, p);
            }
            let lkk = a[(k, k)].sqrt();
            a[(k, k)] = lkk;
            for i in k + 1..m {
                a[(i, k)] /= lkk;
            }
            for j in k + 1..m {
                let ljk = a[(j, k)];
                for i in j..m {
                    a[(i, j)] -= a[(i, k)] * ljk;
                }
                for i in j + 1..m {
                    a[(j, i)] = a[(i, j)];
                }
            }
        }
        let mut l = DMatrix::zeros(m, m);
        for j in 0..rank {
            for i in j..m {
                l[(i, j)] = a[(i, j)];
            }
        }
        PivotedCholesky { l, perm, rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.l.nrows()
    }

    /// `(L_11 / L_rr)^2`, a lower bound on the 2-norm condition number of
    /// the factored matrix. Infinite when rank deficient.
    pub fn condition_estimate(&self) -> f64 {
        let m = self.l.nrows();
        if m == 0 {
            return 1.0;
        }
        if !self.is_full_rank() {
            return f64::INFINITY;
        }
        let r = self.l[(0, 0)] / self.l[(m - 1, m - 1)];
        r * r
    }

    /// Solves `G x = b`. Requires full rank.
    pub fn solve(&self, b: &DVector<f64>) -> Option<DVector<f64>> {
        if !self.is_full_rank() {
            return None;
        }
        let m = self.l.nrows();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..m {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[(i, k)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        for i in (0..m).rev() {
            let mut s = y[i];
            for k in i + 1..m {
                s -= self.l[(k, i)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
        let mut x = DVector::zeros(m);
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        Some(x)
    }
}

/// Solves a square system by LU with partial pivoting.
pub fn solve_square(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    a.clone().lu().solve(b)
}

/// Least-squares fit of a tall (or square) system by Householder QR.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub x: DVector<f64>,
    /// `||b - A x||^2`.
    pub residual_sq: f64,
}

/// Returns `None` when `a` has more columns than rows or when a diagonal
/// entry of `R` falls below `rel_tol` times the largest one.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> Option<LeastSquares> {
    let (m, k) = a.shape();
    if k > m || b.len() != m {
        return None;
    }
    if k == 0 {
        return Some(LeastSquares {
            x: DVector::zeros(0),
            residual_sq: b.norm_squared(),
        });
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let max_r = r.diagonal().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if r.diagonal().iter().any(|v| !(v.abs() > rel_tol * max_r)) {
        return None;
    }
    let q = qr.q();
    let qtb = q.tr_mul(b);
    let x = r.solve_upper_triangular(&qtb)?;
    let resid = b - a * &x;
    Some(LeastSquares {
        x,
        residual_sq: resid.norm_squared(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivoted_cholesky_solves_spd() {
        let b = DMatrix::from_fn(6, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.1 * i as f64);
        let g = &b * b.transpose() + DMatrix::identity(6, 6) * 0.5;
        let f = PivotedCholesky::new(&g, 1e-14);
        assert!(f.is_full_rank());
        let rhs = DVector::from_fn(6, |i, _| i as f64 - 1.5);
        let x = f.solve(&rhs).unwrap();
        assert!((&g * x - rhs).norm() < 1e-12);
        assert!(f.condition_estimate() >= 1.0);
    }

    #[test]
    fn pivoted_cholesky_detects_rank() {
        let b = DMatrix::from_fn(5, 2, |i, j| (i + 2 * j) as f64 + 1.0);
        let g = &b * b.transpose();
        let f = PivotedCholesky::new(&g, 1e-12);
        assert_eq!(f.rank(), 2);
        assert!(f.condition_estimate().is_infinite());
        assert!(f.solve(&DVector::zeros(5)).is_none());
    }

    #[test]
    fn least_squares_consistent_and_deficient() {
        let a = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, -1.0]);
        let x0 = DVector::from_vec(vec![0.3, -1.2]);
        let fit = least_squares(&a, &(&a * &x0), 1e-12).unwrap();
        assert!((fit.x - x0).norm() < 1e-14);
        assert!(fit.residual_sq < 1e-28);
        let dup = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        assert!(least_squares(&dup, &DVector::zeros(3), 1e-10).is_none());
    }
}
