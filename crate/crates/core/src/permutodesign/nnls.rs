//! Lawson–Hanson nonnegative least squares.

use nalgebra::{DMatrix, DVector};

/// Minimizes `‖A x − b‖₂` over `x ≥ 0`. Returns the solution and its residual norm.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let n = a.ncols();
    let tol = 1e-12 * (a.amax().max(1.0)) * (a.nrows().max(n) as f64);
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let max_iter = 3 * n + 30;
    for _ in 0..max_iter {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let z = solve_subset(a, b, &idx);
            if z.iter().all(|&v| v > 0.0) {
                for (k, &col) in idx.iter().enumerate() {
                    x[col] = z[k];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (k, &col) in idx.iter().enumerate() {
                if z[k] <= 0.0 {
                    alpha = alpha.min(x[col] / (x[col] - z[k]));
                }
            }
            for (k, &col) in idx.iter().enumerate() {
                x[col] += alpha * (z[k] - x[col]);
                if x[col] <= tol {
                    x[col] = 0.0;
                    passive[col] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    let residual = (a * &x - b).norm();
    (x, residual)
}

fn solve_subset(a: &DMatrix<f64>, b: &DVector<f64>, idx: &[usize]) -> Vec<f64> {
    let sub = DMatrix::from_fn(a.nrows(), idx.len(), |i, k| a[(i, idx[k])]);
    let svd = sub.svd(true, true);
    let sol = svd.solve(b, 1e-12).expect("SVD computed with both factors");
    sol.iter().copied().collect()
}
