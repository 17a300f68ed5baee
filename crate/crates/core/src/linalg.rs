//! Small dense eigenvalue helpers.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Largest eigenvalue of a symmetric matrix and a unit eigenvector.
pub fn top_eigen(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (0.0, DVector::zeros(0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut best = 0;
    for i in 1..n {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    (eig.eigenvalues[best], eig.eigenvectors.column(best).into_owned())
}

/// `sup_x xᵀQx / xᵀ diag(d) x` for positive semidefinite `Q` and `d ≥ 0`,
/// with a maximizing `x`. The value is `+∞` when `Q` charges a coordinate
/// where `d` vanishes.
pub fn generalized_top(q: &DMatrix<f64>, d: &[f64]) -> (f64, Vec<f64>) {
    let n = d.len();
    let scale = q.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return (0.0, vec![0.0; n]);
    }
    for j in 0..n {
        if d[j] <= 0.0 && q[(j, j)] > 1e-14 * scale {
            let mut x = vec![0.0; n];
            x[j] = 1.0;
            return (f64::INFINITY, x);
        }
    }
    let support: Vec<usize> = (0..n).filter(|&j| d[j] > 0.0).collect();
    let k = support.len();
    if k == 0 {
        return (0.0, vec![0.0; n]);
    }
    let inv_sqrt: Vec<f64> = support.iter().map(|&j| 1.0 / d[j].sqrt()).collect();
    let reduced = DMatrix::from_fn(k, k, |a, b| q[(support[a], support[b])] * inv_sqrt[a] * inv_sqrt[b]);
    let (lambda, v) = top_eigen(&reduced);
    let mut x = vec![0.0; n];
    for (a, &j) in support.iter().enumerate() {
        x[j] = v[a] * inv_sqrt[a];
    }
    (lambda.max(0.0), x)
}

/// Largest eigenvalue of a positive semidefinite matrix by power iteration,
/// used as an independent cross-check of the dense eigensolver.
pub fn power_iteration(m: &DMatrix<f64>, iterations: usize) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * i as f64);
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w = m * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = v.dot(&w) / v.dot(&v);
        v = w / norm;
    }
    lambda.max(v.dot(&(m * &v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_agrees_with_power_iteration() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.5, -1.0, 3.0, 2.0, 0.0, 1.0]);
        let g = a.transpose() * &a;
        let (l, v) = top_eigen(&g);
        assert!((l - power_iteration(&g, 500)).abs() < 1e-9 * l);
        assert!(((&g * &v) - &v * l).norm() < 1e-9);
    }

    #[test]
    fn generalized_handles_zero_weights() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!((generalized_top(&q, &[2.0, 0.0]).0 - 0.5).abs() < 1e-15);
        assert_eq!(generalized_top(&q, &[0.0, 1.0]).0, f64::INFINITY);
    }
}
