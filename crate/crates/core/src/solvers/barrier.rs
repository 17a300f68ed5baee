//! Log-barrier Newton method for `max f(z)` over `{A z ≤ b, z > 0}` with a
//! smooth concave `f`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Value, gradient and Hessian of a concave objective.
pub(crate) type Concave<'a> = &'a dyn Fn(&[f64]) -> (f64, DVector<f64>, DMatrix<f64>);

pub(crate) struct BarrierOptions {
    /// Stop when the barrier duality bound `(rows + vars)/τ` falls below this.
    pub gap: f64,
    pub max_newton: usize,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self { gap: 1e-11, max_newton: 80 }
    }
}

fn slacks(rows: &[(Vec<f64>, f64)], z: &[f64]) -> Vec<f64> {
    rows.iter().map(|(a, b)| b - a.iter().zip(z).map(|(x, y)| x * y).sum::<f64>()).collect()
}

fn interior(rows: &[(Vec<f64>, f64)], z: &[f64]) -> bool {
    z.iter().all(|v| *v > 0.0) && slacks(rows, z).iter().all(|s| *s > 0.0)
}

/// Path-following from a strictly feasible `z0`.
pub(crate) fn maximize(f: Concave<'_>, rows: &[(Vec<f64>, f64)], z0: Vec<f64>, opts: &BarrierOptions) -> Result<Vec<f64>> {
    if !interior(rows, &z0) {
        return Err(Error::Lp("barrier start is not strictly feasible"));
    }
    let n = z0.len();
    let m = rows.len() + n;
    let mut z = z0;
    let mut tau = 1.0;
    let phi = |z: &[f64], tau: f64| -> f64 {
        if !interior(rows, z) {
            return f64::INFINITY;
        }
        let (fv, _, _) = f(z);
        -tau * fv - slacks(rows, z).iter().map(|s| s.ln()).sum::<f64>() - z.iter().map(|v| v.ln()).sum::<f64>()
    };
    loop {
        for _ in 0..opts.max_newton {
            let (_, g, h) = f(&z);
            let s = slacks(rows, &z);
            let mut grad = -&g * tau;
            let mut hess = -&h * tau;
            for ((a, _), sk) in rows.iter().zip(&s) {
                let a = DVector::from_column_slice(a);
                grad += &a / *sk;
                hess += &a * a.transpose() / (sk * sk);
            }
            for j in 0..n {
                grad[j] -= 1.0 / z[j];
                hess[(j, j)] += 1.0 / (z[j] * z[j]);
            }
            let step = match hess.clone().cholesky() {
                Some(ch) => ch.solve(&(-&grad)),
                None => {
                    let ridge = 1e-12 * hess.diagonal().amax().max(1.0);
                    let shifted = hess + DMatrix::identity(n, n) * ridge;
                    match shifted.cholesky() {
                        Some(ch) => ch.solve(&(-&grad)),
                        None => return Err(Error::Lp("barrier Newton system is singular")),
                    }
                }
            };
            let decrement = -grad.dot(&step);
            if decrement / 2.0 < 1e-12 {
                break;
            }
            let current = phi(&z, tau);
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(a, b)| a + alpha * b).collect();
                let value = phi(&trial, tau);
                if value <= current - 0.25 * alpha * decrement {
                    z = trial;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if m as f64 / tau < opts.gap {
            return Ok(z);
        }
        tau *= 8.0;
    }
}
