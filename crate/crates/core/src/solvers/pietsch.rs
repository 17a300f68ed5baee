//! Pietsch measures: probability weights `λ` on the coordinate functionals
//! of `ℓ_∞^N` with `‖Tx‖^r ≤ π^r Σ_j λ_j |x_j|^r`.
//!
//! Column generation on the linear program `min Σ μ_j` subject to
//! `Σ_j μ_j |x_j|^r ≥ ‖Tx‖^r` over a growing witness set; then
//! `π* = (Σ μ_j)^{1/r}` and `λ = μ / Σ μ`.

use super::certificate::{Infeasibility, PietschCertificate, SolverMetadata};
use super::config::SolverConfig;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::measure::pow_abs;
use crate::operator::OperatorSpec;
use crate::search::{par_starts, start_rng, SearchBudget};
use crate::vectorvalued::RepresentationKind;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

const STREAM: u64 = 0x7069_6574;
const VERTEX_LIMIT: usize = 12;
const CUTS_PER_ROUND: usize = 4;

struct Summing<'a> {
    op: &'a OperatorSpec,
    r: f64,
    /// `‖Tx‖²` is a quadratic form in `x`.
    quadratic: bool,
}

/// Gram matrix `G` with `‖Tx‖² = xᵀ G x`, recovered by polarization.
fn gram(s: &Summing<'_>) -> DMatrix<f64> {
    let n = s.op.input_dim();
    let unit = |j: usize| {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        e
    };
    let diag: Vec<f64> = (0..n).map(|j| s.target(&unit(j))).collect();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else {
            let mut e = unit(i);
            e[j] = 1.0;
            0.5 * (s.target(&e) - diag[i] - diag[j])
        }
    })
}

/// `min Σ μ_j` subject to `diag(μ) ⪰ G` along the central path of
/// `Σ μ_j − τ⁻¹ log det(diag(μ) − G)`; the duality gap is `n/τ`, and the
/// returned point is strictly feasible.
fn logdet_path(g: &DMatrix<f64>) -> (Vec<f64>, usize) {
    let n = g.nrows();
    let scale = g.trace();
    if !(scale > 0.0) {
        return (vec![0.0; n], 0);
    }
    let g = g / scale;
    let slack = |mu: &[f64]| DMatrix::from_diagonal(&DVector::from_column_slice(mu)) - &g;
    let objective = |mu: &[f64], tau: f64| -> Option<f64> {
        let chol = slack(mu).cholesky()?;
        let logdet: f64 = chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
        Some(mu.iter().sum::<f64>() - logdet / tau)
    };
    let mut mu = vec![1.0 + g.diagonal().iter().sum::<f64>(); n];
    let mut tau = 1.0;
    let mut steps = 0;
    while n as f64 / tau > 1e-13 {
        for _ in 0..100 {
            let Some(chol) = slack(&mu).cholesky() else { break };
            let w = chol.inverse();
            let grad = DVector::from_fn(n, |j, _| 1.0 - w[(j, j)] / tau);
            let hess = w.component_mul(&w) / tau;
            let Some(h) = hess.cholesky() else { break };
            let delta = -h.solve(&grad);
            let decrement = -grad.dot(&delta);
            steps += 1;
            if decrement < 1e-14 {
                break;
            }
            let f0 = objective(&mu, tau).unwrap_or(f64::INFINITY);
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-12 {
                let trial: Vec<f64> = mu.iter().zip(delta.iter()).map(|(m, d)| m + t * d).collect();
                if let Some(f) = objective(&trial, tau) {
                    if f <= f0 - 0.25 * t * decrement {
                        mu = trial;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        tau *= 8.0;
    }
    (mu.iter().map(|m| m * scale).collect(), steps)
}

/// Eigenpairs of `G − diag(μ)` with positive eigenvalue, largest first,
/// eigenvectors rescaled into the unit cube.
fn positive_directions(g: &DMatrix<f64>, mu: &[f64]) -> (f64, Vec<Vec<f64>>) {
    let m = g - DMatrix::from_diagonal(&DVector::from_column_slice(mu));
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, Vec<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let col = eig.eigenvectors.column(k);
            let scale = col.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            (*v, col.iter().map(|c| c / scale).collect())
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let top = pairs.first().map_or(0.0, |p| p.0);
    (top, pairs.into_iter().filter(|p| p.0 > 0.0).map(|p| p.1).collect())
}

impl Summing<'_> {
    fn target(&self, x: &[f64]) -> f64 {
        self.op.codomain().norm(&self.op.apply(x)).map(|v| pow_abs(v, self.r)).unwrap_or(f64::NAN)
    }

    fn gain(&self, mu: &[f64], x: &[f64]) -> f64 {
        self.target(x) - mu.iter().zip(x).map(|(m, v)| m * pow_abs(*v, self.r)).sum::<f64>()
    }

    /// Maximizes the gain along coordinate `j` over `[-1, 1]`.
    fn line_max(&self, mu: &[f64], x: &mut [f64]) -> f64 {
        let j_count = x.len();
        let mut best = self.gain(mu, x);
        for j in 0..j_count {
            let original = x[j];
            let eval = |t: f64, x: &mut [f64]| {
                x[j] = t;
                self.gain(mu, x)
            };
            let mut candidate = (original, best);
            if self.quadratic {
                let (fm, f0, fp) = (eval(-1.0, x), eval(0.0, x), eval(1.0, x));
                let a = 0.5 * (fp + fm) - f0;
                let b = 0.5 * (fp - fm);
                for (t, v) in [(-1.0, fm), (0.0, f0), (1.0, fp)] {
                    if v > candidate.1 {
                        candidate = (t, v);
                    }
                }
                if a < 0.0 {
                    let t = (-b / (2.0 * a)).clamp(-1.0, 1.0);
                    let v = eval(t, x);
                    if v > candidate.1 {
                        candidate = (t, v);
                    }
                }
            } else {
                let grid = 40;
                let mut k_best = 0;
                let mut values = Vec::with_capacity(grid + 1);
                for k in 0..=grid {
                    let t = -1.0 + 2.0 * k as f64 / grid as f64;
                    let v = eval(t, x);
                    values.push(v);
                    if v > values[k_best] {
                        k_best = k;
                    }
                }
                let t_best = -1.0 + 2.0 * k_best as f64 / grid as f64;
                if values[k_best] > candidate.1 {
                    candidate = (t_best, values[k_best]);
                }
                let (mut lo, mut hi) = ((t_best - 2.0 / grid as f64).max(-1.0), (t_best + 2.0 / grid as f64).min(1.0));
                let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
                for _ in 0..60 {
                    let a = hi - inv_phi * (hi - lo);
                    let b = lo + inv_phi * (hi - lo);
                    if eval(a, x) < eval(b, x) {
                        lo = a;
                    } else {
                        hi = b;
                    }
                }
                let t = 0.5 * (lo + hi);
                let v = eval(t, x);
                if v > candidate.1 {
                    candidate = (t, v);
                }
            }
            x[j] = candidate.0;
            best = candidate.1;
        }
        best
    }

    fn ascend(&self, mu: &[f64], mut x: Vec<f64>) -> (f64, Vec<f64>) {
        let mut value = self.gain(mu, &x);
        for _ in 0..100 {
            let next = self.line_max(mu, &mut x);
            if next <= value + 1e-15 * value.abs().max(1.0) {
                value = value.max(next);
                break;
            }
            value = next;
        }
        (value, x)
    }

    /// Local maxima of `‖Tx‖^r − Σ μ_j |x_j|^r` on the unit cube, best first,
    /// with duplicates removed.
    fn separate(&self, mu: &[f64], budget: &SearchBudget, round: u64, hints: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
        let n = self.op.input_dim();
        let mut starts: Vec<Vec<f64>> = Vec::new();
        if n <= VERTEX_LIMIT {
            starts.extend(sign_vertices(n));
        }
        starts.extend(hints.iter().cloned());
        starts.extend((0..budget.starts).map(|i| {
            let mut rng = start_rng(budget.seed.wrapping_add(round), STREAM, i as u64);
            (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
        }));
        let mut results = par_starts(starts.len(), |i| self.ascend(mu, starts[i].clone()));
        results.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut distinct: Vec<(f64, Vec<f64>)> = Vec::new();
        for (v, x) in results {
            let same = |y: &Vec<f64>| x.iter().zip(y).all(|(a, b)| (a - b).abs() < 1e-9) || x.iter().zip(y).all(|(a, b)| (a + b).abs() < 1e-9);
            if !distinct.iter().any(|(_, y)| same(y)) {
                distinct.push((v, x));
            }
        }
        distinct
    }
}

fn sign_vertices(n: usize) -> Vec<Vec<f64>> {
    (0..1usize << n.saturating_sub(1))
        .map(|mask| (0..n).map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect()
}

/// Pietsch weights for `T` out of `ℓ_∞^N` at the summing-norm bound `pi_r`.
///
/// Returns [`Error::Infeasible`] with a violating `x` when `pi_r` is below
/// the smallest bound certifiable on the witness set.
pub fn solve_pietsch(op: &OperatorSpec, r: f64, pi_r: f64, cfg: &SolverConfig) -> Result<PietschCertificate> {
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::InvalidExponent { value: r, reason: "summing norms need r in [1, ∞)" });
    }
    if !(pi_r.is_finite() && pi_r >= 0.0) {
        return Err(Error::Unsupported(format!("summing-norm bound {pi_r} must be finite and nonnegative")));
    }
    let dom = op.domain();
    let sup_domain = match dom.kind() {
        RepresentationKind::C => dom.space().as_lp().is_some_and(f64::is_infinite),
        RepresentationKind::B => dom.inner_norm().and_then(|n| n.as_lp()).is_some_and(f64::is_infinite),
        _ => false,
    };
    if !sup_domain {
        return Err(Error::Unsupported("Pietsch domination needs a domain inside ℓ_∞^N".into()));
    }
    let cod = op.codomain();
    let quadratic = r == 2.0
        && op.is_linear()
        && cod.is_quadratic()
        && (cod.kind() == RepresentationKind::B || cod.space().as_lp() == Some(2.0));
    let s = Summing { op, r, quadratic };
    let n = op.input_dim();
    let budget = cfg.budget();
    let mut cuts: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    if n <= VERTEX_LIMIT {
        cuts.extend(sign_vertices(n));
    } else {
        cuts.push(vec![1.0; n]);
    }
    let g = s.quadratic.then(|| gram(&s));
    let mut mu = vec![0.0; n];
    let mut rounds = 0;
    let mut violation = f64::INFINITY;
    if let Some(g) = &g {
        let (path, steps) = logdet_path(g);
        mu = path;
        rounds = steps;
        violation = positive_directions(g, &mu).0.max(0.0) * n as f64;
    }
    for round in (0..cfg.max_iterations.max(1)).filter(|_| g.is_none()) {
        rounds = round + 1;
        let mut lp = LinearProgram::new(n);
        lp.objective = vec![1.0; n];
        for x in &cuts {
            let t = s.target(x);
            if t > 0.0 {
                lp.add_row(x.iter().map(|v| pow_abs(*v, r) / t).collect(), Relation::Ge, 1.0);
            }
        }
        mu = lp.solve()?.x;
        let total: f64 = mu.iter().sum();
        let found = s.separate(&mu, &budget, round as u64, &cuts[cuts.len().saturating_sub(4)..]);
        violation = found.first().map_or(0.0, |f| f.0);
        let floor = 1e-10 * total.max(1.0);
        let fresh: Vec<Vec<f64>> = found.into_iter().filter(|f| f.0 > floor).take(CUTS_PER_ROUND).map(|f| f.1).collect();
        if violation <= 1e-11 * total.max(1.0) || fresh.is_empty() {
            break;
        }
        cuts.extend(fresh);
    }
    let total: f64 = mu.iter().sum();
    let optimal = total.powf(1.0 / r);
    let lambda: Vec<f64> = if total > 0.0 {
        let clipped: Vec<f64> = mu.iter().map(|v| v.max(0.0)).collect();
        let sum: f64 = clipped.iter().sum();
        clipped.iter().map(|v| v / sum).collect()
    } else {
        vec![1.0 / n as f64; n]
    };
    let scaled: Vec<f64> = lambda.iter().map(|l| l * pi_r.powf(r)).collect();
    let (residual, witness) = match &g {
        Some(g) => {
            let (top, dirs) = positive_directions(g, &scaled);
            (top.max(0.0) * n as f64, dirs.into_iter().next().unwrap_or_else(|| vec![0.0; n]))
        }
        None => s
            .separate(&scaled, &budget, u64::MAX / 2, &cuts[cuts.len().saturating_sub(4)..])
            .into_iter()
            .next()
            .unwrap_or((0.0, vec![0.0; n])),
    };
    if pi_r < optimal * (1.0 - cfg.tolerance) {
        return Err(Error::Infeasible(Box::new(Infeasibility {
            constant: pi_r,
            required: Some(optimal),
            best_residual: residual.max(0.0),
            witness,
            message: format!("summing-norm bound {pi_r:.9} is below the certified minimum {optimal:.9}"),
        })));
    }
    Ok(PietschCertificate {
        r,
        lambda,
        constant: pi_r,
        optimal_constant: optimal,
        residual: residual.max(0.0),
        witnesses: cuts,
        metadata: SolverMetadata {
            method: if g.is_some() { "logdet-barrier" } else { "column-generation/simplex" }.into(),
            seed: cfg.seed,
            iterations: rounds,
            gap: Some(violation.max(0.0)),
            exact_oracle: g.is_some(),
        },
    })
}
