//! Dense bounded-variable revised simplex.
//!
//! Two phases with artificial variables, explicit basis inverse with eta
//! updates and periodic refactorization. Pricing is Dantzig's rule, falling
//! back to Bland's smallest-index rule after a run of degenerate pivots, which
//! rules out cycling.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const FEAS_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 50;
const DEGENERATE_RUN: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pricing {
    /// Dantzig's rule with a Bland fallback on degenerate stalls.
    Hybrid,
    /// Bland's rule throughout.
    Bland,
}

/// `minimize cᵀx` subject to row constraints and `lower ≤ x ≤ upper`.
///
/// Lower bounds must be finite; upper bounds may be `+∞`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    rows: Vec<(Vec<f64>, Relation, f64)>,
    pub pricing: Pricing,
    pub max_iterations: usize,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Sensitivities `∂ objective / ∂ rhs_i`, one per row.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl LinearProgram {
    /// `n` variables, all in `[0, ∞)`, zero objective.
    pub fn new(n: usize) -> Self {
        Self {
            objective: vec![0.0; n],
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            rows: Vec::new(),
            pricing: Pricing::Hybrid,
            max_iterations: 50_000,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn add_row(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coefficients.len(), self.num_vars(), "row length must match the variable count");
        self.rows.push((coefficients, relation, rhs));
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let n = self.num_vars();
        for j in 0..n {
            if !self.lower[j].is_finite() || self.upper[j] < self.lower[j] || self.upper[j].is_nan() {
                return Err(Error::Lp("malformed: bounds must satisfy -∞ < lower ≤ upper"));
            }
        }
        let mut tableau = Standard::build(self);
        let iterations_1 = tableau.run(Phase::One, self.pricing, self.max_iterations)?;
        let infeasibility: f64 = tableau.artificial_sum();
        let scale = 1.0 + tableau.b.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if infeasibility > FEAS_TOL * scale {
            return Err(Error::Lp("infeasible"));
        }
        tableau.fix_artificials();
        let iterations_2 = tableau.run(Phase::Two, self.pricing, self.max_iterations)?;
        let x: Vec<f64> = (0..n).map(|j| tableau.value(j) + self.lower[j]).collect();
        let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        let duals = tableau.row_duals(Phase::Two);
        Ok(LpSolution { x, objective, duals, iterations: iterations_1 + iterations_2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

/// Equality form `A x = b`, `0 ≤ x ≤ u`: structural, then slack, then
/// artificial columns.
struct Standard {
    m: usize,
    cols: Vec<Vec<f64>>,
    b: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    first_artificial: usize,
    basis: Vec<usize>,
    at_upper: Vec<bool>,
    in_basis: Vec<Option<usize>>,
    binv: DMatrix<f64>,
    xb: Vec<f64>,
    since_refactor: usize,
}

impl Standard {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();
        let m = lp.rows.len();
        let mut cols: Vec<Vec<f64>> = (0..n).map(|j| lp.rows.iter().map(|r| r.0[j]).collect()).collect();
        let mut upper: Vec<f64> = (0..n).map(|j| lp.upper[j] - lp.lower[j]).collect();
        let mut cost = lp.objective.clone();
        let b: Vec<f64> = lp
            .rows
            .iter()
            .map(|(a, _, rhs)| rhs - a.iter().zip(&lp.lower).map(|(c, l)| c * l).sum::<f64>())
            .collect();
        for (i, (_, rel, _)) in lp.rows.iter().enumerate() {
            let sign = match rel {
                Relation::Le => 1.0,
                Relation::Ge => -1.0,
                Relation::Eq => continue,
            };
            let mut col = vec![0.0; m];
            col[i] = sign;
            cols.push(col);
            upper.push(f64::INFINITY);
            cost.push(0.0);
        }
        let first_artificial = cols.len();
        let mut basis = Vec::with_capacity(m);
        for i in 0..m {
            let mut col = vec![0.0; m];
            col[i] = if b[i] >= 0.0 { 1.0 } else { -1.0 };
            basis.push(cols.len());
            cols.push(col);
            upper.push(f64::INFINITY);
            cost.push(0.0);
        }
        let total = cols.len();
        let mut in_basis = vec![None; total];
        for (i, &j) in basis.iter().enumerate() {
            in_basis[j] = Some(i);
        }
        let mut binv = DMatrix::zeros(m, m);
        for i in 0..m {
            binv[(i, i)] = if b[i] >= 0.0 { 1.0 } else { -1.0 };
        }
        let xb = b.iter().map(|v| v.abs()).collect();
        Self {
            m,
            cols,
            b,
            upper,
            cost,
            first_artificial,
            basis,
            at_upper: vec![false; total],
            in_basis,
            binv,
            xb,
            since_refactor: 0,
        }
    }

    fn phase_cost(&self, phase: Phase, j: usize) -> f64 {
        match phase {
            Phase::One => f64::from(u8::from(j >= self.first_artificial)),
            Phase::Two => self.cost[j],
        }
    }

    fn artificial_sum(&self) -> f64 {
        (self.first_artificial..self.cols.len()).map(|j| self.value(j)).sum()
    }

    fn fix_artificials(&mut self) {
        for j in self.first_artificial..self.cols.len() {
            self.upper[j] = 0.0;
            self.at_upper[j] = false;
        }
        self.refactor().ok();
    }

    fn value(&self, j: usize) -> f64 {
        match self.in_basis[j] {
            Some(i) => self.xb[i],
            None if self.at_upper[j] => self.upper[j],
            None => 0.0,
        }
    }

    fn row_duals(&self, phase: Phase) -> Vec<f64> {
        let cb: Vec<f64> = self.basis.iter().map(|&j| self.phase_cost(phase, j)).collect();
        (0..self.m).map(|k| (0..self.m).map(|i| cb[i] * self.binv[(i, k)]).sum()).collect()
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let basis_matrix = DMatrix::from_fn(m, m, |i, k| self.cols[self.basis[k]][i]);
        self.binv = basis_matrix.try_inverse().ok_or(Error::Lp("numerically singular basis"))?;
        let mut rhs = self.b.clone();
        for j in 0..self.cols.len() {
            if self.in_basis[j].is_none() && self.at_upper[j] {
                for (r, a) in rhs.iter_mut().zip(&self.cols[j]) {
                    *r -= a * self.upper[j];
                }
            }
        }
        self.xb = (0..m).map(|i| (0..m).map(|k| self.binv[(i, k)] * rhs[k]).sum()).collect();
        self.since_refactor = 0;
        Ok(())
    }

    fn run(&mut self, phase: Phase, pricing: Pricing, max_iterations: usize) -> Result<usize> {
        let m = self.m;
        let total = self.cols.len();
        let mut degenerate = 0usize;
        for iteration in 0..max_iterations {
            let y = self.row_duals(phase);
            let bland = pricing == Pricing::Bland || degenerate >= DEGENERATE_RUN;
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..total {
                if self.in_basis[j].is_some() || self.upper[j] == 0.0 {
                    continue;
                }
                let d = self.phase_cost(phase, j) - self.cols[j].iter().zip(&y).map(|(a, v)| a * v).sum::<f64>();
                let gain = if self.at_upper[j] { d } else { -d };
                if gain > OPT_TOL {
                    if bland {
                        entering = Some((j, gain));
                        break;
                    }
                    if entering.is_none_or(|(_, g)| gain > g) {
                        entering = Some((j, gain));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(iteration);
            };
            let dir = if self.at_upper[q] { -1.0 } else { 1.0 };
            let alpha: Vec<f64> =
                (0..m).map(|i| (0..m).map(|k| self.binv[(i, k)] * self.cols[q][k]).sum()).collect();
            let mut theta = self.upper[q];
            let mut leaving: Option<(usize, bool)> = None;
            for i in 0..m {
                let delta = -dir * alpha[i];
                let jb = self.basis[i];
                let limit = if delta < -PIVOT_TOL {
                    (self.xb[i].max(0.0)) / -delta
                } else if delta > PIVOT_TOL && self.upper[jb].is_finite() {
                    (self.upper[jb] - self.xb[i]).max(0.0) / delta
                } else {
                    continue;
                };
                let tied = limit <= theta + 1e-14 && leaving.is_some_and(|(r, _)| jb < self.basis[r]);
                let better = limit < theta - 1e-14 || tied;
                if better {
                    theta = limit;
                    leaving = Some((i, delta > 0.0));
                }
            }
            if !theta.is_finite() {
                return Err(Error::Lp("unbounded"));
            }
            degenerate = if theta <= 1e-12 { degenerate + 1 } else { 0 };
            for i in 0..m {
                self.xb[i] -= dir * alpha[i] * theta;
            }
            match leaving {
                None => {
                    self.at_upper[q] = !self.at_upper[q];
                }
                Some((r, to_upper)) => {
                    let out = self.basis[r];
                    let entering_value = if self.at_upper[q] { self.upper[q] - theta } else { theta };
                    self.in_basis[out] = None;
                    self.at_upper[out] = to_upper;
                    self.basis[r] = q;
                    self.in_basis[q] = Some(r);
                    self.at_upper[q] = false;
                    self.xb[r] = entering_value;
                    let pivot = alpha[r];
                    for k in 0..m {
                        self.binv[(r, k)] /= pivot;
                    }
                    for i in 0..m {
                        if i != r && alpha[i] != 0.0 {
                            let factor = alpha[i];
                            for k in 0..m {
                                let v = self.binv[(r, k)];
                                self.binv[(i, k)] -= factor * v;
                            }
                        }
                    }
                    self.since_refactor += 1;
                    if self.since_refactor >= REFACTOR_EVERY {
                        self.refactor()?;
                    }
                }
            }
        }
        Err(Error::Lp("iteration limit reached"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(lp: &mut LinearProgram) -> [LpSolution; 2] {
        lp.pricing = Pricing::Hybrid;
        let a = lp.solve().unwrap();
        lp.pricing = Pricing::Bland;
        let b = lp.solve().unwrap();
        [a, b]
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  →  (2, 6), value 36
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-3.0, -5.0];
        lp.add_row(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add_row(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add_row(vec![3.0, 2.0], Relation::Le, 18.0);
        for s in both(&mut lp) {
            assert!((s.objective + 36.0).abs() < 1e-9);
            assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
            // shadow prices of the binding rows
            assert!((s.duals[1] + 1.5).abs() < 1e-9 && (s.duals[2] + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bounds_equalities_and_ge_rows() {
        // min x + 2y + 3z, x + y + z = 1, y ≥ 0.2 via row, z ∈ [0.1, 0.5], x ≤ 0.3
        let mut lp = LinearProgram::new(3);
        lp.objective = vec![1.0, 2.0, 3.0];
        lp.set_bounds(0, 0.0, 0.3);
        lp.set_bounds(2, 0.1, 0.5);
        lp.add_row(vec![1.0, 1.0, 1.0], Relation::Eq, 1.0);
        lp.add_row(vec![0.0, 1.0, 0.0], Relation::Ge, 0.2);
        for s in both(&mut lp) {
            assert!((s.x[0] - 0.3).abs() < 1e-9);
            assert!((s.x[1] - 0.6).abs() < 1e-9);
            assert!((s.x[2] - 0.1).abs() < 1e-9);
        }
    }

    #[test]
    fn negative_lower_bounds() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        lp.set_bounds(0, -5.0, 5.0);
        lp.add_row(vec![1.0], Relation::Ge, -2.0);
        assert!((lp.solve().unwrap().x[0] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(vec![1.0], Relation::Le, -1.0);
        assert_eq!(lp.solve().unwrap_err(), Error::Lp("infeasible"));
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-1.0, 0.0];
        lp.add_row(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve().unwrap_err(), Error::Lp("unbounded"));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![-0.75, 150.0, -0.02, 6.0];
        lp.add_row(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add_row(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add_row(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        for s in both(&mut lp) {
            assert!((s.objective + 0.05).abs() < 1e-9, "{}", s.objective);
        }
    }
}
