//! Decreasing rearrangement of a function on a discrete measure space.

use serde::{Deserialize, Serialize};

use crate::measure::{DiscreteMeasure, LatticeFunction};

/// A nonincreasing step function on `[0, μ(Ω))`: level `levels[k]` on an
/// interval of length `lengths[k]`. Equal levels are merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub levels: Vec<f64>,
    pub lengths: Vec<f64>,
}

impl StepFunction {
    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Right endpoints `a_1 < a_2 < …` of the steps.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.lengths
            .iter()
            .scan(0.0, |acc, l| {
                *acc += l;
                Some(*acc)
            })
            .collect()
    }

    pub fn integral(&self) -> f64 {
        self.levels.iter().zip(&self.lengths).map(|(c, l)| c * l).sum()
    }

    /// Value at `t ∈ [0, μ(Ω))`; zero beyond the support.
    pub fn eval(&self, t: f64) -> f64 {
        let mut right = 0.0;
        for (c, l) in self.levels.iter().zip(&self.lengths) {
            right += l;
            if t < right {
                return *c;
            }
        }
        0.0
    }
}

pub fn decreasing_rearrangement(x: &LatticeFunction) -> StepFunction {
    rearrange(x.measure(), x.values())
}

pub(crate) fn rearrange(mu: &DiscreteMeasure, x: &[f64]) -> StepFunction {
    let mut pairs: Vec<(f64, f64)> = x.iter().map(|v| v.abs()).zip(mu.weights().iter().copied()).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut levels: Vec<f64> = Vec::with_capacity(pairs.len());
    let mut lengths: Vec<f64> = Vec::with_capacity(pairs.len());
    for (level, len) in pairs {
        match levels.last() {
            Some(&last) if last == level => *lengths.last_mut().unwrap() += len,
            _ => {
                levels.push(level);
                lengths.push(len);
            }
        }
    }
    StepFunction { levels, lengths }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn lf(mu: Vec<f64>, x: Vec<f64>) -> LatticeFunction {
        LatticeFunction::new(Arc::new(DiscreteMeasure::new(mu).unwrap()), x).unwrap()
    }

    #[test]
    fn two_atoms() {
        let s = decreasing_rearrangement(&lf(vec![1.0, 2.0], vec![3.0, 1.0]));
        assert_eq!(s.levels, vec![3.0, 1.0]);
        assert_eq!(s.lengths, vec![1.0, 2.0]);
        assert_eq!(s.integral(), 5.0);
        assert_eq!(s.eval(0.5), 3.0);
        assert_eq!(s.eval(2.9), 1.0);
    }

    #[test]
    fn constant_is_one_step() {
        let s = decreasing_rearrangement(&lf(vec![0.5, 1.5, 2.0], vec![-2.0, 2.0, 2.0]));
        assert_eq!(s.levels, vec![2.0]);
        assert_eq!(s.lengths, vec![4.0]);
    }

    #[test]
    fn ties_do_not_depend_on_atom_order() {
        let a = decreasing_rearrangement(&lf(vec![1.0, 2.0, 3.0], vec![1.0, 5.0, 1.0]));
        let b = decreasing_rearrangement(&lf(vec![3.0, 1.0, 2.0], vec![1.0, 1.0, 5.0]));
        assert_eq!(a, b);
        assert_eq!(a.levels, vec![5.0, 1.0]);
        assert_eq!(a.lengths, vec![2.0, 4.0]);
    }
}
