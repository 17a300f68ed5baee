//! Finite discrete measure spaces and the lattice functions living on them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite atom set with strictly positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureRepr {
    atom_weights: Vec<f64>,
}

impl TryFrom<MeasureRepr> for DiscreteMeasure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        DiscreteMeasure::new(r.atom_weights)
    }
}

impl From<DiscreteMeasure> for MeasureRepr {
    fn from(m: DiscreteMeasure) -> Self {
        MeasureRepr { atom_weights: m.weights }
    }
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMeasure("at least one atom is required".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidMeasure(format!(
                "atom {i} has weight {w}; weights must be finite and > 0"
            )));
        }
        Ok(Self { weights })
    }

    /// `n` atoms of weight one.
    pub fn counting(n: usize) -> Self {
        Self::new(vec![1.0; n.max(1)]).expect("counting measure is valid")
    }

    /// The product measure `μ1 ⊗ μ2`, atoms in row-major order.
    pub fn product(first: &DiscreteMeasure, second: &DiscreteMeasure) -> Self {
        let weights = first
            .weights
            .iter()
            .flat_map(|a| second.weights.iter().map(move |b| a * b))
            .collect();
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∫ x y dμ`.
    pub fn pairing(&self, x: &[f64], y: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(x.iter().zip(y))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub(crate) fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        Ok(())
    }
}

/// A real function on the atoms of a [`DiscreteMeasure`].
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    values: Vec<f64>,
    measure: Arc<DiscreteMeasure>,
}

impl LatticeFunction {
    pub fn new(measure: Arc<DiscreteMeasure>, values: Vec<f64>) -> Result<Self> {
        measure.check_len(&values)?;
        Ok(Self { values, measure })
    }

    pub fn zeros(measure: Arc<DiscreteMeasure>) -> Self {
        let values = vec![0.0; measure.len()];
        Self { values, measure }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn measure(&self) -> &Arc<DiscreteMeasure> {
        &self.measure
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    /// `|x|^α` with the convention `0^α = 0`.
    pub fn pow_abs(&self, alpha: f64) -> Self {
        self.map(|v| pow_abs(v, alpha))
    }

    pub fn mul(&self, other: &LatticeFunction) -> Result<Self> {
        self.measure.check_len(&other.values)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self { values, measure: self.measure.clone() })
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().copied().map(f).collect(),
            measure: self.measure.clone(),
        }
    }
}

/// `|v|^α`, with `0^α = 0` for every `α` (including `α = 0`).
#[inline]
pub fn pow_abs(v: f64, alpha: f64) -> f64 {
    let a = v.abs();
    if a == 0.0 {
        0.0
    } else if alpha == 1.0 {
        a
    } else {
        a.powf(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(DiscreteMeasure::new(vec![1.0, 0.0]).is_err());
        assert!(DiscreteMeasure::new(vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn product_is_row_major() {
        let a = DiscreteMeasure::new(vec![1.0, 2.0]).unwrap();
        let b = DiscreteMeasure::new(vec![3.0, 5.0]).unwrap();
        assert_eq!(DiscreteMeasure::product(&a, &b).weights(), &[3.0, 5.0, 6.0, 10.0]);
    }

    #[test]
    fn lattice_function_checks_length() {
        let m = Arc::new(DiscreteMeasure::counting(2));
        assert!(LatticeFunction::new(m.clone(), vec![1.0]).is_err());
        let x = LatticeFunction::new(m, vec![-2.0, 0.0]).unwrap();
        assert_eq!(x.pow_abs(0.0).values(), &[1.0, 0.0]);
        assert_eq!(x.abs().values(), &[2.0, 0.0]);
    }

    #[test]
    fn json_roundtrip() {
        let m = DiscreteMeasure::new(vec![0.1, 1.0 / 3.0]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"atom_weights":[0.1,0.3333333333333333]}"#);
        let back: DiscreteMeasure = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<DiscreteMeasure>(r#"{"atom_weights":[-1]}"#).is_err());
    }
}
