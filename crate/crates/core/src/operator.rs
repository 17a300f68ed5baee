//! Finite-dimensional homogeneous operators and forms together with the
//! representations of their domain and codomain.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::vectorvalued::Representation;

pub type MapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type FormFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum OperatorMap {
    Matrix(DMatrix<f64>),
    /// Black-box positively homogeneous map; `linear` unlocks the
    /// factorization builders.
    Callback { f: MapFn, linear: bool },
}

impl fmt::Debug for OperatorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Matrix(m) => write!(f, "Matrix({}x{})", m.nrows(), m.ncols()),
            Self::Callback { linear, .. } => write!(f, "Callback {{ linear: {linear} }}"),
        }
    }
}

/// `T: U → V` with `φ: U → X(μ)` and `ψ: V → Y(ν)`.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    map: OperatorMap,
    domain: Representation,
    codomain: Representation,
}

impl OperatorSpec {
    pub fn matrix(rows: &[Vec<f64>], domain: Representation, codomain: Representation) -> Result<Self> {
        let n = domain.input_dim();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        let m = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
        Self::from_matrix(m, domain, codomain)
    }

    pub fn from_matrix(m: DMatrix<f64>, domain: Representation, codomain: Representation) -> Result<Self> {
        if m.ncols() != domain.input_dim() {
            return Err(Error::DimensionMismatch { expected: domain.input_dim(), got: m.ncols() });
        }
        if m.nrows() != codomain.input_dim() {
            return Err(Error::DimensionMismatch { expected: codomain.input_dim(), got: m.nrows() });
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::Unsupported("matrix entries must be finite".into()));
        }
        Ok(Self { map: OperatorMap::Matrix(m), domain, codomain })
    }

    /// Wraps a callback, spot-checking `T(λx) = λT(x)` for `λ > 0` (and
    /// additivity when `linear` is claimed).
    pub fn callback(
        f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        linear: bool,
        domain: Representation,
        codomain: Representation,
    ) -> Result<Self> {
        let op = Self { map: OperatorMap::Callback { f: Arc::new(f), linear }, domain, codomain };
        op.check_callback()?;
        Ok(op)
    }

    fn check_callback(&self) -> Result<()> {
        let n = self.input_dim();
        let m = self.output_dim();
        let probe = |k: usize| -> Vec<f64> { (0..n).map(|i| ((k * 13 + 5) as f64 * (i as f64 + 0.7)).sin()).collect() };
        for k in 0..8 {
            let x = probe(k);
            let tx = self.apply(&x);
            if tx.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: tx.len() });
            }
            let scale = 1.0 + tx.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            for lambda in [0.5, 2.0, 3.7] {
                let xs: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                let defect = self
                    .apply(&xs)
                    .iter()
                    .zip(&tx)
                    .map(|(a, b)| (a - lambda * b).abs())
                    .fold(0.0, f64::max)
                    / (lambda * scale);
                if defect > 1e-9 {
                    return Err(Error::NotHomogeneous { lambda, defect });
                }
            }
            if self.is_linear() {
                let y = probe(k + 100);
                let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                let ty = self.apply(&y);
                let defect = self
                    .apply(&sum)
                    .iter()
                    .zip(tx.iter().zip(&ty))
                    .map(|(s, (a, b))| (s - a - b).abs())
                    .fold(0.0, f64::max);
                if defect > 1e-9 * scale {
                    return Err(Error::NonLinear);
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match &self.map {
            OperatorMap::Matrix(m) => (m * DVector::from_column_slice(x)).iter().copied().collect(),
            OperatorMap::Callback { f, .. } => f(x),
        }
    }

    /// `|ψ(Tx)|` on the codomain measure.
    pub fn psi(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.codomain.represent_abs(&self.apply(x))
    }

    /// `|φ(x)|` on the domain measure.
    pub fn phi(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.domain.represent_abs(x)
    }

    pub fn matrix_ref(&self) -> Option<&DMatrix<f64>> {
        match &self.map {
            OperatorMap::Matrix(m) => Some(m),
            OperatorMap::Callback { .. } => None,
        }
    }

    pub fn map(&self) -> &OperatorMap {
        &self.map
    }

    pub fn is_linear(&self) -> bool {
        match &self.map {
            OperatorMap::Matrix(_) => true,
            OperatorMap::Callback { linear, .. } => *linear,
        }
    }

    pub fn domain(&self) -> &Representation {
        &self.domain
    }

    pub fn codomain(&self) -> &Representation {
        &self.codomain
    }

    pub fn input_dim(&self) -> usize {
        self.domain.input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.codomain.input_dim()
    }

    /// `αT`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let map = match &self.map {
            OperatorMap::Matrix(m) => OperatorMap::Matrix(m * alpha),
            OperatorMap::Callback { f, linear } => {
                let f = f.clone();
                OperatorMap::Callback { f: Arc::new(move |x: &[f64]| f(x).into_iter().map(|v| v * alpha).collect()), linear: *linear }
            }
        };
        Self { map, domain: self.domain.clone(), codomain: self.codomain.clone() }
    }

    /// Coordinates of the codomain measure on which `ψ(Tx)` can be nonzero:
    /// rows of the matrix block, or atoms hit by any probe of a callback.
    pub fn active_codomain_atoms(&self) -> Vec<bool> {
        let atoms = self.codomain.measure().len();
        let bd = self.codomain.block_dim();
        match &self.map {
            OperatorMap::Matrix(m) if self.codomain.kind() != crate::vectorvalued::RepresentationKind::A => {
                if self.codomain.kind() == crate::vectorvalued::RepresentationKind::B {
                    return vec![m.iter().any(|v| *v != 0.0)];
                }
                (0..atoms)
                    .map(|i| (i * bd..(i + 1) * bd).any(|row| m.row(row).iter().any(|v| *v != 0.0)))
                    .collect()
            }
            _ => {
                let n = self.input_dim();
                let mut active = vec![false; atoms];
                let mut probes: Vec<Vec<f64>> = (0..n)
                    .map(|j| {
                        let mut e = vec![0.0; n];
                        e[j] = 1.0;
                        e
                    })
                    .collect();
                probes.extend((0..16).map(|k| (0..n).map(|i| ((k * 31 + 11) as f64 * (i as f64 + 0.3)).sin()).collect()));
                for x in probes {
                    if let Ok(v) = self.psi(&x) {
                        for (a, val) in active.iter_mut().zip(v) {
                            *a |= val > 0.0;
                        }
                    }
                }
                active
            }
        }
    }
}

/// A homogeneous form `u: U₁ × U₂ → ℝ` with representations `φ₁`, `φ₂` and
/// exponents `r₁`, `r₂`.
#[derive(Clone)]
pub struct FormSpec {
    u: FormFn,
    pub left: Representation,
    pub right: Representation,
    pub r1: f64,
    pub r2: f64,
}

impl fmt::Debug for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormSpec")
            .field("left", &self.left)
            .field("right", &self.right)
            .field("r1", &self.r1)
            .field("r2", &self.r2)
            .finish_non_exhaustive()
    }
}

impl FormSpec {
    pub fn new(
        u: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        left: Representation,
        right: Representation,
        r1: f64,
        r2: f64,
    ) -> Result<Self> {
        for r in [r1, r2] {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidExponent { value: r, reason: "form exponents must be in (0, ∞)" });
            }
        }
        let form = Self { u: Arc::new(u), left, right, r1, r2 };
        form.check_bihomogeneous()?;
        Ok(form)
    }

    /// `u(x, y) = xᵀ A y`.
    pub fn bilinear(a: DMatrix<f64>, left: Representation, right: Representation, r1: f64, r2: f64) -> Result<Self> {
        if a.nrows() != left.input_dim() {
            return Err(Error::DimensionMismatch { expected: left.input_dim(), got: a.nrows() });
        }
        if a.ncols() != right.input_dim() {
            return Err(Error::DimensionMismatch { expected: right.input_dim(), got: a.ncols() });
        }
        let u = move |x: &[f64], y: &[f64]| (DVector::from_column_slice(x).transpose() * &a * DVector::from_column_slice(y))[0];
        Self::new(u, left, right, r1, r2)
    }

    /// `1/t = 1/r₁ + 1/r₂`.
    pub fn t(&self) -> f64 {
        1.0 / (1.0 / self.r1 + 1.0 / self.r2)
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.u)(x, y)
    }

    fn check_bihomogeneous(&self) -> Result<()> {
        let n1 = self.left.input_dim();
        let n2 = self.right.input_dim();
        for k in 0..6 {
            let x: Vec<f64> = (0..n1).map(|i| ((k * 5 + 1) as f64 * (i as f64 + 0.9)).cos()).collect();
            let y: Vec<f64> = (0..n2).map(|i| ((k * 3 + 2) as f64 * (i as f64 + 0.4)).sin()).collect();
            let base = self.eval(&x, &y);
            for lambda in [0.5, 2.5] {
                let xs: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                let ys: Vec<f64> = y.iter().map(|v| v * lambda).collect();
                for value in [self.eval(&xs, &y), self.eval(&x, &ys)] {
                    let defect = (value - lambda * base).abs() / (1.0 + (lambda * base).abs());
                    if defect > 1e-9 {
                        return Err(Error::NotHomogeneous { lambda, defect });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DiscreteMeasure;
    use crate::space::SpaceDescriptor;
    use crate::vectorvalued::VectorNorm;

    fn l1(n: usize) -> Representation {
        Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(n)).unwrap()
    }

    #[test]
    fn matrix_dimensions_are_checked() {
        let dom = Representation::dirac(VectorNorm::Euclidean, 1).unwrap();
        assert!(OperatorSpec::matrix(&[vec![1.0], vec![1.0]], dom.clone(), l1(2)).is_ok());
        assert!(OperatorSpec::matrix(&[vec![1.0], vec![1.0]], dom.clone(), l1(3)).is_err());
        assert!(OperatorSpec::matrix(&[vec![1.0, 2.0], vec![1.0, 0.0]], dom, l1(2)).is_err());
    }

    #[test]
    fn callbacks_are_spot_checked() {
        let dom = Representation::dirac(VectorNorm::Euclidean, 2).unwrap();
        let abs_map = OperatorSpec::callback(|x: &[f64]| vec![x[0].abs(), x[1]], false, dom.clone(), l1(2));
        assert!(abs_map.is_ok());
        let claims_linear = OperatorSpec::callback(|x: &[f64]| vec![x[0].abs(), x[1]], true, dom.clone(), l1(2));
        assert_eq!(claims_linear.unwrap_err(), Error::NonLinear);
        let affine = OperatorSpec::callback(|x: &[f64]| vec![x[0] + 1.0, x[1]], false, dom, l1(2));
        assert!(matches!(affine, Err(Error::NotHomogeneous { .. })));
    }

    #[test]
    fn active_atoms_follow_zero_rows() {
        let dom = Representation::dirac(VectorNorm::Euclidean, 2).unwrap();
        let op = OperatorSpec::matrix(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 2.0]], dom, l1(3)).unwrap();
        assert_eq!(op.active_codomain_atoms(), vec![true, false, true]);
    }

    #[test]
    fn bilinear_form() {
        let f = FormSpec::bilinear(DMatrix::identity(2, 2), l1(2), l1(2), 2.0, 2.0).unwrap();
        assert_eq!(f.eval(&[1.0, 2.0], &[3.0, 4.0]), 11.0);
        assert_eq!(f.t(), 1.0);
    }
}
