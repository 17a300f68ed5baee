//! Homogeneous representations of abstract sets in function spaces, Bochner
//! spaces `X(μ, E)`, and the reduction of block operators to lattice data.
//!
//! | kind | map                                             |
//! |------|-------------------------------------------------|
//! | A    | `x ↦ (x'(x))_{x' ∈ grid}` into `ℓ_∞(grid)`       |
//! | B    | `x ↦ ‖x‖_E · 1` on a one-atom Dirac measure      |
//! | C    | identity on a lattice `X(μ)`                     |
//! | D    | kind E with `X = L_r(μ)`                         |
//! | E    | `x ↦ ‖x(·)‖_E` from `X(μ, E)` into `X(μ)`        |

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::operator::OperatorSpec;
use crate::space::{lp_norm, SpaceDescriptor};

pub type NormFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Quasi-norm on `ℝ^d`: the inner space `E` of a Bochner space, or the
/// normed space of a Dirac representation.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum VectorNorm {
    Euclidean,
    /// `ℓ_p^d` with counting measure.
    Lp {
        #[serde(with = "crate::space::exponent")]
        p: f64,
    },
    /// A function space norm with coordinates as atoms.
    Space { space: SpaceDescriptor, measure: DiscreteMeasure },
    #[serde(skip)]
    Custom { name: String, f: NormFn },
}

impl VectorNorm {
    pub fn custom(name: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom { name: name.into(), f: Arc::new(f) }
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        match self {
            Self::Euclidean => Ok(lp_norm(&vec![1.0; x.len()], x, 2.0)),
            Self::Lp { p } => {
                SpaceDescriptor::lp(*p).validate()?;
                Ok(lp_norm(&vec![1.0; x.len()], x, *p))
            }
            Self::Space { space, measure } => space.norm(measure, x),
            Self::Custom { name, f } => {
                let v = f(x);
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    Err(Error::Unsupported(format!("custom norm `{name}` returned {v}")))
                }
            }
        }
    }

    /// True when the norm is exactly `‖x‖_2` with unit weights.
    pub fn is_euclidean(&self) -> bool {
        match self {
            Self::Euclidean => true,
            Self::Lp { p } => *p == 2.0,
            Self::Space { space, measure } => {
                space.as_lp() == Some(2.0) && measure.weights().iter().all(|w| *w == 1.0)
            }
            Self::Custom { .. } => false,
        }
    }

    /// `Some(p)` when the norm is `ℓ_p` with unit weights.
    pub fn as_lp(&self) -> Option<f64> {
        match self {
            Self::Euclidean => Some(2.0),
            Self::Lp { p } => Some(*p),
            Self::Space { space, measure } if measure.weights().iter().all(|w| *w == 1.0) => space.as_lp(),
            _ => None,
        }
    }
}

impl fmt::Debug for VectorNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Euclidean => write!(f, "Euclidean"),
            Self::Lp { p } => write!(f, "Lp({p})"),
            Self::Space { space, measure } => write!(f, "Space({space}, {} atoms)", measure.len()),
            Self::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl PartialEq for VectorNorm {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Euclidean, Self::Euclidean) => true,
            (Self::Lp { p: a }, Self::Lp { p: b }) => a == b,
            (Self::Space { space: a, measure: m }, Self::Space { space: b, measure: n }) => a == b && m == n,
            (Self::Custom { f: a, .. }, Self::Custom { f: b, .. }) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepresentationKind {
    A,
    B,
    C,
    D,
    E,
}

#[derive(Debug, Clone, PartialEq)]
enum RepMap {
    Grid { functionals: Vec<Vec<f64>>, defect: f64 },
    Norm { norm: VectorNorm, dim: usize },
    Identity,
    Blocks { inner: VectorNorm, block_dim: usize },
}

/// A positively homogeneous map `φ: ℝ^d → X(μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    kind: RepresentationKind,
    space: SpaceDescriptor,
    measure: Arc<DiscreteMeasure>,
    map: RepMap,
}

/// Serializable parameters of a [`Representation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RepresentationSpec {
    A { functionals: Vec<Vec<f64>>, defect: f64 },
    B { norm: VectorNorm, dim: usize },
    C { space: SpaceDescriptor, measure: DiscreteMeasure },
    D { r: f64, measure: DiscreteMeasure, inner: VectorNorm, block_dim: usize },
    E { space: SpaceDescriptor, measure: DiscreteMeasure, inner: VectorNorm, block_dim: usize },
}

pub fn make_representation(spec: RepresentationSpec) -> Result<Representation> {
    match spec {
        RepresentationSpec::A { functionals, defect } => Representation::dual_grid(functionals, defect),
        RepresentationSpec::B { norm, dim } => Representation::dirac(norm, dim),
        RepresentationSpec::C { space, measure } => Representation::identity(space, measure),
        RepresentationSpec::D { r, measure, inner, block_dim } => Representation::bochner_lr(r, measure, inner, block_dim),
        RepresentationSpec::E { space, measure, inner, block_dim } => {
            Representation::bochner(space, measure, inner, block_dim)
        }
    }
}

impl Representation {
    /// Kind A: evaluation against a finite grid of dual-ball functionals.
    /// `defect` declares `sup_grid |x'(x)| ≥ (1 - defect)‖x‖_E`.
    pub fn dual_grid(functionals: Vec<Vec<f64>>, defect: f64) -> Result<Self> {
        let Some(first) = functionals.first() else {
            return Err(Error::Unsupported("kind A representation needs a nonempty dual grid".into()));
        };
        let dim = first.len();
        if let Some(bad) = functionals.iter().find(|f| f.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
        }
        if !(0.0..1.0).contains(&defect) {
            return Err(Error::Unsupported(format!("grid defect {defect} must lie in [0, 1)")));
        }
        let measure = Arc::new(DiscreteMeasure::counting(functionals.len()));
        Ok(Self {
            kind: RepresentationKind::A,
            space: SpaceDescriptor::lp(f64::INFINITY),
            measure,
            map: RepMap::Grid { functionals, defect },
        })
    }

    /// Kind B: `x ↦ ‖x‖ · 1` on a single atom of mass 1.
    pub fn dirac(norm: VectorNorm, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let rep = Self {
            kind: RepresentationKind::B,
            space: SpaceDescriptor::lp(1.0),
            measure: Arc::new(DiscreteMeasure::counting(1)),
            map: RepMap::Norm { norm, dim },
        };
        rep.check_homogeneous()?;
        Ok(rep)
    }

    /// Kind C: the identity on `X(μ)`.
    pub fn identity(space: SpaceDescriptor, measure: DiscreteMeasure) -> Result<Self> {
        space.validate()?;
        Ok(Self {
            kind: RepresentationKind::C,
            space,
            measure: Arc::new(measure),
            map: RepMap::Identity,
        })
    }

    /// Kind E: per-atom inner norms of `x ∈ X(μ, E)`, stored atom-major
    /// (`block_dim` consecutive coordinates per atom).
    pub fn bochner(space: SpaceDescriptor, measure: DiscreteMeasure, inner: VectorNorm, block_dim: usize) -> Result<Self> {
        Self::blocks(RepresentationKind::E, space, measure, inner, block_dim)
    }

    /// Kind D: kind E over `L_r(μ)`.
    pub fn bochner_lr(r: f64, measure: DiscreteMeasure, inner: VectorNorm, block_dim: usize) -> Result<Self> {
        Self::blocks(RepresentationKind::D, SpaceDescriptor::lp(r), measure, inner, block_dim)
    }

    fn blocks(
        kind: RepresentationKind,
        space: SpaceDescriptor,
        measure: DiscreteMeasure,
        inner: VectorNorm,
        block_dim: usize,
    ) -> Result<Self> {
        space.validate()?;
        if block_dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let rep = Self {
            kind,
            space,
            measure: Arc::new(measure),
            map: RepMap::Blocks { inner, block_dim },
        };
        rep.check_homogeneous()?;
        Ok(rep)
    }

    pub fn kind(&self) -> RepresentationKind {
        self.kind
    }

    /// The function space `X` the representation lands in.
    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn measure(&self) -> &Arc<DiscreteMeasure> {
        &self.measure
    }

    pub fn input_dim(&self) -> usize {
        match &self.map {
            RepMap::Grid { functionals, .. } => functionals[0].len(),
            RepMap::Norm { dim, .. } => *dim,
            RepMap::Identity => self.measure.len(),
            RepMap::Blocks { block_dim, .. } => block_dim * self.measure.len(),
        }
    }

    /// Dimension of each atom's block (1 unless kind D/E).
    pub fn block_dim(&self) -> usize {
        match &self.map {
            RepMap::Blocks { block_dim, .. } => *block_dim,
            _ => 1,
        }
    }

    /// Inner norm of kinds B, D and E.
    pub fn inner_norm(&self) -> Option<&VectorNorm> {
        match &self.map {
            RepMap::Norm { norm, .. } | RepMap::Blocks { inner: norm, .. } => Some(norm),
            _ => None,
        }
    }

    /// Declared relative underestimate of a kind-A grid (0 otherwise).
    pub fn defect(&self) -> f64 {
        match &self.map {
            RepMap::Grid { defect, .. } => *defect,
            _ => 0.0,
        }
    }

    /// True when `|φ(x)|²` is a quadratic form in `x`, i.e. the inner norm
    /// is Euclidean or there is none.
    pub fn is_quadratic(&self) -> bool {
        match &self.map {
            RepMap::Identity => true,
            RepMap::Norm { norm, .. } | RepMap::Blocks { inner: norm, .. } => norm.is_euclidean(),
            RepMap::Grid { .. } => false,
        }
    }

    /// `φ(x)` as values on the representing measure.
    pub fn represent(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), got: x.len() });
        }
        match &self.map {
            RepMap::Grid { functionals, .. } => {
                Ok(functionals.iter().map(|f| f.iter().zip(x).map(|(a, b)| a * b).sum()).collect())
            }
            RepMap::Norm { norm, .. } => Ok(vec![norm.norm(x)?]),
            RepMap::Identity => Ok(x.to_vec()),
            RepMap::Blocks { inner, block_dim } => x.chunks(*block_dim).map(|b| inner.norm(b)).collect(),
        }
    }

    /// `|φ(x)|` on the representing measure.
    pub fn represent_abs(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut v = self.represent(x)?;
        v.iter_mut().for_each(|a| *a = a.abs());
        Ok(v)
    }

    /// `‖φ(x)‖_X`.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        let v = self.represent(x)?;
        self.space.eval(&self.measure, &v)
    }

    /// The Bochner space when this is a kind D/E representation.
    pub fn bochner_space(&self) -> Option<VectorValuedSpace> {
        match &self.map {
            RepMap::Blocks { inner, block_dim } => Some(VectorValuedSpace {
                outer: self.space.clone(),
                measure: self.measure.clone(),
                inner: inner.clone(),
                block_dim: *block_dim,
            }),
            _ => None,
        }
    }

    pub fn to_spec(&self) -> Result<RepresentationSpec> {
        if let Some(VectorNorm::Custom { name, .. }) = self.inner_norm() {
            return Err(Error::Serialization(format!("custom norm `{name}` has no JSON form")));
        }
        Ok(match &self.map {
            RepMap::Grid { functionals, defect } => {
                RepresentationSpec::A { functionals: functionals.clone(), defect: *defect }
            }
            RepMap::Norm { norm, dim } => RepresentationSpec::B { norm: norm.clone(), dim: *dim },
            RepMap::Identity => RepresentationSpec::C { space: self.space.clone(), measure: (*self.measure).clone() },
            RepMap::Blocks { inner, block_dim } => match (self.kind, &self.space) {
                (RepresentationKind::D, SpaceDescriptor::Lp { p }) => RepresentationSpec::D {
                    r: *p,
                    measure: (*self.measure).clone(),
                    inner: inner.clone(),
                    block_dim: *block_dim,
                },
                _ => RepresentationSpec::E {
                    space: self.space.clone(),
                    measure: (*self.measure).clone(),
                    inner: inner.clone(),
                    block_dim: *block_dim,
                },
            },
        })
    }

    /// Spot-checks `φ(λx) = λφ(x)` on fixed pseudo-random inputs.
    fn check_homogeneous(&self) -> Result<()> {
        let n = self.input_dim();
        for k in 0..8u32 {
            let x: Vec<f64> = (0..n).map(|i| (f64::from(k * 7 + 3) * (i as f64 + 1.3)).sin()).collect();
            let base = self.represent(&x)?;
            for lambda in [0.5, 3.0] {
                let scaled: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                let image = self.represent(&scaled)?;
                let defect = image
                    .iter()
                    .zip(&base)
                    .map(|(a, b)| (a - lambda * b).abs() / (1.0 + (lambda * b).abs()))
                    .fold(0.0, f64::max);
                if defect > 1e-9 {
                    return Err(Error::NotHomogeneous { lambda, defect });
                }
            }
        }
        Ok(())
    }
}

/// `X(μ, E)`: functions `Ω → E` normed by `‖ ‖x(·)‖_E ‖_X`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorValuedSpace {
    pub outer: SpaceDescriptor,
    pub measure: Arc<DiscreteMeasure>,
    pub inner: VectorNorm,
    pub block_dim: usize,
}

impl VectorValuedSpace {
    pub fn new(outer: SpaceDescriptor, measure: DiscreteMeasure, inner: VectorNorm, block_dim: usize) -> Self {
        Self { outer, measure: Arc::new(measure), inner, block_dim }
    }

    pub fn dim(&self) -> usize {
        self.block_dim * self.measure.len()
    }

    pub fn pointwise_norms(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        x.chunks(self.block_dim).map(|b| self.inner.norm(b)).collect()
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        let inner = self.pointwise_norms(x)?;
        self.outer.norm(&self.measure, &inner)
    }

    pub fn representation(&self) -> Result<Representation> {
        Representation::bochner(self.outer.clone(), (*self.measure).clone(), self.inner.clone(), self.block_dim)
    }
}

/// Linear map between Bochner spaces, atom-major on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockOperatorRepr", into = "BlockOperatorRepr")]
pub struct BlockOperator {
    /// `(atoms of μ, dim E)`.
    pub in_shape: (usize, usize),
    /// `(atoms of ν, dim F)`.
    pub out_shape: (usize, usize),
    pub matrix: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockOperatorRepr {
    /// `[[ν atoms, dim F], [μ atoms, dim E]]`.
    shape: [[usize; 2]; 2],
    rows: Vec<Vec<f64>>,
}

impl TryFrom<BlockOperatorRepr> for BlockOperator {
    type Error = Error;

    fn try_from(r: BlockOperatorRepr) -> Result<Self> {
        let [[nu, f], [mu, e]] = r.shape;
        Self::new(&r.rows, (mu, e), (nu, f))
    }
}

impl From<BlockOperator> for BlockOperatorRepr {
    fn from(b: BlockOperator) -> Self {
        let rows = (0..b.matrix.nrows()).map(|i| b.matrix.row(i).iter().copied().collect()).collect();
        Self { shape: [[b.out_shape.0, b.out_shape.1], [b.in_shape.0, b.in_shape.1]], rows }
    }
}

impl BlockOperator {
    pub fn new(rows: &[Vec<f64>], in_shape: (usize, usize), out_shape: (usize, usize)) -> Result<Self> {
        let m = out_shape.0 * out_shape.1;
        let n = in_shape.0 * in_shape.1;
        if rows.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: rows.len() });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        let matrix = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
        Ok(Self { in_shape, out_shape, matrix })
    }

    /// Block-diagonal operator `x_i ↦ d_i x_i` with scalar blocks.
    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self { in_shape: (n, 1), out_shape: (n, 1), matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)) }
    }
}

/// Operator data `(φx = ‖x‖_E(·), ψ(Tx) = ‖Tx‖_F(·))` for a block operator
/// `T: X(μ, E) → Y(ν, F)`.
pub fn lift_vector_valued(t: &BlockOperator, domain: &VectorValuedSpace, codomain: &VectorValuedSpace) -> Result<OperatorSpec> {
    let shape_in = (domain.measure.len(), domain.block_dim);
    let shape_out = (codomain.measure.len(), codomain.block_dim);
    if t.in_shape != shape_in {
        return Err(Error::DimensionMismatch { expected: shape_in.0 * shape_in.1, got: t.in_shape.0 * t.in_shape.1 });
    }
    if t.out_shape != shape_out {
        return Err(Error::DimensionMismatch { expected: shape_out.0 * shape_out.1, got: t.out_shape.0 * t.out_shape.1 });
    }
    OperatorSpec::from_matrix(t.matrix.clone(), domain.representation()?, codomain.representation()?)
}

/// Largest ratio `‖(Σ|ψ(Tx_k)|^r)^{1/r}‖_Y / ‖(Σ|φ(x_k)|^r)^{1/r}‖_X` over
/// the given tuples; tuples with a vanishing right-hand side are skipped
/// unless their left-hand side is positive, which yields `+∞`.
pub fn check_vv_inequality(op: &OperatorSpec, r: f64, tuples: &[Vec<Vec<f64>>]) -> Result<f64> {
    let mut worst = 0.0f64;
    for tuple in tuples {
        let (lhs, rhs) = vv_sides(op, r, tuple)?;
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        worst = worst.max(ratio);
    }
    Ok(worst)
}

/// Both sides of the vector-valued inequality for one tuple.
pub fn vv_sides(op: &OperatorSpec, r: f64, tuple: &[Vec<f64>]) -> Result<(f64, f64)> {
    let dom = op.domain();
    let cod = op.codomain();
    let mut left = vec![0.0; cod.measure().len()];
    let mut right = vec![0.0; dom.measure().len()];
    for x in tuple {
        for (acc, v) in left.iter_mut().zip(op.psi(x)?) {
            *acc += crate::measure::pow_abs(v, r);
        }
        for (acc, v) in right.iter_mut().zip(dom.represent_abs(x)?) {
            *acc += crate::measure::pow_abs(v, r);
        }
    }
    let root = |v: &mut Vec<f64>| v.iter_mut().for_each(|a| *a = a.powf(1.0 / r));
    root(&mut left);
    root(&mut right);
    Ok((cod.space().eval(cod.measure(), &left)?, dom.space().eval(dom.measure(), &right)?))
}

/// Unit functionals at `k` equally spaced angles on the half circle; their
/// sup underestimates the Euclidean norm by at most `1 - cos(π/2k)`.
pub fn circle_dual_grid(k: usize) -> Result<Representation> {
    let functionals = (0..k)
        .map(|i| {
            let a = std::f64::consts::PI * i as f64 / k as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let defect = 1.0 - (std::f64::consts::PI / (2.0 * k as f64)).cos();
    Representation::dual_grid(functionals, defect)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_b_is_constant_norm() {
        let rep = make_representation(RepresentationSpec::B { norm: VectorNorm::Euclidean, dim: 2 }).unwrap();
        assert_eq!(rep.represent(&[3.0, 4.0]).unwrap(), vec![5.0]);
        assert_eq!(rep.kind(), RepresentationKind::B);
    }

    #[test]
    fn kind_e_hand_example() {
        let space = VectorValuedSpace::new(
            SpaceDescriptor::lp(2.0),
            DiscreteMeasure::counting(2),
            VectorNorm::Lp { p: f64::INFINITY },
            2,
        );
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(space.pointwise_norms(&x).unwrap(), vec![2.0, 4.0]);
        assert!((space.norm(&x).unwrap() - 20f64.sqrt()).abs() < 1e-15);
        assert_eq!(space.representation().unwrap().norm(&x).unwrap(), space.norm(&x).unwrap());
    }

    #[test]
    fn kind_c_is_identity() {
        let rep = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(3)).unwrap();
        assert_eq!(rep.represent(&[-1.0, 2.0, 0.5]).unwrap(), vec![-1.0, 2.0, 0.5]);
    }

    #[test]
    fn kind_d_is_e_over_lr() {
        let d = Representation::bochner_lr(3.0, DiscreteMeasure::counting(2), VectorNorm::Euclidean, 2).unwrap();
        let e = Representation::bochner(SpaceDescriptor::lp(3.0), DiscreteMeasure::counting(2), VectorNorm::Euclidean, 2)
            .unwrap();
        let x = [0.3, -1.0, 2.0, 0.1];
        assert_eq!(d.norm(&x).unwrap(), e.norm(&x).unwrap());
        assert_eq!(d.kind(), RepresentationKind::D);
    }

    #[test]
    fn kind_a_rejects_empty_grid_and_respects_defect() {
        assert!(Representation::dual_grid(vec![], 0.0).is_err());
        let grid = circle_dual_grid(16).unwrap();
        for k in 0..50 {
            let a = k as f64 * 0.37;
            let x = [a.cos() * 2.0, a.sin() * 2.0];
            let sup = grid.norm(&x).unwrap();
            assert!(sup <= 2.0 + 1e-12 && sup >= 2.0 * (1.0 - grid.defect()) - 1e-12);
        }
    }

    #[test]
    fn non_homogeneous_custom_norm_is_rejected() {
        let bad = VectorNorm::custom("squared", |x: &[f64]| x.iter().map(|v| v * v).sum());
        assert!(matches!(Representation::dirac(bad, 2), Err(Error::NotHomogeneous { .. })));
    }

    #[test]
    fn block_operator_json_has_shape_header() {
        let b = BlockOperator::new(&[vec![1.0, 0.0], vec![0.0, 2.0]], (1, 2), (2, 1)).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, r#"{"shape":[[2,1],[1,2]],"rows":[[1.0,0.0],[0.0,2.0]]}"#);
        assert_eq!(serde_json::from_str::<BlockOperator>(&text).unwrap(), b);
        assert!(serde_json::from_str::<BlockOperator>(r#"{"shape":[[3,1],[1,2]],"rows":[[1,0],[0,2]]}"#).is_err());
    }

    #[test]
    fn spec_roundtrip() {
        let spec = RepresentationSpec::E {
            space: SpaceDescriptor::lorentz(3.0, 2.0),
            measure: DiscreteMeasure::counting(2),
            inner: VectorNorm::Lp { p: f64::INFINITY },
            block_dim: 3,
        };
        let rep = make_representation(spec.clone()).unwrap();
        assert_eq!(rep.to_spec().unwrap(), spec);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<RepresentationSpec>(&text).unwrap(), spec);
    }
}
