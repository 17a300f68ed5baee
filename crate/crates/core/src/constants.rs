//! Convexity and concavity ratios, and lower-bound estimators for the best
//! constants `M^(r)`, `M_(r)` of spaces and operators.
//!
//! Space ratios depend only on `|x_k|`, so the space estimators search over
//! nonnegative tuples; operator estimators search over signed inputs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::duality::BoundStatus;
use crate::error::{Error, Result};
use crate::measure::{pow_abs, DiscreteMeasure};
use crate::operator::OperatorSpec;
use crate::search::{coordinate_ascent, par_starts, signed_uniform, sparse_nonneg, start_rng, AscentOptions, SearchBudget};
use crate::space::SpaceDescriptor;

/// Relative tolerance within which an estimate is reported as exact.
pub const EXACT_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    Convexity,
    Concavity,
}

/// A finite tuple `x_1, …, x_n` on a common measure, tested at exponent `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleWitness {
    pub vectors: Vec<Vec<f64>>,
    pub r: f64,
    pub measure: Arc<DiscreteMeasure>,
}

impl TupleWitness {
    pub fn new(vectors: Vec<Vec<f64>>, r: f64, measure: Arc<DiscreteMeasure>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::ZeroTuple);
        }
        for v in &vectors {
            measure.check_len(v)?;
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidExponent { value: r, reason: "tuple exponent must be in (0, ∞)" });
        }
        Ok(Self { vectors, r, measure })
    }
}

/// `(Σ |x_k|^r)^{1/r}` pointwise.
fn r_sum(vectors: &[Vec<f64>], r: f64, n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    for v in vectors {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += pow_abs(*x, r);
        }
    }
    acc.iter().map(|a| a.powf(1.0 / r)).collect()
}

fn sides(space: &SpaceDescriptor, tuple: &TupleWitness) -> Result<(f64, f64)> {
    let mu = &tuple.measure;
    let pointwise = space.eval(mu, &r_sum(&tuple.vectors, tuple.r, mu.len()))?;
    let mut sum = 0.0;
    for v in &tuple.vectors {
        sum += pow_abs(space.eval(mu, v)?, tuple.r);
    }
    Ok((pointwise, sum.powf(1.0 / tuple.r)))
}

/// `‖(Σ|x_k|^r)^{1/r}‖_X / (Σ‖x_k‖_X^r)^{1/r}`.
pub fn convexity_ratio(space: &SpaceDescriptor, tuple: &TupleWitness) -> Result<f64> {
    space.validate()?;
    let (pointwise, normwise) = sides(space, tuple)?;
    if normwise == 0.0 {
        return Err(Error::ZeroTuple);
    }
    Ok(pointwise / normwise)
}

/// `(Σ‖x_k‖_X^r)^{1/r} / ‖(Σ|x_k|^r)^{1/r}‖_X`.
pub fn concavity_ratio(space: &SpaceDescriptor, tuple: &TupleWitness) -> Result<f64> {
    space.validate()?;
    let (pointwise, normwise) = sides(space, tuple)?;
    if pointwise == 0.0 {
        return Err(Error::ZeroTuple);
    }
    Ok(normwise / pointwise)
}

pub fn ratio(space: &SpaceDescriptor, tuple: &TupleWitness, kind: ConstantKind) -> Result<f64> {
    match kind {
        ConstantKind::Convexity => convexity_ratio(space, tuple),
        ConstantKind::Concavity => concavity_ratio(space, tuple),
    }
}

/// `x_k ↦ |x_k|^t` with target exponent `r/t`; the ratio of the transported
/// tuple in `X^t` is the `t`-th power of the original ratio in `X`.
pub fn power_transport(tuple: &TupleWitness, t: f64) -> Result<TupleWitness> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidExponent { value: t, reason: "transport exponent must be in (0, ∞)" });
    }
    let vectors = tuple.vectors.iter().map(|v| v.iter().map(|x| pow_abs(*x, t)).collect()).collect();
    TupleWitness::new(vectors, tuple.r / t, tuple.measure.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    /// Ratio of the witness, recomputed after the search.
    pub value: f64,
    pub witness: TupleWitness,
    pub kind: ConstantKind,
    pub status: BoundStatus,
    /// Closed form, when one is registered for the space.
    pub registered: Option<f64>,
    /// Number of ratio evaluations spent.
    pub evaluations: usize,
}

fn estimate_status(value: f64, registered: Option<f64>) -> BoundStatus {
    match registered {
        Some(exact) if (value - exact).abs() <= EXACT_MATCH_TOL * exact.max(1.0) => BoundStatus::Exact,
        _ => BoundStatus::LowerBound,
    }
}

/// Structured nonnegative tuples of size `k` on `n` atoms: disjoint
/// coordinate tuples, repeated all-ones vectors, and staircases.
fn structured_tuples(k: usize, n: usize) -> Vec<Vec<Vec<f64>>> {
    let unit = |i: usize| {
        let mut e = vec![0.0; n];
        e[i % n] = 1.0;
        e
    };
    let mut out = vec![(0..k).map(unit).collect::<Vec<_>>(), vec![vec![1.0; n]; k]];
    out.push((0..k).map(|j| (0..n).map(|i| if i <= j * n / k.max(1) { 1.0 } else { 0.0 }).collect()).collect());
    out.push((0..k).map(|j| (0..n).map(|i| if (i + j) % 2 == 0 { 1.0 } else { 0.2 }).collect()).collect());
    out
}

fn flatten(t: &[Vec<f64>]) -> Vec<f64> {
    t.iter().flatten().copied().collect()
}

fn unflatten(x: &[f64], n: usize) -> Vec<Vec<f64>> {
    x.chunks(n).map(<[f64]>::to_vec).collect()
}

/// Multi-start search for the best constant of a space on `measure`.
///
/// The result is a lower bound; it is marked exact when it matches a
/// registered closed form. Larger budgets (more starts, more sweeps, more
/// tuple sizes) never decrease the estimate.
pub fn estimate_space_constant(
    space: &SpaceDescriptor,
    measure: &DiscreteMeasure,
    r: f64,
    kind: ConstantKind,
    budget: &SearchBudget,
) -> Result<ConstantEstimate> {
    space.validate()?;
    let measure = Arc::new(measure.clone());
    let n = measure.len();
    let registered = match kind {
        ConstantKind::Convexity => space.registered_convexity(r, n),
        ConstantKind::Concavity => space.registered_concavity(r, n),
    };
    let objective = |x: &[f64]| -> f64 {
        let t = TupleWitness { vectors: unflatten(x, n), r, measure: measure.clone() };
        ratio(space, &t, kind).unwrap_or(f64::NEG_INFINITY)
    };
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0; n]];
    if !budget.is_zero() {
        for &k in &budget.tuple_sizes {
            if k == 0 {
                continue;
            }
            starts.extend(structured_tuples(k, n).iter().map(|t| flatten(t)));
            for i in 0..budget.starts {
                let mut rng = start_rng(budget.seed, k as u64, i as u64);
                starts.push((0..k).flat_map(|_| sparse_nonneg(&mut rng, n)).collect());
            }
        }
    }
    let opts = AscentOptions { sweeps: budget.refine_iters, ..Default::default() };
    let results = par_starts(starts.len(), |i| coordinate_ascent(starts[i].clone(), objective, opts));
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (x, v) in results {
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((x, v));
        }
    }
    let (x, _) = best.expect("at least one start");
    let witness = TupleWitness::new(unflatten(&x, n), r, measure.clone())?;
    let value = ratio(space, &witness, kind)?;
    Ok(ConstantEstimate {
        value,
        status: estimate_status(value, registered),
        witness,
        kind,
        registered,
        evaluations: starts.len() * (1 + budget.refine_iters * x.len() * 5),
    })
}

/// Best-constant estimate for an operator, with its signed witness inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorConstantEstimate {
    pub value: f64,
    pub inputs: Vec<Vec<f64>>,
    pub r: f64,
    pub kind: ConstantKind,
    pub status: BoundStatus,
    pub evaluations: usize,
}

/// Convexity: `‖(Σ|ψ(Tx_k)|^r)^{1/r}‖_Y / (Σ‖φ(x_k)‖_X^r)^{1/r}`;
/// concavity: `(Σ‖ψ(Tx_k)‖_Y^r)^{1/r} / ‖(Σ|φ(x_k)|^r)^{1/r}‖_X`.
pub fn operator_ratio(op: &OperatorSpec, inputs: &[Vec<f64>], r: f64, kind: ConstantKind) -> Result<f64> {
    if inputs.is_empty() {
        return Err(Error::ZeroTuple);
    }
    let dom = op.domain();
    let cod = op.codomain();
    let images: Vec<Vec<f64>> = inputs.iter().map(|x| op.psi(x)).collect::<Result<_>>()?;
    let reps: Vec<Vec<f64>> = inputs.iter().map(|x| op.phi(x)).collect::<Result<_>>()?;
    let (num, den) = match kind {
        ConstantKind::Convexity => {
            let lhs = cod.space().eval(cod.measure(), &r_sum(&images, r, cod.measure().len()))?;
            let mut s = 0.0;
            for v in &reps {
                s += pow_abs(dom.space().eval(dom.measure(), v)?, r);
            }
            (lhs, s.powf(1.0 / r))
        }
        ConstantKind::Concavity => {
            let mut s = 0.0;
            for v in &images {
                s += pow_abs(cod.space().eval(cod.measure(), v)?, r);
            }
            let rhs = dom.space().eval(dom.measure(), &r_sum(&reps, r, dom.measure().len()))?;
            (s.powf(1.0 / r), rhs)
        }
    };
    if den == 0.0 {
        return if num == 0.0 { Ok(0.0) } else { Ok(f64::INFINITY) };
    }
    Ok(num / den)
}

pub fn estimate_operator_constant(
    op: &OperatorSpec,
    r: f64,
    kind: ConstantKind,
    budget: &SearchBudget,
) -> Result<OperatorConstantEstimate> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidExponent { value: r, reason: "r must be in (0, ∞)" });
    }
    let n = op.input_dim();
    let objective = |x: &[f64]| -> f64 {
        if x.iter().all(|v| *v == 0.0) {
            return f64::NEG_INFINITY;
        }
        match operator_ratio(op, &unflatten(x, n), r, kind) {
            Ok(v) if v.is_finite() => v,
            _ => f64::NEG_INFINITY,
        }
    };
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0; n]];
    if !budget.is_zero() {
        for &k in &budget.tuple_sizes {
            if k == 0 {
                continue;
            }
            starts.push(flatten(&(0..k).map(|j| {
                let mut e = vec![0.0; n];
                e[j % n] = 1.0;
                e
            }).collect::<Vec<_>>()));
            for i in 0..budget.starts {
                let mut rng = start_rng(budget.seed, 0x6f70 + k as u64, i as u64);
                starts.push((0..k).flat_map(|_| signed_uniform(&mut rng, n)).collect());
            }
        }
    }
    let opts = AscentOptions { sweeps: budget.refine_iters, signed: true, ..Default::default() };
    let results = par_starts(starts.len(), |i| coordinate_ascent(starts[i].clone(), objective, opts));
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (x, v) in results {
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((x, v));
        }
    }
    let (x, _) = best.expect("at least one start");
    let inputs = unflatten(&x, n);
    let value = operator_ratio(op, &inputs, r, kind)?.max(0.0);
    Ok(OperatorConstantEstimate {
        value: if value.is_finite() { value } else { 0.0 },
        inputs,
        r,
        kind,
        status: BoundStatus::LowerBound,
        evaluations: starts.len() * (1 + budget.refine_iters * x.len() * 5),
    })
}
