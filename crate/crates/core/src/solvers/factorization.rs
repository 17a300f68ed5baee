//! Factorizations through multiplication operators built from weight
//! certificates: `T = M_g ∘ R` on the codomain side and `T = R ∘ M_f` on the
//! domain side.

use nalgebra::DMatrix;

use super::certificate::{DomainWeightCertificate, FactorSide, FactorizationResult, WeightCertificate};
use super::config::SolverConfig;
use super::inner::{domination_ratio, lattice_dual_sup, multiplication_norm, Numerator};
use crate::error::{Error, Result};
use crate::operator::{OperatorMap, OperatorSpec};
use crate::search::{signed_uniform, start_rng};
use crate::vectorvalued::{Representation, RepresentationKind};

const STREAM_SAMPLES: u64 = 0x6661_6374;

/// The matrix of a linear operator; callbacks are evaluated on the basis.
pub fn operator_matrix(op: &OperatorSpec) -> Result<DMatrix<f64>> {
    match op.map() {
        OperatorMap::Matrix(m) => Ok(m.clone()),
        OperatorMap::Callback { f, linear: true } => {
            let n = op.input_dim();
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|j| {
                    let mut e = vec![0.0; n];
                    e[j] = 1.0;
                    f(&e)
                })
                .collect();
            Ok(DMatrix::from_fn(op.output_dim(), n, |i, j| cols[j][i]))
        }
        OperatorMap::Callback { linear: false, .. } => Err(Error::NonLinear),
    }
}

/// Atom index of each coordinate of a representation's input.
fn coordinate_atoms(rep: &Representation) -> Result<Vec<usize>> {
    let n = rep.input_dim();
    match rep.kind() {
        RepresentationKind::B => Ok(vec![0; n]),
        RepresentationKind::C => Ok((0..n).collect()),
        RepresentationKind::D | RepresentationKind::E => Ok((0..n).map(|k| k / rep.block_dim()).collect()),
        RepresentationKind::A => Err(Error::Unsupported("multiplication operators need a lattice representation, not a dual grid".into())),
    }
}

fn samples(n: usize, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    out.extend((0..count).map(|i| signed_uniform(&mut start_rng(seed, STREAM_SAMPLES, i as u64), n)));
    out
}

fn max_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// `g = ω₂^{1/r}` and `R x = T x / g` (zero where `g = 0`).
pub fn build_factorization_range(cert: &WeightCertificate, op: &OperatorSpec) -> Result<FactorizationResult> {
    let r = cert.r;
    if r < 1.0 {
        return Err(Error::InvalidExponent { value: r, reason: "factorizations need r ≥ 1" });
    }
    let t = operator_matrix(op)?;
    let cod = op.codomain();
    let atoms = coordinate_atoms(cod)?;
    let g: Vec<f64> = cert.omega2.iter().map(|w| w.powf(1.0 / r)).collect();
    let mut rm = t.clone();
    for k in 0..t.nrows() {
        let gi = g[atoms[k]];
        if gi > 0.0 {
            rm.row_mut(k).scale_mut(1.0 / gi);
        } else {
            let defect = t.row(k).amax();
            if defect > 0.0 {
                return Err(Error::IllPosed { atom: atoms[k], defect });
            }
        }
    }
    let cfg = SolverConfig::default().with_seed(cert.metadata.seed);
    let budget = cfg.budget();
    let mut residual = 0.0f64;
    for x in samples(op.input_dim(), cfg.seed, 32) {
        let tx = op.apply(&x);
        let rx = &rm * nalgebra::DVector::from_column_slice(&x);
        let composed: Vec<f64> = (0..rx.len()).map(|k| g[atoms[k]] * rx[k]).collect();
        residual = residual.max(max_distance(&tx, &composed));
    }
    let r_op = OperatorSpec::from_matrix(rm.clone(), op.domain().clone(), cod.clone())?;
    let nu = cod.measure().weights();
    let (r_norm, dnorm_factor) = match &cert.omega1 {
        None => (domination_ratio(&r_op, r, Numerator::Weighted(nu), &[1.0], &budget, STREAM_SAMPLES, &[])?.value, 1.0),
        Some(w) => {
            let d: Vec<f64> = op.domain().measure().weights().iter().zip(w).map(|(m, w)| m * w).collect();
            let rho = domination_ratio(&r_op, r, Numerator::Weighted(nu), &d, &budget, STREAM_SAMPLES, &[])?.value;
            let dom = op.domain();
            let beta = lattice_dual_sup(dom.space(), dom.measure(), w, r, &budget, STREAM_SAMPLES)?.value;
            (rho, beta)
        }
    };
    let r_norm = (r_norm * dnorm_factor).powf(1.0 / r);
    let (m_norm, _) = multiplication_norm(cod.space(), cod.measure(), &g, r, &budget, STREAM_SAMPLES)?;
    Ok(FactorizationResult {
        side: FactorSide::Range,
        r,
        multiplier: g,
        r_matrix: rows_of(&rm),
        multiplier_norm: m_norm,
        r_norm,
        norm_product: m_norm * r_norm,
        declared_bound: cert.multiplication_bound() * cert.domain_bound(),
        composition_residual: residual,
    })
}

/// `f = ω₁^{1/r}` and `R(f x) = T x`, extended by zero on `[f = 0]`.
///
/// Fails with [`Error::IllPosed`] when `T` moves a coordinate on which `f`
/// vanishes.
pub fn build_factorization_domain(cert: &DomainWeightCertificate, op: &OperatorSpec) -> Result<FactorizationResult> {
    let r = cert.r;
    if r < 1.0 {
        return Err(Error::InvalidExponent { value: r, reason: "factorizations need r ≥ 1" });
    }
    let t = operator_matrix(op)?;
    let dom = op.domain();
    let atoms = coordinate_atoms(dom)?;
    let f: Vec<f64> = cert.omega1.iter().map(|w| w.powf(1.0 / r)).collect();
    let mut rm = t.clone();
    for j in 0..t.ncols() {
        let fj = f[atoms[j]];
        if fj > 0.0 {
            rm.column_mut(j).scale_mut(1.0 / fj);
        } else {
            let defect = t.column(j).amax();
            if defect > 0.0 {
                return Err(Error::IllPosed { atom: atoms[j], defect });
            }
        }
    }
    let cfg = SolverConfig::default().with_seed(cert.metadata.seed);
    let budget = cfg.budget();
    let mut residual = 0.0f64;
    for x in samples(op.input_dim(), cfg.seed, 32) {
        let fx: Vec<f64> = x.iter().enumerate().map(|(j, v)| f[atoms[j]] * v).collect();
        let composed = &rm * nalgebra::DVector::from_column_slice(&fx);
        residual = residual.max(max_distance(&op.apply(&x), composed.as_slice()));
    }
    let d: Vec<f64> = dom.measure().weights().iter().zip(&cert.omega1).map(|(m, w)| m * w).collect();
    let rho = domination_ratio(op, r, Numerator::Norm, &d, &budget, STREAM_SAMPLES, &[])?.value;
    let beta = lattice_dual_sup(dom.space(), dom.measure(), &cert.omega1, r, &budget, STREAM_SAMPLES)?.value;
    let r_norm = rho.powf(1.0 / r);
    let m_norm = beta.powf(1.0 / r);
    Ok(FactorizationResult {
        side: FactorSide::Domain,
        r,
        multiplier: f,
        r_matrix: rows_of(&rm),
        multiplier_norm: m_norm,
        r_norm,
        norm_product: m_norm * r_norm,
        declared_bound: cert.constant,
        composition_residual: residual,
    })
}
