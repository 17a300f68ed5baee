//! Adversarial inner problems shared by the weight solvers and the verifier.

use std::ops::Range;

use nalgebra::DMatrix;

use crate::duality::max_linear_ratio;
use crate::error::Result;
use crate::linalg::generalized_top;
use crate::measure::{pow_abs, DiscreteMeasure};
use crate::operator::OperatorSpec;
use crate::search::{coordinate_ascent, par_starts, signed_uniform, sparse_nonneg, start_rng, AscentOptions, SearchBudget};
use crate::space::{lp_norm, power_space, SpaceDescriptor};
use crate::vectorvalued::{Representation, RepresentationKind, VectorNorm};

/// The numerator of a domination ratio.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Numerator<'a> {
    /// `Σ_i c_i |ψ(Tx)_i|^r`.
    Weighted(&'a [f64]),
    /// `‖ψ(Tx)‖_Y^r`.
    Norm,
}

#[derive(Debug, Clone)]
pub(crate) struct Separation {
    pub value: f64,
    pub witness: Vec<f64>,
    pub exact: bool,
}

/// Coordinate blocks of the atoms of a representation whose `|φ(x)|²` is a
/// sum of squares of coordinates.
fn atom_blocks(rep: &Representation) -> Option<Vec<Range<usize>>> {
    if !rep.is_quadratic() {
        return None;
    }
    let n = rep.input_dim();
    match rep.kind() {
        RepresentationKind::B => Some(std::iter::once(0..n).collect()),
        RepresentationKind::C => Some((0..n).map(|i| i..i + 1).collect()),
        RepresentationKind::D | RepresentationKind::E => {
            let b = rep.block_dim();
            Some((0..rep.measure().len()).map(|i| i * b..(i + 1) * b).collect())
        }
        RepresentationKind::A => None,
    }
}

/// Rewrites `‖ψ‖_Y^r` as a weighted sum when `Y = L_r(ν)` or `ν` is a
/// single atom of an `L_p` space.
fn normalize_numerator(op: &OperatorSpec, r: f64) -> Option<Vec<f64>> {
    let cod = op.codomain();
    let p = cod.space().as_lp()?;
    let nu = cod.measure().weights();
    if p == r {
        Some(nu.to_vec())
    } else if nu.len() == 1 {
        Some(vec![if p.is_infinite() { 1.0 } else { nu[0].powf(r / p) }])
    } else {
        None
    }
}

fn numerator_value(op: &OperatorSpec, r: f64, num: Numerator<'_>, x: &[f64]) -> f64 {
    let Ok(psi) = op.psi(x) else { return f64::NAN };
    match num {
        Numerator::Weighted(c) => c.iter().zip(&psi).map(|(c, v)| if *v == 0.0 { 0.0 } else { c * pow_abs(*v, r) }).sum(),
        Numerator::Norm => {
            let cod = op.codomain();
            cod.space().eval(cod.measure(), &psi).map(|v| pow_abs(v, r)).unwrap_or(f64::NAN)
        }
    }
}

fn denominator_value(op: &OperatorSpec, r: f64, d: &[f64], x: &[f64]) -> f64 {
    match op.phi(x) {
        Ok(phi) => d.iter().zip(&phi).map(|(d, v)| d * pow_abs(*v, r)).sum(),
        Err(_) => f64::NAN,
    }
}

/// `num(x) / Σ_j d_j |φ(x)_j|^r`, with `+∞` when only the denominator
/// vanishes.
pub(crate) fn ratio_at(op: &OperatorSpec, r: f64, num: Numerator<'_>, d: &[f64], x: &[f64]) -> f64 {
    let n = numerator_value(op, r, num, x);
    let den = denominator_value(op, r, d, x);
    if den > 0.0 {
        n / den
    } else if n > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

fn quadratic_ratio(op: &OperatorSpec, c: &[f64], d: &[f64]) -> Option<Separation> {
    let t = op.matrix_ref()?;
    let out_blocks = atom_blocks(op.codomain())?;
    let in_blocks = atom_blocks(op.domain())?;
    let n = op.input_dim();
    let mut q = DMatrix::<f64>::zeros(n, n);
    for (ci, rows) in c.iter().zip(out_blocks) {
        if *ci == 0.0 {
            continue;
        }
        for k in rows {
            let row = t.row(k);
            q += row.transpose() * row * *ci;
        }
    }
    let mut diag = vec![0.0; n];
    for (dj, cols) in d.iter().zip(in_blocks) {
        for k in cols {
            diag[k] = *dj;
        }
    }
    let (value, witness) = generalized_top(&q, &diag);
    Some(Separation { value: value.max(0.0), witness, exact: true })
}

fn vertex_ratio(op: &OperatorSpec, r: f64, c: &[f64], d: &[f64]) -> Option<Separation> {
    let dom = op.domain();
    if dom.kind() != RepresentationKind::B || r < 1.0 || !op.is_linear() {
        return None;
    }
    let convex_codomain = match op.codomain().inner_norm() {
        None => true,
        Some(VectorNorm::Euclidean) => true,
        Some(norm) => norm.as_lp().is_some_and(|p| p >= 1.0),
    };
    if !convex_codomain {
        return None;
    }
    let n = op.input_dim();
    let vertices: Vec<Vec<f64>> = match dom.inner_norm()?.as_lp()? {
        p if p.is_infinite() && n <= 16 => (0..1usize << (n - 1))
            .map(|mask| (0..n).map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 }).collect())
            .collect(),
        1.0 => (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            })
            .collect(),
        _ => return None,
    };
    let mut best = Separation { value: f64::NEG_INFINITY, witness: vec![0.0; n], exact: true };
    for v in vertices {
        let value = ratio_at(op, r, Numerator::Weighted(c), d, &v);
        if value > best.value {
            best = Separation { value, witness: v, exact: true };
        }
    }
    Some(best)
}

/// `sup_x num(x) / Σ_j d_j |φ(x)_j|^r`: exact generalized eigenvalue for
/// quadratic data at `r = 2`, vertex enumeration for `ℓ_∞`/`ℓ_1` Dirac
/// domains, multi-start signed coordinate ascent otherwise.
pub(crate) fn domination_ratio(
    op: &OperatorSpec,
    r: f64,
    num: Numerator<'_>,
    d: &[f64],
    budget: &SearchBudget,
    stream: u64,
    hints: &[Vec<f64>],
) -> Result<Separation> {
    let normalized;
    let num = match num {
        Numerator::Norm => match normalize_numerator(op, r) {
            Some(c) => {
                normalized = c;
                Numerator::Weighted(&normalized)
            }
            None => Numerator::Norm,
        },
        w => w,
    };
    if let Numerator::Weighted(c) = num {
        if r == 2.0 {
            if let Some(sep) = quadratic_ratio(op, c, d) {
                return Ok(sep);
            }
        }
        if let Some(sep) = vertex_ratio(op, r, c, d) {
            return Ok(sep);
        }
    }
    let n = op.input_dim();
    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    starts.push(vec![1.0; n]);
    starts.extend(hints.iter().filter(|h| h.len() == n).cloned());
    starts.extend((0..budget.starts).map(|i| signed_uniform(&mut start_rng(budget.seed, stream, i as u64), n)));
    let objective = |x: &[f64]| ratio_at(op, r, num, d, x);
    let opts = AscentOptions { sweeps: budget.refine_iters.max(1), signed: true, ..Default::default() };
    let results = par_starts(starts.len(), |i| coordinate_ascent(starts[i].clone(), objective, opts));
    let mut best = Separation { value: f64::NEG_INFINITY, witness: vec![0.0; n], exact: false };
    for (x, v) in results {
        if v > best.value {
            best = Separation { value: v, witness: x, exact: false };
        }
    }
    best.value = best.value.max(0.0);
    Ok(best)
}

/// `sup { Σ μ_j w_j v_j^r : v ≥ 0, ‖v‖_X ≤ 1 }` with a maximizing `v` of
/// unit norm. Closed form on `L_p`, search otherwise.
pub(crate) fn lattice_dual_sup(
    space: &SpaceDescriptor,
    mu: &DiscreteMeasure,
    w: &[f64],
    r: f64,
    budget: &SearchBudget,
    stream: u64,
) -> Result<Separation> {
    let m = mu.weights();
    let n = m.len();
    if w.iter().all(|v| *v <= 0.0) {
        return Ok(Separation { value: 0.0, witness: vec![0.0; n], exact: true });
    }
    if let Some(p) = space.as_lp() {
        let q = p / r;
        if q.is_infinite() {
            let value = m.iter().zip(w).map(|(a, b)| a * b).sum();
            return Ok(Separation { value, witness: vec![1.0; n], exact: true });
        }
        if q <= 1.0 {
            let score = |i: usize| w[i] * m[i].powf(1.0 - r / p);
            let i = (0..n).fold(0, |b, i| if score(i) > score(b) { i } else { b });
            let mut v = vec![0.0; n];
            v[i] = m[i].powf(-1.0 / p);
            return Ok(Separation { value: score(i), witness: v, exact: true });
        }
        let qc = q / (q - 1.0);
        let value = lp_norm(m, w, qc);
        let z: Vec<f64> = w.iter().map(|v| pow_abs(*v / value, qc - 1.0)).collect();
        let v: Vec<f64> = z.iter().map(|z| z.powf(1.0 / r)).collect();
        return Ok(Separation { value, witness: v, exact: true });
    }
    let c: Vec<f64> = m.iter().zip(w).map(|(a, b)| a * b.max(0.0)).collect();
    let (value, z) = max_linear_ratio(&power_space(space, r)?, mu, &c, budget, stream)?;
    let v: Vec<f64> = z.iter().map(|z| z.powf(1.0 / r)).collect();
    let norm = space.eval(mu, &v)?;
    let v = if norm > 0.0 { v.iter().map(|a| a / norm).collect() } else { v };
    Ok(Separation { value, witness: v, exact: false })
}

/// `sup_{‖y‖_{L_r(ν)} ≤ 1} ‖g y‖_Y`; closed form on `L_p`.
pub(crate) fn multiplication_norm(
    space: &SpaceDescriptor,
    nu: &DiscreteMeasure,
    g: &[f64],
    r: f64,
    budget: &SearchBudget,
    stream: u64,
) -> Result<(f64, bool)> {
    let w = nu.weights();
    if g.iter().all(|v| *v == 0.0) {
        return Ok((0.0, true));
    }
    if let Some(p) = space.as_lp() {
        if p < r {
            let s = 1.0 / (1.0 / p - 1.0 / r);
            return Ok((lp_norm(w, g, s), true));
        }
        let e = if p.is_infinite() { -1.0 / r } else { 1.0 / p - 1.0 / r };
        let value = g.iter().zip(w).map(|(g, v)| g.abs() * v.powf(e)).fold(0.0, f64::max);
        return Ok((value, true));
    }
    let n = g.len();
    let objective = |y: &[f64]| -> f64 {
        let den = lp_norm(w, y, r);
        if den <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let gy: Vec<f64> = g.iter().zip(y).map(|(a, b)| a * b).collect();
        space.eval(nu, &gy).map(|v| v / den).unwrap_or(f64::NEG_INFINITY)
    };
    let mut starts: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    starts.push(vec![1.0; n]);
    for power in [0.5, 1.0, 2.0] {
        starts.push(g.iter().map(|v| v.abs().powf(power)).collect());
    }
    starts.extend((0..budget.starts).map(|i| sparse_nonneg(&mut start_rng(budget.seed, stream, i as u64), n)));
    let opts = AscentOptions { sweeps: budget.refine_iters.max(1), ..Default::default() };
    let results = par_starts(starts.len(), |i| coordinate_ascent(starts[i].clone(), objective, opts));
    let best = results.into_iter().map(|(_, v)| v).fold(0.0, f64::max);
    Ok((best, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_search_agree() {
        let dom = Representation::dirac(VectorNorm::Euclidean, 2).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(3)).unwrap();
        let op = OperatorSpec::matrix(&[vec![1.0, 2.0], vec![0.5, -1.0], vec![0.0, 3.0]], dom, cod).unwrap();
        let c = [0.3, 1.0, 0.7];
        let exact = domination_ratio(&op, 2.0, Numerator::Weighted(&c), &[1.0], &SearchBudget::default(), 1, &[]).unwrap();
        assert!(exact.exact);
        let search = {
            let b = SearchBudget::default();
            let n = 2;
            let starts: Vec<Vec<f64>> = (0..b.starts).map(|i| signed_uniform(&mut start_rng(0, 9, i as u64), n)).collect();
            starts
                .into_iter()
                .map(|s| coordinate_ascent(s, |x| ratio_at(&op, 2.0, Numerator::Weighted(&c), &[1.0], x), AscentOptions { signed: true, sweeps: 200, ..Default::default() }).1)
                .fold(0.0, f64::max)
        };
        assert!((exact.value - search).abs() < 1e-6 * exact.value, "{} vs {}", exact.value, search);
    }

    #[test]
    fn dual_sup_closed_forms() {
        let mu = DiscreteMeasure::new(vec![1.0, 2.0]).unwrap();
        let b = SearchBudget::default();
        let s = lattice_dual_sup(&SpaceDescriptor::lp(4.0), &mu, &[1.0, 3.0], 2.0, &b, 0).unwrap();
        assert!((s.value - lp_norm(mu.weights(), &[1.0, 3.0], 2.0)).abs() < 1e-12);
        let achieved: f64 = mu.weights().iter().zip(&[1.0, 3.0]).zip(&s.witness).map(|((m, w), v)| m * w * v * v).sum();
        assert!((achieved - s.value).abs() < 1e-12);
        let orlicz = SpaceDescriptor::orlicz(crate::young::YoungFunction::power(4.0));
        let numeric = lattice_dual_sup(&orlicz, &mu, &[1.0, 3.0], 2.0, &b, 0).unwrap();
        assert!((numeric.value - s.value).abs() < 1e-6 * s.value, "{} vs {}", numeric.value, s.value);
    }

    #[test]
    fn multiplication_norm_closed_form_matches_search() {
        let nu = DiscreteMeasure::new(vec![1.0, 0.5, 2.0]).unwrap();
        let g = [1.0, 2.0, 0.5];
        let b = SearchBudget::default();
        for p in [1.0, 3.0] {
            let (closed, exact) = multiplication_norm(&SpaceDescriptor::lp(p), &nu, &g, 2.0, &b, 0).unwrap();
            assert!(exact);
            let orlicz = SpaceDescriptor::orlicz(crate::young::YoungFunction::power(p));
            let (numeric, _) = multiplication_norm(&orlicz, &nu, &g, 2.0, &b, 0).unwrap();
            assert!((closed - numeric).abs() < 1e-5 * closed, "p={p}: {closed} vs {numeric}");
        }
    }
}
