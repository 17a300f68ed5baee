//! Köthe dual norms and the convexification (largest lattice norm below a
//! monotone quasi-norm).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lp::{LinearProgram, Relation};
use crate::measure::{pow_abs, DiscreteMeasure};
use crate::search::{coordinate_ascent, par_starts, sparse_nonneg, start_rng, AscentOptions, SearchBudget};
use crate::space::{conjugate, resolve_dual, SpaceDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualNorm {
    pub value: f64,
    pub status: BoundStatus,
    /// A nonnegative `x` attaining (or approaching) the supremum.
    pub witness: Vec<f64>,
}

/// `‖y‖_{X^×} = sup_{‖x‖_X ≤ 1} ∫ |x y| dμ`.
///
/// Exact for registered closed forms, otherwise a lower bound found by
/// multi-start maximization over the unit ball.
pub fn koethe_dual_norm(space: &SpaceDescriptor, mu: &DiscreteMeasure, y: &[f64], budget: &SearchBudget) -> Result<DualNorm> {
    mu.check_len(y)?;
    space.validate()?;
    if y.iter().all(|v| *v == 0.0) {
        return Ok(DualNorm { value: 0.0, status: BoundStatus::Exact, witness: vec![0.0; y.len()] });
    }
    if let Ok(dual) = resolve_dual(space) {
        let value = dual.eval(mu, y)?;
        let witness = holder_witness(space, y).unwrap_or_else(|| y.iter().map(|v| v.abs()).collect());
        return Ok(DualNorm { value, status: BoundStatus::Exact, witness });
    }
    let weights: Vec<f64> = mu.weights().iter().zip(y).map(|(w, v)| w * v.abs()).collect();
    let (value, witness) = max_linear_ratio(space, mu, &weights, budget, 0x6475_616c)?;
    Ok(DualNorm { value, status: BoundStatus::LowerBound, witness })
}

/// Nonnegative `x` with `∫ x|y| dμ = ‖x‖_{L_p} ‖y‖_{L_{p'}}`, for `L_p`, `p ≥ 1`.
pub fn holder_witness(space: &SpaceDescriptor, y: &[f64]) -> Option<Vec<f64>> {
    let p = space.as_lp()?;
    if p < 1.0 {
        return None;
    }
    let a: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    Some(if p == 1.0 {
        let top = a.iter().fold(0.0f64, |m, v| m.max(*v));
        a.iter().map(|v| if *v == top { 1.0 } else { 0.0 }).collect()
    } else if p.is_infinite() {
        a.iter().map(|v| if *v > 0.0 { 1.0 } else { 0.0 }).collect()
    } else {
        let q = conjugate(p);
        a.iter().map(|v| pow_abs(*v, q - 1.0)).collect()
    })
}

/// `sup_{z ≥ 0} Σ c_i z_i / ‖z‖_X` for `c ≥ 0`, with the best `z` found.
pub(crate) fn max_linear_ratio(
    space: &SpaceDescriptor,
    mu: &DiscreteMeasure,
    c: &[f64],
    budget: &SearchBudget,
    stream: u64,
) -> Result<(f64, Vec<f64>)> {
    let n = c.len();
    let support: Vec<usize> = (0..n).filter(|&i| c[i] > 0.0).collect();
    if support.is_empty() {
        return Ok((0.0, vec![0.0; n]));
    }
    let k = support.len();
    let embed = |z: &[f64]| -> Vec<f64> {
        let mut full = vec![0.0; n];
        for (a, &i) in support.iter().enumerate() {
            full[i] = z[a];
        }
        full
    };
    let objective = |z: &[f64]| -> f64 {
        let full = embed(z);
        let norm = space.eval(mu, &full).unwrap_or(f64::NAN);
        if norm > 0.0 {
            support.iter().zip(z).map(|(&i, v)| c[i] * v).sum::<f64>() / norm
        } else {
            f64::NEG_INFINITY
        }
    };
    let cs: Vec<f64> = support.iter().map(|&i| c[i]).collect();
    let mut starts: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            let mut e = vec![0.0; k];
            e[a] = 1.0;
            e
        })
        .collect();
    starts.push(vec![1.0; k]);
    for power in [0.5, 1.0, 2.0] {
        starts.push(cs.iter().map(|v| v.powf(power)).collect());
    }
    let structured = starts.len();
    starts.extend((0..budget.starts).map(|i| sparse_nonneg(&mut start_rng(budget.seed, stream, i as u64), k)));
    let opts = AscentOptions { sweeps: budget.refine_iters, ..Default::default() };
    let results = par_starts(starts.len(), |i| {
        if i < structured && budget.refine_iters == 0 {
            let v = objective(&starts[i]);
            (starts[i].clone(), v)
        } else {
            coordinate_ascent(starts[i].clone(), objective, opts)
        }
    });
    let mut best = (f64::NEG_INFINITY, vec![0.0; k]);
    for (z, v) in results {
        if v > best.0 {
            best = (v, z);
        }
    }
    Ok((best.0.max(0.0), embed(&best.1)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexificationEnclosure {
    /// Upper bound from the decomposition.
    pub value: f64,
    /// Lower bound from the dual witness.
    pub lower: f64,
    pub gap: f64,
    /// `|x| ≤ Σ c_j z_j` with `‖z_j‖_X = 1`.
    pub decomposition: Vec<(f64, Vec<f64>)>,
    pub dual_witness: Vec<f64>,
    pub rounds: usize,
    pub converged: bool,
}

/// Enclosure of `⦀x⦀ = inf { Σ ‖x_j‖_X : |x| ≤ Σ |x_j| }` by column
/// generation: the restricted LP over unit columns gives the upper bound, its
/// dual prices `v ≥ 0` (scaled to satisfy `⟨v, z⟩ ≤ ‖z‖_X` on every searched
/// `z`) give the lower bound.
pub fn convexification_norm(
    space: &SpaceDescriptor,
    mu: &DiscreteMeasure,
    x: &[f64],
    budget: &SearchBudget,
) -> Result<ConvexificationEnclosure> {
    mu.check_len(x)?;
    space.validate()?;
    let n = x.len();
    let a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    let support: Vec<usize> = (0..n).filter(|&i| a[i] > 0.0).collect();
    if support.is_empty() {
        return Ok(ConvexificationEnclosure {
            value: 0.0,
            lower: 0.0,
            gap: 0.0,
            decomposition: vec![],
            dual_witness: vec![0.0; n],
            rounds: 0,
            converged: true,
        });
    }
    let unit = |z: Vec<f64>| -> Result<Option<Vec<f64>>> {
        let norm = space.eval(mu, &z)?;
        Ok((norm > 0.0 && norm.is_finite()).then(|| z.iter().map(|v| v / norm).collect()))
    };
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for &i in &support {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        columns.extend(unit(e)?);
    }
    let mut levels: Vec<f64> = support.iter().map(|&i| a[i]).collect();
    levels.sort_by(|p, q| q.total_cmp(p));
    levels.dedup();
    for level in &levels {
        columns.extend(unit(a.iter().map(|v| v.min(*level)).collect())?);
        columns.extend(unit(a.iter().map(|v| if *v >= *level { 1.0 } else { 0.0 }).collect())?);
    }
    columns.extend(unit(a.clone())?);

    let max_rounds = budget.refine_iters.max(10) + 20;
    let mut best_lower = 0.0f64;
    let mut best_v = vec![0.0; n];
    let mut upper = f64::INFINITY;
    let mut decomposition = Vec::new();
    let mut rounds = 0;
    let mut converged = false;
    while rounds < max_rounds {
        rounds += 1;
        let mut lp = LinearProgram::new(columns.len());
        lp.objective = vec![1.0; columns.len()];
        for &i in &support {
            lp.add_row(columns.iter().map(|z| z[i]).collect(), Relation::Ge, a[i]);
        }
        let sol = lp.solve()?;
        if sol.objective < upper {
            upper = sol.objective;
            decomposition = columns
                .iter()
                .zip(&sol.x)
                .filter(|(_, c)| **c > 0.0)
                .map(|(z, c)| (*c, z.clone()))
                .collect();
        }
        let mut v = vec![0.0; n];
        for (k, &i) in support.iter().enumerate() {
            v[i] = sol.duals[k].max(0.0);
        }
        let (ratio, z) = max_linear_ratio(space, mu, &v, budget, 0x636f_6e76 ^ rounds as u64)?;
        let scale = ratio.max(1.0);
        let lower: f64 = v.iter().zip(&a).map(|(p, q)| p * q).sum::<f64>() / scale;
        if lower > best_lower {
            best_lower = lower;
            best_v = v.iter().map(|p| p / scale).collect();
        }
        if upper - best_lower <= 1e-10 * upper {
            converged = true;
            break;
        }
        match unit(z)? {
            Some(col) if ratio > 1.0 + 1e-12 => columns.push(col),
            _ => {
                converged = upper - best_lower <= 1e-6 * upper;
                break;
            }
        }
    }
    Ok(ConvexificationEnclosure {
        value: upper,
        lower: best_lower.min(upper),
        gap: (upper - best_lower).max(0.0),
        decomposition,
        dual_witness: best_v,
        rounds,
        converged,
    })
}

/// Lower factor of the convexification sandwich for `X^r` on `n` atoms,
/// `M^{(r)}(X)^{-r}`, when `M^{(r)}(X)` is registered.
pub fn sandwich_factor(base: &SpaceDescriptor, r: f64, n_atoms: usize) -> Option<f64> {
    base.registered_convexity(r, n_atoms).map(|m| m.powf(-r))
}
