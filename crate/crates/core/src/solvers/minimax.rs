//! Positive functionals `φ₁`, `φ₂` on the power lattices dominating a
//! homogeneous form: `|u(x, y)| ≤ φ₁(|φ₁x|^{r₁})^{1/r₁} φ₂(|φ₂y|^{r₂})^{1/r₂}`,
//! each `φℓ` in the ball of radius `Mℓ^{rℓ}` of the dual of `Xℓ^{rℓ}`.
//!
//! Cutting planes in the densities: a pair `(x, y)` rescaled to
//! `(λx, y/λ)` gives the linear cut
//! `(t/r₁) λ^{r₁} ⟨φ₁, |φ₁x|^{r₁}⟩ + (t/r₂) λ^{−r₂} ⟨φ₂, |φ₂y|^{r₂}⟩ ≥ |u(x, y)|^t`,
//! and all rescalings together are equivalent to the product inequality.

use super::certificate::{Infeasibility, MinimaxCertificate, SolverMetadata};
use super::config::SolverConfig;
use super::inner::lattice_dual_sup;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::measure::pow_abs;
use crate::operator::FormSpec;
use crate::search::{coordinate_ascent, par_starts, signed_uniform, start_rng, AscentOptions};
use crate::vectorvalued::Representation;

const STREAM: u64 = 0x6d69_6e69;
const ITERATION_CAP: usize = 500;
const CUTS_PER_ROUND: usize = 4;

struct Side<'a> {
    rep: &'a Representation,
    r: f64,
    /// `Mℓ^{rℓ}`.
    radius: f64,
}

impl Side<'_> {
    fn powers(&self, x: &[f64]) -> Vec<f64> {
        let mu = self.rep.measure().weights();
        self.rep.represent_abs(x).map(|v| v.iter().zip(mu).map(|(v, m)| m * pow_abs(*v, self.r)).collect()).unwrap_or_default()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a * b).sum()
}

struct Problem<'a> {
    form: &'a FormSpec,
    sides: [Side<'a>; 2],
}

impl Problem<'_> {
    fn n(&self) -> [usize; 2] {
        [self.sides[0].rep.measure().len(), self.sides[1].rep.measure().len()]
    }

    /// `|u(x,y)| / (a₁(x) a₂(y))` at densities `phi`, with `0/0 = 0`.
    fn ratio(&self, phi: &[Vec<f64>; 2], x: &[f64], y: &[f64]) -> f64 {
        let u = self.form.eval(x, y).abs();
        if u == 0.0 {
            return 0.0;
        }
        let a1 = dot(&phi[0], &self.sides[0].powers(x)).max(0.0).powf(1.0 / self.sides[0].r);
        let a2 = dot(&phi[1], &self.sides[1].powers(y)).max(0.0).powf(1.0 / self.sides[1].r);
        u / (a1 * a2)
    }

    /// Balanced cut row for the pair, normalized to right-hand side 1.
    fn pair_row(&self, phi: &[Vec<f64>; 2], x: &[f64], y: &[f64]) -> Option<Vec<f64>> {
        let u = self.form.eval(x, y).abs();
        if !(u > 0.0) {
            return None;
        }
        let t = self.form.t();
        let (s1, s2) = (&self.sides[0], &self.sides[1]);
        let (p1, p2) = (s1.powers(x), s2.powers(y));
        let (b1, b2): (f64, f64) = (p1.iter().sum(), p2.iter().sum());
        let a1 = dot(&phi[0], &p1).max(1e-9 * b1).max(f64::MIN_POSITIVE);
        let a2 = dot(&phi[1], &p2).max(1e-9 * b2).max(f64::MIN_POSITIVE);
        let lambda = (a2 / a1).powf(1.0 / (s1.r + s2.r));
        let ut = u.powf(t);
        let c1 = t / s1.r * lambda.powf(s1.r) / ut;
        let c2 = t / s2.r * lambda.powf(-s2.r) / ut;
        Some(p1.iter().map(|v| c1 * v).chain(p2.iter().map(|v| c2 * v)).collect())
    }

    fn search(&self, phi: &[Vec<f64>; 2], cfg: &SolverConfig, round: u64, hints: &[(Vec<f64>, Vec<f64>)]) -> Vec<(f64, Vec<f64>, Vec<f64>)> {
        let (d1, d2) = (self.form.left.input_dim(), self.form.right.input_dim());
        let budget = cfg.budget();
        let mut starts: Vec<Vec<f64>> = hints.iter().map(|(x, y)| x.iter().chain(y).copied().collect()).collect();
        for i in 0..d1 {
            for j in 0..d2 {
                let mut z = vec![0.0; d1 + d2];
                z[i] = 1.0;
                z[d1 + j] = 1.0;
                starts.push(z);
            }
        }
        starts.extend((0..budget.starts).map(|k| signed_uniform(&mut start_rng(budget.seed.wrapping_add(round), STREAM, k as u64), d1 + d2)));
        let opts = AscentOptions { sweeps: budget.refine_iters.max(1), signed: true, ..AscentOptions::default() };
        let objective = |z: &[f64]| self.ratio(phi, &z[..d1], &z[d1..]);
        let mut found = par_starts(starts.len(), |k| {
            let (z, v) = coordinate_ascent(starts[k].clone(), objective, opts);
            (v, z[..d1].to_vec(), z[d1..].to_vec())
        });
        found.sort_by(|a, b| b.0.total_cmp(&a.0));
        found
    }
}

/// Dominating functionals for `form`, given the convexity constants
/// `constants = [M^{(r₁)}(X₁), M^{(r₂)}(X₂)]`.
///
/// Fails with [`Error::Infeasible`] when the cut set admits no functionals
/// and with [`Error::BudgetExhausted`] when violations remain after the
/// iteration cap.
pub fn solve_minimax(form: &FormSpec, constants: [f64; 2], cfg: &SolverConfig) -> Result<MinimaxCertificate> {
    for m in constants {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Unsupported(format!("convexity constant {m} must be positive and finite")));
        }
    }
    let side = |rep, r: f64, m: f64| Side { rep, r, radius: m.powf(r) };
    let pb = Problem {
        form,
        sides: [side(&form.left, form.r1, constants[0]), side(&form.right, form.r2, constants[1])],
    };
    let [n1, n2] = pb.n();
    let tol = cfg.tolerance.min(1e-6) * 1e-3;
    let mut phi = [vec![1.0; n1], vec![1.0; n2]];
    let mut pair_rows: Vec<Vec<f64>> = Vec::new();
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    let mut dual_rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (l, s) in pb.sides.iter().enumerate() {
        let mu = s.rep.measure().weights();
        for j in 0..mu.len() {
            let mut v = vec![0.0; mu.len()];
            v[j] = 1.0;
            let norm = s.rep.space().norm(s.rep.measure(), &v)?;
            if norm > 0.0 {
                v[j] = mu[j] * pow_abs(1.0 / norm, s.r);
                dual_rows.push((l, v));
            }
        }
    }
    let (d1, d2) = (form.left.input_dim(), form.right.input_dim());
    for i in 0..d1 {
        for j in 0..d2 {
            let (mut x, mut y) = (vec![0.0; d1], vec![0.0; d2]);
            x[i] = 1.0;
            y[j] = 1.0;
            if let Some(row) = pb.pair_row(&phi, &x, &y) {
                pair_rows.push(row);
                pairs.push((x, y));
            }
        }
    }
    let mut iterations = 0;
    let mut worst = f64::INFINITY;
    let mut margins = [0.0; 2];
    let mut converged = false;
    for round in 0..=ITERATION_CAP {
        let mut lp = LinearProgram::new(n1 + n2);
        lp.objective = pb.sides[0].rep.measure().weights().iter().chain(pb.sides[1].rep.measure().weights()).copied().collect();
        for row in &pair_rows {
            lp.add_row(row.clone(), Relation::Ge, 1.0);
        }
        for (l, v) in &dual_rows {
            let mut row = vec![0.0; n1 + n2];
            let offset = if *l == 0 { 0 } else { n1 };
            row[offset..offset + v.len()].copy_from_slice(v);
            lp.add_row(row, Relation::Le, pb.sides[*l].radius);
        }
        let z = match lp.solve() {
            Ok(sol) => sol.x,
            Err(Error::Lp("infeasible")) => {
                return Err(Error::Infeasible(Box::new(Infeasibility {
                    constant: 1.0,
                    required: None,
                    best_residual: f64::INFINITY,
                    witness: pairs.last().map(|(x, y)| x.iter().chain(y).copied().collect()).unwrap_or_default(),
                    message: "no functionals in the dual balls dominate the retained pairs".into(),
                })));
            }
            Err(e) => return Err(e),
        };
        phi = [z[..n1].to_vec(), z[n1..].to_vec()];
        let mut added = 0;
        for (l, s) in pb.sides.iter().enumerate() {
            let sep = lattice_dual_sup(s.rep.space(), s.rep.measure(), &phi[l], s.r, &cfg.budget(), STREAM ^ l as u64)?;
            margins[l] = 1.0 - sep.value / s.radius;
            if margins[l] < -tol {
                let mu = s.rep.measure().weights();
                dual_rows.push((l, sep.witness.iter().zip(mu).map(|(v, m)| m * pow_abs(*v, s.r)).collect()));
                added += 1;
            }
        }
        let hints: Vec<_> = pairs.iter().rev().take(8).cloned().collect();
        let found = pb.search(&phi, cfg, round as u64, &hints);
        worst = found.first().map_or(0.0, |f| f.0);
        for (v, x, y) in found.iter().take(CUTS_PER_ROUND) {
            if *v > 1.0 + tol {
                if let Some(row) = pb.pair_row(&phi, x, y) {
                    pair_rows.push(row);
                    pairs.push((x.clone(), y.clone()));
                    added += 1;
                }
            }
        }
        if added == 0 {
            converged = true;
            break;
        }
        iterations += 1;
    }
    let retained = pairs.iter().map(|(x, y)| pb.ratio(&phi, x, y)).fold(0.0, f64::max);
    let form_margin = 1.0 - worst.max(retained);
    if !converged {
        return Err(Error::BudgetExhausted(format!(
            "minimax: violations remain after {ITERATION_CAP} rounds; best φ₁ = {:?}, φ₂ = {:?}, form margin {form_margin:e}",
            phi[0], phi[1]
        )));
    }
    Ok(MinimaxCertificate {
        phi1: phi[0].clone(),
        phi2: phi[1].clone(),
        margin1: margins[0],
        margin2: margins[1],
        form_margin,
        retained_pairs: pairs.len(),
        metadata: SolverMetadata { method: "cutting-plane/simplex".into(), seed: cfg.seed, iterations, gap: Some((-form_margin).max(0.0)), exact_oracle: false },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DiscreteMeasure;
    use crate::space::SpaceDescriptor;
    use nalgebra::DMatrix;

    fn l2(mu: Vec<f64>) -> Representation {
        Representation::identity(SpaceDescriptor::lp(2.0), DiscreteMeasure::new(mu).unwrap()).unwrap()
    }

    #[test]
    fn zero_form_needs_no_rounds() {
        let form = FormSpec::new(|_, _| 0.0, l2(vec![1.0, 2.0]), l2(vec![1.0]), 2.0, 2.0).unwrap();
        let cert = solve_minimax(&form, [1.0, 1.0], &SolverConfig::default()).unwrap();
        assert_eq!(cert.metadata.iterations, 0);
        assert!(cert.phi1.iter().chain(&cert.phi2).all(|v| *v == 0.0));
    }

    #[test]
    fn scalar_product_on_one_atom() {
        let form = FormSpec::new(|x, y| x[0] * y[0], l2(vec![1.0]), l2(vec![1.0]), 2.0, 2.0).unwrap();
        let cert = solve_minimax(&form, [1.0, 1.0], &SolverConfig::default()).unwrap();
        assert!((cert.phi1[0] - 1.0).abs() < 1e-9 && (cert.phi2[0] - 1.0).abs() < 1e-9);
        assert!(cert.form_margin >= -1e-6);
    }

    #[test]
    fn weighted_pairing_on_two_atoms() {
        let mu = vec![0.5, 1.5];
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(mu.clone()));
        let form = FormSpec::bilinear(a, l2(mu.clone()), l2(mu), 2.0, 2.0).unwrap();
        let cert = solve_minimax(&form, [1.0, 1.0], &SolverConfig::default()).unwrap();
        assert!(cert.margin1 >= -1e-6 && cert.margin2 >= -1e-6 && cert.form_margin >= -1e-6, "{cert:?}");
        for v in cert.phi1.iter().chain(&cert.phi2) {
            assert!((v - 1.0).abs() < 1e-6);
        }
    }
}
