//! Domain weight `ω₁` dominating `‖Tx‖_F^r` for an operator out of an
//! `r`-convex `X(μ)`.
//!
//! Linear program in `(ω₁, β)`: minimize `β` subject to the domination cuts
//! `∫ |φ(x)|^r ω₁ dμ ≥ ‖Tx‖_F^r` and the dual cuts `∫ |v|^r ω₁ dμ ≤ β` for
//! unit vectors `v` of `X`; both witness sets grow by separation.

use super::certificate::{DomainWeightCertificate, Infeasibility, SolverMetadata};
use super::config::SolverConfig;
use super::inner::{domination_ratio, lattice_dual_sup, Numerator};
use super::weights::check_inputs;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::measure::pow_abs;
use crate::operator::OperatorSpec;

const STREAM_DOMINATION: u64 = 0x646f_6d31;
const STREAM_DUAL: u64 = 0x6475_6131;

/// `‖ψ(Tx)‖_F^r`.
fn target(op: &OperatorSpec, r: f64, x: &[f64]) -> Result<f64> {
    Ok(pow_abs(op.codomain().norm(&op.apply(x))?, r))
}

pub fn solve_weight_domain(op: &OperatorSpec, r: f64, c: f64, cfg: &SolverConfig) -> Result<DomainWeightCertificate> {
    check_inputs(r, c)?;
    let dom = op.domain();
    let mu = dom.measure().weights().to_vec();
    let m = mu.len();
    let n = op.input_dim();
    let budget = cfg.budget();
    let mut cuts: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    cuts.push(vec![1.0; n]);
    let mut dual_cuts: Vec<Vec<f64>> = Vec::new();
    for j in 0..m {
        let mut e = vec![0.0; m];
        e[j] = 1.0;
        let norm = dom.space().eval(dom.measure(), &e)?;
        dual_cuts.push(e.iter().map(|v| v / norm).collect());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut exact = true;
    let mut rounds = 0;
    let mut gap = f64::INFINITY;
    for round in 0..cfg.max_iterations.max(1) {
        rounds = round + 1;
        let mut lp = LinearProgram::new(m + 1);
        lp.objective[m] = 1.0;
        for x in &cuts {
            let rhs = target(op, r, x)?;
            if rhs == 0.0 {
                continue;
            }
            let phi = op.phi(x)?;
            let row: Vec<f64> = mu.iter().zip(&phi).map(|(a, v)| a * pow_abs(*v, r) / rhs).chain([0.0]).collect();
            lp.add_row(row, Relation::Ge, 1.0);
        }
        for v in &dual_cuts {
            let row: Vec<f64> = mu.iter().zip(v).map(|(a, v)| a * pow_abs(*v, r)).chain([-1.0]).collect();
            lp.add_row(row, Relation::Le, 0.0);
        }
        let sol = lp.solve()?;
        let omega = sol.x[..m].to_vec();
        let lower = sol.x[m];
        let d: Vec<f64> = mu.iter().zip(&omega).map(|(a, w)| a * w).collect();
        let mut b = budget.clone();
        b.seed = b.seed.wrapping_add(round as u64);
        let sep = domination_ratio(op, r, Numerator::Norm, &d, &b, STREAM_DOMINATION, &cuts[cuts.len().saturating_sub(8)..])?;
        let dual = lattice_dual_sup(dom.space(), dom.measure(), &omega, r, &b, STREAM_DUAL)?;
        exact &= sep.exact && dual.exact;
        let grow = sep.value.max(1.0);
        let upper = dual.value * grow;
        if best.as_ref().is_none_or(|(v, _)| upper < *v) {
            best = Some((upper, omega.iter().map(|w| w * grow).collect()));
        }
        let best_value = best.as_ref().map_or(f64::INFINITY, |b| b.0);
        gap = best_value - lower;
        let mut added = false;
        if sep.value > 1.0 + 1e-12 && sep.value.is_finite() {
            cuts.push(sep.witness);
            added = true;
        }
        if dual.value > lower * (1.0 + 1e-12) {
            dual_cuts.push(dual.witness);
            added = true;
        }
        if !added || gap <= 1e-10 * best_value.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let (beta, omega1) = best.expect("at least one round");
    let constant = beta.powf(1.0 / r);
    let d: Vec<f64> = mu.iter().zip(&omega1).map(|(a, w)| a * w).collect();
    let sep = domination_ratio(op, r, Numerator::Norm, &d, &budget, STREAM_DOMINATION ^ 0xff, &cuts[cuts.len().saturating_sub(8)..])?;
    if constant > c * (1.0 + cfg.tolerance) {
        return Err(Error::Infeasible(Box::new(Infeasibility {
            constant: c,
            required: Some(constant),
            best_residual: (constant / c).powf(r) - 1.0,
            witness: sep.witness,
            message: format!("smallest dominating weight has bound {constant:.9} > C = {c:.9}"),
        })));
    }
    Ok(DomainWeightCertificate {
        r,
        constant: c,
        omega1,
        domain_norm: constant,
        residual: (sep.value - 1.0).max(0.0),
        metadata: SolverMetadata { method: "cutting-plane/simplex".into(), seed: cfg.seed, iterations: rounds, gap: Some(gap.max(0.0)), exact_oracle: exact },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DiscreteMeasure;
    use crate::space::SpaceDescriptor;
    use crate::vectorvalued::{Representation, VectorNorm};

    #[test]
    fn sum_functional_on_l_infinity() {
        let dom = Representation::identity(SpaceDescriptor::lp(f64::INFINITY), DiscreteMeasure::counting(2)).unwrap();
        let cod = Representation::dirac(VectorNorm::Euclidean, 1).unwrap();
        let op = OperatorSpec::matrix(&[vec![1.0, 1.0]], dom, cod).unwrap();
        let cert = solve_weight_domain(&op, 1.0, 2.0, &SolverConfig::default()).unwrap();
        assert!((cert.omega1[0] - 1.0).abs() < 1e-9 && (cert.omega1[1] - 1.0).abs() < 1e-9, "{:?}", cert.omega1);
        assert!((cert.domain_norm - 2.0).abs() < 1e-9);
        assert!(matches!(solve_weight_domain(&op, 1.0, 1.9, &SolverConfig::default()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn identity_on_lr_and_zero() {
        let rep = Representation::identity(SpaceDescriptor::lp(3.0), DiscreteMeasure::counting(2)).unwrap();
        let id = OperatorSpec::matrix(&[vec![1.0, 0.0], vec![0.0, 1.0]], rep.clone(), rep.clone()).unwrap();
        let cert = solve_weight_domain(&id, 3.0, 1.0, &SolverConfig::default()).unwrap();
        assert!(cert.omega1.iter().all(|w| (w - 1.0).abs() < 1e-6), "{:?}", cert.omega1);
        let zero = OperatorSpec::matrix(&[vec![0.0, 0.0], vec![0.0, 0.0]], rep.clone(), rep).unwrap();
        let cert = solve_weight_domain(&zero, 3.0, 1.0, &SolverConfig::default()).unwrap();
        assert_eq!(cert.omega1, vec![0.0, 0.0]);
    }
}
