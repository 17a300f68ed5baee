//! Independent re-check of weight certificates from their raw weights.

use super::certificate::{VerificationReport, WeightCertificate};
use super::config::SolverConfig;
use super::inner::{multiplication_norm, ratio_at, Numerator};
use super::weights::{codomain_concavity, domain_convexity, domain_norm, domination_check};
use crate::error::Result;
use crate::operator::OperatorSpec;
use crate::search::{signed_uniform, start_rng};
use crate::vectorvalued::vv_sides;

const STREAM_VERIFY: u64 = 0x7665_7269;

/// Checks (a) the domination inequality on random and adversarial inputs,
/// (b) the two recorded norm bounds, recomputed from the weights, and
/// (c) the vector-valued inequality on random tuples with constant
/// `C · M_(r)(Y) · M^(r)(X)`. Failures are reported, never raised.
pub fn verify_weight_certificate(cert: &WeightCertificate, op: &OperatorSpec, cfg: &SolverConfig) -> Result<VerificationReport> {
    let r = cert.r;
    let tol = cfg.tolerance;
    let budget = cfg.budget();
    let n = op.input_dim();
    let omega1 = cert.omega1.as_deref();

    let adversarial = domination_check(op, r, &cert.omega2, omega1, &budget, &[])?;
    let mut worst = adversarial.value;
    let nu = op.codomain().measure().weights();
    if worst.is_finite() {
        let c: Vec<f64> = nu.iter().zip(&cert.omega2).map(|(v, w)| if *w > 0.0 { v / w } else { 0.0 }).collect();
        let d: Vec<f64> = match omega1 {
            None => vec![1.0],
            Some(w) => op.domain().measure().weights().iter().zip(w).map(|(m, w)| m * w).collect(),
        };
        for i in 0..cfg.verify_samples {
            let x = signed_uniform(&mut start_rng(cfg.seed, STREAM_VERIFY, i as u64), n);
            worst = worst.max(ratio_at(op, r, Numerator::Weighted(&c), &d, &x));
        }
    }
    let domination_residual = (worst - 1.0).max(0.0);

    let cod = op.codomain();
    let g: Vec<f64> = cert.omega2.iter().map(|w| w.powf(1.0 / r)).collect();
    let (mult, _) = multiplication_norm(cod.space(), cod.measure(), &g, r, &budget, STREAM_VERIFY)?;
    let (dnorm, _) = domain_norm(op, omega1, r, &budget)?;
    let my = codomain_concavity(op, r, &budget)?;
    let mx = domain_convexity(op, r, &budget)?;
    let multiplication_bound = cert.constant * my.value;
    let domain_bound = mx.value;
    let bounds_ok = mult <= multiplication_bound * (1.0 + tol) && dnorm <= domain_bound * (1.0 + tol);

    let reverse_bound = multiplication_bound * domain_bound;
    let mut reverse_ratio = 0.0f64;
    for i in 0..cfg.verify_samples {
        let mut rng = start_rng(cfg.seed, STREAM_VERIFY + 1, i as u64);
        let size = 1 + i % 4;
        let tuple: Vec<Vec<f64>> = (0..size).map(|_| signed_uniform(&mut rng, n)).collect();
        let (lhs, rhs) = vv_sides(op, r, &tuple)?;
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        reverse_ratio = reverse_ratio.max(ratio);
    }
    Ok(VerificationReport {
        domination_residual,
        multiplication_norm: mult,
        multiplication_bound,
        domain_norm: dnorm,
        domain_bound,
        reverse_ratio,
        reverse_bound,
        domination_ok: domination_residual <= tol,
        bounds_ok,
        reverse_ok: reverse_ratio <= reverse_bound * (1.0 + tol),
        samples: cfg.verify_samples,
    })
}
