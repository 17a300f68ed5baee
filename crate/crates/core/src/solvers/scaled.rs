//! Second route to the codomain weight for `Y = L_p(ν)`, `p < r`, and a
//! Dirac domain, working in the variable `g` of `L_c(ν)`,
//! `c = (2r − p)/(r − p)`, with `ω₂ ∝ g^{a−1}`, `a = 2r/p`.
//!
//! The multiplication norm becomes `N^{r/(a−1)} = ‖g‖_c · H(g)^{1/(a−1)}`
//! where `H(g) = sup_x Σ ν_i |Tx|_i^r g_i^{1−a} / ‖x‖^r`, minimized by an
//! exponentiated gradient method with backtracking.

use super::certificate::{SolverMetadata, WeightCertificate};
use super::config::SolverConfig;
use super::inner::{domination_ratio, Numerator, Separation};
use super::weights::{check_inputs, finalize, RawPair};
use crate::error::{Error, Result};
use crate::measure::pow_abs;
use crate::operator::OperatorSpec;
use crate::vectorvalued::RepresentationKind;

const STREAM: u64 = 0x7363_616c;

struct Scaled<'a> {
    op: &'a OperatorSpec,
    r: f64,
    c: f64,
    a: f64,
    nu: Vec<f64>,
    active: Vec<usize>,
    cfg: &'a SolverConfig,
}

impl Scaled<'_> {
    fn weights(&self, g: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.nu.len()];
        for (k, &i) in self.active.iter().enumerate() {
            c[i] = self.nu[i] * g[k].powf(1.0 - self.a);
        }
        c
    }

    fn h(&self, g: &[f64]) -> Result<Separation> {
        domination_ratio(self.op, self.r, Numerator::Weighted(&self.weights(g)), &[1.0], &self.cfg.budget(), STREAM, &[])
    }

    fn gc(&self, g: &[f64]) -> f64 {
        self.active.iter().zip(g).map(|(&i, g)| self.nu[i] * g.powf(self.c)).sum::<f64>().powf(1.0 / self.c)
    }

    /// `log Φ` and its gradient in `log g`.
    fn evaluate(&self, g: &[f64]) -> Result<(f64, Vec<f64>, Separation)> {
        let sep = self.h(g)?;
        let value = self.gc(g).ln() + sep.value.ln() / (self.a - 1.0);
        let pi: Vec<f64> = self.active.iter().zip(g).map(|(&i, g)| self.nu[i] * g.powf(self.c)).collect();
        let pi_sum: f64 = pi.iter().sum();
        let psi = self.op.psi(&sep.witness)?;
        let rho: Vec<f64> = self
            .active
            .iter()
            .zip(g)
            .map(|(&i, g)| self.nu[i] * pow_abs(psi[i], self.r) * g.powf(1.0 - self.a))
            .collect();
        let rho_sum: f64 = rho.iter().sum();
        let grad = pi.iter().zip(&rho).map(|(p, q)| p / pi_sum - q / rho_sum).collect();
        Ok((value, grad, sep))
    }
}

/// Codomain weight through the scaled variable; agrees with
/// [`super::solve_weight_pair`] up to the accuracy of the gradient method.
pub fn solve_weight_pair_scaled(op: &OperatorSpec, r: f64, c: f64, cfg: &SolverConfig) -> Result<WeightCertificate> {
    check_inputs(r, c)?;
    let p = op.codomain().space().as_lp().filter(|p| *p < r);
    let Some(p) = p else {
        return Err(Error::Unsupported("the scaled route needs a codomain L_p with p < r".into()));
    };
    if op.domain().kind() != RepresentationKind::B {
        return Err(Error::Unsupported("the scaled route needs a Dirac domain".into()));
    }
    let flags = op.active_codomain_atoms();
    let active: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();
    let nu = op.codomain().measure().weights().to_vec();
    if active.is_empty() {
        let raw = RawPair {
            omega2: vec![0.0; nu.len()],
            w: None,
            metadata: SolverMetadata { method: "zero".into(), seed: cfg.seed, iterations: 0, gap: Some(0.0), exact_oracle: true },
        };
        return finalize(op, r, c, raw, cfg, &[]);
    }
    let s = Scaled { op, r, c: (2.0 * r - p) / (r - p), a: 2.0 * r / p, nu, active, cfg };
    let mut g = vec![1.0; s.active.len()];
    let (mut value, mut grad, mut sep) = s.evaluate(&g)?;
    let mut eta = 1.0;
    let mut iterations = 0;
    let max_iter = cfg.max_iterations.max(1) * 20;
    while iterations < max_iter && eta > 1e-14 {
        iterations += 1;
        let trial: Vec<f64> = g.iter().zip(&grad).map(|(g, d)| g * (-eta * d).exp()).collect();
        let norm = s.gc(&trial);
        let trial: Vec<f64> = trial.iter().map(|v| v / norm).collect();
        let (tv, tg, ts) = s.evaluate(&trial)?;
        if tv < value - 1e-16 {
            let improvement = value - tv;
            g = trial;
            value = tv;
            grad = tg;
            sep = ts;
            eta *= 1.5;
            if improvement < 1e-15 {
                break;
            }
        } else {
            eta *= 0.5;
        }
    }
    let mut omega2 = vec![0.0; s.nu.len()];
    for (k, &i) in s.active.iter().enumerate() {
        omega2[i] = sep.value * g[k].powf(s.a - 1.0);
    }
    let exact = sep.exact;
    let raw = RawPair {
        omega2,
        w: None,
        metadata: SolverMetadata { method: "scaled-gradient".into(), seed: cfg.seed, iterations, gap: None, exact_oracle: exact },
    };
    finalize(op, r, c, raw, cfg, &[sep.witness])
}
