//! Weight pairs `(ω₁, ω₂)` turning a vector-valued inequality into the
//! weighted domination `∫ |ψ(Tx)|^r / ω₂ dν ≤ ∫ |φ(x)|^r ω₁ dμ`.
//!
//! Among all admissible pairs the solver picks the one minimizing the
//! codomain multiplication norm `‖ω₂^{1/r}‖_{L_r → Y}` with `ω₁` normalized
//! to the domain unit bound. With `u = 1/ω₂`, both the domination cuts and
//! the domain bound are linear in `(u, ω₁)`; the objective is concave for
//! `Y = L_p`. The outer loop is a cutting-plane method whose master problem
//! is solved by a log-barrier Newton iteration; general codomains use a
//! derivative-free search over the direction of `u`.

use nalgebra::{DMatrix, DVector};

use super::barrier::{maximize, BarrierOptions};
use super::certificate::{ConstantUsed, Infeasibility, SolverMetadata, WeightCertificate};
use super::config::SolverConfig;
use super::inner::{domination_ratio, lattice_dual_sup, multiplication_norm, Numerator, Separation};
use crate::constants::{estimate_space_constant, ConstantKind};
use crate::duality::BoundStatus;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::measure::pow_abs;
use crate::operator::OperatorSpec;
use crate::search::{coordinate_ascent, start_rng, AscentOptions, SearchBudget};
use crate::space::lp_norm;
use crate::vectorvalued::RepresentationKind;
use rand::Rng;

const STREAM_DOMINATION: u64 = 0x646f_6d00;
const STREAM_DUAL: u64 = 0x6475_6100;
const STREAM_NORM: u64 = 0x6e6f_726d;
const STREAM_CONSTANT: u64 = 0x636f_6e73;
const GAP_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-12;

pub(crate) fn check_inputs(r: f64, c: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidExponent { value: r, reason: "r must be in (0, ∞)" });
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Unsupported(format!("hypothesis constant {c} must be positive and finite")));
    }
    Ok(())
}

/// Shared state of the weight-pair solvers: the witness sets grow
/// monotonically across rounds.
pub(crate) struct PairProblem<'a> {
    pub op: &'a OperatorSpec,
    pub r: f64,
    pub nu: Vec<f64>,
    pub mu: Vec<f64>,
    pub active: Vec<usize>,
    pub dirac: bool,
    pub budget: SearchBudget,
    pub cuts: Vec<Vec<f64>>,
    pub dual_cuts: Vec<Vec<f64>>,
    pub exact: bool,
}

impl<'a> PairProblem<'a> {
    pub fn new(op: &'a OperatorSpec, r: f64, cfg: &SolverConfig) -> Result<Self> {
        let active: Vec<usize> = op.active_codomain_atoms().iter().enumerate().filter(|(_, a)| **a).map(|(i, _)| i).collect();
        let mut problem = Self {
            op,
            r,
            nu: op.codomain().measure().weights().to_vec(),
            mu: op.domain().measure().weights().to_vec(),
            active,
            dirac: op.domain().kind() == RepresentationKind::B,
            budget: cfg.budget(),
            cuts: Vec::new(),
            dual_cuts: Vec::new(),
            exact: true,
        };
        problem.seed_cuts()?;
        Ok(problem)
    }

    fn seed_cuts(&mut self) -> Result<()> {
        let n = self.op.input_dim();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            self.cuts.push(e);
        }
        self.cuts.push(vec![1.0; n]);
        let mut covered = vec![false; self.nu.len()];
        for x in &self.cuts {
            for (c, v) in covered.iter_mut().zip(self.op.psi(x)?) {
                *c |= v > 0.0;
            }
        }
        let mut rng = start_rng(self.budget.seed, 0x636f_7665, 0);
        for _ in 0..256 {
            if self.active.iter().all(|&i| covered[i]) {
                break;
            }
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let psi = self.op.psi(&x)?;
            if self.active.iter().any(|&i| !covered[i] && psi[i] > 0.0) {
                for (c, v) in covered.iter_mut().zip(psi) {
                    *c |= v > 0.0;
                }
                self.cuts.push(x);
            }
        }
        if let Some(&i) = self.active.iter().find(|&&i| !covered[i]) {
            return Err(Error::Unsupported(format!("no probe reaches codomain atom {i}")));
        }
        if !self.dirac {
            let dom = self.op.domain();
            let m = self.mu.len();
            for j in 0..m {
                let mut e = vec![0.0; m];
                e[j] = 1.0;
                let norm = dom.space().eval(dom.measure(), &e)?;
                self.dual_cuts.push(e.iter().map(|v| v / norm).collect());
            }
            let sep = lattice_dual_sup(dom.space(), dom.measure(), &vec![1.0; m], self.r, &self.budget, STREAM_DUAL)?;
            self.dual_cuts.push(sep.witness);
        }
        Ok(())
    }

    pub fn num_w(&self) -> usize {
        if self.dirac {
            0
        } else {
            self.mu.len()
        }
    }

    /// `(a_u, a_w, rhs)` of the domination cut at `x`, scaled to unit size.
    fn domination_row(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let psi = self.op.psi(x)?;
        let phi = self.op.phi(x)?;
        let au: Vec<f64> = self.active.iter().map(|&i| self.nu[i] * pow_abs(psi[i], self.r)).collect();
        let (aw, rhs) = if self.dirac {
            (Vec::new(), pow_abs(phi[0], self.r))
        } else {
            (self.mu.iter().zip(&phi).map(|(m, v)| -m * pow_abs(*v, self.r)).collect(), 0.0)
        };
        let scale = au.iter().chain(&aw).fold(rhs.abs(), |s, v| s.max(v.abs()));
        if scale == 0.0 {
            return Ok((au, aw, rhs));
        }
        Ok((au.iter().map(|v| v / scale).collect(), aw.iter().map(|v| v / scale).collect(), rhs / scale))
    }

    fn dual_row(&self, v: &[f64]) -> Vec<f64> {
        self.mu.iter().zip(v).map(|(m, v)| m * pow_abs(*v, self.r)).collect()
    }

    /// Full-length numerator weights `ν_i u_i` (zero off the active set).
    pub fn numerator_weights(&self, u: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.nu.len()];
        for (k, &i) in self.active.iter().enumerate() {
            c[i] = self.nu[i] * u[k];
        }
        c
    }

    pub fn denominator_weights(&self, w: &[f64]) -> Vec<f64> {
        if self.dirac {
            vec![1.0]
        } else {
            self.mu.iter().zip(w).map(|(m, w)| m * w).collect()
        }
    }

    /// Worst domination ratio and the dual bound `β(w)` at the given weights.
    pub fn separate(&mut self, u: &[f64], w: &[f64], round: u64) -> Result<(Separation, Option<Separation>)> {
        let c = self.numerator_weights(u);
        let d = self.denominator_weights(w);
        let mut budget = self.budget.clone();
        budget.seed = budget.seed.wrapping_add(round);
        let hints: Vec<Vec<f64>> = self.cuts.iter().rev().take(8).cloned().collect();
        let sep = domination_ratio(self.op, self.r, Numerator::Weighted(&c), &d, &budget, STREAM_DOMINATION, &hints)?;
        self.exact &= sep.exact;
        let dual = if self.dirac {
            None
        } else {
            let dom = self.op.domain();
            Some(lattice_dual_sup(dom.space(), dom.measure(), w, self.r, &budget, STREAM_DUAL)?)
        };
        Ok((sep, dual))
    }

    fn omega2_from(&self, u: &[f64]) -> Vec<f64> {
        let mut omega = vec![0.0; self.nu.len()];
        for (k, &i) in self.active.iter().enumerate() {
            omega[i] = 1.0 / u[k];
        }
        omega
    }
}

/// `log` of the concave objective whose maximization minimizes the
/// multiplication norm into `L_p(ν)`.
struct LpObjective {
    p: f64,
    r: f64,
    /// `ν_i` restricted to the active atoms.
    nu: Vec<f64>,
}

impl LpObjective {
    fn smooth(&self) -> bool {
        self.p < self.r
    }

    fn q(&self) -> f64 {
        self.p / (self.r - self.p)
    }

    /// Coefficients of the epigraph rows `t ≤ c_i u_i` for `p ≥ r`.
    fn epigraph(&self) -> Vec<f64> {
        let e = if self.p.is_infinite() { 1.0 } else { 1.0 - self.r / self.p };
        self.nu.iter().map(|v| v.powf(e)).collect()
    }

    fn value(&self, u: &[f64]) -> f64 {
        if self.smooth() {
            let q = self.q();
            let s: f64 = self.nu.iter().zip(u).map(|(v, u)| v * u.powf(-q)).sum();
            -s.ln() / q
        } else {
            self.epigraph().iter().zip(u).map(|(c, u)| c * u).fold(f64::INFINITY, f64::min).ln()
        }
    }
}

/// Master problem over `(u, w[, t])`: maximize the objective subject to the
/// retained cuts.
fn solve_master(problem: &PairProblem<'_>, obj: &LpObjective) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let k = problem.active.len();
    let nw = problem.num_w();
    let extra = usize::from(!obj.smooth());
    let n = k + nw + extra;
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for x in &problem.cuts {
        let (au, aw, rhs) = problem.domination_row(x)?;
        if au.iter().all(|v| *v == 0.0) {
            continue;
        }
        let mut a = au;
        a.extend(aw);
        a.resize(n, 0.0);
        rows.push((a, rhs));
    }
    for v in &problem.dual_cuts {
        let mut a = vec![0.0; k];
        a.extend(problem.dual_row(v));
        a.resize(n, 0.0);
        rows.push((a, 1.0));
    }
    let epi = obj.epigraph();
    if !obj.smooth() {
        for (i, c) in epi.iter().enumerate() {
            let mut a = vec![0.0; n];
            a[i] = -c;
            a[n - 1] = 1.0;
            rows.push((a, 0.0));
        }
    }
    // Strictly feasible start.
    let mut z = vec![0.0; n];
    if nw > 0 {
        let worst = rows.iter().filter(|(_, b)| *b == 1.0).map(|(a, _)| a[k..k + nw].iter().sum::<f64>()).fold(0.0, f64::max);
        let w0 = if worst > 0.0 { 0.5 / worst } else { 1.0 };
        z[k..k + nw].iter_mut().for_each(|v| *v = w0);
    }
    let mut eps = f64::INFINITY;
    for (a, b) in &rows {
        let au: f64 = a[..k].iter().sum();
        if au > 0.0 {
            let room = b - a[k..k + nw].iter().zip(&z[k..k + nw]).map(|(x, y)| x * y).sum::<f64>();
            eps = eps.min(0.5 * room / au);
        }
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Lp("master problem has no interior"));
    }
    z[..k].iter_mut().for_each(|v| *v = eps);
    if extra == 1 {
        z[n - 1] = 0.5 * epi.iter().map(|c| c * eps).fold(f64::INFINITY, f64::min);
    }
    let f = |z: &[f64]| -> (f64, DVector<f64>, DMatrix<f64>) {
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        if obj.smooth() {
            let q = obj.q();
            let s: f64 = obj.nu.iter().zip(&z[..k]).map(|(v, u)| v * u.powf(-q)).sum();
            let a: Vec<f64> = obj.nu.iter().zip(&z[..k]).map(|(v, u)| v * u.powf(-q - 1.0)).collect();
            for i in 0..k {
                g[i] = a[i] / s;
                h[(i, i)] -= (q + 1.0) * obj.nu[i] * z[i].powf(-q - 2.0) / s;
                for j in 0..k {
                    h[(i, j)] += q * a[i] * a[j] / (s * s);
                }
            }
            (-s.ln() / q, g, h)
        } else {
            let t = z[n - 1];
            g[n - 1] = 1.0 / t;
            h[(n - 1, n - 1)] = -1.0 / (t * t);
            (t.ln(), g, h)
        }
    };
    let z = maximize(&f, &rows, z, &BarrierOptions::default())?;
    let u = z[..k].to_vec();
    let w = z[k..k + nw].to_vec();
    let value = obj.value(&u);
    Ok((u, w, value))
}

/// Raw solution: domination with constant 1 and `sup_{‖x‖_X ≤ 1} ∫|x|^r w ≤ 1`.
pub(crate) struct RawPair {
    pub omega2: Vec<f64>,
    pub w: Option<Vec<f64>>,
    pub metadata: SolverMetadata,
}

fn cutting_plane(problem: &mut PairProblem<'_>, p: f64, cfg: &SolverConfig) -> Result<RawPair> {
    let obj = LpObjective { p, r: problem.r, nu: problem.active.iter().map(|&i| problem.nu[i]).collect() };
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut gap = f64::INFINITY;
    let mut rounds = 0;
    for round in 0..cfg.max_iterations.max(1) {
        rounds = round + 1;
        let (u, w, upper) = solve_master(problem, &obj)?;
        let (sep, dual) = problem.separate(&u, &w, round as u64)?;
        let beta = dual.as_ref().map_or(1.0, |d| d.value);
        let shrink = beta.max(1.0);
        let ratio = sep.value * shrink;
        let uf: Vec<f64> = u.iter().map(|v| v / ratio.max(1.0)).collect();
        let wf: Vec<f64> = w.iter().map(|v| v / shrink).collect();
        let value = obj.value(&uf);
        if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
            best = Some((value, uf, wf));
        }
        gap = upper - best.as_ref().map_or(f64::NEG_INFINITY, |b| b.0);
        let mut added = false;
        if sep.value > 1.0 + FEAS_TOL {
            problem.cuts.push(sep.witness);
            added = true;
        }
        if let Some(d) = dual {
            if d.value > 1.0 + FEAS_TOL {
                problem.dual_cuts.push(d.witness);
                added = true;
            }
        }
        if gap <= GAP_TOL || !added {
            break;
        }
    }
    let (_, u, w) = best.expect("at least one round");
    Ok(RawPair {
        omega2: problem.omega2_from(&u),
        w: (!problem.dirac).then_some(w),
        metadata: SolverMetadata {
            method: if p < problem.r { "cutting-plane/barrier" } else { "cutting-plane/epigraph" }.into(),
            seed: cfg.seed,
            iterations: rounds,
            gap: Some(gap.max(0.0)),
            exact_oracle: problem.exact,
        },
    })
}

/// Largest `s` with `(s u, w)` admissible, and the corresponding `w`.
fn best_scale(problem: &PairProblem<'_>, u: &[f64], budget: &SearchBudget) -> Result<(f64, Vec<f64>, bool)> {
    let c = problem.numerator_weights(u);
    if problem.dirac {
        let sep = domination_ratio(problem.op, problem.r, Numerator::Weighted(&c), &[1.0], budget, STREAM_DOMINATION, &problem.cuts)?;
        return Ok((if sep.value > 0.0 { 1.0 / sep.value } else { f64::INFINITY }, Vec::new(), sep.exact));
    }
    let dom = problem.op.domain();
    let m = problem.mu.len();
    let mut cuts = problem.cuts.clone();
    let mut dual_cuts = problem.dual_cuts.clone();
    let mut exact = true;
    let mut best = (0.0, vec![0.0; m]);
    for _ in 0..60 {
        let mut lp = LinearProgram::new(1 + m);
        lp.objective[0] = 1.0;
        for x in &cuts {
            let psi = problem.op.psi(x)?;
            let phi = problem.op.phi(x)?;
            let num: f64 = c.iter().zip(&psi).map(|(c, v)| c * pow_abs(*v, problem.r)).sum();
            if num == 0.0 {
                continue;
            }
            let mut row = vec![num];
            row.extend(problem.mu.iter().zip(&phi).map(|(mu, v)| -mu * pow_abs(*v, problem.r)));
            let scale = row.iter().fold(0.0f64, |s, v| s.max(v.abs()));
            lp.add_row(row.iter().map(|v| v / scale).collect(), Relation::Le, 0.0);
        }
        for v in &dual_cuts {
            let mut row = vec![0.0];
            row.extend(problem.dual_row(v));
            lp.add_row(row, Relation::Le, 1.0);
        }
        let sol = lp.solve()?;
        let s = sol.x[0];
        let w = sol.x[1..].to_vec();
        let d = problem.denominator_weights(&w);
        let scaled: Vec<f64> = c.iter().map(|v| v * s).collect();
        let sep = domination_ratio(problem.op, problem.r, Numerator::Weighted(&scaled), &d, budget, STREAM_DOMINATION, &cuts)?;
        let dual = lattice_dual_sup(dom.space(), dom.measure(), &w, problem.r, budget, STREAM_DUAL)?;
        exact &= sep.exact && dual.exact;
        let shrink = dual.value.max(1.0);
        let sf = s / (sep.value * shrink).max(1.0);
        if sf > best.0 {
            best = (sf, w.iter().map(|v| v / shrink).collect());
        }
        let mut added = false;
        if sep.value > 1.0 + 1e-9 {
            cuts.push(sep.witness);
            added = true;
        }
        if dual.value > 1.0 + 1e-9 {
            dual_cuts.push(dual.witness);
            added = true;
        }
        if !added || (s - sf) <= 1e-10 * s {
            break;
        }
    }
    Ok((best.0, best.1, exact))
}

/// Derivative-free minimization of the (scale-invariant) multiplication
/// norm over the direction of `u`.
fn direct_search(problem: &mut PairProblem<'_>, cfg: &SolverConfig) -> Result<RawPair> {
    let cod = problem.op.codomain();
    let r = problem.r;
    let k = problem.active.len();
    let mut light = problem.budget.clone();
    light.starts = light.starts.min(6);
    light.refine_iters = light.refine_iters.min(30);
    let objective = |u: &[f64]| -> f64 {
        if u.iter().any(|v| *v <= 0.0) {
            return f64::NEG_INFINITY;
        }
        let Ok((s, _, _)) = best_scale(problem, u, &light) else { return f64::NEG_INFINITY };
        let g: Vec<f64> = problem.omega2_from(u).iter().map(|w| w.powf(1.0 / r)).collect();
        let Ok((norm, _)) = multiplication_norm(cod.space(), cod.measure(), &g, r, &light, STREAM_NORM) else {
            return f64::NEG_INFINITY;
        };
        -(r * norm.ln() - s.ln())
    };
    let opts = AscentOptions { sweeps: cfg.search.refine_iters.clamp(1, 40), ..Default::default() };
    let (u, _) = coordinate_ascent(vec![1.0; k], objective, opts);
    let (s, w, exact) = best_scale(problem, &u, &problem.budget)?;
    problem.exact &= exact;
    let u: Vec<f64> = u.iter().map(|v| v * s).collect();
    Ok(RawPair {
        omega2: problem.omega2_from(&u),
        w: (!problem.dirac).then_some(w),
        metadata: SolverMetadata {
            method: "direct-search".into(),
            seed: cfg.seed,
            iterations: opts.sweeps,
            gap: None,
            exact_oracle: problem.exact,
        },
    })
}

fn constant_used(registered: Option<f64>, estimate: impl FnOnce() -> Result<f64>) -> Result<ConstantUsed> {
    Ok(match registered {
        Some(value) => ConstantUsed { value, status: BoundStatus::Exact },
        None => ConstantUsed { value: estimate()?, status: BoundStatus::LowerBound },
    })
}

/// `M^(r)(X)` for the domain representation (1 for a Dirac domain).
pub(crate) fn domain_convexity(op: &OperatorSpec, r: f64, budget: &SearchBudget) -> Result<ConstantUsed> {
    let dom = op.domain();
    if dom.kind() == RepresentationKind::B {
        return Ok(ConstantUsed { value: 1.0, status: BoundStatus::Exact });
    }
    constant_used(dom.space().registered_convexity(r, dom.measure().len()), || {
        Ok(estimate_space_constant(dom.space(), dom.measure(), r, ConstantKind::Convexity, budget)?.value)
    })
}

/// `M_(r)(Y)` for the codomain representation.
pub(crate) fn codomain_concavity(op: &OperatorSpec, r: f64, budget: &SearchBudget) -> Result<ConstantUsed> {
    let cod = op.codomain();
    constant_used(cod.space().registered_concavity(r, cod.measure().len()), || {
        let mut b = budget.clone();
        b.seed ^= STREAM_CONSTANT;
        Ok(estimate_space_constant(cod.space(), cod.measure(), r, ConstantKind::Concavity, &b)?.value)
    })
}

/// `sup_{‖x‖_X ≤ 1} (∫|x|^r ω₁ dμ)^{1/r}`.
pub(crate) fn domain_norm(op: &OperatorSpec, omega1: Option<&[f64]>, r: f64, budget: &SearchBudget) -> Result<(f64, Separation)> {
    let dom = op.domain();
    match omega1 {
        None => Ok((1.0, Separation { value: 1.0, witness: vec![1.0], exact: true })),
        Some(w) => {
            let sep = lattice_dual_sup(dom.space(), dom.measure(), w, r, budget, STREAM_DUAL)?;
            Ok((sep.value.powf(1.0 / r), sep))
        }
    }
}

/// Worst domination ratio `∫|ψ(Tx)|^r/ω₂ dν / ∫|φ(x)|^r ω₁ dμ`; `+∞` when
/// some `ω₂_i = 0` on an atom reached by `T`.
pub(crate) fn domination_check(
    op: &OperatorSpec,
    r: f64,
    omega2: &[f64],
    omega1: Option<&[f64]>,
    budget: &SearchBudget,
    hints: &[Vec<f64>],
) -> Result<Separation> {
    let nu = op.codomain().measure().weights();
    let active = op.active_codomain_atoms();
    if let Some(i) = (0..nu.len()).find(|&i| active[i] && omega2[i] <= 0.0) {
        let n = op.input_dim();
        let witness = (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            })
            .find(|e| op.psi(e).map(|v| v[i] > 0.0).unwrap_or(false))
            .unwrap_or_else(|| vec![1.0; n]);
        return Ok(Separation { value: f64::INFINITY, witness, exact: true });
    }
    let c: Vec<f64> = nu.iter().zip(omega2).map(|(v, w)| if *w > 0.0 { v / w } else { 0.0 }).collect();
    let d: Vec<f64> = match omega1 {
        None => vec![1.0],
        Some(w) => op.domain().measure().weights().iter().zip(w).map(|(m, w)| m * w).collect(),
    };
    domination_ratio(op, r, Numerator::Weighted(&c), &d, budget, STREAM_DOMINATION ^ 0xff, hints)
}

/// Rescales a raw pair by `M^(r)(X)^r`, recomputes every recorded bound and
/// checks the multiplication bound against `C · M_(r)(Y)`.
pub(crate) fn finalize(op: &OperatorSpec, r: f64, c: f64, raw: RawPair, cfg: &SolverConfig, hints: &[Vec<f64>]) -> Result<WeightCertificate> {
    let budget = cfg.budget();
    let mx = domain_convexity(op, r, &budget)?;
    let my = codomain_concavity(op, r, &budget)?;
    let scale = mx.value.powf(r);
    let omega1 = raw.w.map(|w| w.iter().map(|v| v * scale).collect::<Vec<f64>>());
    let omega2: Vec<f64> = raw.omega2.iter().map(|v| v / scale).collect();
    let cod = op.codomain();
    let g: Vec<f64> = omega2.iter().map(|w| w.powf(1.0 / r)).collect();
    let (mult, _) = multiplication_norm(cod.space(), cod.measure(), &g, r, &budget, STREAM_NORM)?;
    let (dnorm, _) = domain_norm(op, omega1.as_deref(), r, &budget)?;
    let sep = domination_check(op, r, &omega2, omega1.as_deref(), &budget, hints)?;
    let residual = (sep.value - 1.0).max(0.0);
    let bound = c * my.value;
    if mult > bound * (1.0 + cfg.tolerance) {
        let excess = (mult / bound).powf(r);
        return Err(Error::Infeasible(Box::new(Infeasibility {
            constant: c,
            required: Some(mult / my.value),
            best_residual: sep.value.max(1.0) * excess - 1.0,
            witness: sep.witness,
            message: format!(
                "minimal multiplication norm {mult:.9} exceeds C·M_(r)(Y) = {bound:.9}; weights meeting the bound violate the domination"
            ),
        })));
    }
    Ok(WeightCertificate {
        r,
        constant: c,
        omega2,
        omega1,
        multiplication_norm: mult,
        domain_norm: dnorm,
        codomain_concavity: my,
        domain_convexity: mx,
        residual,
        metadata: raw.metadata,
    })
}

/// Codomain weight `ω₂` and domain weight `ω₁` minimizing the codomain
/// multiplication norm, for an operator satisfying the vector-valued
/// inequality with constant `c`.
///
/// Returns [`Error::Infeasible`] when the minimal multiplication norm
/// exceeds `c · M_(r)(Y)`, which means `c` is below the operator's true
/// constant.
pub fn solve_weight_pair(op: &OperatorSpec, r: f64, c: f64, cfg: &SolverConfig) -> Result<WeightCertificate> {
    check_inputs(r, c)?;
    let mut problem = PairProblem::new(op, r, cfg)?;
    if problem.active.is_empty() {
        let raw = RawPair {
            omega2: vec![0.0; problem.nu.len()],
            w: (!problem.dirac).then(|| vec![0.0; problem.mu.len()]),
            metadata: SolverMetadata { method: "zero".into(), seed: cfg.seed, iterations: 0, gap: Some(0.0), exact_oracle: true },
        };
        return finalize(op, r, c, raw, cfg, &[]);
    }
    let raw = match op.codomain().space().as_lp() {
        Some(p) => cutting_plane(&mut problem, p, cfg)?,
        None => direct_search(&mut problem, cfg)?,
    };
    let hints: Vec<Vec<f64>> = problem.cuts.iter().rev().take(8).cloned().collect();
    finalize(op, r, c, raw, cfg, &hints)
}

/// `‖ω^{1/r}‖_{L_s(ν)}`, `1/s = 1/p − 1/r`: the multiplication norm
/// `L_r(ν) → L_p(ν)` for `p < r`.
pub fn lp_multiplication_norm(nu: &[f64], omega: &[f64], p: f64, r: f64) -> f64 {
    let g: Vec<f64> = omega.iter().map(|w| w.powf(1.0 / r)).collect();
    lp_norm(nu, &g, 1.0 / (1.0 / p - 1.0 / r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::DiscreteMeasure;
    use crate::space::SpaceDescriptor;
    use crate::vectorvalued::{Representation, VectorNorm};

    fn real_line_into_l1() -> OperatorSpec {
        let dom = Representation::dirac(VectorNorm::Euclidean, 1).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(2)).unwrap();
        OperatorSpec::matrix(&[vec![1.0], vec![1.0]], dom, cod).unwrap()
    }

    #[test]
    fn real_line_example() {
        let cert = solve_weight_pair(&real_line_into_l1(), 2.0, 2.0, &SolverConfig::default()).unwrap();
        for w in &cert.omega2 {
            assert!((w - 2.0).abs() < 1e-6, "{:?}", cert.omega2);
        }
        assert!((cert.multiplication_norm - 2.0).abs() < 1e-6);
        assert!(cert.residual < 1e-9);
    }

    #[test]
    fn too_small_constant_is_infeasible() {
        match solve_weight_pair(&real_line_into_l1(), 2.0, 1.5, &SolverConfig::default()) {
            Err(Error::Infeasible(info)) => {
                assert!(info.best_residual > 0.0);
                assert!((info.required.unwrap() - 2.0).abs() < 1e-6);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn identity_on_l2_gives_constant_weight() {
        let rep = Representation::identity(SpaceDescriptor::lp(2.0), DiscreteMeasure::counting(3)).unwrap();
        let op = OperatorSpec::matrix(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], rep.clone(), rep).unwrap();
        let cert = solve_weight_pair(&op, 2.0, 1.0, &SolverConfig::default()).unwrap();
        let w1 = cert.omega1.as_ref().unwrap();
        for (a, b) in cert.omega2.iter().zip(w1) {
            assert!((a * b - 1.0).abs() < 1e-6, "{:?} {:?}", cert.omega2, w1);
        }
        assert!(cert.multiplication_norm <= 1.0 + 1e-6);
    }

    #[test]
    fn zero_operator() {
        let dom = Representation::dirac(VectorNorm::Euclidean, 2).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(2)).unwrap();
        let op = OperatorSpec::matrix(&[vec![0.0, 0.0], vec![0.0, 0.0]], dom, cod).unwrap();
        let cert = solve_weight_pair(&op, 2.0, 1.0, &SolverConfig::default()).unwrap();
        assert_eq!(cert.omega2, vec![0.0, 0.0]);
    }
}
