//! Brute-force ground truth at desk scale. Nothing here calls into the
//! solvers or the constant estimators.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::constants::ConstantKind;
use crate::error::{Error, Result};
use crate::measure::{pow_abs, DiscreteMeasure};
use crate::operator::OperatorSpec;
use crate::space::SpaceDescriptor;
use crate::vectorvalued::RepresentationKind;

/// A tensor grid: variable `i` takes `steps[i]` equally spaced values in
/// `ranges[i]` (endpoints included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub ranges: Vec<(f64, f64)>,
    pub steps: Vec<usize>,
    pub cap: u128,
}

impl GridSpec {
    pub const DEFAULT_CAP: u128 = 50_000_000;

    pub fn new(ranges: Vec<(f64, f64)>, steps: Vec<usize>) -> Result<Self> {
        Self::with_cap(ranges, steps, Self::DEFAULT_CAP)
    }

    pub fn uniform(vars: usize, range: (f64, f64), steps: usize) -> Result<Self> {
        Self::new(vec![range; vars], vec![steps; vars])
    }

    pub fn with_cap(ranges: Vec<(f64, f64)>, steps: Vec<usize>, cap: u128) -> Result<Self> {
        if ranges.len() != steps.len() {
            return Err(Error::DimensionMismatch { expected: ranges.len(), got: steps.len() });
        }
        if steps.contains(&0) || ranges.iter().any(|(a, b)| !(a.is_finite() && b.is_finite() && a <= b)) {
            return Err(Error::Unsupported("grid ranges must be finite and nonempty".into()));
        }
        let grid = Self { ranges, steps, cap };
        let points = grid.points();
        if points > cap {
            return Err(Error::GridCap { points, cap });
        }
        Ok(grid)
    }

    pub fn points(&self) -> u128 {
        self.steps.iter().map(|s| *s as u128).product()
    }

    fn value(&self, var: usize, k: usize) -> f64 {
        let (a, b) = self.ranges[var];
        if self.steps[var] == 1 {
            a
        } else {
            a + (b - a) * k as f64 / (self.steps[var] - 1) as f64
        }
    }

    /// Visits every grid point in lexicographic order.
    pub fn for_each(&self, mut f: impl FnMut(&[f64])) {
        let d = self.steps.len();
        let mut idx = vec![0usize; d];
        let mut point: Vec<f64> = (0..d).map(|i| self.value(i, 0)).collect();
        loop {
            f(&point);
            let mut i = d;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < self.steps[i] {
                    point[i] = self.value(i, idx[i]);
                    break;
                }
                idx[i] = 0;
                point[i] = self.value(i, 0);
            }
        }
    }
}

/// Directions on the unit sphere of `ℝ^n` (`n ≤ 3`), up to sign.
fn sphere_grid(n: usize, resolution: usize) -> Result<Vec<Vec<f64>>> {
    use std::f64::consts::PI;
    Ok(match n {
        1 => vec![vec![1.0]],
        2 => (0..resolution).map(|k| {
            let a = PI * k as f64 / resolution as f64;
            vec![a.cos(), a.sin()]
        })
        .collect(),
        3 => {
            let mut out = Vec::new();
            for i in 0..=resolution / 2 {
                let theta = PI * i as f64 / resolution as f64;
                for k in 0..resolution {
                    let phi = 2.0 * PI * k as f64 / resolution as f64;
                    out.push(vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
                }
            }
            out
        }
        _ => return Err(Error::Unsupported(format!("sphere grid needs dimension ≤ 3, got {n}"))),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteWeightResult {
    pub feasible: bool,
    /// The feasible grid weight with the smallest multiplication norm.
    pub omega: Option<Vec<f64>>,
    pub multiplication_norm: f64,
    /// `C · M_(r)(Y)`.
    pub bound: f64,
    pub points_scanned: u128,
}

/// `‖ω^{1/r}‖` as a multiplication `L_r(ν) → L_p(ν)`, computed directly.
fn lp_multiplier(nu: &[f64], omega: &[f64], p: f64, r: f64) -> f64 {
    if p < r {
        let s = p * r / (r - p);
        nu.iter().zip(omega).map(|(v, w)| v * w.powf(s / r)).sum::<f64>().powf(1.0 / s)
    } else {
        let e = if p.is_infinite() { -1.0 / r } else { 1.0 / p - 1.0 / r };
        nu.iter().zip(omega).map(|(v, w)| w.powf(1.0 / r) * v.powf(e)).fold(0.0, f64::max)
    }
}

/// Exhaustive scan over codomain weights `ω` for a Dirac domain of
/// dimension ≤ 3 and a codomain `L_p(ν)` with at most 4 atoms. Domination
/// `Σ ν_i |Tx|_i^r / ω_i ≤ ‖x‖^r` is checked on a sphere grid of
/// `sphere_resolution` directions per angle.
pub fn brute_weight_search(op: &OperatorSpec, r: f64, c: f64, grid: &GridSpec, sphere_resolution: usize) -> Result<BruteWeightResult> {
    let dom = op.domain();
    let cod = op.codomain();
    if dom.kind() != RepresentationKind::B {
        return Err(Error::Unsupported("brute weight search needs a Dirac domain".into()));
    }
    let Some(p) = cod.space().as_lp() else {
        return Err(Error::Unsupported("brute weight search needs an L_p codomain".into()));
    };
    let nu = cod.measure().weights();
    if nu.len() > 4 {
        return Err(Error::Unsupported(format!("codomain has {} atoms; the oracle handles ≤ 4", nu.len())));
    }
    let m_conc = cod
        .space()
        .registered_concavity(r, nu.len())
        .ok_or_else(|| Error::Unsupported("codomain concavity constant is not registered".into()))?;
    let bound = c * m_conc;
    let dirs = sphere_grid(op.input_dim(), sphere_resolution)?;
    // Columns: |ψ(Tx)|^r / ‖x‖^r per direction.
    let mut profile = Vec::with_capacity(dirs.len());
    for x in &dirs {
        let norm = dom.norm(x)?;
        let psi = op.psi(x)?;
        profile.push(psi.iter().map(|v| pow_abs(*v, r) / pow_abs(norm, r)).collect::<Vec<f64>>());
    }
    let feasible_at = |omega: &[f64]| {
        profile.iter().all(|col| {
            let lhs: f64 = (0..nu.len()).map(|i| if col[i] == 0.0 { 0.0 } else { nu[i] * col[i] / omega[i] }).sum();
            lhs <= 1.0 + 1e-12
        })
    };
    if nu.len() == 1 {
        let need = profile.iter().map(|col| nu[0] * col[0]).fold(0.0, f64::max);
        let (mut lo, mut hi) = (0.0, need.max(1e-300) * 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if feasible_at(&[mid]) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let norm = lp_multiplier(nu, &[hi], p, r);
        return Ok(BruteWeightResult { feasible: norm <= bound * (1.0 + 1e-9), omega: Some(vec![hi]), multiplication_norm: norm, bound, points_scanned: 200 });
    }
    if grid.ranges.len() != nu.len() {
        return Err(Error::DimensionMismatch { expected: nu.len(), got: grid.ranges.len() });
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    grid.for_each(|omega| {
        if omega.iter().any(|w| *w <= 0.0) || !feasible_at(omega) {
            return;
        }
        let norm = lp_multiplier(nu, omega, p, r);
        if best.as_ref().is_none_or(|(b, _)| norm < *b) {
            best = Some((norm, omega.to_vec()));
        }
    });
    Ok(match best {
        Some((norm, omega)) => BruteWeightResult {
            feasible: norm <= bound * (1.0 + 1e-9),
            omega: Some(omega),
            multiplication_norm: norm,
            bound,
            points_scanned: grid.points(),
        },
        None => BruteWeightResult { feasible: false, omega: None, multiplication_norm: f64::INFINITY, bound, points_scanned: grid.points() },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleSearchResult {
    pub ratio: f64,
    pub witness: Vec<Vec<f64>>,
    pub points_scanned: u128,
}

/// Maximum convexity or concavity ratio over all nonnegative tuples on the
/// grid; variable `k·n + i` is the value of the `k`-th vector at atom `i`.
pub fn exhaustive_tuple_search(
    space: &SpaceDescriptor,
    mu: &DiscreteMeasure,
    r: f64,
    kind: ConstantKind,
    tuple_size: usize,
    grid: &GridSpec,
) -> Result<TupleSearchResult> {
    let n = mu.len();
    if n > 3 || tuple_size > 3 || tuple_size == 0 {
        return Err(Error::Unsupported("exhaustive tuple search handles ≤ 3 atoms and tuple size 1..=3".into()));
    }
    if grid.ranges.len() != n * tuple_size {
        return Err(Error::DimensionMismatch { expected: n * tuple_size, got: grid.ranges.len() });
    }
    let mut best = TupleSearchResult { ratio: 0.0, witness: Vec::new(), points_scanned: grid.points() };
    let mut failure = None;
    grid.for_each(|flat| {
        if failure.is_some() {
            return;
        }
        let vectors: Vec<&[f64]> = flat.chunks(n).collect();
        let mut pointwise = vec![0.0; n];
        let mut sum = 0.0;
        for v in &vectors {
            for (acc, x) in pointwise.iter_mut().zip(*v) {
                *acc += x.powf(r);
            }
            match space.norm(mu, v) {
                Ok(norm) => sum += norm.powf(r),
                Err(e) => failure = Some(e),
            }
        }
        let pointwise: Vec<f64> = pointwise.iter().map(|a| a.powf(1.0 / r)).collect();
        let lhs = match space.norm(mu, &pointwise) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let rhs = sum.powf(1.0 / r);
        let ratio = match kind {
            ConstantKind::Convexity if rhs > 0.0 => lhs / rhs,
            ConstantKind::Concavity if lhs > 0.0 => rhs / lhs,
            _ => return,
        };
        if ratio > best.ratio {
            best.ratio = ratio;
            best.witness = vectors.iter().map(|v| v.to_vec()).collect();
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertBracket {
    pub lower: f64,
    pub upper: f64,
    /// Codomain weight attaining `upper`.
    pub omega: Vec<f64>,
    /// Whether `upper ≤ C`.
    pub feasible: bool,
    pub iterations: usize,
}

fn lambda_max(m: &DMatrix<f64>) -> (f64, nalgebra::DVector<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let (i, v) = eig.eigenvalues.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, v)| if *v > b.1 { (i, *v) } else { b });
    (v, eig.eigenvectors.column(i).into_owned())
}

/// Minimal multiplication norm `‖ω^{1/2}‖: L_2(ν) → L_p(ν)` over codomain
/// weights with `∫ |Tx|² / ω dν ≤ ‖x‖²₂`, for `p < 2` and a Euclidean
/// domain.
///
/// With `u = 1/ω` the constraint is `λ_max(Tᵀ diag(ν u) T) ≤ 1`. Every
/// density matrix `Z` relaxes it to the single linear constraint
/// `Σ ν_i u_i t_iᵀ Z t_i ≤ 1`, whose optimum is explicit; maximizing that
/// lower bound over `Z` (conditional gradient) and rescaling the matching
/// `u` to feasibility gives a two-sided bracket. `C` is only compared with
/// the upper end.
pub fn hilbert_weight_oracle(t: &DMatrix<f64>, p: f64, nu: &[f64], c: f64) -> Result<HilbertBracket> {
    if !(p > 0.0 && p < 2.0) {
        return Err(Error::InvalidExponent { value: p, reason: "the Hilbert oracle needs 0 < p < 2" });
    }
    let (m, n) = t.shape();
    if nu.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: nu.len() });
    }
    if m > 6 || n > 6 {
        return Err(Error::Unsupported(format!("Hilbert oracle handles dimensions ≤ 6, got {m}×{n}")));
    }
    let active: Vec<usize> = (0..m).filter(|&i| t.row(i).iter().any(|v| *v != 0.0)).collect();
    if active.is_empty() {
        return Ok(HilbertBracket { lower: 0.0, upper: 0.0, omega: vec![0.0; m], feasible: true, iterations: 0 });
    }
    let q = p / (2.0 - p);
    let rows: Vec<DMatrix<f64>> = active.iter().map(|&i| t.row(i).transpose() * t.row(i)).collect();
    let nus: Vec<f64> = active.iter().map(|&i| nu[i]).collect();
    let coefficients = |z: &DMatrix<f64>| -> Vec<f64> {
        rows.iter().zip(&nus).map(|(a, v)| v * a.component_mul(z).sum()).collect()
    };
    let s_value = |cs: &[f64]| -> f64 {
        cs.iter().zip(&nus).map(|(c, v)| v.powf(1.0 / (q + 1.0)) * c.max(0.0).powf(q / (q + 1.0))).sum()
    };
    let norm_of = |u: &[f64]| -> f64 { nus.iter().zip(u).map(|(v, u)| v * u.powf(-q)).sum::<f64>().powf(1.0 / (2.0 * q)) };
    let mut z = DMatrix::<f64>::identity(n, n) / n as f64;
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    let mut best_u = vec![1.0; active.len()];
    let mut iterations = 0;
    for it in 0..20_000 {
        iterations = it + 1;
        let cs = coefficients(&z);
        let s = s_value(&cs);
        lower = lower.max(s.powf((q + 1.0) / (2.0 * q)));
        if cs.iter().all(|c| *c > 0.0) {
            let u: Vec<f64> = cs.iter().zip(&nus).map(|(c, v)| (v / c).powf(1.0 / (q + 1.0))).collect();
            let mut a = DMatrix::<f64>::zeros(n, n);
            for ((row, v), ui) in rows.iter().zip(&nus).zip(&u) {
                a += row * (v * ui);
            }
            let (lam, _) = lambda_max(&a);
            let u: Vec<f64> = u.iter().map(|x| x / lam).collect();
            let value = norm_of(&u);
            if value < upper {
                upper = value;
                best_u = u;
            }
        }
        if upper.is_finite() && upper - lower <= 1e-4 * upper {
            break;
        }
        // Conditional gradient step towards the top eigenvector of ∇S.
        let mut grad = DMatrix::<f64>::zeros(n, n);
        for ((row, v), ci) in rows.iter().zip(&nus).zip(&cs) {
            let w = (q / (q + 1.0)) * v.powf(1.0 / (q + 1.0)) * ci.max(1e-300).powf(-1.0 / (q + 1.0)) * v;
            grad += row * w;
        }
        let (_, vec) = lambda_max(&grad);
        let vertex = &vec * vec.transpose();
        let (mut a, mut b) = (0.0, 1.0);
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let eval = |g: f64| s_value(&coefficients(&(&z * (1.0 - g) + &vertex * g)));
        for _ in 0..60 {
            let x1 = b - inv_phi * (b - a);
            let x2 = a + inv_phi * (b - a);
            if eval(x1) < eval(x2) {
                a = x1;
            } else {
                b = x2;
            }
        }
        let gamma = 0.5 * (a + b);
        z = &z * (1.0 - gamma) + &vertex * gamma;
    }
    let mut omega = vec![0.0; m];
    for (k, &i) in active.iter().enumerate() {
        omega[i] = 1.0 / best_u[k];
    }
    Ok(HilbertBracket { lower, upper, omega, feasible: upper <= c, iterations })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PietschGridResult {
    /// `min_λ sup_x ‖Tx‖_{ℓ_p} / (Σ λ_j |x_j|^r)^{1/r}` over the scanned grids.
    pub pi: f64,
    pub lambda: Vec<f64>,
    pub points_scanned: u64,
}

fn cube_faces(n: usize, steps: usize) -> Vec<Vec<f64>> {
    let grid: Vec<f64> = (0..=steps).map(|k| -1.0 + 2.0 * k as f64 / steps as f64).collect();
    let mut out = Vec::new();
    for face in 0..n {
        let free = n - 1;
        let total = grid.len().pow(free as u32);
        for mut code in 0..total {
            let mut x = vec![1.0; n];
            for j in (0..n).filter(|j| *j != face) {
                x[j] = grid[code % grid.len()];
                code /= grid.len();
            }
            out.push(x);
        }
    }
    out
}

/// Grid estimate of the `r`-summing norm of `T: ℓ_∞^N → ℓ_p^m` (`N ≤ 3`):
/// `λ` ranges over a simplex grid with `steps` subdivisions and `x` over a
/// grid on the faces of the cube.
pub fn pietsch_grid_oracle(t: &DMatrix<f64>, p: f64, r: f64, steps: usize) -> Result<PietschGridResult> {
    let n = t.ncols();
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("Pietsch grid oracle handles N ≤ 3, got {n}")));
    }
    let points = n as u128 * (steps as u128 + 1).pow(2 * n as u32 - 2);
    if steps == 0 || points > GridSpec::DEFAULT_CAP {
        return Err(Error::GridCap { points, cap: GridSpec::DEFAULT_CAP });
    }
    let xs = cube_faces(n, steps);
    let targets: Vec<f64> = xs
        .iter()
        .map(|x| {
            let y = t * nalgebra::DVector::from_column_slice(x);
            let norm = if p.is_infinite() {
                y.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            } else {
                y.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
            };
            norm.powf(r)
        })
        .collect();
    let mut lambdas = Vec::new();
    if n == 1 {
        lambdas.push(vec![1.0]);
    }
    for a in (0..=steps).filter(|_| n > 1) {
        for b in 0..=(if n >= 2 { steps - a } else { 0 }) {
            let (la, lb) = (a as f64 / steps as f64, b as f64 / steps as f64);
            match n {
                2 if a + b == steps => lambdas.push(vec![la, lb]),
                3 => lambdas.push(vec![la, lb, 1.0 - la - lb]),
                _ => {}
            }
        }
    }
    let mut best = (f64::INFINITY, vec![0.0; n]);
    let mut scanned = 0u64;
    for lambda in lambdas {
        let mut sup = 0.0f64;
        for (x, target) in xs.iter().zip(&targets) {
            scanned += 1;
            let denom: f64 = lambda.iter().zip(x).map(|(l, v)| l * pow_abs(*v, r)).sum();
            let ratio = if *target == 0.0 { 0.0 } else if denom == 0.0 { f64::INFINITY } else { target / denom };
            sup = sup.max(ratio);
            if sup >= best.0 {
                break;
            }
        }
        if sup < best.0 {
            best = (sup, lambda);
        }
    }
    Ok(PietschGridResult { pi: best.0.powf(1.0 / r), lambda: best.1, points_scanned: scanned })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxGridResult {
    pub feasible_points: u64,
    /// First feasible `(φ₁, φ₂)` in scan order.
    pub example: Option<(Vec<f64>, Vec<f64>)>,
    pub points_scanned: u64,
}

/// Scans densities `(φ₁, φ₂)` on `[0, bound]^{n₁} × [0, bound]^{n₂}` and
/// counts those lying in both dual balls (tested on sampled unit directions)
/// and dominating `u` on all sampled direction pairs up to `slack`.
///
/// Needs at most 2 atoms and input dimension at most 2 on each side.
pub fn minimax_grid_oracle(
    form: &crate::operator::FormSpec,
    constants: [f64; 2],
    bound: f64,
    steps: usize,
    directions: usize,
    slack: f64,
) -> Result<MinimaxGridResult> {
    let sides = [(&form.left, form.r1, constants[0]), (&form.right, form.r2, constants[1])];
    for (rep, _, _) in sides {
        if rep.measure().len() > 2 || rep.input_dim() > 2 {
            return Err(Error::Unsupported("minimax grid oracle handles 2 atoms and 2 inputs per side".into()));
        }
    }
    let n1 = form.left.measure().len();
    let n2 = form.right.measure().len();
    let grid = GridSpec::uniform(n1 + n2, (0.0, bound), steps)?;
    let lattice_dirs = |n: usize| -> Vec<Vec<f64>> {
        if n == 1 {
            return vec![vec![1.0]];
        }
        (0..=directions)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 * k as f64 / directions as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()
    };
    // Powers `μ_j |z_j|^r / (M^r ‖z‖^r)` of unit lattice directions.
    let mut ball_rows: [Vec<Vec<f64>>; 2] = [Vec::new(), Vec::new()];
    for (l, (rep, r, m)) in sides.iter().enumerate() {
        let mu = rep.measure().weights();
        for z in lattice_dirs(mu.len()) {
            let norm = rep.space().norm(rep.measure(), &z)?;
            if norm > 0.0 {
                ball_rows[l].push(z.iter().zip(mu).map(|(v, w)| w * pow_abs(*v, *r) / (m.powf(*r) * norm.powf(*r))).collect());
            }
        }
    }
    let input_dirs = |d: usize| -> Vec<Vec<f64>> {
        if d == 1 {
            return vec![vec![1.0]];
        }
        (0..2 * directions)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / (2 * directions) as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()
    };
    // Per pair: |u|, and the powers μ_j |φ x|_j^r on each side.
    let mut pairs = Vec::new();
    for x in input_dirs(form.left.input_dim()) {
        let px: Vec<f64> = form.left.represent(&x)?.iter().zip(form.left.measure().weights()).map(|(v, w)| w * pow_abs(*v, form.r1)).collect();
        for y in input_dirs(form.right.input_dim()) {
            let u = form.eval(&x, &y).abs();
            if u > 0.0 {
                let py: Vec<f64> = form.right.represent(&y)?.iter().zip(form.right.measure().weights()).map(|(v, w)| w * pow_abs(*v, form.r2)).collect();
                pairs.push((u, px.clone(), py));
            }
        }
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(a, b)| a * b).sum::<f64>();
    let mut result = MinimaxGridResult { feasible_points: 0, example: None, points_scanned: 0 };
    grid.for_each(|point| {
        result.points_scanned += 1;
        let (p1, p2) = point.split_at(n1);
        let in_balls = ball_rows[0].iter().all(|row| dot(row, p1) <= 1.0 + slack) && ball_rows[1].iter().all(|row| dot(row, p2) <= 1.0 + slack);
        if !in_balls {
            return;
        }
        let dominates = pairs.iter().all(|(u, px, py)| {
            *u <= dot(p1, px).powf(1.0 / form.r1) * dot(p2, py).powf(1.0 / form.r2) * (1.0 + slack)
        });
        if dominates {
            result.feasible_points += 1;
            if result.example.is_none() {
                result.example = Some((p1.to_vec(), p2.to_vec()));
            }
        }
    });
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectorvalued::{Representation, VectorNorm};

    #[test]
    fn pietsch_grid_on_identity() {
        let res = pietsch_grid_oracle(&DMatrix::identity(2, 2), 2.0, 2.0, 20).unwrap();
        assert!((res.pi - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(res.lambda, vec![0.5, 0.5]);
    }

    #[test]
    fn minimax_grid_finds_the_unit_densities() {
        let l2 = || Representation::identity(SpaceDescriptor::lp(2.0), DiscreteMeasure::counting(2)).unwrap();
        let form = crate::operator::FormSpec::bilinear(DMatrix::identity(2, 2), l2(), l2(), 2.0, 2.0).unwrap();
        let res = minimax_grid_oracle(&form, [1.0, 1.0], 1.0, 11, 32, 1e-12).unwrap();
        assert_eq!(res.feasible_points, 1);
        assert_eq!(res.example, Some((vec![1.0, 1.0], vec![1.0, 1.0])));
    }

    #[test]
    fn grid_cap_is_enforced() {
        assert!(matches!(GridSpec::with_cap(vec![(0.0, 1.0); 3], vec![100; 3], 1000), Err(Error::GridCap { .. })));
    }

    #[test]
    fn real_line_example_on_grid() {
        let dom = Representation::dirac(VectorNorm::Euclidean, 1).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(2)).unwrap();
        let op = OperatorSpec::matrix(&[vec![1.0], vec![1.0]], dom, cod).unwrap();
        let grid = GridSpec::uniform(2, (0.0, 4.0), 201).unwrap();
        let res = brute_weight_search(&op, 2.0, 2.0, &grid, 1).unwrap();
        let omega = res.omega.unwrap();
        assert!(omega.iter().all(|w| (w - 2.0).abs() <= 0.02), "{omega:?}");
        assert!(res.feasible);
        assert!(!brute_weight_search(&op, 2.0, 1.9, &grid, 1).unwrap().feasible);
    }

    #[test]
    fn hilbert_diagonal_closed_form() {
        // T = diag(d) into L_1: u_i ≤ 1/d_i², so ω = d² and the norm is ‖d‖₂.
        let d = [1.0, 2.0, 0.5];
        let t = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&d));
        let b = hilbert_weight_oracle(&t, 1.0, &[1.0; 3], 10.0).unwrap();
        assert!(b.lower <= b.upper * (1.0 + 1e-12));
        assert!((b.upper - b.lower) <= 0.01 * b.upper);
        let closed = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(b.lower <= closed * (1.0 + 1e-9) && closed <= b.upper * (1.0 + 1e-9), "{b:?} vs {closed}");
    }

    #[test]
    fn hilbert_zero_and_real_line() {
        let zero = hilbert_weight_oracle(&DMatrix::zeros(2, 2), 1.0, &[1.0, 1.0], 1.0).unwrap();
        assert_eq!(zero.upper, 0.0);
        let t = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let b = hilbert_weight_oracle(&t, 1.0, &[1.0, 1.0], 2.0).unwrap();
        assert!((b.upper - 2.0).abs() < 1e-6 && (b.lower - 2.0).abs() < 1e-6, "{b:?}");
    }

    #[test]
    fn tuple_search_l1() {
        let grid = GridSpec::uniform(4, (0.0, 1.0), 11).unwrap();
        let res = exhaustive_tuple_search(&SpaceDescriptor::lp(1.0), &DiscreteMeasure::counting(2), 2.0, ConstantKind::Convexity, 2, &grid).unwrap();
        assert!((res.ratio - 2f64.sqrt()).abs() < 1e-9);
    }
}
