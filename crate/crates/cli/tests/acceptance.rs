//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the allowed limit. Runs as a plain binary so the lines are always
//! shown; exits with status 1 if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use kothe::constants::{power_transport, ratio, ConstantKind, TupleWitness};
use kothe::duality::{convexification_norm, sandwich_factor};
use kothe::measure::DiscreteMeasure;
use kothe::operator::{FormSpec, OperatorSpec};
use kothe::oracles::{brute_weight_search, hilbert_weight_oracle, minimax_grid_oracle, GridSpec};
use kothe::search::SearchBudget;
use kothe::solvers::{
    build_factorization_domain, build_factorization_range, solve_minimax, solve_pietsch, solve_weight_domain, solve_weight_pair,
    verify_weight_certificate, DomainWeightCertificate, SolverConfig, WeightCertificate,
};
use kothe::space::{power_space, SpaceDescriptor};
use kothe::vectorvalued::{Representation, VectorNorm};
use kothe::young::YoungFunction;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, Box<dyn FnMut(&mut Certificates) -> Outcome>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn exponent(rng: &mut ChaCha8Rng, lo: f64, hi: f64, inf_chance: f64) -> f64 {
    if rng.random_bool(inf_chance) {
        f64::INFINITY
    } else {
        rng.random_range(lo..hi)
    }
}

fn measure(rng: &mut ChaCha8Rng, n: usize) -> DiscreteMeasure {
    DiscreteMeasure::new((0..n).map(|_| rng.random_range(0.2..3.0)).collect()).unwrap()
}

fn vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random_range(-3.0..3.0) }).collect()
}

/// Lp, mixed, Lorentz or Orlicz on at most 16 atoms.
fn space_and_measure(rng: &mut ChaCha8Rng, family: usize) -> (SpaceDescriptor, DiscreteMeasure) {
    match family % 4 {
        0 => {
            let n = rng.random_range(1..=16);
            (SpaceDescriptor::lp(exponent(rng, 0.3, 6.0, 0.15)), measure(rng, n))
        }
        1 => {
            let (n1, n2) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let (mu1, mu2) = (measure(rng, n1), measure(rng, n2));
            let space = SpaceDescriptor::mixed(exponent(rng, 0.3, 6.0, 0.15), exponent(rng, 0.3, 6.0, 0.15), mu1.clone(), mu2.clone());
            (space, DiscreteMeasure::product(&mu1, &mu2))
        }
        2 => {
            let n = rng.random_range(1..=16);
            (SpaceDescriptor::lorentz(rng.random_range(0.5..5.0), exponent(rng, 0.5, 6.0, 0.15)), measure(rng, n))
        }
        _ => {
            let n = rng.random_range(1..=16);
            let phi = if rng.random_bool(0.5) { YoungFunction::power(rng.random_range(1.0..4.0)) } else { YoungFunction::power_log(rng.random_range(1.0..3.0)) };
            (SpaceDescriptor::orlicz(phi), measure(rng, n))
        }
    }
}

fn power_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for k in 0..500 {
        let (space, mu) = space_and_measure(&mut rng, k);
        let r = rng.random_range(0.25..4.0);
        let x = vector(&mut rng, mu.len());
        let simplified = power_space(&space, r).map_err(|e| e.to_string())?;
        let a = space.clone().power(r).norm(&mu, &x).map_err(|e| e.to_string())?;
        let b = simplified.norm(&mu, &x).map_err(|e| e.to_string())?;
        let d = rel_diff(a, b);
        worst = worst.max(d);
        ensure(d <= 1e-9, || format!("{space}^{r}: {a} vs {b}"))?;
    }
    Ok(format!("500 vectors, worst relative difference {worst:.1e}"))
}

fn transport() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let (space, mu) = space_and_measure(&mut rng, k);
        let r = rng.random_range(0.5..4.0);
        let t = rng.random_range(0.3..3.0);
        let kind = if k % 2 == 0 { ConstantKind::Convexity } else { ConstantKind::Concavity };
        let size = rng.random_range(1..=4);
        let vectors = (0..size).map(|_| vector(&mut rng, mu.len()).iter().map(|v| v + 3.5).collect()).collect();
        let tuple = TupleWitness::new(vectors, r, Arc::new(mu)).map_err(|e| e.to_string())?;
        let original = ratio(&space, &tuple, kind).map_err(|e| e.to_string())?;
        let moved_tuple = power_transport(&tuple, t).map_err(|e| e.to_string())?;
        let moved = ratio(&space.clone().power(t), &moved_tuple, kind).map_err(|e| e.to_string())?;
        let d = rel_diff(moved, original.powf(t));
        worst = worst.max(d);
        ensure(d <= 1e-9, || format!("{space}, r = {r}, t = {t}: {moved} vs {}", original.powf(t)))?;
    }
    Ok(format!("200 combinations, worst relative difference {worst:.1e}"))
}

fn holder() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut skipped = 0;
    let mut cases = 0;
    let mut k = 0;
    while cases < 500 {
        k += 1;
        let (space, mu) = space_and_measure(&mut rng, k);
        if matches!(space, SpaceDescriptor::Lorentz { p, q } if q > p) {
            skipped += 1;
            continue;
        }
        cases += 1;
        let u = rng.random_range(0.05..0.95);
        let (x, y) = (vector(&mut rng, mu.len()), vector(&mut rng, mu.len()));
        let xy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a * b).collect();
        let lhs = space.norm(&mu, &xy).map_err(|e| e.to_string())?;
        let rhs = space.clone().power(u).norm(&mu, &x).map_err(|e| e.to_string())? * space.clone().power(1.0 - u).norm(&mu, &y).map_err(|e| e.to_string())?;
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
        ensure(lhs <= rhs * (1.0 + 1e-9), || format!("{space}, u = {u}: {lhs} > {rhs}"))?;
    }
    Ok(format!("500 cases (Lorentz q > p excluded, {skipped} skipped), worst ratio {worst:.9}"))
}

/// Smallest `Σ ‖z_k‖` over decompositions of `|x|` into `pieces` parts, each
/// atom split on a simplex grid of the given resolution.
fn brute_decomposition(space: &SpaceDescriptor, mu: &DiscreteMeasure, x: &[f64], pieces: usize, steps: usize) -> f64 {
    fn splits(pieces: usize, steps: usize) -> Vec<Vec<usize>> {
        if pieces == 1 {
            return vec![vec![steps]];
        }
        (0..=steps).flat_map(|a| splits(pieces - 1, steps - a).into_iter().map(move |mut rest| {
            rest.insert(0, a);
            rest
        })).collect()
    }
    let shares = splits(pieces, steps);
    let n = x.len();
    let mut best = f64::INFINITY;
    let mut index = vec![0usize; n];
    loop {
        let total: f64 = (0..pieces)
            .map(|k| {
                let z: Vec<f64> = (0..n).map(|i| x[i].abs() * shares[index[i]][k] as f64 / steps as f64).collect();
                space.norm(mu, &z).unwrap()
            })
            .sum();
        best = best.min(total);
        let mut i = 0;
        while i < n {
            index[i] += 1;
            if index[i] < shares.len() {
                break;
            }
            index[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
    }
}

fn sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let base = SpaceDescriptor::lp(1.0);
    let space = power_space(&base, 2.0).map_err(|e| e.to_string())?;
    ensure(space == SpaceDescriptor::lp(0.5), || format!("L1 squared simplified to {space}"))?;
    let mut widest = 0.0f64;
    for k in 0..12 {
        let n = 2 + k % 2;
        let mu = measure(&mut rng, n);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let enc = convexification_norm(&space, &mu, &x, &SearchBudget::default()).map_err(|e| e.to_string())?;
        let brute = brute_decomposition(&space, &mu, &x, n, if n == 2 { 200 } else { 10 });
        ensure(enc.lower <= brute * (1.0 + 1e-9) && brute <= enc.value * (1.0 + 1e-9) + 1e-12, || {
            format!("enclosure [{}, {}] misses brute force {brute}", enc.lower, enc.value)
        })?;
        ensure(rel_diff(enc.value, brute) <= 1e-6, || format!("enclosure top {} vs brute force {brute}", enc.value))?;
        let quasi = space.norm(&mu, &x).map_err(|e| e.to_string())?;
        let factor = sandwich_factor(&base, 2.0, n).ok_or("no registered sandwich factor")?;
        ensure(factor * quasi <= enc.value * (1.0 + 1e-9) && enc.value <= quasi * (1.0 + 1e-9), || {
            format!("sandwich {} ≤ {} ≤ {quasi} fails", factor * quasi, enc.value)
        })?;
        widest = widest.max(enc.value - enc.lower);
    }
    Ok(format!("12 vectors on 2–3 atoms, widest enclosure {widest:.1e}"))
}

struct Certificates {
    two_sided: Vec<(WeightCertificate, OperatorSpec)>,
    domain: Vec<(DomainWeightCertificate, OperatorSpec)>,
}

fn real_line_into_l1() -> OperatorSpec {
    let dom = Representation::dirac(VectorNorm::Euclidean, 1).unwrap();
    let cod = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(2)).unwrap();
    OperatorSpec::matrix(&[vec![1.0], vec![1.0]], dom, cod).unwrap()
}

fn weight_solver(out: &mut Certificates) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = SolverConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (m, n) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let t = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
        let nu: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..2.0)).collect();
        let dom = Representation::dirac(VectorNorm::Euclidean, n).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::new(nu.clone()).unwrap()).unwrap();
        let op = OperatorSpec::from_matrix(t.clone(), dom, cod).map_err(|e| e.to_string())?;
        let oracle = hilbert_weight_oracle(&t, 1.0, &nu, 1e6).map_err(|e| e.to_string())?;
        let cert = solve_weight_pair(&op, 2.0, oracle.upper * 1.01 + 1e-12, &cfg).map_err(|e| e.to_string())?;
        let norm = cert.multiplication_norm;
        ensure(norm >= oracle.lower * 0.98 && norm <= oracle.upper * 1.02, || format!("{norm} outside [{}, {}]", oracle.lower, oracle.upper))?;
        let report = verify_weight_certificate(&cert, &op, &cfg).map_err(|e| e.to_string())?;
        ensure(report.passed() && report.domination_residual <= 1e-6, || format!("verification failed: {report:?}"))?;
        worst = worst.max(report.domination_residual);
        out.two_sided.push((cert, op));
    }
    let op = real_line_into_l1();
    let cert = solve_weight_pair(&op, 2.0, 2.0, &cfg).map_err(|e| e.to_string())?;
    let grid = GridSpec::uniform(2, (0.0, 4.0), 81).map_err(|e| e.to_string())?;
    let brute = brute_weight_search(&op, 2.0, 2.0, &grid, 64).map_err(|e| e.to_string())?;
    let omega = brute.omega.ok_or("grid search found no feasible weight")?;
    let step = 4.0 / 80.0;
    for (a, b) in cert.omega2.iter().zip(&omega) {
        ensure((a - 2.0).abs() <= 1e-6 && (b - 2.0).abs() <= step, || format!("ω = {:?}, grid ω = {omega:?}", cert.omega2))?;
    }
    out.two_sided.push((cert, op));
    Ok(format!("20 instances within 2% of the bracket, worst residual {worst:.1e}; ω = (2, 2)"))
}

/// `(‖(Σ|ψ(Tx_k)|^r)^{1/r}‖_Y, ‖(Σ|φ(x_k)|^r)^{1/r}‖_X)`, recomputed from the representations.
fn vector_valued_sides(op: &OperatorSpec, r: f64, tuple: &[Vec<f64>]) -> (f64, f64) {
    let side = |rep: &Representation, inputs: &mut dyn Iterator<Item = Vec<f64>>| {
        let mut acc = vec![0.0; rep.measure().len()];
        for v in inputs {
            for (a, b) in acc.iter_mut().zip(rep.represent_abs(&v).unwrap()) {
                *a += b.powf(r);
            }
        }
        let root: Vec<f64> = acc.iter().map(|a| a.powf(1.0 / r)).collect();
        rep.space().norm(rep.measure(), &root).unwrap()
    };
    let lhs = side(op.codomain(), &mut tuple.iter().map(|x| op.apply(x)));
    let rhs = side(op.domain(), &mut tuple.iter().cloned());
    (lhs, rhs)
}

fn reverse_implication(out: &mut Certificates) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = SolverConfig::default();
    for _ in 0..6 {
        let (m, n) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let p = [1.0, 1.5][rng.random_range(0..2)];
        let dom = Representation::identity(SpaceDescriptor::lp(2.0), measure(&mut rng, n)).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(p), measure(&mut rng, m)).unwrap();
        let op = OperatorSpec::matrix(&rows, dom, cod).map_err(|e| e.to_string())?;
        let probe = solve_weight_pair(&op, 2.0, 1e6, &cfg).map_err(|e| e.to_string())?;
        let c = probe.multiplication_norm / probe.codomain_concavity.value * 1.001 + 1e-9;
        out.two_sided.push((solve_weight_pair(&op, 2.0, c, &cfg).map_err(|e| e.to_string())?, op));
    }
    for k in 0..6 {
        let (m, n) = (rng.random_range(1..=3), rng.random_range(2..=3));
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let r = [1.0, 2.0][k % 2];
        let p = if rng.random_bool(0.5) { f64::INFINITY } else { rng.random_range(r..6.0) };
        let dom = Representation::identity(SpaceDescriptor::lp(p), measure(&mut rng, n)).unwrap();
        let cod = Representation::dirac(VectorNorm::Euclidean, m).unwrap();
        let op = OperatorSpec::matrix(&rows, dom, cod).map_err(|e| e.to_string())?;
        let probe = solve_weight_domain(&op, r, 1e6, &cfg).map_err(|e| e.to_string())?;
        let c = probe.domain_norm * 1.001 + 1e-9;
        out.domain.push((solve_weight_domain(&op, r, c, &cfg).map_err(|e| e.to_string())?, op));
    }

    let mut tuples = 0;
    let mut worst = 0.0f64;
    let mut check = |op: &OperatorSpec, r: f64, bound: f64, rng: &mut ChaCha8Rng| -> Result<(), String> {
        for i in 0..100 {
            let size = 1 + i % 5;
            let tuple: Vec<Vec<f64>> = (0..size).map(|_| (0..op.input_dim()).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let (lhs, rhs) = vector_valued_sides(op, r, &tuple);
            tuples += 1;
            if rhs > 0.0 {
                worst = worst.max(lhs / (bound * rhs));
            }
            ensure(lhs <= bound * rhs * (1.0 + 1e-6), || format!("{lhs} > {bound} · {rhs}"))?;
        }
        Ok(())
    };
    for (cert, op) in &out.two_sided {
        check(op, cert.r, cert.multiplication_bound() * cert.domain_bound(), &mut rng)?;
    }
    for (cert, op) in &out.domain {
        check(op, cert.r, cert.constant, &mut rng)?;
    }
    Ok(format!("{} certificates, {tuples} tuples, worst ratio to the bound {worst:.6}", out.two_sided.len() + out.domain.len()))
}

fn pietsch() -> Outcome {
    let linf = |n: usize| Representation::identity(SpaceDescriptor::lp(f64::INFINITY), DiscreteMeasure::counting(n)).unwrap();
    let l2 = |n: usize| Representation::identity(SpaceDescriptor::lp(2.0), DiscreteMeasure::counting(n)).unwrap();
    let cfg = SolverConfig::default();
    let id = OperatorSpec::matrix(&[vec![1.0, 0.0], vec![0.0, 1.0]], linf(2), l2(2)).unwrap();
    let cert = solve_pietsch(&id, 2.0, 2f64.sqrt(), &cfg).map_err(|e| e.to_string())?;
    ensure(cert.lambda.iter().all(|l| (l - 0.5).abs() <= 1e-9) && cert.residual <= 1e-9, || format!("identity: λ = {:?}, residual {}", cert.lambda, cert.residual))?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let rows: Vec<Vec<f64>> = (0..3).map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let op = OperatorSpec::matrix(&rows, linf(5), l2(3)).unwrap();
        let probe = solve_pietsch(&op, 2.0, 1e6, &cfg).map_err(|e| e.to_string())?;
        let cert = solve_pietsch(&op, 2.0, probe.optimal_constant, &cfg).map_err(|e| e.to_string())?;
        let total: f64 = cert.lambda.iter().sum();
        ensure((total - 1.0).abs() <= 1e-12 && cert.lambda.iter().all(|l| *l >= 0.0), || format!("λ = {:?} is not a probability vector", cert.lambda))?;
        let mut sampled = 0.0f64;
        for k in 0..4096 {
            let x: Vec<f64> = if k < 32 { (0..5).map(|j| if k >> j & 1 == 1 { -1.0 } else { 1.0 }).collect() } else { (0..5).map(|_| rng.random_range(-1.0..1.0)).collect() };
            let lhs: f64 = rows.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum();
            let rhs: f64 = cert.constant.powi(2) * cert.lambda.iter().zip(&x).map(|(l, v)| l * v * v).sum::<f64>();
            sampled = sampled.max(lhs - rhs);
        }
        let residual = cert.residual.max(sampled);
        worst = worst.max(residual);
        ensure(residual <= 1e-6, || format!("residual {residual}"))?;
    }
    Ok(format!("identity λ = (½, ½); 10 random 3×5 instances, worst residual {worst:.1e}"))
}

fn factorizations(certs: &Certificates) -> Outcome {
    let mut worst_composition = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let results = certs
        .two_sided
        .iter()
        .map(|(c, op)| build_factorization_range(c, op))
        .chain(certs.domain.iter().map(|(c, op)| build_factorization_domain(c, op)));
    let mut count = 0;
    for f in results {
        let f = f.map_err(|e| e.to_string())?;
        count += 1;
        worst_composition = worst_composition.max(f.composition_residual);
        if f.declared_bound > 0.0 {
            worst_ratio = worst_ratio.max(f.norm_product / f.declared_bound);
        }
        ensure(f.composition_residual <= 1e-9, || format!("composition residual {}", f.composition_residual))?;
        ensure(f.norm_product <= f.declared_bound * (1.0 + 1e-6), || format!("{:?} side: ‖M‖‖R‖ = {} > {}", f.side, f.norm_product, f.declared_bound))?;
    }
    Ok(format!("{count} factorizations, worst composition {worst_composition:.1e}, worst norm product / bound {worst_ratio:.6}"))
}

fn determinism() -> Outcome {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut names: Vec<_> = std::fs::read_dir(&configs).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    names.sort();
    let mut compared = 0;
    for config in names {
        let text = std::fs::read_to_string(&config).map_err(|e| e.to_string())?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let task = value["task"]["type"].as_str().ok_or("config without task type")?;
        let sub = if task == "norm-table" { "norm" } else { task };
        let mut reports = Vec::new();
        for run in ["a", "b"] {
            let out = dir.path().join(format!("{}-{run}", config.file_stem().unwrap().to_string_lossy()));
            Command::new(env!("CARGO_BIN_EXE_kothe"))
                .args([sub, "--quiet", "--config"])
                .arg(&config)
                .arg("--out")
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            reports.push(std::fs::read(out.join("report.json")).map_err(|e| format!("{}: {e}", config.display()))?);
        }
        ensure(reports[0] == reports[1], || format!("{} gave different reports", config.display()))?;
        compared += 1;
    }
    Ok(format!("{compared} example configs, byte-identical reports"))
}

fn minimax() -> Outcome {
    let l2 = Representation::identity(SpaceDescriptor::lp(2.0), DiscreteMeasure::counting(2)).unwrap();
    let form = FormSpec::bilinear(DMatrix::identity(2, 2), l2.clone(), l2, 2.0, 2.0).map_err(|e| e.to_string())?;
    let cert = solve_minimax(&form, [1.0, 1.0], &SolverConfig::default()).map_err(|e| e.to_string())?;
    let worst = cert.margin1.min(cert.margin2).min(cert.form_margin);
    ensure(worst >= -1e-6, || format!("margins {} {} {}", cert.margin1, cert.margin2, cert.form_margin))?;
    ensure(cert.metadata.iterations <= 500, || format!("{} iterations", cert.metadata.iterations))?;
    let grid = minimax_grid_oracle(&form, [1.0, 1.0], 1.0, 11, 32, 1e-12).map_err(|e| e.to_string())?;
    let (p1, p2) = grid.example.ok_or("grid oracle found no feasible pair")?;
    for (a, b) in cert.phi1.iter().chain(&cert.phi2).zip(p1.iter().chain(&p2)) {
        ensure((a - b).abs() <= 1e-6, || format!("φ = {:?}, {:?} vs grid {p1:?}, {p2:?}", cert.phi1, cert.phi2))?;
    }
    Ok(format!("{} iterations, worst margin {worst:.1e}, matches the grid oracle", cert.metadata.iterations))
}

fn main() -> ExitCode {
    let mut certs = Certificates { two_sided: Vec::new(), domain: Vec::new() };
    let mut criteria: Vec<Criterion> = vec![
        ("power identities", Duration::from_secs(5), Box::new(|_| power_identities())),
        ("transport of constants", Duration::from_secs(5), Box::new(|_| transport())),
        ("Hölder product", Duration::from_secs(5), Box::new(|_| holder())),
        ("convexification sandwich", Duration::from_secs(30), Box::new(|_| sandwich())),
        ("weight solver vs oracle", Duration::from_secs(120), Box::new(weight_solver)),
        ("reverse implication", Duration::from_secs(30), Box::new(reverse_implication)),
        ("Pietsch weights", Duration::from_secs(60), Box::new(|_| pietsch())),
        ("factorizations", Duration::from_secs(30), Box::new(|c| factorizations(c))),
        ("CLI determinism", Duration::from_secs(120), Box::new(|_| determinism())),
        ("minimax engine", Duration::from_secs(60), Box::new(|_| minimax())),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter_mut().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut certs))).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > *limit => ("FAIL", "over the time limit".to_string()),
            Ok(detail) => ("PASS", detail),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} {:>2} {name:<26} {:>8.2} s / {:>3} s  {detail}", i + 1, elapsed.as_secs_f64(), limit.as_secs());
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
