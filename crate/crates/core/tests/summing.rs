use kothe::measure::DiscreteMeasure;
use kothe::operator::{FormSpec, OperatorSpec};
use kothe::oracles::{minimax_grid_oracle, pietsch_grid_oracle};
use kothe::solvers::{solve_minimax, solve_pietsch, SolverConfig};
use kothe::space::SpaceDescriptor;
use kothe::vectorvalued::Representation;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn linf(n: usize) -> Representation {
    Representation::identity(SpaceDescriptor::lp(f64::INFINITY), DiscreteMeasure::counting(n)).unwrap()
}

fn l2(n: usize) -> Representation {
    Representation::identity(SpaceDescriptor::lp(2.0), DiscreteMeasure::counting(n)).unwrap()
}

fn random_rows(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Vec<f64>> {
    (0..m).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

fn sampled_residual(rows: &[Vec<f64>], lambda: &[f64], pi: f64, rng: &mut ChaCha8Rng) -> f64 {
    let n = lambda.len();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..20_000 {
        let x: Vec<f64> = if k < 1 << n { (0..n).map(|j| if k >> j & 1 == 1 { -1.0 } else { 1.0 }).collect() } else { (0..n).map(|_| rng.random_range(-1.0..1.0)).collect() };
        let lhs: f64 = rows.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum();
        let rhs: f64 = pi * pi * lambda.iter().zip(&x).map(|(l, v)| l * v * v).sum::<f64>();
        worst = worst.max(lhs - rhs);
    }
    worst
}

#[test]
fn random_three_by_five_pietsch() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let rows = random_rows(&mut rng, 3, 5);
        let op = OperatorSpec::matrix(&rows, linf(5), l2(3)).unwrap();
        let probe = solve_pietsch(&op, 2.0, 1e6, &SolverConfig::default()).unwrap();
        let cert = solve_pietsch(&op, 2.0, probe.optimal_constant, &SolverConfig::default()).unwrap();
        assert!(cert.residual <= 1e-6, "residual {}", cert.residual);
        let total: f64 = cert.lambda.iter().sum();
        assert!((total - 1.0).abs() <= 1e-12 && cert.lambda.iter().all(|l| *l >= 0.0));
        assert!(sampled_residual(&rows, &cert.lambda, cert.constant, &mut rng) <= 1e-6);
    }
}

#[test]
fn pietsch_matches_grid_oracle_on_two_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let rows = random_rows(&mut rng, 3, 2);
        let op = OperatorSpec::matrix(&rows, linf(2), l2(3)).unwrap();
        let cert = solve_pietsch(&op, 2.0, 1e6, &SolverConfig::default()).unwrap();
        let t = DMatrix::from_row_iterator(3, 2, rows.iter().flatten().copied());
        let grid = pietsch_grid_oracle(&t, 2.0, 2.0, 400).unwrap();
        assert!((cert.optimal_constant - grid.pi).abs() <= 0.01 * grid.pi, "{} vs {}", cert.optimal_constant, grid.pi);
    }
}

#[test]
fn pietsch_weights_follow_coordinate_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rows = random_rows(&mut rng, 3, 4);
    let sigma = [2, 0, 3, 1];
    let permuted: Vec<Vec<f64>> = rows.iter().map(|row| (0..4).map(|k| row[sigma[k]]).collect()).collect();
    let cfg = SolverConfig::default().with_seed(9);
    let a = solve_pietsch(&OperatorSpec::matrix(&rows, linf(4), l2(3)).unwrap(), 2.0, 1e6, &cfg).unwrap();
    let b = solve_pietsch(&OperatorSpec::matrix(&permuted, linf(4), l2(3)).unwrap(), 2.0, 1e6, &cfg).unwrap();
    for k in 0..4 {
        assert!((b.lambda[k] - a.lambda[sigma[k]]).abs() <= 1e-7, "{:?} vs {:?}", a.lambda, b.lambda);
    }
}

#[test]
fn pairing_form_certificate_agrees_with_grid() {
    let form = FormSpec::bilinear(DMatrix::identity(2, 2), l2(2), l2(2), 2.0, 2.0).unwrap();
    let cert = solve_minimax(&form, [1.0, 1.0], &SolverConfig::default()).unwrap();
    assert!(cert.margin1 >= -1e-6 && cert.margin2 >= -1e-6 && cert.form_margin >= -1e-6);
    assert!(cert.metadata.iterations <= 500);
    let grid = minimax_grid_oracle(&form, [1.0, 1.0], 1.0, 11, 32, 1e-12).unwrap();
    let (p1, p2) = grid.example.unwrap();
    for (a, b) in cert.phi1.iter().chain(&cert.phi2).zip(p1.iter().chain(&p2)) {
        assert!((a - b).abs() <= 1e-6);
    }
}

#[test]
fn rescaled_form_needs_larger_constants() {
    let form = FormSpec::bilinear(DMatrix::identity(2, 2) * 2.0, l2(2), l2(2), 2.0, 2.0).unwrap();
    assert!(solve_minimax(&form, [1.0, 1.0], &SolverConfig::default()).is_err());
    let cert = solve_minimax(&form, [2f64.sqrt(), 2f64.sqrt()], &SolverConfig::default()).unwrap();
    assert!(cert.form_margin >= -1e-6);
}

#[test]
fn one_summing_weights_match_grid_oracle() {
    let l1 = |n: usize| Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::counting(n)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let rows = random_rows(&mut rng, 2, 2);
        let op = OperatorSpec::matrix(&rows, linf(2), l1(2)).unwrap();
        let cert = solve_pietsch(&op, 1.0, 1e6, &SolverConfig::default()).unwrap();
        let t = DMatrix::from_row_iterator(2, 2, rows.iter().flatten().copied());
        let grid = pietsch_grid_oracle(&t, 1.0, 1.0, 400).unwrap();
        assert!((cert.optimal_constant - grid.pi).abs() <= 0.01 * grid.pi, "{} vs {}", cert.optimal_constant, grid.pi);
        let sum = vec![vec![1.0, 1.0]];
        let functional = OperatorSpec::matrix(&sum, linf(2), l1(1)).unwrap();
        let cert = solve_pietsch(&functional, 1.0, 2.0, &SolverConfig::default()).unwrap();
        assert!((cert.optimal_constant - 2.0).abs() < 1e-9 && cert.residual <= 1e-9);
    }
}
