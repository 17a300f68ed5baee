use kothe::oracles::hilbert_weight_oracle;
use kothe::solvers::{solve_weight_pair, SolverConfig};
use kothe::vectorvalued::{Representation, VectorNorm};
use kothe::{DiscreteMeasure, SpaceDescriptor};
use kothe::operator::OperatorSpec;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(rng: &mut ChaCha8Rng) -> (DMatrix<f64>, Vec<f64>) {
    let m = rng.random_range(1..=4);
    let n = rng.random_range(1..=4);
    let t = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
    let nu = (0..m).map(|_| rng.random_range(0.2..2.0)).collect();
    (t, nu)
}

#[test]
fn solver_matches_hilbert_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (t, nu) = random_instance(&mut rng);
        let dom = Representation::dirac(VectorNorm::Euclidean, t.ncols()).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(1.0), DiscreteMeasure::new(nu.clone()).unwrap()).unwrap();
        let op = OperatorSpec::from_matrix(t.clone(), dom, cod).unwrap();
        let oracle = hilbert_weight_oracle(&t, 1.0, &nu, 1e6).unwrap();
        let cert = solve_weight_pair(&op, 2.0, oracle.upper * 1.01 + 1e-12, &SolverConfig::default()).unwrap();
        let n = cert.multiplication_norm;
        eprintln!("{}x{} solver {n:.10} oracle [{:.10}, {:.10}] gap {:e} it {}", t.nrows(), t.ncols(), oracle.lower, oracle.upper, cert.metadata.gap.unwrap(), cert.metadata.iterations);
        assert!(n >= oracle.lower * 0.98 && n <= oracle.upper * 1.02);
        assert!(cert.residual <= 1e-6);
    }
}

#[test]
fn scaled_route_agrees_with_direct_route() {
    use kothe::solvers::solve_weight_pair_scaled;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..8 {
        let (t, nu) = random_instance(&mut rng);
        let p = [1.0, 1.5, 0.8][k % 3];
        let dom = Representation::dirac(VectorNorm::Euclidean, t.ncols()).unwrap();
        let cod = Representation::identity(SpaceDescriptor::lp(p), DiscreteMeasure::new(nu).unwrap()).unwrap();
        let op = OperatorSpec::from_matrix(t, dom, cod).unwrap();
        let cfg = SolverConfig::default();
        let direct = solve_weight_pair(&op, 2.0, 1e6, &cfg).unwrap();
        let scaled = solve_weight_pair_scaled(&op, 2.0, 1e6, &cfg).unwrap();
        let rel = (direct.multiplication_norm - scaled.multiplication_norm).abs() / direct.multiplication_norm;
        eprintln!("p={p} direct {:.10} scaled {:.10} rel {rel:e} it {}", direct.multiplication_norm, scaled.multiplication_norm, scaled.metadata.iterations);
        assert!(rel < 1e-8);
        assert!(scaled.residual < 1e-9 && direct.residual < 1e-9);
    }
}
