#![allow(dead_code)]

use kothe::measure::DiscreteMeasure;
use kothe::space::SpaceDescriptor;
use kothe::young::YoungFunction;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn exponent(rng: &mut ChaCha8Rng, lo: f64, hi: f64, inf_chance: f64) -> f64 {
    if rng.random_bool(inf_chance) {
        f64::INFINITY
    } else {
        rng.random_range(lo..hi)
    }
}

pub fn measure(rng: &mut ChaCha8Rng, n: usize) -> DiscreteMeasure {
    DiscreteMeasure::new((0..n).map(|_| rng.random_range(0.2..3.0)).collect()).unwrap()
}

/// A random space from one of the concrete families together with a
/// measure of matching size (at most 16 atoms).
pub fn space_and_measure(rng: &mut ChaCha8Rng) -> (SpaceDescriptor, DiscreteMeasure) {
    match rng.random_range(0..4) {
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

pub fn vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random_range(-3.0..3.0) }).collect()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
