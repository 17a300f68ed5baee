//! Deterministic multi-start search plumbing shared by the estimators and
//! the adversarial inner searches of the solvers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchBudget {
    /// Random starts per tuple size (deterministic structured starts come on top).
    pub starts: usize,
    /// Coordinate-ascent sweeps per start.
    pub refine_iters: usize,
    pub tuple_sizes: Vec<usize>,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { starts: 24, refine_iters: 60, tuple_sizes: vec![1, 2, 4, 8], seed: 0 }
    }
}

impl SearchBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.starts == 0 && self.refine_iters == 0
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for start `index` of a search seeded with `seed`.
pub fn start_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed ^ stream.rotate_left(32)) ^ index))
}

/// Runs `f` on every start index in parallel; the output order is the index
/// order, so any reduction over it is independent of scheduling.
pub fn par_starts<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// Index of the largest value; ties go to the earliest index, NaN never wins.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some(b) if values[b] >= *v => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Uniform vector in `[0, 1)^n` with a random subset of coordinates zeroed.
pub fn sparse_nonneg(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let keep = rng.random_range(0.3..1.0);
    let mut v: Vec<f64> = (0..n)
        .map(|_| if rng.random::<f64>() < keep { rng.random::<f64>() } else { 0.0 })
        .collect();
    if v.iter().all(|x| *x == 0.0) {
        v[rng.random_range(0..n)] = 1.0;
    }
    v
}

pub fn signed_uniform(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct AscentOptions {
    pub sweeps: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Allow sign changes; otherwise coordinates stay nonnegative.
    pub signed: bool,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self { sweeps: 60, initial_step: 0.5, min_step: 1e-9, signed: false }
    }
}

/// Coordinate ascent on a scale-invariant objective.
///
/// Each sweep tries, per coordinate, a multiplicative move `x_i (1 ± h)`,
/// an additive move `x_i ± h·max|x|`, and zeroing; the step `h` halves after
/// a sweep without improvement. Returns the final point and value.
pub fn coordinate_ascent<F>(mut x: Vec<f64>, f: F, opts: AscentOptions) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = f(&x);
    if best.is_nan() {
        best = f64::NEG_INFINITY;
    }
    let mut step = opts.initial_step;
    for _ in 0..opts.sweeps {
        if step < opts.min_step {
            break;
        }
        let mut improved = false;
        for i in 0..x.len() {
            let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            let old = x[i];
            let mut candidates = [
                old * (1.0 + step),
                old / (1.0 + step),
                old + step * scale,
                old - step * scale,
                0.0,
            ];
            if !opts.signed {
                for c in candidates.iter_mut() {
                    *c = c.max(0.0);
                }
            }
            let mut best_c = old;
            for c in candidates {
                if c == old {
                    continue;
                }
                x[i] = c;
                if x.iter().all(|v| *v == 0.0) {
                    continue;
                }
                let v = f(&x);
                if v > best {
                    best = v;
                    best_c = c;
                    improved = true;
                }
            }
            x[i] = best_c;
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, best)
}
