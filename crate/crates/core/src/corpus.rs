//! Seeded random step functions.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::stepfn::{DecreasingStep, StepFunction};

pub const MAX_PIECES: usize = 20;
const LOG_RANGE: f64 = 3.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform<R: Rng>(r: &mut R) -> f64 {
    10f64.powf(r.gen_range(-LOG_RANGE..=LOG_RANGE))
}

/// 1..=20 pieces, breakpoints and values log-uniform on [1e-3, 1e3].
pub fn random_step<R: Rng>(r: &mut R) -> StepFunction {
    let n = r.gen_range(1..=MAX_PIECES);
    let mut bs: Vec<f64> = (0..n).map(|_| log_uniform(r)).collect();
    bs.sort_by(f64::total_cmp);
    bs.dedup();
    let vs: Vec<f64> = (0..bs.len()).map(|_| log_uniform(r)).collect();
    StepFunction::new(bs, vs).expect("generated step is valid")
}

pub fn random_decreasing<R: Rng>(r: &mut R) -> DecreasingStep {
    let f = random_step(r);
    let mut vs = f.values().to_vec();
    vs.sort_by(|a, b| b.total_cmp(a));
    DecreasingStep::new(f.breakpoints().to_vec(), vs).expect("sorted values are nonincreasing")
}

pub fn steps(n: usize, seed: u64) -> Vec<StepFunction> {
    let mut r = rng(seed);
    (0..n).map(|_| random_step(&mut r)).collect()
}

pub fn decreasing_steps(n: usize, seed: u64) -> Vec<DecreasingStep> {
    let mut r = rng(seed);
    (0..n).map(|_| random_decreasing(&mut r)).collect()
}
