#![allow(dead_code)]

use lipbound::BoxDomain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tensor grid with about `target` points (at least `target`).
pub fn grid(bx: &BoxDomain, target: usize) -> Vec<Vec<f64>> {
    let n = bx.dim();
    let per_axis = ((target as f64).powf(1.0 / n as f64).ceil() as usize).max(2);
    let total = per_axis.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut p = Vec::with_capacity(n);
        for i in 0..n {
            let idx = k % per_axis;
            k /= per_axis;
            p.push(bx.lower()[i] + bx.width(i) * idx as f64 / (per_axis - 1) as f64);
        }
        out.push(p);
    }
    out
}

pub fn random_points(bx: &BoxDomain, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..bx.dim())
                .map(|i| bx.lower()[i] + rng.gen::<f64>() * bx.width(i))
                .collect()
        })
        .collect()
}

pub fn rel_dev(exact: f64, approx: f64) -> f64 {
    (exact - approx).abs() / exact.abs().max(1.0)
}
