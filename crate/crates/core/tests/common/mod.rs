//! Test-only oracles: brute-force versions of the library routines that share
//! no code path with them beyond the basis matrix itself.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use talabounds_core::{Complex64, FunctionTable, Measure, OrthonormalBasis};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dirichlet(alpha, ..., alpha) measure on `k` letters.
pub fn random_measure(rng: &mut ChaCha8Rng, k: usize, alpha: f64) -> Measure {
    let gamma = Gamma::new(alpha, 1.0).unwrap();
    loop {
        let raw: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|r| r / total).collect();
        if p.iter().all(|&x| x > 1e-9) {
            if let Ok(m) = Measure::new(p) {
                return m;
            }
        }
    }
}

pub fn random_table(rng: &mut ChaCha8Rng, k: usize, n: usize) -> FunctionTable {
    let len = k.pow(n as u32);
    let values = (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    FunctionTable::new(k, n, values).unwrap()
}

pub fn random_indicator(rng: &mut ChaCha8Rng, k: usize, n: usize, density: f64) -> FunctionTable {
    let len = k.pow(n as u32);
    let values = (0..len)
        .map(|_| Complex64::new(if rng.random_bool(density) { 1.0 } else { 0.0 }, 0.0))
        .collect();
    FunctionTable::new(k, n, values).unwrap()
}

pub fn digits(mut flat: usize, k: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = flat % k;
            flat /= k;
            d
        })
        .collect()
}

pub fn point_weight(m: &Measure, x: &[usize]) -> f64 {
    x.iter().map(|&xi| m.prob(xi)).product()
}

/// `f^(y) = sum_x f(x) u_y(x) mu^n(x)` by the O(k^{2n}) double loop.
pub fn naive_forward(f: &FunctionTable, b: &OrthonormalBasis) -> Vec<Complex64> {
    let (k, n) = (f.k(), f.n());
    let len = f.values().len();
    let m = b.measure();
    (0..len)
        .map(|yf| {
            let y = digits(yf, k, n);
            let mut acc = Complex64::new(0.0, 0.0);
            for xf in 0..len {
                let x = digits(xf, k, n);
                acc += f.values()[xf] * b.tensor_eval(&y, &x).unwrap() * point_weight(m, &x);
            }
            acc
        })
        .collect()
}

/// Exact `E f` by plain enumeration.
pub fn naive_mean(f: &FunctionTable, m: &Measure) -> Complex64 {
    let (k, n) = (f.k(), f.n());
    f.values()
        .iter()
        .enumerate()
        .map(|(xf, v)| v * point_weight(m, &digits(xf, k, n)))
        .sum()
}

/// `E|f|^2 - |E f|^2` by plain enumeration.
pub fn naive_variance(f: &FunctionTable, m: &Measure) -> f64 {
    let (k, n) = (f.k(), f.n());
    let second: f64 = f
        .values()
        .iter()
        .enumerate()
        .map(|(xf, v)| v.norm_sqr() * point_weight(m, &digits(xf, k, n)))
        .sum();
    second - naive_mean(f, m).norm_sqr()
}

/// `Delta_i f` straight from the definition (0-based `i`).
pub fn naive_delta(f: &FunctionTable, m: &Measure, i: usize) -> Vec<Complex64> {
    let (k, n) = (f.k(), f.n());
    let len = f.values().len();
    (0..len)
        .map(|xf| {
            let mut x = digits(xf, k, n);
            let here = f.values()[xf];
            let mut avg = Complex64::new(0.0, 0.0);
            for j in 0..k {
                x[i] = j;
                let flat: usize = x.iter().rev().fold(0, |acc, &d| acc * k + d);
                avg += f.values()[flat] * m.prob(j);
            }
            here - avg
        })
        .collect()
}

/// `I_f(i)` straight from the definition: mass of points with a
/// non-constant fiber (0-based `i`).
pub fn naive_sensitivity(f: &FunctionTable, m: &Measure, i: usize) -> f64 {
    let (k, n) = (f.k(), f.n());
    let len = f.values().len();
    (0..len)
        .filter(|&xf| {
            let mut x = digits(xf, k, n);
            let vals: Vec<Complex64> = (0..k)
                .map(|j| {
                    x[i] = j;
                    f.values()[x.iter().rev().fold(0, |acc, &d| acc * k + d)]
                })
                .collect();
            vals.iter().any(|v| *v != vals[0])
        })
        .map(|xf| point_weight(m, &digits(xf, k, n)))
        .sum()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
