//! Sampling estimators for instances too large to tabulate.
//!
//! Functions are accessed through a [`PointOracle`]. Sample `s` draws its point
//! from the counter stream `(seed, s)`, so an estimate depends only on
//! `(oracle, measure, n, samples, seed)` and not on the worker count. Fiber
//! averages over the probed coordinate are always computed exactly with `k`
//! oracle calls; only the outer expectation is sampled.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::index::Shape;
use crate::measure::Measure;
use crate::reduce::{sum_slice, tree_sum};
use crate::rng;
use crate::table::FunctionTable;

/// Black-box access to `f: Z_k^n -> C`.
pub trait PointOracle: Sync {
    fn eval(&self, x: &[usize]) -> Complex64;
}

impl<F> PointOracle for F
where
    F: Fn(&[usize]) -> Complex64 + Sync,
{
    fn eval(&self, x: &[usize]) -> Complex64 {
        self(x)
    }
}

/// Oracle backed by a materialized table.
pub struct TableOracle<'a>(pub &'a FunctionTable);

impl PointOracle for TableOracle<'_> {
    fn eval(&self, x: &[usize]) -> Complex64 {
        let shape: Shape = self.0.shape();
        let flat = shape
            .encode(x)
            .expect("sampled point lies in the table's space")
            .0;
        self.0.values()[flat]
    }
}

/// Oracle evaluating a builtin family without tabulating it.
pub struct FamilyOracle {
    pub family: Family,
    pub k: usize,
}

impl PointOracle for FamilyOracle {
    fn eval(&self, x: &[usize]) -> Complex64 {
        self.family.eval(self.k, x)
    }
}

/// A sampled estimate; the 95% interval is `value +- 1.96 stderr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn interval95(&self) -> (f64, f64) {
        (
            self.value - 1.96 * self.stderr,
            self.value + 1.96 * self.stderr,
        )
    }

    /// `|value - exact| <= sigmas * stderr`, with exact agreement (to 1e-12)
    /// required when the standard error is 0.
    pub fn covers(&self, exact: f64, sigmas: f64) -> bool {
        let diff = (self.value - exact).abs();
        if self.stderr == 0.0 {
            diff <= 1e-12
        } else {
            diff <= sigmas * self.stderr
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaNormEstimates {
    /// `||Delta_i f||_1`.
    pub l1: Estimate,
    /// `||Delta_i f||_2^2`.
    pub l2sq: Estimate,
    /// `||Delta_i f||_2`, with the delta-method error `se(l2sq) / (2 l2)`.
    pub l2: Estimate,
}

struct Sampler {
    letters: WeightedIndex<f64>,
    n: usize,
    seed: u64,
}

impl Sampler {
    fn new(m: &Measure, n: usize, samples: u64, seed: u64, min_samples: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "dimension n must be at least 1".into(),
            ));
        }
        if samples < min_samples {
            return Err(Error::InvalidArgument(format!(
                "need at least {min_samples} samples, got {samples}"
            )));
        }
        let letters = WeightedIndex::new(m.probs().iter().copied())
            .map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Ok(Sampler { letters, n, seed })
    }

    fn point(&self, s: u64) -> Vec<usize> {
        let mut rng = rng::stream(self.seed, s);
        (0..self.n).map(|_| self.letters.sample(&mut rng)).collect()
    }
}

fn estimate(value: f64, stderr: f64, samples: u64, seed: u64) -> Estimate {
    Estimate {
        value,
        stderr,
        samples,
        seed,
    }
}

/// Plug-in `E|f|^2 - |E f|^2` with a jackknife standard error.
pub fn mc_variance<O: PointOracle>(
    oracle: &O,
    m: &Measure,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    let sampler = Sampler::new(m, n, samples, seed, 2)?;
    let values: Vec<Complex64> = (0..samples)
        .into_par_iter()
        .map(|s| oracle.eval(&sampler.point(s)))
        .collect();
    // Variance is shift invariant; centering on the first draw keeps a
    // constant oracle exactly at zero.
    let origin = values[0];
    let len = values.len();
    let big_n = len as f64;
    let d = |s: usize| values[s] - origin;
    let s1 = tree_sum(len, d);
    let s2 = tree_sum(len, |s| d(s).norm_sqr());
    let mean = s1 / big_n;
    let value = (s2 / big_n - mean.norm_sqr()).max(0.0);

    let loo = |s: usize| {
        let ds = d(s);
        (s2 - ds.norm_sqr()) / (big_n - 1.0) - ((s1 - ds) / (big_n - 1.0)).norm_sqr()
    };
    let loo_mean = tree_sum(len, loo) / big_n;
    let spread = tree_sum(len, |s| (loo(s) - loo_mean).powi(2));
    let stderr = ((big_n - 1.0) / big_n * spread).sqrt();
    Ok(estimate(value, stderr, samples, seed))
}

/// Sample mean with standard error `sd / sqrt(N)`.
fn mean_estimate(values: &[f64], samples: u64, seed: u64) -> Estimate {
    let big_n = values.len() as f64;
    let origin = values[0];
    let shifted_mean = tree_sum(values.len(), |s| values[s] - origin) / big_n;
    let value = origin + shifted_mean;
    let ss = tree_sum(values.len(), |s| {
        (values[s] - origin - shifted_mean).powi(2)
    });
    let stderr = if values.len() > 1 {
        (ss / (big_n - 1.0) / big_n).sqrt()
    } else {
        0.0
    };
    estimate(value, stderr, samples, seed)
}

fn check_coordinate(n: usize, i: usize) -> Result<()> {
    if i >= n {
        return Err(Error::OutOfRange(format!(
            "coordinate index {i} (0-based) not in [0, {n})"
        )));
    }
    Ok(())
}

/// Fiber values of coordinate `i` through `x`.
fn fiber<O: PointOracle>(oracle: &O, x: &mut [usize], i: usize, k: usize) -> Vec<Complex64> {
    let keep = x[i];
    let vals = (0..k)
        .map(|j| {
            x[i] = j;
            oracle.eval(x)
        })
        .collect();
    x[i] = keep;
    vals
}

/// Estimates of `||Delta_i f||_1` and `||Delta_i f||_2^2` (0-based `i`).
pub fn mc_delta_norms<O: PointOracle>(
    oracle: &O,
    m: &Measure,
    n: usize,
    i: usize,
    samples: u64,
    seed: u64,
) -> Result<DeltaNormEstimates> {
    check_coordinate(n, i)?;
    let sampler = Sampler::new(m, n, samples, seed, 2)?;
    let k = m.k();
    let p = m.probs();
    let deltas: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut x = sampler.point(s);
            let vals = fiber(oracle, &mut x, i, k);
            if vals.iter().all(|&v| v == vals[0]) {
                return 0.0;
            }
            let avg: Complex64 = vals.iter().zip(p).map(|(&v, &pj)| v * pj).sum();
            (vals[x[i]] - avg).norm()
        })
        .collect();
    let squares: Vec<f64> = deltas.iter().map(|d| d * d).collect();
    let l1 = mean_estimate(&deltas, samples, seed);
    let l2sq = mean_estimate(&squares, samples, seed);
    let l2_value = l2sq.value.max(0.0).sqrt();
    let l2_err = if l2_value > 0.0 {
        l2sq.stderr / (2.0 * l2_value)
    } else {
        0.0
    };
    Ok(DeltaNormEstimates {
        l1,
        l2sq,
        l2: estimate(l2_value, l2_err, samples, seed),
    })
}

/// Estimate of `I_f(i)` with binomial standard error (0-based `i`).
pub fn mc_sensitivity<O: PointOracle>(
    oracle: &O,
    m: &Measure,
    n: usize,
    i: usize,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    check_coordinate(n, i)?;
    let sampler = Sampler::new(m, n, samples, seed, 1)?;
    let k = m.k();
    let hits: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut x = sampler.point(s);
            let vals = fiber(oracle, &mut x, i, k);
            if vals.iter().all(|&v| v == vals[0]) {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    let big_n = samples as f64;
    let p_hat = sum_slice(&hits) / big_n;
    let stderr = (p_hat * (1.0 - p_hat) / big_n).max(0.0).sqrt();
    Ok(estimate(p_hat, stderr, samples, seed))
}
