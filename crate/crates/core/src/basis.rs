//! Orthonormal bases of `L^2(Z_k, mu)` and their tensor products.
//!
//! [`OrthonormalBasis`] holds the `k x k` real matrix `c[l][j] = c_l(j)`: row 0
//! is the constant function, the remaining rows come from Gram-Schmidt on the
//! indicators `delta_0, ..., delta_{k-2}` under the `mu`-weighted inner
//! product. The tensor basis is `u_y(x) = prod_i c_{y_i}(x_i)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::index::Shape;
use crate::measure::Measure;

/// Residual norm below which Gram-Schmidt reports failure.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    measure: Measure,
    /// Row-major, row `l` holds `c_l(0..k)`.
    c: Vec<f64>,
    theta: f64,
}

impl OrthonormalBasis {
    /// Canonical basis for `m`: Gram-Schmidt on `[1, delta_0, ..., delta_{k-2}]`
    /// with one re-orthogonalization pass, signs fixed so `c_l(l - 1) > 0`.
    pub fn gram_schmidt(m: &Measure) -> Result<Self> {
        let k = m.k();
        let p = m.probs();
        let inner = |a: &[f64], b: &[f64]| -> f64 {
            a.iter().zip(b).zip(p).map(|((x, y), w)| x * y * w).sum()
        };

        let mut c = vec![0.0; k * k];
        c[..k].fill(1.0);
        for l in 1..k {
            let mut r = vec![0.0; k];
            r[l - 1] = 1.0;
            for _pass in 0..2 {
                for j in 0..l {
                    let row = &c[j * k..(j + 1) * k];
                    let proj = inner(&r, row);
                    for (rv, cv) in r.iter_mut().zip(row) {
                        *rv -= proj * cv;
                    }
                }
            }
            let norm = inner(&r, &r).sqrt();
            if norm.is_nan() || norm < RESIDUAL_FLOOR {
                return Err(Error::Numerical(format!(
                    "Gram-Schmidt residual norm {norm:e} for basis row {l}"
                )));
            }
            let sign = if r[l - 1] < 0.0 { -1.0 } else { 1.0 };
            for (j, rv) in r.iter().enumerate() {
                c[l * k + j] = sign * rv / norm;
            }
        }
        let theta = k as f64 * c.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        Ok(OrthonormalBasis {
            measure: m.clone(),
            c,
            theta,
        })
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn k(&self) -> usize {
        self.measure.k()
    }

    /// `c_l(j)`.
    pub fn entry(&self, l: usize, j: usize) -> f64 {
        self.c[l * self.k() + j]
    }

    pub fn row(&self, l: usize) -> &[f64] {
        let k = self.k();
        &self.c[l * k..(l + 1) * k]
    }

    /// The full row-major matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.c
    }

    /// `k * max_{l,j} |c_l(j)|`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Largest `|<c_a, c_b>_mu - delta_ab|`.
    pub fn gram_deviation(&self) -> f64 {
        let k = self.k();
        let p = self.measure.probs();
        let mut worst = 0.0f64;
        for a in 0..k {
            for b in 0..k {
                let g: f64 = (0..k)
                    .map(|j| self.entry(a, j) * self.entry(b, j) * p[j])
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// `u_y(x) = prod_i c_{y_i}(x_i)`.
    pub fn tensor_eval(&self, y: &[usize], x: &[usize]) -> Result<f64> {
        check_pair(self.k(), y, x)?;
        Ok(y.iter()
            .zip(x)
            .map(|(&yi, &xi)| self.entry(yi, xi))
            .product())
    }

    /// `u_y(x)` for flat indices `y`, `x` of `shape` (unchecked).
    pub fn tensor_eval_index(&self, shape: Shape, mut y: usize, mut x: usize) -> f64 {
        let k = shape.k();
        let mut acc = 1.0;
        for _ in 0..shape.n() {
            acc *= self.entry(y % k, x % k);
            y /= k;
            x /= k;
        }
        acc
    }
}

fn check_pair(k: usize, y: &[usize], x: &[usize]) -> Result<()> {
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "frequency has {} coordinates, point has {}",
            y.len(),
            x.len()
        )));
    }
    if let Some(v) = y.iter().chain(x).find(|&&v| v >= k) {
        return Err(Error::OutOfRange(format!(
            "coordinate value {v} not in [0, {k})"
        )));
    }
    Ok(())
}

/// Powers of `eps = exp(2 pi i / k)`; quarter turns are stored exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RootsOfUnity {
    table: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(k: usize) -> Self {
        let table = (0..k)
            .map(|j| {
                if (4 * j) % k == 0 {
                    match 4 * j / k {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    }
                } else {
                    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)
                }
            })
            .collect();
        RootsOfUnity { table }
    }

    pub fn k(&self) -> usize {
        self.table.len()
    }

    /// `eps^e` for any integer exponent.
    pub fn pow(&self, e: i64) -> Complex64 {
        let k = self.k() as i64;
        self.table[e.rem_euclid(k) as usize]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.table
    }
}

/// Character `w_y(x) = eps^{<x, y>}` of `Z_k^n`.
pub fn character(k: usize, y: &[usize], x: &[usize]) -> Result<Complex64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("alphabet size k = {k} < 2")));
    }
    check_pair(k, y, x)?;
    let e = y
        .iter()
        .zip(x)
        .fold(0usize, |acc, (&a, &b)| (acc + a * b) % k);
    Ok(RootsOfUnity::new(k).table[e])
}
