//! Expansion of function tables in the tensor basis `u_y`.
//!
//! Both directions are computed as `n` single-coordinate sweeps, each applying
//! a dense `k x k` matrix along one axis (cost `O(n k^{n+1})`):
//!
//! * forward (analysis) uses `A[l][j] = c_l(j) * p_j`, because
//!   `f^(y) = sum_x f(x) u_y(x) mu^n(x)` carries the measure weight;
//! * inverse (synthesis) uses `B[j][l] = c_l(j)`, plain basis evaluation,
//!   since `f = sum_y f^(y) u_y` has no weight.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::OrthonormalBasis;
use crate::error::{Error, Result};
use crate::index::Shape;
use crate::reduce::tree_sum;
use crate::table::FunctionTable;

/// Coefficients `f^(y) = <f, u_y>_{mu^n}`, indexed like points.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    shape: Shape,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(shape: Shape, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != shape.len() {
            return Err(Error::DimensionMismatch(format!(
                "spectrum has {} coefficients, expected k^n = {}",
                coeffs.len(),
                shape.len()
            )));
        }
        if let Some(pos) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite coefficient at flat index {pos}"
            )));
        }
        Ok(Spectrum { shape, coeffs })
    }

    pub fn zeros(shape: Shape) -> Self {
        Spectrum {
            shape,
            coeffs: vec![Complex64::new(0.0, 0.0); shape.len()],
        }
    }

    /// A single unit coefficient at flat frequency `y`.
    pub fn delta(shape: Shape, y: usize) -> Result<Self> {
        if y >= shape.len() {
            return Err(Error::OutOfRange(format!(
                "frequency {y} not in [0, {})",
                shape.len()
            )));
        }
        let mut s = Self::zeros(shape);
        s.coeffs[y] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, y: usize) -> Complex64 {
        self.coeffs[y]
    }

    /// `sum_{[y] = l} |f^(y)|^2`.
    pub fn level_weight(&self, level: usize) -> Result<f64> {
        if level > self.shape.n() {
            return Err(Error::OutOfRange(format!(
                "level {level} not in [0, {}]",
                self.shape.n()
            )));
        }
        let levels = self.shape.levels();
        let level = level as u32;
        Ok(tree_sum(self.coeffs.len(), |y| {
            if levels[y] == level {
                self.coeffs[y].norm_sqr()
            } else {
                0.0
            }
        }))
    }

    /// All level weights `0..=n`.
    pub fn level_weights(&self) -> Vec<f64> {
        (0..=self.shape.n())
            .map(|l| self.level_weight(l).expect("level in range"))
            .collect()
    }

    /// `M(g)^2 = sum_{y != 0} |g^(y)|^2 / [y]`.
    pub fn m_squared(&self) -> f64 {
        let levels = self.shape.levels();
        tree_sum(self.coeffs.len(), |y| {
            if y == 0 {
                0.0
            } else {
                self.coeffs[y].norm_sqr() / levels[y] as f64
            }
        })
    }

    /// `sum_y |f^(y)|^2`.
    pub fn energy(&self) -> f64 {
        tree_sum(self.coeffs.len(), |y| self.coeffs[y].norm_sqr())
    }

    /// Copy keeping only frequencies accepted by `keep`.
    pub fn restricted<F: Fn(usize) -> bool + Sync>(&self, keep: F) -> Spectrum {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(y, &c)| if keep(y) { c } else { Complex64::new(0.0, 0.0) })
            .collect();
        Spectrum {
            shape: self.shape,
            coeffs,
        }
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }
}

/// Forward transform `f -> f^`.
pub fn forward_transform(f: &FunctionTable, b: &OrthonormalBasis) -> Result<Spectrum> {
    check_alphabet(f.k(), b)?;
    let k = b.k();
    let p = b.measure().probs();
    let matrix: Vec<f64> = (0..k * k).map(|rc| b.matrix()[rc] * p[rc % k]).collect();
    let coeffs = sweep_all_axes(f.shape(), f.values().to_vec(), &matrix);
    Ok(Spectrum {
        shape: f.shape(),
        coeffs,
    })
}

/// Inverse transform `f^ -> f`.
pub fn inverse_transform(s: &Spectrum, b: &OrthonormalBasis) -> Result<FunctionTable> {
    check_alphabet(s.shape.k(), b)?;
    let k = b.k();
    // B[j][l] = c_l(j): transpose of the stored basis matrix.
    let matrix: Vec<f64> = (0..k * k).map(|rc| b.entry(rc % k, rc / k)).collect();
    let values = sweep_all_axes(s.shape, s.coeffs.clone(), &matrix);
    Ok(FunctionTable::from_parts_unchecked(s.shape, values))
}

fn check_alphabet(k: usize, b: &OrthonormalBasis) -> Result<()> {
    if k != b.k() {
        return Err(Error::DimensionMismatch(format!(
            "data alphabet k = {k} but basis has k = {}",
            b.k()
        )));
    }
    Ok(())
}

/// Matrix entries usable in [`sweep_all_axes`].
pub(crate) trait Entry: Copy + Send + Sync {
    fn times(self, z: Complex64) -> Complex64;
}

impl Entry for f64 {
    #[inline]
    fn times(self, z: Complex64) -> Complex64 {
        z * self
    }
}

impl Entry for Complex64 {
    #[inline]
    fn times(self, z: Complex64) -> Complex64 {
        z * self
    }
}

/// Applies the row-major `k x k` matrix along every coordinate axis:
/// `out[.., r, ..] = sum_t M[r][t] in[.., t, ..]`.
pub(crate) fn sweep_all_axes<T: Entry>(
    shape: Shape,
    mut data: Vec<Complex64>,
    matrix: &[T],
) -> Vec<Complex64> {
    let k = shape.k();
    debug_assert_eq!(matrix.len(), k * k);
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for i in 0..shape.n() {
        let stride = shape.stride(i);
        let block = stride * k;
        let min_len = (4096 / stride).max(1);
        let src = &data;
        out.par_chunks_mut(stride)
            .with_min_len(min_len)
            .enumerate()
            .for_each(|(segment, dst)| {
                let base = (segment / k) * block;
                let row = &matrix[(segment % k) * k..(segment % k + 1) * k];
                for (o, d) in dst.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (t, &m) in row.iter().enumerate() {
                        acc += m.times(src[base + t * stride + o]);
                    }
                    *d = acc;
                }
            });
        std::mem::swap(&mut data, &mut out);
    }
    data
}
