//! Dense complex function tables on `Z_k^n` and their moments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::index::Shape;
use crate::measure::Measure;
use crate::reduce::tree_sum;

/// Values of `f: Z_k^n -> C` at every point, in [`Shape`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionTable {
    shape: Shape,
    values: Vec<Complex64>,
}

impl FunctionTable {
    pub fn new(k: usize, n: usize, values: Vec<Complex64>) -> Result<Self> {
        Self::with_shape(Shape::new(k, n)?, values)
    }

    pub fn with_shape(shape: Shape, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(Error::DimensionMismatch(format!(
                "table has {} values, expected k^n = {}",
                values.len(),
                shape.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite value at flat index {pos}"
            )));
        }
        Ok(FunctionTable { shape, values })
    }

    pub fn from_real(k: usize, n: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            k,
            n,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Tabulates `f` at every point of `Z_k^n`.
    pub fn from_fn<F>(k: usize, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Complex64,
    {
        let shape = Shape::new(k, n)?;
        let mut x = vec![0; n];
        let mut values = Vec::with_capacity(shape.len());
        for flat in 0..shape.len() {
            shape.decode_into(flat, &mut x);
            values.push(f(&x));
        }
        Self::with_shape(shape, values)
    }

    pub fn zeros(shape: Shape) -> Self {
        FunctionTable {
            shape,
            values: vec![Complex64::new(0.0, 0.0); shape.len()],
        }
    }

    pub(crate) fn from_parts_unchecked(shape: Shape, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), shape.len());
        FunctionTable { shape, values }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn k(&self) -> usize {
        self.shape.k()
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// True when every value is exactly `0` or `1` (real).
    pub fn is_indicator(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.im == 0.0 && (v.re == 0.0 || v.re == 1.0))
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub(crate) fn check_measure(&self, m: &Measure) -> Result<()> {
        if m.k() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "table alphabet k = {} but measure has k = {}",
                self.k(),
                m.k()
            )));
        }
        Ok(())
    }

    /// `E f` under `mu^n`.
    pub fn mean(&self, m: &Measure) -> Result<Complex64> {
        self.check_measure(m)?;
        let w = m.product_weights(self.n(), self.values.len());
        Ok(tree_sum(self.values.len(), |i| self.values[i] * w[i]))
    }

    /// `E|f|^2 - |E f|^2`, evaluated in the centered form `E|f - E f|^2`.
    pub fn variance(&self, m: &Measure) -> Result<f64> {
        self.check_measure(m)?;
        let w = m.product_weights(self.n(), self.values.len());
        let mean = tree_sum(self.values.len(), |i| self.values[i] * w[i]);
        Ok(tree_sum(self.values.len(), |i| {
            (self.values[i] - mean).norm_sqr() * w[i]
        }))
    }

    /// `(E |f|^q)^(1/q)` under `mu^n` for finite `q >= 1`.
    pub fn lp_norm(&self, m: &Measure, q: f64) -> Result<f64> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "norm exponent q = {q} must be a finite value >= 1"
            )));
        }
        self.check_measure(m)?;
        let w = m.product_weights(self.n(), self.values.len());
        Ok(weighted_lp(&self.values, &w, q))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn weighted_lp(values: &[Complex64], w: &[f64], q: f64) -> f64 {
    let s = if q == 2.0 {
        tree_sum(values.len(), |i| values[i].norm_sqr() * w[i])
    } else if q == 1.0 {
        tree_sum(values.len(), |i| values[i].norm() * w[i])
    } else {
        tree_sum(values.len(), |i| values[i].norm().powf(q) * w[i])
    };
    if q == 1.0 {
        s
    } else if q == 2.0 {
        s.sqrt()
    } else {
        s.powf(1.0 / q)
    }
}
