//! Little-endian mixed-radix indexing of `Z_k^n`.
//!
//! A point `x = (x_1, ..., x_n)` sits at flat index `sum_i x_i * k^(i-1)`, so
//! coordinate `i` (0-based here) has stride `k^i`. The single-coordinate
//! sweeps in [`crate::spectral`] and [`crate::influence`] rely on that stride.

use crate::error::{Error, Result};

/// Default cap on the number of entries in an exactly enumerated table.
pub const DEFAULT_MAX_TABLE: usize = 1 << 26;

/// Environment variable overriding [`DEFAULT_MAX_TABLE`]. Raising it trades
/// memory predictability for reach and is not otherwise guarded.
pub const MAX_TABLE_ENV: &str = "TALABOUNDS_MAX_TABLE";

/// Current exact-mode cap, honouring [`MAX_TABLE_ENV`].
pub fn max_table_len() -> usize {
    std::env::var(MAX_TABLE_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_TABLE)
}

/// Alphabet size and dimension of a product space `Z_k^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    k: usize,
    n: usize,
    len: usize,
}

/// Flat position of a point (or frequency) of `Z_k^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointIndex(pub usize);

impl Shape {
    /// Builds the shape, checking `k^n` against [`max_table_len`].
    pub fn new(k: usize, n: usize) -> Result<Self> {
        Self::with_cap(k, n, max_table_len())
    }

    pub fn with_cap(k: usize, n: usize, cap: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("alphabet size k = {k} < 2")));
        }
        if n < 1 {
            return Err(Error::InvalidArgument(
                "dimension n must be at least 1".into(),
            ));
        }
        let required = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if n > u32::MAX as usize || required > cap as u128 {
            return Err(Error::CapExceeded {
                what: "table",
                required,
                cap: cap as u128,
            });
        }
        Ok(Shape {
            k,
            n,
            len: required as usize,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `k^n`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Stride of 0-based coordinate `i`, i.e. `k^i`.
    pub fn stride(&self, i: usize) -> usize {
        self.k.pow(i as u32)
    }

    pub fn encode(&self, x: &[usize]) -> Result<PointIndex> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.n
            )));
        }
        let mut flat = 0usize;
        for (i, &xi) in x.iter().enumerate().rev() {
            if xi >= self.k {
                return Err(Error::OutOfRange(format!(
                    "coordinate {} = {xi} not in [0, {})",
                    i + 1,
                    self.k
                )));
            }
            flat = flat * self.k + xi;
        }
        Ok(PointIndex(flat))
    }

    pub fn decode(&self, index: PointIndex) -> Result<Vec<usize>> {
        if index.0 >= self.len {
            return Err(Error::OutOfRange(format!(
                "flat index {} not in [0, {})",
                index.0, self.len
            )));
        }
        let mut x = vec![0; self.n];
        self.decode_into(index.0, &mut x);
        Ok(x)
    }

    /// Unchecked decode into a caller-provided buffer of length `n`.
    pub(crate) fn decode_into(&self, mut flat: usize, x: &mut [usize]) {
        for xi in x.iter_mut() {
            *xi = flat % self.k;
            flat /= self.k;
        }
    }

    /// Number of nonzero coordinates (the level `[y]`) of a flat index.
    pub fn level_of(&self, mut flat: usize) -> usize {
        let mut level = 0;
        while flat > 0 {
            level += usize::from(!flat.is_multiple_of(self.k));
            flat /= self.k;
        }
        level
    }

    /// Levels of all `k^n` indices.
    pub fn levels(&self) -> Vec<u32> {
        let mut levels = vec![0u32; self.len];
        for flat in 1..self.len {
            levels[flat] = levels[flat / self.k] + u32::from(flat % self.k != 0);
        }
        levels
    }

    /// Digit of 0-based coordinate `i` in a flat index.
    pub fn digit(&self, flat: usize, i: usize) -> usize {
        (flat / self.stride(i)) % self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn encode_examples() {
        let s = Shape::new(2, 3).unwrap();
        assert_eq!(s.encode(&[1, 0, 1]).unwrap(), PointIndex(5));
        let s = Shape::new(3, 2).unwrap();
        assert_eq!(s.encode(&[2, 1]).unwrap(), PointIndex(5));
        assert_eq!(s.decode(PointIndex(0)).unwrap(), vec![0, 0]);
    }

    #[test]
    fn encode_errors() {
        let s = Shape::new(3, 2).unwrap();
        assert!(matches!(s.encode(&[3, 0]), Err(Error::OutOfRange(_))));
        assert!(matches!(s.encode(&[0]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(s.decode(PointIndex(9)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn cap() {
        assert!(matches!(Shape::new(2, 27), Err(Error::CapExceeded { .. })));
        assert!(matches!(
            Shape::new(10, 200),
            Err(Error::CapExceeded { .. })
        ));
        assert!(Shape::with_cap(2, 4, 16).is_ok());
        assert!(matches!(
            Shape::with_cap(2, 5, 16),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn levels_agree_with_level_of() {
        let s = Shape::new(3, 4).unwrap();
        for (flat, &level) in s.levels().iter().enumerate() {
            assert_eq!(level as usize, s.level_of(flat));
        }
    }

    proptest! {
        #[test]
        fn decode_encode_identity(k in 2usize..6, n in 1usize..5) {
            prop_assume!(k * n <= 20);
            let s = Shape::new(k, n).unwrap();
            for flat in 0..s.len() {
                let x = s.decode(PointIndex(flat)).unwrap();
                prop_assert_eq!(s.encode(&x).unwrap(), PointIndex(flat));
            }
        }
    }
}
