//! The influence operator `Delta_i f = f - E_i f` and the set-theoretic
//! sensitivity `I_f(i)`.
//!
//! Coordinates are 0-based in this API; reports print them 1-based.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::reduce::sum_slice;
use crate::table::FunctionTable;

/// Norms of `Delta_i f` and the sensitivity of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfluenceRecord {
    /// 1-based coordinate number.
    pub coordinate: usize,
    pub l1: f64,
    pub l2: f64,
    pub sensitivity: f64,
}

fn check_coordinate(f: &FunctionTable, i: usize) -> Result<()> {
    if i >= f.n() {
        return Err(Error::OutOfRange(format!(
            "coordinate index {i} (0-based) not in [0, {})",
            f.n()
        )));
    }
    Ok(())
}

#[inline]
fn fiber_is_constant(values: &[Complex64], base: usize, stride: usize, k: usize) -> bool {
    let first = values[base];
    (1..k).all(|j| values[base + j * stride] == first)
}

/// `Delta_i f` as a full table. Fibers on which `f` is constant map to exact
/// zeros.
pub fn delta_i(f: &FunctionTable, m: &Measure, i: usize) -> Result<FunctionTable> {
    f.check_measure(m)?;
    check_coordinate(f, i)?;
    let k = f.k();
    let p = m.probs();
    let stride = f.shape().stride(i);
    let block = stride * k;
    let mut out = vec![Complex64::new(0.0, 0.0); f.values().len()];
    out.par_chunks_mut(block)
        .zip(f.values().par_chunks(block))
        .for_each(|(dst, src)| {
            for o in 0..stride {
                if fiber_is_constant(src, o, stride, k) {
                    continue;
                }
                let mut avg = Complex64::new(0.0, 0.0);
                for (j, &pj) in p.iter().enumerate() {
                    avg += src[o + j * stride] * pj;
                }
                for j in 0..k {
                    dst[o + j * stride] = src[o + j * stride] - avg;
                }
            }
        });
    Ok(FunctionTable::from_parts_unchecked(f.shape(), out))
}

/// `I_f(i)`: `mu^n`-mass of points whose coordinate-`i` fiber is non-constant,
/// with exact equality of values.
pub fn coordinate_sensitivity(f: &FunctionTable, m: &Measure, i: usize) -> Result<f64> {
    f.check_measure(m)?;
    check_coordinate(f, i)?;
    let k = f.k();
    let stride = f.shape().stride(i);
    let block = stride * k;
    let w = m.product_weights(f.n(), f.values().len());
    let mut mass = vec![0.0f64; f.values().len() / k];
    mass.par_chunks_mut(stride)
        .zip(f.values().par_chunks(block))
        .zip(w.par_chunks(block))
        .for_each(|((dst, src), wb)| {
            for (o, d) in dst.iter_mut().enumerate() {
                if !fiber_is_constant(src, o, stride, k) {
                    *d = (0..k).map(|j| wb[o + j * stride]).sum();
                }
            }
        });
    Ok(sum_slice(&mass))
}

/// Per-coordinate `||Delta_i f||_1`, `||Delta_i f||_2` and `I_f(i)`.
pub fn influence_norms(f: &FunctionTable, m: &Measure) -> Result<Vec<InfluenceRecord>> {
    (0..f.n())
        .map(|i| {
            let d = delta_i(f, m, i)?;
            Ok(InfluenceRecord {
                coordinate: i + 1,
                l1: d.lp_norm(m, 1.0)?,
                l2: d.lp_norm(m, 2.0)?,
                sensitivity: coordinate_sensitivity(f, m, i)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn dictator() -> FunctionTable {
        FunctionTable::from_fn(2, 2, |x| re((x[0] == 1) as u8 as f64)).unwrap()
    }

    #[test]
    fn independent_coordinate_gives_zero() {
        let m = Measure::new(vec![0.3, 0.7]).unwrap();
        let f =
            FunctionTable::from_fn(2, 3, |x| re(0.1 * x[0] as f64 + 0.3 * x[2] as f64)).unwrap();
        let d = delta_i(&f, &m, 1).unwrap();
        assert!(d.values().iter().all(|v| *v == re(0.0)));
        assert_eq!(coordinate_sensitivity(&f, &m, 1).unwrap(), 0.0);
    }

    #[test]
    fn dictator_influences() {
        let m = Measure::uniform(2).unwrap();
        let f = dictator();
        let d1 = delta_i(&f, &m, 0).unwrap();
        for (flat, v) in d1.values().iter().enumerate() {
            let want = if flat % 2 == 1 { 0.5 } else { -0.5 };
            assert_eq!(*v, re(want));
        }
        let d2 = delta_i(&f, &m, 1).unwrap();
        assert!(d2.values().iter().all(|v| *v == re(0.0)));
        assert_eq!(coordinate_sensitivity(&f, &m, 0).unwrap(), 1.0);
        assert_eq!(coordinate_sensitivity(&f, &m, 1).unwrap(), 0.0);

        let recs = influence_norms(&f, &m).unwrap();
        assert_eq!(
            (recs[0].l1, recs[0].l2, recs[0].sensitivity),
            (0.5, 0.5, 1.0)
        );
        assert_eq!(
            (recs[1].l1, recs[1].l2, recs[1].sensitivity),
            (0.0, 0.0, 0.0)
        );
        assert_eq!(recs[0].coordinate, 1);
    }

    #[test]
    fn parity_influences() {
        let m = Measure::uniform(2).unwrap();
        let f = FunctionTable::from_fn(2, 2, |x| {
            re(if (x[0] + x[1]) % 2 == 0 { 1.0 } else { -1.0 })
        })
        .unwrap();
        for rec in influence_norms(&f, &m).unwrap() {
            assert!((rec.l1 - 1.0).abs() < 1e-15);
            assert!((rec.l2 - 1.0).abs() < 1e-15);
            assert_eq!(rec.sensitivity, 1.0);
        }
    }

    #[test]
    fn all_equal_closed_form() {
        // f = 1{x_1 = x_2 = 0}, weight q on letter 0
        for (k, q) in [(2usize, 0.3f64), (3, 0.2), (4, 0.1)] {
            let mut p = vec![(1.0 - q) / (k - 1) as f64; k];
            p[0] = q;
            let m = Measure::new(p).unwrap();
            let f = FunctionTable::from_fn(k, 2, |x| re((x[0] == 0 && x[1] == 0) as u8 as f64))
                .unwrap();
            let d = delta_i(&f, &m, 0).unwrap();
            let l2sq = d.lp_norm(&m, 2.0).unwrap().powi(2);
            let l1 = d.lp_norm(&m, 1.0).unwrap();
            assert!((l2sq - q * q * (1.0 - q)).abs() < 1e-15);
            assert!((l1 - 2.0 * q * q * (1.0 - q)).abs() < 1e-15);
            assert!((coordinate_sensitivity(&f, &m, 0).unwrap() - q).abs() < 1e-15);
        }
    }

    #[test]
    fn corner_uniform_three() {
        let m = Measure::uniform(3).unwrap();
        let f =
            FunctionTable::from_fn(3, 2, |x| re((x[0] == 0 && x[1] == 0) as u8 as f64)).unwrap();
        assert!((coordinate_sensitivity(&f, &m, 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let recs = influence_norms(&f, &m).unwrap();
        assert!((recs[0].l2.powi(2) - 2.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn constant_function() {
        let m = Measure::new(vec![0.2, 0.5, 0.3]).unwrap();
        let f = FunctionTable::from_fn(3, 2, |_| Complex64::new(0.1, 0.2)).unwrap();
        for i in 0..2 {
            assert_eq!(coordinate_sensitivity(&f, &m, i).unwrap(), 0.0);
        }
    }

    #[test]
    fn coordinate_range() {
        let m = Measure::uniform(2).unwrap();
        assert!(matches!(
            delta_i(&dictator(), &m, 2),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            coordinate_sensitivity(&dictator(), &m, 5),
            Err(Error::OutOfRange(_))
        ));
    }
}
