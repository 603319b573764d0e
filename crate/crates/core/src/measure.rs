//! Probability measures on the alphabet `Z_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest alphabet for which [`Measure::p_med`] enumerates subsets.
pub const P_MED_MAX_K: usize = 24;

/// Tolerance on `|sum p - 1|` accepted by [`Measure::new`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A strictly positive probability vector over `Z_k`, `k >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct Measure {
    p: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    k: usize,
    p: Vec<f64>,
}

impl TryFrom<MeasureRepr> for Measure {
    type Error = Error;

    fn try_from(r: MeasureRepr) -> Result<Self> {
        Measure::validate(r.k, r.p)
    }
}

impl From<Measure> for MeasureRepr {
    fn from(m: Measure) -> Self {
        MeasureRepr { k: m.k(), p: m.p }
    }
}

impl Measure {
    /// Validates `p` as a measure on `Z_k`. Nothing is renormalized.
    pub fn validate(k: usize, p: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidMeasure(format!("alphabet size k = {k} < 2")));
        }
        if p.len() != k {
            return Err(Error::InvalidMeasure(format!(
                "expected {k} probabilities, got {}",
                p.len()
            )));
        }
        if let Some((j, &pj)) = p
            .iter()
            .enumerate()
            .find(|(_, &pj)| !(pj > 0.0 && pj.is_finite()))
        {
            return Err(Error::InvalidMeasure(format!(
                "p[{j}] = {pj} is not strictly positive"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidMeasure(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Measure { p })
    }

    /// Shorthand for [`Measure::validate`] with `k = p.len()`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        Self::validate(p.len(), p)
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidMeasure(format!("alphabet size k = {k} < 2")));
        }
        Self::validate(k, vec![1.0 / k as f64; k])
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, letter: usize) -> f64 {
        self.p[letter]
    }

    pub fn p_min(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest mass `mu(B)` over subsets `B` of the alphabet with `mu(B) <= 1/2`,
    /// found by enumerating all `2^k` subsets.
    ///
    /// Subset sums within `1e-12` above one half still count as feasible (the
    /// result is then clamped to 1/2), so rounding in the inputs cannot push an
    /// exact half out of the feasible set.
    pub fn p_med(&self) -> Result<f64> {
        let k = self.k();
        if k > P_MED_MAX_K {
            return Err(Error::CapExceeded {
                what: "p_med subset enumeration",
                required: 1u128 << k,
                cap: 1u128 << P_MED_MAX_K,
            });
        }
        // Split the alphabet in two halves; every subset sum is then one
        // addition of two half-sums, each built from at most 12 terms.
        let half = k / 2;
        let low = subset_sums(&self.p[..half]);
        let high = subset_sums(&self.p[half..]);
        let mut best = 0.0f64;
        for &h in &high {
            for &l in &low {
                let mass = l + h;
                if mass <= 0.5 + SUM_TOLERANCE && mass > best {
                    best = mass;
                }
            }
        }
        Ok(best.min(0.5))
    }

    /// The weight `p` of letter `1` when `k = 2`, otherwise `None`.
    pub fn bernoulli_p(&self) -> Option<f64> {
        (self.k() == 2).then(|| self.p[1])
    }

    /// Weights of the product measure `mu^n` over all `k^n` points in
    /// little-endian mixed-radix order.
    pub(crate) fn product_weights(&self, n: usize, len: usize) -> Vec<f64> {
        let mut w = Vec::with_capacity(len);
        w.push(1.0);
        for _ in 0..n {
            let prev = w.len();
            for j in 1..self.k() {
                for t in 0..prev {
                    let v = w[t] * self.p[j];
                    w.push(v);
                }
            }
            for t in w.iter_mut().take(prev) {
                *t *= self.p[0];
            }
        }
        w
    }
}

fn subset_sums(p: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0; 1 << p.len()];
    for mask in 1usize..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + p[low];
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-15
    }

    #[test]
    fn symmetric_bernoulli() {
        let m = Measure::validate(2, vec![0.5, 0.5]).unwrap();
        assert_eq!(m.p_min(), 0.5);
        assert_eq!(m.p_med().unwrap(), 0.5);
    }

    #[test]
    fn three_letter_examples() {
        let m = Measure::validate(3, vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(m.p_min(), 0.2);
        assert!(close(m.p_med().unwrap(), 0.5));

        let m = Measure::validate(3, vec![0.4, 0.35, 0.25]).unwrap();
        assert!(close(m.p_med().unwrap(), 0.4));
    }

    #[test]
    fn skewed_bernoulli() {
        let m = Measure::validate(2, vec![0.9, 0.1]).unwrap();
        assert_eq!(m.p_min(), 0.1);
        assert_eq!(m.p_med().unwrap(), 0.1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Measure::validate(1, vec![1.0]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            Measure::validate(2, vec![1.0, 0.0]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            Measure::validate(2, vec![0.6, 0.6]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            Measure::validate(3, vec![0.5, 0.5]),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            Measure::validate(2, vec![f64::NAN, 0.5]),
            Err(Error::InvalidMeasure(_))
        ));
    }

    #[test]
    fn p_med_cap() {
        let m = Measure::uniform(25).unwrap();
        assert!(matches!(m.p_med(), Err(Error::CapExceeded { .. })));
        assert!(Measure::uniform(24).unwrap().p_med().is_ok());
    }

    #[test]
    fn product_weights_order() {
        let m = Measure::validate(3, vec![0.2, 0.3, 0.5]).unwrap();
        let w = m.product_weights(2, 9);
        // flat = x1 + 3 * x2
        assert!(close(w[5], 0.5 * 0.3));
        assert!(close(w[7], 0.3 * 0.5));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip_validates() {
        let m: Measure = serde_json::from_str(r#"{"k": 2, "p": [0.25, 0.75]}"#).unwrap();
        assert_eq!(m.probs(), &[0.25, 0.75]);
        assert!(serde_json::from_str::<Measure>(r#"{"k": 3, "p": [0.25, 0.75]}"#).is_err());
    }
}
