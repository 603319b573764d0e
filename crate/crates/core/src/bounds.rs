//! Variance bounds in terms of influences.
//!
//! * Efron-Stein: `Var f <= sum_i ||Delta_i f||_2^2`.
//! * Generalized Talagrand: `Var f <= K log(1/p_min) sum_i T_i` with
//!   `T_i = ||Delta_i f||_2^2 / log(e ||Delta_i f||_2 / ||Delta_i f||_1)`.
//!   `K` is an unknown universal constant; [`empirical_k`] reports the
//!   smallest `K` that works for a given `f`.
//! * The event form for indicators, reported through [`corollary_report`].
//! * The disproved claim `Var f <= 10 sum_i ||Delta_i f||_2^2 / log(1/I_f(i))`
//!   evaluated on the corner indicator of `Z_k^2` ([`hatami_ratio_exact`]).
//!
//! All logarithms are natural.

use serde::Serialize;

use crate::basis::OrthonormalBasis;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::influence::{influence_norms, InfluenceRecord};
use crate::measure::Measure;
use crate::spectral::forward_transform;
use crate::table::FunctionTable;

/// Slack allowed when checking `Var f <= sum_i ||Delta_i f||^2`.
pub const EFRON_STEIN_SLACK: f64 = 1e-12;

/// Tolerance on `|E g|` for [`prop8_ratio`].
pub const CENTERED_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfronStein {
    pub variance: f64,
    pub sum: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub sum_influences: f64,
    pub max_influence: f64,
    pub event_mass: f64,
    pub p_med: f64,
    pub log_inv_pmin: f64,
    /// `log(1/max_i I(i)) / (p_med log(1/p_min)) * mu(A) (1 - mu(A))`.
    pub rhs_core: f64,
    /// `sum_influences / rhs_core`; absent when `rhs_core = 0`.
    pub empirical_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub variance: f64,
    pub efron_stein_sum: f64,
    pub efron_stein_holds: bool,
    pub talagrand_terms: Vec<f64>,
    pub talagrand_sum: f64,
    pub p_min: f64,
    /// Absent when the alphabet is too large to enumerate subsets.
    pub p_med: Option<f64>,
    pub log_inv_pmin: f64,
    /// `log(2 / (p (1 - p)))` for two-letter alphabets with `p = mu({1})`.
    pub two_point_factor: Option<f64>,
    pub empirical_k: Option<f64>,
    pub influences: Vec<InfluenceRecord>,
    /// Present for 0/1-valued inputs with at least one positive sensitivity.
    pub corollary: Option<CorollaryReport>,
}

/// `||Delta_i f||_2^2 / log(e ||Delta_i f||_2 / ||Delta_i f||_1)`, with the
/// value 0 when `Delta_i f` vanishes.
pub fn talagrand_term(rec: &InfluenceRecord) -> f64 {
    if rec.l2 == 0.0 {
        return 0.0;
    }
    rec.l2 * rec.l2 / (1.0 + (rec.l2 / rec.l1).ln())
}

pub fn efron_stein_report(f: &FunctionTable, m: &Measure) -> Result<EfronStein> {
    let variance = f.variance(m)?;
    let recs = influence_norms(f, m)?;
    Ok(efron_stein_from(variance, &recs))
}

fn efron_stein_from(variance: f64, recs: &[InfluenceRecord]) -> EfronStein {
    let sum = recs.iter().map(|r| r.l2 * r.l2).sum();
    EfronStein {
        variance,
        sum,
        holds: variance <= sum + EFRON_STEIN_SLACK,
    }
}

pub fn talagrand_terms(f: &FunctionTable, m: &Measure) -> Result<Vec<f64>> {
    Ok(influence_norms(f, m)?.iter().map(talagrand_term).collect())
}

fn empirical_k_from(variance: f64, terms_sum: f64, m: &Measure) -> Option<f64> {
    (terms_sum > 0.0).then(|| variance / ((1.0 / m.p_min()).ln() * terms_sum))
}

/// `Var f / (log(1/p_min) sum_i T_i)`, absent when every term vanishes.
pub fn empirical_k(f: &FunctionTable, m: &Measure) -> Result<Option<f64>> {
    let variance = f.variance(m)?;
    let sum: f64 = talagrand_terms(f, m)?.iter().sum();
    Ok(empirical_k_from(variance, sum, m))
}

/// Full report for `f` under `mu^n`.
pub fn bound_report(f: &FunctionTable, m: &Measure) -> Result<BoundReport> {
    let variance = f.variance(m)?;
    let influences = influence_norms(f, m)?;
    let es = efron_stein_from(variance, &influences);
    let talagrand_terms: Vec<f64> = influences.iter().map(talagrand_term).collect();
    let talagrand_sum = talagrand_terms.iter().sum();
    let p_med = m.p_med().ok();
    let corollary = match p_med {
        Some(_) if f.is_indicator() && influences.iter().any(|r| r.sensitivity > 0.0) => {
            Some(corollary_from(f, m, &influences)?)
        }
        _ => None,
    };
    Ok(BoundReport {
        variance,
        efron_stein_sum: es.sum,
        efron_stein_holds: es.holds,
        talagrand_terms,
        talagrand_sum,
        p_min: m.p_min(),
        p_med,
        log_inv_pmin: (1.0 / m.p_min()).ln(),
        two_point_factor: m.bernoulli_p().map(|p| (2.0 / (p * (1.0 - p))).ln()),
        empirical_k: empirical_k_from(variance, talagrand_sum, m),
        influences,
        corollary,
    })
}

/// Event-form report for an indicator `f = 1_A`.
pub fn corollary_report(f: &FunctionTable, m: &Measure) -> Result<CorollaryReport> {
    if !f.is_indicator() {
        return Err(Error::NotIndicator);
    }
    let recs = influence_norms(f, m)?;
    corollary_from(f, m, &recs)
}

fn corollary_from(
    f: &FunctionTable,
    m: &Measure,
    recs: &[InfluenceRecord],
) -> Result<CorollaryReport> {
    let max_influence = recs.iter().map(|r| r.sensitivity).fold(0.0, f64::max);
    if max_influence <= 0.0 {
        return Err(Error::InvalidArgument(
            "every coordinate sensitivity is zero (constant event)".into(),
        ));
    }
    let sum_influences = recs.iter().map(|r| r.sensitivity).sum();
    let event_mass = f.mean(m)?.re;
    let p_med = m.p_med()?;
    let log_inv_pmin = (1.0 / m.p_min()).ln();
    let rhs_core = if max_influence >= 1.0 {
        0.0
    } else {
        (1.0 / max_influence).ln() / (p_med * log_inv_pmin) * event_mass * (1.0 - event_mass)
    };
    Ok(CorollaryReport {
        sum_influences,
        max_influence,
        event_mass,
        p_med,
        log_inv_pmin,
        rhs_core,
        empirical_c: (rhs_core > 0.0).then(|| sum_influences / rhs_core),
    })
}

/// The all-`omega` indicator with `omega = 0` carrying the minimal weight `q`.
pub fn sharpness_family(q: f64, k: usize, n: usize) -> Result<(FunctionTable, Measure)> {
    let fam = Family::AllEqual { q };
    let m = fam.measure(k)?;
    Ok((fam.table(k, n)?, m))
}

/// `sum_i ||Delta_i f||_2^2 / log(1/I_f(i))`; vanishing influences contribute 0,
/// a coordinate with `I_f(i) = 1` and nonzero `Delta_i f` contributes infinity.
pub fn hatami_sum(f: &FunctionTable, m: &Measure) -> Result<f64> {
    Ok(influence_norms(f, m)?
        .iter()
        .map(|r| {
            if r.l2 == 0.0 {
                0.0
            } else {
                r.l2 * r.l2 / (1.0 / r.sensitivity).ln()
            }
        })
        .sum())
}

/// `Var f / (10 * hatami_sum)` for the corner indicator `1{x_1 = x_2 = 0}` on
/// `Z_k^2` with the uniform measure, by exact enumeration. Values above 1
/// contradict the claimed inequality.
pub fn hatami_ratio_exact(k: usize) -> Result<f64> {
    let f = Family::Corner.table(k, 2)?;
    let m = Measure::uniform(k)?;
    Ok(f.variance(&m)? / (10.0 * hatami_sum(&f, &m)?))
}

/// Closed form of [`hatami_ratio_exact`]: `(1 + 1/k) log(k) / 20`.
pub fn hatami_ratio_closed_form(k: f64) -> f64 {
    (1.0 + 1.0 / k) * k.ln() / 20.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HatamiDisproof {
    /// Smallest `k` with closed-form ratio `>= 1`.
    pub closed_form_threshold_k: u64,
    pub ratio_at_threshold: f64,
    pub ratio_below_threshold: f64,
}

/// Locates the smallest alphabet where the corner indicator violates the
/// constant-10 claim. The closed form is increasing for `k >= 1`, so an
/// exponential bracket followed by bisection finds it.
pub fn hatami_disproof() -> HatamiDisproof {
    let ratio = |k: u64| hatami_ratio_closed_form(k as f64);
    let mut hi = 2u64;
    while ratio(hi) < 1.0 {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: ratio(lo) < 1 <= ratio(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ratio(mid) >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    HatamiDisproof {
        closed_form_threshold_k: hi,
        ratio_at_threshold: ratio(hi),
        ratio_below_threshold: ratio(hi - 1),
    }
}

/// `M(g)^2 log(e ||g||_2 / ||g||_1) / ||g||_2^2` for centered `g`; absent for
/// `g = 0`. The bound this probes involves unknown constants, so the value is
/// reported rather than checked.
pub fn prop8_ratio(g: &FunctionTable, b: &OrthonormalBasis) -> Result<Option<f64>> {
    let m = b.measure();
    let mean = g.mean(m)?;
    if mean.norm() > CENTERED_TOLERANCE {
        return Err(Error::NotCentered(mean.norm()));
    }
    let l2 = g.lp_norm(m, 2.0)?;
    if l2 == 0.0 {
        return Ok(None);
    }
    let l1 = g.lp_norm(m, 1.0)?;
    let m_sq = forward_transform(g, b)?.m_squared();
    Ok(Some(m_sq * (1.0 + (l2 / l1).ln()) / (l2 * l2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn uniform(k: usize) -> Measure {
        Measure::uniform(k).unwrap()
    }

    #[test]
    fn efron_stein_parity_and_dictator() {
        let m = uniform(2);
        let parity = Family::Parity.table(2, 2).unwrap();
        let es = efron_stein_report(&parity, &m).unwrap();
        assert!((es.variance - 1.0).abs() < 1e-15);
        assert!((es.sum - 2.0).abs() < 1e-15);
        assert!(es.holds);

        let dict = Family::Dictator.table(2, 2).unwrap();
        let es = efron_stein_report(&dict, &m).unwrap();
        assert_eq!(es.variance, 0.25);
        assert_eq!(es.sum, 0.25);
        assert!(es.holds);
    }

    #[test]
    fn talagrand_examples() {
        let m = uniform(2);
        let dict = Family::Dictator.table(2, 2).unwrap();
        assert_eq!(talagrand_terms(&dict, &m).unwrap(), vec![0.25, 0.0]);
        let parity = Family::Parity.table(2, 2).unwrap();
        for t in talagrand_terms(&parity, &m).unwrap() {
            assert!((t - 1.0).abs() < 1e-15);
        }
        // all-equal, k = 2, n = 1
        let q = 0.2;
        let (f, mq) = sharpness_family(q, 2, 1).unwrap();
        let t = talagrand_terms(&f, &mq).unwrap()[0];
        let want = q * (1.0 - q) / (1.0 + (1.0 / (2.0 * (q * (1.0 - q)).sqrt())).ln());
        assert!((t - want).abs() < 1e-15);
    }

    #[test]
    fn empirical_k_examples() {
        let m = uniform(2);
        let konst = FunctionTable::from_fn(2, 2, |_| Complex64::new(3.0, 0.0)).unwrap();
        assert_eq!(empirical_k(&konst, &m).unwrap(), None);
        let dict = Family::Dictator.table(2, 2).unwrap();
        let kk = empirical_k(&dict, &m).unwrap().unwrap();
        assert!((kk - 1.0 / 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn corollary_examples() {
        let m = uniform(2);
        let dict = Family::Dictator.table(2, 2).unwrap();
        let r = corollary_report(&dict, &m).unwrap();
        assert_eq!(r.rhs_core, 0.0);
        assert_eq!(r.empirical_c, None);

        let maj = Family::Majority3.table(2, 3).unwrap();
        let r = corollary_report(&maj, &m).unwrap();
        assert!((r.sum_influences - 1.5).abs() < 1e-15);
        assert!((r.rhs_core - 0.5).abs() < 1e-15);
        assert!((r.empirical_c.unwrap() - 3.0).abs() < 1e-12);

        let corner = Family::Corner.table(3, 2).unwrap();
        let r = corollary_report(&corner, &uniform(3)).unwrap();
        assert!((r.p_med - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.sum_influences - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.rhs_core - 24.0 / 81.0).abs() < 1e-14);
        assert!((r.empirical_c.unwrap() - 2.25).abs() < 1e-12);
    }

    #[test]
    fn corollary_errors() {
        let m = uniform(2);
        let parity = Family::Parity.table(2, 2).unwrap();
        assert_eq!(corollary_report(&parity, &m), Err(Error::NotIndicator));
        let zero = FunctionTable::from_real(2, 1, &[0.0, 0.0]).unwrap();
        assert!(matches!(
            corollary_report(&zero, &m),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn sharpness_examples() {
        let (f, m) = sharpness_family(0.25, 2, 1).unwrap();
        assert!((f.variance(&m).unwrap() - 3.0 / 16.0).abs() < 1e-15);
        let q = 1.0 / 9.0;
        let (f, m) = sharpness_family(q, 3, 2).unwrap();
        assert!((f.variance(&m).unwrap() - q * q * (1.0 - q * q)).abs() < 1e-15);
        assert!(sharpness_family(1.0 / 3.0, 3, 2).is_err());
        assert!(sharpness_family(0.0, 3, 2).is_err());
    }

    #[test]
    fn sharpness_limit_value() {
        let q = 2f64.powi(-20);
        let (f, m) = sharpness_family(q, 2, 1).unwrap();
        let kk = empirical_k(&f, &m).unwrap().unwrap();
        let closed = (1.0 + (1.0 / (2.0 * (q * (1.0 - q)).sqrt())).ln()) / (1.0 / q).ln();
        assert!((kk - closed).abs() < 1e-12);
        assert!((kk - 0.522).abs() < 5e-4);
    }

    #[test]
    fn hatami_examples() {
        let r2 = hatami_ratio_exact(2).unwrap();
        assert!((r2 - (3.0 / 16.0) * 2f64.ln() / 2.5).abs() < 1e-15);
        assert!((r2 - 0.05199).abs() < 1e-5);
        let r4 = hatami_ratio_exact(4).unwrap();
        assert!((r4 - 0.08664).abs() < 1e-5);
        assert!((r4 - hatami_ratio_closed_form(4.0)).abs() < 1e-15);
        assert!((hatami_ratio_closed_form(1e8) - 0.92103).abs() < 1e-5);
        assert!((hatami_ratio_closed_form(1e9) - 1.03616).abs() < 1e-5);
    }

    #[test]
    fn hatami_threshold_brackets_one() {
        let d = hatami_disproof();
        assert!(d.ratio_at_threshold >= 1.0);
        assert!(d.ratio_below_threshold < 1.0);
        assert!(
            d.closed_form_threshold_k > 100_000_000 && d.closed_form_threshold_k < 1_000_000_000
        );
    }

    #[test]
    fn prop8_examples() {
        let m = uniform(2);
        let b = OrthonormalBasis::gram_schmidt(&m).unwrap();
        let parity = Family::Parity.table(2, 2).unwrap();
        assert!((prop8_ratio(&parity, &b).unwrap().unwrap() - 0.5).abs() < 1e-15);

        let skew = Measure::new(vec![0.7, 0.2, 0.1]).unwrap();
        let b3 = OrthonormalBasis::gram_schmidt(&skew).unwrap();
        // g = u_y with [y] = 1: ratio = log(e ||g||_2 / ||g||_1)
        let g = FunctionTable::from_fn(3, 2, |x| Complex64::new(b3.entry(2, x[1]), 0.0)).unwrap();
        let l1 = g.lp_norm(&skew, 1.0).unwrap();
        let l2 = g.lp_norm(&skew, 2.0).unwrap();
        let r = prop8_ratio(&g, &b3).unwrap().unwrap();
        assert!((r - (1.0 + (l2 / l1).ln())).abs() < 1e-12);
        assert!(r >= 1.0);

        let zero = FunctionTable::from_real(2, 2, &[0.0; 4]).unwrap();
        assert_eq!(prop8_ratio(&zero, &b).unwrap(), None);
        let dict = Family::Dictator.table(2, 2).unwrap();
        assert!(matches!(prop8_ratio(&dict, &b), Err(Error::NotCentered(_))));
    }

    #[test]
    fn report_sections() {
        let m = uniform(2);
        let r = bound_report(&Family::Majority3.table(2, 3).unwrap(), &m).unwrap();
        assert!(r.corollary.is_some());
        assert!(r.two_point_factor.is_some());
        let r = bound_report(&Family::Random { seed: 1 }.table(2, 3).unwrap(), &m).unwrap();
        assert!(r.corollary.is_none());
        assert!(r.efron_stein_holds);
        assert!(r.talagrand_sum <= r.efron_stein_sum);
    }
}
