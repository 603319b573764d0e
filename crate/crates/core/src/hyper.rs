//! Hypercontractive `L^4` ratios and the symmetrization identities behind them.
//!
//! For a homogeneous polynomial `P = sum_{[y] = m} a_y u_y` the quantity of
//! interest is `||P||_{L^4(mu^n)} / (sum |a_y|^2)^{1/2}`, bounded by
//! `(C theta k^gamma)^m` with unknown constants. Everything here is computed by
//! exact enumeration.
//!
//! The symmetrization lives on `G = (Z_k^n)^k` with the product measure
//! `mu_k^n`. A point `X = (X^0, ..., X^{k-1})` of `G` is a [`ReplicatedPoint`];
//! `g_y(X) = prod_{y_i != 0} sum_l c_{y_i}(X_i^l) eps^{l y_i}`.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{OrthonormalBasis, RootsOfUnity};
use crate::error::{Error, Result};
use crate::index::Shape;
use crate::measure::Measure;
use crate::reduce::tree_sum;
use crate::rng;
use crate::spectral::{forward_transform, sweep_all_axes};
use crate::table::{weighted_lp, FunctionTable};

/// Cap on enumerations over products of copies of `Z_k^n`.
pub const REPLICA_CAP: u128 = 1 << 20;

/// Number of histogram bins in [`TrialSummary`].
pub const HISTOGRAM_BINS: usize = 10;

/// One-letter orthonormal system with complex entries, used to evaluate
/// polynomials in either the measure-adapted basis or the characters.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterBasis {
    measure: Measure,
    /// Row-major: row `l` holds the `l`-th function on `Z_k`.
    rows: Vec<Complex64>,
}

impl LetterBasis {
    pub fn from_orthonormal(b: &OrthonormalBasis) -> Self {
        LetterBasis {
            measure: b.measure().clone(),
            rows: b.matrix().iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// Characters `w_l(j) = eps^{l j}` with the uniform measure.
    pub fn characters(k: usize) -> Result<Self> {
        let measure = Measure::uniform(k)?;
        let roots = RootsOfUnity::new(k);
        let rows = (0..k * k)
            .map(|rc| roots.pow(((rc / k) * (rc % k)) as i64))
            .collect();
        Ok(LetterBasis { measure, rows })
    }

    pub fn k(&self) -> usize {
        self.measure.k()
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    /// Values of `sum_y a_y v_y` at every point, `v_y` the tensor products.
    fn synthesize(&self, shape: Shape, dense: Vec<Complex64>) -> Vec<Complex64> {
        let k = self.k();
        let matrix: Vec<Complex64> = (0..k * k)
            .map(|rc| self.rows[(rc % k) * k + rc / k])
            .collect();
        sweep_all_axes(shape, dense, &matrix)
    }
}

/// Sparse coefficients keyed by flat frequency index.
pub type Coefficients = [(usize, Complex64)];

fn densify(shape: Shape, coeffs: &Coefficients, level: usize) -> Result<Vec<Complex64>> {
    let mut dense = vec![Complex64::new(0.0, 0.0); shape.len()];
    for &(y, a) in coeffs {
        if y >= shape.len() {
            return Err(Error::OutOfRange(format!(
                "frequency {y} not in [0, {})",
                shape.len()
            )));
        }
        if shape.level_of(y) != level {
            return Err(Error::InvalidArgument(format!(
                "frequency {y} has level {}, expected {level}",
                shape.level_of(y)
            )));
        }
        dense[y] += a;
    }
    Ok(dense)
}

/// `||sum a_y u_y||_4 / (sum |a_y|^2)^{1/2}` in the measure-adapted basis.
pub fn level4_ratio(
    b: &OrthonormalBasis,
    n: usize,
    coeffs: &Coefficients,
    level: usize,
) -> Result<f64> {
    level4_ratio_with(&LetterBasis::from_orthonormal(b), n, coeffs, level)
}

/// [`level4_ratio`] for an arbitrary [`LetterBasis`].
pub fn level4_ratio_with(
    basis: &LetterBasis,
    n: usize,
    coeffs: &Coefficients,
    level: usize,
) -> Result<f64> {
    let shape = Shape::new(basis.k(), n)?;
    if level > n {
        return Err(Error::OutOfRange(format!("level {level} not in [0, {n}]")));
    }
    let dense = densify(shape, coeffs, level)?;
    let l2sq: f64 = dense.iter().map(|a| a.norm_sqr()).sum();
    if l2sq == 0.0 {
        return Err(Error::InvalidArgument("all coefficients are zero".into()));
    }
    let w = basis.measure.product_weights(n, shape.len());
    Ok(ratio_of(basis, shape, dense, &w, l2sq))
}

fn ratio_of(basis: &LetterBasis, shape: Shape, dense: Vec<Complex64>, w: &[f64], l2sq: f64) -> f64 {
    let values = basis.synthesize(shape, dense);
    weighted_lp(&values, w, 4.0) / l2sq.sqrt()
}

/// Where the maximum of a [`level4_search`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidate {
    /// A single frequency, by flat index.
    Single(usize),
    /// A seeded random draw, by trial index.
    Trial(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub count: u64,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    /// Equal-width bins spanning `[min, max]`.
    pub histogram: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level4Search {
    pub level: usize,
    pub frequencies: usize,
    pub max_ratio: f64,
    pub argmax: Candidate,
    /// Coefficients of the maximizer, `(flat frequency, value)`.
    pub argmax_coeffs: Vec<(usize, [f64; 2])>,
    pub single_frequency_max: f64,
    pub trials: TrialSummary,
}

/// Maximizes the level-`level` ratio over every single frequency and `trials`
/// complex Gaussian draws normalized to unit `l^2`. Trial `t` draws from the
/// counter stream `(seed, t)`; ties go to the earliest candidate (single
/// frequencies first, then trials by index).
pub fn level4_search(
    b: &OrthonormalBasis,
    n: usize,
    level: usize,
    trials: u64,
    seed: u64,
) -> Result<Level4Search> {
    level4_search_with(&LetterBasis::from_orthonormal(b), n, level, trials, seed)
}

pub fn level4_search_with(
    basis: &LetterBasis,
    n: usize,
    level: usize,
    trials: u64,
    seed: u64,
) -> Result<Level4Search> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let shape = Shape::new(basis.k(), n)?;
    if level > n {
        return Err(Error::OutOfRange(format!("level {level} not in [0, {n}]")));
    }
    let freqs: Vec<usize> = (0..shape.len())
        .filter(|&y| shape.level_of(y) == level)
        .collect();
    let w = basis.measure.product_weights(n, shape.len());

    let singles: Vec<f64> = freqs
        .par_iter()
        .map(|&y| {
            let mut dense = vec![Complex64::new(0.0, 0.0); shape.len()];
            dense[y] = Complex64::new(1.0, 0.0);
            ratio_of(basis, shape, dense, &w, 1.0)
        })
        .collect();

    let draw = |t: u64| -> Vec<Complex64> {
        let mut rng = rng::stream(seed, t);
        let mut a: Vec<Complex64> = freqs
            .iter()
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut a {
            *z /= norm;
        }
        a
    };
    let trial_ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = draw(t);
            let l2sq = a.iter().map(|z| z.norm_sqr()).sum();
            let mut dense = vec![Complex64::new(0.0, 0.0); shape.len()];
            for (&y, &z) in freqs.iter().zip(&a) {
                dense[y] = z;
            }
            ratio_of(basis, shape, dense, &w, l2sq)
        })
        .collect();

    let mut best = (f64::NEG_INFINITY, Candidate::Single(freqs[0]));
    for (&y, &r) in freqs.iter().zip(&singles) {
        if r > best.0 {
            best = (r, Candidate::Single(y));
        }
    }
    for (t, &r) in trial_ratios.iter().enumerate() {
        if r > best.0 {
            best = (r, Candidate::Trial(t as u64));
        }
    }
    let argmax_coeffs = match best.1 {
        Candidate::Single(y) => vec![(y, [1.0, 0.0])],
        Candidate::Trial(t) => freqs
            .iter()
            .zip(draw(t))
            .map(|(&y, z)| (y, [z.re, z.im]))
            .collect(),
    };
    Ok(Level4Search {
        level,
        frequencies: freqs.len(),
        max_ratio: best.0,
        argmax: best.1,
        argmax_coeffs,
        single_frequency_max: singles.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        trials: summarize(&trial_ratios),
    })
}

fn summarize(values: &[f64]) -> TrialSummary {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = crate::reduce::sum_slice(values) / values.len() as f64;
    let mut histogram = vec![0u64; HISTOGRAM_BINS];
    let width = max - min;
    for &v in values {
        let bin = if width > 0.0 {
            (((v - min) / width) * HISTOGRAM_BINS as f64) as usize
        } else {
            0
        };
        histogram[bin.min(HISTOGRAM_BINS - 1)] += 1;
    }
    TrialSummary {
        count: values.len() as u64,
        min,
        mean,
        max,
        histogram,
    }
}

/// A point `X = (X^0, ..., X^{k-1})` of `(Z_k^n)^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicatedPoint {
    k: usize,
    n: usize,
    /// Row-major: `entries[l * n + i] = X_i^l`.
    entries: Vec<usize>,
}

impl ReplicatedPoint {
    /// `rows[l]` is `X^l`; there must be `k` rows of equal length `n >= 1`.
    pub fn new(k: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "expected {k} rows, got {}",
                rows.len()
            )));
        }
        let n = rows[0].len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "rows must share a nonzero length".into(),
            ));
        }
        if let Some(&v) = rows.iter().flatten().find(|&&v| v >= k) {
            return Err(Error::OutOfRange(format!("entry {v} not in [0, {k})")));
        }
        Ok(ReplicatedPoint {
            k,
            n,
            entries: rows.concat(),
        })
    }

    /// Builds `X` from the flat indices of its rows in `shape`.
    pub fn from_flats(shape: Shape, flats: &[usize]) -> Self {
        let (k, n) = (shape.k(), shape.n());
        debug_assert_eq!(flats.len(), k);
        let mut entries = vec![0; k * n];
        for (l, &flat) in flats.iter().enumerate() {
            shape.decode_into(flat, &mut entries[l * n..(l + 1) * n]);
        }
        ReplicatedPoint { k, n, entries }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `X_i^l` (0-based `i`).
    pub fn get(&self, l: usize, i: usize) -> usize {
        self.entries[l * self.n + i]
    }

    pub fn row(&self, l: usize) -> &[usize] {
        &self.entries[l * self.n..(l + 1) * self.n]
    }

    /// `X_z` with `(X_z)_i^l = X_i^{(l + z_i) mod k}`.
    pub fn shifted(&self, z: &[usize]) -> Result<Self> {
        self.check_frequency(z)?;
        let mut entries = vec![0; self.entries.len()];
        for l in 0..self.k {
            for (i, &zi) in z.iter().enumerate() {
                entries[l * self.n + i] = self.get((l + zi) % self.k, i);
            }
        }
        Ok(ReplicatedPoint {
            k: self.k,
            n: self.n,
            entries,
        })
    }

    fn check_frequency(&self, y: &[usize]) -> Result<()> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector has {} coordinates, point has {}",
                y.len(),
                self.n
            )));
        }
        if let Some(&v) = y.iter().find(|&&v| v >= self.k) {
            return Err(Error::OutOfRange(format!(
                "entry {v} not in [0, {})",
                self.k
            )));
        }
        Ok(())
    }
}

fn check_replica(b: &OrthonormalBasis, x: &ReplicatedPoint) -> Result<()> {
    if b.k() != x.k {
        return Err(Error::DimensionMismatch(format!(
            "basis alphabet k = {} but point has k = {}",
            b.k(),
            x.k
        )));
    }
    Ok(())
}

fn g_unchecked(
    b: &OrthonormalBasis,
    roots: &RootsOfUnity,
    y: &[usize],
    x: &ReplicatedPoint,
) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (i, &yi) in y.iter().enumerate() {
        if yi == 0 {
            continue;
        }
        let mut s = Complex64::new(0.0, 0.0);
        for l in 0..x.k {
            s += roots.pow((l * yi) as i64) * b.entry(yi, x.get(l, i));
        }
        acc *= s;
    }
    acc
}

/// `g_y(X)`.
pub fn g_y_eval(b: &OrthonormalBasis, y: &[usize], x: &ReplicatedPoint) -> Result<Complex64> {
    check_replica(b, x)?;
    x.check_frequency(y)?;
    Ok(g_unchecked(b, &RootsOfUnity::new(b.k()), y, x))
}

/// `g_{y,z}(X) = g_y(X) w_y(z)`.
pub fn g_yz_eval(
    b: &OrthonormalBasis,
    y: &[usize],
    z: &[usize],
    x: &ReplicatedPoint,
) -> Result<Complex64> {
    check_replica(b, x)?;
    x.check_frequency(z)?;
    let w = crate::basis::character(b.k(), y, z)?;
    Ok(g_y_eval(b, y, x)? * w)
}

/// `|g_{y,z}(X_z) - g_y(X)|`, zero up to rounding.
pub fn shift_invariance_check(
    b: &OrthonormalBasis,
    y: &[usize],
    z: &[usize],
    x: &ReplicatedPoint,
) -> Result<f64> {
    let lhs = g_yz_eval(b, y, z, &x.shifted(z)?)?;
    Ok((lhs - g_y_eval(b, y, x)?).norm())
}

fn replica_count(shape: Shape, copies: usize) -> Result<usize> {
    let required = (shape.len() as u128)
        .checked_pow(copies as u32)
        .unwrap_or(u128::MAX);
    if required > REPLICA_CAP {
        return Err(Error::CapExceeded {
            what: "replicated-space enumeration",
            required,
            cap: REPLICA_CAP,
        });
    }
    Ok(required as usize)
}

/// Splits `t` into `copies` base-`len` digits, least significant first.
fn split_counter(mut t: usize, len: usize, out: &mut [usize]) {
    for d in out.iter_mut() {
        *d = t % len;
        t /= len;
    }
}

/// `max_{X^0} | int g_y(X) d mu_{k-1}^n(X^1..X^{k-1}) - u_y(X^0) |` with the
/// inner integral enumerated point by point.
pub fn symmetrization_check(b: &OrthonormalBasis, y: &[usize]) -> Result<f64> {
    let k = b.k();
    let n = y.len();
    let shape = Shape::new(k, n)?;
    let inner = replica_count(shape, k - 1)?;
    if let Some(&v) = y.iter().find(|&&v| v >= k) {
        return Err(Error::OutOfRange(format!(
            "frequency entry {v} not in [0, {k})"
        )));
    }
    let w = b.measure().product_weights(n, shape.len());
    let roots = RootsOfUnity::new(k);
    let mut worst = 0.0f64;
    let mut x0 = vec![0; n];
    for flat0 in 0..shape.len() {
        let integral = tree_sum(inner, |t| {
            let mut flats = vec![0; k];
            flats[0] = flat0;
            split_counter(t, shape.len(), &mut flats[1..]);
            let weight: f64 = flats[1..].iter().map(|&f| w[f]).product();
            g_unchecked(b, &roots, y, &ReplicatedPoint::from_flats(shape, &flats)) * weight
        });
        shape.decode_into(flat0, &mut x0);
        let u = b.tensor_eval(y, &x0)?;
        worst = worst.max((integral - u).norm());
    }
    Ok(worst)
}

/// [`symmetrization_check`] for every frequency of `Z_k^n`, in flat order.
pub fn symmetrization_all(b: &OrthonormalBasis, n: usize) -> Result<Vec<(Vec<usize>, f64)>> {
    let shape = Shape::new(b.k(), n)?;
    (0..shape.len())
        .map(|flat| {
            let y = shape.decode(crate::index::PointIndex(flat))?;
            let err = symmetrization_check(b, &y)?;
            Ok((y, err))
        })
        .collect()
}

/// `L^4(mu_k^n)` norm of `X -> sum_y a_y g_y(X) * phase_y`.
fn replicated_l4(
    b: &OrthonormalBasis,
    shape: Shape,
    coeffs: &[(Vec<usize>, Complex64)],
    phases: &[Complex64],
) -> Result<f64> {
    let k = b.k();
    let total = replica_count(shape, k)?;
    let w = b.measure().product_weights(shape.n(), shape.len());
    let roots = RootsOfUnity::new(k);
    let fourth = tree_sum(total, |t| {
        let mut flats = vec![0; k];
        split_counter(t, shape.len(), &mut flats);
        let x = ReplicatedPoint::from_flats(shape, &flats);
        let weight: f64 = flats.iter().map(|&f| w[f]).product();
        let v: Complex64 = coeffs
            .iter()
            .zip(phases)
            .map(|((y, a), ph)| a * ph * g_unchecked(b, &roots, y, &x))
            .sum();
        v.norm_sqr().powi(2) * weight
    });
    Ok(fourth.powf(0.25))
}

fn decode_coeffs(
    shape: Shape,
    coeffs: &Coefficients,
    level: usize,
) -> Result<Vec<(Vec<usize>, Complex64)>> {
    densify(shape, coeffs, level)?;
    coeffs
        .iter()
        .map(|&(y, a)| Ok((shape.decode(crate::index::PointIndex(y))?, a)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JensenCheck {
    /// `||sum a_y u_y||_{L^4(mu^n)}`.
    pub polynomial_l4: f64,
    /// `||sum a_y g_y||_{L^4(mu_k^n)}`.
    pub replicated_l4: f64,
}

impl JensenCheck {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.polynomial_l4 <= self.replicated_l4 * (1.0 + rel_tol)
    }
}

/// Both sides of `||sum a_y u_y||_4 <= ||sum a_y g_y||_4`, by enumeration.
pub fn jensen_check(
    b: &OrthonormalBasis,
    n: usize,
    coeffs: &Coefficients,
    level: usize,
) -> Result<JensenCheck> {
    let shape = Shape::new(b.k(), n)?;
    let decoded = decode_coeffs(shape, coeffs, level)?;
    let dense = densify(shape, coeffs, level)?;
    let basis = LetterBasis::from_orthonormal(b);
    let values = basis.synthesize(shape, dense);
    let w = b.measure().product_weights(n, shape.len());
    let ones = vec![Complex64::new(1.0, 0.0); decoded.len()];
    Ok(JensenCheck {
        polynomial_l4: weighted_lp(&values, &w, 4.0),
        replicated_l4: replicated_l4(b, shape, &decoded, &ones)?,
    })
}

/// `(||sum a_y g_y||_4, ||sum a_y g_{y,z}||_4)` over `mu_k^n`; equal for every
/// fixed `z`.
pub fn shifted_norms(
    b: &OrthonormalBasis,
    n: usize,
    coeffs: &Coefficients,
    level: usize,
    z: &[usize],
) -> Result<(f64, f64)> {
    let shape = Shape::new(b.k(), n)?;
    shape.encode(z)?;
    let decoded = decode_coeffs(shape, coeffs, level)?;
    let ones = vec![Complex64::new(1.0, 0.0); decoded.len()];
    let phases = decoded
        .iter()
        .map(|(y, _)| crate::basis::character(b.k(), y, z))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        replicated_l4(b, shape, &decoded, &ones)?,
        replicated_l4(b, shape, &decoded, &phases)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualLevelReport {
    pub level: usize,
    pub level_weight: f64,
    pub norm_43: f64,
    /// `(level_weight / ||g||_{4/3}^2)^{1/(2 level)}`; 0 without level mass.
    pub ratio_root: f64,
}

pub fn dual_level_report(
    g: &FunctionTable,
    b: &OrthonormalBasis,
    level: usize,
) -> Result<DualLevelReport> {
    if level == 0 || level > g.n() {
        return Err(Error::OutOfRange(format!(
            "level {level} not in [1, {}]",
            g.n()
        )));
    }
    let level_weight = forward_transform(g, b)?.level_weight(level)?;
    let norm_43 = g.lp_norm(b.measure(), 4.0 / 3.0)?;
    let ratio_root = if level_weight == 0.0 {
        0.0
    } else {
        (level_weight / (norm_43 * norm_43)).powf(1.0 / (2.0 * level as f64))
    };
    Ok(DualLevelReport {
        level,
        level_weight,
        norm_43,
        ratio_root,
    })
}
