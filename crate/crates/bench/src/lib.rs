//! Shared fixtures for the benchmarks.

use talabounds_core::{Family, FunctionTable, Measure, OrthonormalBasis};

/// Seeded table with values in `[-1, 1)`.
pub fn random_table(k: usize, n: usize, seed: u64) -> FunctionTable {
    Family::Random { seed }
        .table(k, n)
        .expect("benchmark shape fits the table cap")
}

/// A non-uniform measure with weights proportional to `1, 2, ..., k`.
pub fn ramp_measure(k: usize) -> Measure {
    let total = (k * (k + 1) / 2) as f64;
    Measure::new((1..=k).map(|j| j as f64 / total).collect())
        .expect("ramp weights are a distribution")
}

pub fn ramp_basis(k: usize) -> OrthonormalBasis {
    OrthonormalBasis::gram_schmidt(&ramp_measure(k)).expect("ramp measure is non-degenerate")
}
