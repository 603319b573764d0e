//! Builtin test functions.
//!
//! | name        | definition                                   | constraints      |
//! |-------------|----------------------------------------------|------------------|
//! | `dictator`  | `1{x_1 = 1}`                                 |                  |
//! | `parity`    | `(-1)^{x_1 + ... + x_n}`                     | `k = 2`          |
//! | `majority3` | majority of `x_1, x_2, x_3`                  | `k = 2`, `n >= 3`|
//! | `all-equal` | `1{x_i = 0 for all i}`, weight `q` on `0`    | `0 < q < 1/k`    |
//! | `corner`    | `1{x_1 = 0, x_2 = 0}`                        | `n >= 2`         |
//! | `random`    | i.i.d. uniform reals in `[-1, 1)` per point  |                  |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::index::Shape;
use crate::measure::Measure;
use crate::rng;
use crate::table::FunctionTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Dictator,
    Parity,
    Majority3,
    AllEqual { q: f64 },
    Corner,
    Random { seed: u64 },
}

/// Family name without parameters, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyName {
    Dictator,
    Parity,
    Majority3,
    AllEqual,
    Corner,
    Random,
}

impl FamilyName {
    pub const ALL: [FamilyName; 6] = [
        FamilyName::Dictator,
        FamilyName::Parity,
        FamilyName::Majority3,
        FamilyName::AllEqual,
        FamilyName::Corner,
        FamilyName::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Dictator => "dictator",
            FamilyName::Parity => "parity",
            FamilyName::Majority3 => "majority3",
            FamilyName::AllEqual => "all-equal",
            FamilyName::Corner => "corner",
            FamilyName::Random => "random",
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family '{s}'")))
    }
}

impl Family {
    /// Binds parameters to a family name. `q` is required for `all-equal`,
    /// `seed` defaults to 0 for `random`.
    pub fn from_name(name: FamilyName, q: Option<f64>, seed: Option<u64>) -> Result<Self> {
        Ok(match name {
            FamilyName::Dictator => Family::Dictator,
            FamilyName::Parity => Family::Parity,
            FamilyName::Majority3 => Family::Majority3,
            FamilyName::Corner => Family::Corner,
            FamilyName::Random => Family::Random {
                seed: seed.unwrap_or(0),
            },
            FamilyName::AllEqual => Family::AllEqual {
                q: q.ok_or_else(|| Error::InvalidArgument("family all-equal needs q".into()))?,
            },
        })
    }

    pub fn name(&self) -> FamilyName {
        match self {
            Family::Dictator => FamilyName::Dictator,
            Family::Parity => FamilyName::Parity,
            Family::Majority3 => FamilyName::Majority3,
            Family::AllEqual { .. } => FamilyName::AllEqual,
            Family::Corner => FamilyName::Corner,
            Family::Random { .. } => FamilyName::Random,
        }
    }

    pub fn check(&self, k: usize, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if k < 2 || n < 1 {
            return bad(format!("need k >= 2 and n >= 1, got k = {k}, n = {n}"));
        }
        match *self {
            Family::Parity if k != 2 => bad("parity requires k = 2".into()),
            Family::Majority3 if k != 2 || n < 3 => {
                bad("majority3 requires k = 2 and n >= 3".into())
            }
            Family::Corner if n < 2 => bad("corner requires n >= 2".into()),
            Family::AllEqual { q } if !(q > 0.0 && q < 1.0 / k as f64) => bad(format!(
                "all-equal requires 0 < q < 1/k, got q = {q}, k = {k}"
            )),
            _ => Ok(()),
        }
    }

    /// Natural measure: the `q`-weighted measure for `all-equal`, uniform
    /// otherwise.
    pub fn measure(&self, k: usize) -> Result<Measure> {
        match *self {
            Family::AllEqual { q } => all_equal_measure(q, k),
            _ => Measure::uniform(k),
        }
    }

    /// Value at a point; `x` must already be within `Z_k^n`.
    pub fn eval(&self, k: usize, x: &[usize]) -> Complex64 {
        let v = match *self {
            Family::Dictator => indicator(x[0] == 1),
            Family::Parity => {
                if x.iter().sum::<usize>() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Family::Majority3 => indicator(x[0] + x[1] + x[2] >= 2),
            Family::AllEqual { .. } => indicator(x.iter().all(|&v| v == 0)),
            Family::Corner => indicator(x[0] == 0 && x[1] == 0),
            Family::Random { seed } => {
                let flat = x.iter().rev().fold(0u64, |acc, &v| {
                    acc.wrapping_mul(k as u64).wrapping_add(v as u64)
                });
                rng::stream(seed, flat).random_range(-1.0..1.0)
            }
        };
        Complex64::new(v, 0.0)
    }

    pub fn table(&self, k: usize, n: usize) -> Result<FunctionTable> {
        self.check(k, n)?;
        Shape::new(k, n)?;
        FunctionTable::from_fn(k, n, |x| self.eval(k, x))
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Weight `q` on letter 0 and `(1 - q) / (k - 1)` on each other letter.
pub fn all_equal_measure(q: f64, k: usize) -> Result<Measure> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("alphabet size k = {k} < 2")));
    }
    if !(q > 0.0 && q < 1.0 / k as f64) {
        return Err(Error::InvalidArgument(format!(
            "weight q = {q} must satisfy 0 < q < 1/k = {}",
            1.0 / k as f64
        )));
    }
    let mut p = vec![(1.0 - q) / (k - 1) as f64; k];
    p[0] = q;
    Measure::validate(k, p)
}
