//! Fourier analysis of functions on finite product spaces `Z_k^n` with an
//! arbitrary strictly positive product measure, and the influence-based
//! variance bounds built on it.
//!
//! The pieces, bottom up:
//!
//! * [`measure`], [`index`], [`table`]: measures, mixed-radix point indexing and
//!   dense function tables with exact moments;
//! * [`basis`]: the measure-adapted orthonormal basis `c_l`, the characters
//!   `w_y`, and `theta`;
//! * [`spectral`]: the fast tensor transform into the `u_y` basis, level
//!   weights and `M(g)^2`;
//! * [`influence`]: `Delta_i f` and the sensitivity `I_f(i)`;
//! * [`bounds`]: Efron-Stein and Talagrand-type reports, the event form, the
//!   sharpness family and the constant-10 counterexample;
//! * [`hyper`]: level-4 hypercontractive ratios and the symmetrization
//!   identities;
//! * [`montecarlo`]: seeded estimators for instances beyond the table cap.
//!
//! Every reduction goes through [`reduce::tree_sum`], so results do not depend
//! on the size of the rayon pool.

pub mod basis;
pub mod bounds;
pub mod error;
pub mod family;
pub mod hyper;
pub mod index;
pub mod influence;
pub mod io;
pub mod measure;
pub mod montecarlo;
pub mod reduce;
pub mod rng;
pub mod spectral;
pub mod table;

pub use basis::{character, OrthonormalBasis, RootsOfUnity};
pub use bounds::{BoundReport, CorollaryReport, EfronStein, HatamiDisproof};
pub use error::{Error, Result};
pub use family::{Family, FamilyName};
pub use hyper::{LetterBasis, ReplicatedPoint};
pub use index::{PointIndex, Shape};
pub use influence::InfluenceRecord;
pub use measure::Measure;
pub use montecarlo::{Estimate, PointOracle};
pub use num_complex::Complex64;
pub use spectral::{forward_transform, inverse_transform, Spectrum};
pub use table::FunctionTable;
