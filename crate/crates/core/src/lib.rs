//! Numerical laboratory for Waring-Goldbach representation counts, the
//! circle-method exponential sums behind them, and their twists by Hecke
//! eigenvalues of the discriminant form.

pub mod arith;
pub mod error;
pub mod expsum;
pub mod hecke;
pub mod numeric;
pub mod phase;
pub mod probmodel;
pub mod repcount;
pub mod satotate;
pub mod sieve;
pub mod singular;

pub use arith::{ArcKind, ArcLabel, ArcLevel, DirichletCharacter, RationalApprox};
pub use error::{Error, Result};
pub use expsum::{Alpha, BoundParams, ExpSumSample, MinorBounds};
pub use hecke::{CoeffMode, HeckeCoeff, HeckeTable, PrimeCoeff, Unit, Zero};
pub use probmodel::{ConjectureRow, EventCounts, GoldbachAverage, ProbModel};
pub use repcount::{ComplementTable, CountKind, CountTable};
pub use satotate::{AngleInterval, EquidistributionRow, Side, SmoothingFunction};
pub use sieve::{SieveConfig, SieveTable};
pub use singular::{MainTermKind, SeriesValue, SingularSeries};
pub use num_complex::Complex64;
