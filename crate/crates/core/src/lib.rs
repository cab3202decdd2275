//! Random walks on wreath products G ≀ S_n: group tables and conjugacy
//! classes, exact spectra via the irreducible representations, distance
//! bounds for large n, an exact convolution oracle for small cases, and
//! Monte Carlo simulation.
//!
//! Numeric code is generic over [`scalar::Scalar`]; exact work uses
//! [`Rational`], bulk numerics use `f64`.

pub mod acceptance;
pub mod bounds;
pub mod classes;
pub mod error;
pub mod group;
pub mod logsum;
pub mod oracle;
pub mod partitions;
pub mod plancherel;
pub mod reps;
pub mod report;
pub mod scalar;
pub mod sim;
pub mod thresholds;
pub mod walks;

pub type Rational = num_rational::BigRational;
pub type ExactMatrix = oracle::TransitionMatrix<Rational>;
pub type FloatMatrix = oracle::TransitionMatrix<f64>;

pub use bounds::{distance_curve, DistanceCurve, DistanceMode, LnBound};
pub use error::{Error, Result};
pub use group::{build_group, build_wreath_table, GroupTable, WreathElement};
pub use partitions::Partition;
pub use reps::IrrepLabel;
pub use scalar::Scalar;
pub use thresholds::{mixing_threshold, Metric};
pub use walks::{build_measure, spectrum, SpectralLine, WalkKind, WalkMeasure};
