//! Metric invariants of finite metric spaces, with exact closed forms for
//! weighted Hamming cubes and weighted metric trees.
//!
//! The crate computes and cross-verifies, for a space given by points,
//! cube vertices, a tree, or a raw distance matrix:
//!
//! - determinant, cofactor sum, rank, and kernel of the distance matrix;
//! - (strict) p-negative type, the supremal exponent, and generalized
//!   roundness witnesses;
//! - negative-type gaps by exact sign-pattern enumeration;
//! - M-constants by three independent routes;
//! - the closed-form constants for cubes and trees, checked against
//!   brute-force oracles.
//!
//! Arithmetic is dual-mode: exact rationals or floats under a single
//! absolute tolerance. With the default `parallel` feature the heavy inner
//! loops (sign-pattern enumeration, parameter scans, randomized suites)
//! run on rayon; disabling the feature falls back to sequential loops with
//! identical results.
//!
//! ```
//! use cubemetrics::negtype::{negative_type_gap, GapMethod};
//! use cubemetrics::{fixtures, Scalar, DEFAULT_TOL};
//!
//! let star = fixtures::star_space();
//! assert_eq!(
//!     star.distance_matrix().det().unwrap(),
//!     Scalar::from_int(-12),
//! );
//! let gap = negative_type_gap(&star, &Scalar::from_int(1), GapMethod::SignEnum, DEFAULT_TOL)
//!     .unwrap();
//! assert_eq!(gap.gamma, Scalar::from_ratio(1, 3));
//! ```

#![forbid(unsafe_code)]

pub mod fixtures;
pub mod hamming;
pub mod linalg;
pub mod negtype;
pub mod oracles;
pub mod report;
pub mod scalar;
pub mod space;
pub mod trees;

mod exec;

pub use linalg::{CauchyBinet, LinAlgError, Matrix, Vector};
pub use scalar::{Mode, Scalar, DEFAULT_TOL};
pub use space::{
    f0_difference_basis, CoefficientVector, FiniteMetricSpace, Hyperplane, MetricError,
    PDistanceMatrix, Provenance,
};
