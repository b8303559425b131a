//! Block Gram-Schmidt orthogonalization kernels with structural sync-point
//! accounting, two-precision variants, and extended-precision stability
//! metrics.
//!
//! The crate is organized around six pieces:
//!
//! - [`precision`]: scalar precisions (single, double, emulated double-double),
//!   the [`Scalar`](precision::Scalar) abstraction every kernel is generic
//!   over, and demotion/promotion between a low/high precision pair.
//! - [`linalg`]: self-contained dense kernels — matrix multiply, Householder
//!   QR, non-halting Cholesky, right triangular solve, and a one-sided Jacobi
//!   SVD for 2-norms and condition numbers.
//! - [`intraorth`]: the pluggable intraorthogonalization routines (`HouseQR`,
//!   `CholQR`) used as the first-block / intra-block step of every variant.
//! - [`bgs`]: the six block Gram-Schmidt algorithms themselves.
//! - [`metrics`]: loss of orthogonality and residuals, accumulated in
//!   double-double so measurement noise never masks algorithm error.
//! - [`testmat`]: deterministic generators for the four benchmark matrix
//!   classes with tunable target condition numbers.

pub mod bgs;
pub mod intraorth;
pub mod linalg;
pub mod metrics;
mod pmath;
pub mod precision;
pub mod rng;
pub mod testmat;

pub use bgs::{AlgorithmId, BlockMatrix, BlockQr, RunStats};
pub use intraorth::IntraorthId;
pub use linalg::{Matrix, UpperTriangular};
pub use metrics::StabilityReport;
pub use precision::{DoubleDouble, PrecisionId, PrecisionPair, Scalar};
pub use testmat::{Knobs, MatrixClass, MatrixSpec};
