//! Defective eigenvalues of dense complex matrices computed as
//! pseudo-eigenvalues.
//!
//! A defective eigenvalue `lambda` with geometric multiplicity `m` and
//! smallest Jordan block size `k` (the multiplicity support `m x k`) is
//! recovered as the `lambda` component of the least-squares zero of
//!
//! ```text
//! g(A, lambda, X) = ( (A - lambda I) X - X S ,  C^H X - T )
//! ```
//!
//! solved by Gauss-Newton. The problem is well posed: the computed value is
//! Lipschitz in `A` with constant equal to the norm of the pseudoinverse of the
//! partial Jacobian, and it is an exact eigenvalue of a nearby matrix
//! `A - E X^dagger` with a Jordan block of size at least `k`.
//!
//! Module map:
//! - [`linalg`]: QR, least squares, SVD, inverse iteration, baseline eigensolver
//! - [`mapping`]: parameters `(C, S, T)`, residual `g` and its partial Jacobian
//! - [`solver`]: staircase initialization, Gauss-Newton, backward certificate
//! - [`identify`]: geometric multiplicity and Segre anchor identification
//! - [`refine`]: orthonormalization of `X` followed by a second Gauss-Newton pass

pub mod error;
pub mod fixtures;
pub mod identify;
pub mod linalg;
pub mod mapping;
pub mod matrix;
pub mod planted;
pub mod random;
pub mod refine;
pub mod solver;

pub use error::{Error, Result};
pub use identify::{anchor_search, anchor_search_with, numerical_nullity, AnchorDiagnostics, AnchorRow, AnchorThresholds, Verdict};
pub use mapping::{MultiplicitySupport, PencilParameters};
pub use matrix::{ComplexMatrix, C64};
pub use refine::{orthonormalize, refine, Orthonormalized};
pub use solver::{certify, choose_c, init_staircase, pseudoeig, BackwardCertificate, CStrategy, PseudoEigSolution, SolverConfig};
