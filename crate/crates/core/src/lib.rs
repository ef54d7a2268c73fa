//! Haar wavelet quasilinearization for doubly singular two-point boundary
//! value problems
//!
//! ```text
//! (p(x) y')' = q(x) f(x, y),   0 < x < 1,
//! ```
//!
//! with either Dirichlet data `y(0) = a, y(1) = b` or Neumann-Robin data
//! `y'(0) = 0, alpha y(1) + beta y'(1) = gamma`. `p` may vanish at 0 and `q`
//! may be unbounded there.
//!
//! The outer loop is Newton-type quasilinearization; each linear sweep is
//! solved by collocating a Haar expansion of `y''` at the midpoint grid.
//! [`greens`] provides an independent integral-form check of any computed
//! solution and [`catalog`] carries eight classical test problems.

pub mod catalog;
pub mod error;
pub mod expr;
pub mod greens;
pub mod haar;
pub mod linalg;
pub mod problem;
pub mod problem_file;
pub mod qlin;
pub mod quad;
pub mod report;

pub use error::{Error, Result};
pub use haar::HaarBasis;
pub use problem::{BoundaryCondition, ProblemSpec};
pub use qlin::{solve, Solution, SolverConfig};
