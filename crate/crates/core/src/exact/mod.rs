//! Exact scalar and linear algebra over `Z[d]` and `Q`.
//!
//! `d` denotes the loop parameter: composing two diagrams multiplies the
//! coefficient by `d` once per closed loop, so every structure constant and
//! every Gram matrix entry in this crate lives in the polynomial ring `Z[d]`.

mod matrix;
mod poly;
mod roots;

pub use matrix::{rational_nullspace, rational_rank, MatrixError, PolyMatrix};
pub use poly::{DeltaPoly, PolyError};
pub use roots::{factor, roots_of, Factor, Factorization, RootSite};

pub(crate) use matrix::solve_rational as solve_in_span;
