//! Construction, closure properties and validated numerical evaluation of
//! D-finite functions and P-recursive sequences over Q(i): algebraic
//! sequences converging to algebraic numbers, operator arithmetic,
//! recurrence/ODE conversions, and evaluation of D-finite functions at
//! non-singular algebraic points by analytic continuation.

pub mod error;
pub mod number;
pub mod algebraic;
pub mod limits;
pub mod evaluator;

pub use error::{Error, Result};
pub mod linalg;
pub mod ore;
pub mod text;
