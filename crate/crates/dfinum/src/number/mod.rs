//! Exact arithmetic foundation: rationals, Gaussian rationals, polynomials,
//! rational functions, complex enclosures and certified root isolation.

pub mod dyadic;
pub mod enclosure;
pub mod gaussian;
pub mod poly;
pub mod ratfun;
pub mod roots;

pub use dyadic::Dyadic;
pub use enclosure::{Enclosure, NumberValue};
pub use gaussian::GaussianRational;
pub use poly::{Field, Poly, PolyG};
pub use ratfun::RationalFunction;
pub use roots::{complex_roots, distance_lower_bound};
