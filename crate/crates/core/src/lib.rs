//! Exact computation of modular hyperelliptic curves.
//!
//! The crate recovers hyperelliptic equations from truncated q-expansions of
//! regular differentials, decides when a space of weight-2 newforms cuts out
//! a new modular hyperelliptic curve, runs the genus-3 coefficient sieve, and
//! evaluates the numeric bounds that restrict such curves.
//!
//! Everything is exact: rationals are `num_rational::BigRational`, number
//! field elements live in power bases, and q-series carry their precision.

pub mod algebra;
pub mod arith;
pub mod bounds;
pub mod criterion;
pub mod dirichlet;
pub mod hypgeom;
pub mod newform;
pub mod recover;
pub mod sieve;

mod error;

pub use algebra::{AlgebraElement, EtaleAlgebra, Matrix, NumberField, QPoly, QSeries, Q};
pub use criterion::{CandidateSpace, CurveRecord};
pub use dirichlet::DirichletCharacter;
pub use error::{Error, Result};
pub use hypgeom::ModelTransform;
pub use newform::{Newform, RationalOrbitBasis};
pub use recover::{DifferentialBasis, HyperellipticModel, PointType};
