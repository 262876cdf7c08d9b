//! Exact arithmetic: rationals, polynomials, matrices, truncated q-series,
//! number fields and étale algebras.

mod etale;
mod factor;
mod field;
mod matrix;
mod poly;
mod rational;
mod roots;
mod series;

pub use etale::{algebra_dual_basis, apply_functional, AlgebraElement, EtaleAlgebra};
pub use factor::{factor_over_q, is_irreducible};
pub use field::{archimedean_poly_bound, NumberField, RootInterval};
pub use matrix::{rref, Matrix, Rref};
pub use poly::QPoly;
pub use rational::{parse_q, q, qf, sqrt_q, Q};
pub use roots::{
    count_real_roots, count_roots_above, count_roots_in, isolate_real_roots, sturm_sequence, Isolated,
};
pub use series::QSeries;
