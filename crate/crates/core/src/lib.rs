//! Exact-arithmetic engine for the N=2 Neveu-Schwarz superconformal algebra,
//! its Verma and irreducible modules, the rank-one lattice vertex algebra,
//! the coset realization of affine sl2, and odd-variable vertex operators.

pub mod character;
pub mod coset;
pub mod exactfield;
pub mod half;
pub mod irreducible;
pub mod lattice;
pub mod lincomb;
pub mod linalg;
pub mod minimal;
pub mod oddvar;
pub mod pbw;
pub mod rational;
pub mod shapovalov;
pub mod superalg;
pub mod vertex;

pub use exactfield::{Scalar, Sign};
pub use half::Half;
pub use rational::Rat;
