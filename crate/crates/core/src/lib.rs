//! Zeros of simple (left-coefficient) quaternionic polynomials.
//!
//! Every zero of `q_n x^n + ... + q_1 x + q_0` is either isolated (a real
//! number or a single nonreal quaternion) or spherical (a whole conjugacy
//! class `{a z a^-1}`). The [`solver`] module obtains them from the complex
//! roots of a real "discriminant" polynomial built from the complex parts of
//! the coefficients; [`baseline`] implements the older companion-polynomial
//! method as an independent cross-check and [`verify`] audits any result by
//! direct evaluation.

pub mod baseline;
pub mod cpoly;
pub mod error;
pub mod quaternion;
pub mod roots;
pub mod solver;
pub mod verify;

pub use cpoly::ComplexPolynomial;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quaternion::{ConjugacyClass, Quaternion};
pub use solver::{SimplePolynomial, Tolerances, ZeroSet};
