//! Exact lattice computations on the blowup `X` of `P^3` at eight very
//! general points.
//!
//! Divisor classes are written `(d; m_1, ..., m_8)` for `dH - sum m_i E_i`
//! and curve classes `(a; c_1, ..., c_8)` for `a h + sum c_i e_i`. The Weyl
//! group of the `T_{2,4,4}` root system acts on divisor classes through
//! permutations of the points and Cremona transformations; the [`cones`]
//! module decides membership in the cone of curves and the nef, movable and
//! effective cones and returns checkable certificates, and [`oracle`] is an
//! independent exact LP used to cross-check them.

pub mod cli;
pub mod cones;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod surface;
pub mod weyl;

pub use error::{Error, Result};
pub use lattice::{CurveClass, DivisorClass, Rational};
pub use weyl::WeylWord;
