//! Exact computer algebra for finite-dimensional Lie superalgebras.
//!
//! The crate builds Poisson, queer and matrix Lie superalgebras as
//! structure-constant tables, straightens products in their enveloping
//! algebras, constructs quadratic and cubic Casimir elements together with
//! the Kac–Moody Casimir in Wick normal form, and computes Shapovalov
//! determinants. Everything is exact over the rationals.

pub mod casimir;
pub mod error;
pub mod grassmann;
pub mod liesuper;
pub mod linalg;
pub mod loop_km;
pub mod scalars;
pub mod shapovalov;
pub mod uea;

pub use error::{Error, Result};
pub use grassmann::{GrassmannElement, Presentation};
pub use liesuper::{Family, RootDatum, SuperAlgebra, Weight};
pub use scalars::{CartanPoly, FactorizationReport, LinearForm, Rat};
pub use uea::{PbwAlgebra, PbwElement, PbwMonomial, SigmaMap, SigmaMode};
