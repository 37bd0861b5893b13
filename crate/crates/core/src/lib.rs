//! Secondary measures of probability densities on a compact interval.
//!
//! Starting from a density `ρ` this crate builds the reducer `φ`, the
//! secondary measure `μ`, the orthonormal and secondary polynomials, and the
//! one-parameter family `ρ_t` of densities sharing the same normalized
//! secondary measure. On top of the family it provides the operators
//! `V_ρ^t`, their inverses, and the closed-form solver for the integral
//! equation
//!
//! ```text
//! f(x) + λ (x − c₁) ∫ (f(u) − f(x)) / (u − x) ρ(u) du = g(x).
//! ```
//!
//! Everything is evaluated pointwise with adaptive quadrature; see
//! [`quadrature`] for the engines.

pub mod error;
pub mod exprparse;
pub mod family;
pub mod function;
pub mod measures;
pub mod operators;
pub mod orthopoly;
pub mod quadrature;
pub mod report;
pub mod stieltjes;
pub mod suite;

pub mod cli;

pub use error::{Error, Result};
pub use function::{Func, Polynomial, RealFunction};
pub use measures::{Density, Weight};
pub use quadrature::{Abscissa, EndpointExponents, IntegrationSpec, Interval};
pub use report::{Provenance, VerificationReport};

