//! Symmetric Bell-diagonal entanglement witnesses on `C^n ⊗ C^n`.
//!
//! The family `W[α_0, …, α_{n-1}]` can be built from its spectral
//! coefficients, its Weyl coefficients, torus phases or an orthogonal matrix.
//! Any member can be classified as completely positive, decomposable,
//! indecomposable or not block-positive, with certificates.

pub mod cli;
pub mod decomposability;
pub mod error;
pub mod geometry;
pub mod io;
pub mod orthogonal;
pub mod positivity;
pub mod tensor;
pub mod tolerance;
pub mod weyl;
pub mod witness;

pub use decomposability::{certify, Certificate};
pub use error::{Error, Result};
pub use positivity::{classify, ClassifyOptions, PositivityVerdict, WitnessClass};
pub use tolerance::ToleranceConfig;
pub use witness::{AlphaVector, WitnessRecord};
