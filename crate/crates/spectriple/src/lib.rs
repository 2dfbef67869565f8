//! Numerical verification toolkit for twisted and pseudo-Riemannian spectral
//! triples: Clifford bases, fundamental symmetries, K-morphisms, reflected
//! Christoffel symbols, almost-commutative products and signature
//! classification.

pub mod acproduct;
pub mod clifford;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod kmorphism;
pub mod matrix;
pub mod random;
pub mod report;
pub mod sigsolver;
pub mod structural;
pub mod suite;

pub use error::{Error, Result};
pub use exec::Exec;
pub use matrix::{AntiUnitary, ComplexMatrix, C64};
