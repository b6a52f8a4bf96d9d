//! Fock and Schrödinger models of the minimal representation of the metaplectic
//! group Mp(r,ℝ), the Bargmann transform between them, and a verification suite.

pub mod bargmann;
pub mod error;
pub mod fock;
pub mod harmonic;
pub mod jordan;
pub mod matrix;
pub mod operator;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod schrodinger;
pub mod sp;

pub use error::{Error, Result};
