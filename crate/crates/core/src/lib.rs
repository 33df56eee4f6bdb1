//! Exact exterior calculus on coframe models, with torus twists and the
//! Hermitian, SKT, hypercomplex and HKT checks that go with them.
//!
//! Everything is generic over a [`Coefficient`] field. Two fields ship:
//! [`Scalar`] (rational functions over ℚ(i) in named coordinates) and
//! [`GaussianRational`] (constants only, for Lie-algebra models).

pub mod checks;
pub mod error;
pub mod expr;
pub mod exterior;
pub mod hermitian;
pub mod linalg;
pub mod modelfile;
pub mod quaternionic;
pub mod scalar;
pub mod twist;
pub mod zoo;

pub use error::{Error, Result};
pub use exterior::{CoframeModel, Form, VectorField, VectorValuedTwoForm};
pub use linalg::Matrix;
pub use scalar::{Coefficient, GaussianRational, Scalar};

/// Forms with constant coefficients.
pub type ConstForm = Form<GaussianRational>;
/// Models whose structure constants and coordinates carry no functions.
pub type ConstModel = CoframeModel<GaussianRational>;
pub type ConstMatrix = Matrix<GaussianRational>;
