//! Forms, vector fields and coframe models.

pub mod form;
mod model;
mod vector;

pub use form::{Form, Mask};
pub use model::{CoframeModel, ModelReport, Violation};
pub use vector::{VectorField, VectorValuedTwoForm};

use crate::error::Result;
use crate::scalar::Coefficient;

pub fn wedge<S: Coefficient>(alpha: &Form<S>, beta: &Form<S>) -> Form<S> {
    alpha.wedge(beta)
}

pub fn interior<S: Coefficient>(x: &VectorField<S>, alpha: &Form<S>) -> Result<Form<S>> {
    alpha.interior(x)
}

pub fn exterior_derivative<S: Coefficient>(m: &CoframeModel<S>, alpha: &Form<S>) -> Result<Form<S>> {
    m.d(alpha)
}

pub fn lie_bracket<S: Coefficient>(
    m: &CoframeModel<S>,
    x: &VectorField<S>,
    y: &VectorField<S>,
) -> Result<VectorField<S>> {
    m.lie_bracket(x, y)
}

pub fn lie_derivative<S: Coefficient>(
    m: &CoframeModel<S>,
    x: &VectorField<S>,
    alpha: &Form<S>,
) -> Result<Form<S>> {
    m.lie_derivative(x, alpha)
}

pub fn validate_model<S: Coefficient>(m: &CoframeModel<S>) -> ModelReport<S> {
    m.validate()
}
