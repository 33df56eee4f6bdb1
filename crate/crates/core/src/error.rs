use thiserror::Error;

use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("interior product of a 0-form")]
    InteriorOfFunction,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("coefficient references undeclared coordinate `{0}`")]
    UndeclaredCoordinate(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("slot {slot} out of range for a tensor of degree {degree}")]
    SlotOutOfRange { slot: usize, degree: usize },
    #[error("not an almost complex structure: {0}")]
    NotComplexStructure(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("metric is not compatible with complex structure {0}")]
    Incompatible(String),
    #[error("complex structure {0} is not integrable")]
    NotIntegrable(String),
    #[error("quaternion relations fail: {0}")]
    QuaternionRelations(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("form is not invariant under the twist action: {0}")]
    NotInvariant(String),
    #[error("twist data failed validation: {0}")]
    InvalidTwist(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown example `{name}`; registry: {registry}")]
    UnknownExample { name: String, registry: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
