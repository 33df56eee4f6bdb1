//! Exact coefficient arithmetic: Gaussian rationals, sparse polynomials over
//! ℚ(i), and rational functions in named coordinates.

mod gaussian;
pub mod poly;
mod ratfunc;

use std::collections::BTreeSet;
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

pub use gaussian::GaussianRational;
pub use poly::{Monomial, Poly};
pub use ratfunc::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation hit a pole")]
    Pole,
    #[error("variable `{0}` has no value at the evaluation point")]
    UnassignedVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Coefficient field for forms, vector fields and matrices.
///
/// Implementations are exact. Constant types report zero derivatives and no
/// variables, so the exterior calculus degenerates to the constant-coefficient
/// (Chevalley–Eilenberg) case.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + From<GaussianRational>
    + 'static
{
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
    fn partial(&self, var: &str) -> Self;
    fn conj(&self) -> Self;
    fn variables(&self) -> BTreeSet<String>;
    fn as_constant(&self) -> Option<GaussianRational>;
    /// True when the printed form starts with a minus sign.
    fn looks_negative(&self) -> bool;
    /// True when the printed form needs parentheses as a product factor.
    fn is_sum(&self) -> bool;

    fn from_int(n: i64) -> Self {
        Self::from(GaussianRational::from_integer(n))
    }

    fn imag_unit() -> Self {
        Self::from(GaussianRational::i())
    }

    fn half() -> Self {
        Self::from(GaussianRational::from_ratio(1, 2))
    }
}

impl Coefficient for GaussianRational {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|inv| self * &inv)
    }
    fn partial(&self, _var: &str) -> Self {
        Self::zero()
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn variables(&self) -> BTreeSet<String> {
        BTreeSet::new()
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        Some(self.clone())
    }
    fn looks_negative(&self) -> bool {
        poly::is_negative(self)
    }
    fn is_sum(&self) -> bool {
        false
    }
}

impl Coefficient for Scalar {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        Scalar::checked_div(self, rhs).ok()
    }
    fn partial(&self, var: &str) -> Self {
        Scalar::partial(self, var)
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn variables(&self) -> BTreeSet<String> {
        Scalar::variables(self)
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        Scalar::as_constant(self)
    }
    fn looks_negative(&self) -> bool {
        self.numerator()
            .sorted_terms()
            .first()
            .map(|(_, c)| poly::is_negative(c))
            .unwrap_or(false)
    }
    fn is_sum(&self) -> bool {
        self.is_polynomial() && self.numerator().num_terms() > 1
    }
}

/// Arithmetic entry point mirroring the four field operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(op: ArithOp, lhs: &Scalar, rhs: &Scalar) -> Result<Scalar, ScalarError> {
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
        ArithOp::Div => lhs.checked_div(rhs)?,
    })
}

/// `∂f/∂var`, rejecting variables outside `declared`.
pub fn partial_derivative(f: &Scalar, var: &str, declared: &[String]) -> Result<Scalar, ScalarError> {
    if !declared.iter().any(|d| d == var) {
        return Err(ScalarError::UnknownVariable(var.to_string()));
    }
    Ok(f.partial(var))
}
