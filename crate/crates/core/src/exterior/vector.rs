use std::fmt;

use crate::exterior::Form;
use crate::scalar::{Coefficient, Scalar};

/// `Σ_k components[k] · X_k` in the frame dual to the coframe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField<S = Scalar> {
    components: Vec<S>,
}

impl<S: Coefficient> VectorField<S> {
    pub fn zero(dim: usize) -> Self {
        Self { components: vec![S::zero(); dim] }
    }

    pub fn frame(k: usize, dim: usize) -> Self {
        let mut out = Self::zero(dim);
        out.components[k] = S::one();
        out
    }

    pub fn from_components(components: Vec<S>) -> Self {
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &S {
        &self.components[k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector dimension");
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { components: self.components.iter().map(|c| c.neg_ref()).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { components: self.components.iter().map(|c| c.mul_ref(s)).collect() }
    }

    /// `α(X)` for a 1-form.
    pub fn pair(&self, alpha: &Form<S>) -> S {
        let mut acc = S::zero();
        for (m, c) in alpha.terms() {
            if m.count_ones() == 1 {
                let k = m.trailing_zeros() as usize;
                if let Some(x) = self.components.get(k) {
                    acc = acc.add_ref(&c.mul_ref(x));
                }
            }
        }
        acc
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> VectorDisplay<'a, S> {
        VectorDisplay { v: self, names }
    }
}

pub struct VectorDisplay<'a, S> {
    v: &'a VectorField<S>,
    names: &'a [String],
}

/// Frame vectors print as `@name`, the vector syntax of model files.
impl<S: Coefficient> fmt::Display for VectorDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.v.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.looks_negative();
            let c_abs = if neg { c.neg_ref() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if !c_abs.is_one() {
                if c_abs.is_sum() {
                    write!(f, "({c_abs})*")?;
                } else {
                    write!(f, "{c_abs}*")?;
                }
            }
            match self.names.get(k) {
                Some(n) => write!(f, "@{n}")?,
                None => write!(f, "@e{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: Coefficient> fmt::Debug for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// `Σ_k X_k ⊗ components[k]`, a 2-form for each frame direction.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorValuedTwoForm<S = Scalar> {
    components: Vec<Form<S>>,
}

impl<S: Coefficient> VectorValuedTwoForm<S> {
    pub fn zero(dim: usize) -> Self {
        Self { components: vec![Form::zero(2); dim] }
    }

    pub fn from_components(components: Vec<Form<S>>) -> Self {
        debug_assert!(components.iter().all(|f| f.is_zero() || f.degree() == 2));
        Self { components }
    }

    /// `X ⊗ F`.
    pub fn tensor(x: &VectorField<S>, f: &Form<S>) -> Self {
        Self {
            components: x.components().iter().map(|c| f.scale(c)).collect(),
        }
    }

    /// The `(X, F)` pairs `(X_k, components[k])` with nonzero form.
    pub fn entries(&self) -> Vec<(VectorField<S>, Form<S>)> {
        let n = self.dim();
        self.components
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(k, f)| (VectorField::frame(k, n), f.clone()))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Form<S>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Form::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "tensor dimension");
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { components: self.components.iter().map(Form::neg).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { components: self.components.iter().map(|f| f.scale(s)).collect() }
    }

    /// The vector `T(X, Y)`.
    pub fn evaluate(&self, x: &VectorField<S>, y: &VectorField<S>) -> VectorField<S> {
        VectorField::from_components(
            self.components
                .iter()
                .map(|f| if f.is_zero() { S::zero() } else { f.evaluate(&[x, y]).expect("2-form") })
                .collect(),
        )
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> TensorDisplay<'a, S> {
        TensorDisplay { t: self, names }
    }
}

pub struct TensorDisplay<'a, S> {
    t: &'a VectorValuedTwoForm<S>,
    names: &'a [String],
}

impl<S: Coefficient> fmt::Display for TensorDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, form) in self.t.components.iter().enumerate() {
            if form.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = self.names.get(k).cloned().unwrap_or_else(|| format!("e{k}"));
            write!(f, "@{name} (x) ({})", form.display_with(self.names))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: Coefficient> fmt::Debug for VectorValuedTwoForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}
