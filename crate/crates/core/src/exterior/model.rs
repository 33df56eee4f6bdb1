use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exterior::form::{mask_indices, Mask, MAX_DIM};
use crate::exterior::{Form, VectorField};
use crate::scalar::{Coefficient, Scalar};

/// A finitely generated differential algebra: coframe `e^1..e^N` with
/// structure equations `de^i`, plus global coordinates whose differentials
/// are expanded in the coframe.
#[derive(Clone, PartialEq, Debug)]
pub struct CoframeModel<S: Coefficient = Scalar> {
    coframe: Vec<String>,
    coordinates: Vec<String>,
    structure: Vec<Form<S>>,
    coordinate_differentials: Vec<Form<S>>,
    nonzero: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation<S: Coefficient = Scalar> {
    pub label: String,
    pub form: Form<S>,
}

/// Outcome of [`CoframeModel::validate`]: each `d²` that failed to vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelReport<S: Coefficient = Scalar> {
    pub violations: Vec<Violation<S>>,
}

impl<S: Coefficient> ModelReport<S> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<S: Coefficient> CoframeModel<S> {
    pub fn new(
        coframe: Vec<String>,
        coordinates: Vec<String>,
        structure: Vec<Form<S>>,
        coordinate_differentials: Vec<Form<S>>,
    ) -> Result<Self> {
        let n = coframe.len();
        if n > MAX_DIM {
            return Err(Error::Dimension(format!("at most {MAX_DIM} coframe elements, got {n}")));
        }
        if structure.len() != n {
            return Err(Error::Dimension(format!(
                "{} structure equations for {} coframe elements",
                structure.len(),
                n
            )));
        }
        if coordinate_differentials.len() != coordinates.len() {
            return Err(Error::Dimension(format!(
                "{} coordinate differentials for {} coordinates",
                coordinate_differentials.len(),
                coordinates.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for name in coframe.iter().chain(&coordinates) {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidModel(format!("name `{name}` declared twice")));
            }
        }
        let model = Self {
            coframe,
            coordinates,
            structure,
            coordinate_differentials,
            nonzero: Vec::new(),
        };
        for (k, f) in model.structure.iter().enumerate() {
            model.check_form(f, 2, &format!("d{}", model.coframe[k]))?;
        }
        for (j, f) in model.coordinate_differentials.iter().enumerate() {
            model.check_form(f, 1, &format!("d{}", model.coordinates[j]))?;
        }
        Ok(model)
    }

    /// Flat model: all generators closed, no coordinates.
    pub fn flat(coframe: Vec<String>) -> Self {
        let n = coframe.len();
        Self::new(coframe, Vec::new(), vec![Form::zero(2); n], Vec::new()).expect("flat model")
    }

    /// Records that `coord` never vanishes on the domain.
    pub fn with_nonzero(mut self, coord: &str) -> Result<Self> {
        if !self.coordinates.iter().any(|c| c == coord) {
            return Err(Error::UndeclaredCoordinate(coord.to_string()));
        }
        if !self.nonzero.iter().any(|c| c == coord) {
            self.nonzero.push(coord.to_string());
        }
        Ok(self)
    }

    /// Same coframe and coordinates with new structure equations.
    pub fn with_structure(&self, structure: Vec<Form<S>>) -> Result<Self> {
        let mut out = Self::new(
            self.coframe.clone(),
            self.coordinates.clone(),
            structure,
            self.coordinate_differentials.clone(),
        )?;
        out.nonzero = self.nonzero.clone();
        Ok(out)
    }

    fn check_form(&self, f: &Form<S>, degree: usize, what: &str) -> Result<()> {
        if !f.is_zero() && f.degree() != degree {
            return Err(Error::Dimension(format!("{what} has degree {}, expected {degree}", f.degree())));
        }
        if f.support_dim() > self.dim() {
            return Err(Error::Dimension(format!("{what} uses a frame index beyond the coframe")));
        }
        self.check_coefficients(f)
    }

    /// Rejects coefficients that mention undeclared coordinates.
    pub fn check_coefficients(&self, f: &Form<S>) -> Result<()> {
        for v in f.variables() {
            if !self.coordinates.contains(&v) {
                return Err(Error::UndeclaredCoordinate(v));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.coframe.len()
    }

    pub fn coframe(&self) -> &[String] {
        &self.coframe
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn nonzero(&self) -> &[String] {
        &self.nonzero
    }

    pub fn structure(&self) -> &[Form<S>] {
        &self.structure
    }

    pub fn coordinate_differentials(&self) -> &[Form<S>] {
        &self.coordinate_differentials
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coframe.iter().position(|c| c == name)
    }

    pub fn frame(&self, k: usize) -> VectorField<S> {
        VectorField::frame(k, self.dim())
    }

    pub fn generator(&self, k: usize) -> Form<S> {
        Form::generator(k)
    }

    /// `df = Σ_j ∂f/∂x^j dx^j`.
    pub fn differential(&self, f: &S) -> Result<Form<S>> {
        let mut out = Form::zero(1);
        for v in f.variables() {
            let j = self
                .coordinates
                .iter()
                .position(|c| *c == v)
                .ok_or_else(|| Error::UndeclaredCoordinate(v.clone()))?;
            let p = f.partial(&v);
            out = out.add(&self.coordinate_differentials[j].scale(&p));
        }
        Ok(out)
    }

    /// `X(f)`.
    pub fn derivative_along(&self, x: &VectorField<S>, f: &S) -> Result<S> {
        Ok(x.pair(&self.differential(f)?))
    }

    /// `d` of a basis monomial, by `d(e^i∧R) = de^i∧R − e^i∧dR`.
    fn d_basis(&self, mask: Mask) -> Form<S> {
        let idx = mask_indices(mask);
        let Some((&first, _)) = idx.split_first() else {
            return Form::zero(1);
        };
        let rest = mask & !(1 << first);
        let rest_form = Form::<S>::basis(rest);
        let head = self.structure[first].wedge(&rest_form);
        if rest == 0 {
            return head;
        }
        head.sub(&Form::generator(first).wedge(&self.d_basis(rest)))
    }

    pub fn d(&self, alpha: &Form<S>) -> Result<Form<S>> {
        if alpha.support_dim() > self.dim() {
            return Err(Error::Dimension("form uses a frame index beyond the coframe".into()));
        }
        let mut out = Form::zero(alpha.degree() + 1);
        for (mask, c) in alpha.terms() {
            let basis = Form::<S>::basis(mask);
            let df = self.differential(c)?;
            out = out.add(&df.wedge(&basis));
            if mask != 0 {
                out = out.add(&self.d_basis(mask).scale(c));
            }
        }
        Ok(out)
    }

    /// Frame brackets come from `e^k([X_i,X_j]) = −de^k(X_i,X_j)`; function
    /// coefficients contribute `X(Y^k) − Y(X^k)`.
    pub fn lie_bracket(&self, x: &VectorField<S>, y: &VectorField<S>) -> Result<VectorField<S>> {
        let mut out = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let mut c = self.structure[k].evaluate(&[x, y])?.neg_ref();
            c = c.add_ref(&self.derivative_along(x, y.component(k))?);
            c = c.sub_ref(&self.derivative_along(y, x.component(k))?);
            out.push(c);
        }
        Ok(VectorField::from_components(out))
    }

    /// Cartan: `L_X = dι_X + ι_X d`.
    pub fn lie_derivative(&self, x: &VectorField<S>, alpha: &Form<S>) -> Result<Form<S>> {
        let tail = self.d(alpha)?.interior(x)?;
        if alpha.degree() == 0 {
            return Ok(tail);
        }
        Ok(self.d(&alpha.interior(x)?)?.add(&tail))
    }

    /// `d²e^i` and `d(dx^j)`; every nonzero one is a violation.
    pub fn validate(&self) -> ModelReport<S> {
        let mut violations = Vec::new();
        for (k, de) in self.structure.iter().enumerate() {
            match self.d(de) {
                Ok(dd) if dd.is_zero() => {}
                Ok(dd) => violations.push(Violation { label: format!("d(d{})", self.coframe[k]), form: dd }),
                Err(e) => violations.push(Violation {
                    label: format!("d(d{}): {e}", self.coframe[k]),
                    form: Form::zero(3),
                }),
            }
        }
        for (j, dx) in self.coordinate_differentials.iter().enumerate() {
            match self.d(dx) {
                Ok(dd) if dd.is_zero() => {}
                Ok(dd) => violations.push(Violation { label: format!("d(d{})", self.coordinates[j]), form: dd }),
                Err(e) => violations.push(Violation {
                    label: format!("d(d{}): {e}", self.coordinates[j]),
                    form: Form::zero(2),
                }),
            }
        }
        ModelReport { violations }
    }

    /// Every basis monomial up to `max_degree`, for exhaustive identity checks.
    pub fn basis_forms(&self, max_degree: usize) -> Vec<Form<S>> {
        let n = self.dim();
        (0u64..(1u64 << n))
            .filter(|m| (m.count_ones() as usize) <= max_degree)
            .map(|m| Form::basis(m as Mask))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational, Scalar};

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|k| format!("{prefix}{k}")).collect()
    }

    fn heisenberg() -> CoframeModel<GaussianRational> {
        // de3 = -e1^e2
        let mut s = vec![Form::zero(2); 3];
        s[2] = Form::basis(0b011).neg();
        CoframeModel::new(names("e", 3), vec![], s, vec![]).unwrap()
    }

    #[test]
    fn bracket_from_structure_equations() {
        let m = heisenberg();
        let b = m.lie_bracket(&m.frame(0), &m.frame(1)).unwrap();
        assert_eq!(b, m.frame(2));
    }

    #[test]
    fn broken_jacobi_is_reported() {
        // de1 = e1^e3, de3 = e1^e2 gives d(de3) = -e1^e2^e3
        let mut s = vec![Form::<GaussianRational>::zero(2); 3];
        s[0] = Form::basis(0b101);
        s[2] = Form::basis(0b011);
        let m = CoframeModel::new(names("e", 3), vec![], s, vec![]).unwrap();
        let report = m.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].label, "d(de3)");
        assert_eq!(report.violations[0].form, Form::basis(0b111).neg());
    }

    #[test]
    fn cyclic_pair_is_closed() {
        // de1 = e2^e3, de2 = e1^e3: d(e2^e3) = e1^e3^e3 = 0
        let mut s = vec![Form::<GaussianRational>::zero(2); 3];
        s[0] = Form::basis(0b110);
        s[1] = Form::basis(0b101);
        let m = CoframeModel::new(names("e", 3), vec![], s, vec![]).unwrap();
        assert!(m.validate().passed());
    }

    #[test]
    fn d_on_functions_uses_coordinate_differentials() {
        let m = CoframeModel::new(
            names("b", 2),
            vec!["x".into()],
            vec![Form::zero(2); 2],
            vec![Form::<Scalar>::generator(0)],
        )
        .unwrap();
        let alpha = Form::generator(1).scale(&Scalar::var("x"));
        assert_eq!(m.d(&alpha).unwrap(), Form::basis(0b11));
        let bad = Form::generator(1).scale(&Scalar::var("y"));
        assert_eq!(m.d(&bad), Err(Error::UndeclaredCoordinate("y".into())));
    }

    #[test]
    fn undeclared_coordinate_rejected_at_construction() {
        let err = CoframeModel::new(
            names("b", 2),
            vec![],
            vec![Form::<Scalar>::basis(0b11).scale(&Scalar::var("t")), Form::zero(2)],
            vec![],
        );
        assert_eq!(err, Err(Error::UndeclaredCoordinate("t".into())));
    }
}
