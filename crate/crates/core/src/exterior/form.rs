use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::VectorField;
use crate::scalar::{Coefficient, Scalar};

/// Frame indices packed into a bitmask; bit `k` set means `e^k` is a factor.
pub type Mask = u32;

pub const MAX_DIM: usize = 32;

/// Indices of `mask` in increasing order.
pub fn mask_indices(mask: Mask) -> Vec<usize> {
    (0..MAX_DIM).filter(|k| mask >> k & 1 == 1).collect()
}

/// Sign of `e^a ∧ e^b` relative to the sorted product, or `None` if they share a factor.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> j).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// A homogeneous element of the exterior algebra on the coframe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form<S = Scalar> {
    degree: usize,
    terms: BTreeMap<Mask, S>,
}

impl<S: Coefficient> Form<S> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn function(f: S) -> Self {
        let mut out = Self::zero(0);
        out.add_term(0, f);
        out
    }

    /// `e^{k}` for a single frame index.
    pub fn generator(k: usize) -> Self {
        Self::basis(1 << k)
    }

    pub fn basis(mask: Mask) -> Self {
        Self::monomial(mask, S::one())
    }

    pub fn monomial(mask: Mask, c: S) -> Self {
        let mut out = Self::zero(mask.count_ones() as usize);
        out.add_term(mask, c);
        out
    }

    /// `e^{i_1}∧…∧e^{i_p}` in the given (possibly unsorted) order.
    pub fn wedge_of(indices: &[usize]) -> Self {
        indices
            .iter()
            .fold(Self::function(S::one()), |acc, &k| acc.wedge(&Self::generator(k)))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &S)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mask: Mask) -> S {
        self.terms.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    /// Largest frame index used plus one.
    pub fn support_dim(&self) -> usize {
        self.terms
            .keys()
            .map(|m| (MAX_DIM as u32 - m.leading_zeros()) as usize)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, mask: Mask, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(old) => {
                let sum = old.add_ref(&c);
                if sum.is_zero() {
                    self.terms.remove(&mask);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Dimension(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    fn merged_degree(&self, other: &Self) -> usize {
        if self.is_zero() {
            other.degree
        } else {
            self.degree
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        out.degree = self.merged_degree(other);
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    /// Panics on a degree mismatch between nonzero forms.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("homogeneous sum")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg_ref())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        self.map(|c| c.mul_ref(s))
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(neg) = wedge_sign(*ma, *mb) {
                    let c = ca.mul_ref(cb);
                    out.add_term(ma | mb, if neg { c.neg_ref() } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::function(S::one()), |acc, _| acc.wedge(self))
    }

    /// `ι_X α`. The first slot is contracted: `ι_{X_k} e^I = ±e^{I∖k}` with the
    /// sign counting the factors of `I` before `k`.
    pub fn interior(&self, x: &VectorField<S>) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::InteriorOfFunction);
        }
        let mut out = Self::zero(self.degree - 1);
        for (k, xk) in x.components().iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for (m, c) in &self.terms {
                if m >> k & 1 == 0 {
                    continue;
                }
                let below = (m & ((1u32 << k) - 1)).count_ones();
                let v = c.mul_ref(xk);
                out.add_term(m & !(1 << k), if below % 2 == 1 { v.neg_ref() } else { v });
            }
        }
        Ok(out)
    }

    /// `α(X_1, …, X_p)` with the determinant convention.
    pub fn evaluate(&self, args: &[&VectorField<S>]) -> Result<S> {
        if args.len() != self.degree {
            return Err(Error::Dimension(format!(
                "{}-form evaluated on {} vectors",
                self.degree,
                args.len()
            )));
        }
        let mut cur = self.clone();
        for x in args {
            cur = cur.interior(x)?;
        }
        Ok(cur.coefficient(0))
    }

    /// Coefficient variables across all terms.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        self.terms.values().flat_map(|c| c.variables()).collect()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> FormDisplay<'a, S> {
        FormDisplay { form: self, names }
    }
}

/// Terms in lexicographic order of their index tuples.
fn sorted_masks<S>(terms: &BTreeMap<Mask, S>) -> Vec<Mask> {
    let mut masks: Vec<Mask> = terms.keys().copied().collect();
    masks.sort_by_key(|m| mask_indices(*m));
    masks
}

pub struct FormDisplay<'a, S> {
    form: &'a Form<S>,
    names: &'a [String],
}

impl<S: Coefficient> fmt::Display for FormDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        for (n, mask) in sorted_masks(&self.form.terms).into_iter().enumerate() {
            let c = &self.form.terms[&mask];
            let neg = c.looks_negative();
            let c_abs = if neg { c.neg_ref() } else { c.clone() };
            match (n == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let blade: Vec<String> = mask_indices(mask)
                .into_iter()
                .map(|k| self.names.get(k).cloned().unwrap_or_else(|| format!("e{k}")))
                .collect();
            if mask == 0 {
                write!(f, "{c_abs}")?;
                continue;
            }
            if !c_abs.is_one() {
                if c_abs.is_sum() {
                    write!(f, "({c_abs})*")?;
                } else {
                    write!(f, "{c_abs}*")?;
                }
            }
            write!(f, "{}", blade.join("^"))?;
        }
        Ok(())
    }
}

impl<S: Coefficient> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.support_dim()).map(|k| format!("e{k}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num_traits::One;

    type F = Form<GaussianRational>;

    #[test]
    fn wedge_sign_counts_transpositions() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(false));
        assert_eq!(wedge_sign(0b10, 0b01), Some(true));
        assert_eq!(wedge_sign(0b11, 0b11), None);
        // e^{13} ∧ e^2 = −e^{123}
        assert_eq!(wedge_sign(0b1010, 0b0100), Some(true));
    }

    #[test]
    fn wedge_basics() {
        let b0 = F::generator(0);
        let b1 = F::generator(1);
        assert_eq!(b0.wedge(&b1), F::basis(0b11));
        assert!(b0.wedge(&b0).is_zero());
        let b13 = F::wedge_of(&[1, 3]);
        let b2 = F::generator(2);
        assert_eq!(b13.wedge(&b2), F::basis(0b1110).neg());
    }

    #[test]
    fn interior_sign() {
        let b01 = F::basis(0b11);
        let x1 = VectorField::frame(1, 4);
        assert_eq!(b01.interior(&x1).unwrap(), F::generator(0).neg());
        let x0 = VectorField::frame(0, 4);
        assert!(F::basis(0b110).interior(&x0).unwrap().is_zero());
        assert!(F::function(GaussianRational::one()).interior(&x0).is_err());
    }

    #[test]
    fn determinant_evaluation() {
        let x0 = VectorField::frame(0, 2);
        let x1 = VectorField::frame(1, 2);
        let b01 = F::basis(0b11);
        assert_eq!(b01.evaluate(&[&x0, &x1]).unwrap(), GaussianRational::one());
        assert_eq!(b01.evaluate(&[&x1, &x0]).unwrap(), -GaussianRational::one());
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        assert!(F::generator(0).try_add(&F::basis(0b11)).is_err());
        assert_eq!(F::zero(3).add(&F::generator(0)).degree(), 1);
    }

    #[test]
    fn display_uses_names() {
        let names: Vec<String> = ["b0", "b1", "b2"].iter().map(|s| s.to_string()).collect();
        let f = F::basis(0b011).sub(&F::basis(0b110).scale(&GaussianRational::from_ratio(1, 2)));
        assert_eq!(f.display_with(&names).to_string(), "b0^b1 - 1/2*b1^b2");
    }
}
