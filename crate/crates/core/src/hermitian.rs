//! Almost complex structures, Hermitian metrics, types, Nijenhuis tensor and
//! Bismut torsion.
//!
//! Sign conventions: `J X_i = Σ_k m[k][i] X_k`, and the slot operator is
//! `J_{(k)}α = −α(…, J·, …)` in slot `k`, so on 1-forms
//! `J_{(1)} e^a = −Σ_i m[a][i] e^i`. With these, `Λ^{1,0}` is the
//! `−i`-eigenspace of `J_{(1)}` and the Bismut torsion is `c = −J dω`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::form::mask_indices;
use crate::exterior::{CoframeModel, Form, VectorField, VectorValuedTwoForm};
use crate::linalg::Matrix;
use crate::scalar::{Coefficient, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct AlmostComplexStructure<S: Coefficient = Scalar> {
    label: String,
    matrix: Matrix<S>,
}

impl<S: Coefficient> AlmostComplexStructure<S> {
    /// Checks `m² = −Id`.
    pub fn new(label: impl Into<String>, matrix: Matrix<S>) -> Result<Self> {
        let label = label.into();
        if !matrix.is_square() {
            return Err(Error::NotComplexStructure(format!("{label} is not square")));
        }
        let sq = matrix.mul(&matrix);
        if sq != Matrix::identity(matrix.rows()).neg() {
            return Err(Error::NotComplexStructure(format!("{label}² ≠ −Id")));
        }
        Ok(Self { label, matrix })
    }

    /// Builds from the images of the frame vectors, `X_i ↦ images[i]`.
    pub fn from_images(label: impl Into<String>, images: &[VectorField<S>]) -> Result<Self> {
        let n = images.len();
        let m = Matrix::from_fn(n, n, |k, i| images[i].component(k).clone());
        Self::new(label, m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `J X`.
    pub fn act(&self, x: &VectorField<S>) -> VectorField<S> {
        let n = self.dim();
        VectorField::from_components(
            (0..n)
                .map(|k| {
                    (0..n).fold(S::zero(), |acc, i| acc.add_ref(&self.matrix.get(k, i).mul_ref(x.component(i))))
                })
                .collect(),
        )
    }

    /// `J_{(1)}` on a 1-form.
    pub fn act_on_covector(&self, phi: &Form<S>) -> Form<S> {
        let mut out = Form::zero(1);
        for (mask, c) in phi.terms() {
            let a = mask.trailing_zeros() as usize;
            for i in 0..self.dim() {
                let m = self.matrix.get(a, i);
                if !m.is_zero() {
                    out = out.add(&Form::generator(i).scale(&m.mul_ref(c).neg_ref()));
                }
            }
        }
        out
    }

    /// `(J_{(1)} e^0, …, J_{(1)} e^{N−1})`.
    fn covector_images(&self) -> Vec<Form<S>> {
        (0..self.dim()).map(|a| self.act_on_covector(&Form::generator(a))).collect()
    }

    /// Product `self·other` as matrices, i.e. `X ↦ self(other X)`.
    pub fn compose(&self, other: &Self) -> Matrix<S> {
        self.matrix.mul(&other.matrix)
    }
}

/// Symmetric nondegenerate `g(X_i, X_j)`.
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianMetric<S: Coefficient = Scalar> {
    matrix: Matrix<S>,
}

impl<S: Coefficient> HermitianMetric<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMetric("matrix is not square".into()));
        }
        if !matrix.is_symmetric() {
            return Err(Error::InvalidMetric("matrix is not symmetric".into()));
        }
        if matrix.det().is_zero() {
            return Err(Error::InvalidMetric("matrix is degenerate".into()));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: Matrix::identity(n) }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn inner(&self, x: &VectorField<S>, y: &VectorField<S>) -> S {
        let n = self.dim();
        let mut acc = S::zero();
        for a in 0..n {
            if x.component(a).is_zero() {
                continue;
            }
            for b in 0..n {
                let g = self.matrix.get(a, b);
                if g.is_zero() || y.component(b).is_zero() {
                    continue;
                }
                acc = acc.add_ref(&x.component(a).mul_ref(g).mul_ref(y.component(b)));
            }
        }
        acc
    }

    /// `g(JX, JY) = g(X, Y)`, i.e. `mᵀ g m = g`.
    pub fn is_compatible(&self, jc: &AlmostComplexStructure<S>) -> bool {
        jc.dim() == self.dim() && jc.matrix.transpose().mul(&self.matrix).mul(&jc.matrix) == self.matrix
    }

    /// `X^♭ = g(X, ·)`.
    pub fn flat(&self, x: &VectorField<S>) -> Form<S> {
        let n = self.dim();
        let mut out = Form::zero(1);
        for b in 0..n {
            let c = (0..n).fold(S::zero(), |acc, a| acc.add_ref(&x.component(a).mul_ref(self.matrix.get(a, b))));
            out = out.add(&Form::generator(b).scale(&c));
        }
        out
    }
}

/// A covariant `p`-tensor in the coframe, not necessarily alternating.
#[derive(Clone, PartialEq, Debug)]
pub struct Tensor<S: Coefficient = Scalar> {
    degree: usize,
    entries: BTreeMap<Vec<usize>, S>,
}

fn permutations(items: &[usize]) -> Vec<(Vec<usize>, bool)> {
    if items.len() <= 1 {
        return vec![(items.to_vec(), false)];
    }
    let mut out = Vec::new();
    for (pos, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(pos);
        for (mut tail, odd) in permutations(&rest) {
            tail.insert(0, head);
            out.push((tail, odd ^ (pos % 2 == 1)));
        }
    }
    out
}

impl<S: Coefficient> Tensor<S> {
    /// Component values `α(X_{i_1}, …, X_{i_p})` on every index tuple.
    pub fn from_form(alpha: &Form<S>) -> Self {
        let mut entries = BTreeMap::new();
        for (mask, c) in alpha.terms() {
            for (perm, odd) in permutations(&mask_indices(mask)) {
                entries.insert(perm, if odd { c.neg_ref() } else { c.clone() });
            }
        }
        Self { degree: alpha.degree(), entries }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, idx: &[usize]) -> S {
        self.entries.get(idx).cloned().unwrap_or_else(S::zero)
    }

    /// `−T(…, J X, …)` in slot `k` (1-based).
    pub fn apply_slot(&self, jc: &AlmostComplexStructure<S>, k: usize) -> Result<Self> {
        if k == 0 || k > self.degree {
            return Err(Error::SlotOutOfRange { slot: k, degree: self.degree });
        }
        let mut entries: BTreeMap<Vec<usize>, S> = BTreeMap::new();
        // T'(.., X_j, ..) = −Σ_l m[l][j] T(.., X_l, ..)
        for (idx, c) in &self.entries {
            let l = idx[k - 1];
            for j in 0..jc.dim() {
                let m = jc.matrix.get(l, j);
                if m.is_zero() {
                    continue;
                }
                let mut target = idx.clone();
                target[k - 1] = j;
                let v = m.mul_ref(c).neg_ref();
                let e = entries.entry(target).or_insert_with(S::zero);
                *e = e.add_ref(&v);
            }
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(Self { degree: self.degree, entries })
    }

    /// The form this tensor equals, when it is alternating.
    pub fn as_form(&self) -> Option<Form<S>> {
        let mut out = Form::zero(self.degree);
        for (idx, c) in &self.entries {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != idx.len() {
                return None;
            }
            if *idx == sorted {
                out = out.add(&Form::monomial(idx.iter().fold(0, |m, &i| m | 1 << i), c.clone()));
            }
        }
        (Tensor::from_form(&out) == *self).then_some(out)
    }
}

/// `J_{(k)}α`. For `p ≥ 2` the result is generally not alternating.
pub fn apply_index<S: Coefficient>(jc: &AlmostComplexStructure<S>, alpha: &Form<S>, k: usize) -> Result<Tensor<S>> {
    Tensor::from_form(alpha).apply_slot(jc, k)
}

fn map_factors<S: Coefficient>(alpha: &Form<S>, images: &[Form<S>]) -> Form<S> {
    let mut out = Form::zero(alpha.degree());
    for (mask, c) in alpha.terms() {
        let term = mask_indices(mask)
            .into_iter()
            .fold(Form::function(c.clone()), |acc, a| acc.wedge(&images[a]));
        out = out.add(&term);
    }
    out
}

/// `J_{(1)}⋯J_{(p)}α`, an algebra automorphism; on 2-forms `F(J·, J·)`.
pub fn apply_all<S: Coefficient>(jc: &AlmostComplexStructure<S>, alpha: &Form<S>) -> Form<S> {
    map_factors(alpha, &jc.covector_images())
}

/// `Σ_k J_{(k)}α`, the derivation extension of `J_{(1)}`.
pub fn apply_derivation<S: Coefficient>(jc: &AlmostComplexStructure<S>, alpha: &Form<S>) -> Form<S> {
    let images = jc.covector_images();
    let mut out = Form::zero(alpha.degree());
    for (mask, c) in alpha.terms() {
        let idx = mask_indices(mask);
        for k in 0..idx.len() {
            let term = idx.iter().enumerate().fold(Form::function(c.clone()), |acc, (pos, &a)| {
                if pos == k {
                    acc.wedge(&images[a])
                } else {
                    acc.wedge(&Form::generator(a))
                }
            });
            out = out.add(&term);
        }
    }
    out
}

/// The `(p,q)` part. Each 1-form factor splits as `P^{1,0} + P^{0,1}` with
/// `P^{1,0} = ½(1 + i J_{(1)})`; the expansion tracks how many `(1,0)`
/// factors have been chosen.
pub fn type_component<S: Coefficient>(jc: &AlmostComplexStructure<S>, alpha: &Form<S>, p: usize, q: usize) -> Result<Form<S>> {
    if p + q != alpha.degree() {
        return Err(Error::Dimension(format!(
            "type ({p},{q}) requested of a {}-form",
            alpha.degree()
        )));
    }
    let half = S::half();
    let i_half = S::imag_unit().mul_ref(&half);
    let n = jc.dim();
    let mut hol = Vec::with_capacity(n);
    let mut antihol = Vec::with_capacity(n);
    for a in 0..n {
        let e = Form::generator(a);
        let je = jc.act_on_covector(&e).scale(&i_half);
        let he = e.scale(&half);
        hol.push(he.add(&je));
        antihol.push(he.sub(&je));
    }
    let mut out = Form::zero(alpha.degree());
    for (mask, c) in alpha.terms() {
        // layers[j] = partial product with j holomorphic factors so far
        let mut layers: Vec<Form<S>> = vec![Form::function(c.clone())];
        for a in mask_indices(mask) {
            let mut next: Vec<Form<S>> = vec![Form::zero(0); layers.len() + 1];
            for (j, partial) in layers.iter().enumerate() {
                if partial.is_zero() {
                    continue;
                }
                next[j + 1] = next[j + 1].add(&partial.wedge(&hol[a]));
                next[j] = next[j].add(&partial.wedge(&antihol[a]));
            }
            layers = next;
        }
        if let Some(part) = layers.get(p) {
            out = out.add(part);
        }
    }
    Ok(out)
}

/// `N(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]` on frame pairs, stored as
/// `Σ_k X_k ⊗ N^k`.
pub fn nijenhuis<S: Coefficient>(m: &CoframeModel<S>, jc: &AlmostComplexStructure<S>) -> Result<VectorValuedTwoForm<S>> {
    let n = m.dim();
    if jc.dim() != n {
        return Err(Error::Dimension(format!("structure of size {} on a {n}-dim model", jc.dim())));
    }
    let mut comps = vec![Form::zero(2); n];
    for i in 0..n {
        for j in i + 1..n {
            let v = nijenhuis_at(m, jc, &m.frame(i), &m.frame(j))?;
            for (k, c) in v.components().iter().enumerate() {
                if !c.is_zero() {
                    comps[k] = comps[k].add(&Form::monomial(1 << i | 1 << j, c.clone()));
                }
            }
        }
    }
    Ok(VectorValuedTwoForm::from_components(comps))
}

/// `N(X, Y)` for arbitrary vector fields.
pub fn nijenhuis_at<S: Coefficient>(
    m: &CoframeModel<S>,
    jc: &AlmostComplexStructure<S>,
    x: &VectorField<S>,
    y: &VectorField<S>,
) -> Result<VectorField<S>> {
    let jx = jc.act(x);
    let jy = jc.act(y);
    let a = m.lie_bracket(&jx, &jy)?;
    let b = jc.act(&m.lie_bracket(&jx, y)?);
    let c = jc.act(&m.lie_bracket(x, &jy)?);
    let d = m.lie_bracket(x, y)?;
    Ok(a.sub(&b).sub(&c).sub(&d))
}

pub fn is_integrable<S: Coefficient>(m: &CoframeModel<S>, jc: &AlmostComplexStructure<S>) -> Result<bool> {
    Ok(nijenhuis(m, jc)?.is_zero())
}

/// `ω(X,Y) = g(JX, Y)`.
pub fn kaehler_form<S: Coefficient>(g: &HermitianMetric<S>, jc: &AlmostComplexStructure<S>) -> Result<Form<S>> {
    if !g.is_compatible(jc) {
        return Err(Error::Incompatible(jc.label.clone()));
    }
    let n = g.dim();
    let mut out = Form::zero(2);
    for a in 0..n {
        for b in a + 1..n {
            let w = (0..n).fold(S::zero(), |acc, k| acc.add_ref(&jc.matrix.get(k, a).mul_ref(g.matrix.get(k, b))));
            if !w.is_zero() {
                out = out.add(&Form::monomial(1 << a | 1 << b, w));
            }
        }
    }
    Ok(out)
}

/// `c = −J dω` without checking integrability.
pub fn formal_torsion<S: Coefficient>(
    m: &CoframeModel<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<Form<S>> {
    let omega = kaehler_form(g, jc)?;
    Ok(apply_all(jc, &m.d(&omega)?).neg())
}

/// The Bismut torsion 3-form `c = (T^B)^♭ = −J dω`.
pub fn bismut_torsion<S: Coefficient>(
    m: &CoframeModel<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<Form<S>> {
    if !is_integrable(m, jc)? {
        return Err(Error::NotIntegrable(jc.label.clone()));
    }
    formal_torsion(m, g, jc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SktReport<S: Coefficient = Scalar> {
    pub torsion: Form<S>,
    pub d_torsion: Form<S>,
    pub d_omega: Form<S>,
}

impl<S: Coefficient> SktReport<S> {
    pub fn is_skt(&self) -> bool {
        self.d_torsion.is_zero()
    }

    pub fn is_kaehler(&self) -> bool {
        self.d_omega.is_zero()
    }
}

pub fn is_skt<S: Coefficient>(
    m: &CoframeModel<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<SktReport<S>> {
    let torsion = bismut_torsion(m, g, jc)?;
    skt_report(m, g, jc, torsion)
}

/// As [`is_skt`] but for structures not known to be integrable.
pub fn formal_skt<S: Coefficient>(
    m: &CoframeModel<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<SktReport<S>> {
    let torsion = formal_torsion(m, g, jc)?;
    skt_report(m, g, jc, torsion)
}

fn skt_report<S: Coefficient>(
    m: &CoframeModel<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
    torsion: Form<S>,
) -> Result<SktReport<S>> {
    let d_torsion = m.d(&torsion)?;
    let d_omega = m.d(&kaehler_form(g, jc)?)?;
    Ok(SktReport { torsion, d_torsion, d_omega })
}

/// `L_X J = 0`: `[X, JY] = J[X, Y]` on every frame vector `Y`.
pub fn preserves_structure<S: Coefficient>(
    m: &CoframeModel<S>,
    x: &VectorField<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<bool> {
    for j in 0..m.dim() {
        let y = m.frame(j);
        let lhs = m.lie_bracket(x, &jc.act(&y))?;
        let rhs = jc.act(&m.lie_bracket(x, &y)?);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `L_X g = 0` on frame pairs.
pub fn preserves_metric<S: Coefficient>(m: &CoframeModel<S>, x: &VectorField<S>, g: &HermitianMetric<S>) -> Result<bool> {
    let n = m.dim();
    for a in 0..n {
        let ya = m.frame(a);
        let ba = m.lie_bracket(x, &ya)?;
        for b in a..n {
            let yb = m.frame(b);
            let bb = m.lie_bracket(x, &yb)?;
            let v = m
                .derivative_along(x, g.matrix.get(a, b))?
                .sub_ref(&g.inner(&ba, &yb))
                .sub_ref(&g.inner(&ya, &bb));
            if !v.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    type F = Form<Q>;

    /// `X0→X1, X2→X3` on four frame vectors.
    fn std_i(n: usize) -> AlmostComplexStructure<Q> {
        let mut images = Vec::new();
        for k in 0..n {
            let target = if k % 2 == 0 { k + 1 } else { k - 1 };
            let v = VectorField::frame(target, n);
            images.push(if k % 2 == 0 { v } else { v.neg() });
        }
        AlmostComplexStructure::from_images("I", &images).unwrap()
    }

    #[test]
    fn slot_action_on_generators() {
        let i = std_i(4);
        assert_eq!(i.act_on_covector(&F::generator(0)), F::generator(1));
        assert_eq!(i.act_on_covector(&F::generator(2)), F::generator(3));
        let t = apply_index(&i, &F::generator(0), 1).unwrap();
        assert_eq!(t.as_form().unwrap(), F::generator(1));
        assert!(apply_index(&i, &F::generator(0), 2).is_err());
    }

    #[test]
    fn apply_all_matches_slot_composition() {
        let i = std_i(4);
        let alpha = F::basis(0b0101).add(&F::basis(0b1001).scale(&Q::from(3)));
        let t = apply_index(&i, &alpha, 1).unwrap().apply_slot(&i, 2).unwrap();
        assert_eq!(t.as_form().unwrap(), apply_all(&i, &alpha));
        assert_eq!(apply_all(&i, &F::basis(0b0101)), F::basis(0b1010));
        assert_eq!(apply_all(&i, &F::basis(0b1001)), F::basis(0b0110).neg());
    }

    #[test]
    fn kaehler_form_of_flat_torus() {
        let i = std_i(4);
        let g = HermitianMetric::identity(4);
        assert_eq!(kaehler_form(&g, &i).unwrap(), F::basis(0b0011).add(&F::basis(0b1100)));
    }

    #[test]
    fn holomorphic_covectors_are_minus_i_eigenvectors() {
        let i = std_i(2);
        let theta = F::generator(0).add(&F::generator(1).scale(&Q::i()));
        assert_eq!(i.act_on_covector(&theta), theta.scale(&-Q::i()));
        assert_eq!(type_component(&i, &theta, 1, 0).unwrap(), theta);
        assert!(type_component(&i, &theta, 0, 1).unwrap().is_zero());
    }

    #[test]
    fn one_one_projector_on_two_forms() {
        let i = std_i(4);
        let f = F::basis(0b0101).add(&F::basis(0b0011).scale(&Q::from(2))).sub(&F::basis(0b1010));
        let half = Q::from_ratio(1, 2);
        let expected = f.add(&apply_all(&i, &f)).scale(&half);
        assert_eq!(type_component(&i, &f, 1, 1).unwrap(), expected);
    }

    #[test]
    fn incompatible_metric_is_rejected() {
        let i = std_i(2);
        let g = HermitianMetric::new(Matrix::from_rows(vec![vec![Q::from(1), Q::from(0)], vec![Q::from(0), Q::from(2)]]).unwrap()).unwrap();
        assert!(matches!(kaehler_form(&g, &i), Err(Error::Incompatible(_))));
    }
}
