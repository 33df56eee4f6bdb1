//! Twist data and the twisted model.
//!
//! Index orientation: `a[j][i]` has `j` indexing the `F^j` and `i` indexing
//! the `ξ_i`; `A = a⁻¹` has `A[i][j]`. Throughout, `G^i = Σ_j A[i][j] F^j`,
//! the components of `a⁻¹F`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{CoframeModel, Form, VectorField, VectorValuedTwoForm};
use crate::hermitian::{
    apply_all, apply_derivation, bismut_torsion, is_integrable, nijenhuis, preserves_structure, type_component,
    AlmostComplexStructure, HermitianMetric,
};
use crate::linalg::Matrix;
use crate::scalar::{Coefficient, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct TwistData<S: Coefficient = Scalar> {
    xi: Vec<VectorField<S>>,
    f: Vec<Form<S>>,
    a: Matrix<S>,
}

impl<S: Coefficient> TwistData<S> {
    /// Shape checks only; see [`validate_twist_data`] for the rest.
    pub fn new(xi: Vec<VectorField<S>>, f: Vec<Form<S>>, a: Matrix<S>) -> Result<Self> {
        if xi.len() != f.len() {
            return Err(Error::InvalidTwist(format!("{} vector fields but {} two-forms", xi.len(), f.len())));
        }
        if a.rows() != f.len() || a.cols() != xi.len() {
            return Err(Error::InvalidTwist(format!(
                "a is {}x{}, expected {}x{}",
                a.rows(),
                a.cols(),
                f.len(),
                xi.len()
            )));
        }
        if let Some(bad) = f.iter().position(|g| !g.is_zero() && g.degree() != 2) {
            return Err(Error::InvalidTwist(format!("F[{bad}] is not a 2-form")));
        }
        if let Some(d) = xi.first().map(VectorField::dim) {
            if xi.iter().any(|x| x.dim() != d) {
                return Err(Error::InvalidTwist("vector fields of different dimensions".into()));
            }
        }
        Ok(Self { xi, f, a })
    }

    pub fn xi(&self) -> &[VectorField<S>] {
        &self.xi
    }

    pub fn f(&self) -> &[Form<S>] {
        &self.f
    }

    pub fn a(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn rank(&self) -> usize {
        self.xi.len()
    }

    pub fn a_inv(&self) -> Result<Matrix<S>> {
        self.a.inverse().ok_or_else(|| Error::Singular("lifting function a".into()))
    }

    /// `G^i = Σ_j A[i][j] F^j`.
    pub fn weighted_forms(&self) -> Result<Vec<Form<S>>> {
        let inv = self.a_inv()?;
        Ok((0..self.rank())
            .map(|i| {
                self.f
                    .iter()
                    .enumerate()
                    .fold(Form::zero(2), |acc, (j, fj)| acc.add(&fj.scale(inv.get(i, j))))
            })
            .collect())
    }

    /// True when every `F^j` vanishes.
    pub fn is_trivial(&self) -> bool {
        self.f.iter().all(Form::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A list of named pass/fail items with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub items: Vec<ReportItem>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.items.push(ReportItem { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| !i.passed)
    }

    pub fn get(&self, name: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            write!(f, "{} {}", if item.passed { "ok  " } else { "FAIL" }, item.name)?;
            if !item.detail.is_empty() {
                write!(f, ": {}", item.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn fmt_form<S: Coefficient>(m: &CoframeModel<S>, f: &Form<S>) -> String {
    f.display_with(m.coframe()).to_string()
}

/// Checks `a` invertible, `da = −ξ⌟F`, `L_ξ F = 0`, `ξ^*F = 0`, `[ξ,ξ] = 0`,
/// `dx(ξ) = 0`, `dF = 0`, and that the coframe itself is `ξ`-invariant.
pub fn validate_twist_data<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>) -> Report {
    let mut r = Report::default();
    let n = m.dim();
    if t.xi.iter().any(|x| x.dim() != n) {
        r.push("dimensions", false, format!("vector fields must have {n} components"));
        return r;
    }
    if let Some(j) = t.f.iter().position(|f| f.support_dim() > n) {
        r.push("dimensions", false, format!("F[{j}] uses a frame index beyond the coframe"));
        return r;
    }
    if !t.a.is_square() {
        r.push("a invertible", false, "a is not square");
        return r;
    }
    let det = t.a.det();
    r.push("a invertible", !det.is_zero(), format!("det a = {det}"));

    let mut bad = Vec::new();
    for (j, fj) in t.f.iter().enumerate() {
        for (i, xi) in t.xi.iter().enumerate() {
            let lhs = match m.differential(t.a.get(j, i)) {
                Ok(v) => v,
                Err(e) => {
                    bad.push(format!("a[{j}][{i}]: {e}"));
                    continue;
                }
            };
            let rhs = fj.interior(xi).map(|v| v.neg()).unwrap_or_else(|_| Form::zero(1));
            if lhs != rhs {
                bad.push(format!(
                    "d(a[{j}][{i}]) = {} but -xi{i}⌟F{j} = {}",
                    fmt_form(m, &lhs),
                    fmt_form(m, &rhs)
                ));
            }
        }
    }
    r.push("lifting equation da = -xi⌟F", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for (j, fj) in t.f.iter().enumerate() {
        for (i, xi) in t.xi.iter().enumerate() {
            match m.lie_derivative(xi, fj) {
                Ok(l) if l.is_zero() => {}
                Ok(l) => bad.push(format!("L_xi{i} F{j} = {}", fmt_form(m, &l))),
                Err(e) => bad.push(format!("L_xi{i} F{j}: {e}")),
            }
        }
    }
    r.push("invariance L_xi F = 0", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for (j, fj) in t.f.iter().enumerate() {
        for i in 0..t.rank() {
            for k in i + 1..t.rank() {
                let v = fj.evaluate(&[&t.xi[i], &t.xi[k]]).unwrap_or_else(|_| S::zero());
                if !v.is_zero() {
                    bad.push(format!("F{j}(xi{i}, xi{k}) = {v}"));
                }
            }
        }
    }
    r.push("isotropy xi^*F = 0", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for i in 0..t.rank() {
        for k in i + 1..t.rank() {
            match m.lie_bracket(&t.xi[i], &t.xi[k]) {
                Ok(b) if b.is_zero() => {}
                Ok(b) => bad.push(format!("[xi{i}, xi{k}] = {}", b.display_with(m.coframe()))),
                Err(e) => bad.push(format!("[xi{i}, xi{k}]: {e}")),
            }
        }
    }
    r.push("commuting [xi, xi] = 0", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for (c, dx) in m.coordinate_differentials().iter().enumerate() {
        for (i, xi) in t.xi.iter().enumerate() {
            let v = xi.pair(dx);
            if !v.is_zero() {
                bad.push(format!("d{}(xi{i}) = {v}", m.coordinates()[c]));
            }
        }
    }
    r.push("coordinates invariant dx(xi) = 0", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for (j, fj) in t.f.iter().enumerate() {
        match m.d(fj) {
            Ok(d) if d.is_zero() => {}
            Ok(d) => bad.push(format!("dF{j} = {}", fmt_form(m, &d))),
            Err(e) => bad.push(format!("dF{j}: {e}")),
        }
    }
    r.push("closed dF = 0", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for k in 0..n {
        for (i, xi) in t.xi.iter().enumerate() {
            match m.lie_derivative(xi, &m.generator(k)) {
                Ok(l) if l.is_zero() => {}
                Ok(l) => bad.push(format!("L_xi{i} {} = {}", m.coframe()[k], fmt_form(m, &l))),
                Err(e) => bad.push(format!("L_xi{i} {}: {e}", m.coframe()[k])),
            }
        }
    }
    r.push("coframe invariant L_xi e = 0", bad.is_empty(), bad.join("; "));
    r
}

fn require_valid<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>) -> Result<()> {
    let report = validate_twist_data(m, t);
    if report.passed() {
        return Ok(());
    }
    let msg: Vec<String> = report.failures().map(|f| format!("{} ({})", f.name, f.detail)).collect();
    Err(Error::InvalidTwist(msg.join("; ")))
}

/// `𝓕 = Σ_{i,j} A[i][j] ξ_i ⊗ F^j`.
pub fn twist_tensor<S: Coefficient>(t: &TwistData<S>) -> Result<VectorValuedTwoForm<S>> {
    let g = t.weighted_forms()?;
    let n = t.xi.first().map_or(0, VectorField::dim);
    Ok(t.xi
        .iter()
        .zip(&g)
        .fold(VectorValuedTwoForm::zero(n), |acc, (x, gi)| acc.add(&VectorValuedTwoForm::tensor(x, gi))))
}

fn require_invariant_form<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>, alpha: &Form<S>) -> Result<()> {
    for (i, xi) in t.xi.iter().enumerate() {
        let l = m.lie_derivative(xi, alpha)?;
        if !l.is_zero() {
            return Err(Error::NotInvariant(format!("L_xi{i} = {}", fmt_form(m, &l))));
        }
    }
    Ok(())
}

fn require_invariant_vector<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>, x: &VectorField<S>) -> Result<()> {
    for (i, xi) in t.xi.iter().enumerate() {
        let b = m.lie_bracket(xi, x)?;
        if !b.is_zero() {
            return Err(Error::NotInvariant(format!("[xi{i}, X] = {}", b.display_with(m.coframe()))));
        }
    }
    Ok(())
}

/// `d_W α = dα − Σ_{i,j} A[i][j] F^j ∧ ι_{ξ_i}α` on invariant forms.
pub fn twisted_differential<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>, alpha: &Form<S>) -> Result<Form<S>> {
    require_invariant_form(m, t, alpha)?;
    let mut out = m.d(alpha)?;
    if alpha.degree() == 0 {
        return Ok(out);
    }
    let g = t.weighted_forms()?;
    for (xi, gi) in t.xi.iter().zip(&g) {
        out = out.sub(&gi.wedge(&alpha.interior(xi)?));
    }
    Ok(out)
}

/// `[X,Y]_W = [X,Y] + Σ_{i,j} A[i][j] F^j(X,Y) ξ_i`, the bracket of the
/// twisted model's structure equations.
pub fn twisted_bracket<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    x: &VectorField<S>,
    y: &VectorField<S>,
) -> Result<VectorField<S>> {
    require_invariant_vector(m, t, x)?;
    require_invariant_vector(m, t, y)?;
    let mut out = m.lie_bracket(x, y)?;
    for (xi, gi) in t.xi.iter().zip(&t.weighted_forms()?) {
        out = out.add(&xi.scale(&gi.evaluate(&[x, y])?));
    }
    Ok(out)
}

/// Same coframe and coordinates with `de^k := d_W e^k`.
pub fn build_twisted_model<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>) -> Result<CoframeModel<S>> {
    require_valid(m, t)?;
    let structure = (0..m.dim())
        .map(|k| twisted_differential(m, t, &m.generator(k)))
        .collect::<Result<Vec<_>>>()?;
    m.with_structure(structure)
}

/// Data on `W` that twists back to `M`: `ζ_j = −Σ_i A[i][j] ξ_i`,
/// `F_W^i = G^i`, `a_W = a⁻¹`.
pub fn dual_twist_data<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>) -> Result<TwistData<S>> {
    require_valid(m, t)?;
    let inv = t.a_inv()?;
    let n = m.dim();
    let zeta = (0..t.f.len())
        .map(|j| {
            t.xi.iter()
                .enumerate()
                .fold(VectorField::zero(n), |acc, (i, xi)| acc.sub(&xi.scale(inv.get(i, j))))
        })
        .collect();
    TwistData::new(zeta, t.weighted_forms()?, inv)
}

/// `𝓛_J T = Σ_k [X_k ⊗ J_{(12)}T_k + J X_k ⊗ D_J T_k]`, where the vector slot
/// is acted on by `J` itself and `D_J` is the derivation extension.
pub fn lie_operator<S: Coefficient>(jc: &AlmostComplexStructure<S>, t: &VectorValuedTwoForm<S>) -> VectorValuedTwoForm<S> {
    let n = t.dim();
    let mut comps: Vec<Form<S>> = t.components().iter().map(|f| apply_all(jc, f)).collect();
    for (k, tk) in t.components().iter().enumerate() {
        if tk.is_zero() {
            continue;
        }
        let dk = apply_derivation(jc, tk);
        for (l, comp) in comps.iter_mut().enumerate().take(n) {
            let mlk = jc.matrix().get(l, k);
            if !mlk.is_zero() {
                *comp = comp.add(&dk.scale(mlk));
            }
        }
    }
    VectorValuedTwoForm::from_components(comps)
}

/// Adapted basis for the orbit: `X'_k = Σ_i basis[i][k] ξ_i`, with
/// `J X'_{2j−1} = X'_{2j}` for `j ≤ s` and `X'_1..X'_r` spanning the orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedBasis<S: Coefficient = Scalar> {
    pub s: usize,
    pub r: usize,
    pub basis: Matrix<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityReport<S: Coefficient = Scalar> {
    /// `(1 − 𝓛_J)𝓕`.
    pub obstruction: VectorValuedTwoForm<S>,
    /// Verdict of the adapted-basis criterion, when a basis was supplied.
    pub lemma: Option<bool>,
}

impl<S: Coefficient> IntegrabilityReport<S> {
    pub fn integrable(&self) -> bool {
        self.obstruction.is_zero()
    }

    pub fn criteria_agree(&self) -> bool {
        self.lemma.is_none_or(|l| l == self.integrable())
    }
}

/// Whether the twisted structure stays integrable, via `(1−𝓛_J)𝓕 = 0` and,
/// if given an adapted basis, the type conditions on its components.
pub fn twist_integrability<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    jc: &AlmostComplexStructure<S>,
    adapted: Option<&AdaptedBasis<S>>,
) -> Result<IntegrabilityReport<S>> {
    if !is_integrable(m, jc)? {
        return Err(Error::Precondition(format!("{} is not integrable on the base", jc.label())));
    }
    for (i, xi) in t.xi.iter().enumerate() {
        if !preserves_structure(m, xi, jc)? {
            return Err(Error::Precondition(format!("xi{i} does not preserve {}", jc.label())));
        }
    }
    let f = twist_tensor(t)?;
    let obstruction = f.sub(&lie_operator(jc, &f));
    let lemma = adapted.map(|b| adapted_criterion(t, jc, b)).transpose()?;
    Ok(IntegrabilityReport { obstruction, lemma })
}

fn adapted_criterion<S: Coefficient>(t: &TwistData<S>, jc: &AlmostComplexStructure<S>, b: &AdaptedBasis<S>) -> Result<bool> {
    let n = t.rank();
    if b.basis.rows() != n || b.basis.cols() != n || 2 * b.s > b.r || b.r > n {
        return Err(Error::Precondition("adapted basis has the wrong shape".into()));
    }
    let binv = b.basis.inverse().ok_or_else(|| Error::Singular("adapted basis".into()))?;
    let dim = t.xi.first().map_or(0, VectorField::dim);
    let vecs: Vec<VectorField<S>> = (0..n)
        .map(|k| {
            t.xi.iter()
                .enumerate()
                .fold(VectorField::zero(dim), |acc, (i, xi)| acc.add(&xi.scale(b.basis.get(i, k))))
        })
        .collect();
    for j in 0..b.s {
        if jc.act(&vecs[2 * j]) != vecs[2 * j + 1] {
            return Err(Error::Precondition(format!("adapted basis: J X'{} ≠ X'{}", 2 * j + 1, 2 * j + 2)));
        }
    }
    if let Some(k) = (b.r..n).find(|&k| !vecs[k].is_zero()) {
        return Err(Error::Precondition(format!("adapted basis: X'{} should vanish", k + 1)));
    }
    // F'_k = Σ_i binv[k][i] G^i
    let g = t.weighted_forms()?;
    let fp: Vec<Form<S>> = (0..n)
        .map(|k| g.iter().enumerate().fold(Form::zero(2), |acc, (i, gi)| acc.add(&gi.scale(binv.get(k, i)))))
        .collect();
    for j in 0..b.s {
        let fc = fp[2 * j].add(&fp[2 * j + 1].scale(&S::imag_unit()));
        if !type_component(jc, &fc, 0, 2)?.is_zero() {
            return Ok(false);
        }
    }
    for fk in &fp[2 * b.s..b.r] {
        if type_component(jc, fk, 1, 1)? != *fk {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nijenhuis tensor of the twisted model, computed from its structure equations.
pub fn twisted_nijenhuis<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<VectorValuedTwoForm<S>> {
    nijenhuis(&build_twisted_model(m, t)?, jc)
}

/// `c − Σ_i J G^i ∧ ξ_i^♭`.
pub fn transferred_torsion<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<Form<S>> {
    let c = bismut_torsion(m, g, jc)?;
    torsion_shift(t, g, jc).map(|shift| c.sub(&shift))
}

/// `Σ_i J G^i ∧ ξ_i^♭`, i.e. `a⁻¹ JF ∧ ξ^♭`.
pub fn torsion_shift<S: Coefficient>(t: &TwistData<S>, g: &HermitianMetric<S>, jc: &AlmostComplexStructure<S>) -> Result<Form<S>> {
    let gs = t.weighted_forms()?;
    Ok(t.xi
        .iter()
        .zip(&gs)
        .fold(Form::zero(3), |acc, (xi, gi)| acc.add(&apply_all(jc, gi).wedge(&g.flat(xi)))))
}

/// The general expansion of `d_W c_W` in terms of data on `M`:
///
/// `dc − Σ_k G^k∧ι_k c − Σ_i (Σ_j A[i][j] d(JF^j))∧ξ_i^♭ − Σ_i JG^i∧dξ_i^♭
///  + Σ_{k,i} g(ξ_i,ξ_k) G^k∧JG^i + Σ_{k,i} G^k∧(ι_k JG^i)∧ξ_i^♭
///  − Σ_{i,n} (ι_n G^i)∧JG^n∧ξ_i^♭`.
pub fn dc_expansion<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<Form<S>> {
    let c = bismut_torsion(m, g, jc)?;
    let inv = t.a_inv()?;
    let gs = t.weighted_forms()?;
    let jg: Vec<Form<S>> = gs.iter().map(|gi| apply_all(jc, gi)).collect();
    let flats: Vec<Form<S>> = t.xi.iter().map(|x| g.flat(x)).collect();
    let r = t.rank();
    let mut out = m.d(&c)?;
    for k in 0..r {
        out = out.sub(&gs[k].wedge(&c.interior(&t.xi[k])?));
    }
    for i in 0..r {
        let mut weighted_d = Form::zero(3);
        for (j, fj) in t.f.iter().enumerate() {
            weighted_d = weighted_d.add(&m.d(&apply_all(jc, fj))?.scale(inv.get(i, j)));
        }
        out = out.sub(&weighted_d.wedge(&flats[i]));
        out = out.sub(&jg[i].wedge(&m.d(&flats[i])?));
    }
    for k in 0..r {
        for i in 0..r {
            let gik = g.inner(&t.xi[i], &t.xi[k]);
            out = out.add(&gs[k].wedge(&jg[i]).scale(&gik));
            out = out.add(&gs[k].wedge(&jg[i].interior(&t.xi[k])?).wedge(&flats[i]));
            out = out.sub(&gs[i].interior(&t.xi[k])?.wedge(&jg[k]).wedge(&flats[i]));
        }
    }
    Ok(out)
}

/// Instanton simplification `dc − Σ_k G^k ∧ (ι_k c + dξ_k^♭ − Σ_i g(ξ_k,ξ_i) G^i)`.
pub fn dc_instanton<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    g: &HermitianMetric<S>,
    jc: &AlmostComplexStructure<S>,
) -> Result<Form<S>> {
    let c = bismut_torsion(m, g, jc)?;
    let gs = t.weighted_forms()?;
    let r = t.rank();
    let mut out = m.d(&c)?;
    for k in 0..r {
        let mut inner = c.interior(&t.xi[k])?.add(&m.d(&g.flat(&t.xi[k]))?);
        for i in 0..r {
            inner = inner.sub(&gs[i].scale(&g.inner(&t.xi[k], &t.xi[i])));
        }
        out = out.sub(&gs[k].wedge(&inner));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|k| format!("e{k}")).collect()
    }

    /// Flat T⁴, ξ = X4, F = e12, a = 1.
    fn kodaira_thurston() -> (CoframeModel<Q>, TwistData<Q>) {
        let m = CoframeModel::flat(names(4));
        let t = TwistData::new(vec![m.frame(3)], vec![Form::basis(0b0011)], Matrix::identity(1)).unwrap();
        (m, t)
    }

    #[test]
    fn kodaira_thurston_structure() {
        let (m, t) = kodaira_thurston();
        assert!(validate_twist_data(&m, &t).passed());
        let w = build_twisted_model(&m, &t).unwrap();
        assert_eq!(w.structure()[3], Form::basis(0b0011).neg());
        assert!(w.structure()[..3].iter().all(Form::is_zero));
        assert!(w.validate().passed());
    }

    #[test]
    fn twisted_bracket_matches_twisted_model() {
        let (m, t) = kodaira_thurston();
        let w = build_twisted_model(&m, &t).unwrap();
        let b = twisted_bracket(&m, &t, &m.frame(0), &m.frame(1)).unwrap();
        assert_eq!(b, m.frame(3));
        assert_eq!(b, w.lie_bracket(&w.frame(0), &w.frame(1)).unwrap());
    }

    #[test]
    fn dual_data_untwists() {
        let (m, t) = kodaira_thurston();
        let w = build_twisted_model(&m, &t).unwrap();
        let dual = dual_twist_data(&m, &t).unwrap();
        assert!(validate_twist_data(&w, &dual).passed());
        for k in 0..4 {
            assert_eq!(twisted_differential(&w, &dual, &w.generator(k)).unwrap(), m.d(&m.generator(k)).unwrap());
        }
    }

    #[test]
    fn non_isotropic_data_fails_validation() {
        let m = CoframeModel::<Q>::flat(names(4));
        let t = TwistData::new(vec![m.frame(0)], vec![Form::basis(0b0011)], Matrix::identity(1)).unwrap();
        let report = validate_twist_data(&m, &t);
        assert!(!report.get("lifting equation da = -xi⌟F").unwrap().passed);
        assert!(build_twisted_model(&m, &t).is_err());
    }

    #[test]
    fn lie_operator_eigenvalues() {
        let images = [(1, false), (0, true), (3, false), (2, true)];
        let jc = AlmostComplexStructure::from_images(
            "I",
            &images
                .iter()
                .map(|&(k, neg)| {
                    let v = VectorField::<Q>::frame(k, 4);
                    if neg { v.neg() } else { v }
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let t = VectorValuedTwoForm::from_components(vec![
            Form::basis(0b0011),
            Form::basis(0b0101).scale(&Q::from(2)),
            Form::basis(0b1010).sub(&Form::basis(0b1001)),
            Form::zero(2),
        ]);
        let l = |x: &VectorValuedTwoForm<Q>| lie_operator(&jc, x);
        let lhs = l(&l(&t)).add(&l(&t).scale(&Q::from(2))).sub(&t.scale(&Q::from(3)));
        assert!(lhs.is_zero());
    }
}
