//! Hypercomplex triples, HKT and instanton conditions, holomorphic volume.

use crate::error::{Error, Result};
use crate::exterior::{CoframeModel, Form, VectorValuedTwoForm};
use crate::hermitian::{
    apply_all, is_integrable, kaehler_form, nijenhuis, preserves_structure, type_component, AlmostComplexStructure,
    HermitianMetric,
};
use crate::scalar::{Coefficient, Scalar};
use crate::twist::{build_twisted_model, lie_operator, torsion_shift, twist_tensor, twisted_differential, TwistData};

#[derive(Clone, PartialEq, Debug)]
pub struct HypercomplexTriple<S: Coefficient = Scalar> {
    i: AlmostComplexStructure<S>,
    j: AlmostComplexStructure<S>,
    k: AlmostComplexStructure<S>,
}

impl<S: Coefficient> HypercomplexTriple<S> {
    /// Checks `IJ = K = −JI`; squares are checked by the structures themselves.
    pub fn new(i: AlmostComplexStructure<S>, j: AlmostComplexStructure<S>, k: AlmostComplexStructure<S>) -> Result<Self> {
        if i.dim() != j.dim() || j.dim() != k.dim() {
            return Err(Error::QuaternionRelations("structures of different sizes".into()));
        }
        if i.compose(&j) != *k.matrix() {
            return Err(Error::QuaternionRelations(format!("{}{} ≠ {}", i.label(), j.label(), k.label())));
        }
        if j.compose(&i) != k.matrix().neg() {
            return Err(Error::QuaternionRelations(format!("{}{} ≠ -{}", j.label(), i.label(), k.label())));
        }
        Ok(Self { i, j, k })
    }

    pub fn i(&self) -> &AlmostComplexStructure<S> {
        &self.i
    }

    pub fn j(&self) -> &AlmostComplexStructure<S> {
        &self.j
    }

    pub fn k(&self) -> &AlmostComplexStructure<S> {
        &self.k
    }

    pub fn structures(&self) -> [&AlmostComplexStructure<S>; 3] {
        [&self.i, &self.j, &self.k]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypercomplexReport<S: Coefficient = Scalar> {
    pub nijenhuis: [VectorValuedTwoForm<S>; 3],
}

impl<S: Coefficient> HypercomplexReport<S> {
    pub fn holds(&self) -> bool {
        self.nijenhuis.iter().all(VectorValuedTwoForm::is_zero)
    }
}

pub fn is_hypercomplex<S: Coefficient>(m: &CoframeModel<S>, h: &HypercomplexTriple<S>) -> Result<HypercomplexReport<S>> {
    Ok(HypercomplexReport { nijenhuis: [nijenhuis(m, &h.i)?, nijenhuis(m, &h.j)?, nijenhuis(m, &h.k)?] })
}

/// Three 3-forms that a condition asks to be equal.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleReport<S: Coefficient = Scalar> {
    pub forms: [Form<S>; 3],
}

impl<S: Coefficient> TripleReport<S> {
    pub fn all_equal(&self) -> bool {
        self.forms[0] == self.forms[1] && self.forms[1] == self.forms[2]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HktReport<S: Coefficient = Scalar> {
    /// `I dω_I`, `J dω_J`, `K dω_K`.
    pub torsions: TripleReport<S>,
    pub hypercomplex: bool,
}

impl<S: Coefficient> HktReport<S> {
    pub fn holds(&self) -> bool {
        self.torsions.all_equal()
    }
}

fn require_compatible<S: Coefficient>(g: &HermitianMetric<S>, h: &HypercomplexTriple<S>) -> Result<()> {
    for a in h.structures() {
        if !g.is_compatible(a) {
            return Err(Error::Incompatible(a.label().to_string()));
        }
    }
    Ok(())
}

/// `I dω_I = J dω_J = K dω_K`.
pub fn is_hkt<S: Coefficient>(m: &CoframeModel<S>, g: &HermitianMetric<S>, h: &HypercomplexTriple<S>) -> Result<HktReport<S>> {
    require_compatible(g, h)?;
    let mut forms = Vec::with_capacity(3);
    for a in h.structures() {
        let omega = kaehler_form(g, a)?;
        forms.push(apply_all(a, &m.d(&omega)?));
    }
    let forms: [Form<S>; 3] = forms.try_into().expect("three structures");
    Ok(HktReport { torsions: TripleReport { forms }, hypercomplex: is_hypercomplex(m, h)?.holds() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HktTwistReport<S: Coefficient = Scalar> {
    /// `a⁻¹ IF∧ξ^♭`, `a⁻¹ JF∧ξ^♭`, `a⁻¹ KF∧ξ^♭`.
    pub shifts: TripleReport<S>,
    /// `is_hkt` evaluated directly on the twisted model.
    pub twisted_hkt: bool,
}

impl<S: Coefficient> HktTwistReport<S> {
    pub fn holds(&self) -> bool {
        self.shifts.all_equal()
    }

    pub fn consistent(&self) -> bool {
        self.holds() == self.twisted_hkt
    }
}

fn require_preserved<S: Coefficient>(m: &CoframeModel<S>, t: &TwistData<S>, h: &HypercomplexTriple<S>) -> Result<()> {
    for a in h.structures() {
        for (n, xi) in t.xi().iter().enumerate() {
            if !preserves_structure(m, xi, a)? {
                return Err(Error::Precondition(format!("xi{n} does not preserve {}", a.label())));
            }
        }
    }
    Ok(())
}

/// `a⁻¹IF∧ξ^♭ = a⁻¹JF∧ξ^♭ = a⁻¹KF∧ξ^♭`, cross-checked against the twisted model.
pub fn hkt_twist_condition<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    g: &HermitianMetric<S>,
    h: &HypercomplexTriple<S>,
) -> Result<HktTwistReport<S>> {
    let base = is_hkt(m, g, h)?;
    if !base.holds() {
        return Err(Error::Precondition("base structure is not HKT".into()));
    }
    require_preserved(m, t, h)?;
    let forms = [torsion_shift(t, g, &h.i)?, torsion_shift(t, g, &h.j)?, torsion_shift(t, g, &h.k)?];
    let w = build_twisted_model(m, t)?;
    let twisted_hkt = is_hkt(&w, g, h)?.holds();
    Ok(HktTwistReport { shifts: TripleReport { forms }, twisted_hkt })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypercomplexTwistReport<S: Coefficient = Scalar> {
    /// `𝓛_A𝓕 − 𝓕` for `A = I, J, K`.
    pub defects: [VectorValuedTwoForm<S>; 3],
    /// Hypercomplexity of the twisted model, when a base model was given.
    pub twisted_hypercomplex: Option<bool>,
}

impl<S: Coefficient> HypercomplexTwistReport<S> {
    pub fn holds(&self) -> bool {
        self.defects.iter().all(VectorValuedTwoForm::is_zero)
    }

    pub fn consistent(&self) -> bool {
        self.twisted_hypercomplex.is_none_or(|v| v == self.holds())
    }
}

/// `𝓛_I𝓕 = 𝓕 = 𝓛_J𝓕 = 𝓛_K𝓕`. With a base model the verdict is compared to
/// the hypercomplexity of the twisted model.
pub fn hypercomplex_twist_condition<S: Coefficient>(
    m: Option<&CoframeModel<S>>,
    t: &TwistData<S>,
    h: &HypercomplexTriple<S>,
) -> Result<HypercomplexTwistReport<S>> {
    let f = twist_tensor(t)?;
    let defects = [
        lie_operator(&h.i, &f).sub(&f),
        lie_operator(&h.j, &f).sub(&f),
        lie_operator(&h.k, &f).sub(&f),
    ];
    let twisted_hypercomplex = match m {
        Some(m) => {
            for a in h.structures() {
                if !is_integrable(m, a)? {
                    return Err(Error::Precondition(format!("{} is not integrable on the base", a.label())));
                }
            }
            require_preserved(m, t, h)?;
            Some(is_hypercomplex(&build_twisted_model(m, t)?, h)?.holds())
        }
        None => None,
    };
    Ok(HypercomplexTwistReport { defects, twisted_hypercomplex })
}

/// Every `F^j` is of type (1,1) for all of `I`, `J`, `K`.
pub fn is_instanton<S: Coefficient>(f: &[Form<S>], h: &HypercomplexTriple<S>) -> Result<bool> {
    for fj in f {
        for a in h.structures() {
            if type_component(a, fj, 1, 1)? != *fj {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeTwistReport<S: Coefficient = Scalar> {
    /// `Σ A[i][j] ξ_i ⌟ (F^j)^{1,1}`.
    pub obstruction: Form<S>,
    /// `d_W Θ`.
    pub twisted_d_theta: Form<S>,
}

impl<S: Coefficient> VolumeTwistReport<S> {
    pub fn holds(&self) -> bool {
        self.obstruction.is_zero()
    }

    pub fn consistent(&self) -> bool {
        self.holds() == self.twisted_d_theta.is_zero()
    }
}

/// `a⁻¹ ξ⌟F^{1,1} = 0`, compared against `d_W Θ = 0`.
pub fn volume_twist_condition<S: Coefficient>(
    m: &CoframeModel<S>,
    t: &TwistData<S>,
    jc: &AlmostComplexStructure<S>,
    theta: &Form<S>,
) -> Result<VolumeTwistReport<S>> {
    let dtheta = m.d(theta)?;
    if !dtheta.is_zero() {
        return Err(Error::Precondition("volume form is not closed".into()));
    }
    let inv = t.a_inv()?;
    let mut obstruction = Form::zero(1);
    for (j, fj) in t.f().iter().enumerate() {
        let f11 = type_component(jc, fj, 1, 1)?;
        if f11.is_zero() {
            continue;
        }
        for (i, xi) in t.xi().iter().enumerate() {
            obstruction = obstruction.add(&f11.interior(xi)?.scale(inv.get(i, j)));
        }
    }
    let twisted_d_theta = twisted_differential(m, t, theta)?;
    Ok(VolumeTwistReport { obstruction, twisted_d_theta })
}

/// `Θ = (ω_J + iω_K)^m` on a `4m`-dimensional model.
pub fn sl_volume_form<S: Coefficient>(g: &HermitianMetric<S>, h: &HypercomplexTriple<S>) -> Result<Form<S>> {
    let n = g.dim();
    if !n.is_multiple_of(4) {
        return Err(Error::Dimension(format!("hypercomplex dimension {n} is not a multiple of 4")));
    }
    let wj = kaehler_form(g, &h.j)?;
    let wk = kaehler_form(g, &h.k)?;
    Ok(wj.add(&wk.scale(&S::imag_unit())).pow((n / 4) as u32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlVolumeReport<S: Coefficient = Scalar> {
    pub d_theta: Form<S>,
    /// `JΘ − conj(Θ)`.
    pub reality_defect: Form<S>,
}

impl<S: Coefficient> SlVolumeReport<S> {
    pub fn closed(&self) -> bool {
        self.d_theta.is_zero()
    }

    pub fn real(&self) -> bool {
        self.reality_defect.is_zero()
    }

    pub fn holds(&self) -> bool {
        self.closed() && self.real()
    }
}

/// `dΘ = 0` and `JΘ = conj(Θ)`.
pub fn sl_volume_check<S: Coefficient>(
    m: &CoframeModel<S>,
    h: &HypercomplexTriple<S>,
    theta: &Form<S>,
) -> Result<SlVolumeReport<S>> {
    if 2 * theta.degree() != m.dim() {
        return Err(Error::Dimension(format!(
            "volume form of degree {} on a {}-dimensional model",
            theta.degree(),
            m.dim()
        )));
    }
    Ok(SlVolumeReport {
        d_theta: m.d(theta)?,
        reality_defect: apply_all(&h.j, theta).sub(&theta.conj()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::VectorField;
    use crate::scalar::GaussianRational as Q;

    type F = Form<Q>;

    fn structure(label: &str, images: [(usize, bool); 4]) -> AlmostComplexStructure<Q> {
        let v: Vec<VectorField<Q>> = images
            .iter()
            .map(|&(k, neg)| {
                let x = VectorField::frame(k, 4);
                if neg { x.neg() } else { x }
            })
            .collect();
        AlmostComplexStructure::from_images(label, &v).unwrap()
    }

    /// Left multiplication by i, j, k on ℍ with frame (1, i, j, k).
    fn triple() -> HypercomplexTriple<Q> {
        let i = structure("I", [(1, false), (0, true), (3, false), (2, true)]);
        let j = structure("J", [(2, false), (3, true), (0, true), (1, false)]);
        let k = structure("K", [(3, false), (2, false), (1, true), (0, true)]);
        HypercomplexTriple::new(i, j, k).unwrap()
    }

    #[test]
    fn flat_kaehler_triple() {
        let h = triple();
        let g = HermitianMetric::identity(4);
        assert_eq!(kaehler_form(&g, h.i()).unwrap(), F::basis(0b0011).add(&F::basis(0b1100)));
        assert_eq!(kaehler_form(&g, h.j()).unwrap(), F::basis(0b0101).sub(&F::basis(0b1010)));
        assert_eq!(kaehler_form(&g, h.k()).unwrap(), F::basis(0b1001).add(&F::basis(0b0110)));
    }

    #[test]
    fn wrong_order_is_rejected() {
        let h = triple();
        assert!(HypercomplexTriple::new(h.j().clone(), h.i().clone(), h.k().clone()).is_err());
    }

    #[test]
    fn anti_self_dual_forms_are_instantons() {
        let h = triple();
        let asd = F::basis(0b0011).sub(&F::basis(0b1100));
        assert!(is_instanton(&[asd], &h).unwrap());
        let omega_i = F::basis(0b0011).add(&F::basis(0b1100));
        assert!(!is_instanton(&[omega_i], &h).unwrap());
    }

    #[test]
    fn flat_volume_form_is_real_for_j() {
        let h = triple();
        let g = HermitianMetric::identity(4);
        let m = CoframeModel::<Q>::flat((0..4).map(|k| format!("b{k}")).collect());
        let theta = sl_volume_form(&g, &h).unwrap();
        assert!(sl_volume_check(&m, &h, &theta).unwrap().holds());
        assert_eq!(type_component(h.i(), &theta, 2, 0).unwrap(), theta);
    }
}
