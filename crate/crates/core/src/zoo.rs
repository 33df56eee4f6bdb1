//! Worked examples as ready-made model files, and a solver for the lifting
//! function `a`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{CoframeModel, Form, VectorField};
use crate::hermitian::{kaehler_form, AlmostComplexStructure, HermitianMetric};
use crate::linalg::Matrix;
use crate::modelfile::{CheckCall, Expect, ModelFile};
use crate::quaternionic::{sl_volume_form, HypercomplexTriple};
use crate::scalar::{GaussianRational, Monomial, Poly, Scalar};
use crate::twist::{AdaptedBasis, TwistData};

/// A registry example: a model file whose checks record the expected outcomes.
pub type NamedExample = ModelFile;

pub const REGISTRY: &[&str] = &[
    "flat_torus(n)",
    "kodaira_thurston",
    "skt_t2xt2_bundle",
    "skt_non_instanton(e1,e2)",
    "halfline_t3",
    "hc_not_hkt_surrogate",
    "su2_su2",
    "hkt_instanton_t4xt4",
];

fn unknown(name: &str) -> Error {
    Error::UnknownExample { name: name.to_string(), registry: REGISTRY.join(", ") }
}

fn parse_call(name: &str) -> Option<(&str, Vec<i64>)> {
    let name = name.trim();
    match name.split_once('(') {
        None => Some((name, Vec::new())),
        Some((head, rest)) => {
            let inner = rest.strip_suffix(')')?;
            let args = inner.split(',').map(|a| a.trim().parse().ok()).collect::<Option<Vec<i64>>>()?;
            Some((head.trim(), args))
        }
    }
}

/// Builds a registry example. Parameterised entries take integer arguments,
/// e.g. `flat_torus(6)` or `skt_non_instanton(1,-1)`.
pub fn make_example(name: &str) -> Result<NamedExample> {
    let (head, args) = parse_call(name).ok_or_else(|| unknown(name))?;
    match (head, args.as_slice()) {
        ("flat_torus", []) => flat_torus(4),
        ("flat_torus", [n]) if (1..=32).contains(n) => flat_torus(*n as usize),
        ("kodaira_thurston", []) => Ok(kodaira_thurston()),
        ("skt_t2xt2_bundle", []) => Ok(skt_t2xt2_bundle()),
        ("skt_non_instanton", []) => Ok(skt_non_instanton(1, 1)),
        ("skt_non_instanton", [a, b]) if [a, b].iter().all(|e| e.abs() == 1) => Ok(skt_non_instanton(*a, *b)),
        ("halfline_t3", []) => Ok(halfline_t3()),
        ("hc_not_hkt_surrogate", []) => Ok(hc_not_hkt_surrogate()),
        ("su2_su2", []) => Ok(su2_su2()),
        ("hkt_instanton_t4xt4", []) => Ok(hkt_instanton_t4xt4()),
        _ => Err(unknown(name)),
    }
}

/// Every fixed registry entry, with parameterised ones at their defaults
/// and both sign choices of `skt_non_instanton` spelled out.
pub fn all_examples() -> Vec<NamedExample> {
    let names = [
        "flat_torus(4)",
        "flat_torus(6)",
        "kodaira_thurston",
        "skt_t2xt2_bundle",
        "skt_non_instanton(1,1)",
        "skt_non_instanton(1,-1)",
        "skt_non_instanton(-1,1)",
        "skt_non_instanton(-1,-1)",
        "halfline_t3",
        "hc_not_hkt_surrogate",
        "su2_su2",
        "hkt_instanton_t4xt4",
    ];
    names.iter().map(|n| make_example(n).expect("registry example")).collect()
}

fn names(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|k| format!("{prefix}{k}")).collect()
}

/// `X_a ↦ X_b`, `X_b ↦ −X_a` for each pair.
fn complex(label: &str, n: usize, pairs: &[(usize, usize)]) -> AlmostComplexStructure {
    let mut images = vec![VectorField::zero(n); n];
    for &(a, b) in pairs {
        images[a] = VectorField::frame(b, n);
        images[b] = VectorField::frame(a, n).neg();
    }
    AlmostComplexStructure::from_images(label, &images).expect("complex structure")
}

/// Left multiplication by i, j, k on each block of four frame vectors.
fn quaternionic(n: usize, blocks: &[usize]) -> HypercomplexTriple {
    let pairs = |f: fn(usize) -> [(usize, usize); 2]| blocks.iter().flat_map(|&o| f(o)).collect::<Vec<_>>();
    let i = complex("I", n, &pairs(|o| [(o, o + 1), (o + 2, o + 3)]));
    let j = complex("J", n, &pairs(|o| [(o, o + 2), (o + 3, o + 1)]));
    let k = complex("K", n, &pairs(|o| [(o, o + 3), (o + 1, o + 2)]));
    HypercomplexTriple::new(i, j, k).expect("quaternion relations")
}

fn e(idx: &[usize]) -> Form {
    Form::wedge_of(idx)
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn twist(xi: Vec<VectorField>, f: Vec<Form>, a: Matrix<Scalar>) -> TwistData {
    TwistData::new(xi, f, a).expect("twist shapes")
}

fn check(name: &str, args: &[&str]) -> CheckCall {
    CheckCall::new(name, args)
}

const TWIST_BASICS: [&str; 4] = ["validate_model", "validate_twist_data", "twisted_d_squared", "dual_round_trip"];

fn basics() -> Vec<CheckCall> {
    TWIST_BASICS.iter().map(|n| check(n, &[])).collect()
}

pub fn flat_torus(n: usize) -> Result<NamedExample> {
    if n == 0 || n > 32 {
        return Err(Error::Dimension(format!("flat_torus({n})")));
    }
    let mut file = ModelFile::new(format!("flat_torus({n})"), CoframeModel::flat(names("e", 1..n + 1)));
    file.checks.push(check("validate_model", &[]));
    file.checks.push(check("random_identities", &[]));
    if n.is_multiple_of(2) {
        let pairs: Vec<(usize, usize)> = (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect();
        file.complex.push(complex("I", n, &pairs));
        file.metrics.push(("g".into(), HermitianMetric::identity(n)));
        file.checks.push(check("is_integrable", &["I"]));
        file.checks.push(check("is_kaehler", &["g", "I"]));
    }
    Ok(file)
}

/// Flat `T⁴` twisted along `X4` by `e1^e2`: `de4 = −e1^e2` on the result.
pub fn kodaira_thurston() -> NamedExample {
    let n = 4;
    let m = CoframeModel::flat(names("e", 1..5));
    let mut file = ModelFile::new("kodaira_thurston", m);
    file.complex.push(complex("I", n, &[(0, 1), (2, 3)]));
    file.metrics.push(("g".into(), HermitianMetric::identity(n)));
    let theta = e(&[0]).add(&e(&[1]).scale(&Scalar::i())).wedge(&e(&[2]).add(&e(&[3]).scale(&Scalar::i())));
    file.forms.push(("Theta".into(), theta));
    file.twist = Some(twist(vec![VectorField::frame(3, n)], vec![e(&[0, 1])], Matrix::identity(1)));
    file.adapted = Some(AdaptedBasis { s: 0, r: 1, basis: Matrix::identity(1) });
    file.checks = basics();
    file.checks.extend([
        check("twist_integrability", &["I"]),
        check("nijenhuis_transfer", &["I"]),
        check("volume_twist_condition", &["I", "Theta"]),
        check("torsion_transfer", &["g", "I"]),
        check("dc_transfer", &["g", "I"]),
        check("is_skt", &["g", "I"]).on_twisted(),
        check("is_kaehler", &["g", "I"]).on_twisted().expect(Expect::Fail),
    ]);
    file
}

/// A variant of the Kodaira–Thurston data on `ℝ × T³` whose lifting function
/// is the coordinate `x` itself; `ξ⌟F` has a (1,1) part, so `d_W Θ ≠ 0`.
pub fn volume_obstructed() -> NamedExample {
    let n = 4;
    let m = CoframeModel::new(names("e", 1..5), vec!["x".into()], vec![Form::zero(2); n], vec![e(&[0])])
        .expect("model")
        .with_nonzero("x")
        .expect("coordinate");
    let mut file = ModelFile::new("volume_obstructed", m);
    file.complex.push(complex("I", n, &[(0, 1), (2, 3)]));
    let theta = e(&[0]).add(&e(&[1]).scale(&Scalar::i())).wedge(&e(&[2]).add(&e(&[3]).scale(&Scalar::i())));
    file.forms.push(("Theta".into(), theta));
    let a = Matrix::from_rows(vec![vec![Scalar::var("x")]]).expect("1x1");
    file.twist = Some(twist(vec![VectorField::frame(1, n)], vec![e(&[0, 1])], a));
    file.checks = basics();
    file.checks.push(check("volume_twist_condition", &["I", "Theta"]).expect(Expect::Fail));
    file
}

/// `T²×T²×T²` twisted along the last factor by `(e1^e2, e3^e4)`.
pub fn skt_t2xt2_bundle() -> NamedExample {
    let n = 6;
    let mut file = ModelFile::new("skt_t2xt2_bundle", CoframeModel::flat(names("e", 1..7)));
    file.complex.push(complex("I", n, &[(0, 1), (2, 3), (4, 5)]));
    file.metrics.push(("g".into(), HermitianMetric::identity(n)));
    file.twist = Some(twist(
        vec![VectorField::frame(4, n), VectorField::frame(5, n)],
        vec![e(&[0, 1]), e(&[2, 3])],
        Matrix::identity(2),
    ));
    file.adapted = Some(AdaptedBasis { s: 1, r: 2, basis: Matrix::identity(2) });
    file.checks = basics();
    file.checks.extend(skt_checks());
    file
}

fn skt_checks() -> Vec<CheckCall> {
    vec![
        check("twist_integrability", &["I"]),
        check("nijenhuis_transfer", &["I"]),
        check("torsion_transfer", &["g", "I"]),
        check("dc_transfer", &["g", "I"]),
        check("is_skt", &["g", "I"]).on_twisted(),
        check("is_kaehler", &["g", "I"]).on_twisted().expect(Expect::Fail),
    ]
}

/// The hyperkähler triple of flat `T⁴` on `e1..e4`.
fn t4_triple() -> [Form; 3] {
    [
        e(&[0, 1]).add(&e(&[2, 3])),
        e(&[0, 2]).sub(&e(&[1, 3])),
        e(&[0, 3]).add(&e(&[1, 2])),
    ]
}

fn t4_times_t2(name: String, f1: Form, f2: Form) -> NamedExample {
    let n = 6;
    let mut file = ModelFile::new(name, CoframeModel::flat(names("e", 1..7)));
    file.complex.push(complex("I", n, &[(0, 1), (2, 3), (4, 5)]));
    file.metrics.push(("g".into(), HermitianMetric::identity(n)));
    file.twist = Some(twist(vec![VectorField::frame(4, n), VectorField::frame(5, n)], vec![f1, f2], Matrix::identity(2)));
    file.adapted = Some(AdaptedBasis { s: 1, r: 2, basis: Matrix::identity(2) });
    file
}

/// `T⁴×T²` (flat stand-in for K3 × T²) twisted by
/// `(ε1 ω_I + ω_J, ε2 ω_I + ω_K)`, neither of which is an instanton.
pub fn skt_non_instanton(eps1: i64, eps2: i64) -> NamedExample {
    let [wi, wj, wk] = t4_triple();
    let f1 = wi.scale(&int(eps1)).add(&wj);
    let f2 = wi.scale(&int(eps2)).add(&wk);
    let name = if (eps1, eps2) == (1, 1) { "skt_non_instanton".to_string() } else { format!("skt_non_instanton({eps1},{eps2})") };
    let mut file = t4_times_t2(name, f1, f2);
    file.checks = basics();
    file.checks.extend(skt_checks());
    file
}

/// [`skt_non_instanton`] with `ω_J` in place of `ω_I`: the twisted structure
/// is no longer integrable and its formal torsion is not closed.
pub fn skt_non_instanton_control(eps1: i64, eps2: i64) -> NamedExample {
    let [_, wj, wk] = t4_triple();
    let f1 = wj.scale(&int(eps1)).add(&wj);
    let f2 = wj.scale(&int(eps2)).add(&wk);
    let mut file = t4_times_t2(format!("skt_non_instanton_control({eps1},{eps2})"), f1, f2);
    file.checks = basics();
    file.checks.extend([
        check("twist_integrability", &["I"]).expect(Expect::Fail),
        check("formal_skt", &["g", "I"]).on_twisted().expect(Expect::Fail),
    ]);
    file
}

/// `ℝ_{>0} × T³` with coordinate `x0`, twisted along the torus by
/// `b0^b1, b0^b2, b0^b3` with `a = −x0·Id`.
pub fn halfline_t3() -> NamedExample {
    let n = 4;
    let x0 = Scalar::var("x0");
    let m = CoframeModel::new(names("b", 0..4), vec!["x0".into()], vec![Form::zero(2); n], vec![e(&[0]).neg()])
        .expect("model")
        .with_nonzero("x0")
        .expect("coordinate");
    let mut file = ModelFile::new("halfline_t3", m);
    let h = quaternionic(n, &[0]);
    file.complex.extend(h.structures().map(Clone::clone));
    file.metrics.push(("g".into(), HermitianMetric::identity(n)));
    file.hypercomplex.push(("H".into(), h));
    file.twist = Some(twist(
        (1..4).map(|k| VectorField::frame(k, n)).collect(),
        (1..4).map(|k| e(&[0, k])).collect(),
        Matrix::identity(3).scale(&-x0),
    ));
    file.checks = basics();
    file.checks.extend([
        check("is_hkt", &["g", "H"]),
        check("hkt_twist_condition", &["g", "H"]),
        check("hypercomplex_twist_condition", &["H"]),
        check("is_instanton", &["H"]).expect(Expect::Fail),
        check("is_hkt", &["g", "H"]).on_twisted(),
    ]);
    file
}

fn t4_fiber_over_t4(name: &str, f: Vec<Form>) -> NamedExample {
    let n = 8;
    let mut coframe = names("n", 0..4);
    coframe.extend(names("b", 0..4));
    let mut file = ModelFile::new(name, CoframeModel::flat(coframe));
    let h = quaternionic(n, &[0, 4]);
    file.complex.extend(h.structures().map(Clone::clone));
    file.metrics.push(("g".into(), HermitianMetric::identity(n)));
    file.hypercomplex.push(("H".into(), h));
    file.twist = Some(twist((4..8).map(|k| VectorField::frame(k, n)).collect(), f, Matrix::identity(4)));
    file
}

/// `T⁴` bundle over a flat `T⁴` with `F = (F0, ω_I, ω_J, ω_K)`, `F0`
/// anti-self-dual: hypercomplex after twisting, but not HKT.
pub fn hc_not_hkt_surrogate() -> NamedExample {
    let f0 = e(&[0, 1]).sub(&e(&[2, 3]));
    let [wi, wj, wk] = t4_triple();
    let mut file = t4_fiber_over_t4("hc_not_hkt_surrogate", vec![f0, wi, wj, wk]);
    file.checks = basics();
    file.checks.extend([
        check("is_hkt", &["g", "H"]),
        check("hypercomplex_twist_condition", &["H"]),
        check("hkt_twist_condition", &["g", "H"]).expect(Expect::Fail),
        check("is_hypercomplex", &["H"]).on_twisted(),
        check("is_hkt", &["g", "H"]).on_twisted().expect(Expect::Fail),
    ]);
    file
}

/// The Lie algebra `su(2)×su(2)` with `de1 = −e2^e3` cyclically on each
/// factor, and the complex structure pairing `e3` with `e6`.
pub fn su2_su2() -> NamedExample {
    let n = 6;
    let structure = vec![
        e(&[1, 2]).neg(),
        e(&[0, 2]),
        e(&[0, 1]).neg(),
        e(&[4, 5]).neg(),
        e(&[3, 5]),
        e(&[3, 4]).neg(),
    ];
    let m = CoframeModel::new(names("e", 1..7), Vec::new(), structure, Vec::new()).expect("model");
    let mut file = ModelFile::new("su2_su2", m);
    file.complex.push(complex("I", n, &[(0, 1), (3, 4), (2, 5)]));
    file.metrics.push(("g".into(), HermitianMetric::identity(n)));
    file.checks = vec![
        check("validate_model", &[]),
        check("random_identities", &[]),
        check("is_integrable", &["I"]),
        check("is_skt", &["g", "I"]),
        check("is_kaehler", &["g", "I"]).expect(Expect::Fail),
    ];
    file
}

/// `T⁴` bundle over a flat `T⁴` twisted by anti-self-dual forms.
pub fn hkt_instanton_t4xt4() -> NamedExample {
    let asd = [e(&[0, 1]).sub(&e(&[2, 3])), e(&[0, 2]).add(&e(&[1, 3])), e(&[0, 3]).sub(&e(&[1, 2]))];
    let f = vec![asd[0].clone(), asd[1].clone(), asd[2].clone(), asd[0].add(&asd[1])];
    let mut file = t4_fiber_over_t4("hkt_instanton_t4xt4", f);
    let g = file.metrics[0].1.clone();
    let h = file.hypercomplex[0].1.clone();
    file.forms.push(("omegaJ".into(), kaehler_form(&g, h.j()).expect("compatible")));
    file.forms.push(("omegaK".into(), kaehler_form(&g, h.k()).expect("compatible")));
    file.forms.push(("Theta".into(), sl_volume_form(&g, &h).expect("volume form")));
    file.checks = basics();
    file.checks.extend([
        check("is_instanton", &["H"]),
        check("is_hkt", &["g", "H"]),
        check("hkt_twist_condition", &["g", "H"]),
        check("hypercomplex_twist_condition", &["H"]),
        check("twist_integrability", &["I"]),
        check("nijenhuis_transfer", &["I"]),
        check("torsion_transfer", &["g", "I"]),
        check("dc_transfer", &["g", "I"]),
        check("volume_twist_condition", &["I", "Theta"]),
        check("sl_volume_check", &["H", "Theta"]),
        check("is_hkt", &["g", "H"]).on_twisted(),
        check("sl_volume_check", &["H", "Theta"]).on_twisted(),
    ]);
    file
}

/// Row-reduces `rows · c = rhs`, returning one solution with free unknowns
/// set to zero.
fn solve_linear(mut rows: Vec<Vec<GaussianRational>>, mut rhs: Vec<GaussianRational>, unknowns: usize) -> Option<Vec<GaussianRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        rhs[r] = &rhs[r] * &inv;
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in 0..unknowns {
                    let v = &rows[i][c] - &(&factor * &rows[r][c]);
                    rows[i][c] = v;
                }
                rhs[i] = &rhs[i] - &(&factor * &rhs[r]);
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut out = vec![GaussianRational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        out[col] = rhs[i].clone();
    }
    Some(out)
}

/// Looks for constant coefficients `c` with `a[j][i] = Σ_b c_b φ_b` solving
/// `da = −ξ⌟F`. A singular solution is shifted by a multiple of the identity.
/// `None` means no solution in the span of the ansatz, or `L_ξ F ≠ 0`.
pub fn solve_lifting_function(m: &CoframeModel, xi: &[VectorField], f: &[Form], ansatz: &[Scalar]) -> Option<Matrix<Scalar>> {
    if xi.len() != f.len() {
        return None;
    }
    for x in xi {
        for fj in f {
            if !m.lie_derivative(x, fj).ok()?.is_zero() {
                return None;
            }
        }
    }
    let n = m.dim();
    let d_ansatz: Vec<Form> = ansatz.iter().map(|phi| m.differential(phi)).collect::<Result<_>>().ok()?;
    let r = xi.len();
    let mut a = Matrix::zeros(r, r);
    for (j, fj) in f.iter().enumerate() {
        for (i, x) in xi.iter().enumerate() {
            let target = if fj.is_zero() { Form::zero(1) } else { fj.interior(x).ok()?.neg() };
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for k in 0..n {
                let mask = 1 << k;
                let coeffs: Vec<Scalar> = d_ansatz.iter().map(|d| d.coefficient(mask)).collect();
                let goal = target.coefficient(mask);
                let mut den = Poly::one();
                for s in coeffs.iter().chain(std::iter::once(&goal)) {
                    if !s.denominator().is_one() && den.div_exact(s.denominator()).is_none() {
                        den = den.mul(s.denominator());
                    }
                }
                let cleared = |s: &Scalar| -> Option<BTreeMap<Monomial, GaussianRational>> {
                    let prod = s * &Scalar::from_poly(den.clone());
                    if !prod.is_polynomial() {
                        return None;
                    }
                    Some(prod.numerator().terms().map(|(mono, c)| (mono.clone(), c.clone())).collect())
                };
                let cols: Vec<BTreeMap<Monomial, GaussianRational>> = coeffs.iter().map(cleared).collect::<Option<_>>()?;
                let goal = cleared(&goal)?;
                let mut monos: Vec<&Monomial> = cols.iter().flat_map(|c| c.keys()).chain(goal.keys()).collect();
                monos.sort();
                monos.dedup();
                for mono in monos {
                    rows.push(cols.iter().map(|c| c.get(mono).cloned().unwrap_or_else(GaussianRational::zero)).collect());
                    rhs.push(goal.get(mono).cloned().unwrap_or_else(GaussianRational::zero));
                }
            }
            let c = if rows.is_empty() { vec![GaussianRational::zero(); ansatz.len()] } else { solve_linear(rows, rhs, ansatz.len())? };
            let entry = ansatz.iter().zip(&c).fold(Scalar::zero(), |acc, (phi, cb)| &acc + &(phi * &Scalar::from(cb.clone())));
            a.set(j, i, entry);
        }
    }
    let mut shift = 0i64;
    loop {
        let candidate = a.add(&Matrix::identity(r).scale(&int(shift)));
        if !candidate.det().is_zero() {
            return Some(candidate);
        }
        shift += 1;
        if shift > r as i64 + 1 {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{apply_all, bismut_torsion, is_integrable};
    use crate::twist::{build_twisted_model, torsion_shift, validate_twist_data};
    use num_traits::One;

    #[test]
    fn registry_examples_validate() {
        for ex in all_examples() {
            assert!(ex.model.validate().passed(), "{}", ex.name);
            if let Some(t) = &ex.twist {
                let report = validate_twist_data(&ex.model, t);
                assert!(report.passed(), "{}:\n{report}", ex.name);
            }
        }
    }

    #[test]
    fn unknown_name_lists_registry() {
        let e = make_example("k3").unwrap_err();
        assert!(e.to_string().contains("halfline_t3"));
        assert!(make_example("skt_non_instanton(2,1)").is_err());
    }

    #[test]
    fn halfline_shift_is_two_over_x0() {
        let ex = make_example("halfline_t3").unwrap();
        let t = ex.twist.as_ref().unwrap();
        let g = ex.metric("g").unwrap();
        let expected = e(&[1, 2, 3]).scale(&(&int(2) * &Scalar::var("x0").inverse().unwrap()));
        for a in ex.triple("H").unwrap().structures() {
            assert_eq!(torsion_shift(t, g, a).unwrap(), expected, "{}", a.label());
        }
        let i = ex.complex_structure("I").unwrap();
        assert_eq!(apply_all(i, &e(&[0, 2])), e(&[1, 3]));
        assert_eq!(apply_all(i, &e(&[0, 3])), e(&[1, 2]).neg());
    }

    #[test]
    fn t2xt2_torsion() {
        let ex = skt_t2xt2_bundle();
        let w = build_twisted_model(&ex.model, ex.twist.as_ref().unwrap()).unwrap();
        let c = bismut_torsion(&w, ex.metric("g").unwrap(), ex.complex_structure("I").unwrap()).unwrap();
        assert_eq!(c, e(&[0, 1, 4]).add(&e(&[2, 3, 5])).neg());
        assert!(w.d(&c).unwrap().is_zero());
    }

    #[test]
    fn su2_su2_torsion_is_minus_both_volumes() {
        let ex = su2_su2();
        let jc = ex.complex_structure("I").unwrap();
        assert!(is_integrable(&ex.model, jc).unwrap());
        let c = bismut_torsion(&ex.model, ex.metric("g").unwrap(), jc).unwrap();
        assert_eq!(c, e(&[0, 1, 2]).add(&e(&[3, 4, 5])).neg());
        let x = |k| ex.model.frame(k);
        assert_eq!(ex.model.lie_bracket(&x(0), &x(1)).unwrap(), x(2));
    }

    #[test]
    fn kodaira_thurston_structure_equation() {
        let ex = kodaira_thurston();
        let w = build_twisted_model(&ex.model, ex.twist.as_ref().unwrap()).unwrap();
        assert_eq!(w.structure()[3], e(&[0, 1]).neg());
    }

    #[test]
    fn lifting_function_on_the_halfline() {
        let ex = halfline_t3();
        let t = ex.twist.as_ref().unwrap();
        let x0 = Scalar::var("x0");
        let a = solve_lifting_function(&ex.model, t.xi(), t.f(), &[Scalar::one(), x0.clone()]).unwrap();
        assert_eq!(a, Matrix::identity(3).scale(&-x0));
    }

    #[test]
    fn lifting_function_trivial_and_inconsistent() {
        let m = CoframeModel::flat(names("e", 1..5));
        let a = solve_lifting_function(&m, &[m.frame(3)], &[e(&[0, 1])], &[Scalar::one()]).unwrap();
        assert_eq!(a, Matrix::identity(1));
        assert!(solve_lifting_function(&m, &[m.frame(0)], &[e(&[0, 1])], &[Scalar::one()]).is_none());
    }

    #[test]
    fn volume_variant_validates() {
        let ex = volume_obstructed();
        assert!(validate_twist_data(&ex.model, ex.twist.as_ref().unwrap()).passed());
        let ex = skt_non_instanton_control(1, 1);
        assert!(validate_twist_data(&ex.model, ex.twist.as_ref().unwrap()).passed());
    }
}
