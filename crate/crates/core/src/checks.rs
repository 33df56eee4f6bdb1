//! Named checks over a parsed model file, and their reports.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{CoframeModel, Form, VectorField, VectorValuedTwoForm};
use crate::hermitian::{
    bismut_torsion, formal_skt, is_integrable, is_skt, kaehler_form, nijenhuis, type_component, AlmostComplexStructure,
    HermitianMetric,
};
use crate::modelfile::{CheckCall, Expect, ModelFile};
use crate::quaternionic::{
    hkt_twist_condition, hypercomplex_twist_condition, is_hkt, is_hypercomplex, sl_volume_check, volume_twist_condition,
    HypercomplexTriple,
};
use crate::scalar::{GaussianRational, Scalar};
use crate::twist::{
    build_twisted_model, dc_expansion, dc_instanton, dual_twist_data, lie_operator, transferred_torsion, twist_integrability,
    twist_tensor, twisted_differential, twisted_nijenhuis, validate_twist_data, TwistData,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Complex,
    Metric,
    Hypercomplex,
    Form,
}

impl fmt::Display for ArgKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArgKind::Complex => "complex structure",
            ArgKind::Metric => "metric",
            ArgKind::Hypercomplex => "hypercomplex triple",
            ArgKind::Form => "form",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Signature {
    pub name: &'static str,
    pub args: &'static [ArgKind],
    pub needs_twist: bool,
    pub summary: &'static str,
}

use ArgKind::{Complex as C, Form as Fm, Hypercomplex as H, Metric as G};

pub const CATALOG: &[Signature] = &[
    Signature { name: "validate_model", args: &[], needs_twist: false, summary: "d² = 0 on the coframe and coordinates" },
    Signature { name: "validate_twist_data", args: &[], needs_twist: true, summary: "all twist-data invariants" },
    Signature { name: "twisted_d_squared", args: &[], needs_twist: true, summary: "d_W² = 0 on generators; twisted model validates" },
    Signature { name: "dual_round_trip", args: &[], needs_twist: true, summary: "twisting back by the dual data recovers d" },
    Signature { name: "random_identities", args: &[], needs_twist: false, summary: "seeded Leibniz and invariant-formula identities" },
    Signature { name: "is_integrable", args: &[C], needs_twist: false, summary: "Nijenhuis tensor vanishes" },
    Signature { name: "twist_integrability", args: &[C], needs_twist: true, summary: "(1 - L)F = 0, and the adapted-basis criterion" },
    Signature { name: "nijenhuis_transfer", args: &[C], needs_twist: true, summary: "N_W = N - (1 - L)F" },
    Signature { name: "is_kaehler", args: &[G, C], needs_twist: false, summary: "dω = 0" },
    Signature { name: "is_skt", args: &[G, C], needs_twist: false, summary: "dc = 0 for the Bismut torsion c" },
    Signature { name: "formal_skt", args: &[G, C], needs_twist: false, summary: "d(-J dω) = 0 without integrability" },
    Signature { name: "torsion_transfer", args: &[G, C], needs_twist: true, summary: "c_W = c - a⁻¹ JF ∧ ξ^♭" },
    Signature { name: "dc_transfer", args: &[G, C], needs_twist: true, summary: "d_W c_W against its expansion on M" },
    Signature { name: "is_hypercomplex", args: &[H], needs_twist: false, summary: "I, J, K all integrable" },
    Signature { name: "is_hkt", args: &[G, H], needs_twist: false, summary: "I dω_I = J dω_J = K dω_K" },
    Signature { name: "hkt_twist_condition", args: &[G, H], needs_twist: true, summary: "a⁻¹ IF∧ξ^♭ = a⁻¹ JF∧ξ^♭ = a⁻¹ KF∧ξ^♭" },
    Signature { name: "hypercomplex_twist_condition", args: &[H], needs_twist: true, summary: "L_I F = L_J F = L_K F = F" },
    Signature { name: "is_instanton", args: &[H], needs_twist: true, summary: "every F is (1,1) for I, J and K" },
    Signature { name: "volume_twist_condition", args: &[C, Fm], needs_twist: true, summary: "a⁻¹ ξ⌟F^{1,1} = 0" },
    Signature { name: "sl_volume_check", args: &[H, Fm], needs_twist: false, summary: "dΘ = 0 and JΘ = conj Θ" },
];

pub fn signature(name: &str) -> Option<Signature> {
    CATALOG.iter().copied().find(|s| s.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub expected: Option<Expect>,
    pub witnesses: Vec<Witness>,
    pub message: Option<String>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The verdict matches the recorded expectation (`pass` when none).
    pub fn as_expected(&self) -> bool {
        match self.expected.unwrap_or(Expect::Pass) {
            Expect::Pass => self.verdict == Verdict::Pass,
            Expect::Fail => self.verdict == Verdict::Fail,
        }
    }

    pub fn witness(&self, name: &str) -> Option<&str> {
        self.witnesses.iter().find(|w| w.name == name).map(|w| w.value.as_str())
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Restrict to these check names.
    pub only: Option<Vec<String>>,
}

/// Exit status for a list of reports: 0 when everything passed, 1 otherwise.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(CheckReport::passed) {
        0
    } else {
        1
    }
}

/// The shared, read-only inputs of one run.
struct Context<'a> {
    file: &'a ModelFile,
    seed: u64,
    twisted: Option<std::result::Result<(CoframeModel, TwistData), Error>>,
}

/// Runs the file's checks concurrently; reports come back in file order.
pub fn run_checks(file: &ModelFile, opts: &RunOptions) -> Vec<CheckReport> {
    let calls: Vec<&CheckCall> = file
        .checks
        .iter()
        .filter(|c| opts.only.as_ref().is_none_or(|only| only.contains(&c.name)))
        .collect();
    let twisted = if calls.iter().any(|c| c.twisted) {
        file.twist.as_ref().map(|t| {
            let w = build_twisted_model(&file.model, t)?;
            let back = dual_twist_data(&file.model, t)?;
            Ok((w, back))
        })
    } else {
        None
    };
    let ctx = Context { file, seed: opts.seed, twisted };
    std::thread::scope(|s| {
        let handles: Vec<_> = calls.iter().map(|call| s.spawn(|| run_one(&ctx, call))).collect();
        handles
            .into_iter()
            .zip(&calls)
            .map(|(h, call)| {
                h.join().unwrap_or_else(|_| CheckReport {
                    check: call.label(),
                    verdict: Verdict::Error,
                    expected: call.expect,
                    witnesses: Vec::new(),
                    message: Some("internal error".into()),
                    elapsed: Duration::ZERO,
                })
            })
            .collect()
    })
}

/// Runs a single check outside of a file run.
pub fn run_check(file: &ModelFile, call: &CheckCall, seed: u64) -> CheckReport {
    let mut f = file.clone();
    f.checks = vec![call.clone()];
    run_checks(&f, &RunOptions { seed, only: None }).pop().expect("one report")
}

type Outcome = Result<(bool, Vec<Witness>)>;

struct Env<'a> {
    m: &'a CoframeModel,
    t: Option<&'a TwistData>,
    file: &'a ModelFile,
    seed: u64,
}

impl Env<'_> {
    fn names(&self) -> &[String] {
        self.m.coframe()
    }

    fn form(&self, f: &Form) -> String {
        f.display_with(self.names()).to_string()
    }

    fn tensor(&self, t: &VectorValuedTwoForm) -> String {
        t.display_with(self.names()).to_string()
    }

    fn twist(&self) -> Result<&TwistData> {
        self.t.ok_or_else(|| Error::Precondition("no twist data".into()))
    }
}

fn w(name: impl Into<String>, value: impl Into<String>) -> Witness {
    Witness { name: name.into(), value: value.into() }
}

fn run_one(ctx: &Context<'_>, call: &CheckCall) -> CheckReport {
    let start = Instant::now();
    let outcome = if call.twisted {
        match &ctx.twisted {
            Some(Ok((wm, back))) => dispatch(&Env { m: wm, t: Some(back), file: ctx.file, seed: ctx.seed }, call),
            Some(Err(e)) => Err(Error::Precondition(format!("cannot build the twisted model: {e}"))),
            None => Err(Error::Precondition("no twist data".into())),
        }
    } else {
        dispatch(&Env { m: &ctx.file.model, t: ctx.file.twist.as_ref(), file: ctx.file, seed: ctx.seed }, call)
    };
    let (verdict, witnesses, message) = match outcome {
        Ok((true, ws)) => (Verdict::Pass, ws, None),
        Ok((false, ws)) => (Verdict::Fail, ws, None),
        Err(e) => (Verdict::Error, Vec::new(), Some(e.to_string())),
    };
    CheckReport { check: call.label(), verdict, expected: call.expect, witnesses, message, elapsed: start.elapsed() }
}

fn dispatch(env: &Env<'_>, call: &CheckCall) -> Outcome {
    let file = env.file;
    let arg = |k: usize| call.args[k].as_str();
    let complex = |k: usize| -> Result<&AlmostComplexStructure> {
        file.complex_structure(arg(k)).ok_or_else(|| Error::Precondition(format!("unknown complex structure {}", arg(k))))
    };
    let metric = |k: usize| -> Result<&HermitianMetric> {
        file.metric(arg(k)).ok_or_else(|| Error::Precondition(format!("unknown metric {}", arg(k))))
    };
    let triple = |k: usize| -> Result<&HypercomplexTriple> {
        file.triple(arg(k)).ok_or_else(|| Error::Precondition(format!("unknown hypercomplex triple {}", arg(k))))
    };
    let form = |k: usize| -> Result<&Form> {
        file.form(arg(k)).ok_or_else(|| Error::Precondition(format!("unknown form {}", arg(k))))
    };
    match call.name.as_str() {
        "validate_model" => check_validate_model(env),
        "validate_twist_data" => {
            let report = validate_twist_data(env.m, env.twist()?);
            let ws = report.failures().map(|i| w(i.name.clone(), i.detail.clone())).collect();
            Ok((report.passed(), ws))
        }
        "twisted_d_squared" => check_d_squared(env),
        "dual_round_trip" => check_round_trip(env),
        "random_identities" => check_random_identities(env),
        "is_integrable" => {
            let n = nijenhuis(env.m, complex(0)?)?;
            Ok((n.is_zero(), vec![w("N", env.tensor(&n))]))
        }
        "twist_integrability" => {
            let report = twist_integrability(env.m, env.twist()?, complex(0)?, file.adapted.as_ref().filter(|_| !call.twisted))?;
            let mut ws = vec![w("(1 - L)F", env.tensor(&report.obstruction))];
            if let Some(l) = report.lemma {
                ws.push(w("adapted criterion", l.to_string()));
            }
            Ok((report.integrable() && report.criteria_agree(), ws))
        }
        "nijenhuis_transfer" => {
            let (t, jc) = (env.twist()?, complex(0)?);
            let direct = twisted_nijenhuis(env.m, t, jc)?;
            let f = twist_tensor(t)?;
            let predicted = nijenhuis(env.m, jc)?.sub(&f.sub(&lie_operator(jc, &f)));
            Ok((direct == predicted, vec![w("N_W", env.tensor(&direct)), w("N - (1 - L)F", env.tensor(&predicted))]))
        }
        "is_kaehler" => {
            let omega = kaehler_form(metric(0)?, complex(1)?)?;
            let d = env.m.d(&omega)?;
            Ok((d.is_zero(), vec![w("omega", env.form(&omega)), w("d omega", env.form(&d))]))
        }
        "is_skt" => {
            let r = is_skt(env.m, metric(0)?, complex(1)?)?;
            Ok((r.is_skt(), vec![w("c", env.form(&r.torsion)), w("dc", env.form(&r.d_torsion)), w("d omega", env.form(&r.d_omega))]))
        }
        "formal_skt" => {
            let r = formal_skt(env.m, metric(0)?, complex(1)?)?;
            Ok((r.is_skt(), vec![w("c", env.form(&r.torsion)), w("dc", env.form(&r.d_torsion))]))
        }
        "torsion_transfer" => {
            let (t, g, jc) = (env.twist()?, metric(0)?, complex(1)?);
            let wm = build_twisted_model(env.m, t)?;
            let direct = bismut_torsion(&wm, g, jc)?;
            let predicted = transferred_torsion(env.m, t, g, jc)?;
            Ok((direct == predicted, vec![w("c_W", env.form(&direct)), w("c - a^-1 JF ^ xi", env.form(&predicted))]))
        }
        "dc_transfer" => check_dc_transfer(env, metric(0)?, complex(1)?),
        "is_hypercomplex" => {
            let r = is_hypercomplex(env.m, triple(0)?)?;
            let ws = ["N_I", "N_J", "N_K"].iter().zip(&r.nijenhuis).map(|(n, t)| w(*n, env.tensor(t))).collect();
            Ok((r.holds(), ws))
        }
        "is_hkt" => {
            let r = is_hkt(env.m, metric(0)?, triple(1)?)?;
            let mut ws: Vec<Witness> =
                ["I d omega_I", "J d omega_J", "K d omega_K"].iter().zip(&r.torsions.forms).map(|(n, f)| w(*n, env.form(f))).collect();
            ws.push(w("hypercomplex", r.hypercomplex.to_string()));
            Ok((r.holds(), ws))
        }
        "hkt_twist_condition" => {
            let r = hkt_twist_condition(env.m, env.twist()?, metric(0)?, triple(1)?)?;
            let mut ws: Vec<Witness> = ["I-term", "J-term", "K-term"].iter().zip(&r.shifts.forms).map(|(n, f)| w(*n, env.form(f))).collect();
            ws.push(w("twisted model is HKT", r.twisted_hkt.to_string()));
            if !r.consistent() {
                return Err(Error::Precondition("criterion disagrees with the direct computation on the twisted model".into()));
            }
            Ok((r.holds(), ws))
        }
        "hypercomplex_twist_condition" => {
            let r = hypercomplex_twist_condition(Some(env.m), env.twist()?, triple(0)?)?;
            let mut ws: Vec<Witness> =
                ["L_I F - F", "L_J F - F", "L_K F - F"].iter().zip(&r.defects).map(|(n, t)| w(*n, env.tensor(t))).collect();
            if let Some(h) = r.twisted_hypercomplex {
                ws.push(w("twisted model is hypercomplex", h.to_string()));
            }
            if !r.consistent() {
                return Err(Error::Precondition("criterion disagrees with the direct computation on the twisted model".into()));
            }
            Ok((r.holds(), ws))
        }
        "is_instanton" => {
            let (t, h) = (env.twist()?, triple(0)?);
            let mut ws = Vec::new();
            for (j, f) in t.f().iter().enumerate() {
                for a in h.structures() {
                    let rest = f.sub(&type_component(a, f, 1, 1)?);
                    if !rest.is_zero() {
                        ws.push(w(format!("F[{j}] - F[{j}]^(1,1) for {}", a.label()), env.form(&rest)));
                    }
                }
            }
            Ok((ws.is_empty(), ws))
        }
        "volume_twist_condition" => {
            let r = volume_twist_condition(env.m, env.twist()?, complex(0)?, form(1)?)?;
            let ws = vec![w("a^-1 xi F^(1,1)", env.form(&r.obstruction)), w("d_W Theta", env.form(&r.twisted_d_theta))];
            if !r.consistent() {
                return Err(Error::Precondition("criterion disagrees with d_W Theta".into()));
            }
            Ok((r.holds(), ws))
        }
        "sl_volume_check" => {
            let r = sl_volume_check(env.m, triple(0)?, form(1)?)?;
            Ok((r.holds(), vec![w("d Theta", env.form(&r.d_theta)), w("J Theta - conj Theta", env.form(&r.reality_defect))]))
        }
        other => Err(Error::Precondition(format!("unknown check `{other}`"))),
    }
}

fn check_validate_model(env: &Env<'_>) -> Outcome {
    let r = env.m.validate();
    let ws = r.violations.iter().map(|v| w(v.label.clone(), env.form(&v.form))).collect();
    Ok((r.passed(), ws))
}

fn check_d_squared(env: &Env<'_>) -> Outcome {
    let t = env.twist()?;
    let m = env.m;
    let mut ws = Vec::new();
    let mut generators: Vec<(String, Form)> = m.coframe().iter().cloned().zip((0..m.dim()).map(|k| m.generator(k))).collect();
    for c in m.coordinates() {
        generators.push((c.clone(), Form::function(Scalar::var(c))));
    }
    for (name, g) in &generators {
        let dd = twisted_differential(m, t, &twisted_differential(m, t, g)?)?;
        if !dd.is_zero() {
            ws.push(w(format!("d_W d_W {name}"), env.form(&dd)));
        }
    }
    let wm = build_twisted_model(m, t)?;
    for v in wm.validate().violations {
        ws.push(w(format!("twisted {}", v.label), env.form(&v.form)));
    }
    Ok((ws.is_empty(), ws))
}

fn check_round_trip(env: &Env<'_>) -> Outcome {
    let (m, t) = (env.m, env.twist()?);
    let wm = build_twisted_model(m, t)?;
    let back = dual_twist_data(m, t)?;
    let again = build_twisted_model(&wm, &back)?;
    let mut ws = Vec::new();
    for alpha in m.basis_forms(2) {
        let (d0, d1) = (m.d(&alpha)?, again.d(&alpha)?);
        if d0 != d1 {
            ws.push(w(format!("d({})", env.form(&alpha)), format!("{} vs {}", env.form(&d0), env.form(&d1))));
        }
    }
    // ζ_j ⌟ F_W^i = −d(a⁻¹)[i][j]
    let inv = t.a_inv()?;
    for (j, zeta) in back.xi().iter().enumerate() {
        for (i, fw) in back.f().iter().enumerate() {
            let lhs = fw.interior(zeta)?;
            let rhs = m.differential(inv.get(i, j))?.neg();
            if lhs != rhs {
                ws.push(w(format!("zeta{j} F_W[{i}] + d(a^-1)[{i}][{j}]"), env.form(&lhs.sub(&rhs))));
            }
        }
    }
    Ok((ws.is_empty(), ws))
}

fn random_constant(rng: &mut ChaCha8Rng) -> Scalar {
    let re = rng.gen_range(-3i64..=3);
    let im = if rng.gen_bool(0.25) { rng.gen_range(-2i64..=2) } else { 0 };
    Scalar::from(GaussianRational::from_integer(re) + GaussianRational::i() * GaussianRational::from_integer(im))
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> Form {
    let mut out = Form::zero(degree);
    for _ in 0..3 {
        let mut idx: Vec<usize> = Vec::new();
        while idx.len() < degree {
            let k = rng.gen_range(0..n);
            if !idx.contains(&k) {
                idx.push(k);
            }
        }
        out = out.add(&Form::wedge_of(&idx).scale(&random_constant(rng)));
    }
    out
}

fn check_random_identities(env: &Env<'_>) -> Outcome {
    let m = env.m;
    let n = m.dim();
    let mut ws = vec![w("seed", env.seed.to_string())];
    if n < 2 {
        return Ok((true, ws));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(env.seed);
    let mut ok = true;
    for sample in 0..8 {
        let alpha = random_form(&mut rng, n, 1);
        let beta = random_form(&mut rng, n, if n > 2 { 2 } else { 1 });
        let leibniz = m.d(&alpha.wedge(&beta))?.sub(&m.d(&alpha)?.wedge(&beta)).add(&alpha.wedge(&m.d(&beta)?));
        let dd = m.d(&m.d(&beta)?)?;
        let x = VectorField::frame(rng.gen_range(0..n), n);
        let y = VectorField::frame(rng.gen_range(0..n), n);
        // dα(X,Y) = X α(Y) − Y α(X) − α([X,Y])
        let lhs = m.d(&alpha)?.evaluate(&[&x, &y])?;
        let rhs = m.derivative_along(&x, &alpha.evaluate(&[&y])?)? - m.derivative_along(&y, &alpha.evaluate(&[&x])?)?
            - alpha.evaluate(&[&m.lie_bracket(&x, &y)?])?;
        if !leibniz.is_zero() {
            ok = false;
            ws.push(w(format!("sample {sample}: Leibniz defect"), env.form(&leibniz)));
        }
        if !dd.is_zero() {
            ok = false;
            ws.push(w(format!("sample {sample}: d d beta"), env.form(&dd)));
        }
        if lhs != rhs {
            ok = false;
            ws.push(w(format!("sample {sample}: invariant formula"), format!("{lhs} vs {rhs}")));
        }
    }
    ws.push(w("samples", "8"));
    Ok((ok, ws))
}

fn check_dc_transfer(env: &Env<'_>, g: &HermitianMetric, jc: &AlmostComplexStructure) -> Outcome {
    let (m, t) = (env.m, env.twist()?);
    let wm = build_twisted_model(m, t)?;
    if !is_integrable(&wm, jc)? {
        return Err(Error::NotIntegrable(format!("{} on the twisted model", jc.label())));
    }
    let direct = wm.d(&bismut_torsion(&wm, g, jc)?)?;
    let expanded = dc_expansion(m, t, g, jc)?;
    let mut ws = vec![w("d_W c_W", env.form(&direct)), w("expansion", env.form(&expanded))];
    let mut ok = direct == expanded;
    let instanton = t
        .f()
        .iter()
        .map(|f| type_component(jc, f, 1, 1).map(|p| p == *f))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    if instanton {
        let short = dc_instanton(m, t, g, jc)?;
        ok &= short == direct;
        ws.push(w("instanton expansion", env.form(&short)));
    }
    Ok((ok, ws))
}

#[derive(Serialize)]
struct RunLine<'a> {
    schema_version: u32,
    kind: &'static str,
    model: &'a str,
    seed: u64,
    checks: usize,
}

#[derive(Serialize)]
struct CheckLine<'a> {
    schema_version: u32,
    kind: &'static str,
    index: usize,
    check: &'a str,
    verdict: Verdict,
    expected: Option<String>,
    as_expected: bool,
    witnesses: &'a [Witness],
    message: Option<&'a str>,
}

#[derive(Serialize)]
struct SummaryLine {
    schema_version: u32,
    kind: &'static str,
    pass: usize,
    fail: usize,
    error: usize,
    exit_code: i32,
}

fn count(reports: &[CheckReport], v: Verdict) -> usize {
    reports.iter().filter(|r| r.verdict == v).count()
}

/// Line-delimited JSON. Timing is left out so reports are reproducible.
pub fn render_machine(model: &str, seed: u64, reports: &[CheckReport]) -> String {
    let mut out = String::new();
    let mut line = |v: String| {
        out.push_str(&v);
        out.push('\n');
    };
    line(json(&RunLine { schema_version: SCHEMA_VERSION, kind: "run", model, seed, checks: reports.len() }));
    for (index, r) in reports.iter().enumerate() {
        line(json(&CheckLine {
            schema_version: SCHEMA_VERSION,
            kind: "check",
            index,
            check: &r.check,
            verdict: r.verdict,
            expected: r.expected.map(|e| e.to_string()),
            as_expected: r.as_expected(),
            witnesses: &r.witnesses,
            message: r.message.as_deref(),
        }));
    }
    line(json(&SummaryLine {
        schema_version: SCHEMA_VERSION,
        kind: "summary",
        pass: count(reports, Verdict::Pass),
        fail: count(reports, Verdict::Fail),
        error: count(reports, Verdict::Error),
        exit_code: exit_code(reports),
    }));
    out
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report serializes")
}

fn fmt_elapsed(d: Duration) -> String {
    let us = d.as_micros();
    if us < 1000 {
        format!("{us} µs")
    } else {
        format!("{:.1} ms", us as f64 / 1000.0)
    }
}

pub fn render_text(model: &str, seed: u64, reports: &[CheckReport]) -> String {
    let mut out = format!("model {model} (seed {seed})\n");
    for r in reports {
        let tag = match r.verdict {
            Verdict::Pass => "ok   ",
            Verdict::Fail => "FAIL ",
            Verdict::Error => "ERROR",
        };
        out.push_str(&format!("{tag} {}  [{}]", r.check, fmt_elapsed(r.elapsed)));
        if let Some(e) = r.expected {
            out.push_str(&format!("  expected {e}{}", if r.as_expected() { "" } else { ", MISMATCH" }));
        }
        out.push('\n');
        if let Some(m) = &r.message {
            out.push_str(&format!("      {m}\n"));
        }
        for wi in &r.witnesses {
            out.push_str(&format!("      {} = {}\n", wi.name, wi.value));
        }
    }
    out.push_str(&format!(
        "{} checks: {} passed, {} failed, {} errors\n",
        reports.len(),
        count(reports, Verdict::Pass),
        count(reports, Verdict::Fail),
        count(reports, Verdict::Error)
    ));
    out
}
