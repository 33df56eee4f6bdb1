//! Sparse multivariate polynomials over ℚ(i) with named variables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::GaussianRational;

/// Variable name. Shared so monomials clone cheaply.
pub type Var = Arc<str>;

/// A power product, stored as `(variable, exponent)` pairs sorted by name with
/// no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(Arc::from(name), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, v: &str) -> u32 {
        self.0
            .iter()
            .find(|(name, _)| &**name == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((v.clone(), e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Drops variable `v`, returning its exponent and the remaining monomial.
    fn split_off(&self, v: &str) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(name, exp)| {
                if &**name == v {
                    e = *exp;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }

    fn with_power(&self, v: &Var, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Monomial(vec![(v.clone(), e)]))
    }

    /// Graded lexicographic order: total degree first, then the exponent of
    /// the alphabetically first variable where the two differ.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in &self.0 {
            for _ in 0..*e {
                if !first {
                    write!(f, "*")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(Monomial::var(name), GaussianRational::one())
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    fn contains_var(&self, v: &str) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn mul_term(&self, m: &Monomial, c: &GaussianRational) -> Poly {
        let mut out = Poly::zero();
        for (mm, cc) in &self.terms {
            out.add_term(mm.mul(m), cc * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading term under graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    pub fn leading_coefficient(&self) -> GaussianRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Scales so the graded-lex leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = &c * &lc_inv;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to `v`: `self = Σ_k coeff[k] · v^k`.
    fn coeffs_in(&self, v: &str) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Pseudo-remainder of `self` by `divisor` viewed as univariate in `v`.
    fn pseudo_rem(&self, divisor: &Poly, v: &Var) -> Poly {
        let dc = divisor.coeffs_in(v);
        let (&db, lc_b) = dc.iter().next_back().expect("nonzero divisor");
        let lc_b = lc_b.clone();
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let rc = r.coeffs_in(v);
            let (&dr, lc_r) = rc.iter().next_back().unwrap();
            if dr < db {
                return r;
            }
            let shift = Monomial::one().with_power(v, dr - db);
            let t = divisor.mul(&Poly::monomial(shift, GaussianRational::one()).mul(lc_r));
            r = r.mul(&lc_b).sub(&t);
        }
    }

    /// Content with respect to `v`: monic gcd of the coefficients.
    fn content_in(&self, v: &str) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v).values() {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn derivative(&self, v: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let (_, rest) = m.split_off(v);
            let var: Var = Arc::from(v);
            out.add_term(
                rest.with_power(&var, e - 1),
                c * &GaussianRational::from_integer(e as i64),
            );
        }
        out
    }

    pub fn conj(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Evaluates at a point; `Err(name)` names the first unassigned variable.
    pub fn evaluate(&self, point: &BTreeMap<String, GaussianRational>) -> Result<GaussianRational, String> {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = point.get(&**v).ok_or_else(|| v.to_string())?;
                t = &t * &x.pow(*e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &GaussianRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }
}

/// Monic greatest common divisor (zero only when both inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    gcd_rec(a, b).monic()
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let vars: BTreeSet<Var> = a.variables().union(&b.variables()).cloned().collect();
    let v = vars.iter().next().expect("non-constant polynomial has a variable").clone();
    if !a.contains_var(&v) {
        return gcd_rec(a, &b.content_in(&v));
    }
    if !b.contains_var(&v) {
        return gcd_rec(&a.content_in(&v), b);
    }
    let ca = a.content_in(&v);
    let cb = b.content_in(&v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (mut f, mut g) = if pa.degree_in(&v) >= pb.degree_in(&v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = f.pseudo_rem(&g, &v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&v) == 0 {
            g = Poly::one();
            break;
        }
        f = g;
        let cr = r.content_in(&v);
        g = r.div_exact(&cr).expect("content divides").monic();
    }
    let cg = g.content_in(&v);
    let pg = g.div_exact(&cg).expect("content divides");
    c.mul(&pg).monic()
}

pub(crate) fn is_negative(c: &GaussianRational) -> bool {
    c.re().is_negative() || (c.re().is_zero() && c.im().is_negative())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = is_negative(c);
            let c_abs = if neg { -c } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{c_abs}")?;
            } else if c_abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c_abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var("x")
    }
    fn y() -> Poly {
        Poly::var("y")
    }
    fn c(n: i64) -> Poly {
        Poly::constant(GaussianRational::from_integer(n))
    }

    #[test]
    fn grlex_prefers_degree_then_first_variable() {
        let xy = Monomial::var("x").mul(&Monomial::var("y"));
        let yy = Monomial::var("y").mul(&Monomial::var("y"));
        let x = Monomial::var("x");
        assert_eq!(xy.grlex_cmp(&x), Ordering::Greater);
        assert_eq!(xy.grlex_cmp(&yy), Ordering::Greater);
        assert_eq!(x.grlex_cmp(&Monomial::var("y")), Ordering::Greater);
    }

    #[test]
    fn exact_division() {
        let f = x().mul(&y()).add(&y());
        assert_eq!(f.div_exact(&y()).unwrap(), x().add(&c(1)));
        assert!(f.div_exact(&x()).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let common = x().add(&y().mul(&c(2))).add(&c(1));
        let a = common.mul(&x().sub(&c(3)));
        let b = common.mul(&y().add(&x().mul(&x())));
        assert_eq!(gcd(&a, &b), common.monic());
    }

    #[test]
    fn gcd_with_gaussian_coefficients() {
        let i = Poly::constant(GaussianRational::i());
        let common = x().add(&i);
        let a = common.mul(&common);
        let b = common.mul(&x().sub(&i));
        assert_eq!(gcd(&a, &b), common);
    }

    #[test]
    fn coprime_gcd_is_one() {
        assert!(gcd(&x().add(&c(1)), &y()).is_one());
        assert!(gcd(&x(), &c(5)).is_one());
    }

    #[test]
    fn display_orders_by_grlex() {
        let p = c(-2).add(&x().mul(&x())).sub(&x().mul(&y()).mul(&c(3)));
        assert_eq!(p.to_string(), "x*x - 3*x*y - 2");
    }
}
