use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{gcd, Poly};
use super::{GaussianRational, ScalarError};

/// A rational function over ℚ(i) in named coordinates, kept in canonical form:
/// coprime numerator and denominator, denominator with graded-lex leading
/// coefficient 1, and zero stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn constant(c: GaussianRational) -> Self {
        Self {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_integer(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::constant(GaussianRational::from_ratio(p, q))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn var(name: &str) -> Self {
        Self {
            num: Poly::var(name),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// Builds `num/den` and canonicalizes. Fails when `den` is zero.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let c = den.as_constant().unwrap();
            let inv = c.inv().expect("nonzero denominator");
            return Self { num: num.scale(&inv), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::normalize_lc(num, den)
    }

    /// Assumes `num`, `den` coprime; rescales the denominator to be monic.
    fn normalize_lc(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coefficient();
        if lc.is_one() {
            return Self { num, den };
        }
        let inv = lc.inv().expect("nonzero denominator");
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    /// Re-canonicalizes from the stored parts; a no-op on canonical values.
    pub fn normalized(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.num
            .variables()
            .into_iter()
            .chain(self.den.variables())
            .map(|v| v.to_string())
            .collect()
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        let inv = rhs.inverse()?;
        Ok(self * &inv)
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    /// Partial derivative by the quotient rule.
    pub fn partial(&self, var: &str) -> Scalar {
        let dn = self.num.derivative(var);
        if self.den.is_one() {
            return Scalar::from_poly(dn);
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let top = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::reduce(top, self.den.mul(&self.den))
    }

    pub fn conj(&self) -> Scalar {
        Self::normalize_lc(self.num.conj(), self.den.conj())
    }

    pub fn evaluate(&self, point: &BTreeMap<String, GaussianRational>) -> Result<GaussianRational, ScalarError> {
        let d = self.den.evaluate(point).map_err(ScalarError::UnassignedVariable)?;
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        let n = self.num.evaluate(point).map_err(ScalarError::UnassignedVariable)?;
        Ok(&n * &d.inv().unwrap())
    }

    pub fn pow(&self, e: u32) -> Scalar {
        Self {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<GaussianRational> for Scalar {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(self.num.add(&rhs.num));
        }
        if self.den == rhs.den {
            return Scalar::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Scalar::reduce(num, self.den.mul(&rhs.den))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(self.num.mul(&rhs.num));
        }
        // Cross-cancel so the product of coprime pairs stays coprime.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        Scalar::normalize_lc(n1.mul(&n2), d1.mul(&d2))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Panics on division by zero; [`Scalar::checked_div`] reports it instead.
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self.checked_div(&rhs).expect("division by zero scalar")
    }
}

fn needs_parens(p: &Poly) -> bool {
    if p.num_terms() > 1 {
        return true;
    }
    match p.terms().next() {
        Some((m, c)) => !(m.is_one() || (c.is_one() && m.factors().len() == 1 && m.total_degree() == 1)),
        None => false,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x0() -> Scalar {
        Scalar::var("x0")
    }
    fn x1() -> Scalar {
        Scalar::var("x1")
    }

    #[test]
    fn additive_and_multiplicative_inverses() {
        assert!((&x0() + &(-x0())).is_zero());
        let inv = x0().inverse().unwrap();
        assert!((&inv * &x0()).is_one());
    }

    #[test]
    fn division_cancels_common_factor() {
        // (x0·x1 + x1) / x1 = x0 + 1; checked by re-multiplying.
        let f = &(&x0() * &x1()) + &x1();
        let q = f.checked_div(&x1()).unwrap();
        assert_eq!(q, &x0() + &Scalar::one());
        assert_eq!(&q * &x1(), f);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(x0().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn quotient_rule() {
        // ∂(1/x0)/∂x0 = -1/x0²; multiply back by x0² to check.
        let d = x0().inverse().unwrap().partial("x0");
        assert_eq!(&d * &x0().pow(2), Scalar::from_int(-1));
        assert!(x1().partial("x0").is_zero());
        assert_eq!((&x0() * &x0()).partial("x0"), &Scalar::from_int(2) * &x0());
    }

    #[test]
    fn conjugation() {
        assert_eq!((&Scalar::i() * &x0()).conj(), &(-Scalar::i()) * &x0());
        assert_eq!(Scalar::from_ratio(3, 2).conj(), Scalar::from_ratio(3, 2));
        let one_plus_i = &Scalar::one() + &Scalar::i();
        let f = one_plus_i.checked_div(&x0()).unwrap();
        let expected = (&Scalar::one() - &Scalar::i()).checked_div(&x0()).unwrap();
        assert_eq!(f.conj(), expected);
    }

    #[test]
    fn evaluation_and_poles() {
        let inv = x0().inverse().unwrap();
        let mut pt = BTreeMap::new();
        pt.insert("x0".to_string(), GaussianRational::from_integer(2));
        assert_eq!(inv.evaluate(&pt).unwrap(), GaussianRational::from_ratio(1, 2));
        pt.insert("x0".to_string(), GaussianRational::from_integer(1));
        pt.insert("x1".to_string(), GaussianRational::from_integer(-1));
        assert!((&x0() + &x1()).evaluate(&pt).unwrap().is_zero());
        pt.insert("x0".to_string(), GaussianRational::zero());
        assert_eq!(inv.evaluate(&pt), Err(ScalarError::Pole));
    }

    #[test]
    fn denominator_is_monic() {
        let f = Scalar::one().checked_div(&(&Scalar::from_int(2) * &x0())).unwrap();
        assert!(f.denominator().leading_coefficient().is_one());
        assert_eq!(f.to_string(), "1/2/x0");
    }
}
