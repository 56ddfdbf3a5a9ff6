use std::fmt;

use num_traits::Zero;

use super::{gcd_poly, Poly, PolyError, Rational, Vars};

/// Reduced quotient `num / den` of polynomials.
///
/// The denominator is integer-primitive with positive leading coefficient and
/// coprime to the numerator; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        num.check_same_ring(&den)?;
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(Poly::zero(vars))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        let g = gcd_poly(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.try_div(&g).expect("gcd divides"), den.try_div(&g).expect("gcd divides"))
        };
        let (unit, den) = den.normalize_primitive().expect("nonzero denominator");
        RationalFunction { num: num.scale(&unit.recip()), den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self::reduce(self.num.mul(p), self.den.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, PolyError> {
        if o.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::reduce(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn shift(&self, s: &[i64]) -> Self {
        Self::reduce(self.num.shift(s), self.den.shift(s))
    }

    pub fn linear_substitute(&self, m: &[Vec<i64>]) -> Self {
        Self::reduce(self.num.linear_substitute(m), self.den.linear_substitute(m))
    }

    /// `None` when the point is a pole.
    pub fn eval(&self, point: &[Rational]) -> Result<Option<Rational>, PolyError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(point)? / d))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
