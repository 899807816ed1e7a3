use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{Polynomial, QpolyError, Rational};

/// Reduced fraction of polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, QpolyError> {
        if den.is_zero() {
            return Err(QpolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Polynomial::zero()));
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g).expect("gcd divides");
        let mut den = den.exact_div(&g).expect("gcd divides");
        let lc: Rational = den.leading_coeff().expect("nonzero").clone();
        num = num.scale(&lc.recip());
        den = den.monic();
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, if the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn into_polynomial(self) -> Option<Polynomial> {
        self.den.is_one().then_some(self.num)
    }

    pub fn recip(&self) -> Result<Self, QpolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!num::Zero::is_zero(&d)).then(|| self.num.eval(x) / d)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
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

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        RationalFunction::new(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Div for &RationalFunction {
    type Output = Result<RationalFunction, QpolyError>;
    fn div(self, rhs: &RationalFunction) -> Self::Output {
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}
