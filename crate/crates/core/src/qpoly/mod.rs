//! Exact arithmetic in `Q[q]` and `Q(q)`.
//!
//! Every Green-function value in this crate is a [`Polynomial`] with
//! arbitrary-precision rational coefficients. Rational functions only show up
//! as intermediate values of [`solve_linear`].

mod interp;
mod linalg;
mod parse;
mod ratfun;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

pub use interp::interpolate;
pub use linalg::{determinant, solve_linear, solve_linear_multi};
pub use parse::{parse_expr, parse_poly, PolyExpr};
pub use ratfun::RationalFunction;

pub type Rational = BigRational;

/// Largest cyclotomic index tried when printing in factored form.
pub const MAX_PRINTED_CYCLOTOMIC: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QpolyError {
    #[error("cyclotomic index must be positive")]
    ZeroCyclotomicIndex,
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(i64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("matrix is singular (determinant is the zero polynomial)")]
    Singular,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by a non-constant expression at position {pos}")]
    NonConstantDivisor { pos: usize },
}

/// Exact univariate polynomial in `q`; `coeffs[i]` is the coefficient of `q^i`.
///
/// The coefficient vector never carries a trailing zero, so the zero
/// polynomial is the empty vector and derived equality is polynomial identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    /// Integer coefficients in ascending degree order.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The constant value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(x.into()))
    }

    /// `p(q^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1, "substitution exponent must be positive");
        if k == 1 || self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// Ennola transform `p(-q)`.
    pub fn ennola(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division over `Q`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), QpolyError> {
        let d_deg = divisor.degree().ok_or(QpolyError::DivisionByZero)?;
        let lead = divisor.coeffs[d_deg].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - d_deg];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d_deg] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(d_deg);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        match self.div_rem(divisor) {
            Ok((quot, rem)) if rem.is_zero() => Some(quot),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num::integer::gcd(num_gcd, c.numer().clone());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        Rational::new(num_gcd.abs(), den_lcm)
    }

    /// Integer coefficients, if all coefficients are integers.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Cyclotomic display form, e.g. `-1/2*q*P1*P2` or `q^4+3*q^3+3*q^2+q+1`.
    pub fn to_latex(&self) -> String {
        match self.factored() {
            None => ".".to_string(),
            Some(f) => f.to_latex(),
        }
    }

    fn factored(&self) -> Option<Factored> {
        if self.is_zero() {
            return None;
        }
        let content = self.content();
        let negative = self.leading_coeff().is_some_and(Signed::is_negative);
        let coefficient = if negative { -content.clone() } else { content.clone() };
        let mut residual = self.scale(&coefficient.recip());
        let q_power = residual.valuation().unwrap_or(0);
        if q_power > 0 {
            residual = Self::from_coeffs(residual.coeffs[q_power..].to_vec());
        }
        let mut cyclotomics = Vec::new();
        for d in 1..=MAX_PRINTED_CYCLOTOMIC {
            if residual.is_constant() {
                break;
            }
            let phi = cyclotomic(d).expect("positive index");
            while let Some(quot) = residual.exact_div(&phi) {
                residual = quot;
                cyclotomics.push(d);
            }
        }
        Some(Factored { coefficient, q_power, cyclotomics, residual })
    }

    fn write_expanded(&self, out: &mut String, var: &str, times: &str) {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if negative {
                out.push('-');
            } else if !first {
                out.push('+');
            }
            first = false;
            if i == 0 {
                out.push_str(&abs.to_string());
                continue;
            }
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push_str(times);
            }
            out.push_str(var);
            if i > 1 {
                if times.is_empty() {
                    out.push_str(&format!("^{{{i}}}"));
                } else {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
    }
}

struct Factored {
    coefficient: Rational,
    q_power: usize,
    cyclotomics: Vec<u32>,
    residual: Polynomial,
}

impl Factored {
    fn factor_strings(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.q_power {
            0 => {}
            1 => out.push("q".to_string()),
            k => out.push(format!("q^{k}")),
        }
        out.extend(self.cyclotomics.iter().map(|d| format!("P{d}")));
        if !self.residual.is_one() {
            let mut s = String::new();
            self.residual.write_expanded(&mut s, "q", "*");
            if out.is_empty() && self.coefficient.is_one() {
                out.push(s);
            } else {
                out.push(format!("({s})"));
            }
        }
        out
    }

    fn to_grammar(&self) -> String {
        let factors = self.factor_strings();
        if factors.is_empty() {
            return self.coefficient.to_string();
        }
        let body = factors.join("*");
        if self.coefficient.is_one() {
            body
        } else if (-self.coefficient.clone()).is_one() {
            format!("-{body}")
        } else {
            format!("{}*{body}", self.coefficient)
        }
    }

    fn to_latex(&self) -> String {
        let mut body = String::new();
        match self.q_power {
            0 => {}
            1 => body.push('q'),
            k => body.push_str(&format!("q^{{{k}}}")),
        }
        let mut i = 0;
        while i < self.cyclotomics.len() {
            let d = self.cyclotomics[i];
            let run = self.cyclotomics[i..].iter().take_while(|&&e| e == d).count();
            body.push_str(&format!("\\Phi_{{{d}}}"));
            if run > 1 {
                body.push_str(&format!("^{{{run}}}"));
            }
            i += run;
        }
        if !self.residual.is_one() {
            let mut s = String::new();
            self.residual.write_expanded(&mut s, "q", "");
            if body.is_empty() && self.coefficient.is_one() {
                return s;
            }
            body.push_str(&format!("({s})"));
        }
        let c = &self.coefficient;
        let sign = if c.is_negative() { "-" } else { "" };
        let abs = c.abs();
        let coef = if abs.is_integer() {
            abs.to_integer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        if body.is_empty() {
            format!("{sign}{coef}")
        } else if abs.is_one() {
            format!("{sign}{body}")
        } else {
            format!("{sign}{coef}{body}")
        }
    }
}

impl fmt::Display for Polynomial {
    /// Prints in the table-entry grammar accepted by [`parse_poly`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factored() {
            None => f.write_str("0"),
            Some(fac) => f.write_str(&fac.to_grammar()),
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if self.is_zero() {
            s.push('0');
        } else {
            self.write_expanded(&mut s, "q", "*");
        }
        write!(f, "Polynomial({s})")
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Polynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Polynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `d`-th cyclotomic polynomial `Φ_d(q)`.
pub fn cyclotomic(d: u32) -> Result<Polynomial, QpolyError> {
    if d == 0 {
        return Err(QpolyError::ZeroCyclotomicIndex);
    }
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&d) {
        return Ok(p.clone());
    }
    // q^d - 1 divided by all Φ_e with e | d, e < d
    let mut p = Polynomial::monomial(Rational::one(), d as usize) - Polynomial::one();
    for e in (1..d).filter(|e| d % e == 0) {
        p = p.exact_div(&cyclotomic(e)?).expect("cyclotomic factors divide q^d - 1");
    }
    cyclotomic_cache().lock().unwrap().insert(d, p.clone());
    Ok(p)
}

/// `q^n - 1`.
pub fn q_power_minus_one(n: usize) -> Polynomial {
    Polynomial::monomial(Rational::one(), n) - Polynomial::one()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $impl_fn:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                $impl_fn(self, rhs)
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $impl_fn(&self, &rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                $impl_fn(&self, rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $impl_fn(self, &rhs)
            }
        }
    };
}

fn add_impl(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
    let mut coeffs = long.coeffs.clone();
    for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
        *c += s;
    }
    Polynomial::from_coeffs(coeffs)
}

fn sub_impl(a: &Polynomial, b: &Polynomial) -> Polynomial {
    add_impl(a, &-b)
}

fn mul_impl(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let mut coeffs = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            coeffs[i + j] += x * y;
        }
    }
    Polynomial::from_coeffs(coeffs)
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        *self = add_impl(self, rhs);
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        *self = sub_impl(self, rhs);
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Polynomial::one(), |acc, p| acc * p)
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::from_int(c)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_poly(s).unwrap()
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).unwrap(), Polynomial::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(2).unwrap(), Polynomial::from_ints(&[1, 1]));
        assert_eq!(cyclotomic(6).unwrap(), Polynomial::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(0), Err(QpolyError::ZeroCyclotomicIndex));
    }

    #[test]
    fn cyclotomic_products_give_q_n_minus_one() {
        for n in 1..=30u32 {
            let prod: Polynomial = (1..=n).filter(|d| n % d == 0).map(|d| cyclotomic(d).unwrap()).product();
            assert_eq!(prod, q_power_minus_one(n as usize), "n = {n}");
        }
    }

    #[test]
    fn ennola_examples() {
        assert_eq!(p("q+1").ennola(), p("-q+1"));
        assert_eq!(p("P3").ennola(), p("P6"));
        assert_eq!(p("7/3").ennola(), p("7/3"));
    }

    #[test]
    fn division_and_gcd() {
        let a = p("P1*P2*P3");
        let b = p("P2*P3*P6");
        assert_eq!(a.gcd(&b), p("P2*P3"));
        let (quot, rem) = p("q^3+2").div_rem(&p("q-1")).unwrap();
        assert_eq!(quot, p("q^2+q+1"));
        assert_eq!(rem, p("3"));
        assert_eq!(p("q").div_rem(&Polynomial::zero()), Err(QpolyError::DivisionByZero));
        assert!(p("q+1").exact_div(&p("q-1")).is_none());
    }

    #[test]
    fn display_uses_cyclotomic_factors() {
        assert_eq!(p("1/2*P1").to_string(), "1/2*P1");
        assert_eq!(p("q^4+3*q^3+3*q^2+q+1").to_string(), "q^4+3*q^3+3*q^2+q+1");
        assert_eq!(p("-q^2*P1").to_string(), "-q^2*P1");
        assert_eq!(p("(q-5)/4").to_string(), "1/4*(q-5)");
        assert_eq!(p("q*(q^2-q-1)").to_string(), "q*(q^2-q-1)");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("-3/2").to_string(), "-3/2");
        assert_eq!(p("2*q").to_string(), "2*q");
    }

    #[test]
    fn latex_rendering() {
        assert_eq!(p("P1*P1*P3").to_latex(), "\\Phi_{1}^{2}\\Phi_{3}");
        assert_eq!(p("-1/2*P1").to_latex(), "-\\frac{1}{2}\\Phi_{1}");
        assert_eq!(Polynomial::zero().to_latex(), ".");
        assert_eq!(p("q^2").to_latex(), "q^{2}");
    }

    #[test]
    fn substitute_power_and_eval() {
        let x = p("P2").substitute_power(2);
        assert_eq!(x, p("q^2+1"));
        assert_eq!(p("P2*P4").eval_int(2), rational(15, 1));
        assert_eq!(p("q^3-1").valuation(), Some(0));
    }
}
