use num::{BigInt, One, Zero};

use super::{cyclotomic, Polynomial, QpolyError, Rational};

/// Parsed surface syntax of a table entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Const(Rational),
    /// `q^k`
    QPow(u32),
    /// Cyclotomic atom `P<d>`.
    Cyclo(u32),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    /// Division by an expression that evaluates to a nonzero constant.
    Div(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    pub fn eval(&self) -> Result<Polynomial, QpolyError> {
        Ok(match self {
            PolyExpr::Const(c) => Polynomial::constant(c.clone()),
            PolyExpr::QPow(k) => Polynomial::monomial(Rational::one(), *k as usize),
            PolyExpr::Cyclo(d) => cyclotomic(*d)?,
            PolyExpr::Neg(a) => -a.eval()?,
            PolyExpr::Add(a, b) => a.eval()? + b.eval()?,
            PolyExpr::Sub(a, b) => a.eval()? - b.eval()?,
            PolyExpr::Mul(a, b) => a.eval()? * b.eval()?,
            PolyExpr::Div(a, b) => {
                let d = b.eval()?.as_constant().ok_or(QpolyError::NonConstantDivisor { pos: 0 })?;
                if d.is_zero() {
                    return Err(QpolyError::DivisionByZero);
                }
                a.eval()?.scale(&d.recip())
            }
            PolyExpr::Pow(a, e) => a.eval()?.pow(*e),
        })
    }
}

/// Parses a table entry into its expression tree.
pub fn parse_expr(s: &str) -> Result<PolyExpr, QpolyError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses and evaluates a table entry.
pub fn parse_poly(s: &str) -> Result<Polynomial, QpolyError> {
    parse_expr(s)?.eval()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> QpolyError {
        QpolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<BigInt, QpolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small_uint(&mut self, what: &str) -> Result<u32, QpolyError> {
        let start = self.pos;
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| QpolyError::Syntax { pos: start, msg: format!("{what} out of range") })
    }

    fn expr(&mut self) -> Result<PolyExpr, QpolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                PolyExpr::Neg(Box::new(self.term()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = PolyExpr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = PolyExpr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, QpolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = PolyExpr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let divisor = self.factor()?;
                    match divisor.eval()?.as_constant() {
                        None => return Err(QpolyError::NonConstantDivisor { pos: at }),
                        Some(c) if c.is_zero() => return Err(QpolyError::DivisionByZero),
                        Some(_) => {}
                    }
                    acc = PolyExpr::Div(Box::new(acc), Box::new(divisor));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<PolyExpr, QpolyError> {
        let base = match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    PolyExpr::QPow(self.small_uint("exponent")?)
                } else {
                    PolyExpr::QPow(1)
                }
            }
            Some(b'P') => {
                self.pos += 1;
                let at = self.pos;
                let d = self.small_uint("cyclotomic index")?;
                if d == 0 {
                    return Err(QpolyError::Syntax { pos: at, msg: "cyclotomic index must be positive".into() });
                }
                PolyExpr::Cyclo(d)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => PolyExpr::Const(Rational::from_integer(self.uint()?)),
            Some(_) => return Err(self.err("expected a factor")),
            None => return Err(self.err("unexpected end of input")),
        };
        if self.peek() == Some(b'^') && !matches!(base, PolyExpr::QPow(_)) {
            self.pos += 1;
            let e = self.small_uint("exponent")?;
            return Ok(PolyExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::rational;

    #[test]
    fn reference_values() {
        assert_eq!(parse_poly("P2*P4").unwrap(), Polynomial::from_ints(&[1, 1, 1, 1]));
        assert_eq!(parse_poly("1/2*P1").unwrap(), Polynomial::from_coeffs(vec![rational(-1, 2), rational(1, 2)]));
        assert_eq!(parse_poly("q^4+3*q^3+3*q^2+q+1").unwrap(), Polynomial::from_ints(&[1, 1, 3, 3, 1]));
    }

    #[test]
    fn whitespace_signs_and_powers() {
        assert_eq!(parse_poly(" - q ^ 2 + 1 ").unwrap(), Polynomial::from_ints(&[1, 0, -1]));
        assert_eq!(parse_poly("P1^2*P3").unwrap(), parse_poly("P1*P1*P3").unwrap());
        assert_eq!(parse_poly("(q-1)^3").unwrap(), parse_poly("P1*P1*P1").unwrap());
        assert_eq!(parse_poly("(q-5)/4").unwrap(), parse_poly("1/4*q-5/4").unwrap());
        assert_eq!(parse_poly("q/(1+1)").unwrap(), parse_poly("1/2*q").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_poly("P1/P2"), Err(QpolyError::NonConstantDivisor { pos: 3 })));
        assert!(matches!(parse_poly("q+"), Err(QpolyError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("q)"), Err(QpolyError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x"), Err(QpolyError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_poly("P0"), Err(QpolyError::Syntax { .. })));
        assert_eq!(parse_poly("1/0"), Err(QpolyError::DivisionByZero));
    }

    #[test]
    fn tree_shape() {
        let e = parse_expr("-1/2*P1").unwrap();
        assert!(matches!(e, PolyExpr::Neg(_)));
        assert_eq!(e.eval().unwrap(), parse_poly("1/2-1/2*q").unwrap());
    }
}
