use std::collections::HashSet;

use num::One;

use super::{Polynomial, QpolyError, Rational};

/// Unique polynomial of degree below `points.len()` through the given samples (Newton form).
pub fn interpolate(points: &[(i64, Rational)]) -> Result<Polynomial, QpolyError> {
    let mut seen = HashSet::new();
    for (x, _) in points {
        if !seen.insert(*x) {
            return Err(QpolyError::DuplicateAbscissa(*x));
        }
    }
    let xs: Vec<Rational> = points.iter().map(|(x, _)| Rational::from_integer((*x).into())).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    let n = dd.len();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut result = Polynomial::zero();
    for i in (0..n).rev() {
        let shift = Polynomial::from_coeffs(vec![-xs[i].clone(), Rational::one()]);
        result = &result * &shift + Polynomial::constant(dd[i].clone());
    }
    debug_assert!(points.iter().all(|(x, y)| result.eval_int(*x) == *y));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{parse_poly, rational};

    #[test]
    fn line_through_two_points() {
        let p = interpolate(&[(2, rational(3, 1)), (3, rational(4, 1))]).unwrap();
        assert_eq!(p, parse_poly("q+1").unwrap());
    }

    #[test]
    fn recovers_cyclotomic_product() {
        let target = parse_poly("P2*P4").unwrap();
        let pts: Vec<_> = [2, 3, 5, 7, 11].iter().map(|&x| (x, target.eval_int(x))).collect();
        assert_eq!(interpolate(&pts).unwrap(), target);
    }

    #[test]
    fn single_zero_sample_and_duplicates() {
        assert!(interpolate(&[(5, rational(0, 1))]).unwrap().is_zero());
        assert_eq!(interpolate(&[(5, rational(0, 1)), (5, rational(1, 1))]), Err(QpolyError::DuplicateAbscissa(5)));
    }
}
