use super::{Polynomial, QpolyError, RationalFunction};

/// Solves `A x = b` exactly over `Q(q)`.
pub fn solve_linear(a: &[Vec<Polynomial>], b: &[Polynomial]) -> Result<Vec<RationalFunction>, QpolyError> {
    let cols: Vec<Vec<Polynomial>> = b.iter().map(|x| vec![x.clone()]).collect();
    let x = solve_linear_multi(a, &cols)?;
    Ok(x.into_iter().map(|mut row| row.remove(0)).collect())
}

/// Solves `A X = B` for a matrix of right-hand sides; row `i` of the result is row `i` of `X`.
///
/// Forward elimination is fraction-free (Bareiss), so every intermediate entry
/// stays a polynomial; only back-substitution divides.
pub fn solve_linear_multi(
    a: &[Vec<Polynomial>],
    b: &[Vec<Polynomial>],
) -> Result<Vec<Vec<RationalFunction>>, QpolyError> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(QpolyError::ShapeMismatch(format!("matrix is not square ({n} rows)")));
    }
    if b.len() != n {
        return Err(QpolyError::ShapeMismatch(format!("right-hand side has {} rows, matrix has {n}", b.len())));
    }
    let k = b.first().map_or(0, Vec::len);
    if b.iter().any(|row| row.len() != k) {
        return Err(QpolyError::ShapeMismatch("ragged right-hand side".into()));
    }

    let mut m: Vec<Vec<Polynomial>> = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).cloned().collect()).collect();
    let width = n + k;
    let mut prev = Polynomial::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].degree())
            .ok_or(QpolyError::Singular)?;
        m.swap(col, pivot);
        for r in col + 1..n {
            for c in col + 1..width {
                let v = &m[col][col] * &m[r][c] - &m[r][col] * &m[col][c];
                m[r][c] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[r][col] = Polynomial::zero();
        }
        prev = m[col][col].clone();
    }

    let mut x = vec![vec![RationalFunction::zero(); k]; n];
    for j in 0..k {
        for i in (0..n).rev() {
            let mut acc = RationalFunction::from_poly(m[i][n + j].clone());
            for c in i + 1..n {
                if !m[i][c].is_zero() {
                    acc = &acc - &(&RationalFunction::from_poly(m[i][c].clone()) * &x[c][j]);
                }
            }
            x[i][j] = (&acc / &RationalFunction::from_poly(m[i][i].clone()))?;
        }
    }
    Ok(x)
}

/// Determinant by fraction-free elimination.
pub fn determinant(a: &[Vec<Polynomial>]) -> Result<Polynomial, QpolyError> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(QpolyError::ShapeMismatch(format!("matrix is not square ({n} rows)")));
    }
    let mut m = a.to_vec();
    let mut prev = Polynomial::one();
    let mut negate = false;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(Polynomial::zero());
        };
        if pivot != col {
            m.swap(col, pivot);
            negate = !negate;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                let v = &m[col][col] * &m[r][c] - &m[r][col] * &m[col][c];
                m[r][c] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[col][col].clone();
    }
    Ok(if negate { -prev } else { prev })
}
