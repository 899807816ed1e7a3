use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::One;

use super::{mn_character, partitions_of, Partition, PartitionError};
use crate::qpoly::{Polynomial, Rational};

/// Semistandard tableaux of shape `shape` and content `content`, as rows of entries (1-based values).
pub fn ssyt(shape: &Partition, content: &Partition) -> Vec<Vec<Vec<usize>>> {
    if shape.size() != content.size() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut rows = vec![Vec::new(); shape.len()];
    fill(shape.parts(), content.parts(), 0, &mut rows, &mut out);
    out
}

// places the value `value + 1` as a horizontal strip, then recurses
fn fill(shape: &[usize], content: &[usize], value: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if value == content.len() {
        out.push(rows.clone());
        return;
    }
    let old: Vec<usize> = rows.iter().map(Vec::len).collect();
    strip(shape, &old, 0, content[value], value, rows, content, out);
}

#[allow(clippy::too_many_arguments)]
fn strip(
    shape: &[usize],
    old: &[usize],
    row: usize,
    remaining: usize,
    value: usize,
    rows: &mut Vec<Vec<usize>>,
    content: &[usize],
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if remaining == 0 {
        fill(shape, content, value + 1, rows, out);
        return;
    }
    if row == shape.len() {
        return;
    }
    let cap = if row == 0 { shape[0] } else { shape[row].min(old[row - 1]) };
    let room = cap.saturating_sub(old[row]).min(remaining);
    for a in (0..=room).rev() {
        rows[row].extend(std::iter::repeat(value + 1).take(a));
        strip(shape, old, row + 1, remaining - a, value, rows, content, out);
        let l = rows[row].len();
        rows[row].truncate(l - a);
    }
}

/// Lascoux–Schützenberger charge of a word with partition content.
fn charge(word: &[usize]) -> usize {
    let mut letters: Vec<Option<usize>> = word.iter().copied().map(Some).collect();
    let mut total = 0;
    while letters.iter().any(Option::is_some) {
        // extract a standard subword: scan leftwards cyclically for 1, 2, ...
        let max = letters.iter().flatten().copied().max().unwrap_or(0);
        let n = letters.len();
        let mut pos = n;
        let mut index = 0;
        for r in 1..=max {
            let mut found = None;
            let mut wrapped = false;
            for step in 1..=n {
                let i = (pos + n - step) % n;
                if pos < n && i >= pos {
                    wrapped = true;
                }
                if letters[i] == Some(r) {
                    found = Some(i);
                    break;
                }
            }
            let Some(i) = found else { break };
            if r > 1 && wrapped {
                index += 1;
            }
            total += index;
            letters[i] = None;
            pos = i;
        }
    }
    total
}

fn reading_word(tableau: &[Vec<usize>]) -> Vec<usize> {
    tableau.iter().rev().flatten().copied().collect()
}

/// Kostka–Foulkes polynomial `K_{λμ}(t)`, as a polynomial in the indeterminate.
pub fn kostka_foulkes(lambda: &Partition, mu: &Partition) -> Result<Polynomial, PartitionError> {
    if lambda.size() != mu.size() {
        return Err(PartitionError::SizeMismatch(lambda.size(), mu.size()));
    }
    Ok(ssyt(lambda, mu).iter().map(|t| Polynomial::monomial(Rational::one(), charge(&reading_word(t)))).sum())
}

type Memo = Mutex<HashMap<(Partition, Partition), Polynomial>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Green polynomial `Q^λ_ρ(q)`: the value of `R_{T_w}^{GL_n}(1)` at `u_λ`, `w` of cycle type `ρ`.
///
/// `Q^λ_ρ = Σ_μ χ^μ(ρ) q^{n(λ)} K_{μλ}(q^{-1})`. Normalized so that the value on
/// the regular class is 1 and `Q^{1^n}_{1^n}` counts complete flags.
pub fn green_polynomial(lambda: &Partition, rho: &Partition) -> Result<Polynomial, PartitionError> {
    let n = lambda.size();
    if n != rho.size() {
        return Err(PartitionError::SizeMismatch(n, rho.size()));
    }
    let key = (lambda.clone(), rho.clone());
    if let Some(v) = memo().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let n_lambda = lambda.n_statistic();
    let mut total = Polynomial::zero();
    for mu in partitions_of(n) {
        let chi = mn_character(&mu, rho)?;
        if chi == 0 {
            continue;
        }
        let mut mod_kf = Polynomial::zero();
        for t in ssyt(&mu, lambda) {
            let c = charge(&reading_word(&t));
            mod_kf += &Polynomial::monomial(Rational::one(), n_lambda - c);
        }
        total += &mod_kf.scale(&Rational::from_integer(chi.into()));
    }
    memo().lock().unwrap().insert(key, total.clone());
    Ok(total)
}

/// All Green polynomials of `GL_n`, rows = cycle types, columns = unipotent classes.
#[derive(Debug, Clone)]
pub struct GreenPolynomialTable {
    pub n: usize,
    pub classes: Vec<Partition>,
    pub tori: Vec<Partition>,
    /// `entries[i][j] = Q^{classes[j]}_{tori[i]}`
    pub entries: Vec<Vec<Polynomial>>,
}

pub fn green_table(n: usize) -> GreenPolynomialTable {
    let classes = partitions_of(n);
    let tori = classes.clone();
    let entries = tori
        .iter()
        .map(|rho| classes.iter().map(|lam| green_polynomial(lam, rho).expect("sizes agree")).collect())
        .collect();
    GreenPolynomialTable { n, classes, tori, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{cyclotomic, determinant, parse_poly, q_power_minus_one};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn flag_count(n: usize) -> Polynomial {
        // Π [i]_q
        (1..=n).map(|i| Polynomial::from_coeffs(vec![Rational::one(); i])).product()
    }

    #[test]
    fn tableaux_counts_are_kostka_numbers() {
        assert_eq!(ssyt(&p("2,1"), &p("1,1,1")).len(), 2);
        assert_eq!(ssyt(&p("3,2"), &p("2,2,1")).len(), 2);
        assert_eq!(ssyt(&p("2,2"), &p("3,1")).len(), 0);
        assert_eq!(ssyt(&p("3,2,1"), &p("1,1,1,1,1,1")).len(), 16);
    }

    #[test]
    fn charge_examples() {
        assert_eq!(charge(&[1, 2]), 1);
        assert_eq!(charge(&[2, 1]), 0);
        assert_eq!(charge(&[3, 1, 2]), 2);
        assert_eq!(charge(&[2, 1, 3]), 1);
        assert_eq!(charge(&[1, 2, 3]), 3);
    }

    #[test]
    fn kostka_foulkes_known_values() {
        // K_{(n),μ} = t^{n(μ)} and K_{λλ} = 1
        for mu in partitions_of(5) {
            assert_eq!(kostka_foulkes(&p("5"), &mu).unwrap(), Polynomial::monomial(Rational::one(), mu.n_statistic()));
            assert!(kostka_foulkes(&mu, &mu).unwrap().is_one());
        }
        assert_eq!(kostka_foulkes(&p("2,1"), &p("1,1,1")).unwrap(), parse_poly("q+q^2").unwrap());
        assert_eq!(kostka_foulkes(&p("3,1"), &p("2,1,1")).unwrap(), parse_poly("q+q^2").unwrap());
        assert_eq!(kostka_foulkes(&p("2,2"), &p("2,1,1")).unwrap(), parse_poly("q").unwrap());
    }

    #[test]
    fn reference_values() {
        assert!(green_polynomial(&p("3"), &p("1,1,1")).unwrap().is_one());
        assert_eq!(green_polynomial(&p("1,1"), &p("2")).unwrap(), parse_poly("1-q").unwrap());
        assert_eq!(green_polynomial(&p("1,1,1"), &p("1,1,1")).unwrap(), parse_poly("P2*P3").unwrap());
        // u_{21} fixes 2q+1 complete flags of F_q^3
        assert_eq!(green_polynomial(&p("2,1"), &p("1,1,1")).unwrap(), parse_poly("2*q+1").unwrap());
        assert!(green_polynomial(&p("2"), &p("1,1,1")).is_err());
    }

    #[test]
    fn regular_value_and_identity_value() {
        for n in 1..=6 {
            // ε_G ε_T |GL_n|_{p'} / |T_ρ|
            let order: Polynomial = (1..=n).map(q_power_minus_one).product();
            for rho in partitions_of(n) {
                assert!(green_polynomial(&Partition::row(n), &rho).unwrap().is_one());
                let torus: Polynomial = rho.parts().iter().map(|&r| q_power_minus_one(r)).product();
                let sign = if (n - rho.len()) % 2 == 0 { 1 } else { -1 };
                let expected = order.exact_div(&torus).unwrap().scale(&Rational::from_integer(sign.into()));
                assert_eq!(green_polynomial(&Partition::column(n), &rho).unwrap(), expected);
            }
            assert_eq!(green_polynomial(&Partition::column(n), &Partition::column(n)).unwrap(), flag_count(n));
        }
    }

    #[test]
    fn determinant_nonzero() {
        for n in 1..=5 {
            let t = green_table(n);
            assert!(!determinant(&t.entries).unwrap().is_zero(), "n = {n}");
        }
        assert_eq!(cyclotomic(1).unwrap().degree(), Some(1));
    }
}
