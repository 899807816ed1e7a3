//! Finite-group oracle for split Levi subgroups of `GL_n(p)` and `SL_n(p)`.
//!
//! Two realizations of the coset count `Q_L^G(u,v) = |L^F|^{-1} #{gU : u^g ∈ vU}`:
//! [`eq2_table`] enumerates `U^F` and needs centralizer orders (small `p` only);
//! [`brute_qtilde`] and the table builders count stable partial flags instead
//! (see [`flags`]), which scales to the primes needed for interpolation.

pub mod ff;
pub mod flags;
pub mod jordan;
pub mod slclass;

use std::collections::HashMap;

use num::{BigInt, BigRational, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::green2::QtildeMatrix;
use crate::partitions::{partitions_of, MultiPartition, Partition};
use crate::qpoly::{interpolate, Polynomial, Rational};
use crate::typea::LeviDescriptor;

pub use ff::FFMatrix;
pub use flags::{flag_fix_count, gl_flag_column};
pub use jordan::{jordan_conjugator, jordan_type};
pub use slclass::{sl_class_of, SLClassLabel, SlContext, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteError {
    #[error("not unipotent: {0}")]
    NotUnipotent(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("flag counting needs a split Levi, got {0}")]
    NonSplit(String),
    #[error("class label not found: {0}")]
    ClassNotFound(String),
    #[error("centralizer determinant image did not stabilize for {0}")]
    Unstable(String),
    #[error("need at least {need} primes, got {got}")]
    InsufficientSamples { need: usize, got: usize },
    #[error("{0}")]
    Interpolation(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

/// Ambient group of the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    Gl(usize),
    Sl(usize),
}

impl Ambient {
    pub fn n(&self) -> usize {
        match *self {
            Ambient::Gl(n) | Ambient::Sl(n) => n,
        }
    }
}

impl std::str::FromStr for Ambient {
    type Err = BruteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || BruteError::Unsupported(format!("ambient {s:?}"));
        let (kind, n) = if let Some(r) = s.strip_prefix("GL") {
            (0, r)
        } else if let Some(r) = s.strip_prefix("SL") {
            (1, r)
        } else {
            return Err(bad());
        };
        let n: usize = n.parse().map_err(|_| bad())?;
        if n == 0 || n > 5 {
            return Err(bad());
        }
        Ok(if kind == 0 { Ambient::Gl(n) } else { Ambient::Sl(n) })
    }
}

pub fn unipotent_radical_dim(blocks: &[usize]) -> usize {
    let n: usize = blocks.iter().sum();
    (n * n - blocks.iter().map(|b| b * b).sum::<usize>()) / 2
}

/// Block sizes of a split Levi of `GL_n`; twisted Levis are rejected.
pub fn split_blocks(levi: &LeviDescriptor) -> Result<Vec<usize>, BruteError> {
    levi.blocks().ok_or_else(|| BruteError::NonSplit(levi.to_string()))
}

/// `Q̃(v, u)` by counting `u`-stable flags. In `GL_n` labels are Jordan types
/// (`"2,1"` and `"2;1"`); in `SL_n` they carry a splitting index (`"2,2#1"`).
pub fn brute_qtilde(ambient: Ambient, p: u32, blocks: &[usize], u: &str, v: &str) -> Result<u64, BruteError> {
    if blocks.iter().sum::<usize>() != ambient.n() {
        return Err(BruteError::Unsupported(format!("blocks {blocks:?} for n = {}", ambient.n())));
    }
    let not_found = |s: &str| BruteError::ClassNotFound(s.to_string());
    match ambient {
        Ambient::Gl(n) => {
            let lambda: Partition = u.parse().map_err(|_| not_found(u))?;
            let mu = MultiPartition::parse(v).map_err(|_| not_found(v))?;
            if lambda.size() != n {
                return Err(not_found(u));
            }
            if mu.factors().len() != blocks.len() || mu.factors().iter().zip(blocks).any(|(m, &b)| m.size() != b) {
                return Err(not_found(v));
            }
            Ok(gl_flag_column(&lambda, blocks, p).get(mu.factors()).copied().unwrap_or(0))
        }
        Ambient::Sl(n) => {
            let table = sl_qtilde_table(n, blocks, p, DEFAULT_SEED)?;
            let i = table.rows.iter().position(|r| r.to_string() == v).ok_or_else(|| not_found(v))?;
            let j = table.cols.iter().position(|c| c.to_string() == u).ok_or_else(|| not_found(u))?;
            Ok(table.entries[i][j])
        }
    }
}

/// `Q̃` of a split Levi of `GL_n(p)` as an integer matrix with the canonical labels.
pub fn gl_qtilde_table(n: usize, blocks: &[usize], p: u32) -> Vec<Vec<u64>> {
    let rows = MultiPartition::all(blocks);
    let cols: Vec<HashMap<Vec<Partition>, u64>> =
        partitions_of(n).par_iter().map(|l| gl_flag_column(l, blocks, p)).collect();
    rows.iter().map(|v| cols.iter().map(|c| c.get(v.factors()).copied().unwrap_or(0)).collect()).collect()
}

/// `Q̃` of a split Levi of `SL_n(p)`, with splitting-index labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlTable {
    pub p: u32,
    pub rows: Vec<SLClassLabel>,
    pub cols: Vec<SLClassLabel>,
    pub entries: Vec<Vec<u64>>,
}

pub fn sl_qtilde_table(n: usize, blocks: &[usize], p: u32, seed: u64) -> Result<SlTable, BruteError> {
    let mut ctx = SlContext::new(p, seed)?;
    let cols = ctx.classes(&[n])?;
    let rows = ctx.classes(blocks)?;
    let mut entries = vec![vec![0u64; cols.len()]; rows.len()];
    for (j, u) in cols.iter().enumerate() {
        let x = ctx.representative(u);
        let mut err = None;
        let mut counts: HashMap<SLClassLabel, u64> = HashMap::new();
        flags::for_each_stable_flag(&x, blocks, &mut |ys, det| {
            if err.is_some() {
                return;
            }
            // the Levi part is compared with v^{-1}
            let inv: Vec<FFMatrix> = ys.iter().map(|y| y.inverse().expect("unipotent")).collect();
            match ctx.class_of_blocks(&inv, det) {
                Ok(l) => *counts.entry(l).or_insert(0) += 1,
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        for (l, c) in counts {
            let i = rows.iter().position(|r| *r == l).ok_or_else(|| BruteError::ClassNotFound(l.to_string()))?;
            entries[i][j] = c;
        }
    }
    Ok(SlTable { p, rows, cols, entries })
}

/// Order of the centralizer of `x` in `GL_n(p)`, counted over the commutant
/// algebra: an element `X` commuting with `N = x - 1` is invertible iff it is
/// injective on `ker N`, so only the restrictions to `ker N` are enumerated.
/// Kernels too large to enumerate fall back to the graded count.
pub fn centralizer_order(x: &FFMatrix) -> Result<u128, BruteError> {
    let (n, p) = (x.n, x.p);
    let nil = x.sub(&FFMatrix::identity(n, p));
    let mut rows = Vec::new();
    for i in 0..n {
        for k in 0..n {
            let mut r = vec![0u32; n * n];
            for t in 0..n {
                r[i * n + t] = (r[i * n + t] + nil.get(t, k)) % p;
                r[t * n + k] = (r[t * n + k] + p - nil.get(i, t)) % p;
            }
            rows.push(r);
        }
    }
    let commutant = ff::nullspace(&rows, n * n, p);
    let nil_rows: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| nil.get(i, j)).collect()).collect();
    let kernel = ff::nullspace(&nil_rows, n, p);
    let k = kernel.len();
    let restrict = |coeffs: &[u32]| -> Vec<u32> {
        let mut out = vec![0u32; n * k];
        for (c, b) in coeffs.iter().zip(&commutant) {
            if *c == 0 {
                continue;
            }
            for (col, kv) in kernel.iter().enumerate() {
                for i in 0..n {
                    let s: u64 = (0..n).map(|t| b[i * n + t] as u64 * kv[t] as u64).sum();
                    out[i * k + col] = ((out[i * k + col] as u64 + *c as u64 * s) % p as u64) as u32;
                }
            }
        }
        out
    };
    // independent subset of the restricted basis elements
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    for i in 0..commutant.len() {
        let mut e = vec![0u32; commutant.len()];
        e[i] = 1;
        let img = restrict(&e);
        let mut t = chosen.clone();
        t.push(img.clone());
        if ff::rank_of_rows(t, p) > chosen.len() {
            chosen.push(img);
        }
    }
    let r = chosen.len();
    let total = (p as u128).checked_pow(r as u32).filter(|&t| t <= MAX_RESTRICTIONS);
    let Some(total) = total else {
        return graded_centralizer_order(x, commutant.len());
    };
    let mut invertible: u128 = 0;
    let mut coeffs = vec![0u32; r];
    for _ in 0..total {
        let mut m = vec![0u32; n * k];
        for (c, v) in coeffs.iter().zip(&chosen) {
            if *c != 0 {
                for (a, b) in m.iter_mut().zip(v) {
                    *a = ((*a as u64 + *c as u64 * *b as u64) % p as u64) as u32;
                }
            }
        }
        let cols: Vec<Vec<u32>> = (0..k).map(|j| (0..n).map(|i| m[i * k + j]).collect()).collect();
        if ff::rank_of_rows(cols, p) == k {
            invertible += 1;
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    Ok(invertible * (p as u128).pow((commutant.len() - r) as u32))
}

/// Largest number of kernel restrictions enumerated by [`centralizer_order`].
const MAX_RESTRICTIONS: u128 = 1 << 20;

/// Fallback for large kernels. The commutant acts on each graded piece
/// `(ker N ∩ im N^{i-1}) / (ker N ∩ im N^i)` as the full matrix algebra of size
/// `m_i`, the number of Jordan blocks of size `i`, and an element is invertible
/// iff all these actions are. Hence `|C| = p^{d - Σ m_i²} Π |GL_{m_i}(p)|`.
fn graded_centralizer_order(x: &FFMatrix, commutant_dim: usize) -> Result<u128, BruteError> {
    let p = x.p as u128;
    let too_large = || BruteError::TooLarge(format!("centralizer of order beyond 2^128 at p = {p}"));
    let lambda = jordan_type(x)?;
    let mut order = 1u128;
    let mut reductive_dim = 0;
    for m in lambda.multiplicities().into_iter().filter(|&m| m > 0) {
        reductive_dim += m * m;
        for i in 0..m as u32 {
            let f = p.checked_pow(m as u32).zip(p.checked_pow(i)).map(|(a, b)| a - b).ok_or_else(too_large)?;
            order = order.checked_mul(f).ok_or_else(too_large)?;
        }
    }
    let unipotent = p.checked_pow((commutant_dim - reductive_dim) as u32).ok_or_else(too_large)?;
    order.checked_mul(unipotent).ok_or_else(too_large)
}

/// `Q̃` of a split Levi of `GL_n(p)` by enumerating `U^F`:
/// `Q̃(v,u) = |C_G(u)| #{x ∈ U : v^{-1} x ~ u} / (|U| |C_L(v)|)`.
pub fn eq2_table(n: usize, blocks: &[usize], p: u32) -> Result<Vec<Vec<Rational>>, BruteError> {
    let rows = MultiPartition::all(blocks);
    let cols = partitions_of(n);
    let cg: Vec<u128> =
        cols.iter().map(|l| centralizer_order(&FFMatrix::jordan(l.parts(), p))).collect::<Result<_, _>>()?;
    let mut upper = Vec::new();
    let mut start = 0;
    for &b in blocks {
        for i in start..start + b {
            for j in start + b..n {
                upper.push((i, j));
            }
        }
        start += b;
    }
    let u_order = BigInt::from(p).pow(upper.len() as u32);
    let mut out = Vec::new();
    for v in &rows {
        let blocks_j: Vec<FFMatrix> = v.factors().iter().map(|l| FFMatrix::jordan(l.parts(), p)).collect();
        let cl: u128 = v
            .factors()
            .iter()
            .map(|l| centralizer_order(&FFMatrix::jordan(l.parts(), p)))
            .product::<Result<u128, _>>()?;
        let vinv = FFMatrix::block_diagonal(&blocks_j, p).inverse().expect("unipotent");
        let mut tally: HashMap<Partition, u64> = HashMap::new();
        let mut x = FFMatrix::identity(n, p);
        loop {
            *tally.entry(jordan_type(&vinv.mul(&x))?).or_insert(0) += 1;
            let mut idx = upper.len();
            let done = loop {
                if idx == 0 {
                    break true;
                }
                idx -= 1;
                let (i, j) = upper[idx];
                let e = x.get(i, j) + 1;
                if e < p {
                    x.set(i, j, e);
                    break false;
                }
                x.set(i, j, 0);
            };
            if done {
                break;
            }
        }
        out.push(
            cols.iter()
                .zip(&cg)
                .map(|(u, &c)| {
                    let hits = tally.get(u).copied().unwrap_or(0);
                    BigRational::new(BigInt::from(c) * BigInt::from(hits), &u_order * BigInt::from(cl))
                })
                .collect(),
        );
    }
    Ok(out)
}

/// Entry-wise interpolation of flag counts over the given primes. Entries count
/// points of a subvariety of `G/P`, so their degree is at most `dim U`.
pub fn interpolate_table(
    ambient: &LeviDescriptor,
    levi: &LeviDescriptor,
    primes: &[u32],
) -> Result<QtildeMatrix, BruteError> {
    if !ambient.is_gl() {
        return Err(BruteError::Unsupported(format!("ambient {ambient}")));
    }
    let blocks = split_blocks(levi)?;
    let n = ambient.ambient_n;
    let need = unipotent_radical_dim(&blocks) + 1;
    if primes.len() < need {
        return Err(BruteError::InsufficientSamples { need, got: primes.len() });
    }
    let samples: Vec<Vec<Vec<u64>>> = primes.iter().map(|&p| gl_qtilde_table(n, &blocks, p)).collect();
    let rows = MultiPartition::all(&blocks);
    let cols: Vec<MultiPartition> = partitions_of(n).into_iter().map(|l| MultiPartition(vec![l])).collect();
    let mut entries = Vec::with_capacity(rows.len());
    for i in 0..rows.len() {
        let mut row = Vec::with_capacity(cols.len());
        for j in 0..cols.len() {
            let pts: Vec<(i64, Rational)> =
                primes.iter().zip(&samples).map(|(&p, s)| (p as i64, Rational::from_integer(s[i][j].into()))).collect();
            let poly = interpolate(&pts).map_err(|e| BruteError::Interpolation(e.to_string()))?;
            if poly.degree().is_some_and(|d| d + 1 > need) {
                return Err(BruteError::Interpolation(format!("degree of ({}, {}) exceeds dim U", rows[i], cols[j])));
            }
            row.push(poly);
        }
        entries.push(row);
    }
    Ok(QtildeMatrix { ambient: ambient.clone(), levi: levi.clone(), rows, cols, entries })
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u32> {
    (2u32..).filter(|&m| (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0)).take(k).collect()
}

/// Evaluates a polynomial at `q` and returns it as an integer if integral.
pub fn eval_integer(p: &Polynomial, q: i64) -> Option<i64> {
    let v = p.eval_int(q);
    v.is_integer().then(|| v.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl3_entries() {
        assert_eq!(brute_qtilde(Ambient::Gl(3), 2, &[2, 1], "1,1,1", "1,1;1").unwrap(), 7);
        assert_eq!(brute_qtilde(Ambient::Gl(3), 3, &[2, 1], "2,1", "2;1").unwrap(), 3);
        for p in [2, 3, 5] {
            assert_eq!(brute_qtilde(Ambient::Gl(3), p, &[2, 1], "3", "1,1;1").unwrap(), 0);
        }
        assert!(brute_qtilde(Ambient::Gl(3), 2, &[2, 1], "4", "1,1;1").is_err());
    }

    #[test]
    fn centralizer_orders() {
        // |GL_2(3)| = 48, |C(J_2)| = p(p-1)
        assert_eq!(centralizer_order(&FFMatrix::identity(2, 3)).unwrap(), 48);
        assert_eq!(centralizer_order(&FFMatrix::jordan(&[2], 3)).unwrap(), 6);
        assert_eq!(centralizer_order(&FFMatrix::jordan(&[2, 1], 2)).unwrap(), 8);
    }

    #[test]
    fn graded_count_agrees_with_enumeration() {
        for (parts, p) in [(vec![2, 1], 3), (vec![2, 2], 2), (vec![3, 1, 1], 2), (vec![1, 1], 5), (vec![2, 1, 1], 3)] {
            let x = FFMatrix::jordan(&parts, p);
            let d = (0..parts.len()).map(|i| parts.iter().map(|&b| b.min(parts[i])).sum::<usize>()).sum();
            assert_eq!(graded_centralizer_order(&x, d).unwrap(), centralizer_order(&x).unwrap(), "{parts:?} at {p}");
        }
        // |GL_5(13)| is far beyond enumeration
        let gl5: u128 = (0..5).map(|i| 13u128.pow(5) - 13u128.pow(i)).product();
        assert_eq!(centralizer_order(&FFMatrix::identity(5, 13)).unwrap(), gl5);
    }

    #[test]
    fn coset_count_matches_flag_count() {
        for (n, blocks, p) in [(3, vec![2, 1], 2), (3, vec![2, 1], 3), (3, vec![1, 1, 1], 3), (4, vec![2, 2], 2)] {
            let a = eq2_table(n, &blocks, p).unwrap();
            let b = gl_qtilde_table(n, &blocks, p);
            for (ra, rb) in a.iter().zip(&b) {
                for (x, &y) in ra.iter().zip(rb) {
                    assert_eq!(*x, Rational::from_integer(y.into()), "{blocks:?} p={p}");
                }
            }
        }
    }

    #[test]
    fn too_few_primes() {
        let g = LeviDescriptor::gl(3);
        let l = LeviDescriptor::split(&[2, 1]);
        assert_eq!(
            interpolate_table(&g, &l, &[2, 3]).unwrap_err(),
            BruteError::InsufficientSamples { need: 3, got: 2 }
        );
        assert!(interpolate_table(&g, &"GL3 / 1@2".parse().unwrap(), &[2, 3, 5]).is_err());
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(7), [2, 3, 5, 7, 11, 13, 17]);
    }
}
