//! Jordan types of unipotent matrices and conjugators to the standard form.

use super::ff::{rank_of_rows, FFMatrix};
use super::BruteError;
use crate::partitions::Partition;

/// Jordan type from the rank sequence `r_0 = d, r_k = rank N^k`.
pub fn type_from_ranks(ranks: &[usize]) -> Partition {
    let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).filter(|&x| x > 0).collect();
    Partition::new(conj).conjugate()
}

fn nilpotent_part(x: &FFMatrix) -> Result<FFMatrix, BruteError> {
    let n = x.sub(&FFMatrix::identity(x.n, x.p));
    if !n.pow(x.n).is_zero() {
        return Err(BruteError::NotUnipotent(format!("{x:?}")));
    }
    Ok(n)
}

/// Jordan type of a unipotent matrix.
pub fn jordan_type(x: &FFMatrix) -> Result<Partition, BruteError> {
    let n = nilpotent_part(x)?;
    let mut ranks = vec![x.n];
    let mut pw = FFMatrix::identity(x.n, x.p);
    while *ranks.last().unwrap() > 0 {
        pw = pw.mul(&n);
        ranks.push(pw.rank());
    }
    Ok(type_from_ranks(&ranks))
}

/// Returns `(λ, g)` with `g^{-1} x g = J_λ`, blocks in decreasing size.
pub fn jordan_conjugator(x: &FFMatrix) -> Result<(Partition, FFMatrix), BruteError> {
    let lambda = jordan_type(x)?;
    let (d, p) = (x.n, x.p);
    let n = nilpotent_part(x)?;
    let powers: Vec<FFMatrix> = (0..=d).map(|k| n.pow(k)).collect();
    let kernel_basis = |k: usize| -> Vec<Vec<u32>> {
        let rows: Vec<Vec<u32>> = (0..d).map(|i| (0..d).map(|j| powers[k].get(i, j)).collect()).collect();
        super::ff::nullspace(&rows, d, p)
    };
    // greedy chains: a new top vector v of length k is accepted when N^{k-1} v is
    // independent of the bottoms chosen so far
    let mut bottoms: Vec<Vec<u32>> = Vec::new();
    let mut columns: Vec<Vec<u32>> = Vec::new();
    for &k in lambda.parts() {
        let top = kernel_basis(k)
            .into_iter()
            .find(|v| {
                let b = powers[k - 1].mul_vec(v);
                let mut t = bottoms.clone();
                t.push(b);
                rank_of_rows(t, p) == bottoms.len() + 1
            })
            .expect("rank data guarantees a new chain");
        bottoms.push(powers[k - 1].mul_vec(&top));
        for i in (0..k).rev() {
            columns.push(powers[i].mul_vec(&top));
        }
    }
    Ok((lambda, FFMatrix::from_columns(&columns, p)))
}
