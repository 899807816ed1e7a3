//! Stable subspaces and partial flags over `F_p`.
//!
//! For a split parabolic `P = L U` of block type `(n_1, ..., n_r)`, the cosets
//! `g U` in the count defining `Q_L^G(u, v^{-1})` group into the partial flags
//! `g P`. A flag contributes `|C_{L^F}(v)|` cosets if it is `u`-stable and the
//! Levi part of `u^g` is `L^F`-conjugate to `v^{-1}`, and none otherwise. Hence
//! `Q̃(v, u)` is the number of `u`-stable flags whose successive quotients carry
//! the class of `v^{-1}`.

use std::collections::HashMap;

use rayon::prelude::*;

use super::ff::{rank_of_rows, FFMatrix};
use super::jordan::type_from_ranks;
use crate::partitions::Partition;

/// `k`-subsets of `0..d` in lexicographic order.
fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// Free positions `(row, col)` of reduced echelon forms with the given pivots.
fn free_positions(d: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &pc)| ((pc + 1)..d).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
        .collect()
}

/// Number of `k`-dimensional subspaces of `F_p^d`, counted cell by cell.
pub fn subspace_count(d: usize, k: usize, p: u32) -> u64 {
    subsets(d, k).iter().map(|piv| (p as u64).pow(free_positions(d, piv).len() as u32)).sum()
}

/// Calls `f` on the reduced echelon rows of every `k`-dimensional subspace with
/// the given pivot columns that is stable under the nilpotent matrix `n`.
fn stable_with_pivots(n: &FFMatrix, k: usize, pivots: &[usize], f: &mut dyn FnMut(&[Vec<u32>])) {
    let (d, p) = (n.n, n.p);
    let p64 = p as u64;
    let free = free_positions(d, pivots);
    let nonpivots: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    let mut rows = vec![vec![0u32; d]; k];
    for (i, &pc) in pivots.iter().enumerate() {
        rows[i][pc] = 1;
    }
    let mut t = vec![0u64; d];
    let stable = |rows: &[Vec<u32>], t: &mut Vec<u64>| -> bool {
        for r in rows {
            for (i, ti) in t.iter_mut().enumerate() {
                *ti = (0..d).map(|j| n.get(i, j) as u64 * r[j] as u64).sum::<u64>() % p64;
            }
            for &c in &nonpivots {
                let mut acc = t[c];
                for (j, &pj) in pivots.iter().enumerate() {
                    acc += (p64 - t[pj]) * rows[j][c] as u64;
                }
                if acc % p64 != 0 {
                    return false;
                }
            }
        }
        true
    };
    loop {
        if stable(&rows, &mut t) {
            f(&rows);
        }
        // odometer, last free position fastest
        let mut idx = free.len();
        loop {
            if idx == 0 {
                return;
            }
            idx -= 1;
            let (i, c) = free[idx];
            rows[i][c] += 1;
            if rows[i][c] < p {
                break;
            }
            rows[i][c] = 0;
        }
    }
}

/// All `n`-stable `k`-dimensional subspaces, as reduced echelon row bases.
pub fn stable_subspaces(n: &FFMatrix, k: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    for piv in subsets(n.n, k) {
        stable_with_pivots(n, k, &piv, &mut |rows| out.push(rows.to_vec()));
    }
    out
}

fn powers(n: &FFMatrix) -> Vec<FFMatrix> {
    let mut out = vec![FFMatrix::identity(n.n, n.p)];
    for _ in 0..n.n {
        out.push(out.last().unwrap().mul(n));
    }
    out
}

/// Jordan types of `N` on `W` and on `V/W`.
fn sub_and_quotient_types(pw: &[FFMatrix], w: &[Vec<u32>]) -> (Partition, Partition) {
    let (d, p) = (pw[0].n, pw[0].p);
    let k = w.len();
    let mut sub = vec![k];
    let mut quo = vec![d - k];
    for m in pw.iter().skip(1) {
        let images: Vec<Vec<u32>> = w.iter().map(|r| m.mul_vec(r)).collect();
        sub.push(rank_of_rows(images, p));
        let mut span: Vec<Vec<u32>> = (0..d).map(|j| m.column(j)).collect();
        span.extend(w.iter().cloned());
        quo.push(rank_of_rows(span, p) - k);
    }
    (type_from_ranks(&sub), type_from_ranks(&quo))
}

type Column = HashMap<Vec<Partition>, u64>;

/// Stable-flag counts of `J_λ` by Levi type, with the quotient handled through
/// its Jordan type (memoized).
struct GlCounter {
    p: u32,
    memo: HashMap<(Partition, Vec<usize>), Column>,
}

impl GlCounter {
    fn column(&mut self, lambda: &Partition, blocks: &[usize]) -> Column {
        if blocks.len() == 1 {
            return Column::from([(vec![lambda.clone()], 1)]);
        }
        let key = (lambda.clone(), blocks.to_vec());
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let d = lambda.size();
        let k = blocks[0];
        let mut pairs: HashMap<(Partition, Partition), u64> = HashMap::new();
        if lambda.parts().iter().all(|&a| a == 1) {
            pairs.insert((Partition::column(k), Partition::column(d - k)), subspace_count(d, k, self.p));
        } else {
            let n = FFMatrix::jordan(lambda.parts(), self.p).sub(&FFMatrix::identity(d, self.p));
            let pw = powers(&n);
            let partial: Vec<HashMap<(Partition, Partition), u64>> = subsets(d, k)
                .par_iter()
                .map(|piv| {
                    let mut local = HashMap::new();
                    stable_with_pivots(&n, k, piv, &mut |rows| {
                        *local.entry(sub_and_quotient_types(&pw, rows)).or_insert(0) += 1;
                    });
                    local
                })
                .collect();
            for m in partial {
                for (key, c) in m {
                    *pairs.entry(key).or_insert(0) += c;
                }
            }
        }
        let mut out = Column::new();
        for ((mu, nu), c) in pairs {
            for (rest, c2) in self.column(&nu, &blocks[1..]) {
                let mut label = vec![mu.clone()];
                label.extend(rest);
                *out.entry(label).or_insert(0) += c * c2;
            }
        }
        self.memo.insert(key, out.clone());
        out
    }
}

/// `Q̃(v, J_λ)` for all Levi types `v` of the block composition, in `GL_n(p)`.
/// Unipotent classes of `GL_n` are real, so `v^{-1}` has the type of `v`.
pub fn gl_flag_column(lambda: &Partition, blocks: &[usize], p: u32) -> HashMap<Vec<Partition>, u64> {
    GlCounter { p, memo: HashMap::new() }.column(lambda, blocks)
}

/// Visits every `x`-stable partial flag of the given block type. The callback
/// receives the diagonal blocks of `g^{-1} x g` for a flag basis `g` and `det g`.
pub fn for_each_stable_flag(x: &FFMatrix, blocks: &[usize], f: &mut dyn FnMut(&[FFMatrix], u32)) {
    fn go(x: &FFMatrix, blocks: &[usize], det: u32, acc: &mut Vec<FFMatrix>, f: &mut dyn FnMut(&[FFMatrix], u32)) {
        if blocks.len() == 1 {
            acc.push(x.clone());
            f(acc, det);
            acc.pop();
            return;
        }
        let (d, p) = (x.n, x.p);
        let k = blocks[0];
        let n = x.sub(&FFMatrix::identity(d, p));
        for w in stable_subspaces(&n, k) {
            let mut cols: Vec<Vec<u32>> = w.clone();
            for c in 0..d {
                if !w.iter().any(|r| r[c] != 0 && r[..c].iter().all(|&e| e == 0)) {
                    let mut e = vec![0u32; d];
                    e[c] = 1;
                    cols.push(e);
                }
            }
            let g = FFMatrix::from_columns(&cols, p);
            let y = x.conjugate_by(&g);
            acc.push(y.block(0, k));
            let det2 = (det as u64 * g.det() as u64 % p as u64) as u32;
            go(&y.block(k, d), &blocks[1..], det2, acc, f);
            acc.pop();
        }
    }
    go(x, blocks, 1, &mut Vec::new(), f);
}

/// Number of complete flags fixed by `u`, by explicit enumeration.
pub fn flag_fix_count(u: &FFMatrix) -> u64 {
    let mut count = 0;
    for_each_stable_flag(u, &vec![1; u.n], &mut |_, _| count += 1);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts() {
        assert_eq!(subspace_count(2, 1, 2), 3);
        assert_eq!(subspace_count(4, 2, 3), 130);
        let zero = FFMatrix::zero(3, 3);
        assert_eq!(stable_subspaces(&zero, 1).len(), 13);
    }

    #[test]
    fn fixed_complete_flags() {
        assert_eq!(flag_fix_count(&FFMatrix::identity(2, 2)), 3);
        for n in 1..=4 {
            assert_eq!(flag_fix_count(&FFMatrix::jordan(&[n], 3)), 1);
        }
        assert_eq!(flag_fix_count(&FFMatrix::jordan(&[2, 1], 2)), 5);
    }

    #[test]
    fn memoized_and_explicit_counts_agree() {
        for p in [2u32, 3] {
            for lambda in crate::partitions::partitions_of(4) {
                for blocks in [vec![2, 2], vec![1, 2, 1], vec![3, 1]] {
                    let memo = gl_flag_column(&lambda, &blocks, p);
                    let mut explicit: HashMap<Vec<Partition>, u64> = HashMap::new();
                    let x = FFMatrix::jordan(lambda.parts(), p);
                    for_each_stable_flag(&x, &blocks, &mut |ys, _| {
                        let key = ys.iter().map(|y| super::super::jordan::jordan_type(y).unwrap()).collect();
                        *explicit.entry(key).or_insert(0) += 1;
                    });
                    assert_eq!(memo, explicit, "{lambda} {blocks:?} p={p}");
                }
            }
        }
    }
}
