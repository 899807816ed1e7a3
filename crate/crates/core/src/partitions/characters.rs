use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::{BigRational, Zero};

use super::{partitions_of, Partition, PartitionError};

type Memo = Mutex<HashMap<(Vec<usize>, Vec<usize>), i64>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Irreducible character `χ^λ` of `S_n` at cycle type `ρ` (Murnaghan–Nakayama).
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<i64, PartitionError> {
    if lambda.size() != rho.size() {
        return Err(PartitionError::SizeMismatch(lambda.size(), rho.size()));
    }
    Ok(mn(lambda.parts(), rho.parts()))
}

fn mn(lambda: &[usize], rho: &[usize]) -> i64 {
    if rho.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo().lock().unwrap().get(&key) {
        return v;
    }
    // beta-numbers: removing an r-rim hook moves one bead down by r
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &l)| l + len - 1 - i).collect();
    let r = rho[0];
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let rest: Vec<usize> = nb.iter().enumerate().map(|(j, &x)| x - (len - 1 - j)).filter(|&p| p > 0).collect();
        total += sign * mn(&rest, &rho[1..]);
    }
    memo().lock().unwrap().insert(key, total);
    total
}

/// `Σ_ρ χ^λ(ρ) χ^μ(ρ) / z_ρ - δ_{λμ}` over all pairs; zero exactly when orthogonality holds.
pub fn orthogonality_defect(n: usize) -> BigRational {
    let ps = partitions_of(n);
    let mut defect = BigRational::zero();
    for lam in &ps {
        for mu in &ps {
            let mut s = BigRational::zero();
            for rho in &ps {
                let v = mn(lam.parts(), rho.parts()) * mn(mu.parts(), rho.parts());
                s += BigRational::new(v.into(), rho.z().into());
            }
            if lam == mu {
                s -= BigRational::from_integer(1.into());
            }
            defect += s.clone() * s;
        }
    }
    defect
}
