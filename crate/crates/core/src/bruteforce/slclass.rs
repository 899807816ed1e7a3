//! Splitting of unipotent classes in `SL_n(p)` and in its split Levi subgroups
//! `S(GL_{n_1} × ... × GL_{n_r})`.
//!
//! A class of `GL`-type `λ` splits into `s = |F_p^* : D|` classes, where `D` is the
//! determinant image of the `GL`-centralizer of the standard representative
//! `J_λ`. If `x = g J_λ g^{-1}`, the splitting index of `x` is the coset of
//! `det g` in `F_p^* / D`, written as a discrete log modulo `s` with respect to
//! the smallest primitive root. Index 0 is the class of `J_λ` itself, whose
//! superdiagonal parameters are all 1 (a square).

use std::collections::HashMap;
use std::fmt;

use num::integer::gcd;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ff::{dlog, nullspace, pow_mod, primitive_root, FFMatrix};
use super::jordan::jordan_conjugator;
use super::BruteError;
use crate::partitions::{MultiPartition, Partition};

/// Consecutive samples without change of the generated subgroup.
pub const STABLE_SAMPLES: usize = 50;
const MAX_SAMPLES: usize = 20_000;
pub const DEFAULT_SEED: u64 = 0x6772_6565_6e32;

/// Class of a unipotent element in `S(GL_{n_1} × ... × GL_{n_r})`; `r = 1` is `SL_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SLClassLabel {
    pub jordan: MultiPartition,
    pub splitting_index: u32,
}

impl fmt::Display for SLClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.jordan, self.splitting_index)
    }
}

/// Per-prime state: primitive root, sampling RNG and a cache of splitting numbers.
pub struct SlContext {
    pub p: u32,
    pub zeta: u32,
    rng: ChaCha8Rng,
    splits: HashMap<Vec<Partition>, u32>,
}

impl SlContext {
    pub fn new(p: u32, seed: u64) -> Result<Self, BruteError> {
        if p == 2 {
            return Err(BruteError::Unsupported("SL classes need odd p".into()));
        }
        Ok(Self { p, zeta: primitive_root(p), rng: ChaCha8Rng::seed_from_u64(seed), splits: HashMap::new() })
    }

    /// Standard block-diagonal representative `J_{λ_1} ⊕ ... ⊕ J_{λ_r}`.
    pub fn standard(&self, blocks: &[Partition]) -> FFMatrix {
        let mats: Vec<FFMatrix> = blocks.iter().map(|b| FFMatrix::jordan(b.parts(), self.p)).collect();
        FFMatrix::block_diagonal(&mats, self.p)
    }

    /// Representative of the class with the given label: the standard element
    /// conjugated by `diag(ζ^i, 1, ..., 1)`.
    pub fn representative(&self, label: &SLClassLabel) -> FFMatrix {
        let j = self.standard(label.jordan.factors());
        let mut d = vec![1u32; j.n];
        d[0] = pow_mod(self.zeta, label.splitting_index, self.p);
        let g = FFMatrix::diagonal(&d, self.p);
        j.conjugate_by(&g.inverse().expect("diagonal"))
    }

    /// Number `s` of classes into which the `GL`-class of the given type splits.
    pub fn splitting_number(&mut self, blocks: &[Partition]) -> Result<u32, BruteError> {
        if let Some(&s) = self.splits.get(blocks) {
            return Ok(s);
        }
        let s = self.sample_det_image(blocks)?;
        self.splits.insert(blocks.to_vec(), s);
        Ok(s)
    }

    /// Index of the determinant image of the block-diagonal centralizer of the
    /// standard element, by sampling the commutation system.
    fn sample_det_image(&mut self, blocks: &[Partition]) -> Result<u32, BruteError> {
        use rand::Rng;
        let p = self.p;
        let j = self.standard(blocks);
        let n = j.n;
        // unknowns: entries of X inside the diagonal blocks
        let mut owner = vec![0usize; n];
        let mut o = 0;
        for (b, part) in blocks.iter().enumerate() {
            for i in o..o + part.size() {
                owner[i] = b;
            }
            o += part.size();
        }
        let vars: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).filter(|&(i, k)| owner[i] == owner[k]).collect();
        let var_of: HashMap<(usize, usize), usize> = vars.iter().enumerate().map(|(v, &ik)| (ik, v)).collect();
        // (XJ - JX)_{ik} = Σ_t X_{it} J_{tk} - J_{it} X_{tk}
        let mut rows = Vec::new();
        for i in 0..n {
            for k in 0..n {
                let mut r = vec![0u32; vars.len()];
                for t in 0..n {
                    if let Some(&v) = var_of.get(&(i, t)) {
                        r[v] = (r[v] + j.get(t, k)) % p;
                    }
                    if let Some(&v) = var_of.get(&(t, k)) {
                        r[v] = (r[v] + p - j.get(i, t)) % p;
                    }
                }
                rows.push(r);
            }
        }
        let basis = nullspace(&rows, vars.len(), p);
        let order = p - 1;
        let mut g = order;
        let mut stable = 0;
        for _ in 0..MAX_SAMPLES {
            let coeffs: Vec<u32> = basis.iter().map(|_| self.rng.gen_range(0..p)).collect();
            let mut x = FFMatrix::zero(n, p);
            for (c, b) in coeffs.iter().zip(&basis) {
                for (v, &(i, k)) in vars.iter().enumerate() {
                    let val = (x.get(i, k) as u64 + *c as u64 * b[v] as u64) % p as u64;
                    x.set(i, k, val as u32);
                }
            }
            let d = x.det();
            if d == 0 {
                continue;
            }
            let g2 = gcd(g, dlog(d, self.zeta, p));
            if g2 == g {
                stable += 1;
                if stable >= STABLE_SAMPLES {
                    return Ok(g);
                }
            } else {
                g = g2;
                stable = 0;
            }
        }
        Err(BruteError::Unstable(format!("{:?}", blocks)))
    }

    /// Class of the block tuple `(y_1, ..., y_r)` after an extra conjugation of
    /// determinant `extra_det` (see the module docs).
    pub fn class_of_blocks(&mut self, blocks: &[FFMatrix], extra_det: u32) -> Result<SLClassLabel, BruteError> {
        let mut det = extra_det as u64 % self.p as u64;
        let mut types = Vec::with_capacity(blocks.len());
        for y in blocks {
            let (lambda, h) = jordan_conjugator(y)?;
            det = det * h.det() as u64 % self.p as u64;
            types.push(lambda);
        }
        let s = self.splitting_number(&types)?;
        Ok(SLClassLabel { jordan: MultiPartition(types), splitting_index: dlog(det as u32, self.zeta, self.p) % s })
    }

    /// All classes of unipotent elements with the given block sizes, ordered by
    /// Jordan label and then splitting index.
    pub fn classes(&mut self, sizes: &[usize]) -> Result<Vec<SLClassLabel>, BruteError> {
        let mut out = Vec::new();
        for mp in MultiPartition::all(sizes) {
            let s = self.splitting_number(mp.factors())?;
            out.extend((0..s).map(|i| SLClassLabel { jordan: mp.clone(), splitting_index: i }));
        }
        Ok(out)
    }
}

/// Class of `x` in `SL_n(p)`.
pub fn sl_class_of(x: &FFMatrix, ctx: &mut SlContext) -> Result<SLClassLabel, BruteError> {
    if x.det() != 1 {
        return Err(BruteError::NotUnipotent(format!("det ≠ 1: {x:?}")));
    }
    ctx.class_of_blocks(std::slice::from_ref(x), 1)
}
