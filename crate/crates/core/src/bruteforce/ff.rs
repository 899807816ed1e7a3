//! Dense matrices over a prime field `F_p`.

use std::fmt;

use rand::Rng;

/// Square matrix over `F_p`, row-major, entries in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFMatrix {
    pub n: usize,
    pub p: u32,
    a: Vec<u32>,
}

pub fn inv_mod(x: u32, p: u32) -> u32 {
    assert!(x % p != 0, "zero has no inverse mod {p}");
    pow_mod(x, p - 2, p)
}

pub fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut r: u64 = 1;
    let mut b64 = (b % p) as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b64 % p as u64;
        }
        b64 = b64 * b64 % p as u64;
        e >>= 1;
    }
    b = r as u32;
    b
}

/// Smallest generator of `F_p^*`.
pub fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&f| pow_mod(g, n / f, p) != 1)).expect("prime fields have primitive roots")
}

/// Discrete logarithm of `x` to the base `g` by exhaustive search (`p` is small).
pub fn dlog(x: u32, g: u32, p: u32) -> u32 {
    let x = x % p;
    let mut acc = 1u32;
    for e in 0..p - 1 {
        if acc == x {
            return e;
        }
        acc = (acc as u64 * g as u64 % p as u64) as u32;
    }
    panic!("{x} is not a power of {g} mod {p}");
}

impl FFMatrix {
    pub fn zero(n: usize, p: u32) -> Self {
        Self { n, p, a: vec![0; n * n] }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zero(n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], p: u32) -> Self {
        let n = rows.len();
        let mut m = Self::zero(n, p);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x.rem_euclid(p as i64) as u32);
            }
        }
        m
    }

    /// Unipotent Jordan matrix `J_λ`: blocks in the given order, ones on the superdiagonal.
    pub fn jordan(parts: &[usize], p: u32) -> Self {
        let n = parts.iter().sum();
        let mut m = Self::identity(n, p);
        let mut start = 0;
        for &b in parts {
            for i in start..start + b - 1 {
                m.set(i, i + 1, 1);
            }
            start += b;
        }
        m
    }

    pub fn diagonal(d: &[u32], p: u32) -> Self {
        let mut m = Self::zero(d.len(), p);
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x % p);
        }
        m
    }

    pub fn random<R: Rng>(n: usize, p: u32, rng: &mut R) -> Self {
        Self { n, p, a: (0..n * n).map(|_| rng.gen_range(0..p)).collect() }
    }

    pub fn random_invertible<R: Rng>(n: usize, p: u32, rng: &mut R) -> Self {
        loop {
            let m = Self::random(n, p, rng);
            if m.det() != 0 {
                return m;
            }
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.a[i * self.n + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(cols: &[Vec<u32>], p: u32) -> Self {
        let n = cols.len();
        let mut m = Self::zero(n, p);
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, p) = (self.n, self.p as u64);
        let mut r = Self::zero(n, self.p);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k) as u64;
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = (r.get(i, j) as u64 + x * other.get(k, j) as u64) % p;
                    r.set(i, j, v as u32);
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u64 * v[j] as u64).sum::<u64>().rem_euclid(p) as u32)
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        Self { n: self.n, p, a: self.a.iter().zip(&other.a).map(|(x, y)| (x + p - y) % p).collect() }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.n, self.p), |acc, _| acc.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.p)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<u32>> = (0..self.n).map(|i| self.a[i * self.n..(i + 1) * self.n].to_vec()).collect();
        rank_of_rows(rows, self.p)
    }

    pub fn det(&self) -> u32 {
        let (n, p) = (self.n, self.p as u64);
        let mut m: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j) as u64).collect()).collect();
        let mut det: u64 = 1;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
            if r != c {
                m.swap(r, c);
                det = (p - det) % p;
            }
            det = det * m[c][c] % p;
            let inv = inv_mod(m[c][c] as u32, self.p) as u64;
            for r in c + 1..n {
                let f = m[r][c] * inv % p;
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    m[r][j] = (m[r][j] + p * p - f * m[c][j]) % p;
                }
            }
        }
        det as u32
    }

    pub fn inverse(&self) -> Option<Self> {
        let (n, p) = (self.n, self.p as u64);
        let mut m: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row: Vec<u64> = (0..n).map(|j| self.get(i, j) as u64).collect();
                row.extend((0..n).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        for c in 0..n {
            let r = (c..n).find(|&r| m[r][c] != 0)?;
            m.swap(r, c);
            let inv = inv_mod(m[c][c] as u32, self.p) as u64;
            for x in m[c].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..n {
                if r == c || m[r][c] == 0 {
                    continue;
                }
                let f = m[r][c];
                for j in 0..2 * n {
                    m[r][j] = (m[r][j] + p * p - f * m[c][j]) % p;
                }
            }
        }
        let mut out = Self::zero(n, self.p);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, m[i][n + j] as u32);
            }
        }
        Some(out)
    }

    /// `g^{-1} x g`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.inverse().expect("invertible conjugator").mul(self).mul(g)
    }

    /// Square block `[lo, hi)`.
    pub fn block(&self, lo: usize, hi: usize) -> Self {
        let mut b = Self::zero(hi - lo, self.p);
        for i in lo..hi {
            for j in lo..hi {
                b.set(i - lo, j - lo, self.get(i, j));
            }
        }
        b
    }

    pub fn block_diagonal(blocks: &[Self], p: u32) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zero(n, p);
        let mut o = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(o + i, o + j, b.get(i, j));
                }
            }
            o += b.n;
        }
        m
    }
}

impl fmt::Debug for FFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[", self.p)?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Rank of a list of row vectors.
pub fn rank_of_rows(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let p64 = p as u64;
    let mut rank = 0;
    for c in 0..width {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, r);
        let inv = inv_mod(rows[rank][c], p) as u64;
        for rr in rank + 1..rows.len() {
            let f = rows[rr][c] as u64 * inv % p64;
            if f == 0 {
                continue;
            }
            for j in c..width {
                rows[rr][j] = ((rows[rr][j] as u64 + p64 * p64 - f * rows[rank][j] as u64) % p64) as u32;
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of the nullspace `{x : A x = 0}` of a `rows × cols` system.
pub fn nullspace(a: &[Vec<u32>], cols: usize, p: u32) -> Vec<Vec<u32>> {
    let p64 = p as u64;
    let mut m: Vec<Vec<u32>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p) as u64;
        for x in m[r].iter_mut() {
            *x = (*x as u64 * inv % p64) as u32;
        }
        for i in 0..m.len() {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let f = m[i][c] as u64;
            for j in 0..cols {
                m[i][j] = ((m[i][j] as u64 + p64 * p64 - f * m[r][j] as u64) % p64) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; cols];
            x[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - m[i][f]) % p;
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_helpers() {
        assert_eq!(inv_mod(3, 7), 5);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(17), 3);
        assert_eq!(dlog(6, 3, 7), 3);
    }

    #[test]
    fn inverse_det_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2, 3, 5, 7] {
            for n in 1..=5 {
                let g = FFMatrix::random_invertible(n, p, &mut rng);
                let gi = g.inverse().unwrap();
                assert!(g.mul(&gi).is_identity());
                assert_eq!(g.rank(), n);
                let h = FFMatrix::random(n, p, &mut rng);
                assert_eq!(g.mul(&h).det(), (g.det() as u64 * h.det() as u64 % p as u64) as u32);
            }
        }
        let j = FFMatrix::jordan(&[3, 1], 5);
        assert_eq!(j.sub(&FFMatrix::identity(4, 5)).rank(), 2);
        assert!(FFMatrix::from_rows(&[vec![1, 2], vec![2, 4]], 5).inverse().is_none());
    }

    #[test]
    fn nullspace_of_commutator_system() {
        // [[1,1],[0,1]] commutes with a 2-dimensional algebra
        let p = 5;
        let j = FFMatrix::jordan(&[2], p);
        let mut rows = Vec::new();
        for i in 0..2 {
            for k in 0..2 {
                let mut r = vec![0u32; 4];
                for t in 0..2 {
                    r[i * 2 + t] = (r[i * 2 + t] + j.get(t, k)) % p;
                    r[t * 2 + k] = (r[t * 2 + k] + p - j.get(i, t)) % p;
                }
                rows.push(r);
            }
        }
        assert_eq!(nullspace(&rows, 4, p).len(), 2);
    }
}
