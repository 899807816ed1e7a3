//! Partitions, symmetric-group characters and Green polynomials of `GL_n`.

mod characters;
mod green;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use characters::{mn_character, orthogonality_defect};
pub use green::{green_polynomial, green_table, kostka_foulkes, ssyt, GreenPolynomialTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("cannot parse partition {0:?}")]
    Parse(String),
}

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `(n)`, the label of the regular class.
    pub fn row(n: usize) -> Self {
        Self::new(vec![n])
    }

    /// `(1^n)`, the label of the identity.
    pub fn column(n: usize) -> Self {
        Self::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let len = self.part(0);
        Self { parts: (0..len).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect() }
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_statistic(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, p)| i * p).sum()
    }

    /// Multiplicities `m_i` of the part `i`, indexed from 1.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(0) + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// Order of the centralizer in `S_n` of an element of cycle type `self`.
    pub fn z(&self) -> u128 {
        self.multiplicities()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &m)| (i as u128).pow(m as u32) * factorial(m))
            .product()
    }

    /// Sign of a permutation of this cycle type.
    pub fn sign(&self) -> i64 {
        if (self.size() - self.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Each part repeated `k` times, the Jordan type over `F_q` of a class of `GL_m(q^k)`.
    pub fn repeat(&self, k: usize) -> Self {
        Self::new(self.parts.iter().flat_map(|&p| std::iter::repeat(p).take(k)).collect())
    }

    /// Componentwise sum of parts.
    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        Self::new((0..len).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.parts.iter().chain(&other.parts).copied().collect())
    }

    /// Parts scaled by `k`.
    pub fn scale(&self, k: usize) -> Self {
        Self::new(self.parts.iter().map(|p| p * k).collect())
    }

    pub fn dominance_leq(&self, other: &Self) -> Result<bool, PartitionError> {
        dominance_leq(self, other)
    }
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

/// `λ ⊴ μ` in dominance order.
pub fn dominance_leq(lambda: &Partition, mu: &Partition) -> Result<bool, PartitionError> {
    if lambda.size() != mu.size() {
        return Err(PartitionError::SizeMismatch(lambda.size(), mu.size()));
    }
    let (mut a, mut b) = (0, 0);
    for i in 0..lambda.len().max(mu.len()) {
        a += lambda.part(i);
        b += mu.part(i);
        if a > b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lusztig–Spaltenstein induced label: each `(μ, k)` contributes `k` copies of `μ`,
/// and the copies are added componentwise.
pub fn induced_partition(factors: &[(Partition, usize)], ambient_n: usize) -> Result<Partition, PartitionError> {
    let total: usize = factors.iter().map(|(p, k)| p.size() * k).sum();
    if total != ambient_n {
        return Err(PartitionError::SizeMismatch(total, ambient_n));
    }
    Ok(factors.iter().flat_map(|(p, k)| std::iter::repeat(p).take(*k)).fold(Partition::empty(), |acc, p| acc.add(p)))
}

/// All partitions of `n`, lexicographically increasing: `1^n` first and `(n)` last.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

impl Ord for Partition {
    /// Lexicographic on the parts.
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        f.write_str(&s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Accepts `"3,1,1"`; `"0"` and `""` give the empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::Parse(s.to_string()));
        }
        Ok(Self { parts })
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Partition {
    type Error = PartitionError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// One partition per factor of a Levi subgroup.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiPartition(pub Vec<Partition>);

impl MultiPartition {
    pub fn factors(&self) -> &[Partition] {
        &self.0
    }

    /// All multipartitions with the given factor sizes, lexicographic with the last factor varying fastest.
    pub fn all(sizes: &[usize]) -> Vec<MultiPartition> {
        let mut out = vec![MultiPartition(Vec::new())];
        for &n in sizes {
            let ps = partitions_of(n);
            out = out
                .into_iter()
                .flat_map(|mp| {
                    ps.iter().map(move |p| {
                        let mut v = mp.0.clone();
                        v.push(p.clone());
                        MultiPartition(v)
                    })
                })
                .collect();
        }
        out
    }

    /// Parses `"2,1;2"`; an `@k` suffix on a group is accepted and dropped.
    pub fn parse(s: &str) -> Result<Self, PartitionError> {
        Ok(Self(parse_labelled(s)?.into_iter().map(|(p, _)| p).collect()))
    }
}

/// Parses `"2,1;2@2"` into `[((2,1), 1), ((2), 2)]`.
pub fn parse_labelled(s: &str) -> Result<Vec<(Partition, usize)>, PartitionError> {
    s.split(';')
        .map(|g| {
            let (p, k) = match g.split_once('@') {
                Some((p, k)) => (
                    p,
                    k.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&k| k > 0)
                        .ok_or_else(|| PartitionError::Parse(g.to_string()))?,
                ),
                None => (g, 1),
            };
            Ok((p.parse()?, k))
        })
        .collect()
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&s.join(";"))
    }
}

impl fmt::Debug for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p("2,1,1"), &p("2,2")).unwrap());
        assert!(!dominance_leq(&p("2,2,2"), &p("3,1,1,1")).unwrap());
        assert!(!dominance_leq(&p("3,1,1,1"), &p("2,2,2")).unwrap());
        assert!(dominance_leq(&p("3,2"), &p("3,2")).unwrap());
        assert_eq!(dominance_leq(&p("2"), &p("2,1")), Err(PartitionError::SizeMismatch(2, 3)));
    }

    #[test]
    fn induced_examples() {
        assert_eq!(induced_partition(&[(p("2,1"), 1), (p("2"), 1)], 5).unwrap(), p("4,1"));
        assert_eq!(induced_partition(&[(p("1,1"), 1), (p("1,1"), 1)], 4).unwrap(), p("2,2"));
        assert_eq!(induced_partition(&[(p("2"), 2)], 4).unwrap(), p("4"));
        assert!(induced_partition(&[(p("2"), 1)], 3).is_err());
        // one node added to the first part
        assert_eq!(induced_partition(&[(p("2,2,1"), 1), (p("1"), 1)], 6).unwrap(), p("3,2,1"));
    }

    #[test]
    fn ordering_and_counts() {
        let ps = partitions_of(4);
        let labels: Vec<String> = ps.iter().map(ToString::to_string).collect();
        assert_eq!(labels, ["1,1,1,1", "2,1,1", "2,2", "3,1", "4"]);
        let counts: Vec<usize> = (0..=8).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22]);
        let mps = MultiPartition::all(&[3, 2]);
        let labels: Vec<String> = mps.iter().map(ToString::to_string).collect();
        assert_eq!(labels, ["1,1,1;1,1", "1,1,1;2", "2,1;1,1", "2,1;2", "3;1,1", "3;2"]);
    }

    #[test]
    fn conjugate_and_statistics() {
        for n in 0..=8 {
            for lam in partitions_of(n) {
                assert_eq!(lam.conjugate().conjugate(), lam);
            }
        }
        assert_eq!(p("3,1").conjugate(), p("2,1,1"));
        assert_eq!(p("2,1,1").n_statistic(), 3);
        assert_eq!(p("2,1").z(), 2);
        assert_eq!(p("1,1,1").z(), 6);
        let total: f64 = partitions_of(6).iter().map(|r| 1.0 / r.z() as f64).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(p("3,1,1").parts(), &[3, 1, 1]);
        assert!("1,3".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert_eq!(p("0"), Partition::empty());
        assert_eq!(parse_labelled("2,1;2@2").unwrap(), vec![(p("2,1"), 1), (p("2"), 2)]);
        assert_eq!(MultiPartition::parse("2,1;2").unwrap().to_string(), "2,1;2");
        assert!(parse_labelled("2@0").is_err());
    }
}
