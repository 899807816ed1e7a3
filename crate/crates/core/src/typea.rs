//! Group data for `GL_n(q)` and its `F`-stable Levi subgroups.
//!
//! A Levi subgroup is `Π GL_{m_i}(q^{k_i}) × (q-1)^{deficit}`. The same type
//! also describes a Levi used as the ambient group of a smaller Levi; the
//! embedding between two descriptors is found by [`embed`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::partitions::green_polynomial;
use crate::partitions::{partitions_of, MultiPartition, Partition};
use crate::qpoly::{q_power_minus_one, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeAError {
    #[error("malformed descriptor {0:?}")]
    Malformed(String),
    #[error("factors of {levi} do not fit in GL{n}")]
    TooLarge { levi: String, n: usize },
    #[error("{levi} is not a Levi subgroup of {ambient}")]
    NotEmbeddable { levi: String, ambient: String },
}

/// `GL_m(q^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub m: usize,
    pub k: usize,
}

/// An `F`-stable Levi subgroup of `GL_n`, up to conjugacy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeviDescriptor {
    pub ambient_n: usize,
    /// Factors in the order given; the deficit `n - Σ m k` is a split torus.
    pub factors: Vec<Factor>,
}

impl LeviDescriptor {
    pub fn new(ambient_n: usize, factors: Vec<Factor>) -> Result<Self, TypeAError> {
        let d = Self { ambient_n, factors };
        if d.factors.iter().any(|f| f.m == 0 || f.k == 0) || d.used() > ambient_n {
            return Err(TypeAError::TooLarge { levi: d.factor_string(), n: ambient_n });
        }
        Ok(d)
    }

    /// `GL_n` itself.
    pub fn gl(n: usize) -> Self {
        Self { ambient_n: n, factors: vec![Factor { m: n, k: 1 }] }
    }

    /// Split Levi with the given block sizes.
    pub fn split(blocks: &[usize]) -> Self {
        Self { ambient_n: blocks.iter().sum(), factors: blocks.iter().map(|&m| Factor { m, k: 1 }).collect() }
    }

    fn used(&self) -> usize {
        self.factors.iter().map(|f| f.m * f.k).sum()
    }

    pub fn deficit(&self) -> usize {
        self.ambient_n - self.used()
    }

    /// Factors with the deficit written out as `GL_1(q)` factors.
    pub fn full_factors(&self) -> Vec<Factor> {
        let mut v = self.factors.clone();
        v.extend(std::iter::repeat(Factor { m: 1, k: 1 }).take(self.deficit()));
        v
    }

    pub fn is_split(&self) -> bool {
        self.factors.iter().all(|f| f.k == 1)
    }

    pub fn is_gl(&self) -> bool {
        self.factors == [Factor { m: self.ambient_n, k: 1 }]
    }

    /// `F_q`-rank: `m` per factor, one per torus factor.
    pub fn rank(&self) -> usize {
        self.full_factors().iter().map(|f| f.m).sum()
    }

    /// Block sizes of a split Levi, `None` if twisted.
    pub fn blocks(&self) -> Option<Vec<usize>> {
        self.is_split().then(|| self.full_factors().iter().map(|f| f.m).collect())
    }

    fn factor_string(&self) -> String {
        let s: Vec<String> = self.factors.iter().map(|f| format!("{}@{}", f.m, f.k)).collect();
        s.join(",")
    }

    /// All Levi subgroups of `GL_n` up to conjugacy, `GL_n` itself included.
    pub fn all_levis(n: usize) -> Vec<Self> {
        // multisets of (m, k) with Σ m k = n; GL_1(q) factors go to the deficit
        fn rec(rest: usize, max: Factor, cur: &mut Vec<Factor>, out: &mut Vec<Vec<Factor>>) {
            if rest == 0 {
                out.push(cur.clone());
                return;
            }
            for m in (1..=rest).rev() {
                for k in (1..=rest / m).rev() {
                    let f = Factor { m, k };
                    if f > max {
                        continue;
                    }
                    cur.push(f);
                    rec(rest - m * k, f, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(n, Factor { m: n, k: n }, &mut Vec::new(), &mut out);
        out.into_iter()
            .map(|fs| Self { ambient_n: n, factors: fs.into_iter().filter(|f| *f != Factor { m: 1, k: 1 }).collect() })
            .collect()
    }

    pub fn parse(s: &str) -> Result<Self, TypeAError> {
        s.parse()
    }
}

fn gl_order_p_prime(m: usize, k: usize) -> Polynomial {
    (1..=m).map(|j| q_power_minus_one(k * j)).product()
}

/// `|L^F|`.
pub fn group_order(l: &LeviDescriptor) -> Polynomial {
    l.full_factors()
        .iter()
        .map(|f| {
            Polynomial::monomial(Rational::from_integer(1.into()), f.k * f.m * (f.m - 1) / 2)
                * gl_order_p_prime(f.m, f.k)
        })
        .product()
}

/// `|L^F|_{p'}`.
pub fn group_order_p_prime(l: &LeviDescriptor) -> Polynomial {
    l.full_factors().iter().map(|f| gl_order_p_prime(f.m, f.k)).product()
}

/// `ε_G ε_L = (-1)^{rank G - rank L}`.
pub fn epsilon_product(g: &LeviDescriptor, l: &LeviDescriptor) -> i64 {
    if (g.rank() + l.rank()) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Assignment of each factor of `L` (full list) to a factor of `G` (full list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub assignment: Vec<usize>,
}

/// Finds how `L` sits in `G`: a factor `GL_m(q^k)` of `L` lies in `GL_{m'}(q^{k'})` of `G`
/// when `k' | k`, and the assigned factors fill each `m'` exactly.
pub fn embed(g: &LeviDescriptor, l: &LeviDescriptor) -> Result<Embedding, TypeAError> {
    let err = || TypeAError::NotEmbeddable { levi: l.to_string(), ambient: g.to_string() };
    if g.ambient_n != l.ambient_n {
        return Err(err());
    }
    let gf = g.full_factors();
    let lf = l.full_factors();
    fn rec(i: usize, lf: &[Factor], gf: &[Factor], room: &mut [usize], out: &mut Vec<usize>) -> bool {
        if i == lf.len() {
            return room.iter().all(|&r| r == 0);
        }
        for (j, g) in gf.iter().enumerate() {
            let f = lf[i];
            if f.k % g.k != 0 {
                continue;
            }
            let need = f.m * (f.k / g.k);
            if need > room[j] {
                continue;
            }
            room[j] -= need;
            out.push(j);
            if rec(i + 1, lf, gf, room, out) {
                return true;
            }
            out.pop();
            room[j] += need;
        }
        false
    }
    let mut room: Vec<usize> = gf.iter().map(|f| f.m).collect();
    let mut assignment = Vec::new();
    if rec(0, &lf, &gf, &mut room, &mut assignment) {
        Ok(Embedding { assignment })
    } else {
        Err(err())
    }
}

impl Embedding {
    /// Label of the `G`-class obtained from `L`-torus data or `L`-class data by a per-factor rule.
    fn per_g_factor(
        &self,
        g: &LeviDescriptor,
        l: &LeviDescriptor,
        labels: &[Partition],
        combine: impl Fn(Partition, &Partition, usize) -> Partition,
    ) -> MultiPartition {
        let gf = g.full_factors();
        let lf = l.full_factors();
        let mut out = vec![Partition::empty(); gf.len()];
        for (i, &j) in self.assignment.iter().enumerate() {
            out[j] = combine(std::mem::take(&mut out[j]), &labels[i], lf[i].k / gf[j].k);
        }
        MultiPartition(out)
    }

    /// `G`-torus class containing an `L`-torus class: cycles scaled by the relative degree.
    pub fn torus_to_g(&self, g: &LeviDescriptor, l: &LeviDescriptor, rho: &MultiPartition) -> MultiPartition {
        self.per_g_factor(g, l, rho.factors(), |acc, p, r| acc.union(&p.scale(r)))
    }

    /// `G`-class of an `L`-class (same element, bigger group): parts repeated by the relative degree.
    pub fn class_to_g(&self, g: &LeviDescriptor, l: &LeviDescriptor, v: &MultiPartition) -> MultiPartition {
        self.per_g_factor(g, l, v.factors(), |acc, p, r| acc.union(&p.repeat(r)))
    }

    /// Lusztig–Spaltenstein induced class: `r` copies of each part added componentwise.
    pub fn induced_class(&self, g: &LeviDescriptor, l: &LeviDescriptor, v: &MultiPartition) -> MultiPartition {
        self.per_g_factor(g, l, v.factors(), |acc, p, r| (0..r).fold(acc, |a, _| a.add(p)))
    }
}

/// Jordan type over `F_q` of a class of `L`: parts of each factor repeated `k` times.
pub fn ambient_jordan(l: &LeviDescriptor, v: &MultiPartition) -> Partition {
    l.full_factors().iter().zip(v.factors()).fold(Partition::empty(), |acc, (f, p)| acc.union(&p.repeat(f.k)))
}

/// Unipotent class of `L^F` with its sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentClass {
    pub label: MultiPartition,
    pub ambient_jordan: Partition,
    pub centralizer_order: Polynomial,
    pub class_size: Polynomial,
}

/// `|C_{GL_m(Q)}(u_λ)|` with `Q = q^k`.
pub fn gl_centralizer_order(lambda: &Partition, k: usize) -> Polynomial {
    let conj = lambda.conjugate();
    let mult = lambda.multiplicities();
    let sq: usize = conj.parts().iter().map(|c| c * c).sum();
    let sub: usize = mult.iter().map(|m| m * (m + 1) / 2).sum();
    let qpart = Polynomial::monomial(Rational::from_integer(1.into()), k * (sq - sub));
    mult.iter().skip(1).fold(qpart, |acc, &m| acc * gl_order_p_prime(m, k))
}

/// One class per multipartition of the full factor list, last factor varying fastest.
pub fn unipotent_classes(l: &LeviDescriptor) -> Vec<UnipotentClass> {
    let full = l.full_factors();
    let sizes: Vec<usize> = full.iter().map(|f| f.m).collect();
    let order = group_order(l);
    MultiPartition::all(&sizes)
        .into_iter()
        .map(|label| {
            let centralizer_order: Polynomial =
                full.iter().zip(label.factors()).map(|(f, p)| gl_centralizer_order(p, f.k)).product();
            let class_size = order.exact_div(&centralizer_order).expect("centralizer order divides the group order");
            UnipotentClass { ambient_jordan: ambient_jordan(l, &label), label, centralizer_order, class_size }
        })
        .collect()
}

/// `L^F`-class of `F`-stable maximal tori.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusClass {
    /// Cycle type per factor.
    pub cycles: MultiPartition,
    pub order: Polynomial,
    /// `|C_{W_L}(w)|`.
    pub f_centralizer_order: u128,
}

pub fn torus_classes(l: &LeviDescriptor) -> Vec<TorusClass> {
    let full = l.full_factors();
    let sizes: Vec<usize> = full.iter().map(|f| f.m).collect();
    MultiPartition::all(&sizes)
        .into_iter()
        .map(|cycles| {
            let order = full
                .iter()
                .zip(cycles.factors())
                .flat_map(|(f, rho)| rho.parts().iter().map(move |&r| q_power_minus_one(f.k * r)))
                .product();
            let f_centralizer_order = cycles.factors().iter().map(Partition::z).product();
            TorusClass { cycles, order, f_centralizer_order }
        })
        .collect()
}

/// `|W_L|`.
pub fn weyl_order(l: &LeviDescriptor) -> u128 {
    l.full_factors().iter().map(|f| (1..=f.m as u128).product::<u128>()).product()
}

/// `R_{T_ρ}^L(1)(v)`: product of Green polynomials in `q^k` over the factors.
pub fn ordinary_green_value(l: &LeviDescriptor, rho: &MultiPartition, v: &MultiPartition) -> Polynomial {
    l.full_factors()
        .iter()
        .zip(rho.factors().iter().zip(v.factors()))
        .map(|(f, (r, lam))| green_polynomial(lam, r).expect("factor sizes agree").substitute_power(f.k))
        .product()
}

/// Rows = torus classes, columns = unipotent classes, both in their canonical order.
pub fn ordinary_green_table(l: &LeviDescriptor) -> Vec<Vec<Polynomial>> {
    let classes = unipotent_classes(l);
    torus_classes(l)
        .iter()
        .map(|t| classes.iter().map(|c| ordinary_green_value(l, &t.cycles, &c.label)).collect())
        .collect()
}

impl fmt::Display for LeviDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_gl() {
            write!(f, "GL{}", self.ambient_n)
        } else {
            write!(f, "GL{} / {}", self.ambient_n, self.factor_string())
        }
    }
}

impl FromStr for LeviDescriptor {
    type Err = TypeAError;

    /// `"GL4"`, `"GL4 / 2@1,1@2"`; a factor without `@k` is split.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TypeAError::Malformed(s.to_string());
        let (amb, levi) = match s.split_once('/') {
            Some((a, l)) => (a.trim(), Some(l.trim())),
            None => (s.trim(), None),
        };
        let n: usize = amb.strip_prefix("GL").and_then(|x| x.trim().parse().ok()).filter(|&n| n > 0).ok_or_else(bad)?;
        match levi {
            None => Ok(Self::gl(n)),
            Some(l) => Self::new(n, parse_factors(l).ok_or_else(bad)?),
        }
    }
}

/// Parses `"2@1,1@2"` (or `"2,1"`) into factors.
pub fn parse_factors(s: &str) -> Option<Vec<Factor>> {
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let (m, k) = match t.split_once('@') {
                Some((m, k)) => (m.trim().parse().ok()?, k.trim().parse().ok()?),
                None => (t.trim().parse().ok()?, 1),
            };
            (m > 0 && k > 0).then_some(Factor { m, k })
        })
        .collect()
}

/// All unipotent classes of `GL_n`, in the canonical order.
pub fn gl_classes(n: usize) -> Vec<Partition> {
    partitions_of(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{parse_poly, rational};

    fn d(s: &str) -> LeviDescriptor {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_poly(s).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(group_order(&d("GL2")), p("q*P1*P1*P2"));
        assert_eq!(group_order(&d("GL3")).eval_int(2), rational(168, 1));
        assert_eq!(group_order(&d("GL4 / 2@2")), p("q^2*P1*P2*P1*P2*P4"));
        assert_eq!(group_order_p_prime(&d("GL4 / 2@1,1@2")), p("P1*P1*P2*P1*P2"));
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_product(&d("GL4"), &d("GL4 / 2,2")), 1);
        assert_eq!(epsilon_product(&d("GL4"), &d("GL4 / 2@1,1@2")), -1);
        assert_eq!(epsilon_product(&d("GL4"), &d("GL4 / 2@2")), 1);
    }

    #[test]
    fn class_examples() {
        let c = unipotent_classes(&d("GL2"));
        assert_eq!(c.len(), 2);
        assert!(c[0].class_size.is_one());
        assert_eq!(c[1].class_size, p("P1*P2"));
        assert_eq!(unipotent_classes(&d("GL3 / 2,1")).len(), 2);
        let t = unipotent_classes(&d("GL1 / 1"));
        assert_eq!(t.len(), 1);
        assert!(t[0].class_size.is_one());
        let l3 = unipotent_classes(&d("GL4 / 2@2"));
        assert_eq!(l3[1].ambient_jordan, "2,2".parse().unwrap());
    }

    #[test]
    fn steinberg_count_of_unipotents() {
        for n in 1..=6 {
            let total: Polynomial = unipotent_classes(&LeviDescriptor::gl(n)).into_iter().map(|c| c.class_size).sum();
            assert_eq!(total, Polynomial::monomial(rational(1, 1), n * (n - 1)), "n = {n}");
        }
        for n in 1..=5 {
            for l in LeviDescriptor::all_levis(n) {
                let total: Polynomial = unipotent_classes(&l).into_iter().map(|c| c.class_size).sum();
                let dim_u: usize = l.full_factors().iter().map(|f| f.k * f.m * (f.m - 1)).sum();
                assert_eq!(total, Polynomial::monomial(rational(1, 1), dim_u), "{l}");
            }
        }
    }

    #[test]
    fn torus_examples() {
        let t = torus_classes(&d("GL3"));
        let orders: Vec<_> = t.iter().map(|c| c.order.clone()).collect();
        assert_eq!(orders, [p("P1^3"), p("P1*P1*P2"), p("q^3-1")]);
        let cents: Vec<_> = t.iter().map(|c| c.f_centralizer_order).collect();
        assert_eq!(cents, [6, 2, 3]);
        let t2 = torus_classes(&d("GL4 / 2@2"));
        assert_eq!(t2[0].order, p("(q^2-1)^2"));
        assert_eq!(t2[1].order, p("q^4-1"));
        assert_eq!(torus_classes(&d("GL3 / ")).len(), 1);
        assert_eq!(torus_classes(&d("GL3 / "))[0].order, p("P1^3"));
        for n in 1..=5 {
            for l in LeviDescriptor::all_levis(n) {
                let w = weyl_order(&l);
                let s: u128 = torus_classes(&l).iter().map(|t| w / t.f_centralizer_order).sum();
                assert_eq!(s, w, "{l}");
            }
        }
    }

    #[test]
    fn green_table_examples() {
        let t = ordinary_green_table(&d("GL2"));
        assert_eq!(t[0], vec![p("q+1"), p("1")]);
        assert_eq!(t[1], vec![p("1-q"), p("1")]);
        let t2 = ordinary_green_table(&d("GL4 / 2@2"));
        assert_eq!(t2[0], vec![p("q^2+1"), p("1")]);
        assert_eq!(t2[1], vec![p("1-q^2"), p("1")]);
    }

    #[test]
    fn green_rows_regular_and_identity() {
        for n in 1..=5 {
            for l in LeviDescriptor::all_levis(n) {
                let classes = unipotent_classes(&l);
                let table = ordinary_green_table(&l);
                let order = group_order_p_prime(&l);
                for (t, row) in torus_classes(&l).iter().zip(&table) {
                    assert!(row.last().unwrap().is_one());
                    let eps = if (l.rank() + t.cycles.factors().iter().map(Partition::len).sum::<usize>()) % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    let expected = order.exact_div(&t.order).unwrap().scale(&rational(eps, 1));
                    assert_eq!(row[0], expected, "{l} {:?}", t.cycles);
                }
                assert_eq!(classes.len(), table.len());
            }
        }
    }

    #[test]
    fn index_polynomial() {
        for n in 1..=5 {
            let g = LeviDescriptor::gl(n);
            for l in LeviDescriptor::all_levis(n) {
                assert!(group_order_p_prime(&l).divides(&group_order_p_prime(&g)), "{l}");
                embed(&g, &l).unwrap();
            }
        }
    }

    #[test]
    fn levi_enumeration_and_embedding() {
        let names: Vec<String> = LeviDescriptor::all_levis(3).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["GL3", "GL3 / 2@1", "GL3 / 1@3", "GL3 / 1@2", "GL3 / "]);
        assert_eq!(LeviDescriptor::all_levis(4).len(), 11);
        let m = d("GL4 / 2,1,1");
        assert!(embed(&m, &d("GL4 / ")).is_ok());
        assert!(embed(&m, &d("GL4 / 1@2")).is_ok());
        assert!(embed(&m, &d("GL4 / 3")).is_err());
        assert!(embed(&d("GL4 / 2@2"), &d("GL4 / 1@4")).is_ok());
        assert!(embed(&d("GL4 / 2@2"), &d("GL4 / 1@2,1@2")).is_ok());
        assert!(embed(&d("GL4 / 2@2"), &d("GL4 / 2,1")).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(d("GL4 / 2@1,2@1"), LeviDescriptor::split(&[2, 2]));
        assert_eq!(d("GL4 / 2@1,1@2").deficit(), 0);
        assert!("GL4 / 3@2".parse::<LeviDescriptor>().is_err());
        assert!("SL4".parse::<LeviDescriptor>().is_err());
        assert!("GL4 / 0@1".parse::<LeviDescriptor>().is_err());
        assert_eq!(d("GL3 / 2").to_string(), "GL3 / 2@1");
    }

    #[test]
    fn induced_and_torus_maps() {
        let g = d("GL4");
        let l = d("GL4 / 2@2");
        let e = embed(&g, &l).unwrap();
        let v = MultiPartition::parse("2").unwrap();
        assert_eq!(e.induced_class(&g, &l, &v).to_string(), "4");
        assert_eq!(e.class_to_g(&g, &l, &v).to_string(), "2,2");
        let rho = MultiPartition::parse("1,1").unwrap();
        assert_eq!(e.torus_to_g(&g, &l, &rho).to_string(), "2,2");
    }
}
