//! Checks on encoded tables. Every check reports per congruence case.

use std::collections::BTreeMap;

use num::Signed;

use crate::bruteforce::{sl_qtilde_table, Ambient};
use crate::green2::{dm_green2, INTEGRALITY_SAMPLES};
use crate::partitions::MultiPartition;
use crate::qpoly::{Polynomial, Rational};
use crate::report::{CheckResult, Report};
use crate::typea::LeviDescriptor;

use super::merge::{derive_merge, find_ennola_permutation, merge_table, MergeMap};
use super::{ClassRef, Corpus, EncodedTable};

/// `"1^8"`, `"1,1;1,1"`, `"1^2;1^2"`: every token is a run of 1s.
pub fn is_identity_jordan(label: &str) -> bool {
    label.split([',', ';']).all(|t| t == "1" || t.strip_prefix("1^").is_some_and(|e| e.parse::<u32>().is_ok()))
}

fn case_name(t: &EncodedTable, c: u8) -> String {
    if t.depends_on_case() || t.cases.len() == 1 {
        format!(" [q = {c} mod 4]")
    } else {
        String::new()
    }
}

/// Distinct cases of a table: one representative when nothing depends on `q mod 4`.
fn distinct_cases(t: &EncodedTable) -> Vec<&(u8, super::Matrix)> {
    if t.depends_on_case() {
        t.cases.iter().collect()
    } else {
        t.cases.iter().take(1).collect()
    }
}

/// Identity column: `ε_G ε_L |G^F : L^F|_{p'}` in the identity row, zero elsewhere.
pub fn verify_eq1(t: &EncodedTable) -> CheckResult {
    let mut r = CheckResult::new("eq1", &t.id);
    let Some((g, l, eps)) = &t.orders else {
        r.fail("no group orders recorded");
        return r;
    };
    let Some(index) = g.exact_div(l) else {
        r.fail(format!("|L|_p' = {l} does not divide |G|_p' = {g}"));
        return r;
    };
    let expected = index.scale(&Rational::from_integer((*eps).into()));
    let Some(j) = t.cols.iter().position(|c| is_identity_jordan(&c.jordan)) else {
        r.fail("no identity column");
        return r;
    };
    for (c, m) in distinct_cases(t) {
        for (i, v) in t.rows.iter().enumerate() {
            let want = if is_identity_jordan(&v.jordan) { expected.clone() } else { Polynomial::zero() };
            if m[i][j] != want {
                r.fail(format!("({}, {}){}: expected {want}, found {}", v.id, t.cols[j].id, case_name(t, *c), m[i][j]));
            }
        }
    }
    r
}

/// Regular classes share the Jordan label of the last class. Each regular
/// column has a single nonzero entry, equal to 1, in a regular row.
pub fn verify_regular(t: &EncodedTable) -> CheckResult {
    let mut r = CheckResult::new("regular", &t.id);
    let reg_row = &t.rows.last().expect("nonempty").jordan;
    let reg_col = &t.cols.last().expect("nonempty").jordan;
    for (c, m) in distinct_cases(t) {
        for (j, u) in t.cols.iter().enumerate().filter(|(_, u)| &u.jordan == reg_col) {
            let nonzero: Vec<usize> = (0..t.rows.len()).filter(|&i| !m[i][j].is_zero()).collect();
            let ok = matches!(nonzero.as_slice(), [i] if m[*i][j].is_one() && &t.rows[*i].jordan == reg_row);
            if !ok {
                let cells: Vec<String> = nonzero.iter().map(|&i| format!("{}={}", t.rows[i].id, m[i][j])).collect();
                r.fail(format!("column {}{}: nonzero cells [{}]", u.id, case_name(t, *c), cells.join(", ")));
            }
        }
    }
    r
}

/// Evaluates every entry at the sample prime powers compatible with each case.
/// Non-integral values fail. Negative values fail for split Levis and are
/// reported as findings otherwise.
pub fn verify_integrality(t: &EncodedTable, samples: &[i64]) -> CheckResult {
    let mut r = CheckResult::new("integrality", &t.id);
    let mut evaluated = 0;
    for (c, m) in &t.cases {
        for &q in samples.iter().filter(|&&q| q.rem_euclid(4) == *c as i64) {
            evaluated += 1;
            for (i, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let v = x.eval_int(q);
                    let at = format!("({}, {}) at q = {q}", t.rows[i].id, t.cols[j].id);
                    if !v.is_integer() {
                        r.fail(format!("{at}: {v} is not an integer"));
                    } else if v.is_negative() {
                        if t.split {
                            r.fail(format!("{at}: {v} is negative"));
                        } else {
                            r.note(format!("{at}: {v} is negative (twisted Levi)"));
                        }
                    }
                }
            }
        }
    }
    if evaluated == 0 {
        r.fail("no sample lies in the table's congruence range");
    }
    r
}

/// `G̃`-entries from `G` both ways: summing over the rows of a fibre in any
/// column of the column fibre, and `(m/n)` times the sum over the column fibre in
/// any row of the row fibre. Both must equal the `G̃` table in every case.
pub fn verify_eq3(g: &EncodedTable, gt: &EncodedTable, map: &MergeMap) -> CheckResult {
    let mut r = CheckResult::new("eq3", &format!("{} -> {}", g.id, gt.id));
    for (c, m) in &g.cases {
        let Some(want) = gt.matrix(*c) else {
            r.fail(format!("{} has no case q = {c} mod 4", gt.id));
            continue;
        };
        for k in 0..gt.rows.len() {
            let rf = map.row_fibre(k);
            for l in 0..gt.cols.len() {
                let cf = map.col_fibre(l);
                let at = format!("({}, {}){}", gt.rows[k].id, gt.cols[l].id, case_name(g, *c));
                for &j in &cf {
                    let s: Polynomial = rf.iter().map(|&i| m[i][j].clone()).sum();
                    if s != want[k][l] {
                        r.fail(format!(
                            "{at}: rows {} in column {} sum to {s}, expected {}",
                            ids(&g.rows, &rf),
                            g.cols[j].id,
                            want[k][l]
                        ));
                    }
                }
                let ratio = Rational::new((rf.len() as i64).into(), (cf.len() as i64).into());
                for &i in &rf {
                    let s: Polynomial = cf.iter().map(|&j| m[i][j].clone()).sum();
                    let s = s.scale(&ratio);
                    if s != want[k][l] {
                        r.fail(format!(
                            "{at}: columns {} in row {} give {s}, expected {}",
                            ids(&g.cols, &cf),
                            g.rows[i].id,
                            want[k][l]
                        ));
                    }
                }
            }
        }
    }
    r
}

fn ids(classes: &[ClassRef], ix: &[usize]) -> String {
    ix.iter().map(|&i| classes[i].id.as_str()).collect::<Vec<_>>().join("+")
}

/// Row and column permutations induced by triality, per case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialityPerms {
    pub rows: Vec<usize>,
    pub cols: BTreeMap<u8, Vec<usize>>,
}

/// Reads the `triality` fields; `"a/b"` images are taken per congruence case.
pub fn triality_permutations(t: &EncodedTable) -> Option<TrialityPerms> {
    let image = |classes: &[ClassRef], case: u8| -> Option<Vec<usize>> {
        classes
            .iter()
            .map(|c| {
                let s = c.triality.as_deref()?;
                let target = match s.split_once('/') {
                    Some((a, b)) => {
                        if case == 1 {
                            a
                        } else {
                            b
                        }
                    }
                    None => s,
                };
                classes.iter().position(|d| d.id == target)
            })
            .collect()
    };
    let rows = image(&t.rows, 1)?;
    let cols = t.cases.iter().map(|(c, _)| image(&t.cols, *c).map(|p| (*c, p))).collect::<Option<_>>()?;
    Some(TrialityPerms { rows, cols })
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&k| k < p.len() && !std::mem::replace(&mut seen[k], true))
}

/// Checks `T[σ_r(i)][σ_c(j)] = T[i][j]` for every cell and case.
pub fn verify_triality(t: &EncodedTable, perms: &TrialityPerms) -> CheckResult {
    let mut r = CheckResult::new("triality", &t.id);
    if !is_permutation(&perms.rows) || perms.rows.len() != t.rows.len() {
        r.fail("row map is not a permutation");
        return r;
    }
    for (c, m) in &t.cases {
        let Some(sc) = perms.cols.get(c) else {
            r.fail(format!("no column permutation for q = {c} mod 4"));
            continue;
        };
        if !is_permutation(sc) || sc.len() != t.cols.len() {
            r.fail(format!("column map for q = {c} mod 4 is not a permutation"));
            continue;
        }
        for i in 0..t.rows.len() {
            for j in 0..t.cols.len() {
                let (a, b) = (&m[i][j], &m[perms.rows[i]][sc[j]]);
                if a != b {
                    r.fail(format!(
                        "({}, {}) = {a} but ({}, {}) = {b}{}",
                        t.rows[i].id,
                        t.cols[j].id,
                        t.rows[perms.rows[i]].id,
                        t.cols[sc[j]].id,
                        case_name(t, *c)
                    ));
                }
            }
        }
    }
    r
}

/// For tables of `GL_n`: equality with the symbolic engine, cell by cell and as
/// printed strings, after matching classes by label.
pub fn verify_engine(t: &EncodedTable) -> CheckResult {
    let mut r = CheckResult::new("engine", &t.id);
    let levi = match LeviDescriptor::parse(&t.levi) {
        Ok(l) => l,
        Err(e) => {
            r.fail(format!("levi {}: {e}", t.levi));
            return r;
        }
    };
    let q = match dm_green2(&LeviDescriptor::gl(levi.ambient_n), &levi) {
        Ok(q) => q,
        Err(e) => {
            r.fail(e.to_string());
            return r;
        }
    };
    let find = |labels: &[MultiPartition], c: &ClassRef| -> Option<usize> {
        let mp = MultiPartition::parse(&c.jordan).ok()?;
        labels.iter().position(|l| *l == mp)
    };
    let rows: Option<Vec<usize>> = t.rows.iter().map(|c| find(&q.rows, c)).collect();
    let cols: Option<Vec<usize>> = t.cols.iter().map(|c| find(&q.cols, c)).collect();
    let (Some(rows), Some(cols)) = (rows, cols) else {
        r.fail("class labels do not match the engine's classes");
        return r;
    };
    if rows.len() != q.rows.len() || cols.len() != q.cols.len() {
        r.fail("table and engine have different shapes");
        return r;
    }
    for (c, m) in distinct_cases(t) {
        for (i, &a) in rows.iter().enumerate() {
            for (j, &b) in cols.iter().enumerate() {
                let (x, y) = (&m[i][j], &q.entries[a][b]);
                if x != y || x.to_string() != y.to_string() {
                    r.fail(format!("({}, {}){}: table {x}, engine {y}", t.rows[i].id, t.cols[j].id, case_name(t, *c)));
                }
            }
        }
    }
    r
}

/// All single-table checks that apply.
pub fn verify_table(t: &EncodedTable) -> Report {
    let mut rep = Report::default();
    if t.orders.is_some() {
        rep.push(verify_eq1(t));
    }
    rep.push(verify_regular(t));
    rep.push(verify_integrality(t, &INTEGRALITY_SAMPLES));
    if t.ambient.starts_with("GL") {
        rep.push(verify_engine(t));
    }
    if let Some(p) = triality_permutations(t) {
        rep.push(verify_triality(t, &p));
    }
    rep
}

/// Table checks for every table, the merge relations and the Ennola pairs.
pub fn verify_corpus(corpus: &Corpus) -> Report {
    let mut rep = Report::default();
    for t in corpus.tables.values() {
        rep.extend(verify_table(t));
    }
    for pair in &corpus.links.merges {
        let subject = format!("{} -> {}", pair.g, pair.gtilde);
        let (g, gt) = match (corpus.get(&pair.g), corpus.get(&pair.gtilde)) {
            (Ok(g), Ok(gt)) => (g, gt),
            (Err(e), _) | (_, Err(e)) => {
                let mut r = CheckResult::new("eq3", &subject);
                r.fail(e.to_string());
                rep.push(r);
                continue;
            }
        };
        let gt = match pair.gtilde_transform.as_str() {
            "ennola" => gt.ennola(),
            _ => gt.clone(),
        };
        match derive_merge(g, &gt) {
            Ok(map) => rep.push(verify_eq3(g, &gt, &map)),
            Err(e) => {
                let mut r = CheckResult::new("eq3", &subject);
                r.fail(e.to_string());
                rep.push(r);
            }
        }
    }
    for pair in &corpus.links.ennola {
        rep.push(verify_ennola_pair(corpus, pair));
    }
    rep
}

/// Merges `b_merged` onto the shape of `a`, searches for an Ennola permutation and
/// compares it with the recorded one.
pub fn verify_ennola_pair(corpus: &Corpus, pair: &super::EnnolaPair) -> CheckResult {
    let mut r = CheckResult::new("ennola", &format!("{} ~ merge({})", pair.a, pair.b_merged));
    let (a, b) = match (corpus.get(&pair.a), corpus.get(&pair.b_merged)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            r.fail(e.to_string());
            return r;
        }
    };
    let merged = match derive_merge(b, a) {
        Ok(map) => merge_table(b, a, &map),
        Err(e) => {
            r.fail(e.to_string());
            return r;
        }
    };
    let Some(found) = find_ennola_permutation(a, &merged) else {
        r.fail("no label-preserving permutation relates the tables");
        return r;
    };
    let expect = |classes: &[ClassRef], pairs: &[(String, String)]| -> Option<Vec<usize>> {
        let mut p: Vec<usize> = (0..classes.len()).collect();
        for (x, y) in pairs {
            let i = classes.iter().position(|c| &c.id == x)?;
            p[i] = classes.iter().position(|c| &c.id == y)?;
        }
        Some(p)
    };
    match (expect(&a.rows, &pair.expected_rows), expect(&a.cols, &pair.expected_cols)) {
        (Some(er), Some(ec)) if er == found.rows && ec == found.cols => {
            let moved: Vec<String> =
                found.moved_cols().iter().map(|&(j, k)| format!("{}->{}", a.cols[j].id, a.cols[k].id)).collect();
            r.note(format!(
                "column permutation {}",
                if moved.is_empty() { "identity".into() } else { moved.join(", ") }
            ));
        }
        _ => {
            r.fail(format!("found rows {:?} cols {:?}, which is not the recorded permutation", found.rows, found.cols))
        }
    }
    r
}

/// The counting oracle at each recorded prime against the table evaluated at
/// `q = p`, in the congruence case of `p`, through the stored label matching.
pub fn verify_brute_matching(corpus: &Corpus, m: &super::BruteMatching, seed: u64) -> Report {
    let mut rep = Report::default();
    for &p in &m.primes {
        let mut r = CheckResult::new("brute", &format!("{} at p = {p}", m.table));
        let found = (|| -> Result<(), String> {
            let t = corpus.get(&m.table).map_err(|e| e.to_string())?;
            let n: usize = m.blocks.iter().sum();
            let oracle = match m.ambient.parse::<Ambient>().map_err(|e| e.to_string())? {
                Ambient::Sl(_) => sl_qtilde_table(n, &m.blocks, p, seed).map_err(|e| e.to_string())?,
                Ambient::Gl(_) => return Err("matchings are recorded for SL_n only".into()),
            };
            let case = (p % 4) as u8;
            let matrix = t.matrix(case).ok_or_else(|| format!("no case q = {case} mod 4"))?;
            let index = |labels: Vec<String>, map: &BTreeMap<String, String>, classes: &[ClassRef]| {
                let ix = labels
                    .iter()
                    .map(|l| {
                        let id = map.get(l).ok_or_else(|| format!("oracle class {l} is not matched"))?;
                        classes.iter().position(|c| &c.id == id).ok_or_else(|| format!("no class {id}"))
                    })
                    .collect::<Result<Vec<usize>, String>>()?;
                let mut sorted = ix.clone();
                sorted.sort_unstable();
                if sorted != (0..classes.len()).collect::<Vec<_>>() {
                    return Err(format!("matching is not a bijection onto the {} classes", classes.len()));
                }
                Ok(ix)
            };
            let rows = index(oracle.rows.iter().map(ToString::to_string).collect(), &m.rows, &t.rows)?;
            let cols = index(oracle.cols.iter().map(ToString::to_string).collect(), &m.cols, &t.cols)?;
            let q = Rational::from_integer(p.into());
            for (a, &i) in rows.iter().enumerate() {
                for (b, &j) in cols.iter().enumerate() {
                    let want = matrix[i][j].eval(&q);
                    let got = Rational::from_integer(oracle.entries[a][b].into());
                    if want != got {
                        r.fail(format!(
                            "({}, {}): table gives {want}, counting gives {got}",
                            t.rows[i].id, t.cols[j].id
                        ));
                    }
                }
            }
            Ok(())
        })();
        if let Err(e) = found {
            r.fail(e);
        }
        rep.push(r);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_labels() {
        assert!(is_identity_jordan("1^8"));
        assert!(is_identity_jordan("1,1;1,1"));
        assert!(is_identity_jordan("1^2;1^2;1^2"));
        assert!(!is_identity_jordan("2^21^4"));
        assert!(!is_identity_jordan("2;1,1"));
    }
}
