//! Fusing split classes onto a connected-centre table, and Ennola matching.

use std::collections::BTreeMap;

use super::{ClassRef, EncodedTable, Matrix, TableError};

/// Surjections from the classes of `G` (resp. `L`) onto those of `G̃` (resp. `L̃`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeMap {
    /// `rows[i]` is the `G̃`-table row receiving row `i`.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MergeMap {
    pub fn row_fibre(&self, k: usize) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i] == k).collect()
    }

    pub fn col_fibre(&self, k: usize) -> Vec<usize> {
        (0..self.cols.len()).filter(|&j| self.cols[j] == k).collect()
    }
}

fn map_classes(from: &[ClassRef], to: &[ClassRef], what: &str, g: &str, gt: &str) -> Result<Vec<usize>, TableError> {
    let err = |message: String| TableError::Merge { g: g.to_string(), gtilde: gt.to_string(), message };
    let mut out = Vec::with_capacity(from.len());
    for c in from {
        let hits: Vec<usize> = (0..to.len()).filter(|&k| to[k].group() == c.group()).collect();
        match hits.as_slice() {
            [k] => out.push(*k),
            [] => return Err(err(format!("{what} class {} ({}) has no image", c.id, c.group()))),
            _ => return Err(err(format!("{what} class {} ({}) has several images", c.id, c.group()))),
        }
    }
    if let Some(k) = (0..to.len()).find(|k| !out.contains(k)) {
        return Err(err(format!("{what} class {} is not hit", to[k].id)));
    }
    Ok(out)
}

/// Derives the merge map from the class labels: a class of `G` goes to the class
/// of `G̃` with the same `split_group` (or Jordan label).
pub fn derive_merge(g: &EncodedTable, gt: &EncodedTable) -> Result<MergeMap, TableError> {
    Ok(MergeMap {
        rows: map_classes(&g.rows, &gt.rows, "row", &g.id, &gt.id)?,
        cols: map_classes(&g.cols, &gt.cols, "column", &g.id, &gt.id)?,
    })
}

/// The table of `G̃` predicted by `g`: entry `(ṽ, ũ)` is the sum of `g` over the
/// rows fusing into `ṽ`, in the first column fusing into `ũ`. Shape and labels
/// are taken from `template`.
pub fn merge_table(g: &EncodedTable, template: &EncodedTable, map: &MergeMap) -> EncodedTable {
    let cases = g
        .cases
        .iter()
        .map(|(c, m)| {
            let merged: Matrix = (0..template.rows.len())
                .map(|k| {
                    let fibre = map.row_fibre(k);
                    (0..template.cols.len())
                        .map(|l| {
                            let j = map.col_fibre(l)[0];
                            fibre.iter().map(|&i| m[i][j].clone()).sum()
                        })
                        .collect()
                })
                .collect();
            (*c, merged)
        })
        .collect();
    EncodedTable {
        id: format!("merge({})", g.id),
        ambient: template.ambient.clone(),
        levi: template.levi.clone(),
        provenance: format!("merged from {}", g.id),
        split: g.split,
        rows: template.rows.clone(),
        cols: template.cols.clone(),
        orders: None,
        cases,
        errata_applied: 0,
    }
}

/// A label-preserving permutation with `ennola(a)[i][j] = b[rows[i]][cols[j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnnolaMatch {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Whether the case `q ≡ 1` of `a` had to be compared with `q ≡ 3` of `b`.
    pub swapped_cases: bool,
}

impl EnnolaMatch {
    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| i == r) && self.cols.iter().enumerate().all(|(j, &c)| j == c)
    }

    /// Non-fixed points of the column permutation.
    pub fn moved_cols(&self) -> Vec<(usize, usize)> {
        self.cols.iter().enumerate().filter(|(j, &c)| *j != c).map(|(j, &c)| (j, c)).collect()
    }

    pub fn moved_rows(&self) -> Vec<(usize, usize)> {
        self.rows.iter().enumerate().filter(|(i, &r)| *i != r).map(|(i, &r)| (i, r)).collect()
    }
}

/// Maximum number of row permutations tried.
const MAX_ROW_PERMUTATIONS: usize = 1 << 20;

fn groups(classes: &[ClassRef]) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        by.entry(&c.jordan).or_default().push(i);
    }
    by.into_values().collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every label-preserving permutation of `n` classes, identity first.
fn label_permutations(classes: &[ClassRef]) -> Option<Vec<Vec<usize>>> {
    let mut all = vec![(0..classes.len()).collect::<Vec<_>>()];
    for g in groups(classes) {
        let perms = permutations(&g);
        if all.len().saturating_mul(perms.len()) > MAX_ROW_PERMUTATIONS {
            return None;
        }
        let mut next = Vec::with_capacity(all.len() * perms.len());
        for base in &all {
            for p in &perms {
                let mut s = base.clone();
                for (src, &dst) in g.iter().zip(p) {
                    s[*src] = dst;
                }
                next.push(s);
            }
        }
        all = next;
    }
    Some(all)
}

/// Bipartite matching of columns, trying `k = j` first.
fn match_columns(adj: &[Vec<usize>], n: usize) -> Option<Vec<usize>> {
    fn augment(j: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &k in &adj[j] {
            if seen[k] {
                continue;
            }
            seen[k] = true;
            if owner[k].is_none() || augment(owner[k].unwrap(), adj, seen, owner) {
                owner[k] = Some(j);
                return true;
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for j in 0..adj.len() {
        if !augment(j, adj, &mut vec![false; n], &mut owner) {
            return None;
        }
    }
    let mut cols = vec![0; adj.len()];
    for (k, o) in owner.iter().enumerate() {
        if let Some(j) = o {
            cols[*j] = k;
        }
    }
    Some(cols)
}

fn search(ea: &[&Matrix], b: &[&Matrix], a: &EncodedTable, bt: &EncodedTable) -> Option<(Vec<usize>, Vec<usize>)> {
    let nc = a.cols.len();
    for rows in label_permutations(&a.rows)? {
        if (0..rows.len()).any(|i| a.rows[i].jordan != bt.rows[rows[i]].jordan) {
            continue;
        }
        let adj: Vec<Vec<usize>> = (0..nc)
            .map(|j| {
                let mut cand: Vec<usize> = (0..nc)
                    .filter(|&k| a.cols[j].jordan == bt.cols[k].jordan)
                    .filter(|&k| ea.iter().zip(b).all(|(x, y)| (0..rows.len()).all(|i| x[i][j] == y[rows[i]][k])))
                    .collect();
                cand.sort_by_key(|&k| k != j);
                cand
            })
            .collect();
        if adj.iter().any(Vec::is_empty) {
            continue;
        }
        if let Some(cols) = match_columns(&adj, nc) {
            return Some((rows, cols));
        }
    }
    None
}

/// Searches for label-preserving permutations `σ` with
/// `a(-q)[i][j] = b(q)[σ_r(i)][σ_c(j)]` in every congruence case. Cases are first
/// compared like for like, then crosswise.
pub fn find_ennola_permutation(a: &EncodedTable, b: &EncodedTable) -> Option<EnnolaMatch> {
    if a.rows.len() != b.rows.len() || a.cols.len() != b.cols.len() {
        return None;
    }
    let ea = a.ennola();
    for swapped in [false, true] {
        let bb = if swapped { b.swap_cases() } else { b.clone() };
        let mut xs: Vec<&Matrix> = Vec::new();
        let mut ys: Vec<&Matrix> = Vec::new();
        for (c, m) in &ea.cases {
            if let Some(y) = bb.matrix(*c) {
                xs.push(m);
                ys.push(y);
            }
        }
        if xs.is_empty() {
            continue;
        }
        if let Some((rows, cols)) = search(&xs, &ys, a, b) {
            return Some(EnnolaMatch { rows, cols, swapped_cases: swapped });
        }
        if !a.depends_on_case() && !b.depends_on_case() {
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::parse_poly;

    fn table(rows: &[&str], cols: &[&str], entries: &[&[&str]]) -> EncodedTable {
        let refs = |ls: &[&str], pre: &str| -> Vec<ClassRef> {
            ls.iter()
                .enumerate()
                .map(|(i, l)| ClassRef {
                    id: format!("{pre}{}", i + 1),
                    jordan: l.to_string(),
                    split_group: None,
                    triality: None,
                    rep: None,
                })
                .collect()
        };
        let m: Matrix = entries.iter().map(|r| r.iter().map(|s| parse_poly(s).unwrap()).collect()).collect();
        EncodedTable {
            id: "t".into(),
            ambient: "X".into(),
            levi: "Y".into(),
            provenance: "test".into(),
            split: true,
            rows: refs(rows, "v"),
            cols: refs(cols, "u"),
            orders: None,
            cases: vec![(1, m.clone()), (3, m)],
            errata_applied: 0,
        }
    }

    #[test]
    fn even_table_matches_itself_by_identity() {
        let a = table(&["1", "2"], &["1", "3", "3"], &[&["q^2+1", "1", "2"], &["0", "3", "q^4"]]);
        let m = find_ennola_permutation(&a, &a).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn swap_of_equal_labels_is_found() {
        let a = table(&["1", "2"], &["1", "3", "3"], &[&["1", "P1", "P2"], &["0", "1", "2"]]);
        let b = table(&["1", "2"], &["1", "3", "3"], &[&["1", "-P1", "-P2"], &["0", "2", "1"]]);
        let m = find_ennola_permutation(&a, &b).unwrap();
        assert_eq!(m.cols, vec![0, 2, 1]);
        // the swap is forbidden when the labels differ
        let c = table(&["1", "2"], &["1", "3", "4"], &[&["1", "-P1", "-P2"], &["0", "2", "1"]]);
        let a2 = table(&["1", "2"], &["1", "3", "4"], &[&["1", "P1", "P2"], &["0", "1", "2"]]);
        assert!(find_ennola_permutation(&a2, &c).is_none());
    }

    #[test]
    fn merging_sums_rows() {
        let mut g = table(&["1", "2", "2"], &["1", "2", "2"], &[&["5", "1", "1"], &["0", "q", "0"], &["0", "0", "q"]]);
        g.rows[2].split_group = Some("2".into());
        let gt = table(&["1", "2"], &["1", "2"], &[&["5", "1"], &["0", "q"]]);
        let map = derive_merge(&g, &gt).unwrap();
        assert_eq!(map.rows, vec![0, 1, 1]);
        let m = merge_table(&g, &gt, &map);
        assert_eq!(m.cases[0].1, gt.cases[0].1);
    }
}
