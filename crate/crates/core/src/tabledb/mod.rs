//! Encoded `Q̃` tables of groups outside type A, transcribed from the literature,
//! and the verifiers that check them.
//!
//! A table file holds row classes (of `L^F`), column classes (of `G^F`) and one
//! entry per cell in the polynomial grammar of [`crate::qpoly::parse_poly`]. A cell
//! may read `"*"` when its value depends on `q mod 4`; such cells are given by
//! patches, one per congruence. Tables valid for a single congruence carry `mod4`.

mod merge;
mod verify;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::green2::QtildeMatrix;
use crate::qpoly::{parse_poly, Polynomial};

pub use merge::{derive_merge, find_ennola_permutation, merge_table, EnnolaMatch, MergeMap};
pub use verify::{
    is_identity_jordan, triality_permutations, verify_brute_matching, verify_corpus, verify_engine, verify_ennola_pair,
    verify_eq1, verify_eq3, verify_integrality, verify_regular, verify_table, verify_triality, TrialityPerms,
};

/// Environment variable overriding the corpus directory.
pub const TABLES_ENV: &str = "GREEN2Q_TABLES";
/// File in the corpus directory holding merge pairs and other cross-table data.
pub const MERGES_FILE: &str = "merges.json";
/// Cell value meaning "given by the patches".
pub const PATCHED: &str = "*";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{file}: schema violation at {pointer}: {message}")]
    Schema { file: String, pointer: String, message: String },
    #[error("{file}: cell ({row}, {col}) at {pointer}: {message}")]
    Cell { file: String, row: String, col: String, pointer: String, message: String },
    #[error("{file}: {pointer}: {message}")]
    Invalid { file: String, pointer: String, message: String },
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("merge {g} -> {gtilde}: {message}")]
    Merge { g: String, gtilde: String, message: String },
}

/// A row or column class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRef {
    pub id: String,
    /// Jordan label of the geometric class. Classes sharing it form a splitting group.
    pub jordan: String,
    /// Class of the connected-centre group this class fuses into; defaults to `jordan`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_group: Option<String>,
    /// Image under triality, `"u7"`, or `"u21/u22"` for images depending on
    /// `q ≡ 1` / `q ≡ 3 mod 4`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triality: Option<String>,
    /// Representative as printed, for reference only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
}

impl ClassRef {
    pub fn group(&self) -> &str {
        self.split_group.as_deref().unwrap_or(&self.jordan)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Orders {
    /// `|G^F|_{p'}`.
    pub g: String,
    /// `|L^F|_{p'}`.
    pub l: String,
    /// `ε_G ε_L`.
    pub eps: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Patch {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub mod4: u8,
    pub entries: Vec<Vec<String>>,
}

/// A correction of a misprint. Either a single cell (`col`, `printed`,
/// `corrected`) or a cyclic shift of a run of cells in one row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Erratum {
    pub row: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected: Option<String>,
    /// The printed value in `rotate_cols[k]` belongs to `rotate_cols[k + shift]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotate_cols: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<usize>,
    pub reason: String,
}

/// A table file as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub id: String,
    pub ambient: String,
    pub levi: String,
    pub provenance: String,
    #[serde(default = "default_true")]
    pub split: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Orders>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mod4: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errata: Vec<Erratum>,
    pub rows: Vec<ClassRef>,
    pub cols: Vec<ClassRef>,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patches: Vec<Patch>,
}

fn default_true() -> bool {
    true
}

pub type Matrix = Vec<Vec<Polynomial>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    pub apply_errata: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { apply_errata: true }
    }
}

/// A validated table: one matrix per congruence class of `q mod 4` it covers.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedTable {
    pub id: String,
    pub ambient: String,
    pub levi: String,
    pub provenance: String,
    pub split: bool,
    pub rows: Vec<ClassRef>,
    pub cols: Vec<ClassRef>,
    pub orders: Option<(Polynomial, Polynomial, i64)>,
    /// `(q mod 4, values)`; both cases carry the same matrix when nothing depends on them.
    pub cases: Vec<(u8, Matrix)>,
    pub errata_applied: usize,
}

impl EncodedTable {
    pub fn row_index(&self, id: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.id == id)
    }

    pub fn col_index(&self, id: &str) -> Option<usize> {
        self.cols.iter().position(|c| c.id == id)
    }

    pub fn matrix(&self, case: u8) -> Option<&Matrix> {
        self.cases.iter().find(|(c, _)| *c == case).map(|(_, m)| m)
    }

    /// Whether some cell differs between the congruence cases.
    pub fn depends_on_case(&self) -> bool {
        self.cases.windows(2).any(|w| w[0].1 != w[1].1)
    }

    /// `q → -q` on every entry. Case labels are kept.
    pub fn ennola(&self) -> Self {
        let mut t = self.clone();
        for (_, m) in &mut t.cases {
            for row in m.iter_mut() {
                for x in row.iter_mut() {
                    *x = x.ennola();
                }
            }
        }
        t.id = format!("ennola({})", self.id);
        t
    }

    /// The same table with the two congruence cases exchanged.
    pub fn swap_cases(&self) -> Self {
        let mut t = self.clone();
        for (c, _) in &mut t.cases {
            *c = if *c == 1 { 3 } else { 1 };
        }
        t.cases.sort_by_key(|(c, _)| *c);
        t
    }

    /// Builds a table from a type-A matrix; labels are the multipartition labels.
    pub fn from_qtilde(id: &str, q: &QtildeMatrix) -> Self {
        let refs = |labels: &[crate::partitions::MultiPartition], pre: &str| -> Vec<ClassRef> {
            labels
                .iter()
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
        let g = crate::typea::group_order_p_prime(&q.ambient);
        let l = crate::typea::group_order_p_prime(&q.levi);
        Self {
            id: id.to_string(),
            ambient: q.ambient.to_string(),
            levi: q.levi.to_string(),
            provenance: "computed".to_string(),
            split: q.levi.is_split(),
            rows: refs(&q.rows, "v"),
            cols: refs(&q.cols, "u"),
            orders: Some((g, l, crate::typea::epsilon_product(&q.ambient, &q.levi))),
            cases: vec![(1, q.entries.clone()), (3, q.entries.clone())],
            errata_applied: 0,
        }
    }

    /// Cases that actually differ; one when nothing depends on `q mod 4`.
    fn shown_cases(&self) -> Vec<&(u8, Matrix)> {
        if self.depends_on_case() {
            self.cases.iter().collect()
        } else {
            self.cases.iter().take(1).collect()
        }
    }

    /// One `pmatrix` per distinct case, zeros printed as `.`.
    pub fn to_latex(&self) -> String {
        let mut out = Vec::new();
        for (c, m) in self.shown_cases() {
            let rows: Vec<String> = m
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| if x.is_zero() { ".".to_string() } else { x.to_latex() })
                        .collect::<Vec<_>>()
                        .join(" & ")
                })
                .collect();
            let head = if self.depends_on_case() { format!("% q = {c} mod 4\n") } else { String::new() };
            out.push(format!("{head}\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", rows.join(" \\\\\n")));
        }
        out.join("\n")
    }

    /// Header row of column ids; a leading `case` column when cases differ.
    pub fn to_csv(&self) -> String {
        let split = self.depends_on_case();
        let mut out = String::from(if split { "case,v" } else { "v" });
        for c in &self.cols {
            out.push_str(&format!(",{}", c.id));
        }
        out.push('\n');
        for (c, m) in self.shown_cases() {
            for (r, row) in self.rows.iter().zip(m) {
                if split {
                    out.push_str(&format!("{c},"));
                }
                out.push_str(&r.id);
                for x in row {
                    out.push_str(&format!(",{x}"));
                }
                out.push('\n');
            }
        }
        out
    }

    /// File form. Cells that differ between the cases are written as patches.
    pub fn to_file(&self) -> TableFile {
        let first = &self.cases[0].1;
        let mut entries: Vec<Vec<String>> = first.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let mut patches = Vec::new();
        let mod4 = (self.cases.len() == 1).then_some(self.cases[0].0);
        if self.depends_on_case() {
            let cells: Vec<(usize, usize)> = (0..self.rows.len())
                .flat_map(|i| (0..self.cols.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| self.cases.iter().any(|(_, m)| m[i][j] != first[i][j]))
                .collect();
            let rows: Vec<usize> =
                cells.iter().map(|c| c.0).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            let cols: Vec<usize> =
                cells.iter().map(|c| c.1).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            for &i in &rows {
                for &j in &cols {
                    entries[i][j] = PATCHED.to_string();
                }
            }
            for (c, m) in &self.cases {
                patches.push(Patch {
                    rows: rows.iter().map(|&i| self.rows[i].id.clone()).collect(),
                    cols: cols.iter().map(|&j| self.cols[j].id.clone()).collect(),
                    mod4: *c,
                    entries: rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].to_string()).collect()).collect(),
                });
            }
        }
        TableFile {
            id: self.id.clone(),
            ambient: self.ambient.clone(),
            levi: self.levi.clone(),
            provenance: self.provenance.clone(),
            split: self.split,
            orders: self.orders.as_ref().map(|(g, l, e)| Orders { g: g.to_string(), l: l.to_string(), eps: *e }),
            mod4,
            notes: None,
            errata: Vec::new(),
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries,
            patches,
        }
    }
}

impl fmt::Display for EncodedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} in {})", self.id, self.levi, self.ambient)?;
        for (c, m) in &self.cases {
            if self.cases.len() > 1 && !self.depends_on_case() && *c != self.cases[0].0 {
                continue;
            }
            if self.depends_on_case() {
                writeln!(f, "q = {c} mod 4")?;
            }
            for (r, row) in self.rows.iter().zip(m) {
                let cells: Vec<String> =
                    row.iter().map(|x| if x.is_zero() { ".".into() } else { x.to_string() }).collect();
                writeln!(f, "{:>4} | {}", r.id, cells.join("  "))?;
            }
        }
        Ok(())
    }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        "/".into()
    } else {
        out
    }
}

/// Parses a table file without validating it.
pub fn parse_table_file(text: &str, file: &str) -> Result<TableFile, TableError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| TableError::Schema {
        file: file.to_string(),
        pointer: pointer_of(e.path()),
        message: e.inner().to_string(),
    })
}

/// Validates a parsed file and evaluates every case.
pub fn validate(raw: &TableFile, file: &str, opts: LoadOptions) -> Result<EncodedTable, TableError> {
    let invalid = |pointer: String, message: String| TableError::Invalid { file: file.to_string(), pointer, message };
    let (nr, nc) = (raw.rows.len(), raw.cols.len());
    if nr == 0 || nc == 0 {
        return Err(invalid("/rows".into(), "table has no rows or columns".into()));
    }
    for (key, list) in [("rows", &raw.rows), ("cols", &raw.cols)] {
        let mut seen = HashSet::new();
        for (i, c) in list.iter().enumerate() {
            if !seen.insert(&c.id) {
                return Err(invalid(format!("/{key}/{i}/id"), format!("duplicate id {}", c.id)));
            }
        }
    }
    if raw.entries.len() != nr {
        return Err(invalid("/entries".into(), format!("{} entry rows for {nr} row classes", raw.entries.len())));
    }
    for (i, row) in raw.entries.iter().enumerate() {
        if row.len() != nc {
            return Err(invalid(format!("/entries/{i}"), format!("{} cells for {nc} column classes", row.len())));
        }
    }
    if let Some(c) = raw.mod4 {
        if c != 1 && c != 3 {
            return Err(invalid("/mod4".into(), format!("expected 1 or 3, found {c}")));
        }
    }
    let row_ix: HashMap<&str, usize> = raw.rows.iter().enumerate().map(|(i, r)| (r.id.as_str(), i)).collect();
    let col_ix: HashMap<&str, usize> = raw.cols.iter().enumerate().map(|(j, c)| (c.id.as_str(), j)).collect();

    let mut cells = raw.entries.clone();
    let mut errata_applied = 0;
    if opts.apply_errata {
        for (k, e) in raw.errata.iter().enumerate() {
            let ptr = format!("/errata/{k}");
            let &i =
                row_ix.get(e.row.as_str()).ok_or_else(|| invalid(ptr.clone(), format!("unknown row {}", e.row)))?;
            match (&e.col, &e.rotate_cols) {
                (Some(col), None) => {
                    let &j = col_ix
                        .get(col.as_str())
                        .ok_or_else(|| invalid(ptr.clone(), format!("unknown column {col}")))?;
                    let (printed, corrected) = match (&e.printed, &e.corrected) {
                        (Some(p), Some(c)) => (p, c),
                        _ => return Err(invalid(ptr, "a cell erratum needs printed and corrected".into())),
                    };
                    if &cells[i][j] != printed {
                        return Err(invalid(ptr, format!("cell reads {}, erratum expects {printed}", cells[i][j])));
                    }
                    cells[i][j] = corrected.clone();
                }
                (None, Some(cols)) => {
                    let js = cols
                        .iter()
                        .map(|c| {
                            col_ix
                                .get(c.as_str())
                                .copied()
                                .ok_or_else(|| invalid(ptr.clone(), format!("unknown column {c}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let shift = e.shift.unwrap_or(0) % js.len().max(1);
                    let printed: Vec<String> = js.iter().map(|&j| cells[i][j].clone()).collect();
                    for (k2, &j) in js.iter().enumerate() {
                        cells[i][j] = printed[(k2 + js.len() - shift) % js.len()].clone();
                    }
                }
                _ => return Err(invalid(ptr, "an erratum names either col or rotate_cols".into())),
            }
            errata_applied += 1;
        }
    }

    let parse_cell = |s: &str, i: usize, j: usize, pointer: String| -> Result<Polynomial, TableError> {
        parse_poly(s).map_err(|e| TableError::Cell {
            file: file.to_string(),
            row: raw.rows[i].id.clone(),
            col: raw.cols[j].id.clone(),
            pointer,
            message: e.to_string(),
        })
    };
    let mut base: Vec<Vec<Option<Polynomial>>> = Vec::with_capacity(nr);
    for (i, row) in cells.iter().enumerate() {
        let mut out = Vec::with_capacity(nc);
        for (j, s) in row.iter().enumerate() {
            out.push(if s.trim() == PATCHED { None } else { Some(parse_cell(s, i, j, format!("/entries/{i}/{j}"))?) });
        }
        base.push(out);
    }

    let cases: Vec<u8> = match raw.mod4 {
        Some(c) => vec![c],
        None => vec![1, 3],
    };
    let mut covered: BTreeMap<u8, HashSet<(usize, usize)>> = cases.iter().map(|&c| (c, HashSet::new())).collect();
    let mut values: BTreeMap<u8, HashMap<(usize, usize), Polynomial>> = BTreeMap::new();
    for (k, p) in raw.patches.iter().enumerate() {
        let ptr = format!("/patches/{k}");
        let Some(cov) = covered.get_mut(&p.mod4) else {
            return Err(invalid(format!("{ptr}/mod4"), format!("case {} is outside the table's range", p.mod4)));
        };
        let is = p
            .rows
            .iter()
            .enumerate()
            .map(|(a, r)| {
                row_ix
                    .get(r.as_str())
                    .copied()
                    .ok_or_else(|| invalid(format!("{ptr}/rows/{a}"), format!("unknown row {r}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let js = p
            .cols
            .iter()
            .enumerate()
            .map(|(b, c)| {
                col_ix
                    .get(c.as_str())
                    .copied()
                    .ok_or_else(|| invalid(format!("{ptr}/cols/{b}"), format!("unknown column {c}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if p.entries.len() != is.len() || p.entries.iter().any(|r| r.len() != js.len()) {
            return Err(invalid(format!("{ptr}/entries"), "patch shape does not match its rows and cols".into()));
        }
        for (a, &i) in is.iter().enumerate() {
            for (b, &j) in js.iter().enumerate() {
                if base[i][j].is_some() {
                    return Err(invalid(
                        format!("{ptr}/entries/{a}/{b}"),
                        format!("cell ({}, {}) is not marked {PATCHED}", raw.rows[i].id, raw.cols[j].id),
                    ));
                }
                if !cov.insert((i, j)) {
                    return Err(invalid(
                        format!("{ptr}/entries/{a}/{b}"),
                        "cell patched twice for the same case".into(),
                    ));
                }
                let v = parse_cell(&p.entries[a][b], i, j, format!("{ptr}/entries/{a}/{b}"))?;
                values.entry(p.mod4).or_default().insert((i, j), v);
            }
        }
    }
    let starred: HashSet<(usize, usize)> =
        (0..nr).flat_map(|i| (0..nc).map(move |j| (i, j))).filter(|&(i, j)| base[i][j].is_none()).collect();
    for (c, cov) in &covered {
        if *cov != starred {
            let missing =
                starred.difference(cov).next().map(|&(i, j)| format!("({}, {})", raw.rows[i].id, raw.cols[j].id));
            return Err(invalid(
                "/patches".into(),
                format!(
                    "case q = {c} mod 4 does not cover every {PATCHED} cell{}",
                    missing.map(|m| format!(": {m}")).unwrap_or_default()
                ),
            ));
        }
    }
    let mut out_cases = Vec::new();
    for &c in &cases {
        let m: Matrix = (0..nr)
            .map(|i| {
                (0..nc)
                    .map(|j| match &base[i][j] {
                        Some(v) => v.clone(),
                        None => values[&c][&(i, j)].clone(),
                    })
                    .collect()
            })
            .collect();
        out_cases.push((c, m));
    }

    let orders = match &raw.orders {
        None => None,
        Some(o) => {
            let g = parse_poly(&o.g).map_err(|e| invalid("/orders/g".into(), e.to_string()))?;
            let l = parse_poly(&o.l).map_err(|e| invalid("/orders/l".into(), e.to_string()))?;
            if o.eps != 1 && o.eps != -1 {
                return Err(invalid("/orders/eps".into(), format!("expected ±1, found {}", o.eps)));
            }
            Some((g, l, o.eps))
        }
    };
    Ok(EncodedTable {
        id: raw.id.clone(),
        ambient: raw.ambient.clone(),
        levi: raw.levi.clone(),
        provenance: raw.provenance.clone(),
        split: raw.split,
        rows: raw.rows.clone(),
        cols: raw.cols.clone(),
        orders,
        cases: out_cases,
        errata_applied,
    })
}

pub fn load_table_str(text: &str, file: &str, opts: LoadOptions) -> Result<EncodedTable, TableError> {
    validate(&parse_table_file(text, file)?, file, opts)
}

pub fn load_table(path: &Path) -> Result<EncodedTable, TableError> {
    load_table_with(path, LoadOptions::default())
}

pub fn load_table_with(path: &Path, opts: LoadOptions) -> Result<EncodedTable, TableError> {
    let text = fs::read_to_string(path).map_err(|e| TableError::Io { path: path.display().to_string(), source: e })?;
    load_table_str(&text, &path.display().to_string(), opts)
}

/// A pair `(G, G̃)` whose tables are related by merging split classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergePair {
    pub g: String,
    pub gtilde: String,
    /// `"none"` or `"ennola"` (compare against `q → -q` of the `G̃` table).
    #[serde(default = "default_transform")]
    pub gtilde_transform: String,
    pub provenance: String,
}

fn default_transform() -> String {
    "none".into()
}

/// Expected Ennola permutation between a table and the merge of another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnnolaPair {
    pub a: String,
    /// Table merged onto the shape of `a` before comparing.
    pub b_merged: String,
    /// Expected permutation as `(id in a, id in b)` pairs where not the identity.
    #[serde(default)]
    pub expected_rows: Vec<(String, String)>,
    #[serde(default)]
    pub expected_cols: Vec<(String, String)>,
    pub provenance: String,
}

/// How the classes of a counting-oracle table map onto a stored table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BruteMatching {
    pub table: String,
    pub ambient: String,
    pub blocks: Vec<usize>,
    pub primes: Vec<u32>,
    /// Oracle label to table id.
    pub rows: BTreeMap<String, String>,
    pub cols: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergesFile {
    pub merges: Vec<MergePair>,
    #[serde(default)]
    pub ennola: Vec<EnnolaPair>,
    #[serde(default)]
    pub brute_matchings: Vec<BruteMatching>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub dir: PathBuf,
    pub tables: BTreeMap<String, EncodedTable>,
    pub links: MergesFile,
}

impl Corpus {
    pub fn get(&self, id: &str) -> Result<&EncodedTable, TableError> {
        self.tables.get(id).ok_or_else(|| TableError::UnknownTable(id.to_string()))
    }
}

/// `$GREEN2Q_TABLES`, or the `tables/` directory of the source tree.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(TABLES_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tables"),
    }
}

pub fn load_corpus(dir: &Path) -> Result<Corpus, TableError> {
    load_corpus_with(dir, LoadOptions::default())
}

pub fn load_corpus_with(dir: &Path, opts: LoadOptions) -> Result<Corpus, TableError> {
    let io = |e: std::io::Error| TableError::Io { path: dir.display().to_string(), source: e };
    let mut tables = BTreeMap::new();
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut links = MergesFile::default();
    for p in paths {
        if p.file_name().is_some_and(|n| n == MERGES_FILE) {
            let text =
                fs::read_to_string(&p).map_err(|e| TableError::Io { path: p.display().to_string(), source: e })?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            links = serde_path_to_error::deserialize(de).map_err(|e| TableError::Schema {
                file: p.display().to_string(),
                pointer: pointer_of(e.path()),
                message: e.inner().to_string(),
            })?;
            continue;
        }
        let t = load_table_with(&p, opts)?;
        let stem = p.file_stem().unwrap_or_default().to_string_lossy().to_string();
        if t.id != stem {
            return Err(TableError::Invalid {
                file: p.display().to_string(),
                pointer: "/id".into(),
                message: format!("id {} differs from the file name", t.id),
            });
        }
        tables.insert(t.id.clone(), t);
    }
    Ok(Corpus { dir: dir.to_path_buf(), tables, links })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
      "id": "t", "ambient": "X", "levi": "Y", "provenance": "test",
      "rows": [{"id": "v1", "jordan": "1^2"}, {"id": "v2", "jordan": "2"}],
      "cols": [{"id": "u1", "jordan": "1^3"}, {"id": "u2", "jordan": "3"}, {"id": "u3", "jordan": "3"}],
      "entries": [["P3", "0", "0"], ["0", "*", "*"]],
      "patches": [
        {"rows": ["v2"], "cols": ["u2", "u3"], "mod4": 1, "entries": [["1", "0"]]},
        {"rows": ["v2"], "cols": ["u2", "u3"], "mod4": 3, "entries": [["0", "1"]]}
      ]
    }"#;

    #[test]
    fn patches_fill_both_cases() {
        let t = load_table_str(SMALL, "small", LoadOptions::default()).unwrap();
        assert!(t.depends_on_case());
        assert_eq!(t.matrix(1).unwrap()[1][1], Polynomial::one());
        assert_eq!(t.matrix(3).unwrap()[1][2], Polynomial::one());
        let back = validate(&t.to_file(), "rt", LoadOptions::default()).unwrap();
        assert_eq!(back.cases, t.cases);
    }

    #[test]
    fn bad_cell_names_coordinates() {
        let text = SMALL.replace("\"P3\"", "\"P0\"");
        match load_table_str(&text, "small", LoadOptions::default()) {
            Err(TableError::Cell { row, col, pointer, .. }) => {
                assert_eq!((row.as_str(), col.as_str(), pointer.as_str()), ("v1", "u1", "/entries/0/0"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let text = SMALL.replace("\"jordan\": \"2\"", "\"jordan\": 2");
        match load_table_str(&text, "small", LoadOptions::default()) {
            Err(TableError::Schema { pointer, .. }) => assert_eq!(pointer, "/rows/1/jordan"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uncovered_star_is_rejected() {
        let text = SMALL.replace(
            r#"{"rows": ["v2"], "cols": ["u2", "u3"], "mod4": 3, "entries": [["0", "1"]]}"#,
            r#"{"rows": ["v2"], "cols": ["u2"], "mod4": 3, "entries": [["0"]]}"#,
        );
        assert!(matches!(load_table_str(&text, "small", LoadOptions::default()), Err(TableError::Invalid { .. })));
    }

    #[test]
    fn rotation_erratum() {
        let text = SMALL.replace(
            "\"entries\": [[\"P3\", \"0\", \"0\"]",
            "\"errata\": [{\"row\": \"v1\", \"rotate_cols\": [\"u1\", \"u2\", \"u3\"], \"shift\": 1, \"reason\": \"test\"}],\n\"entries\": [[\"P3\", \"0\", \"0\"]",
        );
        let t = load_table_str(&text, "small", LoadOptions::default()).unwrap();
        assert_eq!(t.errata_applied, 1);
        assert!(t.matrix(1).unwrap()[0][0].is_zero());
        assert!(!t.matrix(1).unwrap()[0][1].is_zero());
    }
}
