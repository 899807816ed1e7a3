//! The modified 2-parameter Green matrix `Q̃_L^G(v,u) = |v^{L^F}| Q_L^G(u, v^{-1})`.
//!
//! Two independent routes: the torus-sum formula over `L^F`-classes of maximal
//! tori ([`dm_green2`]) and the linear system expressing ordinary Green
//! functions of `G` through those of `L` ([`linsys_green2`]). Unipotent
//! classes of type A are real, so `v^{-1}` is identified with `v`.

mod checks;

use std::fmt;

use thiserror::Error;

use crate::partitions::MultiPartition;
use crate::qpoly::{solve_linear_multi, Polynomial, QpolyError, Rational};
use crate::typea::{embed, ordinary_green_value, torus_classes, unipotent_classes, LeviDescriptor, TypeAError};

pub use checks::{check_identities, is_regular_label, INTEGRALITY_SAMPLES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Green2Error {
    #[error(transparent)]
    Embedding(#[from] TypeAError),
    #[error("entry ({row}, {col}) is not a polynomial: {value}")]
    NotPolynomial { row: String, col: String, value: String },
    #[error(transparent)]
    Linear(#[from] QpolyError),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
}

/// Rows are `L`-classes and columns `G`-classes, both in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QtildeMatrix {
    pub ambient: LeviDescriptor,
    pub levi: LeviDescriptor,
    pub rows: Vec<MultiPartition>,
    pub cols: Vec<MultiPartition>,
    pub entries: Vec<Vec<Polynomial>>,
}

impl QtildeMatrix {
    pub fn entry(&self, v: &MultiPartition, u: &MultiPartition) -> Option<&Polynomial> {
        let i = self.rows.iter().position(|r| r == v)?;
        let j = self.cols.iter().position(|c| c == u)?;
        Some(&self.entries[i][j])
    }

    /// `Q̃_M^M`.
    pub fn identity(m: &LeviDescriptor) -> Self {
        let labels: Vec<MultiPartition> = unipotent_classes(m).into_iter().map(|c| c.label).collect();
        let n = labels.len();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Polynomial::one() } else { Polynomial::zero() }).collect())
            .collect();
        Self { ambient: m.clone(), levi: m.clone(), rows: labels.clone(), cols: labels, entries }
    }

    pub fn eval_int(&self, q: i64) -> Vec<Vec<Rational>> {
        self.entries.iter().map(|row| row.iter().map(|p| p.eval_int(q)).collect()).collect()
    }

    /// LaTeX `pmatrix` in the display style of the tables (`.` for zero).
    pub fn to_latex(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|row| row.iter().map(Polynomial::to_latex).collect::<Vec<_>>().join(" & "))
            .collect();
        format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", rows.join(" \\\\\n"))
    }

    /// Comma-separated values with a header row of `G`-class labels.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("v");
        for c in &self.cols {
            out.push_str(&format!(",\"{c}\""));
        }
        out.push('\n');
        for (r, row) in self.rows.iter().zip(&self.entries) {
            out.push_str(&format!("\"{r}\""));
            for e in row {
                out.push_str(&format!(",{e}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for QtildeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} in {}", self.levi, self.ambient)?;
        for (r, row) in self.rows.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{r:>12} | {}", cells.join("  "))?;
        }
        Ok(())
    }
}

fn labels(l: &LeviDescriptor) -> Vec<MultiPartition> {
    unipotent_classes(l).into_iter().map(|c| c.label).collect()
}

/// Torus-sum formula: `(1/|C_L(v)|) Σ_w |T_w|/|C_{W_L}(w)| R_{T_w}^G(1)(u) R_{T_w}^L(1)(v)`.
pub fn dm_green2(g: &LeviDescriptor, l: &LeviDescriptor) -> Result<QtildeMatrix, Green2Error> {
    let emb = embed(g, l)?;
    let l_classes = unipotent_classes(l);
    let cols = labels(g);
    let tori = torus_classes(l);
    let g_rows: Vec<Vec<Polynomial>> = tori
        .iter()
        .map(|t| {
            let tg = emb.torus_to_g(g, l, &t.cycles);
            cols.iter().map(|u| ordinary_green_value(g, &tg, u)).collect()
        })
        .collect();
    let mut entries = Vec::with_capacity(l_classes.len());
    for v in &l_classes {
        let mut row = Vec::with_capacity(cols.len());
        for (j, u) in cols.iter().enumerate() {
            let mut acc = Polynomial::zero();
            for (t, g_row) in tori.iter().zip(&g_rows) {
                let rl = ordinary_green_value(l, &t.cycles, &v.label);
                let weight = Rational::new(1.into(), t.f_centralizer_order.into());
                acc += &(&t.order * &g_row[j] * rl).scale(&weight);
            }
            let value = acc.exact_div(&v.centralizer_order).ok_or_else(|| Green2Error::NotPolynomial {
                row: v.label.to_string(),
                col: u.to_string(),
                value: format!("({acc})/({})", v.centralizer_order),
            })?;
            row.push(value);
        }
        entries.push(row);
    }
    Ok(QtildeMatrix {
        ambient: g.clone(),
        levi: l.clone(),
        rows: l_classes.into_iter().map(|c| c.label).collect(),
        cols,
        entries,
    })
}

/// Solves `R_{T_w}^G(1)(u) = Σ_v R_{T_w}^L(1)(v) Q(u, v^{-1})`.
///
/// The sum runs over elements; grouped by classes the unknowns are `|v^{L^F}| Q(u, v^{-1})`.
pub fn linsys_green2(g: &LeviDescriptor, l: &LeviDescriptor) -> Result<QtildeMatrix, Green2Error> {
    let emb = embed(g, l)?;
    let l_classes = unipotent_classes(l);
    let cols = labels(g);
    let tori = torus_classes(l);
    let a: Vec<Vec<Polynomial>> =
        tori.iter().map(|t| l_classes.iter().map(|v| ordinary_green_value(l, &t.cycles, &v.label)).collect()).collect();
    let b: Vec<Vec<Polynomial>> = tori
        .iter()
        .map(|t| {
            let tg = emb.torus_to_g(g, l, &t.cycles);
            cols.iter().map(|u| ordinary_green_value(g, &tg, u)).collect()
        })
        .collect();
    let x = solve_linear_multi(&a, &b)?;
    let mut entries = Vec::with_capacity(l_classes.len());
    for (v, xrow) in l_classes.iter().zip(x) {
        let mut row = Vec::with_capacity(cols.len());
        for (u, value) in cols.iter().zip(xrow) {
            let p = value.clone().into_polynomial().ok_or_else(|| Green2Error::NotPolynomial {
                row: v.label.to_string(),
                col: u.to_string(),
                value: value.to_string(),
            })?;
            row.push(p);
        }
        entries.push(row);
    }
    Ok(QtildeMatrix {
        ambient: g.clone(),
        levi: l.clone(),
        rows: l_classes.into_iter().map(|c| c.label).collect(),
        cols,
        entries,
    })
}

/// `Q̃_L^G = Q̃_L^M · Q̃_M^G`.
pub fn compose(inner: &QtildeMatrix, outer: &QtildeMatrix) -> Result<QtildeMatrix, Green2Error> {
    if inner.ambient != outer.levi {
        return Err(Green2Error::LabelMismatch(format!(
            "inner ambient {} differs from outer Levi {}",
            inner.ambient, outer.levi
        )));
    }
    if inner.cols != outer.rows {
        return Err(Green2Error::LabelMismatch("inner columns and outer rows are ordered differently".into()));
    }
    let entries = inner
        .entries
        .iter()
        .map(|irow| {
            (0..outer.cols.len()).map(|j| irow.iter().zip(&outer.entries).map(|(a, orow)| a * &orow[j]).sum()).collect()
        })
        .collect();
    Ok(QtildeMatrix {
        ambient: outer.ambient.clone(),
        levi: inner.levi.clone(),
        rows: inner.rows.clone(),
        cols: outer.cols.clone(),
        entries,
    })
}

/// `R_L^G(ψ)(u) = Σ_v Q̃(v,u) ψ(v)` on unipotent classes, `ψ` indexed like the rows.
pub fn induce_on_unipotents(q: &QtildeMatrix, psi: &[Polynomial]) -> Result<Vec<Polynomial>, Green2Error> {
    if psi.len() != q.rows.len() {
        return Err(Green2Error::LabelMismatch(format!(
            "class function has {} values, the Levi has {} classes",
            psi.len(),
            q.rows.len()
        )));
    }
    Ok((0..q.cols.len()).map(|j| q.entries.iter().zip(psi).map(|(row, x)| &row[j] * x).sum()).collect())
}
