//! Tables computed from the closed forms, and raw dumps of operator matrices and of
//! the graded basis of 𝔭.

use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

use super::{fmt_complex, fmt_f64, to_json_string};
use crate::bargmann::{bargmann_exact, bargmann_matrix};
use crate::error::{Error, Result};
use crate::fock::{
    a_const, c_const, euler_op, rho_e, rho_f, rho_h0, rho_sigma_e, rho_sigma_f, rho_sigma_h0,
};
use crate::harmonic::harmonic_dim;
use crate::jordan::pspace_basis;
use crate::matrix::CMatrix;
use crate::operator::OperatorMatrix;
use crate::poly::{MultiIndex, PolynomialJson};
use crate::scalar::GaussianRational as Q;
use crate::schrodinger::{r_j, HermiteVector};
use crate::sp::{bracket, g0, special_elements};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Norms,
    Brackets,
    KernelMap,
    Ktypes,
}

impl FromStr for TableKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norms" => Ok(TableKind::Norms),
            "brackets" => Ok(TableKind::Brackets),
            "kernel-map" => Ok(TableKind::KernelMap),
            "ktypes" => Ok(TableKind::Ktypes),
            _ => Err(Error::UnknownTable(s.to_string())),
        }
    }
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::Norms => "norms",
            TableKind::Brackets => "brackets",
            TableKind::KernelMap => "kernel-map",
            TableKind::Ktypes => "ktypes",
        }
    }

    /// Default upper bound: m for norms, n for kernel-map, K for ktypes.
    pub fn default_max(self) -> u32 {
        match self {
            TableKind::Norms => 3,
            TableKind::Brackets => 0,
            TableKind::KernelMap => 4,
            TableKind::Ktypes => 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::InvalidConfig(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Complex(Complex64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Real(x) => fmt_f64(*x),
            Cell::Complex(z) => fmt_complex(*z),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => Value::from(*n),
            Cell::Real(x) => Value::from(*x),
            Cell::Complex(z) => {
                let mut m = Map::new();
                m.insert("re".into(), Value::from(z.re));
                m.insert("im".into(), Value::from(z.im));
                Value::Object(m)
            }
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub r: usize,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect())
                    })
                    .collect();
                let mut m = Map::new();
                m.insert("table".into(), Value::from(self.name.as_str()));
                m.insert("r".into(), Value::from(self.r));
                m.insert("columns".into(), Value::from(self.columns.clone()));
                m.insert("rows".into(), Value::Array(rows));
                to_json_string(&Value::Object(m))
            }
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    out += &row.iter().map(Cell::render).collect::<Vec<_>>().join(",");
                    out.push('\n');
                }
                out
            }
            Format::Text => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|j| cells.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
                    .collect();
                let line = |items: Vec<&str>| {
                    let s: Vec<String> = items.iter().zip(&widths).map(|(t, &w)| format!("{t:<w$}")).collect();
                    s.join("  ").trim_end().to_string() + "\n"
                };
                let mut out = line(self.columns.iter().map(String::as_str).collect());
                for r in &cells {
                    out += &line(r.iter().map(String::as_str).collect());
                }
                out
            }
        }
    }
}

fn half_integer(k: u32) -> String {
    if k.is_multiple_of(2) {
        (k / 2).to_string()
    } else {
        format!("{k}/2")
    }
}

/// Builds a table; `max` bounds m, n or K and defaults per table.
pub fn emit_table(kind: TableKind, r: usize, max: Option<u32>) -> Result<Table> {
    if r == 0 {
        return Err(Error::UnsupportedRank(r));
    }
    let max = max.unwrap_or(kind.default_max());
    let (columns, rows): (Vec<&str>, Vec<Vec<Cell>>) = match kind {
        TableKind::Norms => (
            vec!["m", "a_m", "c_m"],
            (0..=2 * max)
                .map(|k| vec![Cell::Text(half_integer(k)), Cell::Real(a_const(r, k)), Cell::Real(c_const(k))])
                .collect(),
        ),
        TableKind::Brackets => {
            if r < 2 {
                return Err(Error::UnsupportedRank(r));
            }
            let s = special_elements::<Q>(r);
            let k = Q::ratio(1, 2 * (1 - r as i64));
            let rm1 = Q::integer(r as i64 - 1);
            let rows = [
                ("[E,F] = H0/(2(1-r))", bracket(&s.e, &s.f)?, s.h0.scale(&k)),
                ("[H0,E] = -(r-1)E", bracket(&s.h0, &s.e)?, s.e.scale(&-rm1.clone())),
                ("[H0,F] = (r-1)F", bracket(&s.h0, &s.f)?, s.f.scale(&rm1)),
            ]
            .into_iter()
            .map(|(name, a, b)| vec![Cell::Text(name.into()), Cell::Real(a.sub(&b).matrix().to_c64().max_abs())])
            .collect();
            (vec!["identity", "residual"], rows)
        }
        TableKind::KernelMap => {
            let rows = MultiIndex::up_to_degree(r, max)
                .into_iter()
                .map(|a| {
                    let img = bargmann_exact(&HermiteVector::basis_vector(a.clone()));
                    let coeff = img.coeffs.get(&a).copied().unwrap_or_default();
                    let label = if r == 1 {
                        Cell::Int(a.get(0) as i64)
                    } else {
                        Cell::Text(a.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
                    };
                    vec![label, Cell::Complex(coeff)]
                })
                .collect();
            (vec![if r == 1 { "n" } else { "alpha" }, "coefficient"], rows)
        }
        TableKind::Ktypes => {
            let rows = (0..=max)
                .map(|kk| {
                    let sum: usize = (0..=kk / 2).map(|j| harmonic_dim(r, kk - 2 * j)).sum();
                    let monos = MultiIndex::of_degree(r, kk).len();
                    vec![Cell::Int(kk as i64), Cell::Int(sum as i64), Cell::Int(monos as i64)]
                })
                .collect();
            (vec!["K", "harmonic_sum", "monomials"], rows)
        }
    };
    Ok(Table {
        name: kind.name().to_string(),
        r,
        columns: columns.into_iter().map(String::from).collect(),
        rows,
    })
}

/// Objects that `dump` can serialize.
pub const DUMP_NAMES: &[&str] = &[
    "bargmann",
    "e_tilde",
    "euler",
    "f_tilde",
    "fourier",
    "g0",
    "h0_tilde",
    "pspace",
    "rho_e",
    "rho_f",
    "rho_h0",
    "rho_sigma_e",
    "rho_sigma_f",
    "rho_sigma_h0",
];

#[derive(Serialize)]
struct PSpaceJson {
    r: usize,
    components: Vec<ComponentJson>,
}

#[derive(Serialize)]
struct ComponentJson {
    j: i32,
    basis: Vec<PolynomialJson>,
}

#[derive(Serialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<EntryJson>,
}

#[derive(Serialize)]
struct EntryJson {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

fn sp_matrix(name: &str, r: usize) -> Option<CMatrix> {
    let s = special_elements::<Complex64>(r);
    Some(match name {
        "e_tilde" => s.e.matrix().clone(),
        "f_tilde" => s.f.matrix().clone(),
        "h0_tilde" => s.h0.matrix().clone(),
        "g0" => g0(r).matrix().clone(),
        _ => return None,
    })
}

fn matrix_dump(m: &CMatrix, format: Format) -> String {
    let entries = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| m[(i, j)] != Complex64::default())
        .map(|(i, j)| EntryJson { row: i, col: j, re: m[(i, j)].re, im: m[(i, j)].im });
    match format {
        Format::Json => to_json_string(&MatrixJson { rows: m.rows(), cols: m.cols(), entries: entries.collect() }),
        _ => {
            let mut out = String::from("row,col,re,im\n");
            for e in entries {
                out += &format!("{},{},{},{}\n", e.row, e.col, fmt_f64(e.re), fmt_f64(e.im));
            }
            out
        }
    }
}

fn operator(name: &str, r: usize, d: u32) -> Result<OperatorMatrix> {
    Ok(match name {
        "bargmann" => bargmann_matrix(r, d),
        "euler" => euler_op(r, d),
        "fourier" => r_j(r, d),
        "rho_e" => rho_e(r, d),
        "rho_f" => rho_f(r, d),
        "rho_h0" => rho_h0(r, d),
        "rho_sigma_e" => rho_sigma_e(r, d),
        "rho_sigma_f" => rho_sigma_f(r, d),
        "rho_sigma_h0" => rho_sigma_h0(r, d),
        _ => return Err(Error::UnknownDump(name.to_string())),
    })
}

/// Serializes an operator matrix, a special element of 𝔰𝔭(r,ℂ) (JSON or CSV) or the
/// graded 𝔭-basis (r ∈ {2, 3}).
pub fn dump(name: &str, r: usize, d: u32, format: Format) -> Result<String> {
    if r == 0 {
        return Err(Error::UnsupportedRank(r));
    }
    if let Some(m) = sp_matrix(name, r) {
        return Ok(matrix_dump(&m, format));
    }
    if name == "pspace" {
        let b = pspace_basis(r)?;
        let components: Vec<ComponentJson> = b
            .grading
            .keys()
            .map(|&j| ComponentJson {
                j,
                basis: b.component(j).into_iter().map(|p| p.to_json()).collect(),
            })
            .collect();
        return Ok(match format {
            Format::Json => to_json_string(&PSpaceJson { r, components }),
            _ => {
                let mut out = String::from("j,index,alpha,re,im\n");
                for c in &components {
                    for (i, p) in c.basis.iter().enumerate() {
                        for t in &p.terms {
                            let alpha = t.alpha.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
                            out += &format!("{},{},{},{},{}\n", c.j, i, alpha, fmt_f64(t.re), fmt_f64(t.im));
                        }
                    }
                }
                out
            }
        });
    }
    let op = operator(name, r, d)?;
    Ok(match format {
        Format::Json => to_json_string(&op.to_json()),
        _ => op.to_csv(),
    })
}
