//! Sparse operators on a degree-truncated multi-index basis.
//!
//! The same indexing serves monomials z^α (Fock side) and Hermite functions h_α
//! (Schrödinger side); "degree" is |α| in both. Every operator carries the set of
//! degree shifts it can produce and a safe window: the largest input degree W such
//! that every column of degree ≤ W equals the untruncated column projected to
//! degree ≤ D. Composition and sums propagate the window mechanically.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MultiIndex;

/// Coefficients over a multi-index basis.
pub type Coeffs = BTreeMap<MultiIndex, Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// All multi-indices in `nvars` variables with |α| ≤ D, in graded-lex order.
#[derive(Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    max_degree: u32,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, max_degree: u32) -> Arc<Self> {
        let indices = MultiIndex::up_to_degree(nvars, max_degree);
        let lookup = indices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Arc::new(MonomialBasis {
            nvars,
            max_degree,
            indices,
            lookup,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index(&self, i: usize) -> &MultiIndex {
        &self.indices[i]
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, a: &MultiIndex) -> Option<usize> {
        self.lookup.get(a).copied()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.indices[i].degree() as i32
    }
}

/// Sparse complex matrix on a [`MonomialBasis`], stored by columns.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    basis: Arc<MonomialBasis>,
    cols: Vec<BTreeMap<usize, Complex64>>,
    degree_shift: BTreeSet<i32>,
    unbounded_above: bool,
    unbounded_below: bool,
    safe_window: i32,
}

/// Serializable form: one entry per nonzero, indices as multi-indices.
#[derive(Serialize)]
pub struct OperatorJson {
    pub nvars: usize,
    pub max_degree: u32,
    pub safe_window: i32,
    pub degree_shift: Vec<i32>,
    pub entries: Vec<EntryJson>,
}

#[derive(Serialize)]
pub struct EntryJson {
    pub row: Vec<u32>,
    pub col: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

fn add_into(col: &mut BTreeMap<usize, Complex64>, i: usize, v: Complex64) {
    if v == ZERO {
        return;
    }
    let e = col.entry(i).or_insert(ZERO);
    *e += v;
}

fn prune(col: &mut BTreeMap<usize, Complex64>) {
    col.retain(|_, v| *v != ZERO);
}

impl OperatorMatrix {
    /// Builds an operator from its exact action on the infinite basis. Output terms of
    /// degree above D are dropped after their shift is recorded, so the window is D.
    pub fn from_action(basis: &Arc<MonomialBasis>, action: impl Fn(&MultiIndex) -> Coeffs) -> Self {
        let mut degree_shift = BTreeSet::new();
        let cols = basis
            .indices()
            .iter()
            .map(|a| {
                let mut col = BTreeMap::new();
                for (b, v) in action(a) {
                    if v == ZERO {
                        continue;
                    }
                    degree_shift.insert(b.degree() as i32 - a.degree() as i32);
                    if let Some(i) = basis.position(&b) {
                        add_into(&mut col, i, v);
                    }
                }
                prune(&mut col);
                col
            })
            .collect();
        OperatorMatrix {
            basis: basis.clone(),
            cols,
            degree_shift,
            unbounded_above: false,
            unbounded_below: false,
            safe_window: basis.max_degree() as i32,
        }
    }

    /// Builds an operator from already projected columns whose untruncated form is
    /// not known to be degree-bounded (quadrature-assembled operators).
    pub fn from_dense_columns(
        basis: &Arc<MonomialBasis>,
        cols: Vec<Vec<Complex64>>,
        unbounded_above: bool,
        unbounded_below: bool,
    ) -> Self {
        let mut degree_shift = BTreeSet::new();
        let cols: Vec<BTreeMap<usize, Complex64>> = cols
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                c.into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != ZERO)
                    .map(|(i, v)| {
                        degree_shift.insert(basis.degree(i) - basis.degree(j));
                        (i, v)
                    })
                    .collect()
            })
            .collect();
        OperatorMatrix {
            basis: basis.clone(),
            cols,
            degree_shift,
            unbounded_above,
            unbounded_below,
            safe_window: basis.max_degree() as i32,
        }
    }

    pub fn identity(basis: &Arc<MonomialBasis>) -> Self {
        Self::diagonal(basis, |_| Complex64::new(1.0, 0.0))
    }

    pub fn zero(basis: &Arc<MonomialBasis>) -> Self {
        OperatorMatrix {
            basis: basis.clone(),
            cols: vec![BTreeMap::new(); basis.len()],
            degree_shift: BTreeSet::new(),
            unbounded_above: false,
            unbounded_below: false,
            safe_window: basis.max_degree() as i32,
        }
    }

    pub fn diagonal(basis: &Arc<MonomialBasis>, f: impl Fn(&MultiIndex) -> Complex64) -> Self {
        Self::from_action(basis, |a| {
            let mut c = Coeffs::new();
            c.insert(a.clone(), f(a));
            c
        })
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.basis.max_degree()
    }

    pub fn safe_window(&self) -> i32 {
        self.safe_window
    }

    pub fn degree_shift(&self) -> &BTreeSet<i32> {
        &self.degree_shift
    }

    pub fn unbounded_above(&self) -> bool {
        self.unbounded_above
    }

    /// Replaces the window by a smaller one, e.g. after a series truncation.
    pub fn with_window(mut self, w: i32) -> Self {
        self.safe_window = self.safe_window.min(w);
        self
    }

    /// Marks the untruncated operator as raising degree without bound.
    pub fn mark_unbounded_above(mut self) -> Self {
        self.unbounded_above = true;
        self
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.cols[col].get(&row).copied().unwrap_or(ZERO)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// Nonzero entries as (row, col, value), column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(&i, &v)| (i, j, v)))
    }

    fn check_basis(&self, o: &Self) -> Result<()> {
        if *self.basis != *o.basis {
            return Err(Error::TruncationMismatch(self.max_degree(), o.max_degree()));
        }
        Ok(())
    }

    fn shift_bounds(&self) -> (i64, i64) {
        let lo = if self.unbounded_below {
            i64::MIN / 4
        } else {
            self.degree_shift.first().map_or(0, |&s| s as i64)
        };
        let hi = if self.unbounded_above {
            i64::MAX / 4
        } else {
            self.degree_shift.last().map_or(0, |&s| s as i64)
        };
        (lo, hi)
    }

    /// self ∘ o.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        self.check_basis(o)?;
        let d = self.max_degree() as i64;
        let cols: Vec<BTreeMap<usize, Complex64>> = o
            .cols
            .iter()
            .map(|c2| {
                let mut out = BTreeMap::new();
                for (&k, &v) in c2 {
                    for (&i, &w) in &self.cols[k] {
                        add_into(&mut out, i, w * v);
                    }
                }
                prune(&mut out);
                out
            })
            .collect();
        let (lo1, _) = self.shift_bounds();
        let (_, hi2) = o.shift_bounds();
        let w1 = self.safe_window as i64;
        let w2 = o.safe_window as i64;
        let ok = |e: i64| {
            e <= w2
                && (lo1 >= 0 || e.saturating_add(hi2) <= d)
                && (w1 >= d || e.saturating_add(hi2).min(d) <= w1)
        };
        let mut w = -1i64;
        while w < d && ok(w + 1) {
            w += 1;
        }
        let degree_shift = if self.degree_shift.is_empty() || o.degree_shift.is_empty() {
            BTreeSet::new()
        } else {
            self.degree_shift
                .iter()
                .flat_map(|a| o.degree_shift.iter().map(move |b| a + b))
                .collect()
        };
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            cols,
            degree_shift,
            unbounded_above: self.unbounded_above || o.unbounded_above,
            unbounded_below: self.unbounded_below || o.unbounded_below,
            safe_window: w as i32,
        })
    }

    fn combine(&self, o: &Self, s: Complex64) -> Result<Self> {
        self.check_basis(o)?;
        let cols = self
            .cols
            .iter()
            .zip(&o.cols)
            .map(|(a, b)| {
                let mut out = a.clone();
                for (&i, &v) in b {
                    add_into(&mut out, i, s * v);
                }
                prune(&mut out);
                out
            })
            .collect();
        Ok(OperatorMatrix {
            basis: self.basis.clone(),
            cols,
            degree_shift: self.degree_shift.union(&o.degree_shift).copied().collect(),
            unbounded_above: self.unbounded_above || o.unbounded_above,
            unbounded_below: self.unbounded_below || o.unbounded_below,
            safe_window: self.safe_window.min(o.safe_window),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for c in &mut out.cols {
            for v in c.values_mut() {
                *v *= s;
            }
            prune(c);
        }
        if s == ZERO {
            out.degree_shift.clear();
        }
        out
    }

    /// self∘o − o∘self.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.compose(o)?.sub(&o.compose(self)?)
    }

    /// Adjoint for the inner product Σ conj(φ_α)ψ_α w_α.
    pub fn weighted_adjoint(&self, weight: impl Fn(&MultiIndex) -> f64) -> Self {
        let w: Vec<f64> = self.basis.indices().iter().map(weight).collect();
        let mut cols = vec![BTreeMap::new(); self.dim()];
        for (i, j, v) in self.entries() {
            cols[i].insert(j, v.conj() * (w[i] / w[j]));
        }
        let d = self.max_degree() as i32;
        OperatorMatrix {
            basis: self.basis.clone(),
            cols,
            degree_shift: self.degree_shift.iter().map(|s| -s).collect(),
            unbounded_above: self.unbounded_below,
            unbounded_below: self.unbounded_above,
            safe_window: if self.safe_window >= d { d } else { -1 },
        }
    }

    /// Largest entry difference over columns of degree ≤ `window`.
    pub fn max_abs_diff_on(&self, o: &Self, window: i32) -> Result<f64> {
        self.check_basis(o)?;
        let mut m = 0.0f64;
        for j in 0..self.dim() {
            if self.basis.degree(j) > window {
                continue;
            }
            let (a, b) = (&self.cols[j], &o.cols[j]);
            for (&i, &v) in a {
                m = m.max((v - b.get(&i).copied().unwrap_or(ZERO)).norm());
            }
            for (&i, &v) in b {
                if !a.contains_key(&i) {
                    m = m.max(v.norm());
                }
            }
        }
        Ok(m)
    }

    /// Difference on the intersection of both safe windows.
    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        self.max_abs_diff_on(o, self.safe_window.min(o.safe_window))
    }

    /// Largest entry over columns of degree ≤ `window`.
    pub fn max_abs_on(&self, window: i32) -> f64 {
        (0..self.dim())
            .filter(|&j| self.basis.degree(j) <= window)
            .flat_map(|j| self.cols[j].values())
            .fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Applies the operator; every input term must lie in the safe window.
    pub fn apply(&self, v: &Coeffs) -> Result<Coeffs> {
        let mut out = BTreeMap::new();
        for (a, &c) in v {
            let deg = a.degree() as i32;
            if deg > self.safe_window {
                return Err(Error::SafeWindowExhausted {
                    degree: deg as i64,
                    window: self.safe_window as i64,
                });
            }
            let j = self.basis.position(a).ok_or(Error::DegreeOutOfRange(deg as i64))?;
            for (&i, &w) in &self.cols[j] {
                add_into(&mut out, i, w * c);
            }
        }
        prune(&mut out);
        Ok(out.into_iter().map(|(i, v)| (self.basis.index(i).clone(), v)).collect())
    }

    /// Column-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        self.cols
            .iter()
            .map(|c| {
                let mut col = vec![ZERO; self.dim()];
                for (&i, &v) in c {
                    col[i] = v;
                }
                col
            })
            .collect()
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            nvars: self.basis.nvars(),
            max_degree: self.max_degree(),
            safe_window: self.safe_window,
            degree_shift: self.degree_shift.iter().copied().collect(),
            entries: self
                .entries()
                .map(|(i, j, v)| EntryJson {
                    row: self.basis.index(i).entries().to_vec(),
                    col: self.basis.index(j).entries().to_vec(),
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }

    /// One line per nonzero entry: row multi-index, column multi-index, re, im.
    pub fn to_csv(&self) -> String {
        let join = |a: &MultiIndex| a.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = String::from("row,col,re,im\n");
        for (i, j, v) in self.entries() {
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e}\n",
                join(self.basis.index(i)),
                join(self.basis.index(j)),
                v.re,
                v.im
            ));
        }
        out
    }
}

/// Sum of a list of operators on one basis.
pub fn sum(basis: &Arc<MonomialBasis>, ops: impl IntoIterator<Item = OperatorMatrix>) -> Result<OperatorMatrix> {
    ops.into_iter().try_fold(OperatorMatrix::zero(basis), |acc, o| acc.add(&o))
}

fn accumulate(out: &mut Coeffs, a: MultiIndex, v: Complex64) {
    let e = out.entry(a).or_insert(ZERO);
    *e += v;
}

/// Linear combination of coefficient maps, zeros pruned.
pub fn coeffs_axpy(x: &Coeffs, s: Complex64, y: &Coeffs) -> Coeffs {
    let mut out = x.clone();
    for (a, &v) in y {
        accumulate(&mut out, a.clone(), s * v);
    }
    out.retain(|_, v| *v != ZERO);
    out
}

pub fn coeffs_scale(x: &Coeffs, s: Complex64) -> Coeffs {
    x.iter().map(|(a, &v)| (a.clone(), v * s)).filter(|(_, v)| *v != ZERO).collect()
}

/// Multiplication by z_i on monomials.
pub fn mono_mul(v: &Coeffs, i: usize) -> Coeffs {
    v.iter()
        .map(|(a, &c)| (a.shifted(i, 1).expect("raising never fails"), c))
        .collect()
}

/// ∂/∂z_i on monomials.
pub fn mono_diff(v: &Coeffs, i: usize) -> Coeffs {
    v.iter()
        .filter_map(|(a, &c)| {
            let k = a.get(i);
            (k > 0).then(|| (a.shifted(i, -1).expect("k > 0"), c * k as f64))
        })
        .collect()
}

/// Raising operator a†_i h_n = √(n+1) h_{n+1}.
pub fn herm_raise(v: &Coeffs, i: usize) -> Coeffs {
    v.iter()
        .map(|(a, &c)| {
            let n = a.get(i) as f64;
            (a.shifted(i, 1).expect("raising never fails"), c * (n + 1.0).sqrt())
        })
        .collect()
}

/// Lowering operator a_i h_n = √n h_{n−1}.
pub fn herm_lower(v: &Coeffs, i: usize) -> Coeffs {
    v.iter()
        .filter_map(|(a, &c)| {
            let n = a.get(i);
            (n > 0).then(|| (a.shifted(i, -1).expect("n > 0"), c * (n as f64).sqrt()))
        })
        .collect()
}

/// Multiplication by x_i = (a_i + a†_i)/√2 on Hermite functions.
pub fn herm_x(v: &Coeffs, i: usize) -> Coeffs {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    coeffs_scale(&coeffs_axpy(&herm_lower(v, i), Complex64::new(1.0, 0.0), &herm_raise(v, i)), s)
}

/// ∂/∂x_i = (a_i − a†_i)/√2 on Hermite functions.
pub fn herm_d(v: &Coeffs, i: usize) -> Coeffs {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    coeffs_scale(&coeffs_axpy(&herm_lower(v, i), Complex64::new(-1.0, 0.0), &herm_raise(v, i)), s)
}

pub fn singleton(a: &MultiIndex) -> Coeffs {
    let mut c = Coeffs::new();
    c.insert(a.clone(), Complex64::new(1.0, 0.0));
    c
}
