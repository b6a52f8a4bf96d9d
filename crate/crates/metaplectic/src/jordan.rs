//! The Jordan algebra V = Sym(r,ℂ), the polynomial space 𝔭 spanned by the
//! translates of Q = Δ², and the cocycle action κ of translations, dilations and
//! the inversion σ.
//!
//! Coordinates on Sym(r,ℂ) are the upper-triangle entries in row-major order; the
//! coordinate x_{ij} is the matrix entry itself (no √2 normalization).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::matrix::{rref, Matrix};
use crate::poly::{MultiIndex, Polynomial, QPoly};
use crate::scalar::{GaussianRational, Scalar};

/// Number of coordinates r(r+1)/2.
pub fn nvars(r: usize) -> usize {
    r * (r + 1) / 2
}

/// Upper-triangle index pairs in coordinate order.
pub fn coordinate_pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect()
}

/// Coordinate index of entry (i, j) (either order).
pub fn coordinate_index(r: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * r - i * (i + 1) / 2 + j
}

/// Recovers r from the number of coordinates.
pub fn rank_from_nvars(n: usize) -> Result<usize> {
    (1..=n)
        .find(|&r| nvars(r) == n)
        .ok_or(Error::DimensionMismatch { expected: n, got: n })
}

/// A symmetric r×r matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T: Scalar> {
    m: Matrix<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                got: m.cols(),
            });
        }
        let res = m.symmetry_residual();
        let ok = if T::EXACT { m == m.transpose() } else { res <= 1e-14 };
        if !ok {
            return Err(Error::NotSymmetric(res));
        }
        Ok(SymMatrix { m })
    }

    pub fn identity(r: usize) -> Self {
        SymMatrix { m: Matrix::identity(r) }
    }

    pub fn from_coords(r: usize, coords: &[T]) -> Self {
        SymMatrix {
            m: Matrix::from_fn(r, r, |i, j| coords[coordinate_index(r, i, j)].clone()),
        }
    }

    pub fn r(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn coords(&self) -> Vec<T> {
        coordinate_pairs(self.r())
            .into_iter()
            .map(|(i, j)| self.m[(i, j)].clone())
            .collect()
    }
}

/// τ(x) = tr x.
pub fn jordan_trace<T: Scalar>(x: &SymMatrix<T>) -> T {
    x.m.trace()
}

/// Δ(x) = det x.
pub fn jordan_det<T: Scalar>(x: &SymMatrix<T>) -> T {
    x.m.det()
}

/// The generic symmetric matrix whose entries are the coordinate functions.
pub fn generic_matrix<T: Scalar>(r: usize) -> Vec<Vec<Polynomial<T>>> {
    let n = nvars(r);
    (0..r)
        .map(|i| (0..r).map(|j| Polynomial::var(n, coordinate_index(r, i, j))).collect())
        .collect()
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn poly_det<T: Scalar>(m: &[Vec<Polynomial<T>>], nv: usize) -> Polynomial<T> {
    let k = m.len();
    match k {
        0 => Polynomial::one(nv),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Polynomial::zero(nv);
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial<T>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][c] * &poly_det(&minor, nv);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Adjugate of a square polynomial matrix: adj(m)·m = det(m)·I.
pub fn poly_adjugate<T: Scalar>(m: &[Vec<Polynomial<T>>], nv: usize) -> Vec<Vec<Polynomial<T>>> {
    let k = m.len();
    if k == 1 {
        return vec![vec![Polynomial::one(nv)]];
    }
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let minor: Vec<Vec<Polynomial<T>>> = (0..k)
                        .filter(|&a| a != j)
                        .map(|a| (0..k).filter(|&b| b != i).map(|b| m[a][b].clone()).collect())
                        .collect();
                    let d = poly_det(&minor, nv);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -&d
                    }
                })
                .collect()
        })
        .collect()
}

/// Δ as a polynomial in the coordinates.
pub fn det_poly<T: Scalar>(r: usize) -> Polynomial<T> {
    poly_det(&generic_matrix::<T>(r), nvars(r))
}

/// Q = Δ², exact, of degree 2r.
pub fn q_poly(r: usize) -> QPoly {
    det_poly::<GaussianRational>(r).pow(2)
}

/// Element of the structure group, acting on V by z ↦ l₁·z·l₁ᵗ.
#[derive(Clone, Debug, PartialEq)]
pub struct StrElement<T: Scalar> {
    l1: Matrix<T>,
}

impl<T: Scalar> StrElement<T> {
    pub fn new(l1: Matrix<T>) -> Result<Self> {
        if !l1.is_square() {
            return Err(Error::DimensionMismatch {
                expected: l1.rows(),
                got: l1.cols(),
            });
        }
        if l1.det().is_negligible() {
            return Err(Error::Singular);
        }
        Ok(StrElement { l1 })
    }

    pub fn l1(&self) -> &Matrix<T> {
        &self.l1
    }

    pub fn compose(&self, o: &Self) -> Self {
        StrElement {
            l1: self.l1.mul(&o.l1),
        }
    }

    pub fn act(&self, z: &SymMatrix<T>) -> SymMatrix<T> {
        SymMatrix {
            m: self.l1.mul(&z.m).mul(&self.l1.transpose()),
        }
    }
}

/// χ(ℓ) = det(l₁)², the character with Δ(ℓz) = χ(ℓ)Δ(z).
pub fn chi<T: Scalar>(l: &StrElement<T>) -> T {
    l.l1.det().pow(2)
}

/// Matrix of the linear map z ↦ l₁ z l₁ᵗ on coordinates.
pub fn coordinate_action<T: Scalar>(l1: &Matrix<T>) -> Matrix<T> {
    let r = l1.rows();
    let pairs = coordinate_pairs(r);
    let n = pairs.len();
    let mut out = Matrix::zeros(n, n);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        let s = Matrix::from_fn(r, r, |a, b| {
            if (a, b) == (i, j) || (a, b) == (j, i) {
                T::one()
            } else {
                T::zero()
            }
        });
        let img = l1.mul(&s).mul(&l1.transpose());
        for (k, &(a, b)) in pairs.iter().enumerate() {
            out[(k, c)] = img[(a, b)].clone();
        }
    }
    out
}

/// (κ(τ_a)p)(z) = p(z − a).
pub fn kappa_translation<T: Scalar>(a: &SymMatrix<T>, p: &Polynomial<T>) -> Result<Polynomial<T>> {
    p.translate(&a.coords())
}

/// (κ(ℓ)p)(z) = χ(ℓ)·p(ℓ⁻¹z).
pub fn kappa_dilation<T: Scalar>(l: &StrElement<T>, p: &Polynomial<T>) -> Result<Polynomial<T>> {
    let r = l.l1.rows();
    if p.nvars() != nvars(r) {
        return Err(Error::DimensionMismatch {
            expected: nvars(r),
            got: p.nvars(),
        });
    }
    let inv = l.l1.inverse()?;
    Ok(p.substitute_linear(&coordinate_action(&inv))?.scale(&chi(l)))
}

/// Derivative of κ(exp(tω)) at t = 0, where ω = (ω₁, −ω₁ᵗ) acts by z ↦ ω₁z + zω₁ᵗ:
/// dκ(ω)p = 2tr(ω₁)·p − ∇p·(ω₁z + zω₁ᵗ).
pub fn kappa_dilation_derivative<T: Scalar>(omega1: &Matrix<T>, p: &Polynomial<T>) -> Result<Polynomial<T>> {
    let r = omega1.rows();
    let n = nvars(r);
    if p.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.nvars(),
        });
    }
    let pairs = coordinate_pairs(r);
    let mut field = vec![Polynomial::zero(n); n];
    for (c, &(i, j)) in pairs.iter().enumerate() {
        let s = Matrix::from_fn(r, r, |a, b| {
            if (a, b) == (i, j) || (a, b) == (j, i) {
                T::one()
            } else {
                T::zero()
            }
        });
        let img = omega1.mul(&s).add(&s.mul(&omega1.transpose()));
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let term = Polynomial::var(n, c).scale(&img[(a, b)]);
            field[k] = &field[k] + &term;
        }
    }
    let two_tr = omega1.trace() * T::from_i64(2);
    let mut out = p.scale(&two_tr);
    for (k, v) in field.iter().enumerate() {
        out = &out - &(&p.diff(k)? * v);
    }
    Ok(out)
}

/// (κ(σ)p)(z) = Q(z)·p(−z⁻¹), computed by substituting −adj(z)/Δ(z) and cancelling
/// the powers of Δ exactly.
pub fn kappa_inversion(p: &QPoly) -> Result<QPoly> {
    let n = p.nvars();
    let r = rank_from_nvars(n)?;
    let g = generic_matrix::<GaussianRational>(r);
    let adj = poly_adjugate(&g, n);
    let delta = poly_det(&g, n);
    let subs: Vec<QPoly> = coordinate_pairs(r).into_iter().map(|(i, j)| adj[i][j].clone()).collect();
    let mut out = QPoly::zero(n);
    for (d, part) in p.homogeneous_parts() {
        let mut v = part.compose(&subs)?;
        if d % 2 == 1 {
            v = -&v;
        }
        if d <= 2 {
            v = &v * &delta.pow(2 - d);
        } else {
            for _ in 0..(d - 2) {
                v = v.div_exact(&delta).map_err(|_| {
                    Error::NonPolynomialResult(format!("degree-{d} component does not cancel Δ^{}", d - 2))
                })?;
            }
        }
        out = &out + &v;
    }
    Ok(out)
}

/// The linear form z ↦ τ(vz) = tr(vz); off-diagonal coordinates carry weight 2.
pub fn tau_v<T: Scalar>(v: &SymMatrix<T>) -> Polynomial<T> {
    let r = v.r();
    let n = nvars(r);
    Polynomial::from_terms(
        n,
        coordinate_pairs(r).into_iter().enumerate().map(|(k, (i, j))| {
            let c = if i == j {
                v.m[(i, i)].clone()
            } else {
                v.m[(i, j)].clone() + v.m[(j, i)].clone()
            };
            (MultiIndex::unit(n, k), c)
        }),
    )
}

/// τ_vσ = κ(σ)τ_v.
pub fn tau_v_sigma(v: &SymMatrix<GaussianRational>) -> Result<QPoly> {
    kappa_inversion(&tau_v(v))
}

/// Orbit point ξ_z = zzᵗ.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint<T: Scalar> {
    pub z: Vec<T>,
    pub matrix: SymMatrix<T>,
}

pub fn xi_from_z<T: Scalar>(z: &[T]) -> OrbitPoint<T> {
    let r = z.len();
    OrbitPoint {
        z: z.to_vec(),
        matrix: SymMatrix {
            m: Matrix::from_fn(r, r, |i, j| z[i].clone() * z[j].clone()),
        },
    }
}

/// Exact row-reduced data of one homogeneous component of 𝔭.
#[derive(Clone, Debug)]
struct Component {
    columns: Vec<MultiIndex>,
    rows: Vec<Vec<GaussianRational>>,
    pivots: Vec<usize>,
}

impl Component {
    fn reduce(&self, p: &QPoly) -> Vec<GaussianRational> {
        let mut v: Vec<GaussianRational> = self.columns.iter().map(|a| p.coeff(a)).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc].clone();
            if f.is_exact_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        v
    }
}

/// Graded basis of 𝔭 = span{Q(z − a)}.
#[derive(Clone, Debug)]
pub struct PSpaceBasis {
    pub r: usize,
    pub basis: Vec<QPoly>,
    /// j ↦ indices into `basis` of the homogeneous elements of degree j + r.
    pub grading: BTreeMap<i32, Vec<usize>>,
    components: BTreeMap<u32, Component>,
}

impl PSpaceBasis {
    fn build(r: usize) -> Self {
        let n = nvars(r);
        let q = q_poly(r);
        // Q(z − a) in 2n variables: z first, then a.
        let subs: Vec<QPoly> = (0..n)
            .map(|k| &QPoly::var(2 * n, k) - &QPoly::var(2 * n, n + k))
            .collect();
        let shifted = q.compose(&subs).expect("matching variable count");
        let mut by_a: BTreeMap<MultiIndex, Vec<(MultiIndex, GaussianRational)>> = BTreeMap::new();
        for (alpha, c) in shifted.terms() {
            let (za, aa) = alpha.entries().split_at(n);
            by_a.entry(MultiIndex::new(aa.to_vec()))
                .or_default()
                .push((MultiIndex::new(za.to_vec()), c.clone()));
        }
        let mut by_degree: BTreeMap<u32, Vec<QPoly>> = BTreeMap::new();
        for (_, terms) in by_a {
            let p = QPoly::from_terms(n, terms);
            if let Some(d) = p.homogeneous_parts().keys().next().copied() {
                by_degree.entry(d).or_default().push(p);
            }
        }
        let mut basis = Vec::new();
        let mut grading = BTreeMap::new();
        let mut components = BTreeMap::new();
        for (d, polys) in by_degree {
            let mut columns = MultiIndex::of_degree(n, d);
            columns.reverse();
            let rows: Vec<Vec<GaussianRational>> = polys
                .iter()
                .map(|p| columns.iter().map(|a| p.coeff(a)).collect())
                .collect();
            let (rows, pivots) = rref(rows, columns.len(), 0.0);
            let j = d as i32 - r as i32;
            let mut idx = Vec::new();
            for row in &rows {
                idx.push(basis.len());
                basis.push(QPoly::from_terms(
                    n,
                    columns.iter().cloned().zip(row.iter().cloned()),
                ));
            }
            grading.insert(j, idx);
            components.insert(d, Component { columns, rows, pivots });
        }
        PSpaceBasis {
            r,
            basis,
            grading,
            components,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// dim 𝔭_j.
    pub fn component_dim(&self, j: i32) -> usize {
        self.grading.get(&j).map_or(0, |v| v.len())
    }

    pub fn component(&self, j: i32) -> Vec<&QPoly> {
        self.grading
            .get(&j)
            .map(|v| v.iter().map(|&i| &self.basis[i]).collect())
            .unwrap_or_default()
    }

    /// Exact membership in 𝔭.
    pub fn contains(&self, p: &QPoly) -> bool {
        if p.nvars() != nvars(self.r) {
            return false;
        }
        p.homogeneous_parts().iter().all(|(d, part)| match self.components.get(d) {
            Some(c) => c.reduce(part).iter().all(|x| x.is_exact_zero()),
            None => false,
        })
    }

    /// Exact membership in the graded piece 𝔭_j.
    pub fn contains_in(&self, p: &QPoly, j: i32) -> bool {
        if p.is_zero() {
            return true;
        }
        let d = j + self.r as i32;
        d >= 0 && p.is_homogeneous() && p.degree() == d as i64 && self.contains(p)
    }
}

static PSPACE_R2: OnceLock<PSpaceBasis> = OnceLock::new();
static PSPACE_R3: OnceLock<PSpaceBasis> = OnceLock::new();

/// Basis of 𝔭 for r ∈ {2, 3}, built once per r.
pub fn pspace_basis(r: usize) -> Result<&'static PSpaceBasis> {
    match r {
        2 => Ok(PSPACE_R2.get_or_init(|| PSpaceBasis::build(2))),
        3 => Ok(PSPACE_R3.get_or_init(|| PSpaceBasis::build(3))),
        _ => Err(Error::UnsupportedRank(r)),
    }
}

/// Splits p into homogeneous components indexed by j = degree − r.
pub fn grading_project<T: Scalar>(p: &Polynomial<T>) -> Result<BTreeMap<i32, Polynomial<T>>> {
    let r = rank_from_nvars(p.nvars())?;
    let mut out = BTreeMap::new();
    for (d, part) in p.homogeneous_parts() {
        if d as usize > 2 * r {
            return Err(Error::DegreeOutOfRange(d as i64));
        }
        out.insert(d as i32 - r as i32, part);
    }
    Ok(out)
}
