//! Schrödinger model on L²(ℝʳ) in the orthonormal Hermite-function basis h_α,
//! (−Δ + |x|²)h_α = (2|α| + r)h_α.
//!
//! Lie-algebra action of a real X = [[A, B], [C, −Aᵗ]]:
//!
//! | operator | lower block C      | upper block B      | diagonal block A          |
//! |----------|--------------------|--------------------|---------------------------|
//! | dR       | −(i/2)τ_C(∂²)      | −(i/2)τ_B(x²)      | ½tr A + (Aᵗx)·∇           |
//! | dRσ      | −(i/2)τ_C(x²)      | −(i/2)τ_B(∂²)      | −½tr A − (Ax)·∇           |
//!
//! x_i and ∂_i act through the ladder operators, so every dR(X) is assembled from
//! tridiagonal building blocks. Group generators that are not degree-bounded are
//! assembled from exact Gaussian integrals evaluated by Gauss–Hermite quadrature.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{bilinear, vector_field, Side};
use crate::matrix::CMatrix;
use crate::operator::{coeffs_axpy, coeffs_scale, herm_d, herm_x, singleton, Coeffs, MonomialBasis, OperatorMatrix};
use crate::poly::MultiIndex;
use crate::quadrature::{hermite_poly_values, GaussHermite, QuadratureRule};
use crate::sp::{Generator, SpAlgElement, Word};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest imaginary part accepted for a "real" algebra element.
pub const REAL_TOL: f64 = 1e-12;

/// Orthonormality drift above which a quadrature rule is rejected.
pub const DRIFT_TOL: f64 = 1e-8;

/// Quadrature-assembled entries below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-14;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// i^k.
fn i_pow(k: u32) -> Complex64 {
    [re(1.0), I, re(-1.0), -I][(k % 4) as usize]
}

/// A finitely supported element of L²(ℝʳ) in the Hermite basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteVector {
    pub r: usize,
    pub coeffs: Coeffs,
}

impl HermiteVector {
    pub fn zero(r: usize) -> Self {
        HermiteVector { r, coeffs: Coeffs::new() }
    }

    pub fn new(r: usize, coeffs: Coeffs) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, v)| *v != re(0.0)).collect();
        HermiteVector { r, coeffs }
    }

    pub fn basis_vector(alpha: MultiIndex) -> Self {
        let r = alpha.len();
        Self::new(r, singleton(&alpha))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.r, coeffs_axpy(&self.coeffs, re(1.0), &o.coeffs))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.r, coeffs_axpy(&self.coeffs, re(-1.0), &o.coeffs))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.r, coeffs_scale(&self.coeffs, s))
    }

    /// L² inner product, conjugate-linear in `self`.
    pub fn inner(&self, o: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .filter_map(|(a, c)| o.coeffs.get(a).map(|d| c.conj() * d))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.sub(o).coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|a| a.degree() as i64).max().unwrap_or(-1)
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.coeffs.iter().map(|(a, c)| c * hermite_eval(a, x)).sum()
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<Self> {
        Ok(Self::new(self.r, op.apply(&self.coeffs)?))
    }
}

/// Orthonormal Hermite function h_n(x). The recurrence runs on the polynomial part
/// with a separate logarithmic scale, so large n and |x| neither overflow nor
/// underflow early.
pub fn hermite_1d(n: u32, x: f64) -> f64 {
    const BIG: f64 = 1e100;
    let mut log_s = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            log_s += BIG.ln();
        }
    }
    if cur == 0.0 {
        0.0
    } else {
        cur.signum() * (cur.abs().ln() + log_s).exp()
    }
}

/// h_α(x) = Π h_{α_i}(x_i).
pub fn hermite_eval(alpha: &MultiIndex, x: &[f64]) -> f64 {
    alpha.entries().iter().zip(x).map(|(&n, &xi)| hermite_1d(n, xi)).product()
}

pub fn hermite_basis(r: usize, d: u32) -> Arc<MonomialBasis> {
    MonomialBasis::new(r, d)
}

/// Splits f into its even and odd parts; h_α(−x) = (−1)^{|α|}h_α(x).
pub fn parity_split(f: &HermiteVector) -> (HermiteVector, HermiteVector) {
    let (even, odd): (Coeffs, Coeffs) = f.coeffs.iter().map(|(a, c)| (a.clone(), *c)).partition(|(a, _)| a.degree() % 2 == 0);
    (HermiteVector::new(f.r, even), HermiteVector::new(f.r, odd))
}

/// Euler operator Σ x_i∂_i on the Hermite basis.
pub fn euler_op(r: usize, d: u32) -> OperatorMatrix {
    let id = CMatrix::identity(r);
    OperatorMatrix::from_action(&hermite_basis(r, d), |a| vector_field(&id, &singleton(a), herm_x, herm_d))
}

/// τ_v(x²) = Σ v_ij x_i x_j on Hermite coefficients.
pub fn tau_x2(v: &CMatrix, c: &Coeffs) -> Coeffs {
    bilinear(v, c, herm_x)
}

/// τ_v(∂²) = Σ v_ij ∂_i ∂_j on Hermite coefficients.
pub fn tau_dx2(v: &CMatrix, c: &Coeffs) -> Coeffs {
    bilinear(v, c, herm_d)
}

fn check_real(x: &SpAlgElement<Complex64>) -> Result<()> {
    let im = x.matrix().max_imag();
    if im > REAL_TOL {
        return Err(Error::NonReal(im));
    }
    Ok(())
}

fn action_of(x: &SpAlgElement<Complex64>, side: Side) -> impl Fn(&MultiIndex) -> Coeffs {
    let (a, b, c) = x.parts();
    let half_tr = a.trace() * 0.5;
    move |alpha: &MultiIndex| {
        let v = singleton(alpha);
        let (mul_part, diff_part, diag, field) = match side {
            Side::T => (&b, &c, half_tr, vector_field(&a.transpose(), &v, herm_x, herm_d)),
            Side::TSigma => (&c, &b, -half_tr, coeffs_scale(&vector_field(&a, &v, herm_x, herm_d), re(-1.0))),
        };
        let mut out = coeffs_scale(&tau_x2(mul_part, &v), -I * 0.5);
        out = coeffs_axpy(&out, -I * 0.5, &tau_dx2(diff_part, &v));
        out = coeffs_axpy(&out, diag, &v);
        coeffs_axpy(&out, re(1.0), &field)
    }
}

/// dR(X) on Hermite functions of degree ≤ D; X must be real.
pub fn d_r(x: &SpAlgElement<Complex64>, d: u32) -> Result<OperatorMatrix> {
    check_real(x)?;
    Ok(OperatorMatrix::from_action(&hermite_basis(x.r(), d), action_of(x, Side::T)))
}

/// dRσ(X) on Hermite functions of degree ≤ D; X must be real.
pub fn d_r_sigma(x: &SpAlgElement<Complex64>, d: u32) -> Result<OperatorMatrix> {
    check_real(x)?;
    Ok(OperatorMatrix::from_action(&hermite_basis(x.r(), d), action_of(x, Side::TSigma)))
}

/// [`d_r`] for `Side::T`, [`d_r_sigma`] for `Side::TSigma`.
pub fn d_r_side(x: &SpAlgElement<Complex64>, d: u32, side: Side) -> Result<OperatorMatrix> {
    match side {
        Side::T => d_r(x, d),
        Side::TSigma => d_r_sigma(x, d),
    }
}

/// Gauss–Hermite order used for Gaussian matrix elements on degree ≤ D.
pub fn gaussian_order(d: u32) -> usize {
    2 * d as usize + 8
}

/// p_0(z), …, p_n(z) for complex z, where h_k = p_k e^{−x²/2}.
fn hermite_poly_values_c(n: usize, z: Complex64) -> Vec<Complex64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(re(std::f64::consts::PI.powf(-0.25)));
    if n >= 1 {
        p.push(z * p[0] * std::f64::consts::SQRT_2);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = z * p[k] * (2.0 / (kf + 1.0)).sqrt() - p[k - 1] * (kf / (kf + 1.0)).sqrt();
        p.push(next);
    }
    p
}

/// M = LLᵗ for complex symmetric M (no conjugation), principal square root on each
/// pivot.
fn complex_cholesky(m: &CMatrix) -> Result<CMatrix> {
    let n = m.rows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut s = m[(j, j)];
        for k in 0..j {
            s -= l[(j, k)] * l[(j, k)];
        }
        if s.norm() < 1e-14 {
            return Err(Error::Singular);
        }
        l[(j, j)] = s.sqrt();
        for i in j + 1..n {
            let mut t = m[(i, j)];
            for k in 0..j {
                t -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = t / l[(j, j)];
        }
    }
    Ok(l)
}

/// Whether the real part of M is positive definite, i.e. e^{−xᵗMx} decays.
fn real_part_positive(m: &CMatrix) -> bool {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| 0.5 * (m[(i, j)].re + m[(j, i)].re)).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let ljk = a[j][k];
            a[j][j] -= ljk * ljk;
        }
        if a[j][j] <= 1e-14 {
            return false;
        }
        a[j][j] = a[j][j].sqrt();
        for i in j + 1..n {
            for k in 0..j {
                let t = a[i][k] * a[j][k];
                a[i][j] -= t;
            }
            a[i][j] /= a[j][j];
        }
    }
    true
}

/// Largest deviation from the identity of the Gram matrix of p_0, …, p_d under the
/// Gauss–Hermite rule of the given order.
pub fn orthonormality_drift(order: usize, d: u32) -> f64 {
    let g = GaussHermite::new(order);
    let n = d as usize;
    let vals: Vec<Vec<f64>> = g.nodes.iter().map(|&x| hermite_poly_values(n, x)).collect();
    let mut worst = 0.0f64;
    for a in 0..=n {
        for b in 0..=n {
            let s: f64 = vals.iter().zip(&g.weights).map(|(p, w)| w * p[a] * p[b]).sum();
            let e = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - e).abs());
        }
    }
    worst
}

/// Matrix with entries factor·∫ h_β(x)·p_α(Kx)·e^{−xᵗMx + |x|²/2} dx in column α,
/// row β, i.e. factor·∫ p_β(x)p_α(Kx)e^{−xᵗMx} dx. The substitution x = L⁻ᵗy with
/// M = LLᵗ turns the weight into e^{−|y|²}, so the product rule is exact once its
/// order exceeds D.
fn gaussian_matrix(basis: &Arc<MonomialBasis>, k: &CMatrix, m: &CMatrix, factor: Complex64) -> Result<OperatorMatrix> {
    let r = basis.nvars();
    let d = basis.max_degree();
    let order = gaussian_order(d);
    let drift = orthonormality_drift(order, d);
    if drift > DRIFT_TOL {
        return Err(Error::QuadratureInsufficient(format!("orthonormality drift {drift:e} at order {order}")));
    }
    if !real_part_positive(m) {
        return Err(Error::QuadratureInsufficient("Gaussian weight does not decay".into()));
    }
    let l = complex_cholesky(m)?;
    let linv_t = l.transpose().inverse()?;
    let jac = factor / l.det();
    let rule = QuadratureRule::new(r, order);
    let n = d as usize;
    let idx = basis.indices();
    let eval_all = |pts: &[Complex64]| -> Vec<Complex64> {
        let per: Vec<Vec<Complex64>> = pts.iter().map(|&z| hermite_poly_values_c(n, z)).collect();
        idx.iter()
            .map(|a| a.entries().iter().enumerate().map(|(i, &e)| per[i][e as usize]).product())
            .collect()
    };
    let (rows, cols): (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) = rule
        .nodes
        .par_iter()
        .map(|y| {
            let yc: Vec<Complex64> = y.iter().map(|&v| re(v)).collect();
            let x = linv_t.mul_vec(&yc);
            let kx = k.mul_vec(&x);
            (eval_all(&x), eval_all(&kx))
        })
        .unzip();
    let dense: Vec<Vec<Complex64>> = (0..basis.len())
        .into_par_iter()
        .map(|alpha| {
            (0..basis.len())
                .map(|beta| {
                    let s: Complex64 = rule
                        .weights
                        .iter()
                        .enumerate()
                        .map(|(q, w)| rows[q][beta] * cols[q][alpha] * *w)
                        .sum();
                    let v = s * jac;
                    if v.norm() < PRUNE_TOL {
                        re(0.0)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    Ok(OperatorMatrix::from_dense_columns(basis, dense, true, true))
}

/// diag(i^{|α|}) if `forward`, else diag((−i)^{|α|}).
fn fourier_diagonal(basis: &Arc<MonomialBasis>, forward: bool) -> OperatorMatrix {
    OperatorMatrix::diagonal(basis, |a| {
        let p = i_pow(a.degree());
        if forward {
            p
        } else {
            p.conj()
        }
    })
}

/// R(J_r) = a₀∫e^{iτ(xy)}f(y)dy with a₀ = (2π)^{−r/2}: diagonal with i^{|α|} on h_α.
pub fn r_j(r: usize, d: u32) -> OperatorMatrix {
    fourier_diagonal(&hermite_basis(r, d), true)
}

/// Rσ(J_r): diagonal with (−i)^{|α|} on h_α, the inverse Fourier transform.
pub fn r_sigma_j(r: usize, d: u32) -> OperatorMatrix {
    fourier_diagonal(&hermite_basis(r, d), false)
}

fn dilation(basis: &Arc<MonomialBasis>, k: &CMatrix, factor: Complex64) -> Result<OperatorMatrix> {
    let r = k.rows();
    let m = CMatrix::identity(r).add(&k.transpose().mul(k)).scale(&re(0.5));
    gaussian_matrix(basis, k, &m, factor)
}

fn multiplication(basis: &Arc<MonomialBasis>, v: &CMatrix) -> Result<OperatorMatrix> {
    let r = v.rows();
    let m = CMatrix::identity(r).add(&v.scale(&(I * 0.5)));
    gaussian_matrix(basis, &CMatrix::identity(r), &m, re(1.0))
}

/// P·op·P⁻¹ with P = diag(i^{|α|}).
fn fourier_conjugate(op: &OperatorMatrix) -> Result<OperatorMatrix> {
    let b = op.basis().clone();
    fourier_diagonal(&b, true).compose(op)?.compose(&fourier_diagonal(&b, false))
}

/// R of one generator: g(l₁) ↦ det^{½}f(l₁ᵗx), t_upper(v) ↦ e^{−(i/2)τ_v(x²)},
/// t_lower(u) ↦ e^{−(i/2)τ_u(∂²)} = R(J_r)·R(t_upper(−u))·R(J_r)⁻¹.
pub fn r_generator(gen: &Generator, d: u32) -> Result<OperatorMatrix> {
    let basis = hermite_basis(gen.r(), d);
    match gen {
        Generator::Dilation(l) => dilation(&basis, &l.transpose(), l.det().sqrt()),
        Generator::Upper(v) => multiplication(&basis, v),
        Generator::Lower(u) => fourier_conjugate(&multiplication(&basis, &u.neg())?),
    }
}

/// Rσ of one generator: g(l₁) ↦ det^{−½}f(l₁⁻¹x), t_lower(u) ↦ e^{−(i/2)τ_u(x²)},
/// t_upper(v) ↦ e^{−(i/2)τ_v(∂²)}.
pub fn r_sigma_generator(gen: &Generator, d: u32) -> Result<OperatorMatrix> {
    let basis = hermite_basis(gen.r(), d);
    match gen {
        Generator::Dilation(l) => dilation(&basis, &l.inverse()?, l.det().sqrt().inv()),
        Generator::Lower(u) => multiplication(&basis, u),
        Generator::Upper(v) => fourier_conjugate(&multiplication(&basis, &v.neg())?),
    }
}

/// Projected product letters[0] ∘ letters[1] ∘ …; exact only where the letters
/// preserve degree.
pub fn r_word(word: &Word, r: usize, d: u32, side: Side) -> Result<OperatorMatrix> {
    let mut acc = OperatorMatrix::identity(&hermite_basis(r, d));
    for g in &word.letters {
        let op = match side {
            Side::T => r_generator(g, d)?,
            Side::TSigma => r_sigma_generator(g, d)?,
        };
        acc = acc.compose(&op)?;
    }
    Ok(acc)
}
