//! Fock model: holomorphic polynomials on ℂʳ in the unnormalized monomial basis z^α,
//! with ⟨z^α, z^β⟩ = δ_αβ α!.
//!
//! Lie-algebra action of X = [[A, B], [C, −Aᵗ]] ∈ 𝔰𝔭(r,ℂ):
//!
//! | operator | lower block C      | upper block B      | diagonal block A          |
//! |----------|--------------------|--------------------|---------------------------|
//! | dT       | (i/2)τ_C(∂²)       | (i/2)τ_B(z²)       | ½tr A + (Aᵗz)·∇           |
//! | dTσ      | (i/2)τ_C(z²)       | (i/2)τ_B(∂²)       | −½tr A − (Az)·∇           |
//!
//! where τ_C(∂²) = Σ C_ij ∂_i∂_j and τ_B(z²) = Σ B_ij z_i z_j. The group generators
//! integrate these: T(g(l₁))φ = det(l₁)^{½}φ(l₁ᵗz), Tσ(g(l₁))φ = det(l₁)^{−½}φ(l₁⁻¹z).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::operator::{coeffs_axpy, coeffs_scale, mono_diff, mono_mul, singleton, Coeffs, MonomialBasis, OperatorMatrix};
use crate::poly::{CPoly, MultiIndex};
use crate::scalar::{factorial, factorial_big};
use crate::sp::{Generator, SpAlgElement, Word};

/// The parameter α of the representation family.
pub const ALPHA: f64 = -0.25;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A finitely supported element of the Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    pub r: usize,
    pub coeffs: Coeffs,
}

impl FockVector {
    pub fn zero(r: usize) -> Self {
        FockVector { r, coeffs: Coeffs::new() }
    }

    pub fn new(r: usize, coeffs: Coeffs) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, v)| *v != re(0.0)).collect();
        FockVector { r, coeffs }
    }

    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let r = alpha.len();
        Self::new(r, [(alpha, c)].into_iter().collect())
    }

    pub fn from_poly(p: &CPoly) -> Self {
        Self::new(p.nvars(), p.terms().map(|(a, c)| (a.clone(), *c)).collect())
    }

    pub fn to_poly(&self) -> CPoly {
        CPoly::from_terms(self.r, self.coeffs.iter().map(|(a, c)| (a.clone(), *c)))
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.to_poly().eval(z)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|a| a.degree() as i64).max().unwrap_or(-1)
    }

    /// Total degree if every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.coeffs.keys().map(|a| a.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, o: &Self) -> Self {
        FockVector::new(self.r, coeffs_axpy(&self.coeffs, re(1.0), &o.coeffs))
    }

    pub fn sub(&self, o: &Self) -> Self {
        FockVector::new(self.r, coeffs_axpy(&self.coeffs, re(-1.0), &o.coeffs))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        FockVector::new(self.r, coeffs_scale(&self.coeffs, s))
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|(a, c)| c.norm_sqr() * a.factorial()).sum()
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        coeffs_axpy(&self.coeffs, re(-1.0), &o.coeffs)
            .values()
            .fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<Self> {
        Ok(FockVector::new(self.r, op.apply(&self.coeffs)?))
    }
}

/// Σ conj(φ_α)ψ_α α!.
pub fn fock_inner(phi: &FockVector, psi: &FockVector) -> Result<Complex64> {
    if phi.r != psi.r {
        return Err(Error::DimensionMismatch {
            expected: phi.r,
            got: psi.r,
        });
    }
    Ok(phi
        .coeffs
        .iter()
        .filter_map(|(a, c)| psi.coeffs.get(a).map(|d| c.conj() * d * a.factorial()))
        .sum())
}

/// Σ v_ij z_i z_j applied to a coefficient map.
pub fn tau_z2(v: &CMatrix, c: &Coeffs) -> Coeffs {
    bilinear(v, c, mono_mul)
}

/// Σ v_ij ∂_i ∂_j applied to a coefficient map.
pub fn tau_d2(v: &CMatrix, c: &Coeffs) -> Coeffs {
    bilinear(v, c, mono_diff)
}

pub(crate) fn bilinear(v: &CMatrix, c: &Coeffs, op: fn(&Coeffs, usize) -> Coeffs) -> Coeffs {
    let r = v.rows();
    let mut out = Coeffs::new();
    for i in 0..r {
        let oi = op(c, i);
        for j in 0..r {
            let w = v[(i, j)];
            if w != re(0.0) {
                out = coeffs_axpy(&out, w, &op(&oi, j));
            }
        }
    }
    out
}

/// Σ m_ij x_j ∂_i, i.e. the derivative along the vector field x ↦ Mx, where `mul` and
/// `diff` realize x_j and ∂_i.
pub(crate) fn vector_field(
    m: &CMatrix,
    c: &Coeffs,
    mul: fn(&Coeffs, usize) -> Coeffs,
    diff: fn(&Coeffs, usize) -> Coeffs,
) -> Coeffs {
    let r = m.rows();
    let mut out = Coeffs::new();
    for i in 0..r {
        let di = diff(c, i);
        for j in 0..r {
            let w = m[(i, j)];
            if w != re(0.0) {
                out = coeffs_axpy(&out, w, &mul(&di, j));
            }
        }
    }
    out
}

pub fn fock_basis(r: usize, d: u32) -> Arc<MonomialBasis> {
    MonomialBasis::new(r, d)
}

/// ℰ: diagonal with |α| on z^α.
pub fn euler_op(r: usize, d: u32) -> OperatorMatrix {
    OperatorMatrix::diagonal(&fock_basis(r, d), |a| re(a.degree() as f64))
}

/// ρ(E) = (i/4)τ(z²).
pub fn rho_e(r: usize, d: u32) -> OperatorMatrix {
    let id = CMatrix::identity(r);
    OperatorMatrix::from_action(&fock_basis(r, d), |a| coeffs_scale(&tau_z2(&id, &singleton(a)), I * 0.25))
}

/// ρ(F) = (i/4)τ(∂²).
pub fn rho_f(r: usize, d: u32) -> OperatorMatrix {
    let id = CMatrix::identity(r);
    OperatorMatrix::from_action(&fock_basis(r, d), |a| coeffs_scale(&tau_d2(&id, &singleton(a)), I * 0.25))
}

/// ρ(H₀) = (1−r)(−αr + ½ℰ).
pub fn rho_h0(r: usize, d: u32) -> OperatorMatrix {
    let k = 1.0 - r as f64;
    OperatorMatrix::diagonal(&fock_basis(r, d), |a| re(k * (-ALPHA * r as f64 + 0.5 * a.degree() as f64)))
}

/// ρσ(E) = (i/4)τ(∂²).
pub fn rho_sigma_e(r: usize, d: u32) -> OperatorMatrix {
    rho_f(r, d)
}

/// ρσ(F) = (i/4)τ(z²).
pub fn rho_sigma_f(r: usize, d: u32) -> OperatorMatrix {
    rho_e(r, d)
}

/// ρσ(H₀) = (1−r)(αr − ½ℰ).
pub fn rho_sigma_h0(r: usize, d: u32) -> OperatorMatrix {
    rho_h0(r, d).scale(re(-1.0))
}

/// Which of the two dual actions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    T,
    TSigma,
}

fn action_of(x: &SpAlgElement<Complex64>, side: Side) -> impl Fn(&MultiIndex) -> Coeffs {
    let (a, b, c) = x.parts();
    let half_tr = a.trace() * 0.5;
    move |alpha: &MultiIndex| {
        let v = singleton(alpha);
        let (mul_part, diff_part, diag, field) = match side {
            Side::T => (&b, &c, half_tr, vector_field(&a.transpose(), &v, mono_mul, mono_diff)),
            Side::TSigma => (
                &c,
                &b,
                -half_tr,
                coeffs_scale(&vector_field(&a, &v, mono_mul, mono_diff), re(-1.0)),
            ),
        };
        let mut out = coeffs_scale(&tau_z2(mul_part, &v), I * 0.5);
        out = coeffs_axpy(&out, I * 0.5, &tau_d2(diff_part, &v));
        out = coeffs_axpy(&out, diag, &v);
        coeffs_axpy(&out, re(1.0), &field)
    }
}

/// dT(X) on polynomials of degree ≤ D.
pub fn d_t(x: &SpAlgElement<Complex64>, d: u32) -> OperatorMatrix {
    OperatorMatrix::from_action(&fock_basis(x.r(), d), action_of(x, Side::T))
}

/// dTσ(X) on polynomials of degree ≤ D.
pub fn d_t_sigma(x: &SpAlgElement<Complex64>, d: u32) -> OperatorMatrix {
    OperatorMatrix::from_action(&fock_basis(x.r(), d), action_of(x, Side::TSigma))
}

pub fn d_t_side(x: &SpAlgElement<Complex64>, d: u32, side: Side) -> OperatorMatrix {
    match side {
        Side::T => d_t(x, d),
        Side::TSigma => d_t_sigma(x, d),
    }
}

/// exp of a nilpotent action: Σ_k Aᵏv/k! until the terms vanish.
fn exp_nilpotent(v: &Coeffs, step: impl Fn(&Coeffs) -> Coeffs) -> Coeffs {
    let mut out = v.clone();
    let mut term = v.clone();
    let mut k = 1.0;
    while !term.is_empty() {
        term = coeffs_scale(&step(&term), re(1.0 / k));
        out = coeffs_axpy(&out, re(1.0), &term);
        k += 1.0;
    }
    out
}

/// Σ_{k ≤ n} Aᵏv/k!.
fn exp_truncated(v: &Coeffs, n: u32, step: impl Fn(&Coeffs) -> Coeffs) -> Coeffs {
    let mut out = v.clone();
    let mut term = v.clone();
    for k in 1..=n {
        term = coeffs_scale(&step(&term), re(1.0 / k as f64));
        out = coeffs_axpy(&out, re(1.0), &term);
    }
    out
}

/// Series order used for multiplication exponentials.
pub fn series_order(d: u32) -> u32 {
    d.div_ceil(2)
}

fn substitution(basis: &Arc<MonomialBasis>, m: &CMatrix, factor: Complex64) -> OperatorMatrix {
    OperatorMatrix::from_action(basis, |a| {
        let p = CPoly::monomial(a.clone(), factor)
            .substitute_linear(m)
            .expect("square substitution matrix");
        p.terms().map(|(b, c)| (b.clone(), *c)).collect()
    })
}

fn multiplication_exp(basis: &Arc<MonomialBasis>, v: &CMatrix) -> OperatorMatrix {
    let n = series_order(basis.max_degree());
    let v = v.scale(&(I * 0.5));
    OperatorMatrix::from_action(basis, |a| exp_truncated(&singleton(a), n, |c| tau_z2(&v, c))).mark_unbounded_above()
}

fn differential_exp(basis: &Arc<MonomialBasis>, u: &CMatrix) -> OperatorMatrix {
    let u = u.scale(&(I * 0.5));
    OperatorMatrix::from_action(basis, |a| exp_nilpotent(&singleton(a), |c| tau_d2(&u, c)))
}

/// T of one generator: g(l₁) ↦ det^{½}φ(l₁ᵗz), t_lower(u) ↦ exp((i/2)τ_u(∂²)),
/// t_upper(v) ↦ exp((i/2)τ_v(z²)) truncated at order ⌈D/2⌉.
pub fn t_generator(gen: &Generator, d: u32) -> Result<OperatorMatrix> {
    let basis = fock_basis(gen.r(), d);
    Ok(match gen {
        Generator::Dilation(l) => substitution(&basis, &l.transpose(), l.det().sqrt()),
        Generator::Lower(u) => differential_exp(&basis, u),
        Generator::Upper(v) => multiplication_exp(&basis, v),
    })
}

/// Tσ of one generator: g(l₁) ↦ det^{−½}φ(l₁⁻¹z), t_lower(u) ↦ exp((i/2)τ_u(z²))
/// truncated, t_upper(v) ↦ exp((i/2)τ_v(∂²)).
pub fn t_sigma_generator(gen: &Generator, d: u32) -> Result<OperatorMatrix> {
    let basis = fock_basis(gen.r(), d);
    Ok(match gen {
        Generator::Dilation(l) => substitution(&basis, &l.inverse()?, l.det().sqrt().inv()),
        Generator::Lower(u) => multiplication_exp(&basis, u),
        Generator::Upper(v) => differential_exp(&basis, v),
    })
}

/// Operator of a word: letters[0] ∘ letters[1] ∘ …, so the last letter acts first.
pub fn t_word(word: &Word, r: usize, d: u32, side: Side) -> Result<OperatorMatrix> {
    let mut acc = OperatorMatrix::identity(&fock_basis(r, d));
    for g in &word.letters {
        let op = match side {
            Side::T => t_generator(g, d)?,
            Side::TSigma => t_sigma_generator(g, d)?,
        };
        acc = acc.compose(&op)?;
    }
    Ok(acc)
}

/// a_m and c_m for m ∈ ½ℕ, keyed by the homogeneous degree k = 2m.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormTable {
    pub r: usize,
    pub max_degree: u32,
    pub a: BTreeMap<u32, f64>,
    pub c: BTreeMap<u32, f64>,
}

/// a for degree k: πʳ k!/(k+r)!, i.e. πʳ/((k+r)⋯(k+1)).
pub fn a_const(r: usize, k: u32) -> f64 {
    let prod: f64 = (1..=r as u32).map(|j| (k + j) as f64).product();
    std::f64::consts::PI.powi(r as i32) / prod
}

/// c for degree k: 1/k!.
pub fn c_const(k: u32) -> f64 {
    1.0 / factorial(k)
}

/// c for degree k as an exact rational.
pub fn c_const_exact(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), factorial_big(k))
}

/// ‖z^α‖²_m = α!/k! for |α| = k = 2m, as an exact rational.
pub fn monomial_norm_exact(alpha: &MultiIndex) -> BigRational {
    let num: BigInt = alpha.entries().iter().map(|&e| factorial_big(e)).product();
    BigRational::new(num, factorial_big(alpha.degree()))
}

/// Table for m = 0, ½, 1, …, m_max + ½.
pub fn norm_constants(r: usize, m_max: u32) -> NormTable {
    let ks = 0..=(2 * m_max + 1);
    NormTable {
        r,
        max_degree: 2 * m_max + 1,
        a: ks.clone().map(|k| (k, a_const(r, k))).collect(),
        c: ks.map(|k| (k, c_const(k))).collect(),
    }
}

/// ‖φ‖²_m for φ homogeneous of degree k = 2m: Σ |φ_α|² α!/k!.
pub fn norm_m(phi: &FockVector) -> Result<f64> {
    if phi.coeffs.is_empty() {
        return Ok(0.0);
    }
    let k = phi.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    Ok(phi.norm_sq() / factorial(k))
}

/// ⟨φ, ψ⟩_m on degree-k homogeneous vectors, conjugate-linear in φ.
pub fn inner_m(phi: &FockVector, psi: &FockVector, k: u32) -> Result<Complex64> {
    for v in [phi, psi] {
        if v.coeffs.keys().any(|a| a.degree() != k) {
            return Err(Error::NotHomogeneous);
        }
    }
    Ok(fock_inner(phi, psi)? / factorial(k))
}

/// Φ(ξ_z, ξ_z′)^k = (1 + Σ z_i conj(z′_i))^k.
pub fn kernel_pair(z: &[Complex64], zp: &[Complex64], k: u32) -> Complex64 {
    let s: Complex64 = z.iter().zip(zp).map(|(a, b)| a * b.conj()).sum();
    (re(1.0) + s).powu(k)
}

/// Degree-k part of z ↦ Φ(ξ_z, ξ_z′)^k: Σ_{|α|=k} (k!/α!) conj(z′^α) z^α.
pub fn reproducing_kernel(k: u32, zp: &[Complex64]) -> FockVector {
    let r = zp.len();
    let coeffs = MultiIndex::of_degree(r, k)
        .into_iter()
        .map(|a| {
            let mono: Complex64 = a.entries().iter().zip(zp).map(|(&e, w)| w.conj().powu(e)).product();
            let c = factorial(k) / a.factorial() * mono;
            (a, c)
        })
        .collect();
    FockVector::new(r, coeffs)
}
