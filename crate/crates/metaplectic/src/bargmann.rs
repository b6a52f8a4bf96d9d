//! The Bargmann transform ℬf(z) = π^{−r/4}∫ b(z,x)f(x)dx with kernel
//! b(z,x) = exp(−½(τ(x²) + τ(z²)) + √2τ(zx)), which sends h_α to z^α/√(α!).
//!
//! Besides the exact basis map, the kernel itself is integrated numerically: matrix
//! elements are extracted from samples of ℬh_α on a circle, so a wrong kernel shows
//! up in the intertwining checks rather than being assumed away.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{d_t, d_t_sigma, fock_basis, t_word, FockVector, Side};
use crate::operator::{herm_d, herm_x, mono_diff, mono_mul, singleton, Coeffs, MonomialBasis, OperatorMatrix};
use crate::poly::{MultiIndex, Polynomial, QPoly};
use crate::quadrature::{hermite_poly_values, GaussHermite, QuadratureRule};
use crate::scalar::{factorial_big, GaussianRational as Q};
use crate::schrodinger::{d_r, d_r_sigma, HermiteVector};
use crate::sp::{ad, factor_symplectic, factor_symplectic_udl, g0, sp_basis, special_elements};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Kernel-matrix entries below this magnitude are dropped.
pub const KERNEL_PRUNE_TOL: f64 = 1e-13;

/// Number of circle samples used to extract Taylor coefficients in z.
pub const CIRCLE_SAMPLES: usize = 64;

/// b(z,x) = exp(−½(τ(x²) + τ(z²)) + c·τ(zx)); the transform uses c = √2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BargmannKernel {
    pub r: usize,
    pub coupling: f64,
}

impl BargmannKernel {
    pub fn new(r: usize) -> Self {
        BargmannKernel {
            r,
            coupling: std::f64::consts::SQRT_2,
        }
    }

    /// The kernel with the sign of √2 flipped, used as a negative control.
    pub fn mutated(r: usize) -> Self {
        BargmannKernel {
            r,
            coupling: -std::f64::consts::SQRT_2,
        }
    }

    pub fn exponent(&self, z: &[Complex64], x: &[f64]) -> Complex64 {
        z.iter()
            .zip(x)
            .map(|(&zi, &xi)| -0.5 * (zi * zi + xi * xi) + zi * xi * self.coupling)
            .sum()
    }

    pub fn eval(&self, z: &[Complex64], x: &[f64]) -> Complex64 {
        self.exponent(z, x).exp()
    }
}

/// b(z,x) for the standard kernel.
pub fn kernel_eval(z: &[Complex64], x: &[f64]) -> Complex64 {
    BargmannKernel::new(z.len()).eval(z, x)
}

/// ℬ on the basis: h_α ↦ z^α/√(α!).
pub fn bargmann_exact(f: &HermiteVector) -> FockVector {
    FockVector::new(f.r, f.coeffs.iter().map(|(a, c)| (a.clone(), c / a.factorial().sqrt())).collect())
}

/// ℬ⁻¹ = ℬ*: z^α ↦ √(α!)h_α.
pub fn inverse_bargmann_exact(phi: &FockVector) -> HermiteVector {
    HermiteVector::new(phi.r, phi.coeffs.iter().map(|(a, c)| (a.clone(), c * a.factorial().sqrt())).collect())
}

/// Gram matrix of {ℬh_α : |α| ≤ d} under the Fock inner product in exact arithmetic.
/// ℬh_α has squared coefficient 1/α! on z^α, and ‖z^α‖² = α!.
pub fn bargmann_gram_exact(r: usize, d: u32) -> Vec<Vec<BigRational>> {
    let idx = MultiIndex::up_to_degree(r, d);
    let fact = |a: &MultiIndex| -> BigInt { a.entries().iter().map(|&e| factorial_big(e)).product() };
    idx.iter()
        .map(|a| {
            idx.iter()
                .map(|b| {
                    if a == b {
                        let coeff_sq = BigRational::from_integer(fact(a)).recip();
                        coeff_sq * BigRational::from_integer(fact(a))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn quadrature_value(kernel: &BargmannKernel, f: &HermiteVector, z: &[Complex64], rule: &QuadratureRule) -> Complex64 {
    let n = f.coeffs.keys().flat_map(|a| a.entries().to_vec()).max().unwrap_or(0) as usize;
    let pref = std::f64::consts::PI.powf(-0.25 * kernel.r as f64);
    let zsq: Complex64 = z.iter().map(|v| v * v).sum();
    let mut acc = re(0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let per: Vec<Vec<f64>> = x.iter().map(|&xi| hermite_poly_values(n, xi)).collect();
        let fx: Complex64 = f
            .coeffs
            .iter()
            .map(|(a, c)| c * a.entries().iter().enumerate().map(|(i, &e)| per[i][e as usize]).product::<f64>())
            .sum();
        let zx: Complex64 = z.iter().zip(x).map(|(zi, xi)| zi * xi).sum();
        acc += fx * (zx * kernel.coupling - zsq * 0.5).exp() * *w;
    }
    acc * pref
}

/// π^{−r/4}∫b(z,x)f(x)dx by the product Gauss–Hermite rule. The value is compared
/// with the next higher order and rejected if the two disagree.
pub fn bargmann_quadrature(f: &HermiteVector, z: &[Complex64], rule: &QuadratureRule) -> Result<Complex64> {
    if z.len() != f.r || rule.r != f.r {
        return Err(Error::DimensionMismatch {
            expected: f.r,
            got: z.len(),
        });
    }
    let k = BargmannKernel::new(f.r);
    let v = quadrature_value(&k, f, z, rule);
    let w = quadrature_value(&k, f, z, &QuadratureRule::new(f.r, rule.order + 1));
    let tol = 1e-9 * v.norm().max(1.0);
    if (v - w).norm() > tol {
        return Err(Error::QuadratureInsufficient(format!(
            "orders {} and {} differ by {:e}",
            rule.order,
            rule.order + 1,
            (v - w).norm()
        )));
    }
    Ok(v)
}

/// c[m][n] = coefficient of z^m in π^{−1/4}∫e^{−z²/2 + c·zx}h_n(x)dx, for m, n ≤ d.
fn kernel_table_1d(coupling: f64, d: u32) -> Vec<Vec<Complex64>> {
    let n = d as usize;
    let gh = GaussHermite::new(2 * n + 60);
    let p: Vec<Vec<f64>> = gh.nodes.iter().map(|&x| hermite_poly_values(n, x)).collect();
    let pref = std::f64::consts::PI.powf(-0.25);
    let samples: Vec<(Complex64, Vec<Complex64>)> = (0..CIRCLE_SAMPLES)
        .map(|k| {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64);
            let vals = (0..=n)
                .map(|j| {
                    let s: Complex64 = gh
                        .nodes
                        .iter()
                        .zip(&gh.weights)
                        .zip(&p)
                        .map(|((&x, &w), pv)| (z * x * coupling - z * z * 0.5).exp() * (w * pv[j]))
                        .sum();
                    s * pref
                })
                .collect();
            (z, vals)
        })
        .collect();
    (0..=n)
        .map(|m| {
            (0..=n)
                .map(|j| {
                    let s: Complex64 = samples.iter().map(|(z, v)| v[j] * z.powu(m as u32).conj()).sum();
                    let v = s / CIRCLE_SAMPLES as f64;
                    if v.norm() < KERNEL_PRUNE_TOL {
                        re(0.0)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect()
}

/// Matrix of the integral transform with the given kernel, from the Hermite basis
/// (columns) to the monomial basis (rows), degrees ≤ d. The kernel factorizes over
/// coordinates, so entries are products of one-dimensional coefficients.
pub fn kernel_matrix(kernel: &BargmannKernel, d: u32) -> OperatorMatrix {
    let table = kernel_table_1d(kernel.coupling, d);
    let diagonal = table
        .iter()
        .enumerate()
        .all(|(m, row)| row.iter().enumerate().all(|(n, v)| m == n || *v == re(0.0)));
    let basis = fock_basis(kernel.r, d);
    let cols = basis
        .indices()
        .iter()
        .map(|a| {
            basis
                .indices()
                .iter()
                .map(|b| {
                    let v: Complex64 = a
                        .entries()
                        .iter()
                        .zip(b.entries())
                        .map(|(&n, &m)| table[m as usize][n as usize])
                        .product();
                    if v.norm() < KERNEL_PRUNE_TOL {
                        re(0.0)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    OperatorMatrix::from_dense_columns(&basis, cols, !diagonal, !diagonal)
}

/// ℬ as an exact diagonal matrix.
pub fn bargmann_matrix(r: usize, d: u32) -> OperatorMatrix {
    OperatorMatrix::diagonal(&fock_basis(r, d), |a| re(1.0 / a.factorial().sqrt()))
}

/// T(g₀⁻¹) (side T) or Tσ(g₀⁻¹) (side TSigma) as a word operator. T uses the
/// t_upper·g·t_lower factorization and Tσ the t_lower·g·t_upper one, so in both cases
/// the truncated multiplication acts last.
pub fn g0_inverse_operator(r: usize, d: u32, side: Side) -> Result<OperatorMatrix> {
    let gi = g0(r).inverse();
    let word = match side {
        Side::T => factor_symplectic_udl(&gi)?,
        Side::TSigma => factor_symplectic(&gi)?,
    };
    t_word(&word, r, d, side)
}

/// ℬ₀f = T(g₀⁻¹)ℬf.
pub fn b0(f: &HermiteVector, d: u32) -> Result<FockVector> {
    let op = g0_inverse_operator(f.r, d, Side::T)?;
    bargmann_exact(f).apply(&op)
}

/// ℬ₀σf = Tσ(g₀⁻¹)ℬf.
pub fn b0_sigma(f: &HermiteVector, d: u32) -> Result<FockVector> {
    let op = g0_inverse_operator(f.r, d, Side::TSigma)?;
    bargmann_exact(f).apply(&op)
}

/// Squared norm of ℬ₀f in the space T(g₀⁻¹)ℱ, where ‖ψ‖ = ‖T(g₀)ψ‖; the same for
/// ℬ₀σ. Since T(g₀)T(g₀⁻¹) = 1 this is ‖ℬf‖², the Fock norm.
pub fn transported_norm_sq(f: &HermiteVector) -> f64 {
    bargmann_exact(f).norm_sq()
}

/// Residual components of the intertwining checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntertwineReport {
    /// max_X ‖dTσ(Ad(g₀)X)ℬ − ℬdR(X)‖ over the standard basis of 𝔰𝔭(r,ℝ).
    pub lie_sigma: f64,
    /// max_X ‖dT(Ad(g₀)X)ℬ − ℬdRσ(X)‖.
    pub lie: f64,
    /// ‖2dT(F̃)ℬ − ℬ((i/2)dRσ(ω(I)) − dRσ(Ẽ) − dRσ(F̃))‖.
    pub star: f64,
    /// max of ‖ℬ(x−∂)/√2 − zℬ‖ and ‖ℬ(x+∂)/√2 − ∂ℬ‖.
    pub ladder: f64,
    pub max: f64,
    /// Smallest safe window among the compared products.
    pub window: i32,
}

struct Residual {
    worst: f64,
    window: i32,
}

impl Residual {
    fn new(d: u32) -> Self {
        Residual {
            worst: 0.0,
            window: d as i32,
        }
    }

    fn push(&mut self, lhs: &OperatorMatrix, rhs: &OperatorMatrix) -> Result<()> {
        let w = lhs.safe_window().min(rhs.safe_window());
        self.window = self.window.min(w);
        self.worst = self.worst.max(lhs.max_abs_diff_on(rhs, w)?);
        Ok(())
    }
}

/// Builds an operator on the Hermite or monomial basis from a coefficient action.
fn op(basis: &Arc<MonomialBasis>, f: impl Fn(&Coeffs) -> Coeffs) -> OperatorMatrix {
    OperatorMatrix::from_action(basis, |a| f(&singleton(a)))
}

/// All intertwining residuals for the transform with the given kernel, degrees ≤ d.
pub fn intertwine_residual(kernel: &BargmannKernel, d: u32) -> Result<IntertwineReport> {
    let r = kernel.r;
    let b = kernel_matrix(kernel, d);
    let basis = b.basis().clone();
    let g = g0(r);
    let mut lie_sigma = Residual::new(d);
    let mut lie = Residual::new(d);
    for x in sp_basis::<Complex64>(r) {
        let y = ad(&g, &x);
        lie_sigma.push(&d_t_sigma(&y, d).compose(&b)?, &b.compose(&d_r(&x, d)?)?)?;
        lie.push(&d_t(&y, d).compose(&b)?, &b.compose(&d_r_sigma(&x, d)?)?)?;
    }

    let s = special_elements::<Complex64>(r);
    let mut star = Residual::new(d);
    let lhs = d_t(&s.f, d).scale(re(2.0)).compose(&b)?;
    let inner = d_r_sigma(&s.omega_id, d)?
        .scale(I * 0.5)
        .sub(&d_r_sigma(&s.e, d)?)?
        .sub(&d_r_sigma(&s.f, d)?)?;
    star.push(&lhs, &b.compose(&inner)?)?;

    let mut ladder = Residual::new(d);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..r {
        let x = op(&basis, |c| herm_x(c, i));
        let dx = op(&basis, |c| herm_d(c, i));
        let create = x.sub(&dx)?.scale(re(h));
        let annihilate = x.add(&dx)?.scale(re(h));
        let z = op(&basis, |c| mono_mul(c, i));
        let dz = op(&basis, |c| mono_diff(c, i));
        ladder.push(&b.compose(&create)?, &z.compose(&b)?)?;
        ladder.push(&b.compose(&annihilate)?, &dz.compose(&b)?)?;
    }

    let parts = [&lie_sigma, &lie, &star, &ladder];
    Ok(IntertwineReport {
        lie_sigma: lie_sigma.worst,
        lie: lie.worst,
        star: star.worst,
        ladder: ladder.worst,
        max: parts.iter().map(|p| p.worst).fold(0.0, f64::max),
        window: parts.iter().map(|p| p.window).min().unwrap_or(d as i32),
    })
}

/// Double-double number hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// √2 to double-double precision.
    pub fn sqrt2() -> Self {
        Dd {
            hi: std::f64::consts::SQRT_2,
            lo: -9.667_293_313_452_913e-17,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    fn from_c64(z: Complex64) -> Self {
        Cdd {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }

    fn real(x: Dd) -> Self {
        Cdd { re: x, im: Dd::new(0.0) }
    }

    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }

    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Kernel exponent in double-double arithmetic.
fn exponent_dd(z: &[Cdd], x: &[Dd]) -> Cdd {
    let half = Cdd::real(Dd::new(0.5));
    let s2 = Cdd::real(Dd::sqrt2());
    let mut acc = Cdd::real(Dd::new(0.0));
    for (&zi, &xi) in z.iter().zip(x) {
        let xc = Cdd::real(xi);
        let quad = zi.mul(zi).add(xc.mul(xc));
        acc = acc.sub(half.mul(quad)).add(s2.mul(zi).mul(xc));
    }
    acc
}

/// e^w − 1 without cancellation for small |w|.
fn expm1_c(w: Complex64) -> Complex64 {
    let (a, b) = (w.re, w.im);
    let half = (0.5 * b).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

/// Residuals of the kernel equation
/// −τ(∂²_z)b = (r/2 + τ(x∂_x) − ½τ(∂²_x) − ½τ(x²))b = (r − 2τ(x²) − τ(z²) + 2√2τ(zx))b.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PdeReport {
    /// Analytic derivatives: max of |LHS − closed| and |operator − closed|.
    pub analytic: f64,
    /// Central finite differences with step 1e-5 against the closed form.
    pub finite_difference: f64,
}

/// Finite-difference step.
pub const FD_STEP: f64 = 1e-5;

struct PointTerms {
    lhs: Complex64,
    operator: Complex64,
    closed: Complex64,
    scale: f64,
}

/// Analytic factors q with (derivative expression)·b = q·b.
fn analytic_terms(z: &[Complex64], x: &[f64]) -> PointTerms {
    let s2 = std::f64::consts::SQRT_2;
    let r = z.len() as f64;
    let mut lhs = re(0.0);
    let mut operator = re(r / 2.0);
    let mut closed = re(r);
    let mut scale = r;
    for (&zi, &xi) in z.iter().zip(x) {
        let dz = -zi + s2 * xi;
        let dx = -xi + s2 * zi;
        lhs -= dz * dz - 1.0;
        operator += xi * dx - 0.5 * (dx * dx - 1.0) - 0.5 * xi * xi;
        let parts = [-2.0 * xi * xi * re(1.0), -(zi * zi), 2.0 * s2 * zi * xi];
        closed += parts.iter().sum::<Complex64>();
        scale += parts.iter().map(|p| p.norm()).sum::<f64>() + (dz * dz).norm() + (dx * dx).norm();
    }
    PointTerms {
        lhs,
        operator,
        closed,
        scale,
    }
}

/// (f(+h) − f(−h))/(2h) and (f(+h) − 2f + f(−h))/h² relative to b, from exponent
/// increments computed in double-double.
fn fd_ratios(z: &[Complex64], x: &[f64], coord: usize, along_z: bool) -> (Complex64, Complex64) {
    let zd: Vec<Cdd> = z.iter().map(|&v| Cdd::from_c64(v)).collect();
    let xd: Vec<Dd> = x.iter().map(|&v| Dd::new(v)).collect();
    let e0 = exponent_dd(&zd, &xd);
    let shifted = |sign: f64| {
        let h = Dd::new(sign * FD_STEP);
        let (mut zs, mut xs) = (zd.clone(), xd.clone());
        if along_z {
            zs[coord].re = zs[coord].re + h;
        } else {
            xs[coord] = xs[coord] + h;
        }
        expm1_c(exponent_dd(&zs, &xs).sub(e0).to_c64())
    };
    let (p, m) = (shifted(1.0), shifted(-1.0));
    ((p - m) / (2.0 * FD_STEP), (p + m) / (FD_STEP * FD_STEP))
}

/// Both residuals, normalized by |b|·(1 + Σ|terms|), maximized over the points.
pub fn kernel_pde_residual(points: &[(Vec<Complex64>, Vec<f64>)]) -> PdeReport {
    let mut analytic = 0.0f64;
    let mut fd = 0.0f64;
    for (z, x) in points {
        let t = analytic_terms(z, x);
        let norm = 1.0 + t.scale;
        analytic = analytic
            .max((t.lhs - t.closed).norm() / norm)
            .max((t.operator - t.closed).norm() / norm);
        let r = z.len();
        let mut lhs = re(0.0);
        let mut operator = re(r as f64 / 2.0);
        for i in 0..r {
            let (_, dzz) = fd_ratios(z, x, i, true);
            lhs -= dzz;
            let (dx1, dxx) = fd_ratios(z, x, i, false);
            operator += x[i] * dx1 - 0.5 * dxx - 0.5 * x[i] * x[i];
        }
        fd = fd.max((lhs - t.closed).norm() / norm).max((operator - t.closed).norm() / norm);
    }
    PdeReport {
        analytic,
        finite_difference: fd,
    }
}

/// Symbolic check that the three factors agree as polynomials in (z, x). Variables
/// are z_1…z_r, x_1…x_r and s, reduced modulo s² = 2.
pub fn pde_factors_agree(r: usize) -> bool {
    let n = 2 * r + 1;
    let var = |i: usize| QPoly::var(n, i);
    let k = |v: i64| QPoly::constant(n, Q::integer(v));
    let half = QPoly::constant(n, Q::ratio(1, 2));
    let s = var(2 * r);
    let mul = |a: &QPoly, b: &QPoly| a.checked_mul(b).expect("same variables");
    let add = |a: &QPoly, b: &QPoly| a.checked_add(b).expect("same variables");
    let sub = |a: &QPoly, b: &QPoly| a.checked_sub(b).expect("same variables");
    let mut lhs = QPoly::zero(n);
    let mut operator = mul(&half, &k(r as i64));
    let mut closed = k(r as i64);
    for i in 0..r {
        let (z, x) = (var(i), var(r + i));
        let dz = add(&mul(&s, &x), &z.scale(&Q::integer(-1)));
        let dx = add(&mul(&s, &z), &x.scale(&Q::integer(-1)));
        lhs = sub(&lhs, &sub(&mul(&dz, &dz), &k(1)));
        operator = add(&operator, &mul(&x, &dx));
        operator = sub(&operator, &mul(&half, &sub(&mul(&dx, &dx), &k(1))));
        operator = sub(&operator, &mul(&half, &mul(&x, &x)));
        closed = sub(&closed, &mul(&k(2), &mul(&x, &x)));
        closed = sub(&closed, &mul(&z, &z));
        closed = add(&closed, &mul(&k(2), &mul(&s, &mul(&z, &x))));
    }
    let reduce = |p: &QPoly| -> QPoly {
        Polynomial::from_terms(
            n,
            p.terms().map(|(a, c)| {
                let e = a.get(2 * r);
                let mut b = a.entries().to_vec();
                b[2 * r] = e % 2;
                let f = Q::integer(1i64 << (e / 2));
                (MultiIndex::new(b), c.clone() * f)
            }),
        )
    };
    let (l, o, c) = (reduce(&lhs), reduce(&operator), reduce(&closed));
    l == c && o == c
}

/// Whether the exact Gram matrix of [`bargmann_gram_exact`] is the identity.
pub fn gram_is_identity(g: &[Vec<BigRational>]) -> bool {
    g.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

/// Evaluates ℬh_α at z through the exact map.
pub fn exact_value(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    let p = bargmann_exact(&HermiteVector::basis_vector(alpha.clone())).to_poly();
    p.eval(z).expect("dimension matches")
}
