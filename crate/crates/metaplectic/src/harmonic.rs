//! Spherical harmonics on ℝʳ and the integral maps from functions on the unit sphere
//! S into the Fock space: Φ ↦ f(z) = ∫_S ⟨z,x⟩^m Φ(x) s(dx) and, for a power series
//! a, f ↦ Af(z) = ∫_S a(⟨z,x⟩) f(x) s(dx). Here s is the rotation-invariant
//! probability measure and ⟨z,x⟩ = Σ z_i x_i.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::matrix::{rref, CMatrix};
use crate::poly::{CPoly, MultiIndex, Polynomial, PolynomialJson, QPoly};
use crate::quadrature::SphereRule;
use crate::scalar::{factorial, GaussianRational as Q, Scalar};

/// L²(S)-orthonormal basis of the harmonic polynomials homogeneous of degree k.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicBasis {
    pub r: usize,
    pub k: u32,
    /// Orthonormal elements.
    pub polys: Vec<CPoly>,
    /// The same elements before normalization: exactly harmonic and exactly
    /// orthogonal, with polys[i] = exact[i]/‖exact[i]‖.
    pub exact: Vec<QPoly>,
}

#[derive(Serialize)]
pub struct HarmonicBasisJson {
    pub r: usize,
    pub k: u32,
    pub polys: Vec<PolynomialJson>,
}

impl HarmonicBasis {
    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn to_json(&self) -> HarmonicBasisJson {
        HarmonicBasisJson {
            r: self.r,
            k: self.k,
            polys: self.polys.iter().map(|p| p.to_json()).collect(),
        }
    }
}

fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    let mut v: u128 = 1;
    for i in 0..k {
        v = v * (n - i) as u128 / (i + 1) as u128;
    }
    v as usize
}

/// dim 𝒴_k(ℝʳ) = C(k+r−1, r−1) − C(k+r−3, r−1).
pub fn harmonic_dim(r: usize, k: u32) -> usize {
    let (r, k) = (r as i64, k as i64);
    binomial(k + r - 1, r - 1) - binomial(k + r - 3, r - 1)
}

/// ∫_S x^α s(dx) = Π(α_i − 1)!! / (r(r+2)⋯(r+|α|−2)) when every α_i is even, else 0.
pub fn sphere_moment(alpha: &MultiIndex) -> BigRational {
    if alpha.entries().iter().any(|e| e % 2 == 1) {
        return BigRational::zero();
    }
    let mut num = BigInt::one();
    for &e in alpha.entries() {
        let mut j = 1u32;
        while j < e {
            num *= BigInt::from(j);
            j += 2;
        }
    }
    let mut den = BigInt::one();
    let r = alpha.len() as u32;
    for j in 0..alpha.degree() / 2 {
        den *= BigInt::from(r + 2 * j);
    }
    BigRational::new(num, den)
}

fn laplacian<T: Scalar>(p: &Polynomial<T>) -> Result<Polynomial<T>> {
    let mut out = Polynomial::zero(p.nvars());
    for i in 0..p.nvars() {
        out = out.checked_add(&p.diff(i)?.diff(i)?)?;
    }
    Ok(out)
}

/// Exact ∫_S p·q̄ s(dx) for real-coefficient polynomials.
fn sphere_inner_exact(p: &QPoly, q: &QPoly) -> Result<BigRational> {
    let prod = p.checked_mul(q)?;
    Ok(prod.terms().fold(BigRational::zero(), |acc, (a, c)| acc + &c.re * sphere_moment(a)))
}

/// Kernel of Δ on homogeneous polynomials of degree k, then Gram–Schmidt with exact
/// sphere moments.
pub fn harmonic_basis(r: usize, k: u32) -> Result<HarmonicBasis> {
    if r == 0 {
        return Err(Error::UnsupportedRank(r));
    }
    let src = MultiIndex::of_degree(r, k);
    let kernel: Vec<QPoly> = if k < 2 {
        src.iter().map(|a| Polynomial::monomial(a.clone(), Q::integer(1))).collect()
    } else {
        let dst = MultiIndex::of_degree(r, k - 2);
        let mut rows = vec![vec![Q::zero(); src.len()]; dst.len()];
        for (j, a) in src.iter().enumerate() {
            let lap = laplacian(&Polynomial::monomial(a.clone(), Q::integer(1)))?;
            for (b, c) in lap.terms() {
                let i = dst.iter().position(|d| d == b).expect("degree k−2 target");
                rows[i][j] = c.clone();
            }
        }
        let (red, pivots) = rref(rows, src.len(), 0.0);
        (0..src.len())
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut terms = vec![(src[free].clone(), Q::integer(1))];
                for (row, &p) in red.iter().zip(&pivots) {
                    terms.push((src[p].clone(), -row[free].clone()));
                }
                Polynomial::from_terms(r, terms)
            })
            .collect()
    };
    let mut exact: Vec<QPoly> = Vec::new();
    let mut norms: Vec<BigRational> = Vec::new();
    for p in kernel {
        let mut v = p;
        for (q, nq) in exact.iter().zip(&norms) {
            let c = sphere_inner_exact(&v, q)? / nq;
            v = v.checked_sub(&q.scale(&Q::new(c, BigRational::zero())))?;
        }
        let n = sphere_inner_exact(&v, &v)?;
        exact.push(v);
        norms.push(n);
    }
    let polys = exact
        .iter()
        .zip(&norms)
        .map(|(p, n)| {
            let s = 1.0 / Q::new(n.clone(), BigRational::zero()).to_c64().re.sqrt();
            p.to_c64().scale(&Complex64::new(s, 0.0))
        })
        .collect();
    Ok(HarmonicBasis { r, k, polys, exact })
}

/// Δp for a floating polynomial.
pub fn laplacian_c(p: &CPoly) -> Result<CPoly> {
    laplacian(p)
}

/// ⟨z,x⟩^m expanded: Σ_{|α|=m} (m!/α!) z^α x^α.
fn power_terms(r: usize, m: u32) -> Vec<(MultiIndex, f64)> {
    MultiIndex::of_degree(r, m)
        .into_iter()
        .map(|a| {
            let c = factorial(m) / a.factorial();
            (a, c)
        })
        .collect()
}

fn eval_real(p: &CPoly, x: &[f64]) -> Complex64 {
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    p.eval(&xc).expect("point dimension matches")
}

fn monomial_value(a: &MultiIndex, x: &[f64]) -> f64 {
    a.entries().iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product()
}

/// f(z) = ∫_S ⟨z,x⟩^m Φ(x) s(dx), integrated termwise with a sphere rule exact to
/// degree m + deg Φ.
pub fn harmonics_to_fock(phi: &CPoly, m: u32) -> Result<FockVector> {
    let r = phi.nvars();
    let deg = phi.degree().max(0) as u32;
    let rule = SphereRule::new(r, m + deg)?;
    let vals: Vec<Complex64> = rule.nodes.iter().map(|x| eval_real(phi, x)).collect();
    integrate_powers(&rule, &vals, m, Complex64::new(1.0, 0.0))
}

fn integrate_powers(rule: &SphereRule, vals: &[Complex64], m: u32, scale: Complex64) -> Result<FockVector> {
    let coeffs = power_terms(rule.r, m)
        .into_iter()
        .map(|(a, c)| {
            let s: Complex64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .zip(vals)
                .map(|((x, w), f)| f * (w * monomial_value(&a, x)))
                .sum();
            (a, s * c * scale)
        })
        .filter(|(_, v)| v.norm() > 1e-14)
        .collect();
    Ok(FockVector::new(rule.r, coeffs))
}

/// Af(z) = Σ_k a_k ∫_S ⟨z,x⟩^k f(x) s(dx) for f given by its values on the nodes of
/// `rule`. The series must not exceed the rule's exactness degree.
pub fn a_operator(a: &[Complex64], rule: &SphereRule, f_vals: &[Complex64]) -> Result<FockVector> {
    if f_vals.len() != rule.nodes.len() {
        return Err(Error::DimensionMismatch {
            expected: rule.nodes.len(),
            got: f_vals.len(),
        });
    }
    if a.len() > rule.exact_degree as usize + 1 {
        return Err(Error::QuadratureInsufficient(format!(
            "series of length {} exceeds exactness degree {}",
            a.len(),
            rule.exact_degree
        )));
    }
    let mut out = FockVector::zero(rule.r);
    for (k, &ak) in a.iter().enumerate() {
        if ak != Complex64::new(0.0, 0.0) {
            out = out.add(&integrate_powers(rule, f_vals, k as u32, ak)?);
        }
    }
    Ok(out)
}

/// Random element of O(r): a rotation (Rodrigues for r = 3), composed with a
/// reflection half of the time.
pub fn random_orthogonal(rng: &mut impl Rng, r: usize) -> Result<CMatrix> {
    let g: Vec<Vec<f64>> = match r {
        2 => {
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            vec![vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]
        }
        3 => {
            let mut u: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = u.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
            u.iter_mut().for_each(|v| *v /= n);
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (c, s) = (t.cos(), t.sin());
            let k = [[0.0, -u[2], u[1]], [u[2], 0.0, -u[0]], [-u[1], u[0], 0.0]];
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            let k2: f64 = (0..3).map(|l| k[i][l] * k[l][j]).sum();
                            let id = if i == j { 1.0 } else { 0.0 };
                            id + s * k[i][j] + (1.0 - c) * k2
                        })
                        .collect()
                })
                .collect()
        }
        _ => return Err(Error::UnsupportedRank(r)),
    };
    let flip = rng.random_bool(0.5);
    Ok(CMatrix::from_fn(r, r, |i, j| {
        let v = if flip && j == 0 { -g[i][j] } else { g[i][j] };
        Complex64::new(v, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let m = |v: Vec<u32>| sphere_moment(&MultiIndex::new(v));
        assert_eq!(m(vec![4, 0]), BigRational::new(3.into(), 8.into()));
        assert_eq!(m(vec![2, 2]), BigRational::new(1.into(), 8.into()));
        assert_eq!(m(vec![2, 2, 2]), BigRational::new(1.into(), 105.into()));
        assert_eq!(m(vec![1, 1]), BigRational::zero());
        assert_eq!(m(vec![0, 0, 0]), BigRational::one());
    }

    #[test]
    fn dimensions() {
        assert_eq!(harmonic_dim(2, 0), 1);
        assert_eq!(harmonic_dim(2, 5), 2);
        assert_eq!(harmonic_dim(3, 4), 9);
    }
}
