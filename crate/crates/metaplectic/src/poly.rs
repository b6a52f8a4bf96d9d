//! Sparse multivariate polynomials over a [`Scalar`] field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{factorial, GaussianRational, Scalar};

/// Exponent vector of a monomial. Ordered graded-lexicographically: total degree
/// first, then lexicographically with x₁ > x₂ > … .
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// self − o when every entry stays nonnegative.
    pub fn checked_sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Copy with entry i shifted by delta; None if it would go negative.
    pub fn shifted(&self, i: usize, delta: i32) -> Option<MultiIndex> {
        let v = self.0[i] as i64 + delta as i64;
        if v < 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] = v as u32;
        Some(MultiIndex(e))
    }

    /// α! = Π αᵢ!.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// All multi-indices of length n and total degree d, ascending.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in 0..=d {
                prefix.push(a);
                rec(n, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }

    /// All multi-indices of length n with total degree ≤ d, ascending.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| Self::of_degree(n, k)).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sparse polynomial: map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<T: Scalar> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, T>,
}

pub type CPoly = Polynomial<Complex64>;
pub type QPoly = Polynomial<GaussianRational>;

fn accumulate<T: Scalar>(terms: &mut BTreeMap<MultiIndex, T>, alpha: MultiIndex, c: T) {
    match terms.get_mut(&alpha) {
        Some(v) => *v = v.clone() + c,
        None => {
            terms.insert(alpha, c);
        }
    }
}

fn prune<T: Scalar>(mut terms: BTreeMap<MultiIndex, T>) -> BTreeMap<MultiIndex, T> {
    terms.retain(|_, c| !c.is_negligible());
    terms
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(MultiIndex::zeros(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, T::one())
    }

    /// The coordinate function x_i.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, i), T::one())
    }

    pub fn monomial(alpha: MultiIndex, c: T) -> Self {
        let nvars = alpha.len();
        let mut terms = BTreeMap::new();
        if !c.is_negligible() {
            terms.insert(alpha, c);
        }
        Polynomial { nvars, terms }
    }

    /// Builds from (exponent, coefficient) pairs, summing repeats.
    pub fn from_terms(nvars: usize, items: impl IntoIterator<Item = (MultiIndex, T)>) -> Self {
        let mut terms = BTreeMap::new();
        for (a, c) in items {
            assert_eq!(a.len(), nvars, "multi-index length");
            accumulate(&mut terms, a, c);
        }
        Polynomial {
            nvars,
            terms: prune(terms),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> T {
        self.terms.get(alpha).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|a| a.degree() as i64).max().unwrap_or(-1)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &T)> {
        self.terms.iter().next_back()
    }

    fn check_nvars(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: o.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check_nvars(o)?;
        let mut terms = self.terms.clone();
        for (a, c) in &o.terms {
            accumulate(&mut terms, a.clone(), c.clone());
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms: prune(terms),
        })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg_ref())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check_nvars(o)?;
        let mut terms = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                accumulate(&mut terms, a.add(b), c.clone() * d.clone());
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms: prune(terms),
        })
    }

    fn neg_ref(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: prune(
                self.terms
                    .iter()
                    .map(|(a, c)| (a.clone(), c.clone() * s.clone()))
                    .collect(),
            ),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative ∂/∂x_var.
    pub fn diff(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut terms = BTreeMap::new();
        for (a, c) in &self.terms {
            let k = a.get(var);
            if k == 0 {
                continue;
            }
            let b = a.shifted(var, -1).expect("positive exponent");
            accumulate(&mut terms, b, c.clone() * T::from_i64(k as i64));
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms: prune(terms),
        })
    }

    /// Substitutes x_k ↦ subs[k]. All substituted polynomials share one variable count.
    pub fn compose(&self, subs: &[Polynomial<T>]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let m = subs.first().map_or(0, |q| q.nvars);
        if let Some(q) = subs.iter().find(|q| q.nvars != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: q.nvars,
            });
        }
        let mut powers: Vec<Vec<Polynomial<T>>> = subs.iter().map(|q| vec![Self::one(q.nvars)]).collect();
        let mut out = BTreeMap::new();
        for (a, c) in &self.terms {
            let mut prod = Self::constant(m, c.clone());
            for (k, &e) in a.entries().iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().expect("nonempty") * &subs[k];
                    powers[k].push(next);
                }
                if e > 0 {
                    prod = &prod * &powers[k][e as usize];
                }
            }
            for (b, d) in prod.terms {
                accumulate(&mut out, b, d);
            }
        }
        Ok(Polynomial {
            nvars: m,
            terms: prune(out),
        })
    }

    /// z ↦ p(Az).
    pub fn substitute_linear(&self, a: &Matrix<T>) -> Result<Self> {
        if a.rows() != self.nvars || a.cols() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: a.rows().max(a.cols()),
            });
        }
        let n = self.nvars;
        let subs: Vec<Self> = (0..n)
            .map(|k| Self::from_terms(n, (0..n).map(|j| (MultiIndex::unit(n, j), a[(k, j)].clone()))))
            .collect();
        self.compose(&subs)
    }

    /// z ↦ p(z − a).
    pub fn translate(&self, a: &[T]) -> Result<Self> {
        if a.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: a.len(),
            });
        }
        let n = self.nvars;
        let subs: Vec<Self> = (0..n)
            .map(|k| {
                Self::from_terms(
                    n,
                    [
                        (MultiIndex::unit(n, k), T::one()),
                        (MultiIndex::zeros(n), -a[k].clone()),
                    ],
                )
            })
            .collect();
        self.compose(&subs)
    }

    pub fn eval(&self, point: &[T]) -> Result<T> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = T::zero();
        for (a, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in a.entries().iter().enumerate() {
                if e > 0 {
                    t = t * point[k].pow(e);
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.degree() == d)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (a, c) in &self.terms {
            out.entry(a.degree())
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(a.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_parts().len() <= 1
    }

    /// Exact quotient self / divisor by the graded-lex leading-term rule.
    /// Fails when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        self.check_nvars(divisor)?;
        let (lm, lc) = divisor
            .leading_term()
            .map(|(a, c)| (a.clone(), c.clone()))
            .ok_or_else(|| Error::NonPolynomialResult("division by zero polynomial".into()))?;
        let lc_inv = lc.inv().ok_or(Error::Singular)?;
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((a, c)) = rem.leading_term().map(|(a, c)| (a.clone(), c.clone())) {
            let Some(q) = a.checked_sub(&lm) else {
                return Err(Error::NonPolynomialResult(format!(
                    "leading monomial {a} is not divisible by {lm}"
                )));
            };
            let qc = c * lc_inv.clone();
            let mut terms = rem.terms;
            for (b, d) in &divisor.terms {
                accumulate(&mut terms, q.add(b), -(qc.clone() * d.clone()));
            }
            // Cancel the leading term exactly even in floating mode.
            terms.remove(&a);
            rem = Polynomial {
                nvars: self.nvars,
                terms: prune(terms),
            };
            accumulate(&mut quot, q, qc);
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms: prune(quot),
        })
    }

    pub fn to_c64(&self) -> CPoly {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(a, c)| (a.clone(), c.to_c64())))
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let d = self.checked_sub(o).expect("same variable count");
        d.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// JSON form {"nvars": n, "terms": [{"alpha": [..], "re": .., "im": ..}]}.
    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| {
                    let z = c.to_c64();
                    TermJson {
                        alpha: a.entries().to_vec(),
                        re: z.re,
                        im: z.im,
                    }
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolynomialJson) -> Result<Self> {
        for t in &j.terms {
            if t.alpha.len() != j.nvars {
                return Err(Error::DimensionMismatch {
                    expected: j.nvars,
                    got: t.alpha.len(),
                });
            }
        }
        Ok(Self::from_terms(
            j.nvars,
            j.terms.iter().map(|t| {
                (
                    MultiIndex::new(t.alpha.clone()),
                    T::from_c64(Complex64::new(t.re, t.im)),
                )
            }),
        ))
    }
}

impl QPoly {
    pub fn from_c64(p: &CPoly) -> QPoly {
        Polynomial::from_terms(
            p.nvars,
            p.terms.iter().map(|(a, c)| (a.clone(), GaussianRational::from_c64(*c))),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, o: Self) -> Polynomial<T> {
        self.checked_add(o).expect("variable count mismatch")
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, o: Self) -> Polynomial<T> {
        self.checked_sub(o).expect("variable count mismatch")
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, o: Self) -> Polynomial<T> {
        self.checked_mul(o).expect("variable count mismatch")
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.neg_ref()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| {
                let vars: Vec<String> = a
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
