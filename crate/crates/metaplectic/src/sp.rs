//! The matrix Lie algebra 𝔰𝔭(r,ℂ) and group Sp(r,ℂ): the tilde isomorphism, the
//! special elements Ẽ, F̃, H̃₀, the conjugator g₀, real forms, minimal-orbit slices,
//! and block factorization of symplectic matrices into generators.
//!
//! Matrices are 2r×2r with blocks [[A, B], [C, D]]; J = [[0, −I], [I, 0]] and the
//! algebra condition is mᵗJ + Jm = 0.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{rank, CMatrix, Matrix};
use crate::scalar::Scalar;

/// Residual tolerance for floating-mode structure checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// J_r = [[0, −I], [I, 0]].
pub fn j_matrix<T: Scalar>(r: usize) -> Matrix<T> {
    let z = Matrix::zeros(r, r);
    let i = Matrix::identity(r);
    Matrix::from_blocks(&z, &i.neg(), &i, &z)
}

/// Splits a 2r×2r matrix into its four r×r blocks.
pub fn blocks<T: Scalar>(m: &Matrix<T>) -> (Matrix<T>, Matrix<T>, Matrix<T>, Matrix<T>) {
    let r = m.rows() / 2;
    (m.block(0, 0, r, r), m.block(0, r, r, r), m.block(r, 0, r, r), m.block(r, r, r, r))
}

/// max |mᵗJ + Jm|.
pub fn algebra_residual<T: Scalar>(m: &Matrix<T>) -> f64 {
    let j = j_matrix::<T>(m.rows() / 2);
    m.transpose().mul(&j).add(&j.mul(m)).max_abs()
}

/// max |gᵗJg − J|.
pub fn group_residual<T: Scalar>(g: &Matrix<T>) -> f64 {
    let j = j_matrix::<T>(g.rows() / 2);
    g.transpose().mul(&j).mul(g).max_abs_diff(&j)
}

fn check_even_square<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    if !m.is_square() || m.rows() % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: m.rows() - m.rows() % 2,
            got: m.cols(),
        });
    }
    Ok(())
}

/// Element of 𝔰𝔭(r).
#[derive(Clone, Debug, PartialEq)]
pub struct SpAlgElement<T: Scalar> {
    m: Matrix<T>,
}

impl<T: Scalar> SpAlgElement<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        check_even_square(&m)?;
        let res = algebra_residual(&m);
        let ok = if T::EXACT { res == 0.0 } else { res <= STRUCTURE_TOL * m.max_abs().max(1.0) };
        if !ok {
            return Err(Error::NotSymplecticAlgebra(res));
        }
        Ok(SpAlgElement { m })
    }

    pub fn zero(r: usize) -> Self {
        SpAlgElement { m: Matrix::zeros(2 * r, 2 * r) }
    }

    /// [[a, b], [c, −aᵗ]] from blocks; b and c must be symmetric.
    pub fn from_blocks(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>) -> Result<Self> {
        Self::new(Matrix::from_blocks(a, b, c, &a.transpose().neg()))
    }

    pub fn r(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    /// (A, B, C): diagonal block, upper block, lower block.
    pub fn parts(&self) -> (Matrix<T>, Matrix<T>, Matrix<T>) {
        let (a, b, c, _) = blocks(&self.m);
        (a, b, c)
    }

    pub fn add(&self, o: &Self) -> Self {
        SpAlgElement { m: self.m.add(&o.m) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SpAlgElement { m: self.m.sub(&o.m) }
    }

    pub fn scale(&self, s: &T) -> Self {
        SpAlgElement { m: self.m.scale(s) }
    }

    pub fn to_c64(&self) -> SpAlgElement<Complex64> {
        SpAlgElement { m: self.m.to_c64() }
    }
}

/// Matrix commutator ab − ba.
pub fn bracket<T: Scalar>(a: &SpAlgElement<T>, b: &SpAlgElement<T>) -> Result<SpAlgElement<T>> {
    if a.r() != b.r() {
        return Err(Error::DimensionMismatch {
            expected: a.m.rows(),
            got: b.m.rows(),
        });
    }
    Ok(SpAlgElement { m: a.m.commutator(&b.m) })
}

/// Element of Sp(r).
#[derive(Clone, Debug, PartialEq)]
pub struct SpGroupElement<T: Scalar> {
    g: Matrix<T>,
}

impl<T: Scalar> SpGroupElement<T> {
    pub fn new(g: Matrix<T>) -> Result<Self> {
        check_even_square(&g)?;
        let res = group_residual(&g);
        let ok = if T::EXACT { res == 0.0 } else { res <= STRUCTURE_TOL * g.max_abs().max(1.0).powi(2) };
        if !ok {
            return Err(Error::NotSymplectic(res));
        }
        Ok(SpGroupElement { g })
    }

    pub fn identity(r: usize) -> Self {
        SpGroupElement { g: Matrix::identity(2 * r) }
    }

    pub fn r(&self) -> usize {
        self.g.rows() / 2
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.g
    }

    /// g⁻¹ = −J gᵗ J.
    pub fn inverse(&self) -> Self {
        let j = j_matrix::<T>(self.r());
        SpGroupElement {
            g: j.mul(&self.g.transpose()).mul(&j).neg(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        SpGroupElement { g: self.g.mul(&o.g) }
    }
}

/// Ad(g)x = g x g⁻¹.
pub fn ad<T: Scalar>(g: &SpGroupElement<T>, x: &SpAlgElement<T>) -> SpAlgElement<T> {
    SpAlgElement {
        m: g.g.mul(&x.m).mul(&g.inverse().g),
    }
}

/// Abstract element τ_u + ω + τ_vσ of 𝒱 ⊕ 𝔩 ⊕ 𝒱σ.
#[derive(Clone, Debug, PartialEq)]
pub struct GAbstract<T: Scalar> {
    pub omega1: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> GAbstract<T> {
    pub fn omega(omega1: Matrix<T>) -> Self {
        let r = omega1.rows();
        GAbstract {
            omega1,
            u: Matrix::zeros(r, r),
            v: Matrix::zeros(r, r),
        }
    }

    pub fn tau(u: Matrix<T>) -> Self {
        let r = u.rows();
        GAbstract {
            omega1: Matrix::zeros(r, r),
            u,
            v: Matrix::zeros(r, r),
        }
    }

    pub fn tau_sigma(v: Matrix<T>) -> Self {
        let r = v.rows();
        GAbstract {
            omega1: Matrix::zeros(r, r),
            u: Matrix::zeros(r, r),
            v,
        }
    }
}

/// The tilde isomorphism: ω̃ = diag(ω₁ − tr ω₁·I, −ω₁ᵗ + tr ω₁·I), τ̃_u = ½[[0,0],[u,0]],
/// τ̃_vσ = ½[[0,vᵗ],[0,0]].
pub fn tilde<T: Scalar>(x: &GAbstract<T>) -> SpAlgElement<T> {
    let r = x.omega1.rows();
    let half = T::from_ratio(1, 2);
    let t = Matrix::identity(r).scale(&x.omega1.trace());
    let a = x.omega1.sub(&t);
    let d = x.omega1.transpose().neg().add(&t);
    SpAlgElement {
        m: Matrix::from_blocks(&a, &x.v.transpose().scale(&half), &x.u.scale(&half), &d),
    }
}

/// Ẽ, F̃, H̃₀, ω(I_r) = diag(I, −I) and J_r.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialElements<T: Scalar> {
    pub e: SpAlgElement<T>,
    pub f: SpAlgElement<T>,
    pub h0: SpAlgElement<T>,
    pub omega_id: SpAlgElement<T>,
    pub j: SpAlgElement<T>,
}

pub fn special_elements<T: Scalar>(r: usize) -> SpecialElements<T> {
    let i = Matrix::<T>::identity(r);
    let z = Matrix::<T>::zeros(r, r);
    let half = T::from_ratio(1, 2);
    let one_minus_r = T::from_i64(1 - r as i64);
    let h0 = Matrix::from_blocks(&i.scale(&-half.clone()), &z, &z, &i.scale(&half)).scale(&one_minus_r);
    SpecialElements {
        e: tilde(&GAbstract::tau(i.clone())),
        f: tilde(&GAbstract::tau_sigma(i.clone())),
        h0: SpAlgElement { m: h0 },
        omega_id: SpAlgElement {
            m: Matrix::from_blocks(&i, &z, &z, &i.neg()),
        },
        j: SpAlgElement { m: j_matrix(r) },
    }
}

/// g₀ = (1/√2)[[iI, I], [−I, −iI]].
pub fn g0(r: usize) -> SpGroupElement<Complex64> {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = CMatrix::identity(r);
    let ii = i.scale(&Complex64::new(0.0, 1.0));
    SpGroupElement {
        g: Matrix::from_blocks(&ii, &i, &i.neg(), &ii.neg()).scale(&s),
    }
}

/// The real forms tested by [`real_form_membership`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealForm {
    /// 𝔰𝔭(r,ℝ): real entries and the algebra constraint.
    SpReal,
    /// [[ω₁, u − iv], [u + iv, −ω₁ᵗ]] with ω₁ anti-Hermitian and u, v real symmetric.
    GTildeR,
}

/// Membership test with its largest constraint residual.
pub fn real_form_membership(x: &SpAlgElement<Complex64>, which: RealForm) -> (bool, f64) {
    let m = &x.m;
    let sp = algebra_residual(m);
    let res = match which {
        RealForm::SpReal => sp.max(m.max_imag()),
        RealForm::GTildeR => {
            let (a, b, c, d) = blocks(m);
            let half = Complex64::new(0.5, 0.0);
            let u = b.add(&c).scale(&half);
            let v = c.sub(&b).scale(&Complex64::new(0.0, -0.5));
            [
                sp,
                d.add(&a.transpose()).max_abs(),
                a.add(&a.conj_transpose()).max_abs(),
                u.max_imag(),
                u.symmetry_residual(),
                v.max_imag(),
                v.symmetry_residual(),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        }
    };
    (res <= STRUCTURE_TOL * m.max_abs().max(1.0), res)
}

/// Which block carries the orbit slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitSide {
    /// [[0, 0], [zzᵗ, 0]].
    V,
    /// [[0, zzᵗ], [0, 0]].
    VSigma,
}

pub fn minimal_orbit_point<T: Scalar>(z: &[T], side: OrbitSide) -> SpAlgElement<T> {
    let r = z.len();
    let zz = Matrix::from_fn(r, r, |i, j| z[i].clone() * z[j].clone());
    let zero = Matrix::zeros(r, r);
    let m = match side {
        OrbitSide::V => Matrix::from_blocks(&zero, &zero, &zz, &zero),
        OrbitSide::VSigma => Matrix::from_blocks(&zero, &zz, &zero, &zero),
    };
    SpAlgElement { m }
}

fn is_symmetric_rank_one<T: Scalar>(m: &Matrix<T>) -> bool {
    let scale = m.max_abs();
    if scale == 0.0 {
        return false;
    }
    let tol = if T::EXACT { 0.0 } else { 1e-10 * scale * scale };
    if m.symmetry_residual() > tol.sqrt() {
        return false;
    }
    let n = m.rows();
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                for l in (j + 1)..n {
                    let minor = m[(i, j)].clone() * m[(k, l)].clone() - m[(i, l)].clone() * m[(k, j)].clone();
                    if minor.abs() > tol {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Strictly block-triangular with a nonzero symmetric rank-one block.
pub fn minimal_orbit_membership<T: Scalar>(x: &SpAlgElement<T>) -> bool {
    let (a, b, c, d) = blocks(&x.m);
    let tol = if T::EXACT { 0.0 } else { 1e-12 * x.m.max_abs() };
    let small = |m: &Matrix<T>| m.max_abs() <= tol;
    if !(small(&a) && small(&d)) {
        return false;
    }
    (small(&c) && is_symmetric_rank_one(&b)) || (small(&b) && is_symmetric_rank_one(&c))
}

/// A generator of Sp(r,ℂ).
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// t_lower(u) = [[I, 0], [u, I]], u symmetric.
    Lower(CMatrix),
    /// g(l₁) = diag(l₁, (l₁ᵗ)⁻¹).
    Dilation(CMatrix),
    /// t_upper(v) = [[I, v], [0, I]], v symmetric.
    Upper(CMatrix),
}

impl Generator {
    pub fn r(&self) -> usize {
        match self {
            Generator::Lower(m) | Generator::Dilation(m) | Generator::Upper(m) => m.rows(),
        }
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        let r = self.r();
        let i = CMatrix::identity(r);
        let z = CMatrix::zeros(r, r);
        Ok(match self {
            Generator::Lower(u) => Matrix::from_blocks(&i, &z, u, &i),
            Generator::Upper(v) => Matrix::from_blocks(&i, v, &z, &i),
            Generator::Dilation(l) => Matrix::from_blocks(l, &z, &z, &l.transpose().inverse()?),
        })
    }
}

/// Ordered product of generators; the matrix is letters[0]·letters[1]·… .
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Word {
    pub letters: Vec<Generator>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn product(&self, r: usize) -> Result<CMatrix> {
        let mut acc = CMatrix::identity(2 * r);
        for l in &self.letters {
            acc = acc.mul(&l.matrix()?);
        }
        Ok(acc)
    }
}

const DROP_TOL: f64 = 1e-15;

fn push_unless_trivial(word: &mut Word, g: Generator) {
    let trivial = match &g {
        Generator::Lower(m) | Generator::Upper(m) => m.max_abs() <= DROP_TOL,
        Generator::Dilation(l) => l.max_abs_diff(&CMatrix::identity(l.rows())) <= DROP_TOL,
    };
    if !trivial {
        word.letters.push(g);
    }
}

fn invert_checked(a: &CMatrix) -> Option<CMatrix> {
    let inv = a.inverse().ok()?;
    let cond = a.max_abs() * inv.max_abs();
    (cond.is_finite() && cond < 1e12).then_some(inv)
}

/// J_r⁻¹ = t_lower(−I)·t_upper(I)·t_lower(−I).
fn j_inverse_word(r: usize) -> Vec<Generator> {
    let i = CMatrix::identity(r);
    vec![Generator::Lower(i.neg()), Generator::Upper(i.clone()), Generator::Lower(i.neg())]
}

fn validate(word: Word, g: &CMatrix) -> Result<Word> {
    let r = g.rows() / 2;
    let res = word.product(r)?.max_abs_diff(g);
    if res > 1e-10 * g.max_abs().max(1.0) {
        return Err(Error::NotSymplectic(res));
    }
    Ok(word)
}

fn ldu(g: &CMatrix) -> Option<Word> {
    let (a, b, c, _) = blocks(g);
    let ai = invert_checked(&a)?;
    let mut w = Word::default();
    push_unless_trivial(&mut w, Generator::Lower(c.mul(&ai)));
    push_unless_trivial(&mut w, Generator::Dilation(a));
    push_unless_trivial(&mut w, Generator::Upper(ai.mul(&b)));
    Some(w)
}

fn udl(g: &CMatrix) -> Option<Word> {
    let (_, b, c, d) = blocks(g);
    let di = invert_checked(&d)?;
    let mut w = Word::default();
    push_unless_trivial(&mut w, Generator::Upper(b.mul(&di)));
    push_unless_trivial(&mut w, Generator::Dilation(di.transpose()));
    push_unless_trivial(&mut w, Generator::Lower(di.mul(&c)));
    Some(w)
}

fn factor_with(g: &SpGroupElement<Complex64>, f: fn(&CMatrix) -> Option<Word>) -> Result<Word> {
    let r = g.r();
    if let Some(w) = f(&g.g) {
        return validate(w, &g.g);
    }
    let jg = j_matrix::<Complex64>(r).mul(&g.g);
    let tail = f(&jg).ok_or(Error::SingularABlock)?;
    let mut letters = j_inverse_word(r);
    letters.extend(tail.letters);
    validate(Word { letters }, &g.g)
}

/// g = t_lower(CA⁻¹)·g(A)·t_upper(A⁻¹B). If A is singular, factors J·g and
/// prepends a word for J⁻¹. Identity letters are omitted.
pub fn factor_symplectic(g: &SpGroupElement<Complex64>) -> Result<Word> {
    factor_with(g, ldu)
}

/// g = t_upper(BD⁻¹)·g(D⁻ᵗ)·t_lower(D⁻¹C), with the same J retry on a singular D block.
pub fn factor_symplectic_udl(g: &SpGroupElement<Complex64>) -> Result<Word> {
    factor_with(g, udl)
}

/// Standard basis of 𝔰𝔭(r): E_ij − E_{r+j,r+i}, then the symmetric upper and lower blocks.
/// All entries are 0 or ±1, so the same list is a basis of 𝔰𝔭(r,ℝ).
pub fn sp_basis<T: Scalar>(r: usize) -> Vec<SpAlgElement<T>> {
    let n = 2 * r;
    let unit = |pairs: &[(usize, usize, i64)]| {
        let mut m = Matrix::<T>::zeros(n, n);
        for &(i, j, s) in pairs {
            m[(i, j)] = m[(i, j)].clone() + T::from_i64(s);
        }
        SpAlgElement { m }
    };
    let mut out = Vec::with_capacity(r * (2 * r + 1));
    for i in 0..r {
        for j in 0..r {
            out.push(unit(&[(i, j, 1), (r + j, r + i, -1)]));
        }
    }
    for i in 0..r {
        for j in i..r {
            if i == j {
                out.push(unit(&[(i, r + i, 1)]));
            } else {
                out.push(unit(&[(i, r + j, 1), (j, r + i, 1)]));
            }
        }
    }
    for i in 0..r {
        for j in i..r {
            if i == j {
                out.push(unit(&[(r + i, i, 1)]));
            } else {
                out.push(unit(&[(r + i, j, 1), (r + j, i, 1)]));
            }
        }
    }
    out
}

fn uniform(rng: &mut impl Rng) -> f64 {
    rng.random_range(-1.0..1.0)
}

pub fn random_real_symmetric(rng: &mut impl Rng, r: usize) -> CMatrix {
    let m = CMatrix::from_fn(r, r, |_, _| Complex64::new(uniform(rng), 0.0));
    m.add(&m.transpose()).scale(&Complex64::new(0.5, 0.0))
}

pub fn random_complex_symmetric(rng: &mut impl Rng, r: usize) -> CMatrix {
    let m = CMatrix::from_fn(r, r, |_, _| Complex64::new(uniform(rng), uniform(rng)));
    m.add(&m.transpose()).scale(&Complex64::new(0.5, 0.0))
}

pub fn random_complex_matrix(rng: &mut impl Rng, r: usize) -> CMatrix {
    CMatrix::from_fn(r, r, |_, _| Complex64::new(uniform(rng), uniform(rng)))
}

/// Random element of 𝔰𝔭(r,ℝ).
pub fn random_sp_real(rng: &mut impl Rng, r: usize) -> SpAlgElement<Complex64> {
    let a = CMatrix::from_fn(r, r, |_, _| Complex64::new(uniform(rng), 0.0));
    let b = random_real_symmetric(rng, r);
    let c = random_real_symmetric(rng, r);
    SpAlgElement::from_blocks(&a, &b, &c).expect("valid blocks")
}

/// Random element of the [[ω₁, u − iv], [u + iv, −ω₁ᵗ]] pattern.
pub fn random_g_tilde_r(rng: &mut impl Rng, r: usize) -> SpAlgElement<Complex64> {
    let skew = CMatrix::from_fn(r, r, |_, _| Complex64::new(uniform(rng), 0.0));
    let skew = skew.sub(&skew.transpose()).scale(&Complex64::new(0.5, 0.0));
    let w1p = random_real_symmetric(rng, r);
    let omega1 = skew.add(&w1p.scale(&Complex64::new(0.0, 1.0)));
    let u = random_real_symmetric(rng, r);
    let v = random_real_symmetric(rng, r);
    let iv = v.scale(&Complex64::new(0.0, 1.0));
    SpAlgElement::from_blocks(&omega1, &u.sub(&iv), &u.add(&iv)).expect("valid blocks")
}

/// Real basis of the 𝔤̃_ℝ pattern, of size r(2r+1).
pub fn g_tilde_r_basis(r: usize) -> Vec<SpAlgElement<Complex64>> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let z = CMatrix::zeros(r, r);
    let sym_units: Vec<CMatrix> = (0..r)
        .flat_map(|a| (a..r).map(move |b| (a, b)))
        .map(|(a, b)| {
            CMatrix::from_fn(r, r, |p, q| if (p, q) == (a, b) || (p, q) == (b, a) { one } else { Complex64::new(0.0, 0.0) })
        })
        .collect();
    let mut out = Vec::new();
    for a in 0..r {
        for b in (a + 1)..r {
            let mut s = CMatrix::zeros(r, r);
            s[(a, b)] = one;
            s[(b, a)] = -one;
            out.push(SpAlgElement::from_blocks(&s, &z, &z).expect("valid"));
        }
    }
    for s in &sym_units {
        out.push(SpAlgElement::from_blocks(&s.scale(&i), &z, &z).expect("valid"));
    }
    for s in &sym_units {
        out.push(SpAlgElement::from_blocks(&z, s, s).expect("valid"));
    }
    for s in &sym_units {
        out.push(SpAlgElement::from_blocks(&z, &s.scale(&-i), &s.scale(&i)).expect("valid"));
    }
    out
}

/// Real rank of a family of complex matrices viewed as vectors in ℝ^{2·size}.
pub fn real_rank(elems: &[SpAlgElement<Complex64>], tol: f64) -> usize {
    let rows: Vec<Vec<Complex64>> = elems
        .iter()
        .map(|x| {
            x.m.entries()
                .iter()
                .flat_map(|z| [Complex64::new(z.re, 0.0), Complex64::new(z.im, 0.0)])
                .collect()
        })
        .collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    rank(rows, ncols, tol)
}

/// Random symplectic matrix as a product of random generators.
pub fn random_symplectic(rng: &mut impl Rng, r: usize, letters: usize) -> SpGroupElement<Complex64> {
    let mut g = CMatrix::identity(2 * r);
    for k in 0..letters {
        let gen = match k % 3 {
            0 => Generator::Upper(random_complex_symmetric(rng, r)),
            1 => Generator::Lower(random_complex_symmetric(rng, r)),
            _ => Generator::Dilation(CMatrix::identity(r).add(&random_complex_matrix(rng, r).scale(&Complex64::new(0.5, 0.0)))),
        };
        g = g.mul(&gen.matrix().expect("invertible dilation"));
    }
    SpGroupElement::new(g).expect("product of generators is symplectic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tilde_examples() {
        for r in 1..4 {
            let s = special_elements::<Q>(r);
            let half = Q::ratio(1, 2);
            let i = Matrix::<Q>::identity(r);
            let z = Matrix::<Q>::zeros(r, r);
            assert_eq!(s.e.matrix(), &Matrix::from_blocks(&z, &z, &i.scale(&half), &z));
            assert_eq!(s.f.matrix(), &Matrix::from_blocks(&z, &i.scale(&half), &z, &z));
        }
        let w = tilde(&GAbstract::omega(Matrix::<Q>::identity(2)));
        assert_eq!(w.matrix(), &Matrix::diagonal(&[Q::integer(-1), Q::integer(-1), Q::integer(1), Q::integer(1)]));
    }

    #[test]
    fn bracket_examples() {
        let s = special_elements::<Q>(2);
        let ef = bracket(&s.e, &s.f).unwrap();
        let q = Q::ratio(1, 4);
        assert_eq!(ef.matrix(), &Matrix::diagonal(&[-q.clone(), -q.clone(), q.clone(), q]));
        assert_eq!(ef, s.h0.scale(&Q::ratio(1, 2 * (1 - 2))));
        assert_eq!(bracket(&s.h0, &s.e).unwrap(), s.e.scale(&Q::integer(-1)));
        assert!(bracket(&s.e, &s.e).unwrap().matrix().is_zero());
        assert!(bracket(&s.e, &special_elements::<Q>(3).e).is_err());
    }

    #[test]
    fn special_element_examples() {
        let s2 = special_elements::<Q>(2);
        let h = Q::ratio(1, 2);
        assert_eq!(s2.h0.matrix(), &Matrix::diagonal(&[h.clone(), h.clone(), -h.clone(), -h]));
        assert!(special_elements::<Q>(1).h0.matrix().is_zero());
        let j = s2.j.matrix();
        assert_eq!(j.mul(j), Matrix::identity(4).neg());
    }

    #[test]
    fn g0_examples() {
        for r in 1..4 {
            let g = g0(r);
            assert!(group_residual(g.matrix()) < 1e-15);
            let s = special_elements::<Complex64>(r);
            let ef = s.e.add(&s.f);
            let img = ad(&g.inverse(), &ef);
            assert!(img.matrix().max_abs_diff(&ef.matrix().neg()) < 1e-15);
            let w = SpAlgElement::from_blocks(&CMatrix::zeros(r, r), &CMatrix::identity(r), &CMatrix::identity(r).neg())
                .unwrap();
            let expected = Matrix::from_blocks(
                &CMatrix::identity(r).scale(&c(0.0, 1.0)),
                &CMatrix::zeros(r, r),
                &CMatrix::zeros(r, r),
                &CMatrix::identity(r).scale(&c(0.0, -1.0)),
            );
            assert!(ad(&g, &w).matrix().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn real_form_examples() {
        let s = special_elements::<Complex64>(2);
        let ef = s.e.add(&s.f);
        assert!(real_form_membership(&ef, RealForm::SpReal).0);
        let x = s.e.sub(&s.f).scale(&c(0.0, 1.0));
        assert!(!real_form_membership(&x, RealForm::SpReal).0);
        let y = ad(&g0(2).inverse(), &x);
        assert!(real_form_membership(&y, RealForm::SpReal).0);
        assert!(y.matrix().max_abs_diff(&s.omega_id.matrix().scale(&c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn orbit_examples() {
        let p = minimal_orbit_point(&[Q::integer(1), Q::integer(0)], OrbitSide::VSigma);
        let mut e11 = Matrix::<Q>::zeros(4, 4);
        e11[(0, 2)] = Q::integer(1);
        assert_eq!(p.matrix(), &e11);
        assert!(minimal_orbit_membership(&p));
        let z = minimal_orbit_point(&[Q::integer(0), Q::integer(0)], OrbitSide::V);
        assert!(!minimal_orbit_membership(&z));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for side in [OrbitSide::V, OrbitSide::VSigma] {
            let zz: Vec<Complex64> = (0..3).map(|_| c(uniform(&mut rng), uniform(&mut rng))).collect();
            let x = minimal_orbit_point(&zz, side);
            assert!(minimal_orbit_membership(&x));
            assert!(x.matrix().mul(x.matrix()).max_abs() == 0.0);
        }
        assert!(!minimal_orbit_membership(&special_elements::<Q>(2).e.scale(&Q::integer(2))));
    }

    #[test]
    fn factor_examples() {
        let id = SpGroupElement::<Complex64>::identity(2);
        assert!(factor_symplectic(&id).unwrap().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_complex_symmetric(&mut rng, 2);
        let t = SpGroupElement::new(Generator::Upper(u.clone()).matrix().unwrap()).unwrap();
        assert_eq!(factor_symplectic(&t).unwrap().letters, vec![Generator::Upper(u)]);
        for r in 1..4 {
            let gi = g0(r).inverse();
            let w = factor_symplectic(&gi).unwrap();
            assert_eq!(w.len(), 3);
            assert!(w.product(r).unwrap().max_abs_diff(gi.matrix()) < 1e-12);
            let w = factor_symplectic_udl(&gi).unwrap();
            assert_eq!(w.len(), 3);
            assert!(w.product(r).unwrap().max_abs_diff(gi.matrix()) < 1e-12);
        }
    }

    #[test]
    fn factor_retries_with_j() {
        let j = SpGroupElement::new(j_matrix::<Complex64>(2)).unwrap();
        let w = factor_symplectic(&j).unwrap();
        assert!(w.product(2).unwrap().max_abs_diff(j.matrix()) < 1e-12);
    }

    #[test]
    fn basis_sizes() {
        for r in 1..5 {
            let b = sp_basis::<Q>(r);
            assert_eq!(b.len(), r * (2 * r + 1));
            for x in &b {
                assert_eq!(algebra_residual(x.matrix()), 0.0);
            }
            assert_eq!(g_tilde_r_basis(r).len(), r * (2 * r + 1));
        }
    }
}
