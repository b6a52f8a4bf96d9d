//! The individual checks. Each returns its largest residual; exact checks return the
//! number of failed comparisons, so their tolerance is zero.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SuiteConfig;
use crate::bargmann::{
    bargmann_gram_exact, bargmann_quadrature, exact_value, gram_is_identity, intertwine_residual, kernel_eval,
    kernel_pde_residual, pde_factors_agree, BargmannKernel,
};
use crate::error::Result;
use crate::fock::{
    a_const, c_const, c_const_exact, d_t, d_t_sigma, fock_basis, fock_inner, inner_m, monomial_norm_exact, norm_m,
    reproducing_kernel, rho_e, rho_f, rho_h0, rho_sigma_e, rho_sigma_f, t_generator, FockVector,
};
use crate::harmonic::{a_operator, harmonic_basis, harmonics_to_fock, random_orthogonal};
use crate::jordan::{
    chi, kappa_dilation, kappa_inversion, kappa_translation, nvars, pspace_basis, q_poly, xi_from_z, StrElement,
    SymMatrix,
};
use crate::matrix::{rank, CMatrix, Matrix};
use crate::operator::OperatorMatrix;
use crate::poly::{CPoly, MultiIndex, Polynomial, QPoly};
use crate::quadrature::{QuadratureRule, SphereRule};
use crate::scalar::{factorial_big, GaussianRational as Q, Scalar};
use crate::schrodinger::{d_r, d_r_sigma, hermite_eval, r_j, HermiteVector};
use crate::sp::{
    ad, bracket, factor_symplectic, factor_symplectic_udl, g0, g_tilde_r_basis, j_matrix, minimal_orbit_point,
    random_complex_matrix, random_complex_symmetric, random_g_tilde_r, random_sp_real, random_symplectic,
    real_form_membership, real_rank, sp_basis, special_elements, tilde, GAbstract, Generator, OrbitSide, RealForm,
    SpAlgElement, SpGroupElement,
};

pub(crate) type Run = fn(&Ctx) -> Result<f64>;

pub(crate) struct Ctx<'a> {
    pub cfg: &'a SuiteConfig,
    pub ranks: Vec<usize>,
    pub salt: u64,
}

impl Ctx<'_> {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ self.salt)
    }
}

/// Parameter keys a check reports besides r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Param {
    Degree,
    QuadOrder,
    Seed,
}

pub(crate) struct Check {
    pub name: &'static str,
    /// Ranks the check is defined for; empty when it does not depend on r.
    pub ranks: &'static [usize],
    pub tolerance: f64,
    pub params: &'static [Param],
    pub run: Run,
}

use Param::{Degree as D, QuadOrder as QO, Seed as S};

pub(crate) const CHECKS: &[Check] = &[
    Check { name: "bargmann.intertwine", ranks: &[1, 2], tolerance: 1e-9, params: &[D], run: bargmann_intertwine },
    Check { name: "bargmann.kernel_pde_analytic", ranks: &[1, 2, 3], tolerance: 1e-10, params: &[S], run: pde_analytic },
    Check { name: "bargmann.kernel_pde_fd", ranks: &[1, 2, 3], tolerance: 1e-6, params: &[S], run: pde_fd },
    Check { name: "bargmann.kernel_pde_symbolic", ranks: &[1, 2, 3], tolerance: 0.0, params: &[], run: pde_symbolic },
    Check { name: "bargmann.kernel_symmetry", ranks: &[1, 2, 3], tolerance: 1e-14, params: &[S], run: kernel_symmetry },
    Check { name: "bargmann.ladder", ranks: &[1, 2], tolerance: 1e-10, params: &[D], run: bargmann_ladder },
    Check { name: "bargmann.quadrature", ranks: &[1, 2], tolerance: 1e-8, params: &[QO, S], run: bargmann_quad },
    Check { name: "bargmann.unitarity", ranks: &[1, 2], tolerance: 0.0, params: &[], run: bargmann_unitarity },
    Check { name: "fock.adjoint", ranks: &[1, 2, 3], tolerance: 1e-12, params: &[D], run: fock_adjoint },
    Check { name: "fock.conjugation", ranks: &[1, 2], tolerance: 1e-9, params: &[D], run: fock_conjugation },
    Check { name: "fock.grading", ranks: &[1, 2, 3], tolerance: 0.0, params: &[D], run: fock_grading },
    Check { name: "fock.homomorphism", ranks: &[1, 2], tolerance: 1e-9, params: &[D], run: fock_homomorphism },
    Check { name: "fock.norm_consistency", ranks: &[1, 2, 3], tolerance: 1e-12, params: &[S], run: fock_norm_consistency },
    Check { name: "fock.norm_constants", ranks: &[1, 2, 3], tolerance: 1e-10, params: &[], run: fock_norm_constants },
    Check { name: "fock.norm_exact", ranks: &[1, 2, 3], tolerance: 0.0, params: &[], run: fock_norm_exact },
    Check { name: "fock.reproducing", ranks: &[1, 2], tolerance: 1e-9, params: &[S], run: fock_reproducing },
    Check { name: "fock.unitary_dilation", ranks: &[1, 2, 3], tolerance: 1e-10, params: &[S], run: fock_unitary },
    Check { name: "harmonic.equivariance", ranks: &[2, 3], tolerance: 1e-8, params: &[S], run: harmonic_equivariance },
    Check { name: "harmonic.example", ranks: &[2], tolerance: 1e-12, params: &[], run: harmonic_example },
    Check { name: "harmonic.ktype_dimensions", ranks: &[2, 3], tolerance: 0.0, params: &[], run: harmonic_ktypes },
    Check { name: "jordan.chi_multiplicativity", ranks: &[2, 3], tolerance: 1e-12, params: &[S], run: jordan_chi },
    Check { name: "jordan.dilation_homomorphism", ranks: &[2, 3], tolerance: 0.0, params: &[S], run: jordan_dilation },
    Check { name: "jordan.kappa_degree_flip", ranks: &[2, 3], tolerance: 0.0, params: &[], run: jordan_flip },
    Check { name: "jordan.kappa_involution", ranks: &[2, 3], tolerance: 0.0, params: &[], run: jordan_involution },
    Check { name: "jordan.orbit_closure", ranks: &[2, 3], tolerance: 0.0, params: &[S], run: jordan_orbit },
    Check { name: "jordan.pspace_dimensions", ranks: &[2, 3], tolerance: 0.0, params: &[], run: jordan_dims },
    Check { name: "jordan.translation_additivity", ranks: &[2, 3], tolerance: 0.0, params: &[S], run: jordan_translation },
    Check { name: "lie.factorization", ranks: &[1, 2, 3], tolerance: 1e-10, params: &[S], run: lie_factorization },
    Check { name: "lie.orbit_equivariance", ranks: &[2, 3], tolerance: 0.0, params: &[S], run: lie_orbit },
    Check { name: "lie.real_form", ranks: &[2, 3], tolerance: 1e-12, params: &[S], run: lie_real_form },
    Check { name: "lie.sl2_triple", ranks: &[2, 3, 4, 5], tolerance: 0.0, params: &[], run: lie_sl2 },
    Check { name: "lie.tilde_v", ranks: &[2, 3], tolerance: 1e-12, params: &[S], run: lie_tilde_v },
    Check { name: "lie.tilde_vsigma", ranks: &[2, 3], tolerance: 1e-12, params: &[S], run: lie_tilde_vsigma },
    Check { name: "negative.mutated_kernel", ranks: &[1, 2], tolerance: 1e-9, params: &[D], run: negative_mutated },
    Check { name: "poly.diff_commute", ranks: &[], tolerance: 0.0, params: &[S], run: poly_diff },
    Check { name: "poly.eval_homomorphism", ranks: &[], tolerance: 1e-12, params: &[S], run: poly_eval },
    Check { name: "poly.ring_axioms", ranks: &[], tolerance: 0.0, params: &[S], run: poly_ring },
    Check { name: "poly.substitution_composition", ranks: &[], tolerance: 1e-12, params: &[S], run: poly_subst },
    Check { name: "schrodinger.fourier_diagonal", ranks: &[1, 2], tolerance: 1e-8, params: &[D], run: sch_fourier },
    Check { name: "schrodinger.homomorphism", ranks: &[1, 2], tolerance: 1e-9, params: &[D], run: sch_homomorphism },
    Check { name: "schrodinger.oscillator_diagonal", ranks: &[1, 2, 3], tolerance: 1e-14, params: &[D], run: sch_oscillator },
    Check { name: "schrodinger.parity", ranks: &[1, 2], tolerance: 0.0, params: &[D, S], run: sch_parity },
    Check { name: "schrodinger.skew_adjoint", ranks: &[1, 2], tolerance: 1e-9, params: &[D, S], run: sch_skew },
];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rand_c(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    Q::ratio(rng.random_range(-5..=5), rng.random_range(1..=4))
}

fn rand_invertible(rng: &mut ChaCha8Rng, r: usize) -> Matrix<Q> {
    loop {
        let m = Matrix::from_fn(r, r, |_, _| rand_q(rng));
        if !m.det().is_exact_zero() {
            return m;
        }
    }
}

fn rand_sym(rng: &mut ChaCha8Rng, r: usize) -> SymMatrix<Q> {
    let coords: Vec<Q> = (0..nvars(r)).map(|_| rand_q(rng)).collect();
    SymMatrix::from_coords(r, &coords)
}

fn count(fails: impl IntoIterator<Item = bool>) -> f64 {
    fails.into_iter().filter(|&f| f).count() as f64
}

fn ball_z(rng: &mut ChaCha8Rng, r: usize, radius: f64) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = (0..r).map(|_| rand_c(rng, radius)).collect();
    let n = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if n > radius {
        z.iter_mut().for_each(|v| *v *= radius / n);
    }
    z
}

fn ball_x(rng: &mut ChaCha8Rng, r: usize, radius: f64) -> Vec<f64> {
    let mut x: Vec<f64> = (0..r).map(|_| rng.random_range(-radius..radius)).collect();
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > radius {
        x.iter_mut().for_each(|v| *v *= radius / n);
    }
    x
}

// poly

fn random_qpoly(rng: &mut ChaCha8Rng, n: usize, d: u32) -> QPoly {
    Polynomial::from_terms(
        n,
        MultiIndex::up_to_degree(n, d)
            .into_iter()
            .filter_map(|a| rng.random_bool(0.5).then(|| (a, rand_q(rng))))
            .collect::<Vec<_>>(),
    )
}

fn random_cpoly(rng: &mut ChaCha8Rng, n: usize, d: u32) -> CPoly {
    Polynomial::from_terms(
        n,
        MultiIndex::up_to_degree(n, d)
            .into_iter()
            .map(|a| (a, rand_c(rng, 1.0)))
            .collect::<Vec<_>>(),
    )
}

fn l1_norm(p: &CPoly) -> f64 {
    p.terms().map(|(_, v)| v.norm()).sum()
}

fn poly_ring(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut fails = Vec::new();
    for _ in 0..30 {
        let (p, q, s) = (random_qpoly(&mut rng, 3, 3), random_qpoly(&mut rng, 3, 3), random_qpoly(&mut rng, 3, 3));
        fails.push(&(&p * &q) * &s != &p * &(&q * &s));
        fails.push(&p * &(&q + &s) != &(&p * &q) + &(&p * &s));
        fails.push(&p * &q != &q * &p);
        fails.push(&p + &q != &q + &p);
        fails.push(&(&p + &q) + &s != &p + &(&q + &s));
    }
    Ok(count(fails))
}

fn poly_eval(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let (p, q) = (random_cpoly(&mut rng, 3, 4), random_cpoly(&mut rng, 3, 4));
        let x: Vec<Complex64> = (0..3).map(|_| rand_c(&mut rng, 0.7)).collect();
        let lhs = p.checked_mul(&q)?.eval(&x)?;
        let rhs = p.eval(&x)? * q.eval(&x)?;
        worst = worst.max((lhs - rhs).norm() / (l1_norm(&p) * l1_norm(&q)));
    }
    Ok(worst)
}

fn poly_diff(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut fails = Vec::new();
    for _ in 0..20 {
        let p = random_qpoly(&mut rng, 3, 5);
        for i in 0..3 {
            for j in 0..3 {
                fails.push(p.diff(i)?.diff(j)? != p.diff(j)?.diff(i)?);
            }
        }
    }
    Ok(count(fails))
}

fn poly_subst(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = random_cpoly(&mut rng, 3, 4);
        let a = CMatrix::from_fn(3, 3, |_, _| rand_c(&mut rng, 1.0));
        let b = CMatrix::from_fn(3, 3, |_, _| rand_c(&mut rng, 1.0));
        let lhs = p.substitute_linear(&a.mul(&b))?;
        let rhs = p.substitute_linear(&a)?.substitute_linear(&b)?;
        worst = worst.max(lhs.max_abs_diff(&rhs) / l1_norm(&lhs).max(1.0));
    }
    Ok(worst)
}

// jordan

fn jordan_involution(ctx: &Ctx) -> Result<f64> {
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        for p in &pspace_basis(r)?.basis {
            fails.push(&kappa_inversion(&kappa_inversion(p)?)? != p);
        }
    }
    Ok(count(fails))
}

fn jordan_flip(ctx: &Ctx) -> Result<f64> {
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        let b = pspace_basis(r)?;
        for (&j, idx) in &b.grading {
            for &i in idx {
                fails.push(!b.contains_in(&kappa_inversion(&b.basis[i])?, -j));
            }
        }
    }
    Ok(count(fails))
}

fn jordan_dims(ctx: &Ctx) -> Result<f64> {
    let mut dev = 0usize;
    for &r in &ctx.ranks {
        let b = pspace_basis(r)?;
        let ri = r as i32;
        let half = r * (r + 1) / 2;
        for (j, expected) in [(-ri, 1), (ri, 1), (1 - ri, half), (ri - 1, half)] {
            dev += b.component_dim(j).abs_diff(expected);
        }
    }
    Ok(dev as f64)
}

fn jordan_dilation(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        let b = pspace_basis(r)?;
        let step = if r == 2 { 1 } else { 9 };
        for _ in 0..2 {
            let l = StrElement::new(rand_invertible(&mut rng, r))?;
            let m = StrElement::new(rand_invertible(&mut rng, r))?;
            for p in b.basis.iter().step_by(step) {
                let lhs = kappa_dilation(&l, &kappa_dilation(&m, p)?)?;
                fails.push(lhs != kappa_dilation(&l.compose(&m), p)?);
            }
        }
    }
    Ok(count(fails))
}

fn jordan_translation(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        let p = q_poly(r);
        for _ in 0..2 {
            let a = rand_sym(&mut rng, r);
            let b = rand_sym(&mut rng, r);
            let sum = SymMatrix::new(a.matrix().add(b.matrix()))?;
            let lhs = kappa_translation(&a, &kappa_translation(&b, &p)?)?;
            fails.push(lhs != kappa_translation(&sum, &p)?);
        }
    }
    Ok(count(fails))
}

fn jordan_chi(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for _ in 0..20 {
            let l = StrElement::new(CMatrix::identity(r).add(&random_complex_matrix(&mut rng, r).scale(&c(0.5))))?;
            let m = StrElement::new(CMatrix::identity(r).add(&random_complex_matrix(&mut rng, r).scale(&c(0.5))))?;
            let prod = chi(&l) * chi(&m);
            worst = worst.max((chi(&l.compose(&m)) - prod).norm() / prod.norm().max(1.0));
        }
    }
    Ok(worst)
}

fn jordan_orbit(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        for _ in 0..10 {
            let l = StrElement::new(rand_invertible(&mut rng, r))?;
            let z: Vec<Q> = (0..r).map(|_| rand_q(&mut rng)).collect();
            let lz = l.l1().mul_vec(&z);
            fails.push(l.act(&xi_from_z(&z).matrix) != xi_from_z(&lz).matrix);
        }
    }
    Ok(count(fails))
}

// lie

fn lie_sl2(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let s = special_elements::<Q>(r);
        let k = Q::ratio(1, 2 * (1 - r as i64));
        let rm1 = Q::integer(r as i64 - 1);
        let pairs = [
            (bracket(&s.e, &s.f)?, s.h0.scale(&k)),
            (bracket(&s.h0, &s.e)?, s.e.scale(&-rm1.clone())),
            (bracket(&s.h0, &s.f)?, s.f.scale(&rm1)),
        ];
        for (a, b) in pairs {
            worst = worst.max(a.sub(&b).matrix().to_c64().max_abs());
        }
    }
    Ok(worst)
}

/// Largest residual of tilde against the closed-form brackets; `sigma` selects the 𝒱σ side.
fn tilde_residual(ctx: &Ctx, sigma: bool) -> Result<f64> {
    let mut rng = ctx.rng();
    let two = c(2.0);
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for _ in 0..20 {
            let w = random_complex_matrix(&mut rng, r);
            let s = random_complex_symmetric(&mut rng, r);
            let tw = tilde(&GAbstract::omega(w.clone()));
            let tr2 = w.trace() * two;
            let (lhs, rhs) = if sigma {
                let v_new = w.mul(&s).add(&s.mul(&w.transpose())).sub(&s.scale(&tr2));
                (bracket(&tw, &tilde(&GAbstract::tau_sigma(s)))?, tilde(&GAbstract::tau_sigma(v_new)))
            } else {
                let u_new = s.scale(&tr2).sub(&w.transpose().mul(&s)).sub(&s.mul(&w));
                (bracket(&tw, &tilde(&GAbstract::tau(s)))?, tilde(&GAbstract::tau(u_new)))
            };
            worst = worst.max(lhs.matrix().max_abs_diff(rhs.matrix()));
        }
    }
    Ok(worst)
}

fn lie_tilde_v(ctx: &Ctx) -> Result<f64> {
    tilde_residual(ctx, false)
}

fn lie_tilde_vsigma(ctx: &Ctx) -> Result<f64> {
    tilde_residual(ctx, true)
}

fn lie_real_form(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let gi = g0(r).inverse();
        for _ in 0..50 {
            let y = ad(&gi, &random_g_tilde_r(&mut rng, r));
            let (ok, res) = real_form_membership(&y, RealForm::SpReal);
            worst = worst.max(y.matrix().max_imag()).max(res);
            if !ok {
                worst = worst.max(1.0);
            }
            let (ok, res) = real_form_membership(&ad(&g0(r), &random_sp_real(&mut rng, r)), RealForm::GTildeR);
            worst = worst.max(res);
            if !ok {
                worst = worst.max(1.0);
            }
        }
        let images: Vec<_> = g_tilde_r_basis(r).iter().map(|x| ad(&gi, x)).collect();
        worst = worst.max(real_rank(&images, 1e-9).abs_diff(r * (2 * r + 1)) as f64);
    }
    Ok(worst)
}

fn lie_factorization(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for k in 0..100 {
        let r = ctx.ranks[k % ctx.ranks.len()];
        let g = random_symplectic(&mut rng, r, 5);
        for w in [factor_symplectic(&g)?, factor_symplectic_udl(&g)?] {
            let p = w.product(r)?;
            worst = worst.max(p.max_abs_diff(g.matrix()) / g.matrix().max_abs().max(1.0));
        }
    }
    Ok(worst)
}

fn lie_orbit(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        for _ in 0..5 {
            let l = rand_invertible(&mut rng, r);
            let linv_t = l.inverse()?.transpose();
            let z = Matrix::zeros(r, r);
            let g = SpGroupElement::new(Matrix::from_blocks(&l, &z, &z, &linv_t))?;
            let v: Vec<Q> = (0..r).map(|_| rand_q(&mut rng)).collect();
            let p = minimal_orbit_point(&v, OrbitSide::VSigma);
            fails.push(ad(&g, &p) != minimal_orbit_point(&l.mul_vec(&v), OrbitSide::VSigma));
            let p = minimal_orbit_point(&v, OrbitSide::V);
            fails.push(ad(&g, &p) != minimal_orbit_point(&linv_t.mul_vec(&v), OrbitSide::V));
        }
    }
    Ok(count(fails))
}

// fock

fn random_homogeneous(rng: &mut ChaCha8Rng, r: usize, k: u32) -> FockVector {
    FockVector::new(r, MultiIndex::of_degree(r, k).into_iter().map(|a| (a, rand_c(rng, 1.0))).collect())
}

fn fock_adjoint(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for (e, f) in [(rho_e(r, d), rho_f(r, d)), (rho_sigma_e(r, d), rho_sigma_f(r, d))] {
            let adj = e.weighted_adjoint(|a| a.factorial()).scale(c(-1.0));
            worst = worst.max(adj.max_abs_diff_on(&f, d as i32)?);
        }
    }
    Ok(worst)
}

fn homomorphism_residual(
    basis: &[SpAlgElement<Complex64>],
    d: u32,
    op: impl Fn(&SpAlgElement<Complex64>) -> Result<OperatorMatrix>,
) -> Result<f64> {
    let ops = basis.iter().map(&op).collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let lhs = ops[i].commutator(&ops[j])?;
            let rhs = op(&bracket(x, y)?)?;
            if lhs.safe_window() < d as i32 - 4 {
                worst = worst.max(1.0);
            }
            worst = worst.max(lhs.max_abs_diff(&rhs)?);
        }
    }
    Ok(worst)
}

fn fock_homomorphism(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let basis = sp_basis::<Complex64>(r);
        worst = worst.max(homomorphism_residual(&basis, d, |x| Ok(d_t(x, d)))?);
        worst = worst.max(homomorphism_residual(&basis, d, |x| Ok(d_t_sigma(x, d)))?);
    }
    Ok(worst)
}

fn fock_conjugation(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let j = SpGroupElement::new(j_matrix::<Complex64>(r))?;
        let i = Complex64::new(0.0, 1.0);
        let p = OperatorMatrix::diagonal(&fock_basis(r, d), |a| i.powu(a.degree()));
        let pinv = OperatorMatrix::diagonal(p.basis(), |a| (-i).powu(a.degree()));
        for x in sp_basis::<Complex64>(r) {
            let rhs = p.compose(&d_t(&ad(&j, &x), d))?.compose(&pinv)?;
            worst = worst.max(d_t_sigma(&x, d).max_abs_diff(&rhs)?);
        }
    }
    Ok(worst)
}

fn fock_grading(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        let shifts = |o: &OperatorMatrix| o.degree_shift().iter().copied().collect::<Vec<_>>();
        fails.push(shifts(&rho_e(r, d)) != vec![2]);
        fails.push(shifts(&rho_f(r, d)) != vec![-2]);
        fails.push(!rho_h0(r, d).entries().all(|(i, j, _)| i == j));
    }
    Ok(count(fails))
}

fn random_unitary(rng: &mut ChaCha8Rng, r: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..r {
        let mut v: Vec<Complex64> = (0..r).map(|_| rand_c(rng, 1.0)).collect();
        for u in &cols {
            let p: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= p * ui;
            }
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / n).collect());
    }
    CMatrix::from_fn(r, r, |i, j| cols[j][i])
}

fn fock_unitary(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let t = t_generator(&Generator::Dilation(random_unitary(&mut rng, r)), 8)?;
        for k in 0..=8 {
            let phi = random_homogeneous(&mut rng, r, k);
            let psi = random_homogeneous(&mut rng, r, k);
            let before = fock_inner(&phi, &psi)?;
            let after = fock_inner(&phi.apply(&t)?, &psi.apply(&t)?)?;
            worst = worst.max((before - after).norm() / before.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Simpson's rule for vol(S^{2r−1})∫₀^∞ ρ^{2k+2r−1}(1+ρ²)^{−(k+r+1)}dρ, with ρ = tan θ,
/// divided by the number of degree-k monomials.
pub(crate) fn radial_oracle(r: usize, k: u32) -> f64 {
    let n_pow = 2 * k as i32 + 2 * r as i32 - 1;
    let s = k as i32 + r as i32 + 1;
    let f = |t: f64| t.sin().powi(n_pow) * t.cos().powi(2 * s - 2 - n_pow);
    let n = 20000;
    let h = std::f64::consts::FRAC_PI_2 / n as f64;
    let mut acc = f(0.0) + f(std::f64::consts::FRAC_PI_2);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    let vol = 2.0 * std::f64::consts::PI.powi(r as i32) / (1..r).map(|j| j as f64).product::<f64>();
    let monomials = MultiIndex::of_degree(r, k).len() as f64;
    vol * acc * h / 3.0 / monomials
}

fn fock_norm_constants(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for k in 0..=9 {
            let closed = a_const(r, k);
            worst = worst.max((radial_oracle(r, k) - closed).abs() / closed);
        }
    }
    Ok(worst)
}

fn fock_norm_exact(ctx: &Ctx) -> Result<f64> {
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        for k in 0..=8 {
            for a in MultiIndex::of_degree(r, k) {
                let fact: num_bigint::BigInt = a.entries().iter().map(|&e| factorial_big(e)).product();
                fails.push(monomial_norm_exact(&a) / c_const_exact(k) != num_rational::BigRational::from_integer(fact));
            }
        }
    }
    Ok(count(fails))
}

fn fock_norm_consistency(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for k in 0..=8 {
            let phi = random_homogeneous(&mut rng, r, k);
            let lhs = norm_m(&phi)? / c_const(k);
            worst = worst.max((lhs - fock_inner(&phi, &phi)?.re).abs() / lhs);
        }
    }
    Ok(worst)
}

fn fock_reproducing(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for k in 0..=7 {
            let f = random_homogeneous(&mut rng, r, k);
            for _ in 0..20 {
                let zp: Vec<Complex64> = (0..r).map(|_| rand_c(&mut rng, 1.0)).collect();
                let lhs = inner_m(&reproducing_kernel(k, &zp), &f, k)?;
                worst = worst.max((lhs - f.eval(&zp)?).norm());
            }
        }
    }
    Ok(worst)
}

// schrodinger

fn sch_homomorphism(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let basis = sp_basis::<Complex64>(r);
        worst = worst.max(homomorphism_residual(&basis, d, |x| d_r(x, d))?);
        worst = worst.max(homomorphism_residual(&basis, d, |x| d_r_sigma(x, d))?);
    }
    Ok(worst)
}

fn sample_real_elements(ctx: &Ctx, r: usize) -> Vec<SpAlgElement<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed ^ ctx.salt ^ r as u64);
    let mut elems = sp_basis::<Complex64>(r);
    elems.extend((0..5).map(|_| random_sp_real(&mut rng, r)));
    elems
}

fn sch_skew(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for x in sample_real_elements(ctx, r) {
            for op in [d_r(&x, d)?, d_r_sigma(&x, d)?] {
                worst = worst.max(op.add(&op.weighted_adjoint(|_| 1.0))?.max_abs_on(d as i32));
            }
        }
    }
    Ok(worst)
}

fn sch_parity(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        for x in sample_real_elements(ctx, r) {
            for op in [d_r(&x, d)?, d_r_sigma(&x, d)?] {
                let b = op.basis();
                fails.extend(op.entries().map(|(i, j, _)| b.degree(i) % 2 != b.degree(j) % 2));
            }
        }
    }
    Ok(count(fails))
}

fn sch_oscillator(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let s = special_elements::<Complex64>(r);
        let diff = d_r(&s.e, d)?.sub(&d_r(&s.f, d)?)?;
        let expected = OperatorMatrix::diagonal(diff.basis(), |a| {
            Complex64::new(0.0, 0.25 * (2.0 * a.degree() as f64 + r as f64))
        });
        worst = worst.max(diff.max_abs_diff(&expected)?);
        worst = worst.max(count(diff.entries().map(|(a, b, v)| a != b && v != Complex64::default())));
    }
    Ok(worst)
}

fn sch_fourier(ctx: &Ctx) -> Result<f64> {
    let d = ctx.cfg.degree;
    let mut worst = 0.0f64;
    let i = Complex64::new(0.0, 1.0);
    for &r in &ctx.ranks {
        let j = r_j(r, d);
        let j4 = j.compose(&j)?.compose(&j)?.compose(&j)?;
        worst = worst.max(j4.max_abs_diff(&OperatorMatrix::identity(j.basis()))?);
        worst = worst.max(count(j.entries().map(|(a, b, _)| a != b)));
        // (2π)^{−r/2}∫e^{i⟨x,y⟩}h_α(y)dy against the diagonal entry times h_α(x).
        let deg = if r == 1 { 8.min(d) } else { 6.min(d) };
        let rule = QuadratureRule::new(r, 40);
        let x: Vec<f64> = [0.3, -0.7, 1.1][..r].to_vec();
        for (k, a) in j.basis().indices().iter().enumerate() {
            if a.degree() > deg {
                continue;
            }
            let integral: Complex64 = rule
                .nodes
                .iter()
                .zip(&rule.scaled_weights)
                .map(|(y, w)| {
                    let xy: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
                    (i * xy).exp() * (w * hermite_eval(a, y))
                })
                .sum::<Complex64>()
                / (2.0 * std::f64::consts::PI).powf(r as f64 / 2.0);
            worst = worst.max((integral - j.get(k, k) * hermite_eval(a, &x)).norm());
            worst = worst.max((j.get(k, k) - i.powu(a.degree())).norm());
        }
    }
    Ok(worst)
}

// harmonic

fn harmonic_ktypes(ctx: &Ctx) -> Result<f64> {
    let mut fails = Vec::new();
    for &r in &ctx.ranks {
        for kk in 0..=6u32 {
            let monos = MultiIndex::of_degree(r, kk);
            let mut rows = Vec::new();
            let mut total = 0;
            for j in 0..=kk / 2 {
                let b = harmonic_basis(r, kk - 2 * j)?;
                total += b.dim();
                for p in &b.polys {
                    let f = harmonics_to_fock(p, kk)?;
                    rows.push(monos.iter().map(|a| f.coeffs.get(a).copied().unwrap_or(c(0.0))).collect::<Vec<_>>());
                }
            }
            fails.push(total != monos.len());
            fails.push(rank(rows, monos.len(), 1e-9) != monos.len());
        }
    }
    Ok(count(fails))
}

fn eval_real(p: &CPoly, x: &[f64]) -> Result<Complex64> {
    let xc: Vec<Complex64> = x.iter().map(|&v| c(v)).collect();
    p.eval(&xc)
}

fn harmonic_equivariance(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for _ in 0..10 {
            let g = random_orthogonal(&mut rng, r)?;
            let ginv = g.transpose();
            for k in 1..=4 {
                let mut phi = Polynomial::zero(r);
                for p in &harmonic_basis(r, k)?.polys {
                    phi = phi.checked_add(&p.scale(&c(rng.random_range(-1.0..1.0))))?;
                }
                let lhs = harmonics_to_fock(&phi.substitute_linear(&ginv)?, k)?;
                let rhs = FockVector::from_poly(&harmonics_to_fock(&phi, k)?.to_poly().substitute_linear(&ginv)?);
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
            let f: CPoly = Polynomial::from_terms(
                r,
                MultiIndex::up_to_degree(r, 3).into_iter().map(|a| (a, c(rng.random_range(-1.0..1.0)))),
            );
            let a: Vec<Complex64> = (0..4).map(|_| c(rng.random_range(-1.0..1.0))).collect();
            let rule = SphereRule::new(r, 7)?;
            let rotated = f.substitute_linear(&ginv)?;
            let vals = rule.nodes.iter().map(|x| eval_real(&rotated, x)).collect::<Result<Vec<_>>>()?;
            let lhs = a_operator(&a, &rule, &vals)?;
            let vals = rule.nodes.iter().map(|x| eval_real(&f, x)).collect::<Result<Vec<_>>>()?;
            let rhs = FockVector::from_poly(&a_operator(&a, &rule, &vals)?.to_poly().substitute_linear(&ginv)?);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(worst)
}

fn harmonic_example(_ctx: &Ctx) -> Result<f64> {
    let m = |a: Vec<u32>| MultiIndex::new(a);
    let phi: CPoly = Polynomial::from_terms(2, [(m(vec![2, 0]), c(1.0)), (m(vec![0, 2]), c(-1.0))]);
    let expected = FockVector::new(2, [(m(vec![2, 0]), c(0.25)), (m(vec![0, 2]), c(-0.25))].into_iter().collect());
    Ok(harmonics_to_fock(&phi, 2)?.max_abs_diff(&expected))
}

// bargmann

fn bargmann_unitarity(ctx: &Ctx) -> Result<f64> {
    Ok(count(ctx.ranks.iter().map(|&r| !gram_is_identity(&bargmann_gram_exact(r, 8)))))
}

fn bargmann_quad(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let order = ctx.cfg.quad_order(r);
        let deg = if r == 1 { 10 } else { 6 };
        let rule = QuadratureRule::new(r, order);
        let points: Vec<Vec<Complex64>> = (0..20).map(|_| ball_z(&mut rng, r, 2.0)).collect();
        for a in MultiIndex::up_to_degree(r, deg) {
            let f = HermiteVector::basis_vector(a.clone());
            for z in &points {
                worst = worst.max((bargmann_quadrature(&f, z, &rule)? - exact_value(&a, z)).norm());
            }
        }
    }
    Ok(worst)
}

fn bargmann_ladder(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        worst = worst.max(intertwine_residual(&BargmannKernel::new(r), ctx.cfg.degree)?.ladder);
    }
    Ok(worst)
}

fn bargmann_intertwine(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        let rep = intertwine_residual(&BargmannKernel::new(r), ctx.cfg.degree)?;
        worst = worst.max(rep.lie_sigma).max(rep.lie).max(rep.star);
    }
    Ok(worst)
}

fn negative_mutated(ctx: &Ctx) -> Result<f64> {
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        worst = worst.max(intertwine_residual(&BargmannKernel::mutated(r), ctx.cfg.degree)?.max);
    }
    Ok(worst)
}

fn pde_points(ctx: &Ctx, r: usize) -> Vec<(Vec<Complex64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed ^ ctx.salt ^ r as u64);
    (0..100).map(|_| (ball_z(&mut rng, r, 2.0), ball_x(&mut rng, r, 2.0))).collect()
}

fn pde_analytic(ctx: &Ctx) -> Result<f64> {
    Ok(ctx.ranks.iter().map(|&r| kernel_pde_residual(&pde_points(ctx, r)).analytic).fold(0.0, f64::max))
}

fn pde_fd(ctx: &Ctx) -> Result<f64> {
    Ok(ctx
        .ranks
        .iter()
        .map(|&r| kernel_pde_residual(&pde_points(ctx, r)).finite_difference)
        .fold(0.0, f64::max))
}

fn pde_symbolic(ctx: &Ctx) -> Result<f64> {
    Ok(count(ctx.ranks.iter().map(|&r| !pde_factors_agree(r))))
}

fn kernel_symmetry(ctx: &Ctx) -> Result<f64> {
    let mut rng = ctx.rng();
    let mut worst = 0.0f64;
    for &r in &ctx.ranks {
        for _ in 0..100 {
            let z = ball_x(&mut rng, r, 3.0);
            let x = ball_x(&mut rng, r, 3.0);
            let zc: Vec<Complex64> = z.iter().map(|&v| c(v)).collect();
            let xc: Vec<Complex64> = x.iter().map(|&v| c(v)).collect();
            let a = kernel_eval(&zc, &x);
            let b = kernel_eval(&xc, &z);
            worst = worst.max((a - b).norm() / a.norm());
        }
    }
    Ok(worst)
}
