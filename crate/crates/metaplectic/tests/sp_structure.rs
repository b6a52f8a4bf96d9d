use std::time::Instant;

use metaplectic::matrix::{CMatrix, Matrix};
use metaplectic::scalar::GaussianRational as Q;
use metaplectic::sp::{
    ad, bracket, factor_symplectic, factor_symplectic_udl, g0, g_tilde_r_basis, minimal_orbit_point,
    random_complex_matrix, random_complex_symmetric, random_g_tilde_r, random_sp_real, random_symplectic,
    real_form_membership, real_rank, special_elements, tilde, GAbstract, Generator, OrbitSide, RealForm,
    SpGroupElement,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn sl2_triple_identities_exact() {
    let start = Instant::now();
    for r in 2..=5usize {
        let s = special_elements::<Q>(r);
        let k = Q::ratio(1, 2 * (1 - r as i64));
        assert_eq!(bracket(&s.e, &s.f).unwrap(), s.h0.scale(&k), "r = {r}");
        let rm1 = Q::integer(r as i64 - 1);
        assert_eq!(bracket(&s.h0, &s.e).unwrap(), s.e.scale(&-rm1.clone()));
        assert_eq!(bracket(&s.h0, &s.f).unwrap(), s.f.scale(&rm1));
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn tilde_respects_brackets() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let two = Complex64::new(2.0, 0.0);
    for r in [2, 3] {
        for _ in 0..20 {
            let w = random_complex_matrix(&mut rng, r);
            let u = random_complex_symmetric(&mut rng, r);
            let v = random_complex_symmetric(&mut rng, r);
            let tw = tilde(&GAbstract::omega(w.clone()));
            let tr2 = w.trace() * two;
            let u_new = u.scale(&tr2).sub(&w.transpose().mul(&u)).sub(&u.mul(&w));
            let lhs = bracket(&tw, &tilde(&GAbstract::tau(u))).unwrap();
            let rhs = tilde(&GAbstract::tau(u_new));
            assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
            let v_new = w.mul(&v).add(&v.mul(&w.transpose())).sub(&v.scale(&tr2));
            let lhs = bracket(&tw, &tilde(&GAbstract::tau_sigma(v))).unwrap();
            let rhs = tilde(&GAbstract::tau_sigma(v_new));
            assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-12);
        }
    }
}

#[test]
fn tilde_is_linear_and_injective_on_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r = 2;
    let a = GAbstract {
        omega1: random_complex_matrix(&mut rng, r),
        u: random_complex_symmetric(&mut rng, r),
        v: random_complex_symmetric(&mut rng, r),
    };
    let sum = tilde(&GAbstract::omega(a.omega1.clone()))
        .add(&tilde(&GAbstract::tau(a.u.clone())))
        .add(&tilde(&GAbstract::tau_sigma(a.v.clone())));
    assert!(tilde(&a).matrix().max_abs_diff(sum.matrix()) < 1e-15);
}

#[test]
fn real_form_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for r in [2, 3] {
        let gi = g0(r).inverse();
        for _ in 0..50 {
            let x = random_g_tilde_r(&mut rng, r);
            assert!(real_form_membership(&x, RealForm::GTildeR).0);
            let y = ad(&gi, &x);
            let (ok, _) = real_form_membership(&y, RealForm::SpReal);
            assert!(ok && y.matrix().max_imag() < 1e-12);
            let s = random_sp_real(&mut rng, r);
            let (ok, res) = real_form_membership(&ad(&g0(r), &s), RealForm::GTildeR);
            assert!(ok, "residual {res}");
        }
        let images: Vec<_> = g_tilde_r_basis(r).iter().map(|x| ad(&gi, x)).collect();
        assert_eq!(real_rank(&images, 1e-9), r * (2 * r + 1));
    }
}

#[test]
fn factorization_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..100 {
        let r = 1 + k % 3;
        let g = random_symplectic(&mut rng, r, 5);
        for w in [factor_symplectic(&g).unwrap(), factor_symplectic_udl(&g).unwrap()] {
            let p = w.product(r).unwrap();
            assert!(p.max_abs_diff(g.matrix()) < 1e-10 * g.matrix().max_abs().max(1.0));
        }
    }
}

#[test]
fn g0_inverse_words() {
    let w = factor_symplectic_udl(&g0(1).inverse()).unwrap();
    let c = |re, im| CMatrix::from_rows(vec![vec![Complex64::new(re, im)]]);
    let s = std::f64::consts::SQRT_2;
    let expected = [Generator::Upper(c(0.0, 1.0)), Generator::Dilation(c(0.0, -s)), Generator::Lower(c(0.0, -1.0))];
    for (a, b) in w.letters.iter().zip(expected.iter()) {
        let (a, b) = (a.matrix().unwrap(), b.matrix().unwrap());
        assert!(a.max_abs_diff(&b) < 1e-14);
    }
}

#[test]
fn orbit_equivariance_exact() {
    let l = Matrix::from_rows(vec![
        vec![Q::integer(2), Q::ratio(1, 3)],
        vec![Q::integer(-1), Q::integer(1)],
    ]);
    let linv_t = l.inverse().unwrap().transpose();
    let z = Matrix::zeros(2, 2);
    let g = SpGroupElement::new(Matrix::from_blocks(&l, &z, &z, &linv_t)).unwrap();
    let v = vec![Q::integer(3), Q::ratio(-1, 2)];
    let p = minimal_orbit_point(&v, OrbitSide::VSigma);
    assert_eq!(ad(&g, &p), minimal_orbit_point(&l.mul_vec(&v), OrbitSide::VSigma));
    let p = minimal_orbit_point(&v, OrbitSide::V);
    assert_eq!(ad(&g, &p), minimal_orbit_point(&linv_t.mul_vec(&v), OrbitSide::V));
}

proptest! {
    #[test]
    fn ad_preserves_brackets(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_symplectic(&mut rng, 2, 4);
        let x = random_sp_real(&mut rng, 2);
        let y = random_sp_real(&mut rng, 2);
        let lhs = ad(&g, &bracket(&x, &y).unwrap());
        let rhs = bracket(&ad(&g, &x), &ad(&g, &y)).unwrap();
        let scale = g.matrix().max_abs().powi(2) * 10.0;
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-10 * scale * scale);
    }

    #[test]
    fn group_inverse_is_inverse(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_symplectic(&mut rng, 2, 5);
        let p = g.mul(&g.inverse());
        let scale = g.matrix().max_abs().powi(2);
        prop_assert!(p.matrix().max_abs_diff(&CMatrix::identity(4)) < 1e-12 * scale.max(1.0));
    }
}
