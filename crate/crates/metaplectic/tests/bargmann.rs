use metaplectic::bargmann::{
    b0, b0_sigma, bargmann_exact, bargmann_gram_exact, bargmann_quadrature, exact_value, gram_is_identity,
    intertwine_residual, inverse_bargmann_exact, kernel_eval, kernel_matrix, kernel_pde_residual, pde_factors_agree,
    transported_norm_sq, BargmannKernel,
};
use metaplectic::fock::fock_inner;
use metaplectic::poly::MultiIndex;
use metaplectic::quadrature::QuadratureRule;
use metaplectic::schrodinger::HermiteVector;
use metaplectic::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn h(a: &[u32]) -> HermiteVector {
    HermiteVector::basis_vector(MultiIndex::new(a.to_vec()))
}

fn random_z(rng: &mut ChaCha8Rng, r: usize, radius: f64) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = (0..r)
        .map(|_| Complex64::new(rng.random_range(-radius..radius), rng.random_range(-radius..radius)))
        .collect();
    let n = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if n > radius {
        z.iter_mut().for_each(|v| *v *= radius / n);
    }
    z
}

fn random_x(rng: &mut ChaCha8Rng, r: usize, radius: f64) -> Vec<f64> {
    let mut x: Vec<f64> = (0..r).map(|_| rng.random_range(-radius..radius)).collect();
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > radius {
        x.iter_mut().for_each(|v| *v *= radius / n);
    }
    x
}

#[test]
fn kernel_examples() {
    let x = [0.7, -1.2];
    let z0 = [c(0.0), c(0.0)];
    assert!((kernel_eval(&z0, &x) - c((-0.5 * (0.49 + 1.44f64)).exp())).norm() < 1e-15);
    let z = [Complex64::new(0.5, 1.0), Complex64::new(-0.3, 0.2)];
    let tz: Complex64 = z.iter().map(|v| v * v).sum();
    assert!((kernel_eval(&z, &[0.0, 0.0]) - (-tz * 0.5).exp()).norm() < 1e-15);
}

#[test]
fn ground_state_maps_to_one() {
    for r in [1, 2] {
        let f = bargmann_exact(&h(&vec![0; r]));
        assert_eq!(f.coeffs.len(), 1);
        assert!((f.coeffs[&MultiIndex::zeros(r)] - c(1.0)).norm() < 1e-15);
        let rule = QuadratureRule::new(r, 20);
        let v = bargmann_quadrature(&h(&vec![0; r]), &vec![c(0.0); r], &rule).unwrap();
        assert!((v - c(1.0)).norm() < 1e-10);
    }
}

#[test]
fn quadrature_examples() {
    let rule = QuadratureRule::new(1, 40);
    let v = bargmann_quadrature(&h(&[2]), &[c(1.0)], &rule).unwrap();
    assert!((v - c(std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-8);
    let v = bargmann_quadrature(&h(&[1]), &[c(0.0)], &rule).unwrap();
    assert!(v.norm() < 1e-14);
}

#[test]
fn quadrature_agrees_with_exact_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (r, d, order) in [(1usize, 10u32, 40usize), (2, 6, 24)] {
        let rule = QuadratureRule::new(r, order);
        let points: Vec<Vec<Complex64>> = (0..20).map(|_| random_z(&mut rng, r, 2.0)).collect();
        for a in MultiIndex::up_to_degree(r, d) {
            let f = HermiteVector::basis_vector(a.clone());
            for z in &points {
                let q = bargmann_quadrature(&f, z, &rule).unwrap();
                let e = exact_value(&a, z);
                assert!((q - e).norm() < 1e-8, "α={a:?} z={z:?}: {q} vs {e}");
            }
        }
    }
}

#[test]
fn low_order_quadrature_is_rejected() {
    let rule = QuadratureRule::new(1, 4);
    let r = bargmann_quadrature(&h(&[9]), &[Complex64::new(1.5, 0.5)], &rule);
    assert!(matches!(r, Err(Error::QuadratureInsufficient(_))));
}

#[test]
fn gram_matrix_is_identity() {
    for r in [1, 2] {
        assert!(gram_is_identity(&bargmann_gram_exact(r, 8)));
        let images: Vec<_> = MultiIndex::up_to_degree(r, 8)
            .into_iter()
            .map(|a| bargmann_exact(&HermiteVector::basis_vector(a)))
            .collect();
        for (i, u) in images.iter().enumerate() {
            for (j, v) in images.iter().enumerate() {
                let g = fock_inner(u, v).unwrap();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(e)).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn kernel_matrix_matches_exact_map() {
    for r in [1, 2] {
        let k = kernel_matrix(&BargmannKernel::new(r), 10);
        for a in MultiIndex::up_to_degree(r, 10) {
            let i = k.basis().position(&a).unwrap();
            for j in 0..k.dim() {
                let expected = if i == j { 1.0 / a.factorial().sqrt() } else { 0.0 };
                assert!((k.get(j, i) - c(expected)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn mutated_kernel_is_bargmann_after_parity() {
    let k = kernel_matrix(&BargmannKernel::mutated(1), 10);
    for n in 0..=10u32 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let a = MultiIndex::new(vec![n]);
        let i = k.basis().position(&a).unwrap();
        assert!((k.get(i, i) - c(sign / a.factorial().sqrt())).norm() < 1e-12);
    }
}

#[test]
fn round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = HermiteVector::new(
        2,
        MultiIndex::up_to_degree(2, 5)
            .into_iter()
            .map(|a| (a, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect(),
    );
    let back = inverse_bargmann_exact(&bargmann_exact(&f));
    assert!(back.max_abs_diff(&f) < 1e-14);
    assert!((bargmann_exact(&f).norm_sq() - f.norm_sq()).abs() < 1e-13);
}

#[test]
fn intertwining_relations() {
    for r in [1, 2] {
        let rep = intertwine_residual(&BargmannKernel::new(r), 12).unwrap();
        assert!(rep.lie_sigma < 1e-9, "r={r} {rep:?}");
        assert!(rep.lie < 1e-9, "r={r} {rep:?}");
        assert!(rep.star < 1e-9, "r={r} {rep:?}");
        assert!(rep.ladder < 1e-10, "r={r} {rep:?}");
        assert!(rep.window >= 10, "r={r} {rep:?}");
    }
}

#[test]
fn mutated_kernel_fails() {
    for r in [1, 2] {
        let rep = intertwine_residual(&BargmannKernel::mutated(r), 12).unwrap();
        assert!(rep.max > 1e-2, "r={r} {rep:?}");
    }
}

#[test]
fn pde_at_origin() {
    let rep = kernel_pde_residual(&[(vec![c(0.0)], vec![0.0])]);
    assert!(rep.analytic < 1e-15);
    assert!(rep.finite_difference < 1e-9);
}

#[test]
fn pde_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for r in [1, 2, 3] {
        let pts: Vec<_> = (0..100).map(|_| (random_z(&mut rng, r, 2.0), random_x(&mut rng, r, 2.0))).collect();
        let rep = kernel_pde_residual(&pts);
        assert!(rep.analytic < 1e-10, "r={r} {rep:?}");
        assert!(rep.finite_difference < 1e-6, "r={r} {rep:?}");
    }
}

#[test]
fn pde_factors_symbolic() {
    for r in 1..=3 {
        assert!(pde_factors_agree(r));
    }
}

/// B0(h0) = T(g0⁻¹)1 for r = 1. g0⁻¹ = t_upper(i)·g(−i√2)·t_lower(·), so the image of 1
/// is (−i√2)^{½}e^{−z²/2}; for Tσ, g0⁻¹ = t_lower(i)·g(−i/√2)·t_upper(·) and the image
/// is (−i/√2)^{−½}e^{−z²/2}.
#[test]
fn b0_of_ground_state() {
    let d = 12;
    let t = b0(&h(&[0]), d).unwrap();
    let ts = b0_sigma(&h(&[0]), d).unwrap();
    let pref_t = Complex64::new(0.0, -std::f64::consts::SQRT_2).sqrt();
    let pref_ts = Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2).sqrt().inv();
    let mut fact = 1.0;
    for k in 0..=d / 2 {
        if k > 0 {
            fact *= k as f64;
        }
        let g = (-0.5f64).powi(k as i32) / fact;
        let a = MultiIndex::new(vec![2 * k]);
        assert!((t.coeffs[&a] - pref_t * g).norm() < 1e-13, "k={k}");
        assert!((ts.coeffs[&a] - pref_ts * g).norm() < 1e-13, "k={k}");
    }
    assert!(t.coeffs.keys().all(|a| a.degree() % 2 == 0 && a.degree() <= d));
}

#[test]
fn b0_is_linear_and_norm_is_transported() {
    let f = h(&[0]).add(&h(&[2]).scale(Complex64::new(0.0, 2.0)));
    let lhs = b0(&f, 12).unwrap();
    let rhs = b0(&h(&[0]), 12)
        .unwrap()
        .add(&b0(&h(&[2]), 12).unwrap().scale(Complex64::new(0.0, 2.0)));
    assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    assert!((transported_norm_sq(&f) - f.norm_sq()).abs() < 1e-13);
}

#[test]
fn b0_rejects_degree_beyond_window() {
    assert!(b0(&h(&[14]), 12).is_err());
}

proptest! {
    #[test]
    fn kernel_is_symmetric_on_reals(z in prop::collection::vec(-3.0f64..3.0, 1..4), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = z.iter().map(|_| rng.random_range(-3.0..3.0)).collect();
        let zc: Vec<Complex64> = z.iter().map(|&v| c(v)).collect();
        let xc: Vec<Complex64> = x.iter().map(|&v| c(v)).collect();
        let a = kernel_eval(&zc, &x);
        let b = kernel_eval(&xc, &z);
        prop_assert!((a - b).norm() <= 1e-14 * a.norm().max(1e-300));
    }

    #[test]
    fn exact_map_is_isometric(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10)) {
        let idx = MultiIndex::up_to_degree(3, 2);
        let f = HermiteVector::new(3, idx.into_iter().zip(coeffs).map(|(a, (x, y))| (a, Complex64::new(x, y))).collect());
        let g = bargmann_exact(&f);
        prop_assert!((g.norm_sq() - f.norm_sq()).abs() < 1e-13);
        prop_assert!(inverse_bargmann_exact(&g).max_abs_diff(&f) < 1e-15);
    }
}
