use metaplectic::fock::Side;
use metaplectic::matrix::CMatrix;
use metaplectic::operator::{MonomialBasis, OperatorMatrix};
use metaplectic::poly::MultiIndex;
use metaplectic::quadrature::{GaussHermite, QuadratureRule};
use metaplectic::schrodinger::{
    d_r, d_r_sigma, euler_op, hermite_basis, hermite_eval, parity_split, r_generator, r_j, r_sigma_generator, r_sigma_j,
    tau_x2, HermiteVector,
};
use metaplectic::sp::{bracket, random_real_symmetric, random_sp_real, sp_basis, special_elements, Generator, SpAlgElement};
use metaplectic::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cm(rows: Vec<Vec<f64>>) -> CMatrix {
    CMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| c(x, 0.0)).collect()).collect())
}

/// ∫ h_β(x)·g(x)·h_α(k x) dx by brute-force Gauss–Hermite on the e^{−|x|²} weight,
/// with the Gaussian of the Hermite functions folded back in.
fn brute_matrix(
    basis: &MonomialBasis,
    order: usize,
    k: &[Vec<f64>],
    g: impl Fn(&[f64]) -> Complex64,
) -> Vec<Vec<Complex64>> {
    let r = basis.nvars();
    let rule = QuadratureRule::new(r, order);
    let mut out = vec![vec![c(0.0, 0.0); basis.len()]; basis.len()];
    for (x, w) in rule.nodes.iter().zip(&rule.scaled_weights) {
        let kx: Vec<f64> = (0..r).map(|i| (0..r).map(|j| k[i][j] * x[j]).sum()).collect();
        let hb: Vec<f64> = basis.indices().iter().map(|a| hermite_eval(a, x)).collect();
        let ha: Vec<f64> = basis.indices().iter().map(|a| hermite_eval(a, &kx)).collect();
        let gx = g(x) * *w;
        for (ai, col) in out.iter_mut().enumerate() {
            for (bi, e) in col.iter_mut().enumerate() {
                *e += gx * hb[bi] * ha[ai];
            }
        }
    }
    out
}

fn max_dense_diff(op: &OperatorMatrix, m: &[Vec<Complex64>]) -> f64 {
    let d = op.to_dense();
    let mut worst = 0.0f64;
    for (col, mcol) in m.iter().enumerate() {
        for (row, v) in mcol.iter().enumerate() {
            worst = worst.max((d[col][row] - v).norm());
        }
    }
    worst
}

#[test]
fn x_squared_is_tridiagonal() {
    let d = 10;
    let op = OperatorMatrix::from_action(&hermite_basis(1, d), |a| {
        tau_x2(&CMatrix::identity(1), &metaplectic::operator::singleton(a))
    });
    let g = GaussHermite::new(40);
    for m in 0..=d {
        for n in 0..=d {
            let oracle: f64 = g
                .nodes
                .iter()
                .zip(&g.scaled_weights)
                .map(|(&x, w)| w * hermite_eval(&MultiIndex::new(vec![m]), &[x]) * x * x * hermite_eval(&MultiIndex::new(vec![n]), &[x]))
                .sum();
            let v = op.get(m as usize, n as usize);
            assert!((v - c(oracle, 0.0)).norm() < 1e-12, "({m},{n})");
            let nf = n as f64;
            let closed = if m == n {
                nf + 0.5
            } else if m == n + 2 {
                ((nf + 1.0) * (nf + 2.0)).sqrt() / 2.0
            } else if n == m + 2 {
                ((m as f64 + 1.0) * (m as f64 + 2.0)).sqrt() / 2.0
            } else {
                0.0
            };
            assert!((v.re - closed).abs() < 1e-13 && v.im == 0.0);
        }
    }
}

#[test]
fn oscillator_eigenrelation() {
    for r in [1, 2, 3] {
        let d = 10;
        let s = special_elements::<Complex64>(r);
        let diff = d_r(&s.e, d).unwrap().sub(&d_r(&s.f, d).unwrap()).unwrap();
        let expected = OperatorMatrix::diagonal(diff.basis(), |a| c(0.0, 0.25 * (2.0 * a.degree() as f64 + r as f64)));
        assert!(diff.max_abs_diff(&expected).unwrap() < 1e-14, "r={r}");
        assert!(diff.entries().all(|(i, j, _)| i == j));
    }
}

#[test]
fn dr_is_a_homomorphism() {
    let d = 12;
    for r in [1, 2] {
        let basis = sp_basis::<Complex64>(r);
        for side in [Side::T, Side::TSigma] {
            let op = |x: &SpAlgElement<Complex64>| match side {
                Side::T => d_r(x, d).unwrap(),
                Side::TSigma => d_r_sigma(x, d).unwrap(),
            };
            let ops: Vec<OperatorMatrix> = basis.iter().map(op).collect();
            for (i, x) in basis.iter().enumerate() {
                for (j, y) in basis.iter().enumerate() {
                    let lhs = ops[i].commutator(&ops[j]).unwrap();
                    let rhs = op(&bracket(x, y).unwrap());
                    assert!(lhs.safe_window() >= d as i32 - 4);
                    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-9, "r={r} side={side:?} pair=({i},{j})");
                }
            }
        }
    }
}

#[test]
fn dr_is_skew_adjoint_and_parity_preserving() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for r in [1, 2] {
        let d = 12;
        let mut elems = sp_basis::<Complex64>(r);
        elems.extend((0..5).map(|_| random_sp_real(&mut rng, r)));
        for x in &elems {
            for op in [d_r(x, d).unwrap(), d_r_sigma(x, d).unwrap()] {
                let adj = op.weighted_adjoint(|_| 1.0);
                let sum = op.add(&adj).unwrap();
                assert!(sum.max_abs_on(d as i32) < 1e-9);
                assert!(op.degree_shift().iter().all(|s| s % 2 == 0));
                for (i, j, _) in op.entries() {
                    assert_eq!(op.basis().degree(i) % 2, op.basis().degree(j) % 2);
                }
            }
        }
    }
}

#[test]
fn dr_sigma_of_omega_identity() {
    // dRσ(diag(I, −I)) = −r/2 − ℰ.
    for r in [1, 2, 3] {
        let d = 8;
        let z = CMatrix::zeros(r, r);
        let w = SpAlgElement::from_blocks(&CMatrix::identity(r), &z, &z).unwrap();
        let lhs = d_r_sigma(&w, d).unwrap();
        let rhs = euler_op(r, d).add(&OperatorMatrix::identity(lhs.basis()).scale(c(0.5 * r as f64, 0.0))).unwrap();
        assert!(lhs.add(&rhs).unwrap().max_abs_on(d as i32) < 1e-13);
        let rhs = euler_op(r, d).add(&OperatorMatrix::identity(lhs.basis()).scale(c(-0.5 * r as f64, 0.0))).unwrap();
        assert!(d_r(&w, d).unwrap().max_abs_diff(&rhs).unwrap() > 0.1);
    }
}

#[test]
fn complex_elements_are_rejected() {
    let s = special_elements::<Complex64>(2);
    let x = s.e.scale(&c(0.0, 1.0));
    assert!(matches!(d_r(&x, 4), Err(Error::NonReal(_))));
    assert!(matches!(d_r_sigma(&x, 4), Err(Error::NonReal(_))));
}

#[test]
fn fourier_is_diagonal() {
    for r in [1, 2] {
        let d = 12;
        let j = r_j(r, d);
        assert!(j.entries().all(|(i, k, _)| i == k));
        let j4 = j.compose(&j).unwrap().compose(&j).unwrap().compose(&j).unwrap();
        assert!(j4.max_abs_diff(&OperatorMatrix::identity(j.basis())).unwrap() < 1e-8);
        let js = r_sigma_j(r, d);
        assert!(j.compose(&js).unwrap().max_abs_diff(&OperatorMatrix::identity(j.basis())).unwrap() < 1e-15);
        let h0 = HermiteVector::basis_vector(MultiIndex::zeros(r));
        assert_eq!(h0.apply(&j).unwrap(), h0);
    }
}

#[test]
fn fourier_matches_the_integral() {
    // (2π)^{−r/2}∫e^{i⟨x,y⟩}h_α(y)dy against i^{|α|}h_α(x).
    let g = GaussHermite::new(60);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in 0..=8u32 {
        for _ in 0..3 {
            let x: f64 = rng.random_range(-2.0..2.0);
            let a = MultiIndex::new(vec![n]);
            let integral: Complex64 = g
                .nodes
                .iter()
                .zip(&g.scaled_weights)
                .map(|(&y, w)| c(0.0, x * y).exp() * (w * hermite_eval(&a, &[y])))
                .sum::<Complex64>()
                / (2.0 * std::f64::consts::PI).sqrt();
            let diag = r_j(1, 8).get(n as usize, n as usize);
            assert!((integral - diag * hermite_eval(&a, &[x])).norm() < 1e-8, "n={n}");
        }
    }
    let rule = QuadratureRule::new(2, 40);
    let basis = hermite_basis(2, 6);
    let j = r_j(2, 6);
    for (k, a) in basis.indices().iter().enumerate() {
        let x = [0.3, -0.7];
        let integral: Complex64 = rule
            .nodes
            .iter()
            .zip(&rule.scaled_weights)
            .map(|(y, w)| c(0.0, x[0] * y[0] + x[1] * y[1]).exp() * (w * hermite_eval(a, y)))
            .sum::<Complex64>()
            / (2.0 * std::f64::consts::PI);
        assert!((integral - j.get(k, k) * hermite_eval(a, &x)).norm() < 1e-8);
    }
}

#[test]
fn identity_dilation_is_identity() {
    for r in [1, 2] {
        let op = r_generator(&Generator::Dilation(CMatrix::identity(r)), 10).unwrap();
        assert!(op.max_abs_diff(&OperatorMatrix::identity(op.basis())).unwrap() < 1e-12);
        let op = r_sigma_generator(&Generator::Dilation(CMatrix::identity(r)), 10).unwrap();
        assert!(op.max_abs_diff(&OperatorMatrix::identity(op.basis())).unwrap() < 1e-12);
    }
}

#[test]
fn dilation_matches_brute_force() {
    let basis = MonomialBasis::new(2, 6);
    for l in [vec![vec![2.0, 0.0], vec![0.0, 0.5]], vec![vec![1.2, 0.4], vec![-0.3, 0.9]]] {
        let lm = cm(l.clone());
        let det = lm.det().re;
        let lt = vec![vec![l[0][0], l[1][0]], vec![l[0][1], l[1][1]]];
        let oracle = brute_matrix(&basis, 80, &lt, |_| c(det.sqrt(), 0.0));
        let op = r_generator(&Generator::Dilation(lm.clone()), 6).unwrap();
        let err = max_dense_diff(&op, &oracle);
        assert!(err < 1e-10, "{err}");
        let li = lm.inverse().unwrap();
        let li: Vec<Vec<f64>> = (0..2).map(|i| (0..2).map(|j| li[(i, j)].re).collect()).collect();
        let oracle = brute_matrix(&basis, 80, &li, |_| c(1.0 / det.sqrt(), 0.0));
        let op = r_sigma_generator(&Generator::Dilation(lm), 6).unwrap();
        let err = max_dense_diff(&op, &oracle);
        assert!(err < 1e-10, "{err}");
    }
}

#[test]
fn multiplication_matches_brute_force() {
    let basis = MonomialBasis::new(2, 6);
    let v = vec![vec![0.7, -0.2], vec![-0.2, 0.4]];
    let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
    let phase = |x: &[f64]| {
        let q = v[0][0] * x[0] * x[0] + 2.0 * v[0][1] * x[0] * x[1] + v[1][1] * x[1] * x[1];
        c(0.0, -0.5 * q).exp()
    };
    let oracle = brute_matrix(&basis, 120, &id, phase);
    let op = r_generator(&Generator::Upper(cm(v.clone())), 6).unwrap();
    assert!(max_dense_diff(&op, &oracle) < 1e-9);
    let op = r_sigma_generator(&Generator::Lower(cm(v)), 6).unwrap();
    assert!(max_dense_diff(&op, &oracle) < 1e-9);
}

#[test]
fn generators_differentiate_to_dr() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let eps = 1e-4;
    let d = 8;
    for r in [1, 2] {
        let s = random_real_symmetric(&mut rng, r);
        let a = CMatrix::from_fn(r, r, |_, _| c(rng.random_range(-1.0..1.0), 0.0));
        let z = CMatrix::zeros(r, r);
        let id = CMatrix::identity(r);
        let cases = [
            (Generator::Upper(s.scale(&c(eps, 0.0))), Generator::Upper(s.scale(&c(-eps, 0.0))), SpAlgElement::from_blocks(&z, &s, &z).unwrap()),
            (Generator::Lower(s.scale(&c(eps, 0.0))), Generator::Lower(s.scale(&c(-eps, 0.0))), SpAlgElement::from_blocks(&z, &z, &s).unwrap()),
            (
                Generator::Dilation(id.add(&a.scale(&c(eps, 0.0)))),
                Generator::Dilation(id.sub(&a.scale(&c(eps, 0.0)))),
                SpAlgElement::from_blocks(&a, &z, &z).unwrap(),
            ),
        ];
        for (plus, minus, x) in cases {
            for side in [Side::T, Side::TSigma] {
                let (gp, gm, dx) = match side {
                    Side::T => (r_generator(&plus, d), r_generator(&minus, d), d_r(&x, d)),
                    Side::TSigma => (r_sigma_generator(&plus, d), r_sigma_generator(&minus, d), d_r_sigma(&x, d)),
                };
                let fd = gp.unwrap().sub(&gm.unwrap()).unwrap().scale(c(0.5 / eps, 0.0));
                let dx = dx.unwrap();
                let scale = dx.max_abs_on(d as i32).max(1.0);
                let err = max_dense_diff(&fd, &dx.to_dense());
                assert!(err < 1e-5 * scale, "r={r} side={side:?} err={err}");
            }
        }
    }
}

#[test]
fn rotations_compose_and_are_unitary() {
    let rot = |t: f64| cm(vec![vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]);
    let d = 8;
    let a = r_generator(&Generator::Dilation(rot(0.4)), d).unwrap();
    let b = r_generator(&Generator::Dilation(rot(-1.1)), d).unwrap();
    let ab = r_generator(&Generator::Dilation(rot(-0.7)), d).unwrap();
    assert!(a.compose(&b).unwrap().max_abs_diff_on(&ab, d as i32).unwrap() < 1e-12);
    let adj = a.weighted_adjoint(|_| 1.0);
    let prod = adj.compose(&a).unwrap();
    assert!(prod.max_abs_diff_on(&OperatorMatrix::identity(a.basis()), d as i32).unwrap() < 1e-12);
    assert!(a.degree_shift().iter().all(|&s| s == 0));
}

#[test]
fn fourier_conjugates_upper_to_lower() {
    // J·t_upper(v)·J⁻¹ = t_lower(−v).
    let v = cm(vec![vec![0.6]]);
    let d = 10;
    let up = r_generator(&Generator::Upper(v.clone()), d).unwrap();
    let low = r_generator(&Generator::Lower(v.neg()), d).unwrap();
    let j = r_j(1, d);
    let lhs = j.compose(&up).unwrap().compose(&r_sigma_j(1, d)).unwrap();
    assert!(lhs.max_abs_diff_on(&low, d as i32).unwrap() < 1e-13);
}

#[test]
fn hermite_vector_basics() {
    let a = HermiteVector::basis_vector(MultiIndex::new(vec![2, 1]));
    let b = HermiteVector::basis_vector(MultiIndex::new(vec![0, 0])).scale(c(0.0, 2.0));
    let s = a.add(&b);
    assert_eq!(s.norm_sq(), 5.0);
    assert_eq!(s.inner(&b), c(4.0, 0.0));
    let (even, odd) = parity_split(&s);
    assert_eq!(even, b);
    assert_eq!(odd, a);
    let x = [0.4, -1.3];
    let v = s.eval(&x);
    let expected = hermite_eval(&MultiIndex::new(vec![2, 1]), &x) + c(0.0, 2.0) * hermite_eval(&MultiIndex::zeros(2), &x);
    assert!((v - expected).norm() < 1e-15);
}

proptest! {
    #[test]
    fn dr_is_linear(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_sp_real(&mut rng, 2);
        let y = random_sp_real(&mut rng, 2);
        let (p, q) = (c(rng.random_range(-2.0..2.0), 0.0), c(rng.random_range(-2.0..2.0), 0.0));
        let lhs = d_r(&x.scale(&p).add(&y.scale(&q)), 6).unwrap();
        let rhs = d_r(&x, 6).unwrap().scale(p).add(&d_r(&y, 6).unwrap().scale(q)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn random_dr_is_skew(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_sp_real(&mut rng, 2);
        let op = d_r_sigma(&x, 6).unwrap();
        prop_assert!(op.add(&op.weighted_adjoint(|_| 1.0)).unwrap().max_abs_on(6) < 1e-12);
    }
}
