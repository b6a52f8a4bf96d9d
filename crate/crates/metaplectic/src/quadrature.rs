//! Gauss–Hermite and Gauss–Legendre rules (Newton iteration on the three-term
//! recurrences), tensor-product rules on ℝʳ, and rules for the normalized measure on
//! the spheres S¹ and S².

use crate::error::{Error, Result};

/// Values p_0(x), …, p_n(x) of the polynomial parts of the orthonormal Hermite
/// functions, h_k(x) = p_k(x)e^{−x²/2}.
pub fn hermite_poly_values(n: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(std::f64::consts::PI.powf(-0.25));
    if n >= 1 {
        p.push(std::f64::consts::SQRT_2 * x * p[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * p[k] - (kf / (kf + 1.0)).sqrt() * p[k - 1];
        p.push(next);
    }
    p
}

/// One-dimensional Gauss–Hermite rule for the weight e^{−x²}.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// w_i·e^{x_i²}, for integrands that already carry their Gaussian.
    pub scaled_weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let nf = n as f64;
        let m = n.div_ceil(2);
        let mut pos = vec![0.0f64; m];
        let mut wts = vec![0.0f64; m];
        for i in 0..m {
            let mut z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => pos[0] - 1.14 * nf.powf(0.426) / pos[0],
                2 => 1.86 * pos[1] - 0.86 * pos[0],
                3 => 1.91 * pos[2] - 0.91 * pos[1],
                _ => 2.0 * pos[i - 1] - pos[i - 2],
            };
            for _ in 0..100 {
                let p = hermite_poly_values(n, z);
                let dz = p[n] / ((2.0 * nf).sqrt() * p[n - 1]);
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            let pn1 = hermite_poly_values(n, z)[n - 1];
            pos[i] = z;
            wts[i] = 1.0 / (nf * pn1 * pn1);
        }
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n);
        for i in 0..m {
            pairs.push((pos[i], wts[i]));
            if !(n % 2 == 1 && i == m - 1) {
                pairs.push((-pos[i], wts[i]));
            }
        }
        if n % 2 == 1 {
            let last = pairs.iter_mut().find(|p| p.0.abs() < 1e-8).expect("odd rule has a zero node");
            last.0 = 0.0;
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let scaled_weights = nodes.iter().zip(&weights).map(|(x, w)| w * (x * x).exp()).collect();
        GaussHermite {
            nodes,
            weights,
            scaled_weights,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// One-dimensional Gauss–Legendre rule on [−1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let nf = n as f64;
        let mut pairs = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            pairs.push((x, 2.0 / ((1.0 - x * x) * d * d)));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        GaussLegendre {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }
}

/// P_n(x) and P_n′(x).
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let pm1 = if n == 0 { 0.0 } else { p0 };
    (p, n as f64 * (x * p - pm1) / (x * x - 1.0))
}

/// Tensor-product Gauss–Hermite rule on ℝʳ for the weight e^{−|x|²}; exact for
/// polynomials of degree ≤ 2·order − 1 in each coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub r: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub scaled_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(r: usize, order: usize) -> Self {
        let g = GaussHermite::new(order);
        let mut nodes = vec![Vec::with_capacity(r)];
        let mut weights = vec![1.0];
        let mut scaled = vec![1.0];
        for _ in 0..r {
            let mut n2 = Vec::new();
            let mut w2 = Vec::new();
            let mut s2 = Vec::new();
            for ((p, w), s) in nodes.iter().zip(&weights).zip(&scaled) {
                for k in 0..order {
                    let mut q = p.clone();
                    q.push(g.nodes[k]);
                    n2.push(q);
                    w2.push(w * g.weights[k]);
                    s2.push(s * g.scaled_weights[k]);
                }
            }
            nodes = n2;
            weights = w2;
            scaled = s2;
        }
        QuadratureRule {
            order,
            r,
            nodes,
            weights,
            scaled_weights: scaled,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Rule for the rotation-invariant probability measure on S^{r−1}, r ∈ {2, 3}.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereRule {
    pub r: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    /// Polynomials of total degree ≤ this are integrated exactly.
    pub exact_degree: u32,
}

impl SphereRule {
    pub fn new(r: usize, degree: u32) -> Result<Self> {
        let tau = 2.0 * std::f64::consts::PI;
        match r {
            2 => {
                let n = degree as usize + 1;
                let nodes = (0..n)
                    .map(|k| {
                        let t = tau * k as f64 / n as f64;
                        vec![t.cos(), t.sin()]
                    })
                    .collect();
                Ok(SphereRule {
                    r,
                    nodes,
                    weights: vec![1.0 / n as f64; n],
                    exact_degree: degree,
                })
            }
            3 => {
                let gl = GaussLegendre::new((degree as usize + 2) / 2);
                let n = degree as usize + 1;
                let mut nodes = Vec::new();
                let mut weights = Vec::new();
                for (&c, &w) in gl.nodes.iter().zip(&gl.weights) {
                    let s = (1.0 - c * c).sqrt();
                    for k in 0..n {
                        let p = tau * k as f64 / n as f64;
                        nodes.push(vec![s * p.cos(), s * p.sin(), c]);
                        weights.push(w / (2.0 * n as f64));
                    }
                }
                Ok(SphereRule {
                    r,
                    nodes,
                    weights,
                    exact_degree: degree,
                })
            }
            _ => Err(Error::UnsupportedRank(r)),
        }
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial_moment(k: u32) -> f64 {
        // ∫ x^k e^{−x²} dx = Γ((k+1)/2) for even k.
        if k % 2 == 1 {
            return 0.0;
        }
        let mut v = std::f64::consts::PI.sqrt();
        for j in 0..k / 2 {
            v *= (2 * j + 1) as f64 / 2.0;
        }
        v
    }

    #[test]
    fn hermite_rule_moments() {
        for n in [1usize, 2, 5, 10, 24, 40, 80] {
            let g = GaussHermite::new(n);
            assert_eq!(g.order(), n);
            for k in 0..(2 * n as u32).min(40) {
                let q: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
                let scale: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x.abs().powi(k as i32)).sum();
                let e = double_factorial_moment(k);
                assert!((q - e).abs() < 1e-12 * scale.max(1.0), "n={n} k={k}: {q} vs {e}");
            }
        }
    }

    #[test]
    fn hermite_functions_orthonormal() {
        let g = GaussHermite::new(30);
        for a in 0..20 {
            for b in 0..20 {
                let s: f64 = g
                    .nodes
                    .iter()
                    .zip(&g.weights)
                    .map(|(&x, w)| {
                        let p = hermite_poly_values(20, x);
                        w * p[a] * p[b]
                    })
                    .sum();
                let e = if a == b { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn legendre_rule_moments() {
        let g = GaussLegendre::new(8);
        for k in 0..16 {
            let q: f64 = g.nodes.iter().zip(&g.weights).map(|(x, w)| w * x.powi(k)).sum();
            let e = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((q - e).abs() < 1e-14);
        }
    }

    #[test]
    fn circle_moments() {
        let s = SphereRule::new(2, 8).unwrap();
        assert!((s.integrate(|x| x[0].powi(4)) - 3.0 / 8.0).abs() < 1e-15);
        assert!((s.integrate(|x| x[0].powi(2) * x[1].powi(2)) - 1.0 / 8.0).abs() < 1e-15);
        assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_moments() {
        let s = SphereRule::new(3, 8).unwrap();
        assert!((s.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((s.integrate(|x| x[2].powi(2)) - 1.0 / 3.0).abs() < 1e-14);
        assert!((s.integrate(|x| x[0].powi(4)) - 1.0 / 5.0).abs() < 1e-14);
        assert!((s.integrate(|x| x[0].powi(2) * x[1].powi(2) * x[2].powi(2)) - 1.0 / 105.0).abs() < 1e-14);
        assert!(SphereRule::new(4, 2).is_err());
    }

    #[test]
    fn product_rule_size() {
        let q = QuadratureRule::new(2, 5);
        assert_eq!(q.len(), 25);
        let total: f64 = q.weights.iter().sum();
        assert!((total - std::f64::consts::PI).abs() < 1e-13);
    }
}
