//! Gauss–Legendre quadrature.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Gauss–Legendre rule with `n` nodes, exact for polynomials of degree `2n - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn exactness(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// Affine image of this rule on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Quadrature {
        let (lo, hi) = self.interval;
        let scale = (b - a) / (hi - lo);
        Quadrature {
            nodes: self.nodes.iter().map(|&x| a + (x - lo) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            interval: (a, b),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence, `n >= 1`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_quadrature(n: usize) -> Result<Quadrature> {
    if n == 0 {
        return invalid("quadrature needs at least one node");
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Newton in the angle x = cos(theta), so that 1 - x^2 = sin^2(theta)
        // keeps full relative accuracy near the endpoints.
        // With x = cos(theta): (1 - x^2) P_n'(x) = n (P_{n-1} - x P_n), and
        // sin(theta) keeps full relative accuracy near the endpoints.
        let nf = n as f64;
        let mut theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        for _ in 0..100 {
            let x = theta.cos();
            let (p, pm1) = legendre_pair(n, x);
            // d/dtheta P_n(cos theta) = -n (P_{n-1} - x P_n) / sin(theta)
            let step = p * theta.sin() / (-nf * (pm1 - x * p));
            theta -= step;
            if step.abs() < 1e-17 {
                break;
            }
        }
        let x = theta.cos();
        let (p, pm1) = legendre_pair(n, x);
        let st = theta.sin();
        let q = nf * (pm1 - x * p);
        let w = 2.0 * st * st / (q * q);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(Quadrature {
        nodes,
        weights,
        interval: (-1.0, 1.0),
    })
}

/// Gauss rule on `[a, b]` exact for polynomials of degree `degree`.
pub fn gauss_for_degree(degree: usize, a: f64, b: f64) -> Quadrature {
    let n = degree / 2 + 1;
    gauss_quadrature(n).expect("n >= 1").mapped(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_nodes_rejected() {
        assert!(gauss_quadrature(0).is_err());
    }

    #[test]
    fn one_node_is_midpoint() {
        let q = gauss_quadrature(1).unwrap();
        assert_eq!(q.nodes, vec![0.0]);
        assert!((q.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_nodes_match_moment_solution() {
        // x = ±1/sqrt(3), w = 1 solves the moment equations through degree 3.
        let q = gauss_quadrature(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((q.nodes[0] + r).abs() < 1e-15 && (q.nodes[1] - r).abs() < 1e-15);
        assert!((q.weights[0] - 1.0).abs() < 1e-15 && (q.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_nodes_integrate_quartic() {
        let q = gauss_quadrature(3).unwrap();
        assert!((q.integrate(|t| t.powi(4)) - 0.4).abs() < 1e-14);
    }

    #[test]
    fn weights_positive_and_sum_to_length() {
        for n in 1..80 {
            let q = gauss_quadrature(n).unwrap();
            assert!(q.weights.iter().all(|&w| w > 0.0));
            let s: f64 = q.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
            let qm = q.mapped(0.0, 3.0);
            assert!((qm.weights.iter().sum::<f64>() - 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn monomials_exact_to_declared_degree() {
        for n in [4usize, 10, 25, 48] {
            let q = gauss_quadrature(n).unwrap();
            for d in 0..=q.exactness() {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                let got = q.integrate(|t| t.powi(d as i32));
                assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1e-3), "n={n} d={d}");
            }
        }
    }
}
