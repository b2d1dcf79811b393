//! Legendre series on an interval, with exact coefficient-level calculus.
//!
//! A [`Series`] on `[a, b]` stands for `sum_k c_k P_k(x(t))`, where
//! `x(t) = (2t - a - b) / (b - a)` maps the interval onto `[-1, 1]`.
//! Differentiation, antidifferentiation and multiplication by `t` are exact
//! linear maps on the coefficients; products are formed by Gauss projection,
//! which is exact up to rounding because the product is again a polynomial.

use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_for_degree;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub interval: (f64, f64),
    pub coeffs: Vec<f64>,
}

impl Series {
    pub fn new(interval: (f64, f64), coeffs: Vec<f64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Series { interval, coeffs }
    }

    pub fn zero(interval: (f64, f64)) -> Self {
        Series::new(interval, vec![0.0])
    }

    pub fn constant(interval: (f64, f64), c: f64) -> Self {
        Series::new(interval, vec![c])
    }

    /// The coordinate function `t`.
    pub fn identity(interval: (f64, f64)) -> Self {
        Series::constant(interval, 1.0).mul_t()
    }

    /// `sum_k mono[k] t^k`, built by Horner's rule with exact `mul_t`.
    pub fn from_monomials(interval: (f64, f64), mono: &[f64]) -> Self {
        let mut acc = Series::zero(interval);
        for &c in mono.iter().rev() {
            acc = acc.mul_t();
            acc.coeffs[0] += c;
        }
        acc.resized(mono.len())
    }

    /// Legendre projection of `f` onto degree `degree`, by Gauss quadrature.
    ///
    /// Exact (to rounding) when `f` is a polynomial of degree `<= degree`.
    pub fn from_fn(interval: (f64, f64), degree: usize, f: impl Fn(f64) -> f64) -> Self {
        let (a, b) = interval;
        let quad = gauss_for_degree(2 * degree + 2, -1.0, 1.0);
        let mut coeffs = vec![0.0; degree + 1];
        let mut p = vec![0.0; degree + 1];
        for (&x, &w) in quad.nodes.iter().zip(&quad.weights) {
            let fx = f(0.5 * (a + b) + 0.5 * (b - a) * x);
            legendre_values(x, &mut p);
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c += w * fx * p[k];
            }
        }
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= (2 * k + 1) as f64 / 2.0;
        }
        Series::new(interval, coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn to_reference(&self, t: f64) -> f64 {
        let (a, b) = self.interval;
        (2.0 * t - a - b) / (b - a)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        let x = self.to_reference(t);
        let n = self.coeffs.len();
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for k in (1..n).rev() {
            let kf = k as f64;
            let alpha = (2.0 * kf + 1.0) / (kf + 1.0) * x;
            let beta = -(kf + 1.0) / (kf + 2.0);
            let b0 = self.coeffs[k] + alpha * b1 + beta * b2;
            b2 = b1;
            b1 = b0;
        }
        // P_1 = x, and the k = 0 step uses beta_1 = -1/2.
        self.coeffs[0] + x * b1 - 0.5 * b2
    }

    pub fn derivative(&self) -> Series {
        let n = self.degree();
        if n == 0 {
            return Series::zero(self.interval);
        }
        let mut d = vec![0.0; n];
        for k in (0..n).rev() {
            let kf = k as f64;
            let next = if k + 2 < n { d[k + 2] / (2.0 * kf + 5.0) } else { 0.0 };
            d[k] = (2.0 * kf + 1.0) * (self.coeffs[k + 1] + next);
        }
        let (a, b) = self.interval;
        let scale = 2.0 / (b - a);
        Series::new(self.interval, d.into_iter().map(|c| c * scale).collect())
    }

    pub fn nth_derivative(&self, q: usize) -> Series {
        (0..q).fold(self.clone(), |s, _| s.derivative())
    }

    /// Antiderivative vanishing at the left endpoint.
    pub fn antiderivative(&self) -> Series {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n + 1];
        // int_{-1}^x P_0 = P_0 + P_1; int_{-1}^x P_k = (P_{k+1} - P_{k-1}) / (2k + 1).
        out[0] += self.coeffs[0];
        out[1] += self.coeffs[0];
        for k in 1..n {
            let c = self.coeffs[k] / (2 * k + 1) as f64;
            out[k + 1] += c;
            out[k - 1] -= c;
        }
        let (a, b) = self.interval;
        let scale = 0.5 * (b - a);
        Series::new(self.interval, out.into_iter().map(|c| c * scale).collect())
    }

    /// Multiplication by the reference variable `x`.
    fn mul_x(&self) -> Series {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let kf = k as f64;
            out[k + 1] += c * (kf + 1.0) / (2.0 * kf + 1.0);
            if k > 0 {
                out[k - 1] += c * kf / (2.0 * kf + 1.0);
            }
        }
        Series::new(self.interval, out)
    }

    /// Multiplication by the interval variable `t`.
    pub fn mul_t(&self) -> Series {
        let (a, b) = self.interval;
        self.mul_x()
            .scale(0.5 * (b - a))
            .add(&self.scale(0.5 * (a + b)))
    }

    pub fn mul(&self, other: &Series) -> Series {
        assert_eq!(self.interval, other.interval, "series on different intervals");
        let deg = self.degree() + other.degree();
        Series::from_fn(self.interval, deg, |t| self.eval(t) * other.eval(t))
    }

    pub fn scale(&self, s: f64) -> Series {
        Series::new(self.interval, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Series) -> Series {
        assert_eq!(self.interval, other.interval, "series on different intervals");
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        Series::new(
            self.interval,
            (0..n).map(|k| get(&self.coeffs, k) + get(&other.coeffs, k)).collect(),
        )
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.scale(-1.0))
    }

    /// Copy padded or truncated to `len` coefficients.
    pub fn resized(&self, len: usize) -> Series {
        let mut c = self.coeffs.clone();
        c.resize(len.max(1), 0.0);
        Series::new(self.interval, c)
    }

    /// Drops trailing coefficients with magnitude at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Series {
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().is_some_and(|x| x.abs() <= tol) {
            c.pop();
        }
        Series::new(self.interval, c)
    }

    pub fn integral(&self) -> f64 {
        let (a, b) = self.interval;
        self.coeffs[0] * (b - a)
    }

    /// Unweighted `L2(a, b)` inner product, exact from the coefficients.
    pub fn l2_inner(&self, other: &Series) -> f64 {
        let (a, b) = self.interval;
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(k, (x, y))| x * y * (b - a) / (2 * k + 1) as f64)
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Fills `out[k] = P_k(x)` for `k < out.len()`.
pub fn legendre_values(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 1..out.len().saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
    }
}
