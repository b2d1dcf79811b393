//! Radial calculus for a single angular mode on the unit disk.
//!
//! A function `f(r) e^{imθ}` regular at the origin has `f(r) = r^m g(r^2)`.
//! [`RadialPoly`] stores `g` as a Legendre series in `s = r^2` on `[0, 1]`,
//! and the mode Laplacian `Δ_m f = f'' + f'/r - m^2 f / r^2` becomes
//! `r^m (4 s g'' + 4 (m + 1) g')`, an exact map on the coefficients.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quadrature::gauss_for_degree;
use crate::series::Series;

const UNIT: (f64, f64) = (0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialPoly {
    pub m: usize,
    /// `g` as a Legendre series in `s = r^2`.
    pub g: Series,
}

impl RadialPoly {
    pub fn new(m: usize, g: Series) -> Result<Self> {
        if g.interval != UNIT {
            return invalid("radial profile must be a series on s in [0, 1]");
        }
        Ok(RadialPoly { m, g })
    }

    /// `sum_j c_j r^{m + 2 j}`.
    pub fn from_powers_of_s(m: usize, coeffs: &[f64]) -> Self {
        RadialPoly {
            m,
            g: Series::from_monomials(UNIT, coeffs),
        }
    }

    /// Builds `sum c r^e` from `(e, c)` pairs; every `e` must be `m + 2j`.
    pub fn from_r_monomials(m: usize, terms: &[(usize, f64)]) -> Result<Self> {
        let mut coeffs = Vec::new();
        for &(e, c) in terms {
            if e < m || (e - m) % 2 != 0 {
                return invalid(format!("r^{e} is not of the form r^{m} times a polynomial in r^2"));
            }
            let j = (e - m) / 2;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, 0.0);
            }
            coeffs[j] += c;
        }
        Ok(RadialPoly::from_powers_of_s(m, &coeffs))
    }

    /// Degree of the profile in `s`.
    pub fn degree(&self) -> usize {
        self.g.degree()
    }

    pub fn eval(&self, r: f64) -> f64 {
        r.powi(self.m as i32) * self.g.eval(r * r)
    }

    pub fn scale(&self, c: f64) -> RadialPoly {
        RadialPoly {
            m: self.m,
            g: self.g.scale(c),
        }
    }

    pub fn add(&self, other: &RadialPoly) -> RadialPoly {
        assert_eq!(self.m, other.m, "modes differ");
        RadialPoly {
            m: self.m,
            g: self.g.add(&other.g),
        }
    }

    /// Monomial coefficients of `g` (small degrees only; for tests and display).
    pub fn s_monomials(&self) -> Vec<f64> {
        let n = self.g.degree();
        // Solve by evaluation at Chebyshev-like points would be overkill;
        // repeated differentiation at 0 gives the Taylor coefficients.
        let mut out = Vec::with_capacity(n + 1);
        let mut d = self.g.clone();
        let mut fact = 1.0;
        for j in 0..=n {
            if j > 0 {
                fact *= j as f64;
            }
            out.push(d.eval(0.0) / fact);
            d = d.derivative();
        }
        out
    }
}

/// `Δ_m` applied exactly at the coefficient level.
pub fn apply_laplacian_mode(m: usize, f: &RadialPoly) -> Result<RadialPoly> {
    if f.m != m {
        return invalid(format!("profile carries r^{} but mode m = {m} was requested", f.m));
    }
    let d1 = f.g.derivative();
    let d2 = d1.derivative();
    let g = d2.mul_t().scale(4.0).add(&d1.scale(4.0 * (m as f64 + 1.0)));
    // Degree drops by one in s.
    let len = f.g.coeffs.len().saturating_sub(1).max(1);
    Ok(RadialPoly { m, g: g.resized(len) })
}

/// `Δ_m^p f`.
pub fn apply_polyharmonic_mode(m: usize, p: usize, f: &RadialPoly) -> Result<RadialPoly> {
    (0..p).try_fold(f.clone(), |acc, _| apply_laplacian_mode(m, &acc))
}

/// Mode mass inner product `int_0^1 f h r dr = (1/2) int_0^1 s^m g_f g_h ds`.
pub fn radial_inner(f: &RadialPoly, h: &RadialPoly) -> f64 {
    assert_eq!(f.m, h.m, "modes differ");
    let quad = gauss_for_degree(f.m + f.degree() + h.degree(), 0.0, 1.0);
    0.5 * quad.integrate(|s| s.powi(f.m as i32) * f.g.eval(s) * h.g.eval(s))
}

pub fn radial_norm(f: &RadialPoly) -> f64 {
    radial_inner(f, f).max(0.0).sqrt()
}

/// Jacobi polynomial `P_n^{(α, β)}(x)`, orthogonal for `(1 - x)^α (1 + x)^β` on `[-1, 1]`.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + alpha + beta;
        let a1 = 2.0 * k * (k + alpha + beta) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Orthonormal profile `i` for the mode mass: `sqrt(2(2i + m + 1)) P_i^{(0,m)}(2s - 1)`.
pub fn orthonormal_profile(m: usize, i: usize, s: f64) -> f64 {
    (2.0 * (2 * i + m + 1) as f64).sqrt() * jacobi(i, 0.0, m as f64, 2.0 * s - 1.0)
}
