//! Legendre bases on an interval and Galerkin form assembly.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quadrature::Quadrature;
use crate::series::Series;

/// Basis family. Only Legendre is provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    Legendre,
}

/// The first `size` Legendre polynomials mapped affinely onto `interval`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyBasis {
    pub family: Family,
    pub size: usize,
    pub interval: (f64, f64),
}

impl PolyBasis {
    pub fn legendre(size: usize, interval: (f64, f64)) -> Result<Self> {
        if size == 0 {
            return invalid("basis size must be positive");
        }
        if !(interval.0 < interval.1) || !interval.0.is_finite() || !interval.1.is_finite() {
            return invalid(format!("bad interval {interval:?}"));
        }
        Ok(PolyBasis {
            family: Family::Legendre,
            size,
            interval,
        })
    }

    fn jacobian(&self) -> f64 {
        2.0 / (self.interval.1 - self.interval.0)
    }

    /// Values of `b_i^{(q)}(t)` for every basis index `i`.
    ///
    /// Uses the `q`-times differentiated three-term recurrence
    /// `(n+1) P_{n+1}^{(q)} = (2n+1)(x P_n^{(q)} + q P_n^{(q-1)}) - n P_{n-1}^{(q)}`.
    pub fn eval_derivative(&self, q: usize, t: f64) -> Vec<f64> {
        let (a, b) = self.interval;
        let x = (2.0 * t - a - b) / (b - a);
        let k = self.size;
        let mut prev = vec![0.0; k];
        crate::series::legendre_values(x, &mut prev);
        for order in 1..=q {
            let mut cur = vec![0.0; k];
            let of = order as f64;
            for n in 0..k.saturating_sub(1) {
                let nf = n as f64;
                let lower = if n > 0 { cur[n - 1] } else { 0.0 };
                cur[n + 1] = ((2.0 * nf + 1.0) * (x * cur[n] + of * prev[n]) - nf * lower) / (nf + 1.0);
            }
            prev = cur;
        }
        let scale = self.jacobian().powi(q as i32);
        prev.into_iter().map(|v| v * scale).collect()
    }

    /// Exact mass matrix `int b_i b_j`, diagonal for Legendre.
    pub fn mass_matrix(&self) -> DMatrix<f64> {
        let len = self.interval.1 - self.interval.0;
        DMatrix::from_diagonal(&nalgebra::DVector::from_fn(self.size, |i, _| {
            len / (2 * i + 1) as f64
        }))
    }

    pub fn series(&self, coeffs: &[f64]) -> Series {
        Series::new(self.interval, coeffs.to_vec())
    }

    /// Coefficient vector (length `size`) of a series of low enough degree.
    pub fn coefficients_of(&self, s: &Series) -> Result<Vec<f64>> {
        if s.degree() >= self.size && s.coeffs[self.size..].iter().any(|c| *c != 0.0) {
            return invalid(format!(
                "series of degree {} does not fit a basis of size {}",
                s.degree(),
                self.size
            ));
        }
        Ok(s.resized(self.size).coeffs)
    }

    /// Square-root-weighted derivative table `G[r, i] = sqrt(w_r) b_i^{(q)}(t_r)`.
    ///
    /// `G_a^T G_b` is the form with orders `(a, b)`. The rule is mapped onto
    /// the basis interval.
    pub fn weighted_table(&self, quad: &Quadrature, q: usize) -> DMatrix<f64> {
        let quad = quad.mapped(self.interval.0, self.interval.1);
        let mut g = DMatrix::zeros(quad.len(), self.size);
        for (r, (&t, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
            let sw = w.sqrt();
            for (i, v) in self.eval_derivative(q, t).into_iter().enumerate() {
                g[(r, i)] = sw * v;
            }
        }
        g
    }

    /// Weighted derivative table for arbitrary combinations of basis functions.
    ///
    /// Each column of `combos` holds coefficients; derivatives are taken at the
    /// coefficient level before evaluation.
    pub fn weighted_table_for(&self, quad: &Quadrature, q: usize, combos: &DMatrix<f64>) -> DMatrix<f64> {
        let quad = quad.mapped(self.interval.0, self.interval.1);
        let mut g = DMatrix::zeros(quad.len(), combos.ncols());
        for (c, col) in combos.column_iter().enumerate() {
            let s = self.series(col.as_slice()).nth_derivative(q);
            for (r, (&t, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
                g[(r, c)] = w.sqrt() * s.eval(t);
            }
        }
        g
    }
}

/// Galerkin form `A[i, j] = int b_i^{(order_a)} b_j^{(order_b)}`.
pub fn assemble_form(
    basis: &PolyBasis,
    quad: &Quadrature,
    order_a: usize,
    order_b: usize,
) -> Result<DMatrix<f64>> {
    let k = basis.size;
    if order_a > k - 1 || order_b > k - 1 {
        return invalid(format!("derivative orders ({order_a}, {order_b}) exceed K - 1 = {}", k - 1));
    }
    if quad.exactness() < 2 * (k - 1) {
        return invalid(format!(
            "quadrature exact to degree {} but the form needs {}",
            quad.exactness(),
            2 * (k - 1)
        ));
    }
    let ga = basis.weighted_table(quad, order_a);
    if order_a == order_b {
        let a = ga.transpose() * &ga;
        // Symmetrize away rounding in the product.
        Ok((&a + a.transpose()) * 0.5)
    } else {
        let gb = basis.weighted_table(quad, order_b);
        Ok(ga.transpose() * gb)
    }
}
