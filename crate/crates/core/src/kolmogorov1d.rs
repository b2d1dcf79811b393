//! Eigenmodel of `K_p = { f : int_0^1 |f^(p)|^2 <= 1 }`.
//!
//! The Rayleigh quotient `int |u^(p)|^2 / int |u|^2` is discretized with a
//! Legendre basis on `[0, 1]`. No boundary conditions are imposed: the
//! conditions `u^(p+j)(0) = u^(p+j)(1) = 0`, `j < p`, are the natural ones of
//! the quotient and are recovered as the basis grows. The kernel, polynomials
//! of degree `< p`, is removed exactly. Positive eigenvalues are indexed from
//! one (`λ⁺_1` is the smallest positive eigenvalue).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::basis::PolyBasis;
use crate::error::{invalid, Error, Result};
use crate::pencil::{m_inner, orthonormalize, solve_sym_pencil_with, EigenSolution, Reduction, SymmetricPencil};
use crate::quadrature::gauss_quadrature;
use crate::series::Series;
use crate::widths::{Domain, EllipsoidModel};

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone)]
pub struct Kolmogorov1DModel {
    pub p: usize,
    pub basis: PolyBasis,
    /// `M`-orthonormal basis of polynomials of degree `< p` (Legendre coefficients).
    pub kernel: Vec<DVector<f64>>,
    /// Columns span the `M`-orthogonal complement of the kernel; their `p`-th
    /// derivatives are the orthonormal Legendre polynomials, so the restricted
    /// stiffness is the identity up to rounding.
    pub complement: DMatrix<f64>,
    /// Restricted pencil on the complement coordinates.
    pub pencil: SymmetricPencil,
    /// Mass matrix of the full basis.
    pub mass: DMatrix<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelSummary {
    pub p: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub kernel_dim: usize,
    pub lambdas: Vec<f64>,
}

/// Builds the Galerkin model for order `p` with `k` Legendre functions.
pub fn build_kp_model(p: usize, k: usize) -> Result<Kolmogorov1DModel> {
    if p == 0 || p > MAX_ORDER {
        return invalid(format!("order p = {p} outside 1..={MAX_ORDER}"));
    }
    if k < 2 * p + 4 {
        return invalid(format!("basis size {k} below 2p + 4 = {}", 2 * p + 4));
    }
    let basis = PolyBasis::legendre(k, (0.0, 1.0))?;
    let mass = basis.mass_matrix();

    let monomials: Vec<DVector<f64>> = (0..p)
        .map(|d| {
            let mut mono = vec![0.0; d + 1];
            mono[d] = 1.0;
            let s = Series::from_monomials(basis.interval, &mono);
            basis.coefficients_of(&s).map(DVector::from_vec)
        })
        .collect::<Result<_>>()?;
    let kernel = orthonormalize(&monomials, &mass)?;

    // p-fold antiderivatives of the orthonormal Legendre polynomials, with the
    // kernel component projected out (their p-th derivatives are unchanged).
    let dim = k - p;
    let mut complement = DMatrix::zeros(k, dim);
    for n in 0..dim {
        let mut c = vec![0.0; n + 1];
        c[n] = ((2 * n + 1) as f64).sqrt();
        let mut s = Series::new(basis.interval, c);
        for _ in 0..p {
            s = s.antiderivative();
        }
        let mut v = DVector::from_vec(basis.coefficients_of(&s)?);
        for _ in 0..2 {
            for z in &kernel {
                let a = m_inner(&mass, z, &v);
                v.axpy(-a, z, 1.0);
            }
        }
        complement.set_column(n, &v);
    }

    let quad = gauss_quadrature(k)?;
    let g = basis.weighted_table_for(&quad, p, &complement);
    let m_r = complement.transpose() * &mass * &complement;
    let m_r = (&m_r + m_r.transpose()) * 0.5;
    let pencil = SymmetricPencil::from_factor(g, m_r)?;
    Ok(Kolmogorov1DModel {
        p,
        basis,
        kernel,
        complement,
        pencil,
        mass,
    })
}

impl Kolmogorov1DModel {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn size(&self) -> usize {
        self.basis.size
    }

    pub fn series(&self, coeffs: &DVector<f64>) -> Series {
        self.basis.series(coeffs.as_slice())
    }
}

/// First `count` positive eigenpairs, vectors expressed in the full Legendre basis.
pub fn kp_eigensystem(model: &Kolmogorov1DModel, count: usize) -> Result<EigenSolution> {
    let available = model.size() - model.p;
    if count > available {
        return invalid(format!("requested {count} eigenpairs, only {available} available"));
    }
    // The restricted stiffness is the identity up to rounding; factoring it
    // keeps the low modes at full relative accuracy.
    let sol = solve_sym_pencil_with(&model.pencil, 1e-9, Reduction::Stiffness)?;
    let lifted = &model.complement * sol.vectors.columns(0, count);
    Ok(EigenSolution {
        lambdas: sol.lambdas[..count].to_vec(),
        vectors: lifted,
        residuals: sol.residuals[..count].to_vec(),
    })
}

pub fn summary(model: &Kolmogorov1DModel, sol: &EigenSolution) -> ModelSummary {
    ModelSummary {
        p: model.p,
        k: model.size(),
        kernel_dim: model.kernel_dim(),
        lambdas: sol.lambdas.clone(),
    }
}

/// Closed-form or transcendental eigenvalues of the free problem.
///
/// `p = 1`: `(π j)^2`. `p = 2`: `k_j^4`, `k_j` the positive roots of
/// `cos k cosh k = 1`, bisected to `1e-12` inside `((j+1/2)π - 1, (j+1/2)π + 1)`.
pub fn beam_oracle(p: usize, count: usize) -> Result<Vec<f64>> {
    match p {
        1 => Ok((1..=count).map(|j| (PI * j as f64).powi(2)).collect()),
        2 => Ok((1..=count).map(|j| free_beam_root(j).powi(4)).collect()),
        _ => Err(Error::UnsupportedOracle(format!("order p = {p}"))),
    }
}

/// `j`-th positive root of `cos k cosh k = 1`.
pub fn free_beam_root(j: usize) -> f64 {
    // Same roots as cos k - 1/cosh k, which stays bounded.
    let f = |k: f64| k.cos() - 1.0 / k.cosh();
    let centre = (j as f64 + 0.5) * PI;
    let (mut lo, mut hi) = (centre - 1.0, centre + 1.0);
    let flo = f(lo);
    debug_assert!(flo * f(hi) < 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GreenCheck {
    /// `int_0^1 (u^(2p) v - u v^(2p))`.
    pub volume: f64,
    /// Integration-by-parts boundary sum.
    pub boundary: f64,
    pub residual: f64,
}

/// Green's formula for `d^{2p}/dt^{2p}` on `[0, 1]`:
/// `int (u^(2p) v - u v^(2p)) = sum_{k<2p} (-1)^k [u^(2p-1-k) v^(k)]_0^1`.
pub fn green_residual_1d(p: usize, u: &Series, v: &Series) -> GreenCheck {
    let u2p = u.nth_derivative(2 * p);
    let v2p = v.nth_derivative(2 * p);
    let volume = u2p.mul(v).integral() - u.mul(&v2p).integral();
    let mut boundary = 0.0;
    for k in 0..2 * p {
        let du = u.nth_derivative(2 * p - 1 - k);
        let dv = v.nth_derivative(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        boundary += sign * (du.eval(1.0) * dv.eval(1.0) - du.eval(0.0) * dv.eval(0.0));
    }
    GreenCheck {
        volume,
        boundary,
        residual: (volume - boundary).abs(),
    }
}

/// Principal-axes model with the first `count` positive axes.
///
/// The top Galerkin modes lose mass-orthogonality at a rate of about
/// `eps * λ_max / λ_j`, so the axes are re-orthonormalized in ascending order
/// after the kernel; the low axes move only at rounding level.
pub fn to_ellipsoid(model: &Kolmogorov1DModel, count: usize) -> Result<EllipsoidModel> {
    let sol = kp_eigensystem(model, count)?;
    let joint: Vec<DVector<f64>> = model
        .kernel
        .iter()
        .cloned()
        .chain((0..count).map(|j| sol.vector(j)))
        .collect();
    let axes = orthonormalize(&joint, &model.mass)?.split_off(model.kernel_dim());
    EllipsoidModel::new(
        model.kernel.clone(),
        false,
        sol.lambdas,
        axes,
        model.mass.clone(),
        model.p,
        Domain::Interval,
    )
}
