//! Per-mode clamped `Δ^{2p}` eigenproblems and the principal axes `ψ = Δ^p φ / sqrt(λ)`.

use serde::Serialize;

use super::radial::{apply_polyharmonic_mode, jacobi, radial_inner, radial_norm, RadialPoly};
use crate::error::{invalid, Result};
use crate::pencil::{solve_sym_pencil, SymmetricPencil};
use crate::quadrature::gauss_for_degree;
use crate::series::Series;
use nalgebra::DMatrix;

pub const MAX_M: usize = 12;
pub const MAX_DEGREE: usize = 40;

/// Galerkin data for one angular wavenumber.
///
/// Basis profiles are `(1 - s)^{2p} P_i^{(4p, m)}(2s - 1)`, normalized, which
/// vanish to order `2p` at `r = 1` (all normal derivatives through order
/// `2p - 1` are zero) and are mass-orthogonal by construction.
#[derive(Debug, Clone)]
pub struct RadialMode {
    pub m: usize,
    pub p: usize,
    pub degree: usize,
    pub basis: Vec<RadialPoly>,
    /// `Δ_m^p` of each basis function.
    pub images: Vec<RadialPoly>,
    pub pencil: SymmetricPencil,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeEigen {
    pub m: usize,
    pub p: usize,
    pub lambdas: Vec<f64>,
    #[serde(skip)]
    pub phis: Vec<RadialPoly>,
    pub residuals: Vec<f64>,
}

pub fn build_radial_mode(m: usize, p: usize, degree: usize) -> Result<RadialMode> {
    if !(1..=2).contains(&p) {
        return invalid(format!("p = {p} outside {{1, 2}}"));
    }
    if m > MAX_M {
        return invalid(format!("mode m = {m} above {MAX_M}"));
    }
    if degree == 0 || degree > MAX_DEGREE {
        return invalid(format!("radial degree {degree} outside 1..={MAX_DEGREE}"));
    }
    let alpha = (4 * p) as f64;
    let beta = m as f64;
    let basis: Vec<RadialPoly> = (0..degree)
        .map(|i| {
            let g = Series::from_fn((0.0, 1.0), 2 * p + i, |s| {
                (1.0 - s).powi(2 * p as i32) * jacobi(i, alpha, beta, 2.0 * s - 1.0)
            });
            let f = RadialPoly { m, g };
            let n = radial_norm(&f);
            f.scale(1.0 / n)
        })
        .collect();
    let images: Vec<RadialPoly> = basis
        .iter()
        .map(|b| apply_polyharmonic_mode(m, p, b))
        .collect::<Result<_>>()?;

    let top = basis.iter().map(RadialPoly::degree).max().unwrap_or(0);
    let quad = gauss_for_degree(m + 2 * top, 0.0, 1.0);
    let nq = quad.len();
    let mut g = DMatrix::zeros(nq, degree);
    let mut b = DMatrix::zeros(nq, degree);
    for (r, (&s, &w)) in quad.nodes.iter().zip(&quad.weights).enumerate() {
        let sw = (0.5 * w * s.powi(m as i32)).sqrt();
        for i in 0..degree {
            g[(r, i)] = sw * images[i].g.eval(s);
            b[(r, i)] = sw * basis[i].g.eval(s);
        }
    }
    let mass = b.transpose() * &b;
    let mass = (&mass + mass.transpose()) * 0.5;
    let pencil = SymmetricPencil::from_factor(g, mass)?;
    Ok(RadialMode {
        m,
        p,
        degree,
        basis,
        images,
        pencil,
    })
}

impl RadialMode {
    fn combine(&self, parts: &[RadialPoly], coeffs: impl Iterator<Item = f64>) -> RadialPoly {
        parts
            .iter()
            .zip(coeffs)
            .fold(RadialPoly::from_powers_of_s(self.m, &[0.0]), |acc, (b, c)| acc.add(&b.scale(c)))
    }
}

/// Lowest `count` eigenpairs of the clamped problem for this mode.
pub fn solve_mode(mode: &RadialMode, count: usize, tol: f64) -> Result<ModeEigen> {
    if count > mode.degree {
        return invalid(format!("count {count} exceeds the radial degree {}", mode.degree));
    }
    let sol = solve_sym_pencil(&mode.pencil, tol)?;
    let phis = (0..count)
        .map(|k| mode.combine(&mode.basis, sol.vectors.column(k).iter().copied()))
        .collect();
    Ok(ModeEigen {
        m: mode.m,
        p: mode.p,
        lambdas: sol.lambdas[..count].to_vec(),
        phis,
        residuals: sol.residuals[..count].to_vec(),
    })
}

/// Normalized principal axis `Δ_m^p φ / sqrt(λ)`; unnormalized it has norm `sqrt(λ)`.
pub fn psi_from_phi(mode: &RadialMode, phi: &RadialPoly, lambda: f64) -> Result<RadialPoly> {
    if !(lambda > 0.0) {
        return invalid(format!("eigenvalue {lambda} is not positive"));
    }
    Ok(apply_polyharmonic_mode(mode.m, mode.p, phi)?.scale(1.0 / lambda.sqrt()))
}

/// Mass-orthonormalized `{ r^{m + 2j} : j < p }`, the mode section of `ker Δ^p`.
pub fn almansi_kernel(m: usize, p: usize) -> Vec<RadialPoly> {
    let mut out: Vec<RadialPoly> = Vec::with_capacity(p);
    for j in 0..p {
        let mut coeffs = vec![0.0; j + 1];
        coeffs[j] = 1.0;
        let mut v = RadialPoly::from_powers_of_s(m, &coeffs);
        for _ in 0..2 {
            for q in &out {
                let c = radial_inner(q, &v);
                v = v.add(&q.scale(-c));
            }
        }
        let n = radial_norm(&v);
        out.push(v.scale(1.0 / n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::bessel::bessel_clamped_oracle;
    use super::super::radial::apply_laplacian_mode;
    use super::*;

    #[test]
    fn range_checks() {
        assert!(build_radial_mode(0, 3, 10).is_err());
        assert!(build_radial_mode(13, 1, 10).is_err());
        assert!(build_radial_mode(0, 1, 41).is_err());
        let mode = build_radial_mode(0, 1, 6).unwrap();
        assert!(solve_mode(&mode, 7, 1e-9).is_err());
        assert!(psi_from_phi(&mode, &mode.basis[0], 0.0).is_err());
    }

    #[test]
    fn first_basis_stiffness_is_exact() {
        // (1 - r^2)^2 has Δ = 16 r^2 - 8 and int_0^1 (16 r^2 - 8)^2 r dr = 32/3,
        // int_0^1 (1 - r^2)^4 r dr = 1/10; the normalized entry is their ratio.
        let mode = build_radial_mode(0, 1, 4).unwrap();
        let k00 = mode.pencil.stiffness()[(0, 0)];
        assert!((k00 - (32.0 / 3.0) / 0.1).abs() < 1e-10 * k00, "{k00}");
        let lap = apply_laplacian_mode(0, &RadialPoly::from_powers_of_s(0, &[1.0, -2.0, 1.0])).unwrap();
        let mono = lap.s_monomials();
        assert!((mono[0] + 8.0).abs() < 1e-13 && (mono[1] - 16.0).abs() < 1e-13);
    }

    #[test]
    fn basis_is_clamped_and_forms_symmetric() {
        for p in 1..=2 {
            let mode = build_radial_mode(2, p, 8).unwrap();
            let k = mode.pencil.stiffness();
            let m = mode.pencil.mass();
            assert!((k - k.transpose()).amax() == 0.0 && (m - m.transpose()).amax() == 0.0);
            assert!((m - DMatrix::identity(8, 8)).amax() < 1e-12);
            for b in &mode.basis {
                // g and its s-derivatives through order 2p - 1 vanish at s = 1,
                // hence so do the r-derivatives of r^m g(r^2).
                assert!(b.eval(1.0).abs() < 1e-12);
                let mut d = b.g.clone();
                for _ in 0..(2 * p) {
                    assert!(d.eval(1.0).abs() < 1e-9 * d.max_abs_coeff().max(1.0));
                    d = d.derivative();
                }
            }
        }
    }

    #[test]
    fn clamped_plate_matches_bessel_roots() {
        for m in 0..=2 {
            let mode = build_radial_mode(m, 1, 32).unwrap();
            let sol = solve_mode(&mode, 3, 1e-9).unwrap();
            let oracle = bessel_clamped_oracle(m, 3).unwrap().lambdas();
            for (got, want) in sol.lambdas.iter().zip(&oracle) {
                assert!((got / want - 1.0).abs() <= 1e-6, "m={m}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn axes_are_orthonormal_and_orthogonal_to_kernel() {
        for p in 1..=2 {
            let mode = build_radial_mode(1, p, 24).unwrap();
            let sol = solve_mode(&mode, 4, 1e-9).unwrap();
            let psis: Vec<_> = sol
                .phis
                .iter()
                .zip(&sol.lambdas)
                .map(|(phi, &l)| psi_from_phi(&mode, phi, l).unwrap())
                .collect();
            let kernel = almansi_kernel(1, p);
            for (i, a) in psis.iter().enumerate() {
                for (j, b) in psis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((radial_inner(a, b) - want).abs() < 1e-8, "p={p} ({i},{j})");
                }
                for z in &kernel {
                    assert!(radial_inner(a, z).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn almansi_examples() {
        let k = almansi_kernel(0, 1);
        assert_eq!(k.len(), 1);
        assert!((k[0].eval(0.3) - k[0].eval(0.9)).abs() < 1e-15);
        let k = almansi_kernel(2, 1);
        assert!((k[0].eval(0.5) / k[0].eval(1.0) - 0.25).abs() < 1e-14);
        let k = almansi_kernel(0, 2);
        for z in &k {
            let twice = apply_polyharmonic_mode(0, 2, z).unwrap();
            assert!(twice.g.max_abs_coeff() < 1e-13);
        }
        assert!(radial_inner(&k[0], &k[1]).abs() < 1e-14);
    }
}
