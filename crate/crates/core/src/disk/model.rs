//! Merged disk eigenmodel over angular modes `m <= m_max`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::mode::{almansi_kernel, build_radial_mode, psi_from_phi, solve_mode, ModeEigen, MAX_M};
use super::radial::{orthonormal_profile, RadialPoly};
use crate::error::{invalid, Result};
use crate::quadrature::gauss_for_degree;
use crate::widths::{kolmogorov_width, Domain, EllipsoidModel, Subspace, WidthResult};

pub const DEFAULT_M_MAX: usize = 8;
pub const DEFAULT_PER_MODE: usize = 4;
pub const DEFAULT_DEGREE: usize = 32;
/// Tolerance handed to the per-mode pencil solves.
pub const MODE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub m: usize,
    #[serde(skip)]
    pub index: usize,
    pub mult: usize,
}

#[derive(Debug, Clone)]
pub struct ModeAxes {
    pub eigen: ModeEigen,
    pub psis: Vec<RadialPoly>,
}

#[derive(Debug, Clone)]
pub struct DiskModel {
    pub p: usize,
    pub m_max: usize,
    pub degree: usize,
    pub per_mode: usize,
    /// Indexed by `m`.
    pub modes: Vec<ModeAxes>,
    pub spectrum: Vec<SpectrumEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskSummary {
    pub p: usize,
    pub m_max: usize,
    pub kernel_dim_truncated: usize,
    pub spectrum: Vec<SpectrumEntry>,
}

pub fn merge_disk_model(p: usize, m_max: usize, per_mode: usize, degree: usize) -> Result<DiskModel> {
    if m_max > MAX_M {
        return invalid(format!("m_max = {m_max} above {MAX_M}"));
    }
    if per_mode == 0 {
        return invalid("per_mode must be positive");
    }
    let modes: Vec<ModeAxes> = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let mode = build_radial_mode(m, p, degree)?;
            let eigen = solve_mode(&mode, per_mode, MODE_TOL)?;
            let psis = eigen
                .phis
                .iter()
                .zip(&eigen.lambdas)
                .map(|(phi, &l)| psi_from_phi(&mode, phi, l))
                .collect::<Result<_>>()?;
            Ok(ModeAxes { eigen, psis })
        })
        .collect::<Result<_>>()?;
    let mut spectrum: Vec<SpectrumEntry> = modes
        .iter()
        .flat_map(|ma| {
            let m = ma.eigen.m;
            ma.eigen.lambdas.iter().enumerate().map(move |(index, &lambda)| SpectrumEntry {
                lambda,
                m,
                index,
                mult: if m == 0 { 1 } else { 2 },
            })
        })
        .collect();
    spectrum.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.m.cmp(&b.m)).then(a.index.cmp(&b.index)));
    Ok(DiskModel {
        p,
        m_max,
        degree,
        per_mode,
        modes,
        spectrum,
    })
}

impl DiskModel {
    pub fn kernel_dim_truncated(&self) -> usize {
        self.p * (2 * self.m_max + 1)
    }

    pub fn summary(&self) -> DiskSummary {
        DiskSummary {
            p: self.p,
            m_max: self.m_max,
            kernel_dim_truncated: self.kernel_dim_truncated(),
            spectrum: self.spectrum.clone(),
        }
    }

    /// Coordinates able to hold every axis and kernel function of this model.
    pub fn space(&self) -> DiskSpace {
        DiskSpace::new(self.m_max, self.degree + self.p)
    }

    /// Eigenvalues with multiplicity, ascending.
    pub fn lambdas_with_multiplicity(&self) -> Vec<f64> {
        self.spectrum
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.lambda, e.mult))
            .collect()
    }

    pub fn to_ellipsoid(&self) -> Result<EllipsoidModel> {
        let space = self.space();
        let kernel = space.almansi_vectors(self.p)?;
        let mut lambdas = Vec::new();
        let mut axes = Vec::new();
        for e in &self.spectrum {
            let psi = &self.modes[e.m].psis[e.index];
            for copy in 0..e.mult {
                lambdas.push(e.lambda);
                axes.push(space.embed(psi, copy)?);
            }
        }
        EllipsoidModel::new(kernel, true, lambdas, axes, space.mass(), self.p, Domain::Disk)
    }
}

/// Coordinates on the disk: one block per `(m, cos/sin)` pair, each spanned by
/// `block_dim` mass-orthonormal profiles `r^m J_i(r^2)`, so the mass matrix is
/// the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiskSpace {
    pub m_max: usize,
    pub block_dim: usize,
}

impl DiskSpace {
    pub fn new(m_max: usize, block_dim: usize) -> Self {
        DiskSpace { m_max, block_dim }
    }

    pub fn blocks(&self) -> usize {
        2 * self.m_max + 1
    }

    pub fn dim(&self) -> usize {
        self.blocks() * self.block_dim
    }

    pub fn mass(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    /// Block of the cosine (`copy = 0`) or sine (`copy = 1`) copy of mode `m`.
    pub fn block(&self, m: usize, copy: usize) -> usize {
        if m == 0 {
            0
        } else {
            2 * m - 1 + copy
        }
    }

    /// `f(r) cos(mθ)` or `f(r) sin(mθ)` in block coordinates, normalized so the
    /// coordinate norm equals the radial norm.
    pub fn embed(&self, f: &RadialPoly, copy: usize) -> Result<DVector<f64>> {
        let m = f.m;
        if m > self.m_max || copy > 1 || (m == 0 && copy != 0) {
            return invalid(format!("mode {m} copy {copy} outside the coordinate space"));
        }
        if f.degree() >= self.block_dim {
            return invalid(format!(
                "profile degree {} needs more than {} coordinates",
                f.degree(),
                self.block_dim
            ));
        }
        let quad = gauss_for_degree(m + f.degree() + self.block_dim, 0.0, 1.0);
        let mut out = DVector::zeros(self.dim());
        let offset = self.block(m, copy) * self.block_dim;
        for (&s, &w) in quad.nodes.iter().zip(&quad.weights) {
            let fw = 0.5 * w * s.powi(m as i32) * f.g.eval(s);
            for i in 0..self.block_dim {
                out[offset + i] += fw * orthonormal_profile(m, i, s);
            }
        }
        Ok(out)
    }

    /// Orthonormal Almansi kernel of `Δ^p` over every block.
    pub fn almansi_vectors(&self, p: usize) -> Result<Vec<DVector<f64>>> {
        let mut out = Vec::with_capacity(p * self.blocks());
        for m in 0..=self.m_max {
            let copies = if m == 0 { 1 } else { 2 };
            for copy in 0..copies {
                for z in almansi_kernel(m, p) {
                    out.push(self.embed(&z, copy)?);
                }
            }
        }
        Ok(out)
    }

    pub fn almansi_subspace(&self, p: usize) -> Result<Subspace> {
        Ok(Subspace {
            basis: self.almansi_vectors(p)?,
            label: format!("ker Δ^{p}, m <= {}", self.m_max),
        })
    }
}

/// Smallest `m_max` whose truncated kernel of `Δ^p` exceeds dimension `n`.
pub fn m_max_for_kernel(p: usize, n: usize) -> Result<usize> {
    let m = (n / p).saturating_sub(1) / 2 + 1;
    let m = (0..=m).find(|&k| p * (2 * k + 1) > n).unwrap_or(m);
    if m > MAX_M {
        return invalid(format!("N = {n} needs m_max = {m} above {MAX_M}"));
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskWidth {
    /// Angular truncation actually used; at least the requested one.
    pub m_max: usize,
    pub kernel_dim_truncated: usize,
    pub width: WidthResult,
}

/// Kolmogorov `N`-width of the disk ellipsoid.
///
/// The kernel of `Δ^p` is infinite-dimensional, so the angular truncation is
/// enlarged until the stored kernel section exceeds `N`; the width is then
/// certified infinite.
pub fn disk_kolmogorov_width(p: usize, n: usize, m_max: usize, per_mode: usize, degree: usize) -> Result<DiskWidth> {
    let m_max = m_max.max(m_max_for_kernel(p, n)?);
    let model = merge_disk_model(p, m_max, per_mode, degree)?;
    let ell = model.to_ellipsoid()?;
    Ok(DiskWidth {
        m_max,
        kernel_dim_truncated: model.kernel_dim_truncated(),
        width: kolmogorov_width(&ell, n)?,
    })
}
