//! Width computations over a principal-axes ellipsoid model.
//!
//! An [`EllipsoidModel`] is the set
//! `{ sum_j f'_j ψ'_j + sum_j f_j ψ_j : sum_j λ⁺_j f_j^2 <= 1 }`
//! with kernel (lineality) directions `ψ'_j` of unbounded extent and positive
//! axes `ψ_j` of half-length `1 / sqrt(λ⁺_j)`. All distances are taken in the
//! model's mass inner product. Positive axes are indexed from one.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::pencil::{m_inner, orthonormalize};
use crate::rng;

/// Residual above which expansions are treated as incomplete.
pub const TRUNCATION_TOL: f64 = 1e-8;
/// Distance above which a kernel direction is considered outside a subspace.
pub const ESCAPE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Interval,
    Disk,
}

#[derive(Debug, Clone)]
pub struct EllipsoidModel {
    pub kernel: Vec<DVector<f64>>,
    /// The stored kernel is a finite section of an infinite-dimensional one.
    pub kernel_truncated: bool,
    pub lambdas: Vec<f64>,
    pub axes: Vec<DVector<f64>>,
    pub mass: DMatrix<f64>,
    pub p: usize,
    pub domain: Domain,
}

impl EllipsoidModel {
    pub fn new(
        kernel: Vec<DVector<f64>>,
        kernel_truncated: bool,
        lambdas: Vec<f64>,
        axes: Vec<DVector<f64>>,
        mass: DMatrix<f64>,
        p: usize,
        domain: Domain,
    ) -> Result<Self> {
        if lambdas.len() != axes.len() {
            return invalid("one eigenvalue per axis required");
        }
        if lambdas.iter().any(|&l| !(l > 0.0)) || lambdas.windows(2).any(|w| w[0] > w[1]) {
            return invalid("axis eigenvalues must be positive and ascending");
        }
        let n = mass.nrows();
        if kernel.iter().chain(&axes).any(|v| v.len() != n) {
            return invalid("vector length differs from the mass matrix size");
        }
        let model = EllipsoidModel {
            kernel,
            kernel_truncated,
            lambdas,
            axes,
            mass,
            p,
            domain,
        };
        let err = model.orthonormality_error();
        if err > 1e-8 {
            return invalid(format!("joint system not orthonormal (error {err:e})"));
        }
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.mass.nrows()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn axis_count(&self) -> usize {
        self.axes.len()
    }

    /// `max |<e_i, e_j> - δ_ij|` over the joint kernel and axis system.
    pub fn orthonormality_error(&self) -> f64 {
        let all: Vec<&DVector<f64>> = self.kernel.iter().chain(&self.axes).collect();
        if all.is_empty() {
            return 0.0;
        }
        let q = DMatrix::from_columns(&all.iter().map(|v| (*v).clone()).collect::<Vec<_>>());
        let gram = q.transpose() * &self.mass * &q;
        (gram - DMatrix::identity(all.len(), all.len())).amax()
    }

    pub fn norm(&self, f: &DVector<f64>) -> f64 {
        m_inner(&self.mass, f, f).max(0.0).sqrt()
    }

    /// Kernel plus the first `n` axes.
    pub fn extremal_subspace(&self, n: usize) -> Subspace {
        let basis = self.kernel.iter().chain(self.axes.iter().take(n)).cloned().collect();
        Subspace {
            basis,
            label: format!("kernel({}) + axes(1..={n})", self.kernel_dim()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionSplit {
    pub kernel_coeffs: Vec<f64>,
    pub axis_coeffs: Vec<f64>,
    /// Norm of the part of `f` outside the stored span.
    pub residual: f64,
}

pub fn expand(model: &EllipsoidModel, f: &DVector<f64>) -> ExpansionSplit {
    let mf = &model.mass * f;
    let kernel_coeffs: Vec<f64> = model.kernel.iter().map(|z| z.dot(&mf)).collect();
    let axis_coeffs: Vec<f64> = model.axes.iter().map(|a| a.dot(&mf)).collect();
    let mut rest = f.clone();
    for (z, c) in model.kernel.iter().zip(&kernel_coeffs) {
        rest.axpy(-c, z, 1.0);
    }
    for (a, c) in model.axes.iter().zip(&axis_coeffs) {
        rest.axpy(-c, a, 1.0);
    }
    ExpansionSplit {
        kernel_coeffs,
        axis_coeffs,
        residual: model.norm(&rest),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub value: f64,
    pub verdict: Verdict,
    pub residual: f64,
}

/// `sum λ⁺_j f_j^2` with its verdict against the unit level.
pub fn membership(model: &EllipsoidModel, f: &DVector<f64>) -> Result<Membership> {
    let split = expand(model, f);
    if split.residual > TRUNCATION_TOL {
        return Err(Error::InconclusiveTruncation(format!(
            "expansion residual {:e} exceeds {TRUNCATION_TOL:e}",
            split.residual
        )));
    }
    let value: f64 = split
        .axis_coeffs
        .iter()
        .zip(&model.lambdas)
        .map(|(c, l)| l * c * c)
        .sum();
    let verdict = if (value - 1.0).abs() <= 1e-8 {
        Verdict::Boundary
    } else if value < 1.0 {
        Verdict::Inside
    } else {
        Verdict::Outside
    };
    Ok(Membership {
        value,
        verdict,
        residual: split.residual,
    })
}

/// `1 / sqrt(λ⁺_{N+1})`.
pub fn jackson_bound(model: &EllipsoidModel, n: usize) -> Result<f64> {
    match model.lambdas.get(n) {
        Some(l) => Ok(1.0 / l.sqrt()),
        None => invalid(format!(
            "N = {n} needs {} stored axes, model has {}",
            n + 1,
            model.axis_count()
        )),
    }
}

/// Distance from `f` to the kernel plus the first `n` axes.
pub fn tail_distance(model: &EllipsoidModel, f: &DVector<f64>, n: usize) -> Result<f64> {
    if n > model.axis_count() {
        return invalid(format!("N = {n} exceeds the {} stored axes", model.axis_count()));
    }
    let split = expand(model, f);
    if split.residual > TRUNCATION_TOL {
        return Err(Error::InconclusiveTruncation(format!(
            "expansion residual {:e} exceeds {TRUNCATION_TOL:e}",
            split.residual
        )));
    }
    let mut rest = f.clone();
    for (z, c) in model.kernel.iter().zip(&split.kernel_coeffs) {
        rest.axpy(-c, z, 1.0);
    }
    for (a, c) in model.axes.iter().zip(&split.axis_coeffs).take(n) {
        rest.axpy(-c, a, 1.0);
    }
    Ok(model.norm(&rest))
}

/// Random point on the boundary of the ellipsoid truncated to `t` axes.
///
/// Axis coordinates are `g_j / (sqrt(λ⁺_j) ||g||)` with Gaussian `g`, so the
/// membership value is exactly one; a Gaussian kernel component is added.
pub fn boundary_sample(model: &EllipsoidModel, t: usize, rng: &mut rng::Rng) -> DVector<f64> {
    let t = t.min(model.axis_count());
    let g = rng::gaussian_vector(rng, t);
    let h = rng::gaussian_vector(rng, model.kernel_dim());
    let gnorm = g.norm();
    let mut f = DVector::zeros(model.dim());
    for j in 0..t {
        f.axpy(g[j] / (model.lambdas[j].sqrt() * gnorm), &model.axes[j], 1.0);
    }
    for (z, c) in model.kernel.iter().zip(h.iter()) {
        f.axpy(*c, z, 1.0);
    }
    f
}

/// Subspace with an `M`-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: Vec<DVector<f64>>,
    pub label: String,
}

impl Subspace {
    /// Orthonormalizes `vectors` in the mass inner product.
    pub fn from_vectors(vectors: &[DVector<f64>], mass: &DMatrix<f64>, label: impl Into<String>) -> Result<Self> {
        Ok(Subspace {
            basis: orthonormalize(vectors, mass)?,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `x - P_S x` in the mass inner product.
    pub fn complement_of(&self, mass: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
        let mut r = x.clone();
        // Two passes for accuracy when x is nearly inside the subspace.
        for _ in 0..2 {
            let mr = mass * &r;
            for q in &self.basis {
                let c = q.dot(&mr);
                r.axpy(-c, q, 1.0);
            }
        }
        r
    }

    pub fn distance(&self, mass: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
        let r = self.complement_of(mass, x);
        m_inner(mass, &r, &r).max(0.0).sqrt()
    }

    pub fn orthonormality_error(&self, mass: &DMatrix<f64>) -> f64 {
        let mut err: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                err = err.max((m_inner(mass, a, b) - want).abs());
            }
        }
        err
    }
}

/// Largest `M`-norm of `sum_j c_j cols_j` over unit `c`, with the top direction.
fn top_singular(mass: &DMatrix<f64>, cols: &[DVector<f64>]) -> (f64, DVector<f64>) {
    if cols.is_empty() {
        return (0.0, DVector::zeros(0));
    }
    let a = DMatrix::from_columns(cols);
    let gram = a.transpose() * mass * &a;
    let gram = (&gram + gram.transpose()) * 0.5;
    let eig = SymmetricEigen::new(gram);
    let (imax, mu) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    (mu.max(0.0).sqrt(), eig.eigenvectors.column(imax).into_owned())
}

#[derive(Debug, Clone)]
pub struct Certificate {
    /// Unit kernel direction.
    pub direction: DVector<f64>,
    /// `dist(direction, S)`; `dist(t·direction, S) = t·delta` for `t > 0`.
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub enum WidthResult {
    Finite { value: f64, extremal: Subspace },
    Infinite { certificate: Certificate },
}

impl WidthResult {
    pub fn value(&self) -> Option<f64> {
        match self {
            WidthResult::Finite { value, .. } => Some(*value),
            WidthResult::Infinite { .. } => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, WidthResult::Infinite { .. })
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            WidthResult::Infinite { certificate } => Some(certificate),
            WidthResult::Finite { .. } => None,
        }
    }
}

impl Serialize for WidthResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WidthResult::Finite { value, extremal } => {
                let mut st = s.serialize_struct("WidthResult", 3)?;
                st.serialize_field("kind", "Finite")?;
                st.serialize_field("value", value)?;
                st.serialize_field(
                    "extremal",
                    &serde_json::json!({ "label": extremal.label, "dim": extremal.dim() }),
                )?;
                st.end()
            }
            WidthResult::Infinite { certificate } => {
                let mut st = s.serialize_struct("WidthResult", 2)?;
                st.serialize_field("kind", "Infinite")?;
                st.serialize_field(
                    "certificate",
                    &serde_json::json!({
                        "delta": certificate.delta,
                        "direction_norm": certificate.direction.norm(),
                    }),
                )?;
                st.end()
            }
        }
    }
}

/// Unit kernel direction farthest from `s`.
pub fn infinite_certificate(model: &EllipsoidModel, s: &Subspace) -> Result<Certificate> {
    let residuals: Vec<DVector<f64>> = model
        .kernel
        .iter()
        .map(|z| s.complement_of(&model.mass, z))
        .collect();
    let (delta, y) = top_singular(&model.mass, &residuals);
    if delta <= ESCAPE_TOL {
        return Err(Error::NoCertificate);
    }
    let mut v = DVector::zeros(model.dim());
    for (z, c) in model.kernel.iter().zip(y.iter()) {
        v.axpy(*c, z, 1.0);
    }
    let norm = model.norm(&v);
    v /= norm;
    let delta = s.distance(&model.mass, &v);
    Ok(Certificate { direction: v, delta })
}

/// `sup_{y in model} dist(y, s)` over the stored axes.
///
/// Infinite when a kernel direction escapes `s`; otherwise the top singular
/// value of `c -> (I - P_S) sum_j c_j ψ_j / sqrt(λ⁺_j)`.
pub fn sup_distance(model: &EllipsoidModel, s: &Subspace) -> Result<WidthResult> {
    match infinite_certificate(model, s) {
        Ok(certificate) => return Ok(WidthResult::Infinite { certificate }),
        Err(Error::NoCertificate) => {}
        Err(e) => return Err(e),
    }
    let cols: Vec<DVector<f64>> = model
        .axes
        .iter()
        .zip(&model.lambdas)
        .map(|(a, l)| s.complement_of(&model.mass, a) / l.sqrt())
        .collect();
    let (value, _) = top_singular(&model.mass, &cols);
    if value <= 0.0 {
        return Err(Error::InconclusiveTruncation(
            "subspace contains every stored axis; the deviation lies beyond the truncation".into(),
        ));
    }
    Ok(WidthResult::Finite {
        value,
        extremal: s.clone(),
    })
}

/// Kolmogorov `N`-width, with the kernel counted in the subspace dimension.
pub fn kolmogorov_width(model: &EllipsoidModel, n: usize) -> Result<WidthResult> {
    let kdim = model.kernel_dim();
    if n < kdim {
        // Any N-dimensional space misses a kernel direction; exhibit one
        // against the first N kernel directions.
        let s = Subspace {
            basis: model.kernel[..n].to_vec(),
            label: format!("kernel(1..={n})"),
        };
        let certificate = infinite_certificate(model, &s)?;
        return Ok(WidthResult::Infinite { certificate });
    }
    if model.kernel_truncated {
        return Err(Error::InconclusiveTruncation(format!(
            "N = {n} reaches the truncated kernel dimension {kdim}; enlarge the kernel section"
        )));
    }
    let axes = n - kdim;
    let value = jackson_bound(model, axes)?;
    Ok(WidthResult::Finite {
        value,
        extremal: model.extremal_subspace(axes),
    })
}

/// Harmonic width: full kernel plus `N` free dimensions, value `1 / sqrt(λ⁺_{N+1})`.
pub fn harmonic_width(model: &EllipsoidModel, n: usize) -> Result<WidthResult> {
    let value = jackson_bound(model, n)?;
    Ok(WidthResult::Finite {
        value,
        extremal: model.extremal_subspace(n),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompetitionReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub harmonic_width: f64,
    pub extremal_value: f64,
    pub min_value: f64,
    pub argmin_trial: usize,
    pub values: Vec<f64>,
}

/// Deviation of the kernel plus `n` random directions drawn from the span of the axes.
pub fn trial_subspace(model: &EllipsoidModel, n: usize, seed: u64, trial: usize) -> Result<Subspace> {
    let mut r = rng::stream(seed, trial as u64);
    let mut vectors = model.kernel.clone();
    for _ in 0..n {
        let g = rng::gaussian_vector(&mut r, model.axis_count());
        let mut f = DVector::zeros(model.dim());
        for (a, c) in model.axes.iter().zip(g.iter()) {
            f.axpy(*c, a, 1.0);
        }
        vectors.push(f);
    }
    Subspace::from_vectors(&vectors, &model.mass, format!("kernel + random({n}) #{trial}"))
}

/// Random subspaces `kernel ⊕ F_N` against the extremal one.
pub fn competition(model: &EllipsoidModel, n: usize, trials: usize, seed: u64) -> Result<CompetitionReport> {
    if trials == 0 {
        return invalid("at least one trial required");
    }
    if n >= model.axis_count() {
        return invalid(format!("N = {n} must be below the {} stored axes", model.axis_count()));
    }
    let harmonic = jackson_bound(model, n)?;
    let extremal_value = finite_value(sup_distance(model, &model.extremal_subspace(n))?)?;
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_subspace(model, n, seed, t)?;
            finite_value(sup_distance(model, &s)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let (argmin_trial, min_value) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    Ok(CompetitionReport {
        n,
        trials,
        seed,
        harmonic_width: harmonic,
        extremal_value,
        min_value,
        argmin_trial,
        values,
    })
}

fn finite_value(w: WidthResult) -> Result<f64> {
    w.value()
        .ok_or_else(|| Error::InvalidArgument("subspace misses a kernel direction".into()))
}

/// Subspace spanned by `dim` Gaussian combinations of the whole stored
/// system (kernel and axes), drawn from sub-stream `trial` of `seed`.
pub fn random_subspace(model: &EllipsoidModel, dim: usize, seed: u64, trial: usize) -> Result<Subspace> {
    let all: Vec<&DVector<f64>> = model.kernel.iter().chain(&model.axes).collect();
    if dim > all.len() {
        return invalid(format!("dimension {dim} exceeds the {} stored directions", all.len()));
    }
    let mut r = rng::stream(seed, trial as u64);
    let vectors: Vec<DVector<f64>> = (0..dim)
        .map(|_| {
            let g = rng::gaussian_vector(&mut r, all.len());
            let mut f = DVector::zeros(model.dim());
            for (v, c) in all.iter().zip(g.iter()) {
                f.axpy(*c, v, 1.0);
            }
            f
        })
        .collect();
    Subspace::from_vectors(&vectors, &model.mass, format!("random({dim}) #{trial}"))
}

/// Tolerance of the Jackson inequality and of its equality case.
pub const JACKSON_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct JacksonCheck {
    #[serde(rename = "N")]
    pub n: usize,
    pub bound: f64,
    /// Largest tail distance over the boundary samples.
    pub max_tail: f64,
    /// Tail distance of the boundary point on axis `N + 1`.
    pub axis_tail: f64,
    pub samples: usize,
    pub truncation: usize,
    pub seed: u64,
    pub holds: bool,
}

/// Tail distances of `samples` seeded boundary points of the ellipsoid
/// truncated to `truncation` axes, against `1 / sqrt(λ⁺_{N+1})`.
pub fn jackson_check(
    model: &EllipsoidModel,
    n: usize,
    truncation: usize,
    samples: usize,
    seed: u64,
) -> Result<JacksonCheck> {
    if truncation > model.axis_count() || n >= truncation {
        return invalid(format!(
            "need N < truncation <= {} (got N = {n}, truncation = {truncation})",
            model.axis_count()
        ));
    }
    let bound = jackson_bound(model, n)?;
    let mut r = rng::from_seed(seed);
    let mut max_tail = 0.0f64;
    for _ in 0..samples {
        let f = boundary_sample(model, truncation, &mut r);
        max_tail = max_tail.max(tail_distance(model, &f, n)?);
    }
    let axis = &model.axes[n] / model.lambdas[n].sqrt();
    let axis_tail = tail_distance(model, &axis, n)?;
    Ok(JacksonCheck {
        n,
        bound,
        max_tail,
        axis_tail,
        samples,
        truncation,
        seed,
        holds: max_tail <= bound + JACKSON_TOL && (axis_tail - bound).abs() <= JACKSON_TOL,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WidthPoint {
    #[serde(rename = "N")]
    pub n: usize,
    /// Kolmogorov width; `None` when infinite or not decidable on the truncation.
    pub width: Option<f64>,
    pub jackson_bound: f64,
}

/// `(N, d_N, 1 / sqrt(λ⁺_{N+1}))` for `N = 0..=n_max`.
pub fn width_profile(model: &EllipsoidModel, n_max: usize) -> Result<Vec<WidthPoint>> {
    (0..=n_max)
        .map(|n| {
            let width = match kolmogorov_width(model, n) {
                Ok(w) => w.value(),
                Err(Error::InconclusiveTruncation(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(WidthPoint {
                n,
                width,
                jackson_bound: jackson_bound(model, n)?,
            })
        })
        .collect()
}

/// `sup_{y in Y, |y| = 1} dist(y, X)`.
pub fn subspace_gap(x: &Subspace, y: &Subspace, mass: &DMatrix<f64>) -> f64 {
    let cols: Vec<DVector<f64>> = y.basis.iter().map(|v| x.complement_of(mass, v)).collect();
    top_singular(mass, &cols).0
}
