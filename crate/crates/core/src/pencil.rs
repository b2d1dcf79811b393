//! Symmetric-definite pencils `K v = lambda M v` and mass-weighted orthonormalization.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// A pencil `(K, M)` with `K` symmetric positive semidefinite.
///
/// When the stiffness comes from a Gram construction `K = G^T G`, keeping the
/// factor lets the solver work with singular values of `G` instead of
/// eigenvalues of `K`, which squares less of the conditioning away.
#[derive(Debug, Clone)]
pub struct SymmetricPencil {
    k: DMatrix<f64>,
    m: DMatrix<f64>,
    factor: Option<DMatrix<f64>>,
}

/// Reduction used by [`solve_sym_pencil_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// Factor `M = L L^T` and diagonalize `L^{-1} K L^{-T}`.
    Mass,
    /// Factor `K = L L^T` and diagonalize `L^{-1} M L^{-T}`; needs `K` definite.
    Stiffness,
    /// `K = R^T R` from the QR of a stored factor `G`, then as [`Reduction::Stiffness`].
    Factored,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenSolution {
    pub lambdas: Vec<f64>,
    /// Columns are `M`-orthonormal eigenvectors, ordered like `lambdas`.
    #[serde(skip)]
    pub vectors: DMatrix<f64>,
    pub residuals: Vec<f64>,
}

fn check_symmetric(name: &str, a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::IllPosedPencil(format!("{name} is not square")));
    }
    let scale = a.amax();
    let asym = (a - a.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::IllPosedPencil(format!(
            "{name} is not symmetric (|A - A^T|_max = {asym:e})"
        )));
    }
    Ok(())
}

impl SymmetricPencil {
    pub fn new(k: DMatrix<f64>, m: DMatrix<f64>) -> Result<Self> {
        check_symmetric("K", &k)?;
        check_symmetric("M", &m)?;
        if k.nrows() != m.nrows() {
            return Err(Error::IllPosedPencil("K and M differ in size".into()));
        }
        Ok(SymmetricPencil { k, m, factor: None })
    }

    /// Pencil with `K = G^T G`.
    pub fn from_factor(g: DMatrix<f64>, m: DMatrix<f64>) -> Result<Self> {
        let k = g.transpose() * &g;
        let k = (&k + k.transpose()) * 0.5;
        let mut p = SymmetricPencil::new(k, m)?;
        p.factor = Some(g);
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn factor(&self) -> Option<&DMatrix<f64>> {
        self.factor.as_ref()
    }
}

fn cholesky(name: &str, a: &DMatrix<f64>) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    Cholesky::new(a.clone())
        .ok_or_else(|| Error::IllPosedPencil(format!("{name} is not positive definite")))
}

/// Solves with the factored route when a factor is stored, else the mass route.
pub fn solve_sym_pencil(pencil: &SymmetricPencil, tol: f64) -> Result<EigenSolution> {
    let route = match pencil.factor {
        Some(ref g) if g.nrows() >= g.ncols() => Reduction::Factored,
        _ => Reduction::Mass,
    };
    solve_sym_pencil_with(pencil, tol, route)
}

/// Full spectrum, ascending, `M`-orthonormal vectors.
///
/// `tol` only scales the reported residuals' acceptance elsewhere; every
/// residual `||K v - lambda M v||_2` is returned regardless.
/// With a stored factor, `K v` is formed as `G^T (G v)`.
pub fn solve_sym_pencil_with(
    pencil: &SymmetricPencil,
    _tol: f64,
    route: Reduction,
) -> Result<EigenSolution> {
    let n = pencil.dim();
    let (mut lambdas, mut vectors) = match route {
        Reduction::Mass => {
            let l = cholesky("M", &pencil.m)?.l();
            let linv_k = l
                .solve_lower_triangular(&pencil.k)
                .ok_or_else(|| Error::IllPosedPencil("singular mass factor".into()))?;
            let c = l
                .solve_lower_triangular(&linv_k.transpose())
                .ok_or_else(|| Error::IllPosedPencil("singular mass factor".into()))?;
            let c = (&c + c.transpose()) * 0.5;
            let eig = SymmetricEigen::new(c);
            let v = l
                .transpose()
                .solve_upper_triangular(&eig.eigenvectors)
                .ok_or_else(|| Error::IllPosedPencil("singular mass factor".into()))?;
            (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), v)
        }
        Reduction::Stiffness => {
            let l = cholesky("K", &pencil.k)?.l();
            let linv_m = l
                .solve_lower_triangular(&pencil.m)
                .ok_or_else(|| Error::IllPosedPencil("singular stiffness factor".into()))?;
            let c = l
                .solve_lower_triangular(&linv_m.transpose())
                .ok_or_else(|| Error::IllPosedPencil("singular stiffness factor".into()))?;
            let c = (&c + c.transpose()) * 0.5;
            let eig = SymmetricEigen::new(c);
            let mu_max = eig.eigenvalues.amax();
            if eig.eigenvalues.iter().any(|&mu| mu <= 0.0) || mu_max == 0.0 {
                return Err(Error::IllPosedPencil("M is not positive definite".into()));
            }
            let mut v = l
                .transpose()
                .solve_upper_triangular(&eig.eigenvectors)
                .ok_or_else(|| Error::IllPosedPencil("singular stiffness factor".into()))?;
            let mut lambdas = Vec::with_capacity(n);
            for (j, &mu) in eig.eigenvalues.iter().enumerate() {
                v.column_mut(j).scale_mut(1.0 / mu.sqrt());
                lambdas.push(1.0 / mu);
            }
            (lambdas, v)
        }
        Reduction::Factored => {
            let g = pencil
                .factor
                .as_ref()
                .ok_or_else(|| Error::IllPosedPencil("no stiffness factor stored".into()))?;
            if g.nrows() < g.ncols() {
                return Err(Error::IllPosedPencil("factor has fewer rows than columns".into()));
            }
            // K = R^T R from the QR of G, without forming G^T G; then the
            // stiffness reduction with R in place of the Cholesky factor.
            let r = g.clone().qr().r();
            let rt = r.transpose();
            let bad = || Error::IllPosedPencil("stiffness factor is singular".into());
            let x = rt.solve_lower_triangular(&pencil.m).ok_or_else(bad)?;
            let c = rt.solve_lower_triangular(&x.transpose()).ok_or_else(bad)?;
            let c = (&c + c.transpose()) * 0.5;
            let eig = SymmetricEigen::new(c);
            if eig.eigenvalues.iter().any(|&mu| !(mu > 0.0)) {
                return Err(Error::IllPosedPencil("K or M is not positive definite".into()));
            }
            let mut v = r.solve_upper_triangular(&eig.eigenvectors).ok_or_else(bad)?;
            let mut lambdas = Vec::with_capacity(n);
            for (j, &mu) in eig.eigenvalues.iter().enumerate() {
                v.column_mut(j).scale_mut(1.0 / mu.sqrt());
                lambdas.push(1.0 / mu);
            }
            (lambdas, v)
        }
    };

    // Ascending order with a sign convention: largest-magnitude entry positive.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lambdas[a].total_cmp(&lambdas[b]).then(a.cmp(&b)));
    lambdas = order.iter().map(|&i| lambdas[i]).collect();
    vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    for mut col in vectors.column_iter_mut() {
        let (imax, _) = col.iter().enumerate().fold((0, 0.0), |(bi, bv), (i, v)| {
            if v.abs() > bv {
                (i, v.abs())
            } else {
                (bi, bv)
            }
        });
        if col[imax] < 0.0 {
            col.neg_mut();
        }
    }

    let residuals = residuals(pencil, &lambdas, &vectors);
    Ok(EigenSolution {
        lambdas,
        vectors,
        residuals,
    })
}

/// `||K v - λ M v||_2`, with `K v` formed as `G^T (G v)` when a factor is stored.
fn residuals(pencil: &SymmetricPencil, lambdas: &[f64], vectors: &DMatrix<f64>) -> Vec<f64> {
    let kv = match pencil.factor {
        Some(ref g) => g.transpose() * (g * vectors),
        None => &pencil.k * vectors,
    };
    let mv = &pencil.m * vectors;
    lambdas
        .iter()
        .enumerate()
        .map(|(j, &l)| (kv.column(j) - mv.column(j) * l).norm())
        .collect()
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn vector(&self, j: usize) -> DVector<f64> {
        self.vectors.column(j).into_owned()
    }
}

/// Mass inner product `x^T M y`.
pub fn m_inner(m: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (x.transpose() * m * y)[(0, 0)]
}

/// Gram–Schmidt in the `M` inner product, two passes per vector.
///
/// Stops at the first vector whose pivot falls below `1e-10` times the leading
/// pivot and reports the independent prefix through [`Error::RankDeficient`].
pub fn orthonormalize(vectors: &[DVector<f64>], m: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    let mut leading = None;
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = m_inner(m, q, &w);
                w.axpy(-c, q, 1.0);
            }
        }
        let pivot = m_inner(m, &w, &w).max(0.0).sqrt();
        let lead = *leading.get_or_insert(pivot);
        if pivot == 0.0 || pivot < 1e-10 * lead {
            return Err(Error::RankDeficient {
                kept: out,
                requested: vectors.len(),
            });
        }
        out.push(w / pivot);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn random_spd(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        &a * a.transpose() + DMatrix::identity(n, n) * (n as f64)
    }

    #[test]
    fn diagonal_pencil_sorted() {
        let k = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let p = SymmetricPencil::new(k, DMatrix::identity(3, 3)).unwrap();
        let s = solve_sym_pencil(&p, 1e-9).unwrap();
        for (got, want) in s.lambdas.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_vector_recovered() {
        let k = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let p = SymmetricPencil::new(k, DMatrix::identity(2, 2)).unwrap();
        let s = solve_sym_pencil(&p, 1e-9).unwrap();
        assert!(s.lambdas[0].abs() < 1e-15 && (s.lambdas[1] - 2.0).abs() < 1e-14);
        assert!((s.vector(0) - DVector::from_vec(vec![0.0, 1.0])).amax() < 1e-14);
    }

    #[test]
    fn identity_pencil_all_routes() {
        let m = random_spd(9, 7);
        let p = SymmetricPencil::new(m.clone(), m.clone()).unwrap();
        for route in [Reduction::Mass, Reduction::Stiffness] {
            let s = solve_sym_pencil_with(&p, 1e-9, route).unwrap();
            assert!(s.lambdas.iter().all(|l| (l - 1.0).abs() < 1e-10), "{route:?}");
        }
        let g = Cholesky::new(m.clone()).unwrap().l().transpose();
        let p = SymmetricPencil::from_factor(g, m.clone()).unwrap();
        let s = solve_sym_pencil(&p, 1e-9).unwrap();
        assert!(s.lambdas.iter().all(|l| (l - 1.0).abs() < 1e-10));
    }

    #[test]
    fn routes_agree_and_meet_contract() {
        let m = random_spd(12, 3);
        let mut rng = SplitMix64::seed_from_u64(11);
        let g = DMatrix::from_fn(20, 12, |_, _| rng.random_range(-1.0..1.0));
        let p = SymmetricPencil::from_factor(g, m.clone()).unwrap();
        let a = solve_sym_pencil_with(&p, 1e-9, Reduction::Mass).unwrap();
        let b = solve_sym_pencil_with(&p, 1e-9, Reduction::Factored).unwrap();
        let c = solve_sym_pencil_with(&p, 1e-9, Reduction::Stiffness).unwrap();
        let knorm = p.stiffness().norm();
        for s in [&a, &b, &c] {
            let gram = s.vectors.transpose() * &m * &s.vectors;
            assert!((gram - DMatrix::identity(12, 12)).amax() < 1e-10);
            assert!(s.residuals.iter().all(|r| *r <= 1e-9 * knorm));
            assert!(s.lambdas.windows(2).all(|w| w[0] <= w[1]));
        }
        for j in 0..12 {
            assert!((a.lambdas[j] - b.lambdas[j]).abs() < 1e-10 * a.lambdas[11]);
            assert!((c.lambdas[j] - b.lambdas[j]).abs() < 1e-10 * a.lambdas[11]);
        }
    }

    #[test]
    fn indefinite_mass_is_ill_posed() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let p = SymmetricPencil::new(DMatrix::identity(2, 2), m).unwrap();
        assert!(matches!(solve_sym_pencil(&p, 1e-9), Err(Error::IllPosedPencil(_))));
    }

    #[test]
    fn asymmetric_stiffness_rejected() {
        let k = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(SymmetricPencil::new(k, DMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn orthonormalize_examples() {
        let id = DMatrix::identity(2, 2);
        let v = vec![DVector::from_vec(vec![1.0, 0.0]), DVector::from_vec(vec![1.0, 1.0])];
        let q = orthonormalize(&v, &id).unwrap();
        assert!((&q[0] - DVector::from_vec(vec![1.0, 0.0])).amax() < 1e-15);
        assert!((&q[1] - DVector::from_vec(vec![0.0, 1.0])).amax() < 1e-15);

        let single = orthonormalize(&[DVector::from_vec(vec![3.0, 4.0])], &id).unwrap();
        assert!((&single[0] - DVector::from_vec(vec![0.6, 0.8])).amax() < 1e-15);

        let x = DVector::from_vec(vec![1.0, 2.0]);
        match orthonormalize(&[x.clone(), x * 2.0], &id) {
            Err(Error::RankDeficient { kept, requested }) => {
                assert_eq!((kept.len(), requested), (1, 2));
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn orthonormalize_in_mass_metric() {
        let m = random_spd(6, 99);
        let mut rng = SplitMix64::seed_from_u64(5);
        let vs: Vec<_> = (0..4)
            .map(|_| DVector::from_fn(6, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        let q = orthonormalize(&vs, &m).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((m_inner(&m, &q[i], &q[j]) - want).abs() < 1e-12);
            }
        }
    }
}
