//! Wronskian analysis of one-dimensional function systems.
//!
//! A system `u_1, ..., u_N` on `[a, b]` is an extended complete Chebyshev (ECT)
//! system on `J` when every Wronskian `W_k = W(u_1, ..., u_k)` keeps a strict
//! sign there. Then `ρ_1 = W_1`, `ρ_2 = W_2 / W_1^2` and
//! `ρ_k = W_k W_{k-2} / W_{k-1}^2` are positive, the system spans the kernel of
//! `D(1/ρ_N) ... D(1/ρ_1)`, and it is recovered from the weights by iterated
//! integration: `u_m = ρ_1 ∫ ρ_2 ∫ ... ∫ ρ_m`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::series::Series;

pub const MAX_SIZE: usize = 6;
pub const MIN_GRID: usize = 64;
/// Grids are doubled until neighbouring samples differ by less than this share of the range.
pub const MAX_STEP_SHARE: f64 = 0.1;
const MAX_GRID: usize = 1 << 16;
pub const ZERO_TOL: f64 = 1e-10;
/// `max |W_k|` below this multiple of the Hadamard scale marks a degenerate system.
pub const DEGENERATE_TOL: f64 = 1e-12;
pub const PIVOT_TOL: f64 = 1e-10;
pub const DEFAULT_MARGIN_SHARE: f64 = 0.02;
/// Degree of the Legendre projections used when applying the factored operator.
pub const OPERATOR_DEGREE: usize = 32;
/// Trailing Legendre coefficients below this share of the largest are chopped.
const CHOP: f64 = 1e-13;

/// A function given by polynomial pieces on consecutive subintervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Element {
    pub pieces: Vec<Series>,
}

impl Element {
    pub fn polynomial(s: Series) -> Self {
        Element { pieces: vec![s] }
    }

    fn piece_at(&self, t: f64) -> &Series {
        self.pieces
            .iter()
            .find(|s| t < s.interval.1)
            .unwrap_or_else(|| self.pieces.last().expect("element has pieces"))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.piece_at(t).eval(t)
    }

    pub fn derivative(&self) -> Element {
        Element {
            pieces: self.pieces.iter().map(Series::derivative).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionSystem {
    pub interval: (f64, f64),
    pub elements: Vec<Element>,
}

impl FunctionSystem {
    pub fn new(interval: (f64, f64), elements: Vec<Element>) -> Result<Self> {
        let (a, b) = interval;
        if !(a < b) {
            return invalid(format!("empty interval [{a}, {b}]"));
        }
        for e in &elements {
            let first = e.pieces.first().map(|s| s.interval.0);
            let last = e.pieces.last().map(|s| s.interval.1);
            let glued = e.pieces.windows(2).all(|w| w[0].interval.1 == w[1].interval.0);
            if first != Some(a) || last != Some(b) || !glued {
                return invalid("element pieces must tile the system interval");
            }
        }
        Ok(FunctionSystem { interval, elements })
    }

    pub fn from_series(interval: (f64, f64), elements: Vec<Series>) -> Result<Self> {
        FunctionSystem::new(interval, elements.into_iter().map(Element::polynomial).collect())
    }

    /// `1, t, ..., t^{n-1}`.
    pub fn monomials(n: usize, interval: (f64, f64)) -> Result<Self> {
        let elems = (0..n)
            .map(|k| {
                let mut c = vec![0.0; k + 1];
                c[k] = 1.0;
                Series::from_monomials(interval, &c)
            })
            .collect();
        FunctionSystem::from_series(interval, elems)
    }

    /// Analytic functions through their Legendre projections of the given degree.
    pub fn from_fns(interval: (f64, f64), degree: usize, fns: &[&dyn Fn(f64) -> f64]) -> Result<Self> {
        let elems = fns.iter().map(|f| Series::from_fn(interval, degree, f)).collect();
        FunctionSystem::from_series(interval, elems)
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Monomial coefficients of a polynomial in `t` written like `2 - 0.5*t + t^3`.
pub fn parse_polynomial(text: &str) -> Result<Vec<f64>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return invalid("empty polynomial");
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        let after_exp = i > 0 && matches!(compact.as_bytes()[i - 1], b'e' | b'E');
        if (c == '+' || c == '-') && i > start && !after_exp {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut coeffs: Vec<f64> = Vec::new();
    for term in terms {
        let bad = || invalid(format!("cannot read term '{term}' of '{text}'"));
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1.0, &term[1..]),
            Some(b'+') => (1.0, &term[1..]),
            _ => (1.0, term),
        };
        let (coef, power) = match body.find('t') {
            None => match body.parse::<f64>() {
                Ok(c) => (c, 0),
                Err(_) => return bad(),
            },
            Some(pos) => {
                let head = &body[..pos];
                let coef = match head.strip_suffix('*').unwrap_or(head) {
                    "" if head.is_empty() => 1.0,
                    h => match h.parse::<f64>() {
                        Ok(c) => c,
                        Err(_) => return bad(),
                    },
                };
                let tail = &body[pos + 1..];
                let power = if tail.is_empty() {
                    1
                } else {
                    match tail.strip_prefix('^').map(str::parse::<usize>) {
                        Some(Ok(k)) => k,
                        _ => return bad(),
                    }
                };
                (coef, power)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0.0);
        }
        coeffs[power] += sign * coef;
    }
    Ok(coeffs)
}

impl FunctionSystem {
    /// Comma-separated polynomials in `t`, e.g. `"1, t^2"`.
    pub fn parse(list: &str, interval: (f64, f64)) -> Result<Self> {
        let elems = list
            .split(',')
            .map(|p| parse_polynomial(p).map(|c| Series::from_monomials(interval, &c)))
            .collect::<Result<Vec<_>>>()?;
        FunctionSystem::from_series(interval, elems)
    }
}

/// Pointwise Wronskians from exact coefficient-level derivatives.
#[derive(Debug, Clone)]
struct WronskianEval {
    /// `derivs[i][r]` = `u_i^{(r)}`.
    derivs: Vec<Vec<Element>>,
}

impl WronskianEval {
    fn new(system: &FunctionSystem) -> Self {
        let n = system.size();
        let derivs = system
            .elements
            .iter()
            .map(|e| {
                let mut out = vec![e.clone()];
                for _ in 1..n {
                    let d = out.last().unwrap().derivative();
                    out.push(d);
                }
                out
            })
            .collect();
        WronskianEval { derivs }
    }

    fn matrix(&self, k: usize, t: f64) -> DMatrix<f64> {
        DMatrix::from_fn(k, k, |r, i| self.derivs[i][r].eval(t))
    }

    /// `W_k(t)` by LU with partial pivoting.
    fn wronskian(&self, k: usize, t: f64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        self.matrix(k, t).lu().determinant()
    }

    /// Hadamard bound `prod_r |row r|` of the `k`-th Wronskian matrix.
    fn hadamard(&self, k: usize, t: f64) -> f64 {
        let m = self.matrix(k, t);
        m.row_iter().map(|row| row.norm()).product()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WronskianProfile {
    #[serde(rename = "N")]
    pub n: usize,
    pub grid: Vec<f64>,
    /// `w[k - 1][i]` = `W_k(grid[i])`.
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    /// Grid index pairs `(i, i')` across which `W_k` changes sign.
    pub brackets: Vec<Vec<(usize, usize)>>,
    /// Per-`k` maximum of the Hadamard bound over the grid.
    pub scales: Vec<f64>,
    #[serde(skip)]
    pub system: FunctionSystem,
    #[serde(skip)]
    eval: Option<WronskianEval>,
}

fn uniform(interval: (f64, f64), n: usize) -> Vec<f64> {
    let (a, b) = interval;
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn resolved(values: &[f64]) -> bool {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let range = hi - lo;
    range == 0.0 || values.windows(2).all(|w| (w[1] - w[0]).abs() < MAX_STEP_SHARE * range)
}

fn sign_brackets(values: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        if let Some(j) = last {
            if values[j].signum() != v.signum() {
                out.push((j, i));
            }
        }
        last = Some(i);
    }
    out
}

/// Samples `W_1, ..., W_N` on a uniform grid, refined until every `W_k` is resolved.
pub fn wronskian_profile(system: &FunctionSystem, grid_size: usize) -> Result<WronskianProfile> {
    let n = system.size();
    if n == 0 || n > MAX_SIZE {
        return invalid(format!("system size {n} outside 1..={MAX_SIZE}"));
    }
    if grid_size < MIN_GRID {
        return invalid(format!("grid size {grid_size} below {MIN_GRID}"));
    }
    let eval = WronskianEval::new(system);
    let mut size = grid_size;
    loop {
        let grid = uniform(system.interval, size);
        let w: Vec<Vec<f64>> = (1..=n)
            .map(|k| grid.iter().map(|&t| eval.wronskian(k, t)).collect())
            .collect();
        if w.iter().all(|row| resolved(row)) || size >= MAX_GRID {
            let brackets = w.iter().map(|row| sign_brackets(row)).collect();
            let scales = (1..=n)
                .map(|k| grid.iter().fold(0.0f64, |m, &t| m.max(eval.hadamard(k, t))))
                .collect();
            return Ok(WronskianProfile {
                n,
                grid,
                w,
                brackets,
                scales,
                system: system.clone(),
                eval: Some(eval),
            });
        }
        size = 2 * size - 1;
    }
}

impl WronskianProfile {
    fn evaluator(&self) -> WronskianEval {
        self.eval.clone().unwrap_or_else(|| WronskianEval::new(&self.system))
    }

    /// `W_k(t)` off the grid.
    pub fn wronskian_at(&self, k: usize, t: f64) -> f64 {
        self.evaluator().wronskian(k, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignInterval {
    pub lo: f64,
    pub hi: f64,
    /// Endpoints that are zeros of `W_k` are excluded.
    pub lo_open: bool,
    pub hi_open: bool,
    pub eps: i8,
}

impl SignInterval {
    pub fn contains(&self, t: f64) -> bool {
        let lo_ok = if self.lo_open { t > self.lo } else { t >= self.lo };
        let hi_ok = if self.hi_open { t < self.hi } else { t <= self.hi };
        lo_ok && hi_ok
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SignIntervalReport {
    /// `intervals[k - 1]` are the maximal sign intervals `I_{k,j}` of `W_k`.
    pub intervals: Vec<Vec<SignInterval>>,
    pub zeros: Vec<Vec<f64>>,
}

impl SignIntervalReport {
    /// Every `W_k` positive on the whole grid interval.
    pub fn all_positive(&self) -> bool {
        self.intervals.iter().all(|iv| iv.len() == 1 && iv[0].eps == 1)
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    while hi - lo > ZERO_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn sign_intervals(profile: &WronskianProfile) -> Result<SignIntervalReport> {
    let eval = profile.evaluator();
    let (a, b) = profile.system.interval;
    let mut intervals = Vec::with_capacity(profile.n);
    let mut zeros = Vec::with_capacity(profile.n);
    for k in 1..=profile.n {
        let row = &profile.w[k - 1];
        let peak = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak < DEGENERATE_TOL * profile.scales[k - 1].max(f64::MIN_POSITIVE) || peak == 0.0 {
            return Err(Error::DegenerateSystem { k });
        }
        let zs: Vec<f64> = profile.brackets[k - 1]
            .iter()
            .map(|&(i, j)| bisect(|t| eval.wronskian(k, t), profile.grid[i], profile.grid[j]))
            .collect();
        let first = row.iter().find(|v| **v != 0.0).map_or(1.0, |v| v.signum());
        let mut eps = first as i8;
        let mut lo = (a, false);
        let mut out = Vec::with_capacity(zs.len() + 1);
        for &z in &zs {
            out.push(SignInterval {
                lo: lo.0,
                hi: z,
                lo_open: lo.1,
                hi_open: true,
                eps,
            });
            eps = -eps;
            lo = (z, true);
        }
        out.push(SignInterval {
            lo: lo.0,
            hi: b,
            lo_open: lo.1,
            hi_open: false,
            eps,
        });
        intervals.push(out);
        zeros.push(zs);
    }
    Ok(SignIntervalReport { intervals, zeros })
}

/// Positive weights `ρ_k` on `J`, sampled on the profile grid points inside `J`.
#[derive(Debug, Clone, Serialize)]
pub struct WeightFactorization {
    pub interval: (f64, f64),
    pub grid: Vec<f64>,
    /// `rho[k - 1][i]` = `ρ_k(grid[i])`.
    pub rho: Vec<Vec<f64>>,
    /// Sign `ε_k` of `W_k` on `J`.
    pub eps: Vec<i8>,
    #[serde(skip)]
    eval: WronskianEval,
}

impl WeightFactorization {
    /// `ρ_k(t) = |W_k W_{k-2}| / W_{k-1}^2`, with `W_0 = W_{-1} = 1`.
    pub fn rho_at(&self, k: usize, t: f64) -> f64 {
        let w = |j: usize| self.eval.wronskian(j, t).abs();
        let wkm2 = if k >= 2 { w(k - 2) } else { 1.0 };
        let wkm1 = w(k - 1);
        w(k) * wkm2 / (wkm1 * wkm1)
    }

    /// Legendre projections of the weights on `J`.
    pub fn to_series(&self, degree: usize) -> Vec<Series> {
        (1..=self.rho.len())
            .map(|k| Series::from_fn(self.interval, degree, |t| self.rho_at(k, t)))
            .collect()
    }
}

pub fn weights_from_wronskians(profile: &WronskianProfile, j: (f64, f64)) -> Result<WeightFactorization> {
    let (a, b) = profile.system.interval;
    if !(a <= j.0 && j.0 < j.1 && j.1 <= b) {
        return invalid(format!("J = [{}, {}] not inside [{a}, {b}]", j.0, j.1));
    }
    let eval = profile.evaluator();
    let grid: Vec<f64> = profile.grid.iter().copied().filter(|t| j.0 <= *t && *t <= j.1).collect();
    let mut probes = grid.clone();
    probes.extend([j.0, j.1]);
    let mut eps = Vec::with_capacity(profile.n);
    for k in 1..=profile.n {
        let floor = DEGENERATE_TOL * profile.scales[k - 1];
        let signs: Vec<f64> = probes
            .iter()
            .map(|&t| {
                let v = eval.wronskian(k, t);
                if v.abs() <= floor {
                    0.0
                } else {
                    v.signum()
                }
            })
            .collect();
        let s0 = signs[0];
        if s0 == 0.0 || signs.iter().any(|&s| s != s0) {
            return Err(Error::NotEctOnInterval(format!(
                "W_{k} vanishes or changes sign in [{}, {}]",
                j.0, j.1
            )));
        }
        eps.push(s0 as i8);
    }
    let mut out = WeightFactorization {
        interval: j,
        grid,
        rho: Vec::new(),
        eps,
        eval,
    };
    out.rho = (1..=profile.n)
        .map(|k| out.grid.iter().map(|&t| out.rho_at(k, t)).collect())
        .collect();
    Ok(out)
}

/// `u_1 = ρ_1`, `u_m = ρ_1 ∫ ρ_2 ∫ ... ∫ ρ_m`, integrals from the left endpoint.
pub fn ect_basis_from_weights(rho: &[Series], interval: (f64, f64)) -> Result<FunctionSystem> {
    if rho.is_empty() || rho.len() > MAX_SIZE {
        return invalid(format!("weight count {} outside 1..={MAX_SIZE}", rho.len()));
    }
    if rho.iter().any(|r| r.interval != interval) {
        return invalid("weights must be series on the system interval");
    }
    let elems = (1..=rho.len())
        .map(|m| {
            let mut v = rho[m - 1].clone();
            for k in (0..m - 1).rev() {
                v = rho[k].mul(&v.antiderivative());
            }
            v
        })
        .collect();
    FunctionSystem::from_series(interval, elems)
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnihilationReport {
    /// Interior maximum after each stage `D(1/ρ_k)`.
    pub stages: Vec<f64>,
    pub residual: f64,
    pub scale: f64,
}

/// Applies `D(1/ρ_N) ∘ ... ∘ D(1/ρ_1)` to `u` (innermost `ρ_1`) and reports
/// the maximum of the result on `[a + margin, b - margin]`.
///
/// Each quotient is projected onto Legendre polynomials and its noise tail
/// chopped before the exact coefficient derivative, so rounding is not
/// amplified from stage to stage. The result is relative to `scale = max |u|`.
pub fn annihilation_residual(rho: &[Series], u: &Element, margin: f64) -> Result<AnnihilationReport> {
    let Some(first) = rho.first() else {
        return invalid("at least one weight required");
    };
    let (a, b) = first.interval;
    if !(margin >= 0.0 && 2.0 * margin < b - a) {
        return invalid(format!("margin {margin} leaves no interior"));
    }
    let probes = uniform((a + margin, b - margin), 401);
    let peak = |s: &Series| probes.iter().fold(0.0f64, |m, &t| m.max(s.eval(t).abs()));
    let mut v = Series::from_fn((a, b), OPERATOR_DEGREE, |t| u.eval(t));
    let scale = peak(&v);
    let mut stages = Vec::with_capacity(rho.len());
    for r in rho {
        let q = Series::from_fn((a, b), OPERATOR_DEGREE, |t| v.eval(t) / r.eval(t));
        v = q.trimmed(CHOP * q.max_abs_coeff()).derivative();
        stages.push(peak(&v));
    }
    Ok(AnnihilationReport {
        residual: *stages.last().unwrap(),
        stages,
        scale,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletCheck {
    pub solvable: bool,
    pub pivot_ratio: f64,
    pub determinant: f64,
}

/// Two-point Hermite data `u^{(j)}(a1), u^{(j)}(b1)`, `j < M`, for a system of size `2M`.
pub fn dirichlet_bvp_check(system: &FunctionSystem, a1: f64, b1: f64) -> Result<DirichletCheck> {
    let n = system.size();
    if n == 0 || n % 2 != 0 {
        return invalid(format!("system size {n} is not even and positive"));
    }
    let (a, b) = system.interval;
    if !(a <= a1 && a1 < b1 && b1 <= b) {
        return invalid(format!("[{a1}, {b1}] not a subinterval of [{a}, {b}]"));
    }
    let half = n / 2;
    let eval = WronskianEval::new(system);
    let mat = DMatrix::from_fn(n, n, |row, i| {
        let (t, j) = if row < half { (a1, row) } else { (b1, row - half) };
        eval.derivs[i][j].eval(t)
    });
    let lu = mat.clone().full_piv_lu();
    let diag = lu.u().diagonal().map(f64::abs);
    let pivot_ratio = if diag.max() > 0.0 { diag.min() / diag.max() } else { 0.0 };
    Ok(DirichletCheck {
        solvable: pivot_ratio > PIVOT_TOL,
        pivot_ratio,
        determinant: mat.determinant(),
    })
}
