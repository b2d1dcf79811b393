//! Clamped-plate determinant roots from power-series Bessel functions.
//!
//! For `Δ^2 φ = k^4 φ` on the unit disk with `φ = ∂_n φ = 0` on the boundary,
//! mode `m` has eigenvalues `k^4` with `J_m(k) I_m'(k) - J_m'(k) I_m(k) = 0`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub const MAX_ARGUMENT: f64 = 25.0;
const MIN_TERMS: usize = 30;
const GRID_STEP: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub det_lo: f64,
    pub det_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BesselRootTable {
    pub m: usize,
    pub roots: Vec<f64>,
    pub brackets: Vec<Bracket>,
}

impl BesselRootTable {
    /// Eigenvalues `k^4` of the clamped plate for this mode.
    pub fn lambdas(&self) -> Vec<f64> {
        self.roots.iter().map(|k| k.powi(4)).collect()
    }
}

/// `(Z_m(x), Z_m'(x))` for `Z = J` (`alternating`) or `Z = I`.
fn series_pair(m: usize, x: f64, alternating: bool) -> Result<(f64, f64)> {
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::Unsupported(format!(
            "series argument {x} outside the validated range [0, {MAX_ARGUMENT}]"
        )));
    }
    let half = 0.5 * x;
    // Leading term (x/2)^m / m!
    let mut term = 1.0;
    for j in 1..=m {
        term *= half / j as f64;
    }
    let mut value = 0.0;
    let mut deriv = 0.0;
    let q = half * half;
    for k in 0..400 {
        let power = (2 * k + m) as f64;
        value += term;
        if x > 0.0 {
            deriv += term * power / x;
        } else if power == 1.0 {
            deriv += 0.5;
        }
        let next = term * q / ((k + 1) as f64 * (k + 1 + m) as f64);
        term = if alternating { -next } else { next };
        if k + 1 >= MIN_TERMS && term.abs() <= 1e-18 * value.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok((value, deriv))
}

pub fn bessel_j(m: usize, x: f64) -> Result<(f64, f64)> {
    series_pair(m, x, true)
}

pub fn bessel_i(m: usize, x: f64) -> Result<(f64, f64)> {
    series_pair(m, x, false)
}

/// `J_m(k) I_m'(k) - J_m'(k) I_m(k)`.
pub fn clamped_determinant(m: usize, k: f64) -> Result<f64> {
    let (j, dj) = bessel_j(m, k)?;
    let (i, di) = bessel_i(m, k)?;
    Ok(j * di - dj * i)
}

/// First `count` positive roots for mode `m`, bracketed on a 0.05 grid and bisected to 1e-10.
pub fn bessel_clamped_oracle(m: usize, count: usize) -> Result<BesselRootTable> {
    if m > 12 {
        return invalid(format!("mode m = {m} above 12"));
    }
    if count > 5 {
        return invalid(format!("count = {count} above 5"));
    }
    let mut roots = Vec::with_capacity(count);
    let mut brackets = Vec::with_capacity(count);
    let mut step = 1usize;
    let mut lo = GRID_STEP;
    let mut det_lo = clamped_determinant(m, lo)?;
    while roots.len() < count {
        step += 1;
        let hi = step as f64 * GRID_STEP;
        if hi > MAX_ARGUMENT {
            return Err(Error::Unsupported(format!(
                "root {} of mode {m} lies beyond the series range",
                roots.len() + 1
            )));
        }
        let det_hi = clamped_determinant(m, hi)?;
        if det_lo == 0.0 || det_lo * det_hi < 0.0 {
            let (mut a, mut b) = (lo, hi);
            let sa = det_lo;
            while b - a > 1e-10 {
                let mid = 0.5 * (a + b);
                let dm = clamped_determinant(m, mid)?;
                if dm * sa > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
            brackets.push(Bracket { lo, hi, det_lo, det_hi });
        }
        lo = hi;
        det_lo = det_hi;
    }
    Ok(BesselRootTable { m, roots, brackets })
}
