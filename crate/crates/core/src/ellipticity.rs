//! Numeric check of uniform strong ellipticity for a homogeneous principal symbol.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    /// Exponent of each variable `xi_1 .. xi_dim`.
    pub exponents: Vec<u32>,
}

/// Principal symbol `A_0(xi) = sum_a c_a xi^a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub dim: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipticityReport {
    pub order: u32,
    pub c0: f64,
    pub c1: f64,
    pub accepted: bool,
    pub samples: usize,
}

const ACCEPT_FLOOR: f64 = 1e-9;

impl Symbol {
    /// Parses sums like `x1^4 + 2*x1^2*x2^2 - 0.5*x2^4`.
    pub fn parse(text: &str, dim: usize) -> Result<Symbol> {
        if dim == 0 {
            return invalid("dimension must be positive");
        }
        let mut terms = Vec::new();
        let cleaned = text.replace(' ', "").replace('-', "+-");
        for raw in cleaned.split('+').filter(|s| !s.is_empty()) {
            let (sign, body) = match raw.strip_prefix('-') {
                Some(rest) => (-1.0, rest),
                None => (1.0, raw),
            };
            let mut coeff = sign;
            let mut exponents = vec![0u32; dim];
            for factor in body.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, exp) = match var.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad(text))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad(text))?;
                    if idx == 0 || idx > dim {
                        return invalid(format!("variable x{idx} outside dimension {dim}"));
                    }
                    exponents[idx - 1] += exp;
                } else {
                    coeff *= factor.parse::<f64>().map_err(|_| bad(text))?;
                }
            }
            terms.push(Term { coeff, exponents });
        }
        if terms.is_empty() {
            return invalid("empty symbol");
        }
        Ok(Symbol { dim, terms })
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff
                    * t.exponents
                        .iter()
                        .zip(xi)
                        .map(|(&e, &x)| x.powi(e as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// Common total degree, or an error when the symbol is not homogeneous.
    pub fn homogeneous_order(&self) -> Result<u32> {
        let mut orders = self.terms.iter().map(|t| t.exponents.iter().sum::<u32>());
        let first = orders.next().ok_or_else(|| crate::error::Error::InvalidArgument("empty symbol".into()))?;
        if orders.any(|o| o != first) {
            return invalid("symbol is not homogeneous");
        }
        Ok(first)
    }
}

fn bad(text: &str) -> crate::error::Error {
    crate::error::Error::InvalidArgument(format!("cannot parse symbol '{text}'"))
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Extremes of `|A_0|` on the unit sphere: `c0 = min`, `c1 = max`.
///
/// Samples are refined locally (golden section on the circle, pattern search
/// in higher dimension) so that isolated zeros between samples are found.
pub fn check_strong_ellipticity(symbol: &Symbol, samples: usize) -> Result<EllipticityReport> {
    let order = symbol.homogeneous_order()?;
    if order % 2 != 0 {
        return invalid(format!("symbol order {order} is odd"));
    }
    if samples < 100 {
        return invalid("at least 100 samples required");
    }
    let abs_at = |xi: &[f64]| symbol.eval(xi).abs();
    let (c0, c1) = match symbol.dim {
        1 => {
            let v = abs_at(&[1.0]).min(abs_at(&[-1.0]));
            let w = abs_at(&[1.0]).max(abs_at(&[-1.0]));
            (v, w)
        }
        2 => {
            let h = 2.0 * PI / samples as f64;
            let f = |th: f64| abs_at(&[th.cos(), th.sin()]);
            let vals: Vec<f64> = (0..samples).map(|i| f(i as f64 * h)).collect();
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for i in 0..samples {
                let prev = vals[(i + samples - 1) % samples];
                let next = vals[(i + 1) % samples];
                let th = i as f64 * h;
                lo = lo.min(vals[i]);
                hi = hi.max(vals[i]);
                if vals[i] <= prev && vals[i] <= next {
                    lo = lo.min(golden_min(f, th - h, th + h).1);
                }
                if vals[i] >= prev && vals[i] >= next {
                    hi = hi.max(-golden_min(|t| -f(t), th - h, th + h).1);
                }
            }
            (lo, hi)
        }
        d => {
            let mut rng = crate::rng::from_seed(0);
            let points: Vec<Vec<f64>> = (0..samples)
                .map(|_| {
                    let g = crate::rng::gaussian_vector(&mut rng, d);
                    (g.clone() / g.norm()).iter().copied().collect()
                })
                .collect();
            let best_lo = points
                .iter()
                .min_by(|a, b| abs_at(a).total_cmp(&abs_at(b)))
                .cloned()
                .expect("samples > 0");
            let best_hi = points
                .iter()
                .max_by(|a, b| abs_at(a).total_cmp(&abs_at(b)))
                .cloned()
                .expect("samples > 0");
            let lo = pattern_search(&best_lo, |x| abs_at(x));
            let hi = -pattern_search(&best_hi, |x| -abs_at(x));
            (lo, hi)
        }
    };
    Ok(EllipticityReport {
        order,
        c0,
        c1,
        accepted: c0 > ACCEPT_FLOOR,
        samples,
    })
}

fn pattern_search(start: &[f64], f: impl Fn(&[f64]) -> f64) -> f64 {
    let normalize = |x: &mut Vec<f64>| {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= n);
    };
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut step = 0.1;
    while step > 1e-12 {
        let mut improved = false;
        for i in 0..x.len() {
            for s in [step, -step] {
                let mut y = x.clone();
                y[i] += s;
                normalize(&mut y);
                let fy = f(&y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    fx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_squared_symbol_is_constant() {
        let s = Symbol::parse("x1^4 + 2*x1^2*x2^2 + x2^4", 2).unwrap();
        let r = check_strong_ellipticity(&s, 100).unwrap();
        assert!((r.c0 - 1.0).abs() < 1e-12 && (r.c1 - 1.0).abs() < 1e-12);
        assert!(r.accepted);
    }

    #[test]
    fn quartic_sum_extremes() {
        let s = Symbol::parse("x1^4 + x2^4", 2).unwrap();
        let r = check_strong_ellipticity(&s, 100).unwrap();
        assert!((r.c0 - 0.5).abs() < 1e-10, "c0={}", r.c0);
        assert!((r.c1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wave_symbol_rejected() {
        let s = Symbol::parse("x1^2 - x2^2", 2).unwrap();
        let r = check_strong_ellipticity(&s, 101).unwrap();
        assert!(r.c0 < 1e-9 && !r.accepted, "c0={}", r.c0);
    }

    #[test]
    fn three_dimensional_laplacian() {
        let s = Symbol::parse("x1^2 + x2^2 + x3^2", 3).unwrap();
        let r = check_strong_ellipticity(&s, 200).unwrap();
        assert!((r.c0 - 1.0).abs() < 1e-12 && r.accepted);
        let s = Symbol::parse("x1^2 + x2^2 - x3^2", 3).unwrap();
        assert!(!check_strong_ellipticity(&s, 200).unwrap().accepted);
    }

    #[test]
    fn invalid_symbols() {
        let s = Symbol::parse("x1^4 + x2^2", 2).unwrap();
        assert!(check_strong_ellipticity(&s, 100).is_err());
        let s = Symbol::parse("x1^3", 2).unwrap();
        assert!(check_strong_ellipticity(&s, 100).is_err());
        let s = Symbol::parse("x1^2", 2).unwrap();
        assert!(check_strong_ellipticity(&s, 50).is_err());
        assert!(Symbol::parse("x3^2", 2).is_err());
    }
}
