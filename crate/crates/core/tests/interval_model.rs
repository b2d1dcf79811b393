use std::f64::consts::PI;

use hwidth::kolmogorov1d::{beam_oracle, build_kp_model, kp_eigensystem, to_ellipsoid, MAX_ORDER};
use hwidth::widths::{harmonic_width, kolmogorov_width};

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn neumann_spectrum_for_first_order() {
    let model = build_kp_model(1, 48).unwrap();
    let sol = kp_eigensystem(&model, 8).unwrap();
    for (j, l) in sol.lambdas.iter().enumerate() {
        let want = (PI * (j + 1) as f64).powi(2);
        assert!(rel(*l, want) <= 1e-8, "j={} {l} vs {want}", j + 1);
    }
}

#[test]
fn free_beam_spectrum_for_second_order() {
    let model = build_kp_model(2, 48).unwrap();
    let sol = kp_eigensystem(&model, 6).unwrap();
    let oracle = beam_oracle(2, 6).unwrap();
    for (l, want) in sol.lambdas.iter().zip(&oracle) {
        assert!(rel(*l, *want) <= 1e-6, "{l} vs {want}");
    }
}

#[test]
fn kernel_has_dimension_p() {
    for p in 1..=MAX_ORDER {
        let model = build_kp_model(p, 24).unwrap();
        assert_eq!(model.kernel_dim(), p);
        let ell = to_ellipsoid(&model, 10).unwrap();
        assert_eq!(ell.kernel_dim(), p);
        assert!(!ell.kernel_truncated);
    }
}

#[test]
fn eigenvalues_follow_the_shifted_power_law() {
    // j |λ_j / (π^{2p} (j + p/2)^{2p}) - 1| stays below 2p for j = 4..12.
    for p in 1..=3usize {
        let model = build_kp_model(p, 64).unwrap();
        let sol = kp_eigensystem(&model, 12).unwrap();
        for j in 4..=12usize {
            let jf = j as f64;
            let law = PI.powi(2 * p as i32) * (jf + p as f64 / 2.0).powi(2 * p as i32);
            let dev = jf * rel(sol.lambdas[j - 1], law);
            assert!(dev <= 2.0 * p as f64, "p={p} j={j}: {dev}");
        }
    }
}

#[test]
fn spectrum_is_stable_under_refinement() {
    for p in 1..=2 {
        let a = kp_eigensystem(&build_kp_model(p, 48).unwrap(), 8).unwrap();
        let b = kp_eigensystem(&build_kp_model(p, 64).unwrap(), 8).unwrap();
        for (x, y) in a.lambdas.iter().zip(&b.lambdas) {
            assert!(rel(*x, *y) < 1e-10);
        }
    }
}

#[test]
fn natural_boundary_condition_emerges() {
    let mut last = f64::INFINITY;
    for k in [8, 10, 12, 16] {
        let model = build_kp_model(1, k).unwrap();
        let sol = kp_eigensystem(&model, 1).unwrap();
        let d = model.series(&sol.vector(0)).derivative();
        let edge = d.eval(0.0).abs().max(d.eval(1.0).abs());
        assert!(edge < last, "K={k}: {edge} not below {last}");
        last = edge;
    }
    assert!(last < 1e-10);
}

#[test]
fn widths_follow_the_shifted_index() {
    let model = build_kp_model(2, 32).unwrap();
    let ell = to_ellipsoid(&model, 20).unwrap();
    assert!(kolmogorov_width(&ell, 0).unwrap().is_infinite());
    assert!(kolmogorov_width(&ell, 1).unwrap().is_infinite());
    for n in 2..6 {
        let d = kolmogorov_width(&ell, n).unwrap().value().unwrap();
        assert!((d - 1.0 / ell.lambdas[n - 2].sqrt()).abs() < 1e-15);
        let h = harmonic_width(&ell, n).unwrap().value().unwrap();
        assert!((h - 1.0 / ell.lambdas[n].sqrt()).abs() < 1e-15);
    }
}
