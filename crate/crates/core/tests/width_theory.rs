use hwidth::disk::{disk_kolmogorov_width, merge_disk_model, DiskSpace};
use hwidth::kolmogorov1d::{build_kp_model, to_ellipsoid};
use hwidth::rng;
use hwidth::widths::{
    boundary_sample, competition, infinite_certificate, jackson_bound, jackson_check, kolmogorov_width, membership,
    random_subspace, subspace_gap, sup_distance, tail_distance, Subspace, Verdict,
};

fn interval(p: usize) -> hwidth::widths::EllipsoidModel {
    to_ellipsoid(&build_kp_model(p, 48).unwrap(), 48 - p).unwrap()
}

#[test]
fn boundary_samples_lie_on_the_boundary() {
    let ell = interval(1);
    let mut r = rng::from_seed(11);
    for _ in 0..20 {
        let f = boundary_sample(&ell, 40, &mut r);
        assert_eq!(membership(&ell, &f).unwrap().verdict, Verdict::Boundary);
    }
}

#[test]
fn jackson_inequality_with_equality_on_the_axis() {
    for p in 1..=2 {
        let ell = interval(p);
        for n in [0, 1, 2, 5] {
            let c = jackson_check(&ell, n, 40, 200, 2024).unwrap();
            assert!(c.max_tail <= c.bound + 1e-10);
            assert!((c.axis_tail - c.bound).abs() <= 1e-10);
            assert!(c.holds);
        }
    }
}

#[test]
fn tail_distance_is_monotone_in_n() {
    let ell = interval(2);
    let mut r = rng::from_seed(5);
    let f = boundary_sample(&ell, 30, &mut r);
    let tails: Vec<f64> = (0..10).map(|n| tail_distance(&ell, &f, n).unwrap()).collect();
    assert!(tails.windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn extremal_subspace_is_sharp_and_unbeaten() {
    for p in 1..=2 {
        let ell = interval(p);
        for n in [0, 2, 4] {
            let v = sup_distance(&ell, &ell.extremal_subspace(n)).unwrap().value().unwrap();
            assert!((v - jackson_bound(&ell, n).unwrap()).abs() <= 1e-9);
        }
        let rep = competition(&ell, 2, 100, 99).unwrap();
        assert!(rep.min_value >= rep.harmonic_width - 1e-8);
    }
}

#[test]
fn skipping_an_axis_costs_that_axis() {
    let ell = interval(1);
    let n = 3;
    let mut basis = ell.kernel.clone();
    basis.extend((0..n + 1).filter(|&j| j != n - 1).map(|j| ell.axes[j].clone()));
    let s = Subspace::from_vectors(&basis, &ell.mass, "skip").unwrap();
    let v = sup_distance(&ell, &s).unwrap().value().unwrap();
    assert!((v - 1.0 / ell.lambdas[n - 1].sqrt()).abs() <= 1e-9);
}

#[test]
fn certificates_scale_linearly() {
    let ell = interval(2);
    for n in 0..2 {
        let w = kolmogorov_width(&ell, n).unwrap();
        let c = w.certificate().expect("infinite width");
        let s = Subspace::from_vectors(&ell.kernel[..n], &ell.mass, "partial").unwrap();
        let t = 1e6;
        let d = s.distance(&ell.mass, &(&c.direction * t));
        assert!((d / (t * c.delta) - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn disk_subspaces_never_capture_the_kernel() {
    let ell = merge_disk_model(1, 3, 3, 20).unwrap().to_ellipsoid().unwrap();
    for trial in 0..10 {
        let s = random_subspace(&ell, 6, 17, trial).unwrap();
        let c = infinite_certificate(&ell, &s).unwrap();
        assert!(c.delta > 1e-8);
        let d = s.distance(&ell.mass, &(&c.direction * 1e6));
        assert!((d / (1e6 * c.delta) - 1.0).abs() <= 1e-6);
    }
    for n in [0, 3, 10] {
        let w = disk_kolmogorov_width(1, n, 2, 2, 16).unwrap();
        assert!(w.width.is_infinite());
        assert!(w.kernel_dim_truncated > n);
    }
}

#[test]
fn psi_axes_are_orthogonal_to_the_harmonic_kernel() {
    let ell = merge_disk_model(1, 3, 3, 24).unwrap().to_ellipsoid().unwrap();
    let s = Subspace::from_vectors(&ell.axes[..3], &ell.mass, "axes").unwrap();
    let c = infinite_certificate(&ell, &s).unwrap();
    assert!((c.delta - 1.0).abs() <= 1e-8);
}

#[test]
fn nested_kernels_have_unit_gap() {
    for m_max in [2, 5] {
        let space = DiskSpace::new(m_max, 4);
        let x = space.almansi_subspace(1).unwrap();
        let y = space.almansi_subspace(2).unwrap();
        assert!((subspace_gap(&x, &y, &space.mass()) - 1.0).abs() <= 1e-8);
    }
}
