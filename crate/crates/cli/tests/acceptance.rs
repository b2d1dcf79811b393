//! End-to-end acceptance suite. Prints one `[PASS]`/`[FAIL]` line per
//! criterion (run with `--nocapture` to see them) and fails if any fails.

use std::f64::consts::PI;
use std::process::Command;

use hwidth::chebyshev::{
    dirichlet_bvp_check, ect_basis_from_weights, sign_intervals, weights_from_wronskians, wronskian_profile,
    FunctionSystem,
};
use hwidth::disk::radial::radial_inner;
use hwidth::disk::{
    almansi_kernel, bessel_clamped_oracle, build_radial_mode, merge_disk_model, psi_from_phi, solve_mode, DiskSpace,
};
use hwidth::kolmogorov1d::{beam_oracle, build_kp_model, kp_eigensystem, to_ellipsoid};
use hwidth::series::Series;
use hwidth::widths::{
    competition, infinite_certificate, jackson_bound, jackson_check, kolmogorov_width, random_subspace, subspace_gap,
    sup_distance, EllipsoidModel, Subspace,
};

type Outcome = (bool, String);

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn interval_ellipsoid(p: usize) -> EllipsoidModel {
    to_ellipsoid(&build_kp_model(p, 48).unwrap(), 48 - p).unwrap()
}

fn neumann_spectrum() -> Outcome {
    let sol = kp_eigensystem(&build_kp_model(1, 48).unwrap(), 8).unwrap();
    let err = (1..=8)
        .map(|j| rel(sol.lambdas[j - 1], (PI * j as f64).powi(2)))
        .fold(0.0, f64::max);
    (err <= 1e-8, format!("max rel err {err:.2e} (tol 1e-8)"))
}

fn beam_spectrum() -> Outcome {
    let sol = kp_eigensystem(&build_kp_model(2, 48).unwrap(), 6).unwrap();
    let oracle = beam_oracle(2, 6).unwrap();
    let err = sol.lambdas.iter().zip(&oracle).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max);
    (err <= 1e-6, format!("max rel err {err:.2e} (tol 1e-6)"))
}

fn kernel_multiplicity() -> Outcome {
    let dims: Vec<usize> = (1..=4).map(|p| build_kp_model(p, 48).unwrap().kernel_dim()).collect();
    (dims == [1, 2, 3, 4], format!("kernel dims {dims:?}"))
}

fn asymptotic_law() -> Outcome {
    let mut worst = Vec::new();
    for p in 1..=3usize {
        let sol = kp_eigensystem(&build_kp_model(p, 64).unwrap(), 12).unwrap();
        let dev = (4..=12usize)
            .map(|j| {
                let jf = j as f64;
                let law = PI.powi(2 * p as i32) * (jf + p as f64 / 2.0).powi(2 * p as i32);
                jf * rel(sol.lambdas[j - 1], law)
            })
            .fold(0.0, f64::max);
        worst.push(dev);
    }
    let ok = worst.iter().enumerate().all(|(i, d)| *d <= 2.0 * (i + 1) as f64);
    (ok, format!("max j*|ratio-1| per p: {worst:.3?} (bound 2p)"))
}

fn jackson() -> Outcome {
    let mut ok = true;
    let mut gap = f64::INFINITY;
    let mut axis = 0.0f64;
    for p in 1..=2 {
        let ell = interval_ellipsoid(p);
        for n in [0, 1, 2, 5] {
            let c = jackson_check(&ell, n, 40, 200, 2024).unwrap();
            ok &= c.max_tail <= c.bound + 1e-10 && (c.axis_tail - c.bound).abs() <= 1e-10;
            gap = gap.min(c.bound - c.max_tail);
            axis = axis.max((c.axis_tail - c.bound).abs());
        }
    }
    (ok, format!("min(bound - tail) {gap:.2e}, axis equality err {axis:.2e}"))
}

fn sharpness_and_competition() -> Outcome {
    let mut sharp = 0.0f64;
    let mut beaten = f64::NEG_INFINITY;
    for p in 1..=2 {
        let ell = interval_ellipsoid(p);
        for n in [0, 1, 2, 5] {
            let v = sup_distance(&ell, &ell.extremal_subspace(n)).unwrap().value().unwrap();
            sharp = sharp.max((v - jackson_bound(&ell, n).unwrap()).abs());
            let rep = competition(&ell, n, 100, 7).unwrap();
            beaten = beaten.max(rep.extremal_value - rep.min_value);
        }
    }
    let ok = sharp <= 1e-9 && beaten <= 1e-8;
    (ok, format!("sharpness err {sharp:.2e} (tol 1e-9), best improvement {beaten:.2e} (tol 1e-8)"))
}

fn infinity_certificates() -> Outcome {
    let t = 1e6;
    let mut worst = 0.0f64;
    let mut all_infinite = true;
    let ell = interval_ellipsoid(2);
    for n in 0..2 {
        let w = kolmogorov_width(&ell, n).unwrap();
        let Some(c) = w.certificate() else {
            all_infinite = false;
            continue;
        };
        let s = Subspace::from_vectors(&ell.kernel[..n], &ell.mass, "partial").unwrap();
        worst = worst.max(rel(s.distance(&ell.mass, &(&c.direction * t)), t * c.delta));
    }
    let disk = merge_disk_model(1, 3, 3, 20).unwrap().to_ellipsoid().unwrap();
    for (trial, dim) in [1, 4, 8, 16, 24].into_iter().enumerate() {
        let s = random_subspace(&disk, dim, 41, trial).unwrap();
        let c = infinite_certificate(&disk, &s).unwrap();
        all_infinite &= c.delta > 0.0;
        worst = worst.max(rel(s.distance(&disk.mass, &(&c.direction * t)), t * c.delta));
    }
    let ok = all_infinite && worst <= 1e-6;
    (ok, format!("all infinite: {all_infinite}, max rel err at t=1e6 {worst:.2e} (tol 1e-6)"))
}

fn bessel_oracle() -> Outcome {
    let mut err = 0.0f64;
    for m in 0..=2 {
        let sol = solve_mode(&build_radial_mode(m, 1, 32).unwrap(), 3, 1e-9).unwrap();
        let roots = bessel_clamped_oracle(m, 3).unwrap().roots;
        for (l, k) in sol.lambdas.iter().zip(&roots) {
            err = err.max(rel(*l, k.powi(4)));
        }
    }
    (err <= 1e-6, format!("max rel err {err:.2e} (tol 1e-6)"))
}

fn axis_orthogonality() -> Outcome {
    let (mut ortho, mut kern) = (0.0f64, 0.0f64);
    for p in 1..=2 {
        for m in 0..=4 {
            let mode = build_radial_mode(m, p, 32).unwrap();
            let sol = solve_mode(&mode, 5, 1e-9).unwrap();
            let psis: Vec<_> = sol
                .phis
                .iter()
                .zip(&sol.lambdas)
                .map(|(phi, &l)| psi_from_phi(&mode, phi, l).unwrap())
                .collect();
            let kernel = almansi_kernel(m, p);
            for (i, a) in psis.iter().enumerate() {
                for (j, b) in psis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((radial_inner(a, b) - want).abs());
                }
                for z in &kernel {
                    kern = kern.max(radial_inner(a, z).abs());
                }
            }
        }
    }
    let ok = ortho <= 1e-8 && kern <= 1e-8;
    (ok, format!("orthonormality err {ortho:.2e}, kernel overlap {kern:.2e} (tol 1e-8)"))
}

fn kernel_gap() -> Outcome {
    let mut err = 0.0f64;
    for m_max in [1, 2, 4, 6] {
        let space = DiskSpace::new(m_max, 4);
        let x = space.almansi_subspace(1).unwrap();
        let y = space.almansi_subspace(2).unwrap();
        err = err.max((subspace_gap(&x, &y, &space.mass()) - 1.0).abs());
    }
    (err <= 1e-8, format!("max |gap - 1| {err:.2e} (tol 1e-8)"))
}

fn chebyshev_suite() -> Outcome {
    let pm1 = (-1.0, 1.0);
    let unit = (0.0, 1.0);
    let even = FunctionSystem::parse("1,t^2", pm1).unwrap();
    let zeros = sign_intervals(&wronskian_profile(&even, 64).unwrap()).unwrap().zeros;
    let zero_ok = zeros[1].len() == 1 && zeros[1][0].abs() <= 1e-10;

    let mono = FunctionSystem::monomials(3, pm1).unwrap();
    let wf = weights_from_wronskians(&wronskian_profile(&mono, 64).unwrap(), pm1).unwrap();
    let rho_err = [1.0, 1.0, 2.0]
        .iter()
        .enumerate()
        .flat_map(|(k, want)| wf.rho[k].iter().map(move |r| (r - want).abs()))
        .fold(0.0, f64::max);

    let rho = vec![
        Series::from_monomials(unit, &[1.0, 0.5]),
        Series::from_monomials(unit, &[2.0, 0.0, 1.0]),
        Series::from_monomials(unit, &[1.0, -0.3]),
    ];
    let sys = ect_basis_from_weights(&rho, unit).unwrap();
    let back = weights_from_wronskians(&wronskian_profile(&sys, 64).unwrap(), unit).unwrap();
    let mut trip = 0.0f64;
    for (i, &t) in back.grid.iter().enumerate() {
        for (k, r) in rho.iter().enumerate() {
            trip = trip.max((back.rho[k][i] - r.eval(t)).abs());
        }
    }

    let even_solvable = dirichlet_bvp_check(&even, -1.0, 1.0).unwrap().solvable;
    let cubic = FunctionSystem::monomials(4, pm1).unwrap();
    let cubic_solvable = dirichlet_bvp_check(&cubic, -1.0, 1.0).unwrap().solvable;

    let ok = zero_ok && rho_err <= 1e-10 && trip <= 1e-8 && !even_solvable && cubic_solvable;
    let detail = format!(
        "zero {:?}, rho err {rho_err:.2e}, round trip {trip:.2e}, {{1,t^2}} solvable {even_solvable}, cubic solvable {cubic_solvable}",
        zeros[1]
    );
    (ok, detail)
}

fn determinism() -> Outcome {
    let runs: &[&[&str]] = &[
        &["jackson", "--p", "2", "--N", "2", "--samples", "200", "--seed", "11"],
        &["jackson", "--p", "1", "--plot-data", "--n-max", "6"],
        &["compete", "--p", "1", "--N", "2", "--trials", "100", "--seed", "5"],
        &["compete", "--model", "disk", "--p", "1", "--m-max", "2", "--degree", "16", "--per-mode", "2", "--N", "3", "--trials", "20", "--seed", "5"],
        &["width", "--model", "disk", "--p", "1", "--m-max", "2", "--degree", "16", "--per-mode", "2", "--N", "4"],
        &["ellipticity", "--symbol", "x1^4 + x2^4", "--samples", "200"],
    ];
    let hw = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_hw")).args(args).output().unwrap();
        (out.status.code(), out.stdout)
    };
    let mut failed = Vec::new();
    for args in runs {
        for format in ["json", "csv"] {
            let mut full = args.to_vec();
            full.extend(["--format", format]);
            let (a, b) = (hw(&full), hw(&full));
            if a.0 != Some(0) || a != b {
                failed.push(format!("{} ({format}, exit {:?})", args[0], a.0));
            }
        }
    }
    let detail = format!("{} runs x 2 formats, mismatches: {failed:?}", runs.len());
    (failed.is_empty(), detail)
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1D p=1 Neumann spectrum", neumann_spectrum),
        ("1D p=2 free-beam spectrum", beam_spectrum),
        ("kernel multiplicity p", kernel_multiplicity),
        ("asymptotic eigenvalue law", asymptotic_law),
        ("Jackson bound", jackson),
        ("width sharpness and competition", sharpness_and_competition),
        ("infinity certificates", infinity_certificates),
        ("disk Bessel oracle", bessel_oracle),
        ("axis orthogonality", axis_orthogonality),
        ("nested kernel gap", kernel_gap),
        ("Chebyshev suite", chebyshev_suite),
        ("CLI determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failures += usize::from(!ok);
        println!("[{}] {:2}. {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
