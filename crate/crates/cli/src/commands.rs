//! One adapter per subcommand: library call in, [`Report`] out.

use serde::Serialize;
use serde_json::{json, Value};

use hwidth::chebyshev::{
    annihilation_residual, dirichlet_bvp_check, sign_intervals, weights_from_wronskians, wronskian_profile,
    FunctionSystem, DEFAULT_MARGIN_SHARE, OPERATOR_DEGREE,
};
use hwidth::disk::{self, bessel_clamped_oracle, merge_disk_model, DiskSpace};
use hwidth::ellipticity::{check_strong_ellipticity, Symbol};
use hwidth::kolmogorov1d::{self, beam_oracle, build_kp_model, kp_eigensystem};
use hwidth::widths::{
    competition, harmonic_width, jackson_check, kolmogorov_width, sup_distance, subspace_gap, width_profile,
    EllipsoidModel, WidthResult,
};

use crate::config::{Command, ModelArgs, ModelKind, OracleKind, RunConfig};
use crate::report::{Cell, Report, Table};
use crate::CliError;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Ellipsoid model selected by the shared model flags.
pub fn build_model(args: &ModelArgs) -> hwidth::Result<EllipsoidModel> {
    match args.model {
        ModelKind::Interval => {
            let model = build_kp_model(args.p, args.basis)?;
            let count = args.count.unwrap_or(args.basis - args.p);
            kolmogorov1d::to_ellipsoid(&model, count)
        }
        ModelKind::Disk => {
            let d = &args.disk;
            merge_disk_model(args.p, d.m_max, d.per_mode, d.degree)?.to_ellipsoid()
        }
    }
}

fn width_row(t: &mut Table, w: &WidthResult) {
    match w {
        WidthResult::Finite { value, extremal } => {
            t.push(vec!["Finite".into(), (*value).into(), extremal.dim().into(), Cell::Missing])
        }
        WidthResult::Infinite { certificate } => t.push(vec![
            "Infinite".into(),
            Cell::Missing,
            Cell::Missing,
            certificate.delta.into(),
        ]),
    }
}

const WIDTH_HEADER: [&str; 4] = ["kind", "value", "extremal_dim", "delta"];

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let command = config.command.name();
    let cfg = to_value(&config.command);
    let (result, table) = match &config.command {
        Command::Eig1d { p, basis, count } => {
            let model = build_kp_model(*p, *basis)?;
            let sol = kp_eigensystem(&model, *count)?;
            let summary = kolmogorov1d::summary(&model, &sol);
            let mut t = Table::new(&["index", "lambda", "m", "mult"]);
            for (j, l) in sol.lambdas.iter().enumerate() {
                t.push(vec![(j + 1).into(), (*l).into(), 0usize.into(), 1usize.into()]);
            }
            let mut v = to_value(&summary);
            v["residuals"] = to_value(&sol.residuals);
            (v, t)
        }
        Command::EigDisk { p, disk } => {
            let model = merge_disk_model(*p, disk.m_max, disk.per_mode, disk.degree)?;
            let summary = model.summary();
            let mut t = Table::new(&["index", "lambda", "m", "mult"]);
            for (j, e) in summary.spectrum.iter().enumerate() {
                t.push(vec![(j + 1).into(), e.lambda.into(), e.m.into(), e.mult.into()]);
            }
            (to_value(&summary), t)
        }
        Command::Width { model, n } => {
            let mut t = Table::new(&WIDTH_HEADER);
            let v = match model.model {
                ModelKind::Interval => {
                    let w = kolmogorov_width(&build_model(model)?, *n)?;
                    width_row(&mut t, &w);
                    json!({ "N": n, "width": to_value(&w) })
                }
                ModelKind::Disk => {
                    let d = &model.disk;
                    let w = disk::disk_kolmogorov_width(model.p, *n, d.m_max, d.per_mode, d.degree)?;
                    width_row(&mut t, &w.width);
                    json!({
                        "N": n,
                        "m_max_used": w.m_max,
                        "kernel_dim_truncated": w.kernel_dim_truncated,
                        "width": to_value(&w.width),
                    })
                }
            };
            (v, t)
        }
        Command::Hwidth { model, n } => {
            let ell = build_model(model)?;
            let w = harmonic_width(&ell, *n)?;
            let check = sup_distance(&ell, &ell.extremal_subspace(*n))?;
            let mut t = Table::new(&WIDTH_HEADER);
            width_row(&mut t, &w);
            (
                json!({ "N": n, "width": to_value(&w), "sup_distance_extremal": check.value() }),
                t,
            )
        }
        Command::Jackson {
            model,
            n,
            samples,
            truncation,
            seed,
            plot_data,
            n_max,
        } => {
            let ell = build_model(model)?;
            if *plot_data {
                let pts = width_profile(&ell, *n_max)?;
                let mut t = Table::new(&["N", "width", "jackson_bound"]);
                for q in &pts {
                    t.push(vec![q.n.into(), q.width.into(), q.jackson_bound.into()]);
                }
                (json!({ "points": to_value(&pts) }), t)
            } else {
                let c = jackson_check(&ell, *n, *truncation, *samples, *seed)?;
                let mut t = Table::new(&["N", "bound", "max_tail", "axis_tail", "holds"]);
                t.push(vec![c.n.into(), c.bound.into(), c.max_tail.into(), c.axis_tail.into(), c.holds.into()]);
                (to_value(&c), t)
            }
        }
        Command::Compete { model, n, trials, seed } => {
            let ell = build_model(model)?;
            let rep = competition(&ell, *n, *trials, *seed)?;
            let mut t = Table::new(&["trial", "value"]);
            for (i, v) in rep.values.iter().enumerate() {
                t.push(vec![i.into(), (*v).into()]);
            }
            (to_value(&rep), t)
        }
        Command::Gap { m_max, p_low, p_high } => {
            let space = DiskSpace::new(*m_max, (*p_low).max(*p_high) + 1);
            let x = space.almansi_subspace(*p_low)?;
            let y = space.almansi_subspace(*p_high)?;
            let mass = space.mass();
            let gap = subspace_gap(&x, &y, &mass);
            let reverse = subspace_gap(&y, &x, &mass);
            let mut t = Table::new(&["dim_x", "dim_y", "gap", "reverse_gap"]);
            t.push(vec![x.dim().into(), y.dim().into(), gap.into(), reverse.into()]);
            (
                json!({ "dim_x": x.dim(), "dim_y": y.dim(), "gap": gap, "reverse_gap": reverse }),
                t,
            )
        }
        Command::Chebyshev {
            system,
            interval,
            grid,
            weights_on,
            dirichlet,
        } => chebyshev_report(system, *interval, *grid, *weights_on, *dirichlet)?,
        Command::Oracle { kind, p, m, count } => match kind {
            OracleKind::Beam => {
                let lambdas = beam_oracle(*p, *count)?;
                let mut t = Table::new(&["index", "lambda"]);
                for (j, l) in lambdas.iter().enumerate() {
                    t.push(vec![(j + 1).into(), (*l).into()]);
                }
                (json!({ "p": p, "lambdas": lambdas }), t)
            }
            OracleKind::Bessel => {
                let table = bessel_clamped_oracle(*m, *count)?;
                let lambdas = table.lambdas();
                let mut t = Table::new(&["index", "root", "lambda"]);
                for (j, (k, l)) in table.roots.iter().zip(&lambdas).enumerate() {
                    t.push(vec![(j + 1).into(), (*k).into(), (*l).into()]);
                }
                let mut v = to_value(&table);
                v["lambdas"] = to_value(&lambdas);
                (v, t)
            }
        },
        Command::Ellipticity { symbol, dim, samples } => {
            let s = Symbol::parse(symbol, *dim)?;
            let rep = check_strong_ellipticity(&s, *samples)?;
            let mut t = Table::new(&["order", "c0", "c1", "accepted", "samples"]);
            t.push(vec![
                (rep.order as usize).into(),
                rep.c0.into(),
                rep.c1.into(),
                rep.accepted.into(),
                rep.samples.into(),
            ]);
            (to_value(&rep), t)
        }
    };
    Ok(Report {
        command,
        config: cfg,
        result,
        table,
    })
}

fn chebyshev_report(
    system: &str,
    interval: (f64, f64),
    grid: usize,
    weights_on: Option<(f64, f64)>,
    dirichlet: Option<(f64, f64)>,
) -> Result<(Value, Table), CliError> {
    let sys = FunctionSystem::parse(system, interval)?;
    let profile = wronskian_profile(&sys, grid)?;
    let signs = sign_intervals(&profile)?;
    let definite = signs.intervals.iter().all(|iv| iv.len() == 1);
    let j = weights_on.or(definite.then_some(interval));
    let weights = match j {
        Some(j) => {
            let wf = weights_from_wronskians(&profile, j)?;
            let rho = wf.to_series(OPERATOR_DEGREE);
            let margin = DEFAULT_MARGIN_SHARE * (j.1 - j.0);
            let residuals = sys
                .elements
                .iter()
                .map(|u| annihilation_residual(&rho, u, margin).map(|r| r.residual))
                .collect::<hwidth::Result<Vec<_>>>()?;
            let mut v = to_value(&wf);
            v["annihilation"] = to_value(&residuals);
            v
        }
        None => Value::Null,
    };
    let dirichlet = match dirichlet {
        Some((a1, b1)) => to_value(&dirichlet_bvp_check(&sys, a1, b1)?),
        None => Value::Null,
    };
    let mut header = vec!["t".to_string()];
    header.extend((1..=profile.n).map(|k| format!("W{k}")));
    let mut t = Table { header, rows: Vec::new() };
    for (i, &x) in profile.grid.iter().enumerate() {
        let mut row = vec![Cell::from(x)];
        row.extend(profile.w.iter().map(|w| Cell::from(w[i])));
        t.push(row);
    }
    let v = json!({
        "N": profile.n,
        "grid": profile.grid,
        "W": profile.w,
        "sign_intervals": to_value(&signs.intervals),
        "zeros": signs.zeros,
        "weights": weights,
        "dirichlet": dirichlet,
    });
    Ok((v, t))
}
