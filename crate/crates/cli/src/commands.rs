use std::time::Instant;

use stringforce::bem::{mesh_difference, solve_direct, DirectMethod, DirectProblem, TraceComponent};
use stringforce::inverse::{
    assemble_design_matrix, default_lambda_grid, error_norm, lcurve, normal_condition_number, LCurve,
    RegularizationConfig, SURVEY_LAMBDAS,
};
use stringforce::pipeline::{force_grid, interior_grid, Inversion, PipelineError};
use stringforce::ControlKind;

use crate::error::CliError;
use crate::experiment::{Experiment, LambdaChoice};
use crate::output::{fmt_f64, Cell, OutDir, Report};

const DEFAULT_MESHES: [usize; 3] = [20, 40, 80];
const DEFAULT_MODES: [usize; 3] = [5, 10, 20];
/// Interior points per direction for displacement output.
const INTERIOR_POINTS: usize = 20;

const COMPONENTS: [(TraceComponent, &str); 4] = [
    (TraceComponent::V0, "v0"),
    (TraceComponent::VL, "vL"),
    (TraceComponent::Dv0, "dv0"),
    (TraceComponent::DvL, "dvL"),
];

fn method(exp: &Experiment) -> DirectMethod {
    if exp.global {
        DirectMethod::Global
    } else {
        DirectMethod::Marching
    }
}

fn header(report: &mut Report, command: &str, exp: &Experiment) {
    report.line(format!("stringforce {command}"));
    report.line("");
    report.kv("problem", &exp.source);
    report.kv("control", exp.control);
    report.kv("mu", exp.spec.boundary_kind.mu());
    report.kv(
        "c, L, T",
        format!("{}, {}, {}", exp.spec.wave_speed, exp.spec.length, exp.spec.horizon),
    );
    report.kv("direct solver", format!("{:?}", method(exp)).to_lowercase());
    match exp.noise {
        Some(n) => report.kv("noise", format!("{}% (seed {})", n.percent, n.seed)),
        None => report.kv("noise", "none"),
    }
}

fn finish(out: &mut OutDir, report: Report, started: Instant) -> Result<(), CliError> {
    let mut files = out.written().to_vec();
    files.push("report.txt".into());
    let body = report.finish(&files, started.elapsed());
    out.text("report.txt", &body)
}

pub fn direct(exp: &Experiment) -> Result<(), CliError> {
    let started = Instant::now();
    exp.check_spec()?;
    let meshes = exp.meshes(&DEFAULT_MESHES);
    let mut out = OutDir::create(&exp.out)?;
    let mut report = Report::default();
    header(&mut report, "direct", exp);
    report.line("");

    let mut solutions = Vec::with_capacity(meshes.len());
    for &n in &meshes {
        let grid = exp.grid(n)?;
        let problem = DirectProblem::for_control(&exp.spec, exp.control, &grid);
        let sol = solve_direct(&problem, method(exp)).map_err(PipelineError::from)?;
        let tr = &sol.traces;
        out.csv(
            &format!("traces_N{n}.csv"),
            &["t", "v0", "vL", "dv0", "dvL"],
            (0..tr.len()).map(|k| {
                vec![
                    Cell::F(tr.times[k]),
                    Cell::F(tr.v0[k]),
                    Cell::F(tr.v_l[k]),
                    Cell::F(tr.dv0[k]),
                    Cell::F(tr.dv_l[k]),
                ]
            }),
        )?;
        let (xs, steps) = interior_grid(&grid, INTERIOR_POINTS.min(n));
        let field = sol.interior_field(&xs, &steps).map_err(PipelineError::from)?;
        out.csv(
            &format!("interior_N{n}.csv"),
            &["x", "t", "v"],
            field.iter().map(|(x, t, v)| vec![Cell::F(x), Cell::F(t), Cell::F(v)]),
        )?;
        report.kv(
            &format!("mesh N={n}"),
            format!("M={} courant={}", grid.n_space, grid.courant()),
        );
        solutions.push((n, sol));
    }

    let mut rows = Vec::new();
    for pair in solutions.windows(2) {
        let ((nc, coarse), (nf, fine)) = (&pair[0], &pair[1]);
        for (comp, name) in COMPONENTS {
            match mesh_difference(&coarse.traces, &fine.traces, comp) {
                Some(d) => rows.push((*nc, *nf, name, d)),
                None => log::warn!("N={nf} is not a multiple of N={nc}; no {name} difference"),
            }
        }
    }
    out.csv(
        "convergence.csv",
        &["coarse_N", "fine_N", "component", "max_abs_diff"],
        rows.iter()
            .map(|&(c, f, name, d)| vec![Cell::I(c), Cell::I(f), Cell::S(name), Cell::F(d)]),
    )?;
    if !rows.is_empty() {
        report.line("");
        report.line("max |coarse - fine| at shared times:");
        for (c, f, name, d) in &rows {
            report.line(format!("  N={c} vs N={f}  {name:<4} {}", fmt_f64(*d)));
        }
    }
    finish(&mut out, report, started)
}

pub fn tables(exp: &Experiment) -> Result<(), CliError> {
    let started = Instant::now();
    let meshes = exp.meshes(&DEFAULT_MESHES);
    let modes = if exp.modes.is_empty() {
        DEFAULT_MODES.to_vec()
    } else {
        exp.modes.clone()
    };
    let mut out = OutDir::create(&exp.out)?;
    let mut report = Report::default();
    header(&mut report, "tables", exp);
    report.line("");
    report.line("cond = sigma_max/sigma_min of Q; cond_normal = cond^2 (condition of Q^T Q)");

    let mut rows = Vec::new();
    for control in [ControlKind::Neumann, ControlKind::Dirichlet] {
        for &n in &meshes {
            let grid = exp.grid(n)?;
            for &k in &modes {
                let q = match assemble_design_matrix(&grid, k, control, exp.spec.boundary_kind) {
                    Ok(q) => q,
                    Err(e) => {
                        log::warn!("skipping {control} N={n} K={k}: {e}");
                        report.line(format!("skipped {control} N={n} K={k}: {e}"));
                        continue;
                    }
                };
                let cn = normal_condition_number(&q)?;
                rows.push((control, n, k, cn.sqrt(), cn));
            }
        }
    }
    out.csv(
        "tables.csv",
        &["control", "N", "K", "cond", "cond_normal"],
        rows.iter().map(|(c, n, k, cond, cn)| {
            vec![
                Cell::S(if *c == ControlKind::Neumann {
                    "neumann"
                } else {
                    "dirichlet"
                }),
                Cell::I(*n),
                Cell::I(*k),
                Cell::F(*cond),
                Cell::F(*cn),
            ]
        }),
    )?;
    report.line("");
    for (c, n, k, cond, cn) in &rows {
        report.line(format!(
            "  {c:<9} N={n:<4} K={k:<4} cond={cond:.4e} cond_normal={cn:.4e}"
        ));
    }
    finish(&mut out, report, started)
}

fn prepare(exp: &Experiment) -> Result<(Inversion, usize), CliError> {
    let n = exp.single_mesh()?;
    let k = exp.single_modes()?;
    let grid = exp.grid(n)?;
    let inv = Inversion::prepare(&exp.spec, exp.control, &grid, k, exp.noise, method(exp))?;
    Ok((inv, k))
}

fn write_data(out: &mut OutDir, inv: &Inversion) -> Result<(), CliError> {
    let times = &inv.direct.traces.times;
    out.csv(
        "data.csv",
        &["t", "clean", "noisy"],
        (0..times.len()).map(|i| vec![Cell::F(times[i]), Cell::F(inv.clean[i]), Cell::F(inv.measured[i])]),
    )
}

fn force_error(exp: &Experiment, inv: &Inversion, b: &[f64]) -> Result<Option<f64>, CliError> {
    let Some(f) = &exp.exact_force else {
        return Ok(None);
    };
    let xs = force_grid(exp.spec.length);
    Ok(Some(error_norm(&inv.force(b, &xs), &f.sample(&xs))?))
}

fn lcurve_rows(lc: &LCurve) -> impl Iterator<Item = Vec<Cell<'static>>> + '_ {
    lc.points.iter().map(|p| {
        vec![
            Cell::F(p.lambda),
            Cell::F(p.residual_norm),
            Cell::F(p.solution_norm),
            p.curvature.into(),
        ]
    })
}

const LCURVE_HEADER: [&str; 4] = ["lambda", "residual_norm", "solution_norm", "curvature"];

pub fn invert(exp: &Experiment) -> Result<(), CliError> {
    let started = Instant::now();
    let (inv, k) = prepare(exp)?;
    let mut out = OutDir::create(&exp.out)?;
    let mut report = Report::default();
    header(&mut report, "invert", exp);
    report.kv("N, M, K", format!("{}, {}, {k}", inv.grid.n_time, inv.grid.n_space));
    report.kv("regularisation order", exp.order.index());

    write_data(&mut out, &inv)?;

    let svd = inv.design.svd()?;
    let top = svd.largest();
    out.csv(
        "singular_values.csv",
        &["k", "sv", "sv_normalized"],
        svd.singular_values.iter().enumerate().map(|(i, &s)| {
            vec![
                Cell::I(i + 1),
                Cell::F(s),
                Cell::F(if top > 0.0 { s / top } else { 0.0 }),
            ]
        }),
    )?;
    let cond = svd.condition_number();
    out.csv(
        "conditioning.csv",
        &["N", "K", "cond", "cond_normal"],
        [vec![
            Cell::I(inv.grid.n_time),
            Cell::I(k),
            Cell::F(cond),
            Cell::F(cond * cond),
        ]],
    )?;
    report.kv("cond(Q)", fmt_f64(cond));
    report.kv("cond(Q^T Q)", fmt_f64(cond * cond));

    let lambdas = match exp.lambda.clone().unwrap_or(LambdaChoice::Values(vec![0.0])) {
        LambdaChoice::Values(v) => v,
        LambdaChoice::Corner => {
            let lc = lcurve(&inv.design, &inv.data, &default_lambda_grid(), exp.order)?;
            out.csv("lcurve.csv", &LCURVE_HEADER, lcurve_rows(&lc))?;
            report.kv("L-curve corner", fmt_f64(lc.corner_lambda()));
            if lc.degenerate {
                report.line("warning: degenerate L-curve, corner is a fallback");
            }
            vec![lc.corner_lambda()]
        }
    };

    let analytic = exp.analytic(k);
    let xs = force_grid(exp.spec.length);
    let exact_f = exp.exact_force.as_ref().map(|f| f.sample(&xs));
    let (ixs, steps) = interior_grid(&inv.grid, INTERIOR_POINTS.min(inv.grid.n_time));

    let mut summary = Vec::new();
    for (idx, &lambda) in lambdas.iter().enumerate() {
        let s = inv.solve(RegularizationConfig {
            lambda,
            order: exp.order,
        })?;
        let b = &s.b;

        out.csv(
            &format!("coefficients_{idx}.csv"),
            &["k", "b_k", "analytic"],
            (0..k).map(|i| vec![Cell::I(i + 1), Cell::F(b[i]), analytic.as_ref().map(|a| a[i]).into()]),
        )?;
        let f = inv.force(b, &xs);
        out.csv(
            &format!("force_{idx}.csv"),
            &["x", "f", "f_exact"],
            (0..xs.len()).map(|i| vec![Cell::F(xs[i]), Cell::F(f[i]), exact_f.as_ref().map(|e| e[i]).into()]),
        )?;
        let u = inv.displacement(b, &ixs, &steps)?;
        let mut u_err: Option<f64> = None;
        let rows: Vec<_> = u
            .iter()
            .map(|(x, t, v)| {
                let exact = exp.exact_displacement(x, t);
                if let Some(e) = exact {
                    u_err = Some(u_err.unwrap_or(0.0).max((v - e).abs()));
                }
                vec![Cell::F(x), Cell::F(t), Cell::F(v), exact.into()]
            })
            .collect();
        out.csv(&format!("displacement_{idx}.csv"), &["x", "t", "u", "u_exact"], rows)?;

        let f_err = force_error(exp, &inv, b)?;
        let b1_dev = analytic.as_ref().map(|a| (b[0] - a[0]).abs() / a[0].abs());
        summary.push((
            idx,
            lambda,
            s.residual_norm,
            s.solution_norm,
            s.penalty_norm,
            b[0],
            b1_dev,
            f_err,
            u_err,
        ));
    }

    out.csv(
        "summary.csv",
        &[
            "index",
            "lambda",
            "residual_norm",
            "solution_norm",
            "penalty_norm",
            "b1",
            "b1_rel_dev",
            "force_error",
            "displacement_max_error",
        ],
        summary.iter().map(|r| {
            vec![
                Cell::I(r.0),
                Cell::F(r.1),
                Cell::F(r.2),
                Cell::F(r.3),
                Cell::F(r.4),
                Cell::F(r.5),
                r.6.into(),
                r.7.into(),
                r.8.into(),
            ]
        }),
    )?;
    if exp.exact_force.is_some() {
        out.csv(
            "errors.csv",
            &["lambda", "error"],
            summary.iter().map(|r| vec![Cell::F(r.1), r.7.into()]),
        )?;
    }

    report.line("");
    for r in &summary {
        report.line(format!("lambda = {} (files *_{}.csv)", fmt_f64(r.1), r.0));
        report.kv("  residual_norm", fmt_f64(r.2));
        report.kv("  solution_norm", fmt_f64(r.3));
        report.kv("  b1", fmt_f64(r.5));
        if let (Some(a), Some(d)) = (&analytic, r.6) {
            report.kv("  b1 analytic", format!("{} (rel. dev. {})", fmt_f64(a[0]), fmt_f64(d)));
        }
        if let Some(e) = r.7 {
            report.kv("  force error", fmt_f64(e));
        }
        if let Some(e) = r.8 {
            report.kv("  max |u - u_exact|", fmt_f64(e));
        }
    }
    finish(&mut out, report, started)
}

pub fn lcurve_cmd(exp: &Experiment) -> Result<(), CliError> {
    let started = Instant::now();
    let grid_values = match &exp.lambda {
        None => default_lambda_grid(),
        Some(LambdaChoice::Values(v)) => {
            let mut v = v.clone();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        }
        Some(LambdaChoice::Corner) => {
            return Err(CliError::Validation(
                "--lambda lcurve makes no sense for the lcurve command".into(),
            ))
        }
    };
    let (inv, k) = prepare(exp)?;
    if exp.noise.is_none() {
        log::warn!("no noise: the L-curve of exact data usually has no clear corner");
    }
    let mut out = OutDir::create(&exp.out)?;
    let mut report = Report::default();
    header(&mut report, "lcurve", exp);
    report.kv("N, M, K", format!("{}, {}, {k}", inv.grid.n_time, inv.grid.n_space));
    report.kv("regularisation order", exp.order.index());
    write_data(&mut out, &inv)?;

    let lc = lcurve(&inv.design, &inv.data, &grid_values, exp.order)?;
    out.csv("lcurve.csv", &LCURVE_HEADER, lcurve_rows(&lc))?;
    out.csv(
        "lcurve_penalty.csv",
        &["lambda", "penalty_norm"],
        lc.points
            .iter()
            .map(|p| vec![Cell::F(p.lambda), Cell::F(p.penalty_norm)]),
    )?;
    let survey = lcurve(&inv.design, &inv.data, &SURVEY_LAMBDAS, exp.order)?;
    out.csv("lcurve_survey.csv", &LCURVE_HEADER, lcurve_rows(&survey))?;

    let c = &lc.points[lc.corner];
    out.csv(
        "corner.csv",
        &["lambda", "residual_norm", "solution_norm", "curvature", "degenerate"],
        [vec![
            Cell::F(c.lambda),
            Cell::F(c.residual_norm),
            Cell::F(c.solution_norm),
            c.curvature.into(),
            Cell::S(if lc.degenerate { "true" } else { "false" }),
        ]],
    )?;
    report.line("");
    report.kv("corner lambda", fmt_f64(c.lambda));
    if lc.degenerate {
        report.line("warning: fewer than three distinct L-curve points; corner is a fallback");
    }
    report.kv("survey corner lambda", fmt_f64(survey.corner_lambda()));

    if exp.exact_force.is_some() {
        let mut errs = Vec::with_capacity(grid_values.len());
        for &lambda in &grid_values {
            let s = inv.solve(RegularizationConfig {
                lambda,
                order: exp.order,
            })?;
            errs.push((lambda, force_error(exp, &inv, &s.b)?.unwrap_or(f64::NAN)));
        }
        out.csv(
            "errors.csv",
            &["lambda", "error"],
            errs.iter().map(|&(l, e)| vec![Cell::F(l), Cell::F(e)]),
        )?;
        if let Some(&(l, e)) = errs.iter().min_by(|a, b| a.1.total_cmp(&b.1)) {
            report.kv("min error lambda", fmt_f64(l));
            report.kv("min error", fmt_f64(e));
        }
    }
    finish(&mut out, report, started)
}
