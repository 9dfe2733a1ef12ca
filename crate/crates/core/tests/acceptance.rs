//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test --test acceptance -- --nocapture` or as part
//! of `cargo test --workspace`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use stringforce::bem::{
    march, mesh_difference, solve_direct, solve_global, DirectMethod, DirectProblem, TraceComponent,
};
use stringforce::benchmark::{self, Benchmark};
use stringforce::inverse::{
    analytic_coefficients, assemble_design_matrix, default_lambda_grid, eigenvalues, error_norm, lcurve,
    normal_condition_number, reconstruct_force, RegularizationConfig, RegularizationOrder, SURVEY_LAMBDAS,
};
use stringforce::linalg::norm2;
use stringforce::model::{BoundaryKind, ControlKind, Grid};
use stringforce::noise::{perturb, NoiseSpec};
use stringforce::pipeline::{force_grid, interior_grid, Inversion};

const SEED: u64 = 20_240_601;
const NOISE_PCT: f64 = 1.0;
const MODES: usize = 20;
const N: usize = 80;

const TABLE_NEUMANN: [[f64; 3]; 3] = [[82.62, 82.25, 82.28], [371.6, 367.0, 365.7], [1.42e3, 1.55e3, 1.54e3]];
const TABLE_DIRICHLET: [[f64; 3]; 3] = [
    [3.55e3, 3.62e3, 3.68e3],
    [6.81e4, 6.84e4, 6.96e4],
    [1.21e6, 1.17e6, 1.18e6],
];
const TABLE_TOL: f64 = 0.02;
const B1_TOL: f64 = 0.02;
const TRUNCATION_MARGIN: f64 = 1.2;
const ORACLE_TOL: f64 = 2e-2;
const ORACLE_MODES: usize = 200;
/// Inter-mesh differences below this are rounding noise; their ordering
/// carries no information.
const ROUNDING_FLOOR: f64 = 1e-12;
const EQUIVALENCE_TOL: f64 = 1e-9;
const GRADIENT_TOL: f64 = 1e-8;
const U_EXACT_TOL: f64 = 5e-2;
const U_NOISY_TOL: f64 = 1e-1;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn unit_grid(n: usize) -> Grid {
    Grid::from_dimensions(1.0, 1.0, 1.0, n, n).unwrap()
}

fn force_error(b: &Benchmark, inv: &Inversion, coeffs: &[f64]) -> f64 {
    let xs = force_grid(b.spec.length);
    let exact = b.exact_force.as_ref().unwrap().sample(&xs);
    error_norm(&inv.force(coeffs, &xs), &exact).unwrap()
}

fn prepare(b: &Benchmark, noise: Option<NoiseSpec>) -> Inversion {
    let grid = Grid::new(&b.spec, N, N).unwrap();
    Inversion::prepare(&b.spec, b.control, &grid, MODES, noise, DirectMethod::Marching).unwrap()
}

fn noisy() -> Option<NoiseSpec> {
    Some(NoiseSpec::new(NOISE_PCT, SEED))
}

fn table(control: ControlKind, want: &[[f64; 3]; 3]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cells = Vec::new();
    for (row, k) in [5, 10, 20].into_iter().enumerate() {
        for (col, n) in [20, 40, 80].into_iter().enumerate() {
            let q = assemble_design_matrix(&unit_grid(n), k, control, BoundaryKind::Dirichlet).unwrap();
            let got = normal_condition_number(&q).unwrap();
            let rel = (got - want[row][col]).abs() / want[row][col];
            worst = worst.max(rel);
            cells.push(format!("{got:.4e}"));
        }
    }
    outcome(
        worst <= TABLE_TOL,
        format!(
            "worst relative deviation {:.2}% (cond(Q^T Q): {})",
            100.0 * worst,
            cells.join(", ")
        ),
    )
}

fn criterion_3() -> Outcome {
    let s = analytic_coefficients(ControlKind::Neumann, 20);
    let c = analytic_coefficients(ControlKind::Dirichlet, 1);
    let four_digits = |x: f64, want: f64| format!("{x:.4}") == format!("{want:.4}") || (x - want).abs() < 5e-4;
    let evens_zero = s.iter().skip(1).step_by(2).all(|&v| v == 0.0);
    outcome(
        four_digits(s[0], 7.8791) && four_digits(c[0], 6.8242) && evens_zero,
        format!(
            "sine b1 = {:.6}, cosine b1 = {:.6}, even sine coefficients exactly zero: {evens_zero}",
            s[0], c[0]
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for b in [benchmark::sine(), benchmark::cosine()] {
        let inv = prepare(&b, None);
        let sol = inv.solve(RegularizationConfig::zeroth(0.0)).unwrap();
        let want = analytic_coefficients(b.control, 1)[0];
        let b1_ok = (sol.b[0] - want).abs() <= B1_TOL * want;

        let err = force_error(&b, &inv, &sol.b);
        let xs = force_grid(1.0);
        let truncated = reconstruct_force(
            &analytic_coefficients(b.control, 5),
            &eigenvalues(b.control, 5, 1.0, BoundaryKind::Dirichlet),
            b.control,
            &xs,
        );
        let trunc_err = error_norm(&truncated, &b.exact_force.as_ref().unwrap().sample(&xs)).unwrap();
        let err_ok = err < TRUNCATION_MARGIN * trunc_err;
        pass &= b1_ok && err_ok;
        parts.push(format!(
            "{}: b1 = {:.5} (analytic {want:.5}), ||f - f_exact|| = {err:.4} vs K=5 truncation {trunc_err:.4}",
            b.control, sol.b[0]
        ));
    }
    outcome(pass, parts.join("; "))
}

/// Element means of `q0 - w_x(0, t)` with the analytic sine coefficients.
fn flux_oracle(grid: &Grid) -> Vec<f64> {
    let b = analytic_coefficients(ControlKind::Neumann, ORACLE_MODES);
    let lam = eigenvalues(ControlKind::Neumann, ORACLE_MODES, 1.0, BoundaryKind::Dirichlet);
    let dt = grid.dt;
    (1..=grid.n_time)
        .map(|n| {
            let (t0, t1) = (grid.t(n - 1), grid.t(n));
            let w: f64 = b
                .iter()
                .zip(&lam)
                .map(|(bk, lk)| bk * (1.0 - ((lk * t1).sin() - (lk * t0).sin()) / (lk * dt)) / lk)
                .sum();
            PI - std::f64::consts::SQRT_2 * w
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (b, comp) in [
        (benchmark::sine(), TraceComponent::Dv0),
        (benchmark::cosine(), TraceComponent::V0),
    ] {
        let traces: Vec<_> = [20, 40, 80]
            .iter()
            .map(|&n| {
                let grid = Grid::new(&b.spec, n, n).unwrap();
                let p = DirectProblem::for_control(&b.spec, b.control, &grid);
                solve_direct(&p, DirectMethod::Marching).unwrap().traces
            })
            .collect();
        let d1 = mesh_difference(&traces[0], &traces[1], comp).unwrap();
        let d2 = mesh_difference(&traces[1], &traces[2], comp).unwrap();
        let at_rounding = d1 <= ROUNDING_FLOOR && d2 <= ROUNDING_FLOOR;
        pass &= d2 < d1 || at_rounding;
        parts.push(format!(
            "{comp:?}: diff(20,40) = {d1:.3e}, diff(40,80) = {d2:.3e}{}",
            if at_rounding {
                " (mesh-independent to rounding)"
            } else {
                ""
            }
        ));
        if comp == TraceComponent::Dv0 {
            let oracle = flux_oracle(&unit_grid(80));
            let dev = traces[2]
                .dv0
                .iter()
                .zip(&oracle)
                .map(|(a, o)| (a - o).abs())
                .fold(0.0, f64::max);
            pass &= dev <= ORACLE_TOL;
            parts.push(format!("dv0 vs series oracle (N=80) max-abs {dev:.3e}"));
        }
    }
    outcome(pass, parts.join("; "))
}

fn sweep_lambdas() -> Vec<f64> {
    let mut l = default_lambda_grid();
    l.extend_from_slice(&SURVEY_LAMBDAS);
    l.sort_by(f64::total_cmp);
    l.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    l
}

fn criterion_6() -> Outcome {
    let b = benchmark::sine();
    let inv = prepare(&b, noisy());
    let err_at = |lambda: f64| force_error(&b, &inv, &inv.solve(RegularizationConfig::zeroth(lambda)).unwrap().b);
    let (e0, e_mid, e_big) = (err_at(0.0), err_at(0.1), err_at(10.0));
    let (argmin, emin) = sweep_lambdas()
        .into_iter()
        .map(|l| (l, err_at(l)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let pass = e_mid < e0 && e_mid < e_big && (1e-2..=1.0).contains(&argmin);
    outcome(
        pass,
        format!(
            "e(0) = {e0:.4}, e(0.1) = {e_mid:.4}, e(10) = {e_big:.4}; sweep minimum {emin:.4} at lambda = {argmin:.3e}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (b, lo, hi) in [(benchmark::sine(), 1e-2, 1.0), (benchmark::cosine(), 1e-4, 1e-1)] {
        let inv = prepare(&b, noisy());
        let lc = lcurve(
            &inv.design,
            &inv.data,
            &default_lambda_grid(),
            RegularizationOrder::Zeroth,
        )
        .unwrap();
        let corner = lc.corner_lambda();
        pass &= !lc.degenerate && (lo..=hi).contains(&corner);
        parts.push(format!(
            "{}: corner lambda = {corner:.3e} (bracket [{lo:e}, {hi:e}])",
            b.control
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut checks: Vec<(String, bool)> = Vec::new();

    // Marching and global BEM.
    let mut worst: f64 = 0.0;
    for b in [benchmark::sine(), benchmark::cosine()] {
        let grid = Grid::new(&b.spec, N, N).unwrap();
        let p = DirectProblem::for_control(&b.spec, b.control, &grid);
        worst = worst.max(march(&p).unwrap().max_abs_diff(&solve_global(&p).unwrap()));
    }
    checks.push((format!("march/global {worst:.2e}"), worst <= EQUIVALENCE_TOL));

    // Normal-equation gradient.
    let mut worst_grad: f64 = 0.0;
    for b in [benchmark::sine(), benchmark::cosine()] {
        let inv = prepare(&b, noisy());
        for order in [
            RegularizationOrder::Zeroth,
            RegularizationOrder::First,
            RegularizationOrder::Second,
        ] {
            for lambda in [0.0, 1e-3, 0.1, 10.0] {
                let s = inv.solve(RegularizationConfig { lambda, order }).unwrap();
                let q = &inv.design.entries;
                let r = stringforce::inverse::difference_operator(order, MODES);
                let qb = q.mul_vec(&s.b).unwrap();
                let mut grad = q.tr_mul_vec(&qb).unwrap();
                let qtd = q.tr_mul_vec(&inv.data).unwrap();
                if r.rows() > 0 {
                    let rrb = r.tr_mul_vec(&r.mul_vec(&s.b).unwrap()).unwrap();
                    for (g, v) in grad.iter_mut().zip(rrb) {
                        *g += lambda * v;
                    }
                }
                for (g, v) in grad.iter_mut().zip(&qtd) {
                    *g -= v;
                }
                worst_grad = worst_grad.max(norm2(&grad) / (norm2(&qtd) + 1.0));
            }
        }
    }
    checks.push((format!("gradient {worst_grad:.2e}"), worst_grad <= GRADIENT_TOL));

    // Zero data.
    let z = benchmark::zero();
    let zinv = Inversion::prepare(&z.spec, z.control, &unit_grid(40), 10, None, DirectMethod::Marching).unwrap();
    let zsol = zinv.solve(RegularizationConfig::zeroth(0.0)).unwrap();
    let zero_ok = zinv.direct.traces.max_abs_diff(&zinv.direct.traces.scaled(0.0)) == 0.0
        && zinv.data.iter().all(|&v| v == 0.0)
        && zsol.b.iter().all(|&v| v == 0.0);
    checks.push(("zero data".into(), zero_ok));

    // Noise determinism.
    let clean = vec![PI; N];
    let det_ok = perturb(&clean, NoiseSpec::new(1.0, SEED)) == perturb(&clean, NoiseSpec::new(1.0, SEED));
    checks.push(("noise determinism".into(), det_ok));

    // Lambda monotonicity on every L-curve run.
    let mut mono_ok = true;
    for b in [benchmark::sine(), benchmark::cosine()] {
        let inv = prepare(&b, noisy());
        for order in [
            RegularizationOrder::Zeroth,
            RegularizationOrder::First,
            RegularizationOrder::Second,
        ] {
            let lc = lcurve(&inv.design, &inv.data, &sweep_lambdas(), order).unwrap();
            for w in lc.points.windows(2) {
                mono_ok &= w[1].residual_norm >= w[0].residual_norm * (1.0 - 1e-10);
                mono_ok &= w[1].penalty_norm <= w[0].penalty_norm * (1.0 + 1e-10);
            }
        }
    }
    checks.push(("lambda monotonicity".into(), mono_ok));

    let pass = checks.iter().all(|c| c.1);
    let detail = checks
        .iter()
        .map(|(s, ok)| format!("{s}: {}", if *ok { "ok" } else { "FAILED" }))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn displacement_error(b: &Benchmark, noise: Option<NoiseSpec>, lambda: f64) -> f64 {
    let inv = prepare(b, noise);
    let sol = inv.solve(RegularizationConfig::zeroth(lambda)).unwrap();
    let (xs, steps) = interior_grid(&inv.grid, 20);
    let u = inv.displacement(&sol.b, &xs, &steps).unwrap();
    u.iter()
        .map(|(x, t, v)| (v - b.exact_displacement_at(x, t).unwrap()).abs())
        .fold(0.0, f64::max)
}

fn criterion_9() -> Outcome {
    let sine = benchmark::sine();
    let exact = displacement_error(&sine, None, 0.0);
    let noisy_err = displacement_error(&sine, noisy(), 0.1);
    let cosine_exact = displacement_error(&benchmark::cosine(), None, 0.0);
    outcome(
        exact <= U_EXACT_TOL && noisy_err <= U_NOISY_TOL && cosine_exact <= U_EXACT_TOL,
        format!(
            "max |u - u_exact|: exact data {exact:.4e}, 1% noise at lambda=0.1 {noisy_err:.4e}, Dirichlet control exact data {cosine_exact:.4e}"
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [Criterion; 9] = [
        ("1 condition numbers, Neumann control", || {
            table(ControlKind::Neumann, &TABLE_NEUMANN)
        }),
        ("2 condition numbers, Dirichlet control", || {
            table(ControlKind::Dirichlet, &TABLE_DIRICHLET)
        }),
        ("3 analytic coefficients", criterion_3),
        ("4 exact-data recovery", criterion_4),
        ("5 BEM convergence", criterion_5),
        ("6 noise stability ordering", criterion_6),
        ("7 L-curve corner", criterion_7),
        ("8 property suites", criterion_8),
        ("9 displacement stability", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} [{name}] {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.2}s (seed {SEED})",
        9 - failed,
        9,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
