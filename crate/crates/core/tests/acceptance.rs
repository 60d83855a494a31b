//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.
//!
//! The long reference-resolution run (n = 256, T = 10) only executes when
//! `MICROPOLAR_FULL_ACCEPTANCE=1` is set; otherwise it is reported as SKIP.
//! Criteria can be selected by number: `cargo test --test acceptance -- 6 7`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use micropolar::cli::{energy_trace, run_point};
use micropolar::femops::{
    assemble_curl_scalar_to_vector, assemble_curl_vector_to_scalar, assemble_divergence, assemble_mass,
    assemble_pressure_gradient, assemble_stiffness,
};
use micropolar::mms::{convergence_rate, ErrorRow, TrigSolution};
use micropolar::scheme::{FractionalStepper, PhysParams, SchemeSettings, TimeGrid, ZeroForcing};
use micropolar::mesh::{build_uniform_mesh, Rect};
use micropolar::sparsela::SolverOptions;
use rand::rngs::StdRng;
use rand::SeedableRng;

type Outcome = (bool, String);
type Column = (&'static str, fn(&ErrorRow) -> f64);
type Criterion = (&'static str, Box<dyn Fn() -> Option<Outcome>>);

fn rates(rows: &[ErrorRow], f: fn(&ErrorRow) -> f64) -> Vec<f64> {
    rows.windows(2).map(|w| convergence_rate(f(&w[0]), f(&w[1])).unwrap()).collect()
}

fn fmt(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ")
}

fn sweep(ns: &[usize], taus: &[f64], final_time: f64) -> Vec<ErrorRow> {
    let mut rows = Vec::new();
    for &n in ns {
        for &tau in taus {
            let grid = TimeGrid::from_step(final_time, tau).unwrap();
            rows.push(run_point(n, grid, PhysParams::unit(), &TrigSolution, SchemeSettings::default()).unwrap());
        }
    }
    rows
}

fn temporal_convergence() -> Outcome {
    let rows = sweep(&[64], &[0.1, 0.05, 0.025, 0.0125, 0.00625], 1.0);
    let cols: [Column; 3] = [
        ("u", |r| r.err_u_linf_l2),
        ("p", |r| r.err_p_l2_l2),
        ("w", |r| r.err_w_linf_l2),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, f) in cols {
        let r = rates(&rows, f);
        let monotone = rows.windows(2).all(|w| f(&w[1]) < f(&w[0]));
        ok &= monotone && r.iter().all(|&x| (0.7..=1.6).contains(&x));
        detail.push(format!("{name}: [{}]{}", fmt(&r), if monotone { "" } else { " non-monotone" }));
    }
    (ok, format!("rates in [0.7, 1.6]; {}", detail.join("; ")))
}

fn reference_values() -> Option<Outcome> {
    if std::env::var("MICROPOLAR_FULL_ACCEPTANCE").as_deref() != Ok("1") {
        return None;
    }
    let row = &sweep(&[256], &[0.1], 10.0)[0];
    let checks = [
        ("u", row.err_u_linf_l2, 4.8106e-2),
        ("p", row.err_p_l2_l2, 1.0542e0),
        ("w", row.err_w_linf_l2, 9.3011e-3),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, got, want) in checks {
        let rel = (got - want).abs() / want;
        ok &= rel <= 0.05;
        detail.push(format!("{name} {got:.4e} vs {want:.4e} ({:.1}%)", 100.0 * rel));
    }
    Some((ok, detail.join("; ")))
}

fn spatial_convergence() -> Outcome {
    let rows = sweep(&[4, 8, 16], &[2.5e-4], 0.5);
    let ru = rates(&rows, |r| r.err_u_linf_l2);
    let rp = rates(&rows, |r| r.err_p_l2_l2);
    let ok = ru.iter().all(|&r| r >= 2.5) && rp.iter().all(|&r| r >= 1.6);
    (ok, format!("u rates [{}] (>= 2.5), p rates [{}] (>= 1.6)", fmt(&ru), fmt(&rp)))
}

fn energy_stability() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for tau in [0.1, 0.01] {
        let grid = TimeGrid::new(100.0 * tau, 100).unwrap();
        let e = energy_trace(32, grid, PhysParams::unit(), 1.0, SchemeSettings::default()).unwrap();
        let worst = e.windows(2).map(|w| (w[1] - w[0]) / e[0]).fold(f64::NEG_INFINITY, f64::max);
        ok &= e.windows(2).all(|w| w[1] <= w[0] + 1e-12 * e[0]);
        detail.push(format!("tau={tau}: E0={:.4e} E100={:.4e} max rel increase {worst:.2e}", e[0], e[100]));
    }
    (ok, detail.join("; "))
}

fn skew_symmetry() -> Outcome {
    let (vel, _, _) = common::spaces(8);
    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let u = common::random_field(&vel, &mut rng);
        let v = common::random_field(&vel, &mut rng);
        let (b, bound) = common::skew_pair(&vel, &u, &v);
        worst = worst.max(b / bound);
    }
    (worst <= 1e-10, format!("max |b(u,v,v)| / (|u|_H1 |v|_H1^2) = {worst:.2e} (<= 1e-10)"))
}

fn operator_identities() -> Outcome {
    let (vel, pres, ang) = common::spaces(8);
    let g = assemble_pressure_gradient(&vel, &pres).unwrap();
    let b = assemble_divergence(&vel, &pres).unwrap();
    let r = assemble_curl_scalar_to_vector(&vel, &ang).unwrap();
    let c = assemble_curl_vector_to_scalar(&ang, &vel).unwrap();
    // both identities come from integration by parts against fields vanishing on the boundary
    let (vi, wi) = (common::interior(&vel), common::interior(&ang));
    let all_p: Vec<usize> = (0..pres.n_dofs()).collect();
    let g_in = common::submatrix(&common::dense(&g), &vi, &all_p);
    let bt_in = common::submatrix(&common::dense(&b).transpose(), &vi, &all_p);
    let gb = (g_in + bt_in).amax() / g.max_abs();
    let c_in = common::submatrix(&common::dense(&c), &wi, &vi);
    let rt_in = common::submatrix(&common::dense(&r).transpose(), &wi, &vi);
    let cr = (c_in - rt_in).amax() / c.max_abs();
    let mass_sum: f64 = assemble_mass(&ang).values().iter().sum();
    let mut null = 0.0f64;
    for map in [&ang, &pres] {
        let a = assemble_stiffness(map);
        let ones = vec![1.0; map.n_dofs()];
        null = null.max(a.mul_vec(&ones).iter().fold(0.0f64, |m, v| m.max(v.abs())) / a.max_abs());
    }
    let ok = gb <= 1e-12 && cr <= 1e-12 && (mass_sum - 4.0).abs() <= 1e-12 && null <= 1e-12;
    (
        ok,
        format!("interior |G+B^T|/max {gb:.1e}, |C-R^T|/max {cr:.1e}, sum M = {mass_sum:.15}, |A 1|/max {null:.1e}"),
    )
}

fn inf_sup() -> Outcome {
    let (constant_mode, beta) = common::inf_sup(4);
    (
        beta > 0.05 && constant_mode < 1e-8,
        format!("beta = {beta:.4} (> 0.05), constant-mode singular value {constant_mode:.1e}"),
    )
}

fn forcing_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(77);
    let mut sets = vec![PhysParams::unit()];
    for _ in 0..3 {
        sets.push(common::random_params(&mut rng));
    }
    let errs: Vec<f64> = sets
        .iter()
        .map(|p| common::fd_forcing_relative_error(&TrigSolution, p, 1000, 1e-5, &mut rng))
        .collect();
    (
        errs.iter().all(|&e| e <= 1e-6),
        format!("relative deviation per parameter set [{}] (<= 1e-6)", errs.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(", ")),
    )
}

fn zero_fixed_point() -> Outcome {
    let mesh = build_uniform_mesh(8, Rect::reference()).unwrap();
    let settings = SchemeSettings::default();
    let tol = SolverOptions::default().tol;
    let stepper = FractionalStepper::new(&mesh, PhysParams::unit(), TimeGrid::new(1.0, 10).unwrap(), settings).unwrap();
    let mut state = stepper.zero_state();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        state = stepper.advance(&state, &ZeroForcing).unwrap();
        worst = worst.max(state.u.max_abs()).max(state.w.max_abs()).max(state.p.max_abs());
    }
    (worst <= 10.0 * tol, format!("max |iterate| = {worst:.1e} (<= {:.0e})", 10.0 * tol))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 temporal convergence", Box::new(|| Some(temporal_convergence()))),
        ("2 reference-resolution values", Box::new(reference_values)),
        ("3 spatial convergence", Box::new(|| Some(spatial_convergence()))),
        ("4 energy stability", Box::new(|| Some(energy_stability()))),
        ("5 skew-symmetric convection", Box::new(|| Some(skew_symmetry()))),
        ("6 operator identities", Box::new(|| Some(operator_identities()))),
        ("7 discrete inf-sup", Box::new(|| Some(inf_sup()))),
        ("8 forcing finite-difference oracle", Box::new(|| Some(forcing_oracle()))),
        ("9 zero fixed point", Box::new(|| Some(zero_fixed_point()))),
    ];
    // optional positional filters select criteria by number; cargo's own flags are ignored
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in &criteria {
        let number = name.split(' ').next().unwrap_or_default();
        if !only.is_empty() && !only.iter().any(|o| o == number) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(Some((true, detail))) => println!("PASS  criterion {name}: {detail} [{secs:.1}s]"),
            Ok(Some((false, detail))) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} [{secs:.1}s]");
            }
            Ok(None) => println!("SKIP  criterion {name}: set MICROPOLAR_FULL_ACCEPTANCE=1 to run (hours)"),
            Err(_) => {
                failed += 1;
                println!("FAIL  criterion {name}: panicked [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
