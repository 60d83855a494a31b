use rayon::prelude::*;

use super::config::{ExactKind, RunConfig, StudyKind};
use crate::error::{Error, Result};
use crate::femops::error_norms;
use crate::mesh::{build_uniform_mesh, Rect};
use crate::mms::{
    discrete_l2_norm, discrete_linf_norm, format_sci, ErrorRow, ExactSolution, ManufacturedForcing, StudyReport,
    TrigSolution, ZeroSolution,
};
use crate::real::Real;
use crate::scheme::{FractionalStepper, PhysParams, SchemeSettings, TimeGrid, TimeState, ZeroForcing};

/// Spatial errors of one state against the exact solution at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepErrors<T> {
    pub u_l2: T,
    pub u_h1: T,
    pub p_l2: T,
    pub w_l2: T,
    pub w_h1: T,
}

pub fn state_errors<T: Real, S: ExactSolution<T>>(
    stepper: &FractionalStepper<T>,
    state: &TimeState<T>,
    exact: &S,
    t: T,
) -> Result<StepErrors<T>> {
    let (u_l2, u_h1) = error_norms(
        stepper.velocity_space(),
        &state.u,
        |x, y, c| exact.velocity(t, x, y)[c],
        |x, y, c| exact.velocity_grad(t, x, y)[c],
    )?;
    let (p_l2, _) = error_norms(
        stepper.pressure_space(),
        &state.p,
        |x, y, _| exact.pressure(t, x, y),
        |x, y, _| exact.pressure_grad(t, x, y),
    )?;
    let (w_l2, w_h1) = error_norms(
        stepper.angular_space(),
        &state.w,
        |x, y, _| exact.angular(t, x, y),
        |x, y, _| exact.angular_grad(t, x, y),
    )?;
    Ok(StepErrors { u_l2, u_h1, p_l2, w_l2, w_h1 })
}

/// Runs the scheme on `(-1, 1)^2` with `n` cells per side against `exact`,
/// starting from projections of the exact fields at `t = 0`, and returns the
/// space-time errors accumulated over all `K + 1` time levels.
pub fn run_point<T: Real, S: ExactSolution<T> + Clone>(
    n: usize,
    grid: TimeGrid<T>,
    params: PhysParams<T>,
    exact: &S,
    settings: SchemeSettings,
) -> Result<ErrorRow> {
    let mesh = build_uniform_mesh(n, Rect::reference())?;
    let stepper = FractionalStepper::new(&mesh, params, grid, settings)?;
    let t0 = grid.time(0);
    let mut state = stepper.initialize(
        |x, y, c| exact.velocity(t0, x, y)[c],
        |x, y| exact.angular(t0, x, y),
        |x, y| exact.pressure(t0, x, y),
    )?;
    let forcing = ManufacturedForcing { solution: exact.clone(), params };

    let mut per_step = Vec::with_capacity(grid.steps() + 1);
    per_step.push(state_errors(&stepper, &state, exact, t0)?);
    for k in 0..grid.steps() {
        state = stepper.advance(&state, &forcing)?;
        per_step.push(state_errors(&stepper, &state, exact, grid.time(k + 1))?);
    }

    let tau = grid.tau();
    let col = |f: fn(&StepErrors<T>) -> T| per_step.iter().map(f).collect::<Vec<T>>();
    Ok(ErrorRow {
        tau: tau.to_f64_lossy(),
        h: mesh.h().to_f64_lossy(),
        err_u_linf_l2: discrete_linf_norm(&col(|e| e.u_l2))?.to_f64_lossy(),
        err_u_l2_h1: discrete_l2_norm(&col(|e| e.u_h1), tau)?.to_f64_lossy(),
        err_p_l2_l2: discrete_l2_norm(&col(|e| e.p_l2), tau)?.to_f64_lossy(),
        err_w_linf_l2: discrete_linf_norm(&col(|e| e.w_l2))?.to_f64_lossy(),
        err_w_l2_h1: discrete_l2_norm(&col(|e| e.w_h1), tau)?.to_f64_lossy(),
    })
}

/// Energies `E^0, ..., E^K` of an unforced run started from projections of the
/// trigonometric solution at `init_time`.
pub fn energy_trace<T: Real>(
    n: usize,
    grid: TimeGrid<T>,
    params: PhysParams<T>,
    init_time: T,
    settings: SchemeSettings,
) -> Result<Vec<T>> {
    let mesh = build_uniform_mesh(n, Rect::reference())?;
    let stepper = FractionalStepper::new(&mesh, params, grid, settings)?;
    let exact = TrigSolution;
    let mut state = stepper.initialize(
        |x, y, c| ExactSolution::<T>::velocity(&exact, init_time, x, y)[c],
        |x, y| exact.angular(init_time, x, y),
        |x, y| exact.pressure(init_time, x, y),
    )?;
    let mut out = Vec::with_capacity(grid.steps() + 1);
    out.push(stepper.energy(&state));
    for _ in 0..grid.steps() {
        state = stepper.advance(&state, &ZeroForcing)?;
        out.push(stepper.energy(&state));
    }
    Ok(out)
}

/// `(tau, E^0..E^K)` per time step size.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyReport {
    pub traces: Vec<(f64, Vec<f64>)>,
}

impl EnergyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,k,energy\n");
        for (tau, trace) in &self.traces {
            for (k, e) in trace.iter().enumerate() {
                out.push_str(&format!("{},{k},{}\n", format_sci(*tau), format_sci(*e)));
            }
        }
        out
    }

    /// Largest `E^{k+1} - E^k` relative to `E^0`, over all traces.
    pub fn max_relative_increase(&self) -> f64 {
        self.traces
            .iter()
            .flat_map(|(_, tr)| {
                let e0 = tr[0].abs().max(f64::MIN_POSITIVE);
                tr.windows(2).map(move |w| (w[1] - w[0]) / e0)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StudyOutput {
    Errors(StudyReport),
    Energy(EnergyReport),
}

impl StudyOutput {
    pub fn to_csv(&self) -> String {
        match self {
            StudyOutput::Errors(r) => r.to_csv(),
            StudyOutput::Energy(r) => r.to_csv(),
        }
    }
}

/// A study that stopped early: the rows completed before the failure and the cause.
#[derive(Debug)]
pub struct StudyFailure {
    pub partial: StudyOutput,
    pub error: Error,
}

impl StudyFailure {
    /// Partial CSV followed by a comment line naming the failure.
    pub fn flagged_csv(&self) -> String {
        let mut csv = self.partial.to_csv();
        csv.push_str(&format!("# FAILED: {}\n", self.error.to_string().replace('\n', " ")));
        csv
    }
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Runs every grid point of `config`. Points are independent and may run in
/// parallel; rows come back in the sorted order fixed by the config.
pub fn run_study(config: &RunConfig) -> std::result::Result<StudyOutput, StudyFailure> {
    match config.study {
        StudyKind::EnergyTest => run_energy(config),
        _ => run_errors(config),
    }
}

fn run_errors(config: &RunConfig) -> std::result::Result<StudyOutput, StudyFailure> {
    let points: Vec<(usize, f64)> = config
        .n
        .iter()
        .flat_map(|&n| config.tau.iter().map(move |&t| (n, t)))
        .collect();
    let results: Vec<Result<ErrorRow>> = in_pool(config.threads, || {
        points
            .par_iter()
            .map(|&(n, tau)| {
                let grid = config.grid(tau)?;
                let row = match config.exact {
                    ExactKind::Trig => run_point(n, grid, config.params, &TrigSolution, config.settings),
                    ExactKind::Zero => run_point(n, grid, config.params, &ZeroSolution, config.settings),
                };
                if let Ok(r) = &row {
                    eprintln!(
                        "n={n} tau={} err_u={} err_p={} err_w={}",
                        format_sci(tau),
                        format_sci(r.err_u_linf_l2),
                        format_sci(r.err_p_l2_l2),
                        format_sci(r.err_w_linf_l2)
                    );
                }
                row
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(error) => {
                return Err(StudyFailure {
                    partial: StudyOutput::Errors(StudyReport::without_rates(rows)),
                    error,
                })
            }
        }
    }
    let report = match StudyReport::from_rows(rows.clone()) {
        Ok(r) => r,
        // zero errors (exact solution reproduced) leave the rates undefined
        Err(Error::NonPositiveError { .. }) => StudyReport::without_rates(rows),
        Err(error) => {
            return Err(StudyFailure {
                partial: StudyOutput::Errors(StudyReport::without_rates(rows)),
                error,
            })
        }
    };
    Ok(StudyOutput::Errors(report))
}

fn run_energy(config: &RunConfig) -> std::result::Result<StudyOutput, StudyFailure> {
    let n = config.n[0];
    let results: Vec<Result<(f64, Vec<f64>)>> = in_pool(config.threads, || {
        config
            .tau
            .par_iter()
            .map(|&tau| {
                let grid = config.grid(tau)?;
                let trace = energy_trace(n, grid, config.params, config.init_time, config.settings)?;
                Ok((tau, trace))
            })
            .collect()
    });
    let mut traces = Vec::new();
    for r in results {
        match r {
            Ok(t) => traces.push(t),
            Err(error) => {
                return Err(StudyFailure {
                    partial: StudyOutput::Energy(EnergyReport { traces }),
                    error,
                })
            }
        }
    }
    Ok(StudyOutput::Energy(EnergyReport { traces }))
}
