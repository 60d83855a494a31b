//! Decoupled fractional time stepping for the planar micropolar equations.
//!
//! One step from `t_k` to `t_{k+1}` runs four stages in order:
//!
//! 1. pressure extrapolation `p# = 2 p^k - p^{k-1}` (`p# = p^0` on the first step);
//! 2. a linear velocity solve with the extrapolated pressure, convection
//!    linearized about `u^k` and the angular velocity `w^k` lagged;
//! 3. a pressure-Poisson correction `<grad dp, grad r> = <u^{k+1}, grad r> / tau`;
//! 4. an angular velocity solve advected by the new `u^{k+1}`.
//!
//! Velocity and angular velocity are discretized with continuous Q2 elements,
//! the pressure with continuous Q1 elements and zero mean.

use super::params::{PhysParams, TimeGrid};
use crate::error::{Error, Result};
use crate::femops::{
    assemble_convection_into, assemble_curl_scalar_to_vector, assemble_curl_vector_to_scalar, assemble_load,
    assemble_mass, assemble_pressure_gradient, assemble_stiffness, basis_integrals, l2_project, FieldVector,
};
use crate::mesh::{build_dof_map, DofMap, Mesh};
use crate::real::Real;
use crate::sparsela::{
    cg_solve_deflated, constrain_matrix, gmres_solve, subtract_mean, CsrMatrix, Jacobi, PreconditionerKind,
    SolveReport, SolverOptions,
};

/// External force `f` and moment `g`.
pub trait Forcing<T>: Sync {
    fn momentum(&self, t: T, x: T, y: T) -> [T; 2];
    fn moment(&self, t: T, x: T, y: T) -> T;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroForcing;

impl<T: Real> Forcing<T> for ZeroForcing {
    fn momentum(&self, _: T, _: T, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn moment(&self, _: T, _: T, _: T) -> T {
        T::zero()
    }
}

/// Forcing from a pair of closures.
pub struct FnForcing<F, G> {
    pub f: F,
    pub g: G,
}

impl<T, F, G> Forcing<T> for FnForcing<F, G>
where
    F: Fn(T, T, T) -> [T; 2] + Sync,
    G: Fn(T, T, T) -> T + Sync,
{
    fn momentum(&self, t: T, x: T, y: T) -> [T; 2] {
        (self.f)(t, x, y)
    }
    fn moment(&self, t: T, x: T, y: T) -> T {
        (self.g)(t, x, y)
    }
}

/// Discrete solution at step `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeState<T> {
    pub k: usize,
    pub u: FieldVector<T>,
    pub w: FieldVector<T>,
    pub p: FieldVector<T>,
    /// `p^{k-1}`; equal to `p` at `k = 0`.
    pub p_prev: FieldVector<T>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SchemeSettings {
    pub solver: SolverOptions,
    /// Preconditioner for the velocity and angular velocity systems. The
    /// pressure Poisson solve always uses Jacobi.
    pub precond: PreconditionerKind,
}

/// Spaces and cached operators for a fixed mesh, time grid and parameter set.
pub struct FractionalStepper<T: Real> {
    params: PhysParams<T>,
    grid: TimeGrid<T>,
    settings: SchemeSettings,
    vel: DofMap<T>,
    ang: DofMap<T>,
    pres: DofMap<T>,
    /// Scalar Q2 mass and stiffness; the velocity blocks are copies of these.
    mass: CsrMatrix<T>,
    stiffness: CsrMatrix<T>,
    pres_mass: CsrMatrix<T>,
    pres_stiffness: CsrMatrix<T>,
    pres_jacobi: Jacobi<T>,
    pres_integrals: Vec<T>,
    pres_ones: Vec<T>,
    grad: CsrMatrix<T>,
    rot_w: CsrMatrix<T>,
    rot_u: CsrMatrix<T>,
}

impl<T: Real> FractionalStepper<T> {
    pub fn new(mesh: &Mesh<T>, params: PhysParams<T>, grid: TimeGrid<T>, settings: SchemeSettings) -> Result<Self> {
        params.validate()?;
        let vel = build_dof_map(mesh, 2, 2)?;
        let ang = build_dof_map(mesh, 2, 1)?;
        let pres = build_dof_map(mesh, 1, 1)?;
        let mass = assemble_mass(&ang);
        let stiffness = assemble_stiffness(&ang);
        let pres_mass = assemble_mass(&pres);
        let pres_stiffness = assemble_stiffness(&pres);
        let grad = assemble_pressure_gradient(&vel, &pres)?;
        let rot_w = assemble_curl_scalar_to_vector(&vel, &ang)?;
        let rot_u = assemble_curl_vector_to_scalar(&ang, &vel)?;
        Ok(Self {
            pres_jacobi: Jacobi::new(&pres_stiffness),
            pres_integrals: basis_integrals(&pres),
            pres_ones: vec![T::one(); pres.n_dofs()],
            params,
            grid,
            settings,
            vel,
            ang,
            pres,
            mass,
            stiffness,
            pres_mass,
            pres_stiffness,
            grad,
            rot_w,
            rot_u,
        })
    }

    pub fn params(&self) -> &PhysParams<T> {
        &self.params
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn tau(&self) -> T {
        self.grid.tau()
    }

    pub fn velocity_space(&self) -> &DofMap<T> {
        &self.vel
    }

    pub fn angular_space(&self) -> &DofMap<T> {
        &self.ang
    }

    pub fn pressure_space(&self) -> &DofMap<T> {
        &self.pres
    }

    /// Scalar Q2 mass matrix.
    pub fn mass(&self) -> &CsrMatrix<T> {
        &self.mass
    }

    /// Scalar Q2 stiffness matrix.
    pub fn stiffness(&self) -> &CsrMatrix<T> {
        &self.stiffness
    }

    pub fn pressure_mass(&self) -> &CsrMatrix<T> {
        &self.pres_mass
    }

    pub fn pressure_stiffness(&self) -> &CsrMatrix<T> {
        &self.pres_stiffness
    }

    /// `<grad p, v>`
    pub fn pressure_gradient(&self) -> &CsrMatrix<T> {
        &self.grad
    }

    /// `<rot w, v>`
    pub fn curl_scalar_to_vector(&self) -> &CsrMatrix<T> {
        &self.rot_w
    }

    /// `<rot u, z>`
    pub fn curl_vector_to_scalar(&self) -> &CsrMatrix<T> {
        &self.rot_u
    }

    /// Zero state at `k = 0`.
    pub fn zero_state(&self) -> TimeState<T> {
        let p = FieldVector::zeros(&self.pres);
        TimeState {
            k: 0,
            u: FieldVector::zeros(&self.vel),
            w: FieldVector::zeros(&self.ang),
            p_prev: p.clone(),
            p,
        }
    }

    /// Initial state from `u0(x, y, component)`, `w0(x, y)` and `p0(x, y)`.
    ///
    /// Velocities are L2-projected and their boundary values zeroed; the
    /// pressure is L2-projected and shifted to zero mean.
    pub fn initialize<U, W, P>(&self, u0: U, w0: W, p0: P) -> Result<TimeState<T>>
    where
        U: Fn(T, T, usize) -> T,
        W: Fn(T, T) -> T,
        P: Fn(T, T) -> T,
    {
        let opts = self.projection_options();
        let mut u = l2_project(&self.vel, u0, &opts)?;
        zero_boundary(&mut u, &self.vel);
        let mut w = l2_project(&self.ang, |x, y, _| w0(x, y), &opts)?;
        zero_boundary(&mut w, &self.ang);
        let mut p = l2_project(&self.pres, |x, y, _| p0(x, y), &opts)?;
        subtract_mean(p.values_mut(), &self.pres_integrals);
        Ok(TimeState {
            k: 0,
            u,
            w,
            p_prev: p.clone(),
            p,
        })
    }

    /// State at `k = 0` from fields that already live in the discrete spaces.
    pub fn state_from_fields(&self, u: FieldVector<T>, w: FieldVector<T>, p: FieldVector<T>) -> Result<TimeState<T>> {
        u.check(&self.vel)?;
        w.check(&self.ang)?;
        p.check(&self.pres)?;
        let mut p = p;
        subtract_mean(p.values_mut(), &self.pres_integrals);
        Ok(TimeState {
            k: 0,
            u,
            w,
            p_prev: p.clone(),
            p,
        })
    }

    fn projection_options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.settings.solver.tol.min(1e-12),
            ..self.settings.solver
        }
    }

    /// `p#`: `p^0` on the first step, `2 p^k - p^{k-1}` afterwards.
    pub fn extrapolate_pressure(&self, state: &TimeState<T>) -> FieldVector<T> {
        if state.k == 0 {
            return state.p.clone();
        }
        let mut out = state.p.clone();
        let two = T::lit(2.0);
        for (o, &prev) in out.values_mut().iter_mut().zip(state.p_prev.values()) {
            *o = two * *o - prev;
        }
        out
    }

    /// Scalar block of the velocity operator `M / tau + N(u^k) + nu0 A`, unconstrained.
    pub fn velocity_operator(&self, u_adv: &FieldVector<T>) -> Result<CsrMatrix<T>> {
        let conv = self.convection(u_adv)?;
        Ok(CsrMatrix::linear_combination(&[
            (T::one() / self.tau(), &self.mass),
            (T::one(), &conv),
            (self.params.nu0(), &self.stiffness),
        ]))
    }

    /// Right-hand side of the velocity step (all components, unconstrained).
    pub fn velocity_rhs<F: Forcing<T> + ?Sized>(
        &self,
        state: &TimeState<T>,
        p_sharp: &FieldVector<T>,
        forcing: &F,
    ) -> Result<Vec<T>> {
        p_sharp.check(&self.pres)?;
        let t1 = self.grid.time(state.k + 1);
        let mut rhs = assemble_load(&self.vel, |x, y, c| forcing.momentum(t1, x, y)[c]);
        let gp = self.grad.mul_vec(p_sharp.values());
        let rw = self.rot_w.mul_vec(state.w.values());
        let two_nur = T::lit(2.0) * self.params.nu_r;
        let inv_tau = T::one() / self.tau();
        let s = self.ang.n_dofs();
        for c in 0..2 {
            let mu = self.mass.mul_vec(state.u.component(c));
            for (i, &m) in mu.iter().enumerate() {
                let d = c * s + i;
                rhs[d] += inv_tau * m + two_nur * rw[d] - gp[d];
            }
        }
        Ok(rhs)
    }

    /// Linear velocity update; `u^{k+1}` vanishes on the boundary.
    pub fn velocity_step<F: Forcing<T> + ?Sized>(
        &self,
        state: &TimeState<T>,
        p_sharp: &FieldVector<T>,
        forcing: &F,
    ) -> Result<FieldVector<T>> {
        self.check_state(state)?;
        let mut op = self.velocity_operator(&state.u)?;
        let rhs = self.velocity_rhs(state, p_sharp, forcing)?;
        let boundary: Vec<usize> = self.ang.boundary_dofs().to_vec();
        constrain_matrix(&mut op, &boundary)?;
        let pc = self.settings.precond.build(&op);
        let s = self.ang.n_dofs();
        let mut u = state.u.clone();
        for c in 0..2 {
            let mut b = rhs[c * s..(c + 1) * s].to_vec();
            for &d in &boundary {
                b[d] = T::zero();
            }
            let x = u.component_mut(c);
            for &d in &boundary {
                x[d] = T::zero();
            }
            let rep = gmres_solve(&op, &b, x, &self.settings.solver, pc.as_ref());
            ensure_converged("velocity", rep)?;
            for &d in &boundary {
                x[d] = T::zero();
            }
        }
        Ok(u)
    }

    /// Pressure correction; returns `p^{k+1}` with zero mean.
    pub fn pressure_step(&self, state: &TimeState<T>, u_next: &FieldVector<T>) -> Result<FieldVector<T>> {
        u_next.check(&self.vel)?;
        state.p.check(&self.pres)?;
        let mut rhs = self.grad.tr_mul_vec(u_next.values());
        let inv_tau = T::one() / self.tau();
        rhs.iter_mut().for_each(|v| *v *= inv_tau);

        // <u, grad 1> = 0, so the right-hand side must be orthogonal to constants
        // up to rounding of the uncancelled products |G|^T |u|
        let total: T = rhs.iter().copied().sum();
        let scale: T = (0..self.grad.nrows())
            .map(|r| u_next.values()[r].abs() * self.grad.row(r).1.iter().map(|g| g.abs()).sum::<T>())
            .sum::<T>()
            * inv_tau;
        if total.abs() > T::epsilon().sqrt() * scale {
            return Err(Error::SpaceMismatch(format!(
                "pressure right-hand side not orthogonal to constants: sum {total}, scale {scale}"
            )));
        }

        let mut dp = vec![T::zero(); self.pres.n_dofs()];
        let rep = cg_solve_deflated(
            &self.pres_stiffness,
            &rhs,
            &mut dp,
            &self.pres_ones,
            &self.settings.solver,
            &self.pres_jacobi,
        );
        ensure_converged("pressure", rep)?;
        let mut p = state.p.clone();
        for (pi, d) in p.values_mut().iter_mut().zip(dp) {
            *pi += d;
        }
        subtract_mean(p.values_mut(), &self.pres_integrals);
        Ok(p)
    }

    /// Angular velocity operator `(j / tau + 4 nu_r) M + j N(u) + c1 A`, unconstrained.
    pub fn angular_operator(&self, u_adv: &FieldVector<T>) -> Result<CsrMatrix<T>> {
        let conv = self.convection(u_adv)?;
        let p = &self.params;
        Ok(CsrMatrix::linear_combination(&[
            (p.j / self.tau() + T::lit(4.0) * p.nu_r, &self.mass),
            (p.j, &conv),
            (p.c1(), &self.stiffness),
        ]))
    }

    pub fn angular_rhs<F: Forcing<T> + ?Sized>(
        &self,
        state: &TimeState<T>,
        u_next: &FieldVector<T>,
        forcing: &F,
    ) -> Result<Vec<T>> {
        u_next.check(&self.vel)?;
        let t1 = self.grid.time(state.k + 1);
        let mut rhs = assemble_load(&self.ang, |x, y, _| forcing.moment(t1, x, y));
        let mw = self.mass.mul_vec(state.w.values());
        let ru = self.rot_u.mul_vec(u_next.values());
        let jt = self.params.j / self.tau();
        let two_nur = T::lit(2.0) * self.params.nu_r;
        for (i, r) in rhs.iter_mut().enumerate() {
            *r += jt * mw[i] + two_nur * ru[i];
        }
        Ok(rhs)
    }

    /// Angular velocity update using the new linear velocity.
    pub fn angular_step<F: Forcing<T> + ?Sized>(
        &self,
        state: &TimeState<T>,
        u_next: &FieldVector<T>,
        forcing: &F,
    ) -> Result<FieldVector<T>> {
        self.check_state(state)?;
        let mut op = self.angular_operator(u_next)?;
        let mut rhs = self.angular_rhs(state, u_next, forcing)?;
        let boundary = self.ang.boundary_dofs();
        constrain_matrix(&mut op, boundary)?;
        for &d in boundary {
            rhs[d] = T::zero();
        }
        let pc = self.settings.precond.build(&op);
        let mut w = state.w.clone();
        for &d in boundary {
            w.values_mut()[d] = T::zero();
        }
        let rep = gmres_solve(&op, &rhs, w.values_mut(), &self.settings.solver, pc.as_ref());
        ensure_converged("angular velocity", rep)?;
        for &d in boundary {
            w.values_mut()[d] = T::zero();
        }
        Ok(w)
    }

    /// One full step `k -> k + 1`.
    pub fn advance<F: Forcing<T> + ?Sized>(&self, state: &TimeState<T>, forcing: &F) -> Result<TimeState<T>> {
        if state.k >= self.grid.steps() {
            return Err(Error::InvalidTimeGrid(format!(
                "cannot advance past step {} of {}",
                state.k,
                self.grid.steps()
            )));
        }
        let p_sharp = self.extrapolate_pressure(state);
        let u = self.velocity_step(state, &p_sharp, forcing)?;
        let p = self.pressure_step(state, &u)?;
        let w = self.angular_step(state, &u, forcing)?;
        Ok(TimeState {
            k: state.k + 1,
            u,
            w,
            p,
            p_prev: state.p.clone(),
        })
    }

    /// `|u|^2 + j |w|^2 + tau^2 |grad p|^2`.
    pub fn energy(&self, state: &TimeState<T>) -> T {
        let ku: T = (0..2)
            .map(|c| self.mass.bilinear(state.u.component(c), state.u.component(c)))
            .sum();
        let kw = self.mass.bilinear(state.w.values(), state.w.values());
        let gp = self.pres_stiffness.bilinear(state.p.values(), state.p.values());
        let tau = self.tau();
        ku + self.params.j * kw + tau * tau * gp
    }

    fn convection(&self, u_adv: &FieldVector<T>) -> Result<CsrMatrix<T>> {
        let mut conv = self.mass.clone();
        assemble_convection_into(&mut conv, u_adv, &self.vel, &self.ang)?;
        Ok(conv)
    }

    fn check_state(&self, state: &TimeState<T>) -> Result<()> {
        state.u.check(&self.vel)?;
        state.w.check(&self.ang)?;
        state.p.check(&self.pres)?;
        state.p_prev.check(&self.pres)
    }
}

fn zero_boundary<T: Real>(f: &mut FieldVector<T>, map: &DofMap<T>) {
    for &d in map.boundary_dofs() {
        f.values_mut()[d] = T::zero();
    }
}

fn ensure_converged(stage: &'static str, report: SolveReport) -> Result<()> {
    if report.converged {
        Ok(())
    } else {
        Err(Error::NotConverged { stage, report })
    }
}
