//! Closed-form manufactured solutions and the forcings they induce.

use crate::real::Real;
use crate::scheme::PhysParams;

/// Exact fields `(u, p, w)` with the spatial and temporal derivatives needed to
/// build forcings and measure errors.
///
/// `velocity_grad(..)[c]` is the gradient of component `c`.
pub trait ExactSolution<T: Real>: Sync {
    fn velocity(&self, t: T, x: T, y: T) -> [T; 2];
    fn velocity_grad(&self, t: T, x: T, y: T) -> [[T; 2]; 2];
    fn velocity_dt(&self, t: T, x: T, y: T) -> [T; 2];
    fn velocity_laplacian(&self, t: T, x: T, y: T) -> [T; 2];
    fn pressure(&self, t: T, x: T, y: T) -> T;
    fn pressure_grad(&self, t: T, x: T, y: T) -> [T; 2];
    fn angular(&self, t: T, x: T, y: T) -> T;
    fn angular_grad(&self, t: T, x: T, y: T) -> [T; 2];
    fn angular_dt(&self, t: T, x: T, y: T) -> T;
    fn angular_laplacian(&self, t: T, x: T, y: T) -> T;
}

/// The trigonometric solution on `(-1, 1)^2`:
///
/// ```text
/// u = pi sin t (sin^2(pi x) sin(2 pi y), -sin(2 pi x) sin^2(pi y))
/// p = sin t cos(pi x) sin(pi y)
/// w = pi sin t sin^2(pi x) sin^2(pi y)
/// ```
#[derive(Debug, Clone, Copy, Default)]
pub struct TrigSolution;

/// `a(s) = sin^2(pi s)` and `b(s) = sin(2 pi s)` with two derivatives each.
struct Profiles<T> {
    a: [T; 3],
    b: [T; 3],
}

impl<T: Real> Profiles<T> {
    fn at(s: T) -> Self {
        let pi = T::PI();
        let two_pi = pi + pi;
        let sn = (pi * s).sin();
        let (s2, c2) = (two_pi * s).sin_cos();
        Self {
            a: [sn * sn, pi * s2, two_pi * pi * c2],
            b: [s2, two_pi * c2, -two_pi * two_pi * s2],
        }
    }
}

impl<T: Real> ExactSolution<T> for TrigSolution {
    fn velocity(&self, t: T, x: T, y: T) -> [T; 2] {
        let amp = T::PI() * t.sin();
        let (px, py) = (Profiles::at(x), Profiles::at(y));
        [amp * px.a[0] * py.b[0], -amp * px.b[0] * py.a[0]]
    }

    fn velocity_grad(&self, t: T, x: T, y: T) -> [[T; 2]; 2] {
        let amp = T::PI() * t.sin();
        let (px, py) = (Profiles::at(x), Profiles::at(y));
        [
            [amp * px.a[1] * py.b[0], amp * px.a[0] * py.b[1]],
            [-amp * px.b[1] * py.a[0], -amp * px.b[0] * py.a[1]],
        ]
    }

    fn velocity_dt(&self, t: T, x: T, y: T) -> [T; 2] {
        let amp = T::PI() * t.cos();
        let (px, py) = (Profiles::at(x), Profiles::at(y));
        [amp * px.a[0] * py.b[0], -amp * px.b[0] * py.a[0]]
    }

    fn velocity_laplacian(&self, t: T, x: T, y: T) -> [T; 2] {
        let amp = T::PI() * t.sin();
        let (px, py) = (Profiles::at(x), Profiles::at(y));
        [
            amp * (px.a[2] * py.b[0] + px.a[0] * py.b[2]),
            -amp * (px.b[2] * py.a[0] + px.b[0] * py.a[2]),
        ]
    }

    fn pressure(&self, t: T, x: T, y: T) -> T {
        let pi = T::PI();
        t.sin() * (pi * x).cos() * (pi * y).sin()
    }

    fn pressure_grad(&self, t: T, x: T, y: T) -> [T; 2] {
        let pi = T::PI();
        let s = t.sin();
        let (sx, cx) = (pi * x).sin_cos();
        let (sy, cy) = (pi * y).sin_cos();
        [-pi * s * sx * sy, pi * s * cx * cy]
    }

    fn angular(&self, t: T, x: T, y: T) -> T {
        T::PI() * t.sin() * Profiles::at(x).a[0] * Profiles::at(y).a[0]
    }

    fn angular_grad(&self, t: T, x: T, y: T) -> [T; 2] {
        let amp = T::PI() * t.sin();
        let (px, py) = (Profiles::at(x), Profiles::at(y));
        [amp * px.a[1] * py.a[0], amp * px.a[0] * py.a[1]]
    }

    fn angular_dt(&self, t: T, x: T, y: T) -> T {
        T::PI() * t.cos() * Profiles::at(x).a[0] * Profiles::at(y).a[0]
    }

    fn angular_laplacian(&self, t: T, x: T, y: T) -> T {
        let amp = T::PI() * t.sin();
        let (px, py) = (Profiles::at(x), Profiles::at(y));
        amp * (px.a[2] * py.a[0] + px.a[0] * py.a[2])
    }
}

/// The identically zero solution.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSolution;

impl<T: Real> ExactSolution<T> for ZeroSolution {
    fn velocity(&self, _: T, _: T, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn velocity_grad(&self, _: T, _: T, _: T) -> [[T; 2]; 2] {
        [[T::zero(); 2]; 2]
    }
    fn velocity_dt(&self, _: T, _: T, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn velocity_laplacian(&self, _: T, _: T, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn pressure(&self, _: T, _: T, _: T) -> T {
        T::zero()
    }
    fn pressure_grad(&self, _: T, _: T, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn angular(&self, _: T, _: T, _: T) -> T {
        T::zero()
    }
    fn angular_grad(&self, _: T, _: T, _: T) -> [T; 2] {
        [T::zero(); 2]
    }
    fn angular_dt(&self, _: T, _: T, _: T) -> T {
        T::zero()
    }
    fn angular_laplacian(&self, _: T, _: T, _: T) -> T {
        T::zero()
    }
}

/// Right-hand sides `(f, g)` making `sol` an exact solution:
///
/// ```text
/// f = u_t + (u . grad) u - nu0 lap u + grad p - 2 nu_r rot w
/// g = j w_t + j u . grad w - c1 lap w + 4 nu_r w - 2 nu_r rot u
/// ```
///
/// with `rot w = (dw/dy, -dw/dx)` and `rot u = du2/dx - du1/dy`.
pub fn forcings<T: Real, S: ExactSolution<T> + ?Sized>(sol: &S, t: T, x: T, y: T, params: &PhysParams<T>) -> ([T; 2], T) {
    (momentum_forcing(sol, t, x, y, params), moment_forcing(sol, t, x, y, params))
}

/// `f` of [`forcings`].
pub fn momentum_forcing<T: Real, S: ExactSolution<T> + ?Sized>(sol: &S, t: T, x: T, y: T, params: &PhysParams<T>) -> [T; 2] {
    let two = T::lit(2.0);
    let u = sol.velocity(t, x, y);
    let gu = sol.velocity_grad(t, x, y);
    let ut = sol.velocity_dt(t, x, y);
    let lu = sol.velocity_laplacian(t, x, y);
    let gp = sol.pressure_grad(t, x, y);
    let gw = sol.angular_grad(t, x, y);
    let nu0 = params.nu0();
    let rot_w = [gw[1], -gw[0]];
    let mut f = [T::zero(); 2];
    for c in 0..2 {
        let adv = u[0] * gu[c][0] + u[1] * gu[c][1];
        f[c] = ut[c] + adv - nu0 * lu[c] + gp[c] - two * params.nu_r * rot_w[c];
    }
    f
}

/// `g` of [`forcings`].
pub fn moment_forcing<T: Real, S: ExactSolution<T> + ?Sized>(sol: &S, t: T, x: T, y: T, params: &PhysParams<T>) -> T {
    let two = T::lit(2.0);
    let u = sol.velocity(t, x, y);
    let gu = sol.velocity_grad(t, x, y);
    let w = sol.angular(t, x, y);
    let gw = sol.angular_grad(t, x, y);
    let wt = sol.angular_dt(t, x, y);
    let lw = sol.angular_laplacian(t, x, y);
    let rot_u = gu[1][0] - gu[0][1];
    params.j * (wt + u[0] * gw[0] + u[1] * gw[1]) - params.c1() * lw + T::lit(4.0) * params.nu_r * w
        - two * params.nu_r * rot_u
}
