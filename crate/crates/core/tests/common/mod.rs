#![allow(dead_code)]

use micropolar::femops::{
    assemble_convection, assemble_divergence, assemble_mass, assemble_stiffness, FieldVector,
};
use micropolar::mesh::{build_dof_map, build_uniform_mesh, DofMap, Rect};
use micropolar::mms::{forcings, ExactSolution};
use micropolar::scheme::PhysParams;
use micropolar::sparsela::CsrMatrix;
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::Rng;

pub fn dense(a: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols());
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            out[(i, j)] += v;
        }
    }
    out
}

pub fn submatrix(a: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

pub fn spaces(n: usize) -> (DofMap<f64>, DofMap<f64>, DofMap<f64>) {
    let mesh = build_uniform_mesh(n, Rect::reference()).unwrap();
    (
        build_dof_map(&mesh, 2, 2).unwrap(),
        build_dof_map(&mesh, 1, 1).unwrap(),
        build_dof_map(&mesh, 2, 1).unwrap(),
    )
}

pub fn interior(map: &DofMap<f64>) -> Vec<usize> {
    (0..map.n_dofs()).filter(|&d| !map.is_boundary(d)).collect()
}

/// Random field in `map` vanishing on the boundary.
pub fn random_field(map: &DofMap<f64>, rng: &mut StdRng) -> FieldVector<f64> {
    let mut f = FieldVector::zeros(map);
    for (d, v) in f.values_mut().iter_mut().enumerate() {
        if !map.is_boundary(d) {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    f
}

/// Full H1 norm of a (vector) field: `sqrt(sum_c v_c^T (M + A) v_c)`.
pub fn h1_norm(map: &DofMap<f64>, f: &FieldVector<f64>) -> f64 {
    let scalar = map.scalar();
    let m = assemble_mass(&scalar);
    let a = assemble_stiffness(&scalar);
    (0..map.components())
        .map(|c| {
            let v = f.component(c);
            m.bilinear(v, v) + a.bilinear(v, v)
        })
        .sum::<f64>()
        .sqrt()
}

/// `|b_h(u, v, v)|` and `|u|_{H1} |v|_{H1}^2` for one pair on the velocity space.
pub fn skew_pair(vel: &DofMap<f64>, u: &FieldVector<f64>, v: &FieldVector<f64>) -> (f64, f64) {
    let n = assemble_convection(u, vel, vel).unwrap();
    let b = n.bilinear(v.values(), v.values());
    let hv = h1_norm(vel, v);
    (b.abs(), h1_norm(vel, u) * hv * hv)
}

/// Discrete inf-sup constant of the Q2/Q1 pair on `n x n` cells, from the
/// singular values of `Mp^{-1/2} B A^{-1/2}` with `A` the velocity H1-seminorm
/// Gram matrix on interior dofs. Returns `(smallest, beta)` where `smallest`
/// belongs to the constant pressure mode.
pub fn inf_sup(n: usize) -> (f64, f64) {
    let (vel, pres, _) = spaces(n);
    let inner = interior(&vel);
    let all_p: Vec<usize> = (0..pres.n_dofs()).collect();
    let b = submatrix(&dense(&assemble_divergence(&vel, &pres).unwrap()), &all_p, &inner);
    let a_scalar = assemble_stiffness(&vel.scalar());
    let a = submatrix(&dense(&CsrMatrix::block_diag(&a_scalar, 2)), &inner, &inner);
    let mp = dense(&assemble_mass(&pres));

    let la = a.cholesky().expect("velocity Gram SPD").l();
    let lp = mp.cholesky().expect("pressure mass SPD").l();
    // K = Lp^{-1} B La^{-T}
    let left = lp.solve_lower_triangular(&b).unwrap();
    let k = la.solve_lower_triangular(&left.transpose()).unwrap().transpose();
    let mut sv: Vec<f64> = k.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| x.partial_cmp(y).unwrap());
    (sv[0], sv[1])
}

/// Central-difference residual of the momentum and moment equations at one
/// point, built only from pointwise values of the exact fields.
pub fn fd_forcing<S: ExactSolution<f64>>(s: &S, t: f64, x: f64, y: f64, p: &PhysParams<f64>, e: f64) -> ([f64; 2], f64) {
    let u = |t: f64, x: f64, y: f64| s.velocity(t, x, y);
    let w = |t: f64, x: f64, y: f64| s.angular(t, x, y);
    let pr = |x: f64, y: f64| s.pressure(t, x, y);

    let d = |f: &dyn Fn(f64) -> f64, a: f64| (f(a + e) - f(a - e)) / (2.0 * e);
    let lap = |f: &dyn Fn(f64, f64) -> f64| {
        (f(x + e, y) + f(x - e, y) + f(x, y + e) + f(x, y - e) - 4.0 * f(x, y)) / (e * e)
    };

    let uv = u(t, x, y);
    let mut force = [0.0; 2];
    for (c, fc) in force.iter_mut().enumerate() {
        let ut = d(&|tt| u(tt, x, y)[c], t);
        let ux = d(&|xx| u(t, xx, y)[c], x);
        let uy = d(&|yy| u(t, x, yy)[c], y);
        let lu = lap(&|xx, yy| u(t, xx, yy)[c]);
        let dp = if c == 0 { d(&|xx| pr(xx, y), x) } else { d(&|yy| pr(x, yy), y) };
        // rot w = (dw/dy, -dw/dx)
        let rot = if c == 0 { d(&|yy| w(t, x, yy), y) } else { -d(&|xx| w(t, xx, y), x) };
        *fc = ut + uv[0] * ux + uv[1] * uy - p.nu0() * lu + dp - 2.0 * p.nu_r * rot;
    }

    let wt = d(&|tt| w(tt, x, y), t);
    let wx = d(&|xx| w(t, xx, y), x);
    let wy = d(&|yy| w(t, x, yy), y);
    let lw = lap(&|xx, yy| w(t, xx, yy));
    // rot u = du2/dx - du1/dy
    let rot_u = d(&|xx| u(t, xx, y)[1], x) - d(&|yy| u(t, x, yy)[0], y);
    let moment = p.j * wt + p.j * (uv[0] * wx + uv[1] * wy) - p.c1() * lw + 4.0 * p.nu_r * w(t, x, y)
        - 2.0 * p.nu_r * rot_u;
    (force, moment)
}

/// Largest deviation between `forcings` and the finite-difference residual
/// over `points` random samples, relative to the largest forcing magnitude.
pub fn fd_forcing_relative_error<S: ExactSolution<f64>>(
    s: &S,
    p: &PhysParams<f64>,
    points: usize,
    step: f64,
    rng: &mut StdRng,
) -> f64 {
    let (mut diff, mut scale) = (0.0f64, 0.0f64);
    for _ in 0..points {
        let t = rng.gen_range(0.0..10.0);
        let x = rng.gen_range(-1.0..1.0);
        let y = rng.gen_range(-1.0..1.0);
        let (f, g) = forcings(s, t, x, y, p);
        let (ff, gf) = fd_forcing(s, t, x, y, p, step);
        for (a, b) in [(f[0], ff[0]), (f[1], ff[1]), (g, gf)] {
            diff = diff.max((a - b).abs());
            scale = scale.max(a.abs());
        }
    }
    diff / scale
}

/// Random admissible material constants (`c2 > 0`).
pub fn random_params(rng: &mut StdRng) -> PhysParams<f64> {
    let c0: f64 = rng.gen_range(0.1..2.0);
    let ca: f64 = rng.gen_range(0.1..2.0);
    let cd = rng.gen_range((ca - c0).max(0.0) + 0.1..3.0);
    PhysParams::new(
        rng.gen_range(0.1..2.0),
        rng.gen_range(0.1..2.0),
        rng.gen_range(0.1..2.0),
        c0,
        ca,
        cd,
    )
    .unwrap()
}
