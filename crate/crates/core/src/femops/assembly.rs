//! Assembly of the bilinear and trilinear forms of the scheme on uniform meshes.
//!
//! Every cell of a uniform mesh is the same square, so the constant-coefficient
//! forms are computed once on a reference cell and scattered. The convection
//! operator depends on the advecting field and is integrated cell by cell.

use super::basis::Tabulation;
use super::field::FieldVector;
use super::quadrature::{quadrature_rule, QuadratureRule};
use crate::error::{Error, Result};
use crate::mesh::DofMap;
use crate::real::Real;
use crate::sparsela::{cg_solve, CsrMatrix, Jacobi, SolveReport, SolverOptions};

/// Per-coordinate quadrature degree for a pair of spaces: `2 * max_order + 2`.
pub fn default_quadrature_degree(order: usize) -> usize {
    2 * order + 2
}

fn check_same_mesh<T: Real>(a: &DofMap<T>, b: &DofMap<T>) -> Result<()> {
    if !a.same_mesh(b) {
        return Err(Error::SpaceMismatch("spaces built on different meshes".into()));
    }
    Ok(())
}

/// Zero matrix with the cell-coupling pattern between two scalar spaces.
pub fn scalar_pattern<T: Real>(test: &DofMap<T>, trial: &DofMap<T>) -> CsrMatrix<T> {
    let nrows = test.scalar_count();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    for cell in 0..test.n_cells() {
        let cols = trial.cell_nodes(cell);
        for &r in test.cell_nodes(cell) {
            rows[r].extend_from_slice(cols);
        }
    }
    for r in rows.iter_mut() {
        r.sort_unstable();
        r.dedup();
    }
    CsrMatrix::from_pattern(nrows, trial.scalar_count(), &rows)
}

/// Adds the per-cell local matrices (row-major, test x trial) into `mat`.
fn scatter<T: Real, F>(test: &DofMap<T>, trial: &DofMap<T>, mat: &mut CsrMatrix<T>, mut local: F)
where
    F: FnMut(usize, &mut [T]),
{
    let nt = test.nodes_per_cell();
    let ns = trial.nodes_per_cell();
    let mut buf = vec![T::zero(); nt * ns];
    for cell in 0..test.n_cells() {
        buf.iter_mut().for_each(|v| *v = T::zero());
        local(cell, &mut buf);
        let rows = test.cell_nodes(cell);
        let cols = trial.cell_nodes(cell);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                mat.add_to(r, c, buf[i * ns + j]);
            }
        }
    }
}

fn constant_form<T: Real>(test: &DofMap<T>, trial: &DofMap<T>, local: &[T]) -> CsrMatrix<T> {
    let mut mat = scalar_pattern(test, trial);
    scatter(test, trial, &mut mat, |_, buf| buf.copy_from_slice(local));
    mat
}

/// Reference-cell data shared by the assembly routines.
struct CellData<T> {
    quad: QuadratureRule<T>,
    test: Tabulation<T>,
    trial: Tabulation<T>,
    /// `h / 2`
    half_h: T,
}

impl<T: Real> CellData<T> {
    fn new(test: &DofMap<T>, trial: &DofMap<T>) -> Self {
        Self::with_degree(test, trial, default_quadrature_degree(test.order().max(trial.order())))
    }

    fn with_degree(test: &DofMap<T>, trial: &DofMap<T>, degree: usize) -> Self {
        let quad = quadrature_rule(degree);
        Self {
            test: Tabulation::new(test.order(), &quad),
            trial: Tabulation::new(trial.order(), &quad),
            half_h: test.h() / T::lit(2.0),
            quad,
        }
    }

    fn jxw(&self, q: usize) -> T {
        self.quad.weights[q] * self.half_h * self.half_h
    }

    fn physical(&self, origin: [T; 2], q: usize) -> [T; 2] {
        let p = self.quad.points[q];
        [
            origin[0] + (p[0] + T::one()) * self.half_h,
            origin[1] + (p[1] + T::one()) * self.half_h,
        ]
    }

    /// `<phi_i, psi_j>`
    fn mass(&self) -> Vec<T> {
        let (nt, ns) = (self.test.n_basis, self.trial.n_basis);
        let mut out = vec![T::zero(); nt * ns];
        for q in 0..self.quad.len() {
            let jxw = self.jxw(q);
            for i in 0..nt {
                let vi = self.test.value(q, i) * jxw;
                for j in 0..ns {
                    out[i * ns + j] += vi * self.trial.value(q, j);
                }
            }
        }
        out
    }

    /// `<grad phi_i, grad psi_j>`; the Jacobian factors cancel in 2D.
    fn stiffness(&self) -> Vec<T> {
        let (nt, ns) = (self.test.n_basis, self.trial.n_basis);
        let mut out = vec![T::zero(); nt * ns];
        for q in 0..self.quad.len() {
            let w = self.quad.weights[q];
            for i in 0..nt {
                let gi = self.test.grad(q, i);
                for j in 0..ns {
                    let gj = self.trial.grad(q, j);
                    out[i * ns + j] += w * (gi[0] * gj[0] + gi[1] * gj[1]);
                }
            }
        }
        out
    }

    /// `<phi_i, d/dx_dir psi_j>`
    fn derivative(&self, dir: usize) -> Vec<T> {
        let (nt, ns) = (self.test.n_basis, self.trial.n_basis);
        let mut out = vec![T::zero(); nt * ns];
        for q in 0..self.quad.len() {
            let w = self.quad.weights[q] * self.half_h;
            for i in 0..nt {
                let vi = self.test.value(q, i) * w;
                for j in 0..ns {
                    out[i * ns + j] += vi * self.trial.grad(q, j)[dir];
                }
            }
        }
        out
    }
}

fn scalar_form<T: Real>(test: &DofMap<T>, trial: &DofMap<T>, kind: impl FnOnce(&CellData<T>) -> Vec<T>) -> CsrMatrix<T> {
    let s_test = test.scalar();
    let s_trial = trial.scalar();
    let data = CellData::new(&s_test, &s_trial);
    let local = kind(&data);
    constant_form(&s_test, &s_trial, &local)
}

/// `M_ij = <phi_j, phi_i>`, block diagonal for vector spaces.
pub fn assemble_mass<T: Real>(map: &DofMap<T>) -> CsrMatrix<T> {
    let m = scalar_form(map, map, CellData::mass);
    if map.components() == 1 {
        m
    } else {
        CsrMatrix::block_diag(&m, map.components())
    }
}

/// `A_ij = <grad phi_j, grad phi_i>`, block diagonal for vector spaces.
pub fn assemble_stiffness<T: Real>(map: &DofMap<T>) -> CsrMatrix<T> {
    let a = scalar_form(map, map, CellData::stiffness);
    if map.components() == 1 {
        a
    } else {
        CsrMatrix::block_diag(&a, map.components())
    }
}

fn check_vector_scalar<T: Real>(vector: &DofMap<T>, scalar: &DofMap<T>, what: &str) -> Result<()> {
    check_same_mesh(vector, scalar)?;
    if vector.components() != 2 || scalar.components() != 1 {
        return Err(Error::SpaceMismatch(format!(
            "{what} needs a 2-component and a scalar space, got {} and {} components",
            vector.components(),
            scalar.components()
        )));
    }
    Ok(())
}

/// `(G p)_i = <grad p, phi_i>`; rows are velocity dofs, columns pressure dofs.
pub fn assemble_pressure_gradient<T: Real>(vel: &DofMap<T>, pres: &DofMap<T>) -> Result<CsrMatrix<T>> {
    check_vector_scalar(vel, pres, "pressure gradient")?;
    let gx = scalar_form(vel, pres, |d| d.derivative(0));
    let gy = scalar_form(vel, pres, |d| d.derivative(1));
    Ok(CsrMatrix::block(&[vec![Some(&gx)], vec![Some(&gy)]]))
}

/// `(B u)_q = <q, div u>`; rows are pressure dofs, columns velocity dofs.
pub fn assemble_divergence<T: Real>(vel: &DofMap<T>, pres: &DofMap<T>) -> Result<CsrMatrix<T>> {
    check_vector_scalar(vel, pres, "divergence")?;
    let bx = scalar_form(pres, vel, |d| d.derivative(0));
    let by = scalar_form(pres, vel, |d| d.derivative(1));
    Ok(CsrMatrix::block(&[vec![Some(&bx), Some(&by)]]))
}

/// `(R w)_i = <rot w, phi_i>` with `rot w = (dw/dy, -dw/dx)`.
pub fn assemble_curl_scalar_to_vector<T: Real>(vel: &DofMap<T>, ang: &DofMap<T>) -> Result<CsrMatrix<T>> {
    check_vector_scalar(vel, ang, "scalar curl")?;
    let r1 = scalar_form(vel, ang, |d| d.derivative(1));
    let mut r2 = scalar_form(vel, ang, |d| d.derivative(0));
    r2.scale(-T::one());
    Ok(CsrMatrix::block(&[vec![Some(&r1)], vec![Some(&r2)]]))
}

/// `(C u)_i = <rot u, z_i>` with `rot u = du2/dx - du1/dy`.
pub fn assemble_curl_vector_to_scalar<T: Real>(ang: &DofMap<T>, vel: &DofMap<T>) -> Result<CsrMatrix<T>> {
    check_vector_scalar(vel, ang, "vector curl")?;
    let mut c1 = scalar_form(ang, vel, |d| d.derivative(1));
    c1.scale(-T::one());
    let c2 = scalar_form(ang, vel, |d| d.derivative(0));
    Ok(CsrMatrix::block(&[vec![Some(&c1), Some(&c2)]]))
}

/// Skew-symmetrized convection `N(u)` with `z^T N(u) v = <(u . grad) v, z> + 1/2 <(div u) v, z>`.
///
/// `trial` is the space of `v` and `z`; the result is block diagonal when it
/// has two components.
pub fn assemble_convection<T: Real>(u: &FieldVector<T>, u_map: &DofMap<T>, trial: &DofMap<T>) -> Result<CsrMatrix<T>> {
    let scalar = trial.scalar();
    let mut mat = scalar_pattern(&scalar, &scalar);
    assemble_convection_into(&mut mat, u, u_map, trial)?;
    Ok(if trial.components() == 1 {
        mat
    } else {
        CsrMatrix::block_diag(&mat, trial.components())
    })
}

/// Scalar block of [`assemble_convection`] written into a matrix that already
/// carries the scalar pattern of `trial`. Existing values are overwritten.
pub fn assemble_convection_into<T: Real>(
    mat: &mut CsrMatrix<T>,
    u: &FieldVector<T>,
    u_map: &DofMap<T>,
    trial: &DofMap<T>,
) -> Result<()> {
    u.check(u_map)?;
    check_same_mesh(u_map, trial)?;
    if u_map.components() != 2 {
        return Err(Error::SpaceMismatch("advecting field must have 2 components".into()));
    }
    if trial.order() != u_map.order() {
        return Err(Error::SpaceMismatch(format!(
            "convection trial space has order {}, the advecting field order {}",
            trial.order(),
            u_map.order()
        )));
    }
    if mat.nrows() != trial.scalar_count() || mat.ncols() != trial.scalar_count() {
        return Err(Error::SpaceMismatch("convection matrix does not match the trial space".into()));
    }
    let scalar = trial.scalar();
    let order = trial.order().max(u_map.order());
    let quad = quadrature_rule::<T>(default_quadrature_degree(order));
    let tab = Tabulation::new(trial.order(), &quad);
    let utab = Tabulation::new(u_map.order(), &quad);
    let half_h = trial.h() / T::lit(2.0);
    let inv = T::one() / half_h;
    let half = T::lit(0.5);
    let (ux, uy) = (u.component(0), u.component(1));
    let nb = tab.n_basis;
    let mut grads = vec![[T::zero(); 2]; nb];

    mat.fill_zero();
    scatter(&scalar, &scalar, mat, |cell, buf| {
        let unodes = u_map.cell_nodes(cell);
        for q in 0..quad.len() {
            let jxw = quad.weights[q] * half_h * half_h;
            let (mut u0, mut u1, mut div) = (T::zero(), T::zero(), T::zero());
            for (k, &node) in unodes.iter().enumerate() {
                let phi = utab.value(q, k);
                let g = utab.grad(q, k);
                u0 += ux[node] * phi;
                u1 += uy[node] * phi;
                div += (ux[node] * g[0] + uy[node] * g[1]) * inv;
            }
            for (j, g) in grads.iter_mut().enumerate() {
                let r = tab.grad(q, j);
                *g = [r[0] * inv, r[1] * inv];
            }
            let vals = tab.values_at(q);
            for i in 0..nb {
                let zi = vals[i] * jxw;
                for j in 0..nb {
                    let adv = u0 * grads[j][0] + u1 * grads[j][1] + half * div * vals[j];
                    buf[i * nb + j] += zi * adv;
                }
            }
        }
    });
    Ok(())
}

/// `b_i = <f, phi_i>` for `f(x, y, component)`.
pub fn assemble_load<T: Real, F>(map: &DofMap<T>, f: F) -> Vec<T>
where
    F: Fn(T, T, usize) -> T,
{
    let quad = quadrature_rule::<T>(default_quadrature_degree(map.order()));
    let tab = Tabulation::new(map.order(), &quad);
    let half_h = map.h() / T::lit(2.0);
    let s = map.scalar_count();
    let mut out = vec![T::zero(); map.n_dofs()];
    for cell in 0..map.n_cells() {
        let o = map.cell_origin(cell);
        let nodes = map.cell_nodes(cell);
        for (q, p) in quad.points.iter().enumerate() {
            let jxw = quad.weights[q] * half_h * half_h;
            let x = o[0] + (p[0] + T::one()) * half_h;
            let y = o[1] + (p[1] + T::one()) * half_h;
            for c in 0..map.components() {
                let fv = f(x, y, c) * jxw;
                for (k, &node) in nodes.iter().enumerate() {
                    out[c * s + node] += fv * tab.value(q, k);
                }
            }
        }
    }
    out
}

/// `∫ phi_i` for every dof.
pub fn basis_integrals<T: Real>(map: &DofMap<T>) -> Vec<T> {
    assemble_load(map, |_, _, _| T::one())
}

/// L2 projection of `f(x, y, component)`: solves `M c = <f, phi>`.
pub fn l2_project<T: Real, F>(map: &DofMap<T>, f: F, opts: &SolverOptions) -> Result<FieldVector<T>>
where
    F: Fn(T, T, usize) -> T,
{
    let mass = scalar_form(map, map, CellData::mass);
    let load = assemble_load(map, f);
    let pc = Jacobi::new(&mass);
    let s = map.scalar_count();
    let mut out = FieldVector::zeros(map);
    for c in 0..map.components() {
        let rep: SolveReport = cg_solve(&mass, &load[c * s..(c + 1) * s], out.component_mut(c), opts, &pc);
        if !rep.converged {
            return Err(Error::NotConverged { stage: "L2 projection", report: rep });
        }
    }
    Ok(out)
}

/// `(|u - u_h|_{L2}, |grad(u - u_h)|_{L2})` summed over components.
///
/// `exact(x, y, c)` and `exact_grad(x, y, c)` give component `c` of the exact
/// field and its gradient.
pub fn error_norms<T: Real, F, G>(map: &DofMap<T>, field: &FieldVector<T>, exact: F, exact_grad: G) -> Result<(T, T)>
where
    F: Fn(T, T, usize) -> T,
    G: Fn(T, T, usize) -> [T; 2],
{
    field.check(map)?;
    // the error is not a polynomial; integrate it with a richer rule than the forms
    let data = CellData::with_degree(map, map, default_quadrature_degree(map.order()) + 6);
    let tab = &data.test;
    let inv = T::one() / data.half_h;
    let mut l2 = T::zero();
    let mut h1 = T::zero();
    for c in 0..map.components() {
        let coef = field.component(c);
        for cell in 0..map.n_cells() {
            let o = map.cell_origin(cell);
            let nodes = map.cell_nodes(cell);
            for q in 0..data.quad.len() {
                let [x, y] = data.physical(o, q);
                let (mut v, mut gx, mut gy) = (T::zero(), T::zero(), T::zero());
                for (k, &node) in nodes.iter().enumerate() {
                    let g = tab.grad(q, k);
                    v += coef[node] * tab.value(q, k);
                    gx += coef[node] * g[0];
                    gy += coef[node] * g[1];
                }
                let e = exact(x, y, c) - v;
                let eg = exact_grad(x, y, c);
                let (ex, ey) = (eg[0] - gx * inv, eg[1] - gy * inv);
                let jxw = data.jxw(q);
                l2 += jxw * e * e;
                h1 += jxw * (ex * ex + ey * ey);
            }
        }
    }
    Ok((l2.sqrt(), h1.sqrt()))
}
