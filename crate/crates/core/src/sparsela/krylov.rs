//! Preconditioned conjugate gradients and restarted GMRES.
//!
//! Both solvers take the initial guess in `x` and overwrite it. The residual in
//! the returned [`SolveReport`] is always recomputed as `|b - A x| / |b|` from
//! the final iterate.

use std::fmt;

use super::csr::CsrMatrix;
use super::precond::Preconditioner;
use crate::real::{axpy, dot, norm2, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} after {} iterations, relative residual {:.3e}",
            if self.converged { "converged" } else { "not converged" },
            self.iterations,
            self.relative_residual
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Relative residual target.
    pub tol: f64,
    pub max_iter: usize,
    /// GMRES restart length.
    pub restart: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 20_000,
            restart: 60,
        }
    }
}

fn residual<T: Real>(a: &CsrMatrix<T>, b: &[T], x: &[T], r: &mut [T]) {
    a.mul_vec_into(x, r);
    for (ri, &bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
}

/// Removes the component of `v` along `e` (Euclidean).
fn project_out<T: Real>(v: &mut [T], e: &[T], ee: T) {
    let c = dot(v, e) / ee;
    axpy(-c, e, v);
}

pub fn cg_solve<T: Real>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    opts: &SolverOptions,
    pc: &dyn Preconditioner<T>,
) -> SolveReport {
    cg_impl(a, b, x, opts, pc, None)
}

/// CG on the complement of `null` for a semidefinite `A` whose kernel is
/// spanned by `null`. The right-hand side and every preconditioned residual are
/// projected, so the iterates stay orthogonal to the kernel.
pub fn cg_solve_deflated<T: Real>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    null: &[T],
    opts: &SolverOptions,
    pc: &dyn Preconditioner<T>,
) -> SolveReport {
    cg_impl(a, b, x, opts, pc, Some(null))
}

fn cg_impl<T: Real>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    opts: &SolverOptions,
    pc: &dyn Preconditioner<T>,
    null: Option<&[T]>,
) -> SolveReport {
    let n = b.len();
    assert_eq!(a.nrows(), n);
    assert_eq!(a.ncols(), n);
    assert_eq!(x.len(), n);

    let mut rhs = b.to_vec();
    let ee = null.map(|e| dot(e, e));
    if let (Some(e), Some(ee)) = (null, ee) {
        project_out(&mut rhs, e, ee);
        project_out(x, e, ee);
    }
    let bnorm = norm2(&rhs);
    if bnorm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return SolveReport { iterations: 0, relative_residual: 0.0, converged: true };
    }
    let tol = T::lit(opts.tol);

    let mut r = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let mut ap = vec![T::zero(); n];
    let mut iterations = 0;

    // Outer loop restarts from the true residual whenever the recurrence claims
    // convergence that the recomputed residual does not confirm.
    loop {
        residual(a, &rhs, x, &mut r);
        if let (Some(e), Some(ee)) = (null, ee) {
            project_out(&mut r, e, ee);
        }
        let rel = norm2(&r) / bnorm;
        if rel <= tol || iterations >= opts.max_iter {
            return SolveReport {
                iterations,
                relative_residual: rel.to_f64_lossy(),
                converged: rel <= tol,
            };
        }
        let before = iterations;

        pc.apply(&r, &mut z);
        if let (Some(e), Some(ee)) = (null, ee) {
            project_out(&mut z, e, ee);
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        while iterations < opts.max_iter {
            a.mul_vec_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(rz.is_finite() && pap > T::zero()) {
                // breakdown: direction of non-positive curvature
                residual(a, &rhs, x, &mut r);
                let rel = norm2(&r) / bnorm;
                return SolveReport {
                    iterations,
                    relative_residual: rel.to_f64_lossy(),
                    converged: rel <= tol,
                };
            }
            let alpha = rz / pap;
            axpy(alpha, &p, x);
            axpy(-alpha, &ap, &mut r);
            iterations += 1;
            if norm2(&r) / bnorm <= tol {
                break;
            }
            pc.apply(&r, &mut z);
            if let (Some(e), Some(ee)) = (null, ee) {
                project_out(&mut z, e, ee);
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for (pi, &zi) in p.iter_mut().zip(&z) {
                *pi = zi + beta * *pi;
            }
        }
        if iterations == before {
            // no progress possible; report the recomputed state
            residual(a, &rhs, x, &mut r);
            let rel = norm2(&r) / bnorm;
            return SolveReport {
                iterations,
                relative_residual: rel.to_f64_lossy(),
                converged: rel <= tol,
            };
        }
    }
}

/// Right-preconditioned restarted GMRES with modified Gram-Schmidt.
pub fn gmres_solve<T: Real>(
    a: &CsrMatrix<T>,
    b: &[T],
    x: &mut [T],
    opts: &SolverOptions,
    pc: &dyn Preconditioner<T>,
) -> SolveReport {
    let n = b.len();
    assert_eq!(a.nrows(), n);
    assert_eq!(a.ncols(), n);
    assert_eq!(x.len(), n);

    let bnorm = norm2(b);
    if bnorm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return SolveReport { iterations: 0, relative_residual: 0.0, converged: true };
    }
    let tol = T::lit(opts.tol);
    let m = opts.restart.max(1);

    let mut r = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    let mut hess = vec![vec![T::zero(); m]; m + 1];
    let mut cs = vec![T::zero(); m];
    let mut sn = vec![T::zero(); m];
    let mut g = vec![T::zero(); m + 1];
    let mut iterations = 0;

    loop {
        residual(a, b, x, &mut r);
        let beta = norm2(&r);
        let rel = beta / bnorm;
        if rel <= tol || iterations >= opts.max_iter || !rel.is_finite() {
            return SolveReport {
                iterations,
                relative_residual: rel.to_f64_lossy(),
                converged: rel <= tol,
            };
        }

        basis.clear();
        basis.push(r.iter().map(|&v| v / beta).collect());
        g.iter_mut().for_each(|v| *v = T::zero());
        g[0] = beta;
        let mut k = 0;
        while k < m && iterations < opts.max_iter {
            pc.apply(&basis[k], &mut z);
            a.mul_vec_into(&z, &mut w);
            for i in 0..=k {
                let hik = dot(&w, &basis[i]);
                hess[i][k] = hik;
                axpy(-hik, &basis[i], &mut w);
            }
            let hnext = norm2(&w);
            hess[k + 1][k] = hnext;

            for i in 0..k {
                let t = cs[i] * hess[i][k] + sn[i] * hess[i + 1][k];
                hess[i + 1][k] = -sn[i] * hess[i][k] + cs[i] * hess[i + 1][k];
                hess[i][k] = t;
            }
            let (c, s) = givens(hess[k][k], hess[k + 1][k]);
            cs[k] = c;
            sn[k] = s;
            hess[k][k] = c * hess[k][k] + s * hess[k + 1][k];
            hess[k + 1][k] = T::zero();
            g[k + 1] = -s * g[k];
            g[k] = c * g[k];

            iterations += 1;
            k += 1;
            let estimate = g[k].abs() / bnorm;
            if estimate <= tol || hnext == T::zero() {
                break;
            }
            basis.push(w.iter().map(|&v| v / hnext).collect());
        }

        // back substitution for the least-squares coefficients
        let mut y = vec![T::zero(); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in (i + 1)..k {
                s -= hess[i][j] * y[j];
            }
            y[i] = if hess[i][i] != T::zero() { s / hess[i][i] } else { T::zero() };
        }
        w.iter_mut().for_each(|v| *v = T::zero());
        for (yi, vi) in y.iter().zip(&basis) {
            axpy(*yi, vi, &mut w);
        }
        pc.apply(&w, &mut z);
        axpy(T::one(), &z, x);
    }
}

fn givens<T: Real>(a: T, b: T) -> (T, T) {
    if b == T::zero() {
        (T::one(), T::zero())
    } else if b.abs() > a.abs() {
        let t = a / b;
        let s = T::one() / (T::one() + t * t).sqrt();
        (s * t, s)
    } else {
        let t = b / a;
        let c = T::one() / (T::one() + t * t).sqrt();
        (c, c * t)
    }
}
