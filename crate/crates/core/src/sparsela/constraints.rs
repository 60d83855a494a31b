//! Dirichlet elimination and the zero-mean pressure constraint.

use super::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::femops::{basis_integrals, FieldVector};
use crate::mesh::DofMap;
use crate::real::Real;

fn mask_for(n: usize, dofs: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &d in dofs {
        if d >= n {
            return Err(Error::IndexOutOfRange { index: d, dim: n });
        }
        mask[d] = true;
    }
    Ok(mask)
}

/// Symmetric elimination of `x[dofs] = values`.
///
/// Constrained rows and columns are zeroed except for a unit diagonal, the
/// right-hand side is lifted by the eliminated columns, and `b'[dofs] = values`.
/// The sparsity pattern is unchanged.
pub fn apply_dirichlet<T: Real>(
    a: &CsrMatrix<T>,
    b: &[T],
    dofs: &[usize],
    values: &[T],
) -> Result<(CsrMatrix<T>, Vec<T>)> {
    let mut a2 = a.clone();
    let mask = constrain_matrix(&mut a2, dofs)?;
    let b2 = lift_rhs_masked(a, b, &mask, dofs, values)?;
    Ok((a2, b2))
}

/// Matrix half of [`apply_dirichlet`]; returns the constraint mask.
pub fn constrain_matrix<T: Real>(a: &mut CsrMatrix<T>, dofs: &[usize]) -> Result<Vec<bool>> {
    if a.nrows() != a.ncols() {
        return Err(Error::SpaceMismatch("Dirichlet elimination needs a square matrix".into()));
    }
    let mask = mask_for(a.nrows(), dofs)?;
    let rp = a.row_ptr().to_vec();
    let ci = a.col_idx().to_vec();
    let vals = a.values_mut();
    for i in 0..rp.len() - 1 {
        for k in rp[i]..rp[i + 1] {
            let j = ci[k];
            if mask[i] || mask[j] {
                vals[k] = if i == j { T::one() } else { T::zero() };
            }
        }
    }
    Ok(mask)
}

/// Right-hand side half of [`apply_dirichlet`]; `a` is the unconstrained matrix.
pub fn lift_rhs<T: Real>(a: &CsrMatrix<T>, b: &[T], dofs: &[usize], values: &[T]) -> Result<Vec<T>> {
    let mask = mask_for(a.nrows(), dofs)?;
    lift_rhs_masked(a, b, &mask, dofs, values)
}

fn lift_rhs_masked<T: Real>(a: &CsrMatrix<T>, b: &[T], mask: &[bool], dofs: &[usize], values: &[T]) -> Result<Vec<T>> {
    if values.len() != dofs.len() {
        return Err(Error::SpaceMismatch(format!(
            "{} constrained dofs but {} values",
            dofs.len(),
            values.len()
        )));
    }
    if b.len() != a.nrows() {
        return Err(Error::SpaceMismatch("right-hand side length mismatch".into()));
    }
    let mut full = vec![T::zero(); a.ncols()];
    for (&d, &v) in dofs.iter().zip(values) {
        full[d] = v;
    }
    let mut out = b.to_vec();
    if values.iter().any(|&v| v != T::zero()) {
        for (i, o) in out.iter_mut().enumerate() {
            if mask[i] {
                continue;
            }
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if mask[j] {
                    *o -= v * full[j];
                }
            }
        }
    }
    for (&d, &v) in dofs.iter().zip(values) {
        out[d] = v;
    }
    Ok(out)
}

/// Shifts `p` by a constant so that `∫ p_h = 0`.
pub fn enforce_zero_mean<T: Real>(p: &FieldVector<T>, map: &DofMap<T>) -> Result<FieldVector<T>> {
    p.check(map)?;
    let integrals = basis_integrals(map);
    let mut out = p.clone();
    subtract_mean(out.values_mut(), &integrals);
    Ok(out)
}

/// In-place form of [`enforce_zero_mean`] with precomputed `∫ phi_i`.
///
/// Lagrange bases reproduce constants with all-ones coefficients, so the
/// correction is a uniform shift.
pub fn subtract_mean<T: Real>(values: &mut [T], integrals: &[T]) {
    let area: T = integrals.iter().copied().sum();
    let mean = crate::real::dot(values, integrals) / area;
    values.iter_mut().for_each(|v| *v -= mean);
}
