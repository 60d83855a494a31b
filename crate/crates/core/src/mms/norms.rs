use crate::error::{Error, Result};
use crate::real::Real;

/// `max_k |phi^k|` over `k = 0..=K`.
pub fn discrete_linf_norm<T: Real>(per_step: &[T]) -> Result<T> {
    if per_step.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(per_step.iter().fold(T::zero(), |m, &v| m.max(v.abs())))
}

/// `(tau * sum_{k=0}^{K} |phi^k|^2)^{1/2}`, including the `k = 0` term.
pub fn discrete_l2_norm<T: Real>(per_step: &[T], tau: T) -> Result<T> {
    if per_step.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok((tau * per_step.iter().map(|&v| v * v).sum::<T>()).sqrt())
}

/// Observed order `log2(e_coarse / e_fine)` for a refinement ratio of 2.
pub fn convergence_rate<T: Real>(e_coarse: T, e_fine: T) -> Result<T> {
    if !(e_coarse > T::zero() && e_fine > T::zero()) {
        return Err(Error::NonPositiveError {
            coarse: e_coarse.to_f64_lossy(),
            fine: e_fine.to_f64_lossy(),
        });
    }
    Ok((e_coarse / e_fine).log2())
}
