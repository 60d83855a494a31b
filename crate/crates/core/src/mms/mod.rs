//! Manufactured solutions, space-time norms and convergence studies.

mod exact;
mod norms;
mod report;

pub use exact::{forcings, moment_forcing, momentum_forcing, ExactSolution, TrigSolution, ZeroSolution};
pub use norms::{convergence_rate, discrete_l2_norm, discrete_linf_norm};
pub use report::{format_sci, ErrorRow, Rates, StudyReport, CSV_HEADER};

use crate::real::Real;
use crate::scheme::{Forcing, PhysParams};

/// Forcing induced by an exact solution through [`forcings`].
#[derive(Debug, Clone)]
pub struct ManufacturedForcing<S, T> {
    pub solution: S,
    pub params: PhysParams<T>,
}

impl<T: Real, S: ExactSolution<T>> Forcing<T> for ManufacturedForcing<S, T> {
    fn momentum(&self, t: T, x: T, y: T) -> [T; 2] {
        momentum_forcing(&self.solution, t, x, y, &self.params)
    }

    fn moment(&self, t: T, x: T, y: T) -> T {
        moment_forcing(&self.solution, t, x, y, &self.params)
    }
}
