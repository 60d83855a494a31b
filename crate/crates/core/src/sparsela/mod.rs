//! Sparse storage, Krylov solvers and constraint handling.

mod constraints;
mod csr;
mod krylov;
mod precond;

pub use constraints::{apply_dirichlet, constrain_matrix, enforce_zero_mean, lift_rhs, subtract_mean};
pub use csr::CsrMatrix;
pub use krylov::{cg_solve, cg_solve_deflated, gmres_solve, SolveReport, SolverOptions};
pub use precond::{IdentityPreconditioner, Ilu0, Jacobi, Preconditioner, PreconditionerKind};
