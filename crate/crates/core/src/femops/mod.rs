//! Reference-element bases, quadrature, discrete fields and form assembly.

mod assembly;
mod basis;
mod field;
mod quadrature;

pub use assembly::{
    assemble_convection, assemble_convection_into, assemble_curl_scalar_to_vector, assemble_curl_vector_to_scalar,
    assemble_divergence, assemble_load, assemble_mass, assemble_pressure_gradient, assemble_stiffness,
    basis_integrals, default_quadrature_degree, error_norms, l2_project, scalar_pattern,
};
pub use basis::{lagrange_1d, Tabulation};
pub use field::FieldVector;
pub use quadrature::{quadrature_rule, GaussLegendre, QuadratureRule};
