//! Finite element solver for the planar micropolar Navier-Stokes equations
//! using a decoupled fractional (pressure-correction) time stepping scheme.
//!
//! Linear and angular velocities use continuous Q2 elements and the pressure
//! continuous Q1 elements on uniform quadrilateral meshes of a square. All
//! numerical code is generic over [`Real`]; the `*64` aliases below fix the
//! scalar to `f64`.

pub mod cli;
pub mod error;
pub mod femops;
pub mod mesh;
pub mod mms;
pub mod real;
pub mod scheme;
pub mod sparsela;

pub use error::{Error, Result};
pub use real::Real;

pub type Mesh64 = mesh::Mesh<f64>;
pub type DofMap64 = mesh::DofMap<f64>;
pub type CsrMatrix64 = sparsela::CsrMatrix<f64>;
pub type FieldVector64 = femops::FieldVector<f64>;
pub type PhysParams64 = scheme::PhysParams<f64>;
pub type TimeGrid64 = scheme::TimeGrid<f64>;
pub type TimeState64 = scheme::TimeState<f64>;
pub type Stepper64 = scheme::FractionalStepper<f64>;

pub type Mesh32 = mesh::Mesh<f32>;
pub type CsrMatrix32 = sparsela::CsrMatrix<f32>;
pub type Stepper32 = scheme::FractionalStepper<f32>;
