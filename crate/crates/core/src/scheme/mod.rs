//! Material parameters, time grids and the fractional stepper.

mod params;
mod stepper;

pub use params::{PhysParams, TimeGrid};
pub use stepper::{FnForcing, Forcing, FractionalStepper, SchemeSettings, TimeState, ZeroForcing};
