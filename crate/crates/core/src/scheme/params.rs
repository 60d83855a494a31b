use crate::error::{Error, Result};
use crate::real::Real;

/// Material constants of the micropolar model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams<T> {
    /// microinertia
    pub j: T,
    pub nu: T,
    /// vortex viscosity
    pub nu_r: T,
    pub c0: T,
    pub ca: T,
    pub cd: T,
}

impl<T: Real> PhysParams<T> {
    /// Validates positivity of all six constants and of `c2 = c0 + cd - ca`.
    pub fn new(j: T, nu: T, nu_r: T, c0: T, ca: T, cd: T) -> Result<Self> {
        let p = Self { j, nu, nu_r, c0, ca, cd };
        p.validate()?;
        Ok(p)
    }

    /// All constants equal to one.
    pub fn unit() -> Self {
        let one = T::one();
        Self { j: one, nu: one, nu_r: one, c0: one, ca: one, cd: one }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("j", self.j),
            ("nu", self.nu),
            ("nu_r", self.nu_r),
            ("c0", self.c0),
            ("ca", self.ca),
            ("cd", self.cd),
        ] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.c2().partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidParams(format!(
                "c2 = c0 + cd - ca must be positive, got {}",
                self.c2()
            )));
        }
        Ok(())
    }

    pub fn nu0(&self) -> T {
        self.nu + self.nu_r
    }

    pub fn c1(&self) -> T {
        self.ca + self.cd
    }

    /// Grad-div coefficient; it multiplies a term that vanishes for the scalar
    /// angular velocity of the planar model, but must still be positive.
    pub fn c2(&self) -> T {
        self.c0 + self.cd - self.ca
    }
}

/// Uniform partition `t_k = k T / K` of `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    final_time: T,
    steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(final_time: T, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidTimeGrid("need at least one step".into()));
        }
        if !(final_time.is_finite() && final_time > T::zero()) {
            return Err(Error::InvalidTimeGrid(format!("final time must be positive, got {final_time}")));
        }
        Ok(Self { final_time, steps })
    }

    /// Grid with step `tau`; `T / tau` must be an integer to rounding accuracy.
    pub fn from_step(final_time: T, tau: T) -> Result<Self> {
        if !(tau.is_finite() && tau > T::zero()) {
            return Err(Error::InvalidTimeGrid(format!("time step must be positive, got {tau}")));
        }
        let ratio = final_time / tau;
        let k = ratio.round();
        if k < T::one() || (ratio - k).abs() > T::lit(1e-9) * k.max(T::one()) {
            return Err(Error::InvalidTimeGrid(format!(
                "T = {final_time} is not an integer multiple of tau = {tau}"
            )));
        }
        Self::new(final_time, k.to_usize().expect("finite step count"))
    }

    pub fn final_time(&self) -> T {
        self.final_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn tau(&self) -> T {
        self.final_time / T::from_usize_lossy(self.steps)
    }

    /// `t_k`; `time(K)` is exactly `T`.
    pub fn time(&self, k: usize) -> T {
        self.final_time * (T::from_usize_lossy(k) / T::from_usize_lossy(self.steps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants() {
        let p = PhysParams::new(2.0, 1.0, 0.5, 3.0, 1.5, 0.25).unwrap();
        assert_eq!(p.nu0(), 1.5);
        assert_eq!(p.c1(), 1.75);
        assert_eq!(p.c2(), 1.75);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(PhysParams::new(1.0, 1.0, 1.0, 1.0, 3.0, 1.0).is_err());
        assert!(PhysParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysParams::new(1.0, f64::NAN, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysParams::<f64>::unit().validate().is_ok());
    }

    #[test]
    fn time_grid() {
        let g = TimeGrid::from_step(1.0, 0.1).unwrap();
        assert_eq!(g.steps(), 10);
        assert_eq!(g.time(10), 1.0);
        assert_eq!(g.time(0), 0.0);
        assert!(TimeGrid::from_step(1.0, 0.3).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
        let g = TimeGrid::from_step(10.0, 0.00625).unwrap();
        assert_eq!(g.steps(), 1600);
        assert_eq!(g.time(1600), 10.0);
        for k in 0..=g.steps() {
            assert!((g.time(k) - k as f64 * 0.00625).abs() < 1e-12);
        }
    }
}
