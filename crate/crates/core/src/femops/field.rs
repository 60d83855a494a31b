use crate::error::{Error, Result};
use crate::mesh::DofMap;
use crate::real::Real;

/// Coefficients of a discrete field on a [`DofMap`], component-blocked.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldVector<T> {
    order: usize,
    components: usize,
    values: Vec<T>,
}

impl<T: Real> FieldVector<T> {
    pub fn zeros(map: &DofMap<T>) -> Self {
        Self {
            order: map.order(),
            components: map.components(),
            values: vec![T::zero(); map.n_dofs()],
        }
    }

    pub fn from_values(map: &DofMap<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != map.n_dofs() {
            return Err(Error::SpaceMismatch(format!(
                "{} coefficients for a space with {} dofs",
                values.len(),
                map.n_dofs()
            )));
        }
        Ok(Self {
            order: map.order(),
            components: map.components(),
            values,
        })
    }

    /// Nodal interpolant of `f(x, y, component)`.
    pub fn interpolate<F: Fn(T, T, usize) -> T>(map: &DofMap<T>, f: F) -> Self {
        let s = map.scalar_count();
        let mut values = Vec::with_capacity(map.n_dofs());
        for c in 0..map.components() {
            values.extend((0..s).map(|i| {
                let p = map.point(i);
                f(p[0], p[1], c)
            }));
        }
        Self {
            order: map.order(),
            components: map.components(),
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn component(&self, c: usize) -> &[T] {
        let s = self.values.len() / self.components;
        &self.values[c * s..(c + 1) * s]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [T] {
        let s = self.values.len() / self.components;
        &mut self.values[c * s..(c + 1) * s]
    }

    /// Errors unless the field lives on `map`'s space.
    pub fn check(&self, map: &DofMap<T>) -> Result<()> {
        if self.order != map.order() || self.components != map.components() || self.values.len() != map.n_dofs() {
            return Err(Error::SpaceMismatch(format!(
                "field (order {}, {} components, {} dofs) vs space (order {}, {} components, {} dofs)",
                self.order,
                self.components,
                self.values.len(),
                map.order(),
                map.components(),
                map.n_dofs()
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, alpha: T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    pub fn max_abs(&self) -> T {
        crate::real::max_abs(&self.values)
    }
}
