//! Tensor-product Lagrange bases on the reference square tabulated at quadrature points.

use super::quadrature::QuadratureRule;
use crate::real::Real;

/// Value and derivative of the 1D Lagrange polynomial `a` on `order + 1`
/// equispaced nodes of `[-1, 1]`.
pub fn lagrange_1d<T: Real>(order: usize, a: usize, x: T) -> (T, T) {
    let node = |k: usize| -T::one() + T::lit(2.0) * T::from_usize_lossy(k) / T::from_usize_lossy(order);
    let xa = node(a);
    let mut value = T::one();
    let mut deriv = T::zero();
    for k in (0..=order).filter(|&k| k != a) {
        let denom = xa - node(k);
        // product rule, accumulated in one pass
        deriv = deriv * (x - node(k)) / denom + value / denom;
        value = value * (x - node(k)) / denom;
    }
    (value, deriv)
}

/// Reference basis values and gradients at every point of a quadrature rule.
///
/// Index layout is `q * n_basis + k`.
#[derive(Debug, Clone)]
pub struct Tabulation<T> {
    pub order: usize,
    pub n_basis: usize,
    pub n_points: usize,
    pub values: Vec<T>,
    pub grads: Vec<[T; 2]>,
}

impl<T: Real> Tabulation<T> {
    pub fn new(order: usize, quad: &QuadratureRule<T>) -> Self {
        let per = order + 1;
        let n_basis = per * per;
        let mut values = Vec::with_capacity(quad.len() * n_basis);
        let mut grads = Vec::with_capacity(quad.len() * n_basis);
        for p in &quad.points {
            for b in 0..per {
                let (vy, dy) = lagrange_1d(order, b, p[1]);
                for a in 0..per {
                    let (vx, dx) = lagrange_1d(order, a, p[0]);
                    values.push(vx * vy);
                    grads.push([dx * vy, vx * dy]);
                }
            }
        }
        Self {
            order,
            n_basis,
            n_points: quad.len(),
            values,
            grads,
        }
    }

    #[inline]
    pub fn value(&self, q: usize, k: usize) -> T {
        self.values[q * self.n_basis + k]
    }

    #[inline]
    pub fn grad(&self, q: usize, k: usize) -> [T; 2] {
        self.grads[q * self.n_basis + k]
    }

    #[inline]
    pub fn values_at(&self, q: usize) -> &[T] {
        &self.values[q * self.n_basis..(q + 1) * self.n_basis]
    }

    #[inline]
    pub fn grads_at(&self, q: usize) -> &[[T; 2]] {
        &self.grads[q * self.n_basis..(q + 1) * self.n_basis]
    }
}
