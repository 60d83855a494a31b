//! Tensor-product Gauss-Legendre rules on the reference square `[-1, 1]^2`.

use crate::real::Real;

/// One-dimensional Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub points: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
        let nf = T::from_usize_lossy(n);
        let two = T::lit(2.0);
        let mut points = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            // Tricomi-style initial guess, then Newton on P_n.
            let mut x = (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = two / ((T::one() - x * x) * dp * dp);
            points[i] = -x;
            points[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            points[n / 2] = T::zero();
        }
        Self { points, weights }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Tensor Gauss-Legendre rule on `[-1, 1]^2`; points are ordered with `xi` fastest.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    pub points: Vec<[T; 2]>,
    pub weights: Vec<T>,
    /// Per-coordinate polynomial degree integrated exactly.
    pub degree: usize,
    line: GaussLegendre<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn line(&self) -> &GaussLegendre<T> {
        &self.line
    }

    /// Integral of `f` over the reference square.
    pub fn integrate<F: Fn(T, T) -> T>(&self, f: F) -> T {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p[0], p[1]))
            .sum()
    }

    /// Integral of `f` over the axis-aligned box `[a0, a1] x [b0, b1]`.
    pub fn integrate_box<F: Fn(T, T) -> T>(&self, a: [T; 2], b: [T; 2], f: F) -> T {
        let two = T::lit(2.0);
        let (hx, hy) = ((a[1] - a[0]) / two, (b[1] - b[0]) / two);
        let (cx, cy) = ((a[1] + a[0]) / two, (b[1] + b[0]) / two);
        hx * hy * self.integrate(|xi, eta| f(cx + hx * xi, cy + hy * eta))
    }
}

/// Gauss-Legendre tensor rule exact for polynomials of degree `poly_degree`
/// in each coordinate.
pub fn quadrature_rule<T: Real>(poly_degree: usize) -> QuadratureRule<T> {
    let n = poly_degree / 2 + 1;
    let line = GaussLegendre::new(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            points.push([line.points[i], line.points[j]]);
            weights.push(line.weights[i] * line.weights[j]);
        }
    }
    QuadratureRule {
        points,
        weights,
        degree: 2 * n - 1,
        line,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_over_reference() {
        let q = quadrature_rule::<f64>(0);
        assert_eq!(q.len(), 1);
        assert!((q.integrate(|_, _| 1.0) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn mapped_monomial() {
        let q = quadrature_rule::<f64>(2);
        let v = q.integrate_box([0.0, 1.0], [0.0, 1.0], |x, y| x * x * y * y);
        assert!((v - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn odd_monomial_vanishes() {
        let q = quadrature_rule::<f64>(5);
        assert!(q.integrate(|x, y| x.powi(5) * y.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn exact_to_declared_degree() {
        for deg in 0..12 {
            let q = quadrature_rule::<f64>(deg);
            assert!((q.weights.iter().sum::<f64>() - 4.0).abs() < 1e-13);
            assert!(q.weights.iter().all(|&w| w > 0.0));
            for a in 0..=deg {
                for b in 0..=deg {
                    let exact = mono(a) * mono(b);
                    let v = q.integrate(|x, y| x.powi(a as i32) * y.powi(b as i32));
                    assert!((v - exact).abs() < 1e-12, "deg {deg}: x^{a} y^{b}: {v} vs {exact}");
                }
            }
        }
    }

    fn mono(a: usize) -> f64 {
        if a % 2 == 1 {
            0.0
        } else {
            2.0 / (a as f64 + 1.0)
        }
    }

    #[test]
    fn single_precision_rule() {
        let q = quadrature_rule::<f32>(6);
        assert_eq!(q.len(), 16);
        let v = q.integrate(|x, y| x.powi(6) * y.powi(4));
        assert!((v - (2.0 / 7.0) * (2.0 / 5.0)).abs() < 1e-6);
    }
}
