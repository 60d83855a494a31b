//! Uniform quadrilateral meshes of a square and Lagrange degree-of-freedom maps.
//!
//! Cells are numbered lexicographically, `cell = cj * n + ci`, with `ci` running
//! along x. Vertices of a cell are listed counter-clockwise starting from the
//! lower-left corner.
//!
//! Degrees of freedom of an order-`p` scalar space live on the lattice of
//! `(p*n + 1)^2` support points, numbered `j * (p*n + 1) + i`. Vector spaces are
//! component-blocked: dof `c * scalar_count + node` is component `c` of `node`.

use crate::error::{Error, Result};
use crate::real::Real;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Self {
        Self { x0, x1, y0, y1 }
    }

    /// `[-1, 1]^2`, the experiment domain.
    pub fn reference() -> Self {
        Self::new(-T::one(), T::one(), -T::one(), T::one())
    }

    pub fn unit() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::one())
    }

    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn on_boundary(&self, p: [T; 2], tol: T) -> bool {
        (p[0] - self.x0).abs() <= tol
            || (p[0] - self.x1).abs() <= tol
            || (p[1] - self.y0).abs() <= tol
            || (p[1] - self.y1).abs() <= tol
    }
}

#[derive(Debug, Clone)]
pub struct Mesh<T> {
    domain: Rect<T>,
    n: usize,
    vertices: Vec<[T; 2]>,
    cells: Vec<[usize; 4]>,
}

/// Builds an `n x n` mesh of square cells covering `domain`.
///
/// Only square domains are accepted so that every cell is a square of side `h`.
pub fn build_uniform_mesh<T: Real>(n: usize, domain: Rect<T>) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::InvalidMesh("need at least one cell per side".into()));
    }
    let (w, ht) = (domain.width(), domain.height());
    if !(w > T::zero() && ht > T::zero()) || !w.is_finite() || !ht.is_finite() {
        return Err(Error::InvalidMesh(format!(
            "domain [{}, {}] x [{}, {}] has no area",
            domain.x0, domain.x1, domain.y0, domain.y1
        )));
    }
    if (w - ht).abs() > T::epsilon() * T::lit(16.0) * w {
        return Err(Error::InvalidMesh(format!(
            "square cells need a square domain, got {w} x {ht}"
        )));
    }

    let nv = n + 1;
    let h = w / T::from_usize_lossy(n);
    let mut vertices = Vec::with_capacity(nv * nv);
    for j in 0..nv {
        for i in 0..nv {
            vertices.push([
                lattice(domain.x0, domain.x1, i, n),
                lattice(domain.y0, domain.y1, j, n),
            ]);
        }
    }
    debug_assert!(h > T::zero());

    let mut cells = Vec::with_capacity(n * n);
    for cj in 0..n {
        for ci in 0..n {
            let v = cj * nv + ci;
            cells.push([v, v + 1, v + nv + 1, v + nv]);
        }
    }
    Ok(Mesh { domain, n, vertices, cells })
}

/// Point `i` of `n` uniform intervals on `[a, b]`; endpoints are reproduced exactly.
fn lattice<T: Real>(a: T, b: T, i: usize, n: usize) -> T {
    if i == n {
        return b;
    }
    let s = T::from_usize_lossy(i) / T::from_usize_lossy(n);
    a + (b - a) * s
}

impl<T: Real> Mesh<T> {
    pub fn domain(&self) -> Rect<T> {
        self.domain
    }

    pub fn cells_per_side(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> T {
        self.domain.width() / T::from_usize_lossy(self.n)
    }

    pub fn cells(&self) -> &[[usize; 4]] {
        &self.cells
    }

    pub fn vertices(&self) -> &[[T; 2]] {
        &self.vertices
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Lower-left corner of `cell`.
    pub fn cell_origin(&self, cell: usize) -> [T; 2] {
        self.vertices[self.cells[cell][0]]
    }

    pub fn cell_area(&self, cell: usize) -> T {
        let [a, b, c, d] = self.cells[cell].map(|v| self.vertices[v]);
        // shoelace
        let twice = (a[0] * b[1] - b[0] * a[1])
            + (b[0] * c[1] - c[0] * b[1])
            + (c[0] * d[1] - d[0] * c[1])
            + (d[0] * a[1] - a[0] * d[1]);
        twice / T::lit(2.0)
    }
}

/// Continuous Lagrange space of order 1 or 2 with 1 or 2 components on a [`Mesh`].
#[derive(Debug, Clone)]
pub struct DofMap<T> {
    order: usize,
    components: usize,
    domain: Rect<T>,
    n: usize,
    /// Per-cell scalar node indices, `(order+1)^2` per cell, tensor ordered.
    cell_nodes: Vec<usize>,
    points: Vec<[T; 2]>,
    boundary: Vec<usize>,
    boundary_mask: Vec<bool>,
}

pub fn build_dof_map<T: Real>(mesh: &Mesh<T>, order: usize, components: usize) -> Result<DofMap<T>> {
    if !(1..=2).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    if !(1..=2).contains(&components) {
        return Err(Error::SpaceMismatch(format!(
            "{components} components requested, only 1 or 2 supported"
        )));
    }
    let n = mesh.cells_per_side();
    let domain = mesh.domain();
    let side = order * n + 1;
    let scalar = side * side;

    let mut points = Vec::with_capacity(scalar);
    for j in 0..side {
        for i in 0..side {
            points.push([
                lattice(domain.x0, domain.x1, i, order * n),
                lattice(domain.y0, domain.y1, j, order * n),
            ]);
        }
    }

    let per_cell = (order + 1) * (order + 1);
    let mut cell_nodes = Vec::with_capacity(n * n * per_cell);
    for cj in 0..n {
        for ci in 0..n {
            for b in 0..=order {
                for a in 0..=order {
                    cell_nodes.push((order * cj + b) * side + order * ci + a);
                }
            }
        }
    }

    let mut scalar_mask = vec![false; scalar];
    for j in 0..side {
        for i in 0..side {
            if i == 0 || j == 0 || i + 1 == side || j + 1 == side {
                scalar_mask[j * side + i] = true;
            }
        }
    }
    let mut boundary = Vec::with_capacity(components * 4 * order * n);
    let mut boundary_mask = Vec::with_capacity(components * scalar);
    for c in 0..components {
        boundary.extend(
            scalar_mask
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| c * scalar + i),
        );
        boundary_mask.extend_from_slice(&scalar_mask);
    }

    Ok(DofMap {
        order,
        components,
        domain,
        n,
        cell_nodes,
        points,
        boundary,
        boundary_mask,
    })
}

impl<T: Real> DofMap<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn domain(&self) -> Rect<T> {
        self.domain
    }

    pub fn cells_per_side(&self) -> usize {
        self.n
    }

    pub fn n_cells(&self) -> usize {
        self.n * self.n
    }

    pub fn h(&self) -> T {
        self.domain.width() / T::from_usize_lossy(self.n)
    }

    /// Scalar node count, `(order*n + 1)^2`.
    pub fn scalar_count(&self) -> usize {
        self.points.len()
    }

    pub fn n_dofs(&self) -> usize {
        self.components * self.scalar_count()
    }

    pub fn nodes_per_cell(&self) -> usize {
        (self.order + 1) * (self.order + 1)
    }

    /// Scalar node indices of `cell` in tensor order (x fastest).
    pub fn cell_nodes(&self, cell: usize) -> &[usize] {
        let k = self.nodes_per_cell();
        &self.cell_nodes[cell * k..(cell + 1) * k]
    }

    pub fn cell_origin(&self, cell: usize) -> [T; 2] {
        let (ci, cj) = (cell % self.n, cell / self.n);
        [
            lattice(self.domain.x0, self.domain.x1, ci, self.n),
            lattice(self.domain.y0, self.domain.y1, cj, self.n),
        ]
    }

    /// Support point of scalar node `node`.
    pub fn point(&self, node: usize) -> [T; 2] {
        self.points[node]
    }

    pub fn points(&self) -> &[[T; 2]] {
        &self.points
    }

    /// Sorted dof indices on the boundary, all components.
    pub fn boundary_dofs(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_boundary(&self, dof: usize) -> bool {
        self.boundary_mask[dof]
    }

    /// Whether `other` discretizes the same mesh.
    pub fn same_mesh(&self, other: &DofMap<T>) -> bool {
        self.n == other.n && self.domain == other.domain
    }

    /// Same space with a single component.
    pub fn scalar(&self) -> DofMap<T> {
        let s = self.scalar_count();
        DofMap {
            order: self.order,
            components: 1,
            domain: self.domain,
            n: self.n,
            cell_nodes: self.cell_nodes.clone(),
            points: self.points.clone(),
            boundary: self.boundary.iter().copied().filter(|&d| d < s).collect(),
            boundary_mask: self.boundary_mask[..s].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn experiment_mesh_sizes() {
        let mesh = build_uniform_mesh(256, Rect::<f64>::reference()).unwrap();
        assert_eq!(mesh.n_cells(), 65536);
        assert_eq!(build_dof_map(&mesh, 2, 1).unwrap().n_dofs(), 263169);
        assert_eq!(build_dof_map(&mesh, 2, 2).unwrap().n_dofs(), 526338);
        assert_eq!(build_dof_map(&mesh, 1, 1).unwrap().n_dofs(), 66049);
    }

    #[test]
    fn small_meshes() {
        let m = build_uniform_mesh(1, Rect::<f64>::unit()).unwrap();
        assert_eq!((m.n_cells(), m.n_vertices()), (1, 4));
        let m = build_uniform_mesh(4, Rect::<f64>::reference()).unwrap();
        assert_eq!((m.n_cells(), m.n_vertices()), (16, 25));
        assert_eq!(m.h(), 0.5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_uniform_mesh(0, Rect::<f64>::unit()).is_err());
        assert!(build_uniform_mesh(2, Rect::new(0.0, 0.0, 0.0, 1.0)).is_err());
        assert!(build_uniform_mesh(2, Rect::new(0.0, 2.0, 0.0, 1.0)).is_err());
        let m = build_uniform_mesh(2, Rect::<f64>::unit()).unwrap();
        assert!(matches!(build_dof_map(&m, 3, 1), Err(Error::UnsupportedOrder(3))));
        assert!(matches!(build_dof_map(&m, 0, 1), Err(Error::UnsupportedOrder(0))));
    }

    #[test]
    fn vector_layout_is_component_blocked() {
        let m = build_uniform_mesh(2, Rect::<f64>::unit()).unwrap();
        let d = build_dof_map(&m, 2, 2).unwrap();
        let s = d.scalar_count();
        assert_eq!(s, 25);
        assert_eq!(d.boundary_dofs().len(), 2 * 16);
        for &b in d.boundary_dofs() {
            assert!(d.is_boundary(b));
            assert!(d.is_boundary((b + s) % (2 * s)));
        }
        assert_eq!(d.scalar().n_dofs(), s);
    }

    #[test]
    fn f32_mesh() {
        let m = build_uniform_mesh(8, Rect::<f32>::reference()).unwrap();
        assert_eq!(m.h(), 0.25f32);
        assert_eq!(m.vertices()[80], [1.0f32, 1.0]);
    }

    proptest! {
        #[test]
        fn dof_counts_and_tiling(n in 1usize..12, order in 1usize..=2) {
            let m = build_uniform_mesh(n, Rect::<f64>::reference()).unwrap();
            prop_assert_eq!(m.n_cells(), n * n);
            prop_assert_eq!(m.n_vertices(), (n + 1) * (n + 1));
            let area: f64 = (0..m.n_cells()).map(|c| m.cell_area(c)).sum();
            prop_assert!((area - 4.0).abs() < 1e-12);
            for c in 0..m.n_cells() {
                let [a, b, cc, d] = m.cells()[c].map(|v| m.vertices()[v]);
                let h = m.h();
                prop_assert!((b[0] - a[0] - h).abs() < 1e-12 && (b[1] - a[1]).abs() < 1e-14);
                prop_assert!((cc[0] - b[0]).abs() < 1e-14 && (cc[1] - b[1] - h).abs() < 1e-12);
                prop_assert!((d[0] - a[0]).abs() < 1e-14 && (d[1] - a[1] - h).abs() < 1e-12);
            }

            let d = build_dof_map(&m, order, 1).unwrap();
            prop_assert_eq!(d.n_dofs(), (order * n + 1).pow(2));
            prop_assert_eq!(d.boundary_dofs().len(), 4 * order * n);
            let dom = m.domain();
            for (i, p) in d.points().iter().enumerate() {
                prop_assert_eq!(d.is_boundary(i), dom.on_boundary(*p, 1e-12));
            }
            // every cell's nodes sit inside that cell
            for c in 0..d.n_cells() {
                let o = d.cell_origin(c);
                for &node in d.cell_nodes(c) {
                    let p = d.point(node);
                    prop_assert!(p[0] >= o[0] - 1e-12 && p[0] <= o[0] + m.h() + 1e-12);
                    prop_assert!(p[1] >= o[1] - 1e-12 && p[1] <= o[1] + m.h() + 1e-12);
                }
            }
        }
    }
}
