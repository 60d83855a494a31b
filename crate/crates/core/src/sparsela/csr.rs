use crate::error::{Error, Result};
use crate::real::Real;

/// Compressed sparse row matrix with sorted, unique column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Zero matrix with the given pattern. `rows[i]` must be sorted and unique.
    pub fn from_pattern(nrows: usize, ncols: usize, rows: &[Vec<usize>]) -> Self {
        assert_eq!(rows.len(), nrows);
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for r in rows {
            debug_assert!(r.windows(2).all(|w| w[0] < w[1]));
            debug_assert!(r.last().is_none_or(|&c| c < ncols));
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        let values = vec![T::zero(); col_idx.len()];
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    /// Sums duplicate entries. Explicit zeros are kept in the pattern.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, T)> = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= nrows {
                return Err(Error::IndexOutOfRange { index: i, dim: nrows });
            }
            if j >= ncols {
                return Err(Error::IndexOutOfRange { index: j, dim: ncols });
            }
        }
        sorted.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<T> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { nrows, ncols, row_ptr, col_idx, values })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    /// Dense row-major input; zeros are dropped.
    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut trip = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols);
            for (j, &v) in r.iter().enumerate() {
                if v != T::zero() {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(nrows, ncols, &trip).expect("indices in range")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn same_pattern(&self, other: &Self) -> bool {
        self.nrows == other.nrows
            && self.ncols == other.ncols
            && self.row_ptr == other.row_ptr
            && self.col_idx == other.col_idx
    }

    /// Position of `(i, j)` in the value array.
    #[inline]
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi].binary_search(&j).ok().map(|k| lo + k)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.find(i, j).map_or(T::zero(), |k| self.values[k])
    }

    /// Adds `v` to an entry that must already be in the pattern.
    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        let k = self
            .find(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) not in sparsity pattern"));
        self.values[k] += v;
    }

    pub fn fill_zero(&mut self) {
        self.values.iter_mut().for_each(|v| *v = T::zero());
    }

    /// `y = A x`
    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = T::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `y = A^T x`
    pub fn tr_mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![T::zero(); self.ncols];
        for (i, &xi) in x.iter().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[k]] += self.values[k] * xi;
            }
        }
        y
    }

    /// `x^T A y`
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        assert_eq!(x.len(), self.nrows);
        assert_eq!(y.len(), self.ncols);
        let mut s = T::zero();
        for (i, &xi) in x.iter().enumerate() {
            let mut r = T::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                r += self.values[k] * y[self.col_idx[k]];
            }
            s += xi * r;
        }
        s
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                let dst = next[j];
                col_idx[dst] = i;
                values[dst] = self.values[k];
                next[j] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn scale(&mut self, alpha: T) {
        self.values.iter_mut().for_each(|v| *v *= alpha);
    }

    /// `sum_k alpha_k A_k` over matrices of equal shape.
    pub fn linear_combination(terms: &[(T, &CsrMatrix<T>)]) -> Self {
        let (_, first) = terms.first().expect("at least one term");
        assert!(terms
            .iter()
            .all(|(_, m)| m.nrows == first.nrows && m.ncols == first.ncols));
        if terms.iter().all(|(_, m)| m.same_pattern(first)) {
            let mut out = (*first).clone();
            out.fill_zero();
            for (alpha, m) in terms {
                for (o, &v) in out.values.iter_mut().zip(&m.values) {
                    *o += *alpha * v;
                }
            }
            return out;
        }
        let mut trip = Vec::with_capacity(terms.iter().map(|(_, m)| m.nnz()).sum());
        for (alpha, m) in terms {
            for i in 0..m.nrows {
                for k in m.row_ptr[i]..m.row_ptr[i + 1] {
                    trip.push((i, m.col_idx[k], *alpha * m.values[k]));
                }
            }
        }
        Self::from_triplets(first.nrows, first.ncols, &trip).expect("shapes checked")
    }

    /// Block matrix from a grid of optional blocks. Every block row needs at least
    /// one block to fix its height, likewise for block columns.
    pub fn block(grid: &[Vec<Option<&CsrMatrix<T>>>]) -> Self {
        let brows = grid.len();
        let bcols = grid.first().map_or(0, Vec::len);
        let heights: Vec<usize> = (0..brows)
            .map(|bi| {
                grid[bi]
                    .iter()
                    .flatten()
                    .map(|m| m.nrows)
                    .next()
                    .expect("empty block row")
            })
            .collect();
        let widths: Vec<usize> = (0..bcols)
            .map(|bj| {
                grid.iter()
                    .filter_map(|r| r[bj])
                    .map(|m| m.ncols)
                    .next()
                    .expect("empty block column")
            })
            .collect();
        let col_off: Vec<usize> = widths
            .iter()
            .scan(0, |acc, &w| {
                let o = *acc;
                *acc += w;
                Some(o)
            })
            .collect();
        let nrows = heights.iter().sum();
        let ncols = widths.iter().sum();

        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for (bi, row_blocks) in grid.iter().enumerate() {
            for b in row_blocks.iter().flatten() {
                assert_eq!(b.nrows, heights[bi], "block heights disagree");
            }
            for i in 0..heights[bi] {
                for (bj, b) in row_blocks.iter().enumerate() {
                    if let Some(m) = b {
                        assert_eq!(m.ncols, widths[bj], "block widths disagree");
                        for k in m.row_ptr[i]..m.row_ptr[i + 1] {
                            col_idx.push(col_off[bj] + m.col_idx[k]);
                            values.push(m.values[k]);
                        }
                    }
                }
                row_ptr.push(col_idx.len());
            }
        }
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    /// `diag(A, A, ..., A)` with `copies` blocks.
    pub fn block_diag(a: &CsrMatrix<T>, copies: usize) -> Self {
        let grid: Vec<Vec<Option<&CsrMatrix<T>>>> = (0..copies)
            .map(|i| (0..copies).map(|j| (i == j).then_some(a)).collect())
            .collect();
        Self::block(&grid)
    }

    pub fn max_abs(&self) -> T {
        crate::real::max_abs(&self.values)
    }

    /// Largest entrywise difference, over the union of both patterns.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let d = Self::linear_combination(&[(T::one(), self), (-T::one(), other)]);
        d.max_abs()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (i, row) in out.iter_mut().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                row[self.col_idx[k]] += self.values[k];
            }
        }
        out
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.nrows == self.ncols && self.max_abs_diff(&self.transpose()) <= tol
    }
}
