//! Dense exact linear algebra over the rationals.
//!
//! Matrices act on column vectors: `(M v)_i = Σ_j M[i][j] v_j`. Every routine
//! pivots deterministically (leftmost nonzero column, topmost nonzero row), so
//! results are reproducible bit-for-bit.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::scalar::{q, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn scalar(n: usize, s: Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    /// Builds from rows; all rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self, LinalgError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Dimension(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols, data })
    }

    /// Integer matrix literal; panics on ragged input (test and model helper).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix literal");
                r.iter().map(|&x| q(x))
            })
            .collect();
        Matrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape {:?} * {:?}", self.shape(), other.shape());
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        s += a * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn add_assign_scaled(&mut self, other: &Matrix, s: &Scalar) {
        assert_eq!(self.shape(), other.shape());
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Sub-block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Matrix {
        let mut b = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                b[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel(&self) -> Subspace {
        kernel(self)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// Maximum absolute entry (zero for empty matrices).
    pub fn max_abs(&self) -> Scalar {
        use num_traits::Signed;
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Scalar::zero)
    }
}

/// Solves `M x = b`; free variables are set to zero.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::Dimension(format!("right-hand side of length {} for {} rows", b.len(), m.rows)));
    }
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    aug.set_block(0, 0, m);
    for (i, x) in b.iter().enumerate() {
        aug[(i, m.cols)] = x.clone();
    }
    let (r, piv) = aug.rref();
    if piv.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Scalar::zero(); m.cols];
    for (row, &c) in piv.iter().enumerate() {
        x[c] = r[(row, m.cols)].clone();
    }
    Ok(Some(x))
}

/// Null space, one basis vector per free column in increasing column order.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, piv) = m.rref();
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; m.cols];
    for &c in &piv {
        is_pivot[c] = true;
    }
    for f in 0..m.cols {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![Scalar::zero(); m.cols];
        v[f] = Scalar::one();
        for (row, &c) in piv.iter().enumerate() {
            v[c] = -r[(row, f)].clone();
        }
        basis.push(v);
    }
    Subspace { ambient_dim: m.cols, basis }
}

/// Column space of `m` as a subspace in reduced form.
pub fn image(m: &Matrix) -> Subspace {
    let cols: Vec<Vec<Scalar>> = (0..m.cols).map(|j| m.column(j)).collect();
    Subspace::span(m.rows, &cols)
}

/// Which end of the coordinate order the greedy complement starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplementOrder {
    /// Standard basis vectors at non-pivot positions of the reduced form.
    #[default]
    LowestFirst,
    /// Same rule after reversing coordinates.
    HighestFirst,
}

/// A subspace of `ℚ^n` with an independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![Scalar::zero(); n];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Subspace { ambient_dim: n, basis }
    }

    /// Span of arbitrary vectors, stored as the nonzero rows of the reduced
    /// echelon form.
    pub fn span(n: usize, vectors: &[Vec<Scalar>]) -> Self {
        let rows: Vec<Vec<Scalar>> = vectors.to_vec();
        let m = Matrix::from_rows(rows, n).expect("vectors of ambient length");
        let (r, piv) = m.rref();
        let basis = (0..piv.len()).map(|i| r.row(i)).collect();
        Subspace { ambient_dim: n, basis }
    }

    /// Wraps vectors already known to be independent, keeping their order.
    pub fn from_independent(n: usize, basis: Vec<Vec<Scalar>>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == n));
        Subspace { ambient_dim: n, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        solve(&self.basis_matrix(), v).expect("ambient length")
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Pivot columns of the reduced form of this subspace.
    pub fn pivots(&self) -> Vec<usize> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        Matrix::from_rows(self.basis.clone(), self.ambient_dim).unwrap().rref().1
    }

    /// Greedy coordinate complement, lowest index first.
    pub fn complement(&self) -> Subspace {
        self.complement_with(ComplementOrder::LowestFirst)
    }

    pub fn complement_with(&self, order: ComplementOrder) -> Subspace {
        let n = self.ambient_dim;
        let perm: Vec<usize> = match order {
            ComplementOrder::LowestFirst => (0..n).collect(),
            ComplementOrder::HighestFirst => (0..n).rev().collect(),
        };
        let mut taken = vec![false; n];
        if !self.basis.is_empty() {
            let permuted: Vec<Vec<Scalar>> =
                self.basis.iter().map(|v| perm.iter().map(|&i| v[i].clone()).collect()).collect();
            let (_, piv) = Matrix::from_rows(permuted, n).unwrap().rref();
            for p in piv {
                taken[perm[p]] = true;
            }
        }
        let mut free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
        if order == ComplementOrder::HighestFirst {
            free.reverse();
        }
        let basis = free
            .into_iter()
            .map(|i| {
                let mut v = vec![Scalar::zero(); n];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Subspace { ambient_dim: n, basis }
    }

    /// Complement of `self` inside the larger subspace `within`, chosen by the
    /// greedy rule in the coordinates of `within`'s basis.
    pub fn complement_within(&self, within: &Subspace, order: ComplementOrder) -> Subspace {
        assert_eq!(self.ambient_dim, within.ambient_dim);
        let coords: Vec<Vec<Scalar>> =
            self.basis.iter().map(|v| within.coordinates(v).expect("subspace contained in `within`")).collect();
        let inner = Subspace::span(within.dim(), &coords).complement_with(order);
        let wb = within.basis_matrix();
        let basis = inner.basis.iter().map(|c| wb.mul_vec(c)).collect();
        Subspace { ambient_dim: self.ambient_dim, basis }
    }

    /// Sum of two subspaces.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &v)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve Σ a_i u_i = Σ b_j w_j.
        let n = self.ambient_dim;
        let (p, r) = (self.dim(), other.dim());
        let mut m = Matrix::zeros(n, p + r);
        for (i, u) in self.basis.iter().enumerate() {
            for k in 0..n {
                m[(k, i)] = u[k].clone();
            }
        }
        for (j, w) in other.basis.iter().enumerate() {
            for k in 0..n {
                m[(k, p + j)] = -w[k].clone();
            }
        }
        let ker = kernel(&m);
        let sb = self.basis_matrix();
        let vecs: Vec<Vec<Scalar>> = ker.basis.iter().map(|c| sb.mul_vec(&c[..p])).collect();
        Subspace::span(n, &vecs)
    }
}

/// Linear combination `Σ c_i v_i` of equal-length vectors.
pub fn combine(n: usize, coeffs: &[Scalar], vectors: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qr;

    fn v(x: &[i64]) -> Vec<Scalar> {
        x.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(2);
        assert_eq!(solve(&id, &v(&[1, 2])).unwrap(), Some(v(&[1, 2])));
        assert_eq!(solve(&Matrix::zeros(2, 2), &v(&[0, 0])).unwrap(), Some(v(&[0, 0])));
        let m = Matrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&m, &v(&[1, 3])).unwrap(), None);
        assert!(solve(&m, &v(&[1])).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::identity(3)).dim(), 0);
        assert_eq!(kernel(&Matrix::zeros(2, 3)).dim(), 3);
        let k = kernel(&Matrix::from_i64(&[&[1, 2]]));
        assert_eq!(k.basis(), &[v(&[-2, 1])]);
    }

    #[test]
    fn complement_examples() {
        let s = Subspace::span(2, &[v(&[1, 0])]);
        assert_eq!(s.complement().basis(), &[v(&[0, 1])]);
        assert_eq!(Subspace::zero(3).complement().dim(), 3);
        let s = Subspace::span(2, &[v(&[1, 1])]);
        assert_eq!(s.complement().basis(), &[v(&[0, 1])]);
        assert_eq!(s.complement_with(ComplementOrder::HighestFirst).basis(), &[v(&[1, 0])]);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(m.determinant(), q(1));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let h = Matrix::new(1, 1, vec![qr(1, 3)]).unwrap();
        assert_eq!(h.inverse().unwrap()[(0, 0)], q(3));
    }

    #[test]
    fn intersection_and_within() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i.basis(), &[v(&[0, 1, 0])]);
        let c = i.complement_within(&a, ComplementOrder::LowestFirst);
        assert_eq!(c.basis(), &[v(&[1, 0, 0])]);
    }
}
