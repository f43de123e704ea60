//! Exact linear algebra over the rationals.
//!
//! [`Matrix`] is dense and row-major, used for ranks, kernels and solves.
//! [`SparseMatrix`] is column-major and used for operators on the
//! transgressive complexes, where most columns have a handful of entries.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<Scalar>>) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.into_iter().enumerate() {
                m.data[i * m.cols + j] = v;
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
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
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = &m.data[r * m.cols + j] * &inv;
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pv = &m.data[r * m.cols + j];
                    if pv.is_zero() {
                        continue;
                    }
                    let v = &m.data[i * m.cols + j] - &f * pv;
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// A solution of `self * x = b` with all free variables zero.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pv = m.get(c, c).clone();
            det *= &pv;
            for i in c + 1..n {
                let f = m.get(i, c) / &pv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(scalar::format).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Rank of a list of vectors of a common length.
pub fn rank_of(vectors: &[Vec<Scalar>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(dim, vectors.to_vec()).rank()
}

/// Column-major sparse matrix. Column `j` holds the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<BTreeMap<usize, Scalar>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![BTreeMap::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (j, col) in m.columns.iter_mut().enumerate() {
            col.insert(j, Scalar::one());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: Vec<BTreeMap<usize, Scalar>>) -> Self {
        debug_assert!(columns.iter().all(|c| c.keys().all(|&i| i < rows)));
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.retain(|_, v| !v.is_zero());
                c
            })
            .collect();
        SparseMatrix { rows, columns }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let cols = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m.get(i, j).is_zero())
                    .map(|i| (i, m.get(i, j).clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: m.rows(), columns: cols }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, v) in col {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, Scalar> {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    /// Index of the first column where the two matrices differ.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<usize> {
        assert_eq!(self.cols(), other.cols());
        (0..self.cols()).find(|&j| self.columns[j] != other.columns[j])
    }

    pub fn scale(&self, q: &Scalar) -> SparseMatrix {
        if q.is_zero() {
            return Self::zeros(self.rows, self.cols());
        }
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|(&i, v)| (i, v * q)).collect())
            .collect();
        SparseMatrix { rows: self.rows, columns }
    }

    /// `self + q * other`.
    pub fn add_scaled(&self, other: &SparseMatrix, q: &Scalar) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let mut out = self.clone();
        if q.is_zero() {
            return out;
        }
        for (dst, src) in out.columns.iter_mut().zip(&other.columns) {
            for (&i, v) in src {
                add_entry(dst, i, v * q);
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &-Scalar::one())
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch in composition");
        let columns = other.columns.iter().map(|col| self.apply_sparse(col)).collect();
        SparseMatrix { rows: self.rows, columns }
    }

    pub fn apply_sparse(&self, v: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out = BTreeMap::new();
        for (&k, b) in v {
            for (&i, a) in &self.columns[k] {
                add_entry(&mut out, i, a * b);
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols());
        let mut out = vec![Scalar::zero(); self.rows];
        for (k, b) in v.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (&i, a) in &self.columns[k] {
                out[i] += a * b;
            }
        }
        out
    }

    /// Graded commutator `A∘B - (-1)^{|A||B|} B∘A` for homogeneous parities.
    pub fn graded_commutator(&self, a_odd: bool, other: &SparseMatrix, b_odd: bool) -> SparseMatrix {
        let ab = self.mul(other);
        let ba = other.mul(self);
        if a_odd && b_odd {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }
}

pub(crate) fn add_entry(map: &mut BTreeMap<usize, Scalar>, i: usize, v: Scalar) {
    if v.is_zero() {
        return;
    }
    match map.entry(i) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rank_kernel_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
        let x = a.solve(&[int(6), int(12), int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(6), int(12), int(2)]);
        assert!(a.solve(&[int(1), int(0), int(0)]).is_none());
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.determinant(), int(-1));
        assert_eq!(a.inverse().unwrap(), a);
        let b = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(b.mul(&b.inverse().unwrap()), Matrix::identity(2));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).inverse(), None);
        let c = Matrix::from_rows(vec![vec![frac(1, 2), int(0)], vec![int(3), int(4)]]);
        assert_eq!(c.determinant(), int(2));
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[1, 0, 2], &[0, 3, 0], &[4, 0, 0]]);
        let b = m(&[&[0, 1, 0], &[1, 0, 1], &[0, 0, 5]]);
        let sa = SparseMatrix::from_dense(&a);
        let sb = SparseMatrix::from_dense(&b);
        assert_eq!(sa.mul(&sb).to_dense(), a.mul(&b));
        assert!(sa.sub(&sa).is_zero());
        let comm = sa.graded_commutator(true, &sb, true).to_dense();
        let expect = {
            let x = a.mul(&b);
            let y = b.mul(&a);
            Matrix::from_rows(
                (0..3).map(|i| (0..3).map(|j| x.get(i, j) + y.get(i, j)).collect()).collect(),
            )
        };
        assert_eq!(comm, expect);
    }
}
