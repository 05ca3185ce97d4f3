//! Dense exact matrices over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Q) {
        if !x.is_zero() {
            self.data[i * self.cols + j] += x;
        }
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
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

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Q::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out[i] += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(r, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                m.set(i, c, self.get(i, j).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let x = &self.data[r * self.cols + j] * &inv;
                self.data[r * self.cols + j] = x;
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let pr = &self.data[r * self.cols + j];
                    if pr.is_zero() {
                        continue;
                    }
                    let x = pr * &f;
                    self.data[i * self.cols + j] -= x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}` as columns.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f].is_some() {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(row, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// A basis of the column space, chosen among the columns.
    pub fn column_basis(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Solves `self·X = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (row, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(c, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    pub fn entries_as_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries_as_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed = rows
            .into_iter()
            .map(|r| r.into_iter().map(|s| s.parse::<Q>().map_err(serde::de::Error::custom)).collect())
            .collect::<Result<Vec<Vec<Q>>, _>>()?;
        Ok(Matrix::from_rows(parsed))
    }
}

/// Row-reduced spanning set kept incrementally; used to grow subspaces.
#[derive(Clone, Debug, Default)]
pub struct Span {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the current rows.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= r * &f;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= r * &f;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Basis of the vectors orthogonal to every row, i.e. the solutions of
    /// the homogeneous system the rows describe.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Q::zero(); self.dim];
                v[f] = Q::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
            Matrix::from_rows(v.chunks(c).map(|row| row.iter().map(|&x| q(x)).collect()).collect())
        })
    }

    #[test]
    fn rank_and_nullspace_of_known_matrix() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn span_tracks_rank() {
        let mut s = Span::new(3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(1), q(2), q(1)]));
        assert!(s.contains(&[q(1), q(0), q(-1)]));
        assert_eq!(s.len(), 2);
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix(4, 5)) {
            prop_assert_eq!(m.rank() + m.nullspace().len(), 5);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn solve_recovers_consistent_systems(a in small_matrix(3, 4), x in small_matrix(4, 2)) {
            let b = a.mul(&x);
            let y = a.solve(&b).unwrap();
            prop_assert_eq!(a.mul(&y), b);
        }

        #[test]
        fn span_rank_matches_matrix_rank(m in small_matrix(5, 4)) {
            let mut s = Span::new(4);
            for i in 0..5 {
                s.insert(m.row(i));
            }
            prop_assert_eq!(s.len(), m.rank());
        }

        #[test]
        fn span_nullspace_annihilated_by_rows(m in small_matrix(3, 5)) {
            let mut s = Span::new(5);
            for i in 0..3 {
                s.insert(m.row(i));
            }
            let ns = s.nullspace();
            prop_assert_eq!(ns.len(), 5 - m.rank());
            for v in ns {
                prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
            }
        }
    }
}
