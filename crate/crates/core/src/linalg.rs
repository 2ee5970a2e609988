//! Dense matrices over a [`Scalar`] field, with exact Gaussian elimination.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j].mul_add_assign(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    acc.mul_add_assign(a, b);
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
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
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - factor.mul_ref(m.get(r, j));
                    m.set(i, j, v);
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
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = det.mul_ref(&pivot);
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).mul_ref(&inv);
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - factor.mul_ref(m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, S::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(out)
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Self::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// `true` when `(self)^n = 0`.
    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u32).is_zero()
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Incrementally maintained row-reduced basis of a subspace of `S^dim`.
///
/// Used to decide linear independence of coefficient vectors one at a time.
#[derive(Clone, Debug)]
pub struct EchelonBasis<S> {
    dim: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> EchelonBasis<S> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` is in
    /// the span.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let factor = v[*p].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a = a.clone() - factor.mul_ref(b);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v).iter().all(|c| c.is_zero())
    }

    /// Adds `v` if it is independent of the basis; reports whether it was.
    pub fn insert(&mut self, v: &[S]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        for c in r.iter_mut() {
            *c = c.mul_ref(&inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (a, b) in row.iter_mut().zip(&r) {
                if !b.is_zero() {
                    *a = a.clone() - factor.mul_ref(b);
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qi;
    use num_traits::{One, Zero};

    fn m(rows: &[&[i64]]) -> Matrix<Qi> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Qi::int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant(), Qi::one());
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = m(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.determinant(), Qi::zero());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), Qi::int(-1));
    }

    #[test]
    fn solving_and_rank() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        assert_eq!(a.rank(), 2);
        let x = a.solve(&[Qi::int(3), Qi::int(1), Qi::int(4)]).unwrap();
        assert_eq!(x, vec![Qi::int(2), Qi::int(1)]);
        assert!(a.solve(&[Qi::int(3), Qi::int(1), Qi::int(5)]).is_none());
    }

    #[test]
    fn nilpotency() {
        assert!(m(&[&[0, 1], &[0, 0]]).is_nilpotent());
        assert!(!m(&[&[1, 0], &[0, 0]]).is_nilpotent());
    }

    #[test]
    fn echelon_basis() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&[Qi::int(1), Qi::int(2), Qi::int(0)]));
        assert!(b.insert(&[Qi::int(0), Qi::int(1), Qi::int(1)]));
        assert!(!b.insert(&[Qi::int(1), Qi::int(3), Qi::int(1)]));
        assert!(b.contains(&[Qi::int(2), Qi::int(4), Qi::int(0)]));
        assert!(!b.contains(&[Qi::int(0), Qi::int(0), Qi::int(1)]));
        assert_eq!(b.len(), 2);
    }
}
