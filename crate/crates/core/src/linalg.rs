//! Small dense matrices over a coefficient field.

use std::fmt;

use crate::scalar::{Coefficient, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S = Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Coefficient> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, S::one());
        }
        m
    }

    /// Fails unless all rows share one length.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add_ref(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg_ref())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|c| c.mul_ref(s))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| acc.add_ref(&self.get(i, k).mul_ref(other.get(k, j))))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Fraction-free enough for our sizes: plain elimination with exact pivots.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return S::zero();
            };
            if p != col {
                a.swap(p, col);
                det = det.neg_ref();
            }
            let pivot = a[col][col].clone();
            det = det.mul_ref(&pivot);
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].checked_div(&pivot).expect("nonzero pivot");
                for c in col..n {
                    let v = a[r][c].sub_ref(&factor.mul_ref(&a[col][c]));
                    a[r][c] = v;
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(p, col);
            inv.swap(p, col);
            let pivot = a[col][col].clone();
            for c in 0..n {
                a[col][c] = a[col][c].checked_div(&pivot)?;
                inv[col][c] = inv[col][c].checked_div(&pivot)?;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let v = a[r][c].sub_ref(&factor.mul_ref(&a[col][c]));
                    a[r][c] = v;
                    let w = inv[r][c].sub_ref(&factor.mul_ref(&inv[col][c]));
                    inv[r][c] = w;
                }
            }
        }
        Self::from_rows(inv)
    }
}

/// Model-file matrix literal: `[[a, b], [c, d]]`.
impl<S: Coefficient> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<S: Coefficient> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Q::from(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]);
        assert_eq!(a.det(), Q::from(-7));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn symbolic_inverse() {
        let x = Scalar::var("x");
        let a = Matrix::from_rows(vec![vec![x.clone(), Scalar::from(1)], vec![Scalar::from(0), x.clone()]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.det(), &x * &x);
    }
}
