use alloc::format;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use super::ring::Ring;
use super::{LaurentPoly, Poly, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix over a commutative ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type PolyMatrix = Matrix<Poly>;
pub type LaurentMatrix = Matrix<LaurentPoly>;

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() })
    }

    pub fn from_columns(nrows: usize, columns: &[Vec<T>]) -> Self {
        Matrix::from_fn(nrows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].add(&o[(i, j)]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sub(&o[(i, j)]))
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    /// Kronecker product: entry `((i,j),(k,l)) = a[i][k] * b[j][l]`, `i`-major.
    pub fn kron(&self, o: &Self) -> Self {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |r, c| {
            let (i, j) = (r / o.rows, r % o.rows);
            let (k, l) = (c / o.cols, c % o.cols);
            self[(i, k)].mul(&o[(j, l)])
        })
    }

    pub fn block_diag(&self, o: &Self) -> Self {
        Matrix::from_fn(self.rows + o.rows, self.cols + o.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self[(i, j)].clone(),
                (false, false) => o[(i - self.rows, j - self.cols)].clone(),
                _ => T::zero(),
            }
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Matrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    /// Conjugation `p^-1 * self * p` given both `p` and its inverse.
    pub fn conjugate(&self, p: &Self, p_inv: &Self) -> Self {
        p_inv.mul(&self.mul(p))
    }
}

/// `a (x) I + I (x) b`: the matrix of a derivation on a tensor product, in the
/// `i`-major product basis.
pub fn kronecker_sum<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    assert!(a.is_square() && b.is_square());
    a.kron(&Matrix::identity(b.rows())).add(&Matrix::identity(a.rows()).kron(b))
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl PolyMatrix {
    pub fn to_laurent(&self) -> LaurentMatrix {
        self.map(LaurentPoly::from_poly)
    }

    pub fn eval(&self, x: &Rational) -> RatMatrix {
        self.map(|p| p.eval(x))
    }

    pub fn from_rational(m: &RatMatrix) -> Self {
        m.map(|c| Poly::constant(c.clone()))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries().iter().filter_map(Poly::degree).max()
    }
}

impl LaurentMatrix {
    pub fn from_rational(m: &RatMatrix) -> Self {
        m.map(|c| LaurentPoly::constant(c.clone()))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.entries().iter().filter_map(LaurentPoly::min_degree).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries().iter().filter_map(LaurentPoly::max_degree).max()
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries().iter().all(LaurentPoly::is_polynomial)
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map(|p| p.shift(k))
    }

    pub fn euler(&self) -> Self {
        self.map(LaurentPoly::euler)
    }

    /// Coefficient matrix of `v^k`.
    pub fn coeff(&self, k: i64) -> RatMatrix {
        self.map(|p| p.coeff(k))
    }

    pub fn to_poly(&self) -> Option<PolyMatrix> {
        let data = self.entries().iter().map(LaurentPoly::to_poly).collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: self.rows(), cols: self.cols(), data })
    }

    pub fn eval_at_one(&self) -> RatMatrix {
        self.map(LaurentPoly::eval_at_one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use alloc::vec;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn shape_checked() {
        assert!(RatMatrix::new(2, 2, vec![int(1); 3]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn kronecker_layout_is_i_major() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 5], &[6, 7]]);
        let k = a.kron(&b);
        assert_eq!(k[(0, 1)], int(5));
        assert_eq!(k[(1, 2)], int(12));
        assert_eq!(k[(3, 3)], int(28));
    }
}
