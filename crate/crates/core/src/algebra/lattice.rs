//! Module-theoretic kernels over `Q[v]` and `Q[v, 1/v]`: column Hermite forms,
//! lattice bases and exact inverses of Laurent matrices.

use alloc::vec::Vec;

use super::matrix::{LaurentMatrix, PolyMatrix};
use super::ring::Ring;
use super::{LaurentPoly, Poly};
use crate::error::{Error, Result};

/// Column Hermite form of a polynomial matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnEchelon {
    /// `rows x rank` matrix whose columns generate the same `Q[v]`-module as
    /// the input columns. Column `k` vanishes above `pivot_rows[k]`, has a
    /// monic entry there, and earlier columns are reduced modulo it.
    pub basis: PolyMatrix,
    pub pivot_rows: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

pub fn column_echelon(m: &PolyMatrix) -> ColumnEchelon {
    let nrows = m.rows();
    let mut pending: Vec<Vec<Poly>> = m.columns().into_iter().filter(|c| c.iter().any(|p| !p.is_zero())).collect();
    let mut done: Vec<Vec<Poly>> = Vec::new();
    let mut pivot_rows = Vec::new();
    for row in 0..nrows {
        loop {
            let nz: Vec<usize> = (0..pending.len()).filter(|&c| !pending[c][row].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&c| (pending[c][row].degree(), c)).unwrap();
            if nz.len() == 1 {
                let mut col = pending.remove(p);
                let lc_inv = col[row].leading().unwrap().recip();
                for x in col.iter_mut() {
                    *x = x.scale(&lc_inv);
                }
                done.push(col);
                pivot_rows.push(row);
                break;
            }
            let piv = pending[p].clone();
            for &c in &nz {
                if c == p {
                    continue;
                }
                let q = pending[c][row].div_rem(&piv[row]).0;
                for (x, y) in pending[c].iter_mut().zip(&piv) {
                    if !y.is_zero() {
                        *x = &*x - &(&q * y);
                    }
                }
            }
            pending.retain(|c| c.iter().any(|p| !p.is_zero()));
        }
    }
    // Reduce entries at each pivot row modulo that pivot.
    for k in 0..done.len() {
        let r = pivot_rows[k];
        for j in 0..k {
            let q = done[j][r].div_rem(&done[k][r]).0;
            if q.is_zero() {
                continue;
            }
            let piv = done[k].clone();
            for (x, y) in done[j].iter_mut().zip(&piv) {
                if !y.is_zero() {
                    *x = &*x - &(&q * y);
                }
            }
        }
    }
    ColumnEchelon { basis: PolyMatrix::from_columns(nrows, &done), pivot_rows }
}

/// Rank over the fraction field `Q(v)`.
pub fn generic_rank(m: &PolyMatrix) -> usize {
    column_echelon(m).rank()
}

/// Normalized basis of the `Q[v]`-module generated by the columns of `gens`,
/// which must have full row rank. The result is lower triangular with monomial
/// diagonal `v^k`.
pub fn lattice_basis(gens: &LaurentMatrix) -> Result<LaurentMatrix> {
    let lo = gens.min_degree().unwrap_or(0);
    let poly = gens.shift(-lo).to_poly().expect("shifted to nonnegative degrees");
    let e = column_echelon(&poly);
    if e.rank() != gens.rows() {
        return Err(Error::Shape("generators do not span a full-rank lattice".into()));
    }
    Ok(e.basis.to_laurent().shift(lo))
}

/// Inverse of a lower-triangular Laurent matrix with monomial diagonal.
pub fn lower_triangular_inverse(m: &LaurentMatrix) -> Result<LaurentMatrix> {
    let n = m.rows();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        diag.push(m[(i, i)].as_monomial().ok_or(Error::NotUnit)?);
    }
    let mut x = LaurentMatrix::zeros(n, n);
    for j in 0..n {
        x[(j, j)] = LaurentPoly::one().div_monomial(&diag[j].0, diag[j].1);
        for i in j + 1..n {
            let mut s = LaurentPoly::zero();
            for l in j..i {
                if !m[(i, l)].is_zero() && !x[(l, j)].is_zero() {
                    s = &s + &(&m[(i, l)] * &x[(l, j)]);
                }
            }
            x[(i, j)] = (-s).div_monomial(&diag[i].0, diag[i].1);
        }
    }
    Ok(x)
}

/// Exact inverse over `Q[v, 1/v]` by fraction-free Gauss-Jordan elimination.
/// Fails with `NotUnit` unless the determinant is a nonzero monomial.
pub fn laurent_inverse(m: &LaurentMatrix) -> Result<LaurentMatrix> {
    if !m.is_square() {
        return Err(Error::Shape("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let lo = m.min_degree().unwrap_or(0);
    let q = m.shift(-lo).to_poly().expect("shifted to nonnegative degrees");
    let mut a: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            let mut row = q.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }));
            row
        })
        .collect();
    let mut prev = Poly::one();
    for k in 0..n {
        let p = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].coeffs().len())
            .ok_or(Error::NotUnit)?;
        a.swap(p, k);
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = row[k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let t = &(&pivot_row[k] * &row[j]) - &(&f * &pivot_row[j]);
                row[j] = t.exact_div(&prev).expect("fraction-free step is exact");
            }
            row[k] = Poly::zero();
        }
        prev = pivot_row[k].clone();
    }
    let mut inv = LaurentMatrix::zeros(n, n);
    for i in 0..n {
        let d = LaurentPoly::from_poly(&a[i][i]);
        let (c, k) = d.as_monomial().ok_or(Error::NotUnit)?;
        for j in 0..n {
            inv[(i, j)] = LaurentPoly::from_poly(&a[i][n + j]).div_monomial(&c, k).shift(-lo);
        }
    }
    Ok(inv)
}

/// Determinant of a polynomial matrix (fraction-free elimination).
pub fn poly_determinant(m: &PolyMatrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let mut a: Vec<Vec<Poly>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut prev = Poly::one();
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.exact_div(&prev).expect("Bareiss step is exact");
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Poly::one();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::algebra::Rational;
    use alloc::vec;

    fn lp(low: i64, cs: &[i64]) -> LaurentPoly {
        LaurentPoly::new(low, cs.iter().map(|&c| int(c)).collect())
    }

    fn v(k: i64) -> LaurentPoly {
        LaurentPoly::monomial(Rational::from_integer(1.into()), k)
    }

    #[test]
    fn inverse_of_diagonal_monomials() {
        let m = LaurentMatrix::diagonal(&[v(1), v(-1)]);
        assert_eq!(laurent_inverse(&m).unwrap(), LaurentMatrix::diagonal(&[v(-1), v(1)]));
    }

    #[test]
    fn inverse_of_unipotent() {
        let m = LaurentMatrix::from_rows(&[vec![v(0), v(1)], vec![LaurentPoly::zero(), v(0)]]).unwrap();
        let inv = laurent_inverse(&m).unwrap();
        assert_eq!(inv[(0, 1)], v(1).neg());
        assert_eq!(m.mul(&inv), LaurentMatrix::identity(2));
    }

    #[test]
    fn singular_matrix_is_not_a_unit() {
        let m = LaurentMatrix::from_rows(&[vec![v(0), v(0)], vec![v(0), v(0)]]).unwrap();
        assert_eq!(laurent_inverse(&m), Err(Error::NotUnit));
        let m = LaurentMatrix::from_rows(&[vec![lp(0, &[1, 1])]]).unwrap();
        assert_eq!(laurent_inverse(&m), Err(Error::NotUnit));
    }

    #[test]
    fn dense_unimodular_inverse() {
        // product of elementary matrices over Q[v, 1/v]
        let e1 = LaurentMatrix::from_rows(&[
            vec![v(0), lp(-1, &[2, 0, 3]), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), v(0), LaurentPoly::zero()],
            vec![LaurentPoly::zero(), LaurentPoly::zero(), v(0)],
        ])
        .unwrap();
        let e2 = LaurentMatrix::from_rows(&[
            vec![v(2), LaurentPoly::zero(), LaurentPoly::zero()],
            vec![lp(0, &[1, -1]), v(0), LaurentPoly::zero()],
            vec![lp(-2, &[1]), lp(0, &[0, 5]), v(-1)],
        ])
        .unwrap();
        let m = e1.mul(&e2).mul(&e1.transpose());
        let inv = laurent_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), LaurentMatrix::identity(3));
        assert_eq!(inv.mul(&m), LaurentMatrix::identity(3));
    }

    #[test]
    fn lattice_basis_of_redundant_generators() {
        // columns 1, v^-1 e1 and e2 generate <v^-1 e1, e2>
        let g = LaurentMatrix::from_rows(&[
            vec![v(0), LaurentPoly::zero(), v(-1)],
            vec![LaurentPoly::zero(), v(0), LaurentPoly::zero()],
        ])
        .unwrap();
        let b = lattice_basis(&g).unwrap();
        assert_eq!(b, LaurentMatrix::diagonal(&[v(-1), v(0)]));
        let inv = lower_triangular_inverse(&b).unwrap();
        assert_eq!(b.mul(&inv), LaurentMatrix::identity(2));
    }

    #[test]
    fn echelon_rank_over_fraction_field() {
        let p = |cs: &[i64]| Poly::from_ints(cs);
        let m = PolyMatrix::from_rows(&[vec![p(&[0, 1]), p(&[0, 0, 1])], vec![p(&[1]), p(&[0, 1])]]).unwrap();
        assert_eq!(generic_rank(&m), 1);
        assert_eq!(poly_determinant(&m), Poly::zero());
    }
}
