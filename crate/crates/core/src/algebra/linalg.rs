//! Exact linear algebra over the rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::matrix::RatMatrix;
use super::Rational;

/// Reduced row-echelon form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: RatMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

fn rref_rows(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x *= &inv;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn row_reduce(m: &RatMatrix) -> Echelon {
    let mut rows: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let pivots = rref_rows(&mut rows, m.cols());
    let reduced = RatMatrix::from_fn(m.rows(), m.cols(), |i, j| rows[i][j].clone());
    let rank = pivots.len();
    Echelon { reduced, pivots, rank }
}

pub fn rank(m: &RatMatrix) -> usize {
    row_reduce(m).rank
}

/// Kernel basis in echelon-complement form: one vector per free column, in
/// increasing column order, with that free coordinate 1 and the other free
/// coordinates 0.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let e = row_reduce(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.reduced[(row, f)].clone();
            }
            v
        })
        .collect()
}

pub fn determinant(m: &RatMatrix) -> Rational {
    assert!(m.is_square());
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    assert!(m.is_square());
    let n = m.rows();
    let aug = m.hstack(&RatMatrix::identity(n));
    let e = row_reduce(&aug);
    if e.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) || e.rank < n {
        return None;
    }
    Some(RatMatrix::from_fn(n, n, |i, j| e.reduced[(i, n + j)].clone()))
}

/// A linear subspace of `Q^n`, stored by its reduced row-echelon basis, so
/// equality of subspaces is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, (0..ambient).map(|i| unit(ambient, i)))
    }

    pub fn span<I: IntoIterator<Item = Vec<Rational>>>(ambient: usize, vectors: I) -> Self {
        let mut rows: Vec<Vec<Rational>> = vectors.into_iter().collect();
        assert!(rows.iter().all(|r| r.len() == ambient), "vector length mismatch");
        let pivots = rref_rows(&mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace { ambient, basis: rows, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(&o.basis).cloned())
    }

    pub fn intersection(&self, o: &Subspace) -> Subspace {
        let (a, b) = (self.dim(), o.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(self.ambient);
        }
        let m = RatMatrix::from_fn(self.ambient, a + b, |i, j| {
            if j < a {
                self.basis[j][i].clone()
            } else {
                -o.basis[j - a][i].clone()
            }
        });
        let vecs = nullspace(&m).into_iter().map(|coef| {
            let mut v = vec![Rational::zero(); self.ambient];
            for (c, row) in coef[..a].iter().zip(&self.basis) {
                if c.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x += c * y;
                }
            }
            v
        });
        Subspace::span(self.ambient, vecs)
    }

    /// Annihilator under the standard pairing `sum x_i y_i`.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        let m = RatMatrix::from_fn(self.dim(), self.ambient, |i, j| self.basis[i][j].clone());
        Subspace::span(self.ambient, nullspace(&m))
    }

    /// Greedy extension: the candidates (in order) that are independent of
    /// `self` and of the previously accepted ones.
    pub fn complement_from(&self, candidates: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        let mut acc = self.clone();
        let mut chosen = Vec::new();
        for c in candidates {
            if !acc.contains(c) {
                acc = acc.sum(&Subspace::span(self.ambient, [c.clone()]));
                chosen.push(c.clone());
            }
        }
        chosen
    }
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn proportional_rows_have_rank_one() {
        let e = row_reduce(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(e.rank, 1);
        assert_eq!(e.pivots, vec![0]);
    }

    #[test]
    fn identity_is_reduced() {
        let e = row_reduce(&RatMatrix::identity(3));
        assert_eq!((e.rank, e.pivots), (3, vec![0, 1, 2]));
    }

    #[test]
    fn swap_reduces_to_identity() {
        let e = row_reduce(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!(e.reduced, RatMatrix::identity(2));
        assert_eq!(e.rank, 2);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&RatMatrix::zeros(2, 2)), vec![unit(2, 0), unit(2, 1)]);
        assert!(nullspace(&RatMatrix::identity(3)).is_empty());
        assert_eq!(nullspace(&m(&[&[1, 1]])), vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a), int(18));
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(3));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn subspace_lattice_operations() {
        let u = Subspace::span(3, [unit(3, 0), unit(3, 1)]);
        let w = Subspace::span(3, [unit(3, 1), unit(3, 2)]);
        assert_eq!(u.intersection(&w), Subspace::span(3, [unit(3, 1)]));
        assert_eq!(u.sum(&w), Subspace::full(3));
        assert_eq!(u.annihilator(), Subspace::span(3, [unit(3, 2)]));
        assert!(u.contains(&[int(5), int(-1), int(0)]));
    }
}
