//! Free `Q[h]`-modules with an action of `h^2 d/dh`, and the functorial
//! operations on them.
//!
//! Convention: `h^2 d/dh e_j = sum_i A[i][j](h) e_i`, i.e. the columns of the
//! action matrix are the images of the basis vectors.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::linalg::{unit, Subspace};
use crate::algebra::rational::{format_rational, int, is_integer};
use crate::algebra::{kronecker_sum, Poly, PolyMatrix, RatMatrix, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    rank: usize,
    action: PolyMatrix,
    label: Option<String>,
}

impl Connection {
    pub fn new(rank: usize, action: PolyMatrix) -> Result<Self> {
        if action.rows() != rank || action.cols() != rank {
            return Err(Error::Shape(format!(
                "action matrix is {}x{} but rank is {rank}",
                action.rows(),
                action.cols()
            )));
        }
        Ok(Connection { rank, action, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// `(Q[h]^rank, d)`: every basis vector is flat.
    pub fn trivial(rank: usize) -> Self {
        Connection { rank, action: PolyMatrix::zeros(rank, rank), label: None }
    }

    /// The zero module, unit for direct sums.
    pub fn zero() -> Self {
        Connection::trivial(0)
    }

    pub fn rank_one(entry: Poly) -> Self {
        Connection { rank: 1, action: PolyMatrix::diagonal(&[entry]), label: None }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self) -> &PolyMatrix {
        &self.action
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn tensor(&self, other: &Connection) -> Connection {
        Connection {
            rank: self.rank * other.rank,
            action: kronecker_sum(&self.action, &other.action),
            label: None,
        }
    }

    /// Dual module in the dual basis: action `-A^T`.
    pub fn dual(&self) -> Connection {
        Connection { rank: self.rank, action: self.action.transpose().neg(), label: None }
    }

    pub fn direct_sum(&self, other: &Connection) -> Connection {
        Connection {
            rank: self.rank + other.rank,
            action: self.action.block_diag(&other.action),
            label: None,
        }
    }

    /// `r`-th exterior power, basis `e_I` for increasing tuples `I` in
    /// lexicographic order.
    pub fn wedge(&self, r: usize) -> Result<Connection> {
        if r == 0 || r > self.rank {
            return Err(Error::Shape(format!("wedge degree {r} outside 1..={}", self.rank)));
        }
        let tuples = increasing_tuples(self.rank, r);
        let index = |t: &[usize]| tuples.binary_search_by(|x| x.as_slice().cmp(t)).unwrap();
        let n = tuples.len();
        let mut action = PolyMatrix::zeros(n, n);
        for (col, t) in tuples.iter().enumerate() {
            for pos in 0..r {
                for j in 0..self.rank {
                    let a = &self.action[(j, t[pos])];
                    if a.is_zero() {
                        continue;
                    }
                    let mut u = t.clone();
                    u[pos] = j;
                    if let Some((sorted, odd)) = sort_with_sign(&u) {
                        let row = index(&sorted);
                        let term = if odd { -a } else { a.clone() };
                        action[(row, col)] = &action[(row, col)] + &term;
                    }
                }
            }
        }
        Ok(Connection { rank: n, action, label: None })
    }

    /// Twist by `h^ell`: the module `h^ell M` in the basis `h^ell e_j`.
    pub fn tate_twist(&self, ell: i64) -> Connection {
        let shift = Poly::monomial(int(ell), 1);
        let action = PolyMatrix::from_fn(self.rank, self.rank, |i, j| {
            if i == j {
                &self.action[(i, j)] + &shift
            } else {
                self.action[(i, j)].clone()
            }
        });
        Connection { rank: self.rank, action, label: None }
    }

    /// Tensor product with the rank-one module `h^2 d/dh 1 = -c`.
    pub fn exponential_twist(&self, c: &Rational) -> Connection {
        let shift = Poly::constant(c.clone());
        let action = PolyMatrix::from_fn(self.rank, self.rank, |i, j| {
            if i == j {
                &self.action[(i, j)] - &shift
            } else {
                self.action[(i, j)].clone()
            }
        });
        Connection { rank: self.rank, action, label: None }
    }

    /// Base change by `g`, which must be invertible over `Q[h]` with inverse
    /// `g_inv`: new basis `e'_j = sum_i g[i][j] e_i`, new action
    /// `g^-1 (A g + h^2 g')`.
    pub fn gauge(&self, g: &PolyMatrix, g_inv: &PolyMatrix) -> Result<Connection> {
        if g.mul(g_inv) != PolyMatrix::identity(self.rank) {
            return Err(Error::Shape("gauge matrix and inverse do not match".into()));
        }
        let h2 = Poly::monomial(Rational::one(), 2);
        let dg = g.map(|p| &p.derivative() * &h2);
        let action = g_inv.mul(&self.action.mul(g).add(&dg));
        Ok(Connection { rank: self.rank, action, label: None })
    }

    /// Confluent hypergeometric module in the chart `h = u`:
    /// `A(h) = -A_0 + h A_oo` with `A_oo = diag(k + mu alpha_k)` and
    /// `A_0 = mu` times the cyclic shift `omega_k -> omega_{k+1}`.
    pub fn hypergeometric(alpha: &[Rational]) -> Result<Connection> {
        validate_alpha(alpha)?;
        let mu = alpha.len();
        let mu_q = int(mu as i64);
        let mut action = PolyMatrix::zeros(mu, mu);
        for (k, a) in alpha.iter().enumerate() {
            let sigma = int(k as i64) + &mu_q * a;
            action[(k, k)] = Poly::monomial(sigma, 1);
            let row = (k + 1) % mu;
            action[(row, k)] = &action[(row, k)] - &Poly::constant(mu_q.clone());
        }
        Ok(Connection { rank: mu, action, label: None })
    }

    /// Rees module of a filtered vector space with integral jumps, in a basis
    /// adapted to the filtration (see [`FilteredSpace::adapted_basis`]).
    pub fn from_filtered_space(f: &FilteredSpace) -> Result<Connection> {
        let levels: Vec<Rational> = f.adapted_basis().into_iter().map(|(b, _)| b).collect();
        if let Some(bad) = levels.iter().find(|b| !is_integer(b)) {
            return Err(Error::BadFiltration(format!("non-integral jump {}", format_rational(bad))));
        }
        let diag: Vec<Poly> = levels.into_iter().map(|p| Poly::monomial(p, 1)).collect();
        Ok(Connection { rank: diag.len(), action: PolyMatrix::diagonal(&diag), label: None })
    }

    pub fn fiber(&self) -> Fiber {
        Fiber { dimension: self.rank }
    }
}

pub fn validate_alpha(alpha: &[Rational]) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::BadAlpha("empty alpha".into()));
    }
    if alpha[0] < Rational::zero() || alpha[alpha.len() - 1] >= Rational::one() {
        return Err(Error::BadAlpha("alpha must lie in [0, 1)".into()));
    }
    if alpha.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::BadAlpha("alpha must be non-decreasing".into()));
    }
    Ok(())
}

/// Increasing `r`-tuples from `0..n`, lexicographic.
pub fn increasing_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Sorted copy and parity of the sorting permutation; `None` on a repeated index.
fn sort_with_sign(t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = t.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// The fiber `H = M / (h - 1) M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub dimension: usize,
}

impl Fiber {
    pub fn evaluate(&self, x: &[Poly]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dimension);
        x.iter().map(|p| p.eval(&Rational::one())).collect()
    }
}

/// An increasing exhaustive filtration of `Q^n` indexed by rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredSpace {
    dimension: usize,
    /// Strictly increasing indices with strictly increasing subspaces; the
    /// last one is the whole space.
    levels: Vec<(Rational, Subspace)>,
}

impl FilteredSpace {
    pub fn new(dimension: usize, mut levels: Vec<(Rational, Subspace)>) -> Result<Self> {
        levels.sort_by(|a, b| a.0.cmp(&b.0));
        if levels.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::BadFiltration("repeated index".into()));
        }
        if levels.iter().any(|(_, s)| s.ambient() != dimension) {
            return Err(Error::BadFiltration("subspace in the wrong ambient space".into()));
        }
        if levels.windows(2).any(|w| !w[1].1.contains_subspace(&w[0].1)) {
            return Err(Error::BadFiltration("filtration is not increasing".into()));
        }
        if dimension > 0 && levels.last().is_none_or(|(_, s)| s.dim() != dimension) {
            return Err(Error::BadFiltration("filtration is not exhaustive".into()));
        }
        levels.dedup_by(|b, a| a.1 == b.1);
        Ok(FilteredSpace { dimension, levels })
    }

    /// Standard basis vector `e_i` placed at level `levels[i]`.
    pub fn from_levels(levels: &[Rational]) -> Result<Self> {
        let n = levels.len();
        let distinct: BTreeSet<Rational> = levels.iter().cloned().collect();
        let table = distinct
            .into_iter()
            .map(|b| {
                let vecs = (0..n).filter(|&i| levels[i] <= b).map(|i| unit(n, i));
                let s = Subspace::span(n, vecs);
                (b, s)
            })
            .collect();
        FilteredSpace::new(n, table)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn levels(&self) -> &[(Rational, Subspace)] {
        &self.levels
    }

    /// Subspace at index `beta`.
    pub fn at(&self, beta: &Rational) -> Subspace {
        self.levels
            .iter()
            .rev()
            .find(|(b, _)| b <= beta)
            .map_or_else(|| Subspace::zero(self.dimension), |(_, s)| s.clone())
    }

    /// Subspace at the largest index strictly below `beta`.
    pub fn below(&self, beta: &Rational) -> Subspace {
        self.levels
            .iter()
            .rev()
            .find(|(b, _)| b < beta)
            .map_or_else(|| Subspace::zero(self.dimension), |(_, s)| s.clone())
    }

    /// Jump indices with the dimensions of the graded pieces.
    pub fn jumps(&self) -> Vec<(Rational, usize)> {
        let mut prev = 0;
        let mut out = Vec::new();
        for (b, s) in &self.levels {
            if s.dim() > prev {
                out.push((b.clone(), s.dim() - prev));
            }
            prev = s.dim();
        }
        out
    }

    /// Basis adapted to the filtration, each vector tagged with its level:
    /// at each jump the echelon basis of the new level is filtered against
    /// the previous one.
    pub fn adapted_basis(&self) -> Vec<(Rational, Vec<Rational>)> {
        let mut acc = Subspace::zero(self.dimension);
        let mut out = Vec::new();
        for (b, s) in &self.levels {
            for v in acc.complement_from(s.basis()) {
                out.push((b.clone(), v));
            }
            acc = s.clone();
        }
        out
    }

    /// Change of basis whose columns are the adapted basis vectors.
    pub fn adapted_matrix(&self) -> RatMatrix {
        let cols: Vec<Vec<Rational>> = self.adapted_basis().into_iter().map(|(_, v)| v).collect();
        RatMatrix::from_columns(self.dimension, &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use alloc::vec;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn shape_validation() {
        assert!(Connection::new(1, PolyMatrix::zeros(1, 1)).is_ok());
        assert!(matches!(Connection::new(2, PolyMatrix::zeros(3, 3)), Err(Error::Shape(_))));
        let m = Connection::new(1, PolyMatrix::diagonal(&[p(&[-1])])).unwrap();
        assert_eq!(m.action()[(0, 0)], p(&[-1]));
    }

    #[test]
    fn tensor_of_rank_one_adds() {
        let a = Connection::rank_one(p(&[0, 2]));
        let b = Connection::rank_one(p(&[0, -5]));
        assert_eq!(a.tensor(&b).action()[(0, 0)], p(&[0, -3]));
        let h = Connection::hypergeometric(&[int(0), int(0)]).unwrap();
        assert_eq!(Connection::trivial(1).tensor(&h), h);
        assert_eq!(h.tensor(&Connection::trivial(1)), h);
    }

    #[test]
    fn dual_transposes_and_negates() {
        let m = Connection::new(
            2,
            PolyMatrix::from_rows(&[vec![p(&[]), p(&[0, 1])], vec![p(&[]), p(&[])]]).unwrap(),
        )
        .unwrap();
        let d = m.dual();
        assert_eq!(d.action()[(1, 0)], p(&[0, -1]));
        assert!(d.action()[(0, 1)].is_zero());
        assert_eq!(d.dual(), m);
    }

    #[test]
    fn wedge_examples() {
        let m = Connection::new(2, PolyMatrix::diagonal(&[p(&[0, 3]), p(&[0, 4])])).unwrap();
        assert_eq!(m.wedge(2).unwrap().action()[(0, 0)], p(&[0, 7]));
        assert_eq!(m.wedge(1).unwrap(), m);
        assert!(m.wedge(3).is_err());
        assert!(m.wedge(0).is_err());
        let h = Connection::hypergeometric(&[int(0), rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(h.wedge(3).unwrap().action()[(0, 0)], h.action().trace());
    }

    #[test]
    fn twists() {
        let t = Connection::trivial(1).tate_twist(1);
        assert_eq!(t.action()[(0, 0)], p(&[0, 1]));
        assert_eq!(t.tate_twist(-1), Connection::trivial(1));
        let e = Connection::trivial(1).exponential_twist(&int(1));
        assert_eq!(e.action()[(0, 0)], p(&[-1]));
        assert_eq!(Connection::trivial(2).exponential_twist(&int(0)), Connection::trivial(2));
    }

    #[test]
    fn hypergeometric_matrices() {
        let h = Connection::hypergeometric(&[int(0)]).unwrap();
        assert_eq!(h.action()[(0, 0)], p(&[-1]));
        let h = Connection::hypergeometric(&[int(0), int(0)]).unwrap();
        let expected =
            PolyMatrix::from_rows(&[vec![p(&[]), p(&[-2])], vec![p(&[-2]), p(&[0, 1])]]).unwrap();
        assert_eq!(h.action(), &expected);
        let h = Connection::hypergeometric(&[int(0), rat(1, 2)]).unwrap();
        assert_eq!(h.action()[(1, 1)], p(&[0, 2]));
        assert!(matches!(Connection::hypergeometric(&[rat(1, 2), int(0)]), Err(Error::BadAlpha(_))));
        assert!(matches!(Connection::hypergeometric(&[int(1)]), Err(Error::BadAlpha(_))));
    }

    #[test]
    fn filtered_space_rees_module() {
        let f = FilteredSpace::from_levels(&[int(0), int(0), int(1)]).unwrap();
        let m = Connection::from_filtered_space(&f).unwrap();
        assert_eq!(m.action(), &PolyMatrix::diagonal(&[p(&[]), p(&[]), p(&[0, 1])]));
        let g = FilteredSpace::from_levels(&[rat(1, 2)]).unwrap();
        assert!(matches!(Connection::from_filtered_space(&g), Err(Error::BadFiltration(_))));
    }

    #[test]
    fn fiber_evaluation() {
        let m = Connection::trivial(2);
        assert_eq!(m.fiber().evaluate(&[p(&[0, 0, 1]), p(&[1, -1])]), vec![int(1), int(0)]);
    }

    #[test]
    fn gauge_by_unipotent() {
        let g = PolyMatrix::from_rows(&[vec![p(&[1]), p(&[0, 1])], vec![p(&[]), p(&[1])]]).unwrap();
        let gi = PolyMatrix::from_rows(&[vec![p(&[1]), p(&[0, -1])], vec![p(&[]), p(&[1])]]).unwrap();
        let m = Connection::trivial(2);
        // e'_2 = h e_1 + e_2, so h^2 d/dh e'_2 = h^2 e_1
        let g_m = m.gauge(&g, &gi).unwrap();
        assert_eq!(g_m.action()[(0, 1)], p(&[0, 0, 1]));
    }
}
