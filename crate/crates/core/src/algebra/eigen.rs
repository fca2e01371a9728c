//! Characteristic polynomials, rational eigenvalues and generalized eigenspaces.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{nullspace, rank};
use super::matrix::RatMatrix;
use super::rational::lcm_of_denominators;
use super::{Poly, Rational};

/// Characteristic polynomial `det(x I - m)` via Hessenberg reduction.
pub fn charpoly(m: &RatMatrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let mut h: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    for col in 1..n.saturating_sub(1) {
        let Some(i) = (col..n).find(|&i| !h[i][col - 1].is_zero()) else {
            continue;
        };
        if i != col {
            h.swap(i, col);
            for row in h.iter_mut() {
                row.swap(i, col);
            }
        }
        let inv = h[col][col - 1].recip();
        for j in col + 1..n {
            if h[j][col - 1].is_zero() {
                continue;
            }
            let u = &h[j][col - 1] * &inv;
            for k in 0..n {
                let t = &u * &h[col][k];
                h[j][k] -= t;
            }
            for row in h.iter_mut() {
                let t = &u * &row[j];
                row[col] += t;
            }
        }
    }
    let mut p: Vec<Poly> = vec![Poly::one()];
    for k in 1..=n {
        let lin = Poly::new(vec![-h[k - 1][k - 1].clone(), Rational::one()]);
        let mut pk = &lin * &p[k - 1];
        let mut t = Rational::one();
        for i in (1..k).rev() {
            t *= &h[i][i - 1];
            if t.is_zero() {
                break;
            }
            let c = &t * &h[i - 1][k - 1];
            if !c.is_zero() {
                pk = &pk - &p[i - 1].scale(&c);
            }
        }
        p.push(pk);
    }
    p.pop().unwrap()
}

/// Rational part of the spectrum of a square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalEigenvalues {
    /// Distinct rational eigenvalues, increasing, with algebraic multiplicities.
    pub eigenvalues: Vec<(Rational, usize)>,
    /// Degree of the factor of the characteristic polynomial without rational roots.
    pub residual_degree: usize,
}

pub fn rational_eigenvalues(m: &RatMatrix) -> RationalEigenvalues {
    let f = charpoly(m);
    let n = f.degree().unwrap_or(0);
    let mut roots = rational_roots(&f);
    roots.sort();
    let mut rest = f;
    let mut eigenvalues = Vec::new();
    for r in roots {
        let lin = Poly::new(vec![-r.clone(), Rational::one()]);
        let mut mult = 0;
        while let Some(q) = rest.exact_div(&lin) {
            rest = q;
            mult += 1;
        }
        eigenvalues.push((r, mult));
    }
    let found: usize = eigenvalues.iter().map(|(_, k)| k).sum();
    RationalEigenvalues { eigenvalues, residual_degree: n - found }
}

/// Distinct rational roots of a nonzero polynomial, unordered.
pub fn rational_roots(f: &Poly) -> Vec<Rational> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sqfree = f.exact_div(&f.gcd(&f.derivative())).expect("gcd divides");
    let mut coeffs = integer_coefficients(&sqfree);
    let mut roots = Vec::new();
    if coeffs[0].is_zero() {
        roots.push(Rational::zero());
        coeffs.remove(0);
    }
    if coeffs.len() < 2 {
        return roots;
    }
    let a0 = coeffs[0].magnitude().clone();
    let an = coeffs.last().unwrap().magnitude().clone();
    let bound = cauchy_bound(&coeffs);
    let nums = divisors(&a0);
    let dens = divisors(&an);
    for q in &dens {
        for p in &nums {
            if !p.gcd(q).is_one() {
                continue;
            }
            let cand = Rational::new(BigInt::from(p.clone()), BigInt::from(q.clone()));
            if cand > bound {
                continue;
            }
            for c in [cand.clone(), -cand] {
                if eval_int(&coeffs, &c).is_zero() {
                    roots.push(c);
                }
            }
        }
    }
    roots
}

fn integer_coefficients(f: &Poly) -> Vec<BigInt> {
    let l = lcm_of_denominators(f.coeffs());
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(coeffs: &[BigInt], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

fn cauchy_bound(coeffs: &[BigInt]) -> Rational {
    let lead = Rational::from_integer(coeffs.last().unwrap().abs());
    let max = coeffs[..coeffs.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
    Rational::one() + Rational::from_integer(max) / lead
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// Positive divisors of `n > 0`. Trial division runs up to 2^20; a cofactor
/// left over is treated as prime.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut d: u64 = 2;
    while d <= TRIAL_LIMIT {
        let bd = BigUint::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            e += 1;
        }
        if e > 0 {
            factors.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for dv in &divs {
            let mut pw = dv.clone();
            next.push(pw.clone());
            for _ in 0..e {
                pw *= &p;
                next.push(pw.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Basis of the generalized eigenspace `ker (m - lambda)^n`.
pub fn generalized_eigenspace(m: &RatMatrix, lambda: &Rational) -> Vec<Vec<Rational>> {
    let n = m.rows();
    let shifted = m.sub(&RatMatrix::identity(n).scale(lambda));
    let mut power = shifted.clone();
    let mut prev_rank = rank(&power);
    if prev_rank == n {
        return Vec::new();
    }
    loop {
        let next = power.mul(&shifted);
        let r = rank(&next);
        if r == prev_rank {
            break;
        }
        power = next;
        prev_rank = r;
    }
    nullspace(&power)
}

/// Smallest `k >= 1` with `(m - lambda)^k` zero on `basis` (columns in the ambient space).
pub fn nilpotency_index(m: &RatMatrix, lambda: &Rational, basis: &[Vec<Rational>]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    let n = m.rows();
    let shifted = m.sub(&RatMatrix::identity(n).scale(lambda));
    let mut vecs: Vec<Vec<Rational>> = basis.to_vec();
    for k in 1..=n {
        vecs = vecs.iter().map(|v| shifted.mul_vec(v)).collect();
        if vecs.iter().all(|v| v.iter().all(Zero::is_zero)) {
            return k;
        }
    }
    panic!("vectors do not lie in the generalized eigenspace")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::determinant;
    use crate::algebra::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn charpoly_of_companion() {
        // companion of x^3 - 6x^2 + 11x - 6
        let c = m(&[&[0, 0, 6], &[1, 0, -11], &[0, 1, 6]]);
        assert_eq!(charpoly(&c), Poly::from_ints(&[-6, 11, -6, 1]));
    }

    #[test]
    fn charpoly_constant_term_is_signed_determinant() {
        let a = m(&[&[2, -1, 3, 0], &[1, 1, 0, 5], &[0, 4, -2, 1], &[7, 0, 1, 1]]);
        let p = charpoly(&a);
        assert_eq!(p.coeff(0), determinant(&a));
        assert_eq!(p.coeff(3), -a.trace());
    }

    #[test]
    fn eigenvalue_examples() {
        let e = rational_eigenvalues(&RatMatrix::diagonal(&[int(0), int(2)]));
        assert_eq!(e.eigenvalues, vec![(int(0), 1), (int(2), 1)]);
        let e = rational_eigenvalues(&m(&[&[0, 1], &[0, 0]]));
        assert_eq!(e.eigenvalues, vec![(int(0), 2)]);
        // companion of x^2 - 2
        let e = rational_eigenvalues(&m(&[&[0, 2], &[1, 0]]));
        assert!(e.eigenvalues.is_empty());
        assert_eq!(e.residual_degree, 2);
    }

    #[test]
    fn fractional_eigenvalues() {
        let a = RatMatrix::diagonal(&[rat(2, 3), rat(-5, 4), rat(2, 3)]);
        let e = rational_eigenvalues(&a);
        assert_eq!(e.eigenvalues, vec![(rat(-5, 4), 1), (rat(2, 3), 2)]);
        assert_eq!(e.residual_degree, 0);
    }

    #[test]
    fn generalized_eigenspaces() {
        let d = RatMatrix::diagonal(&[int(1), int(2)]);
        assert_eq!(generalized_eigenspace(&d, &int(1)), vec![vec![int(1), int(0)]]);
        assert!(generalized_eigenspace(&d, &int(3)).is_empty());
        let j = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(generalized_eigenspace(&j, &int(0)).len(), 2);
        assert_eq!(nilpotency_index(&j, &int(0), &generalized_eigenspace(&j, &int(0))), 2);
    }
}
