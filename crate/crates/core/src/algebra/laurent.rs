use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::rational::{format_rational, int};
use super::ring::ring_ops;
use super::{Poly, Rational};

/// Laurent polynomial `sum c_k v^k`, stored from its lowest nonzero degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn new(low: i64, coeffs: Vec<Rational>) -> Self {
        let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
            return LaurentPoly::zero();
        };
        let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        LaurentPoly { low: low + first as i64, coeffs: coeffs[first..=last].to_vec() }
    }

    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(Rational::one(), 0)
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: Rational, degree: i64) -> Self {
        LaurentPoly::new(degree, vec![c])
    }

    pub fn from_poly(p: &Poly) -> Self {
        LaurentPoly::new(0, p.coeffs().to_vec())
    }

    /// `p(1/v)` for a polynomial `p`.
    pub fn from_poly_inverted(p: &Poly) -> Self {
        match p.degree() {
            None => LaurentPoly::zero(),
            Some(d) => LaurentPoly::new(-(d as i64), p.coeffs().iter().rev().cloned().collect()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> Rational {
        if k < self.low {
            return Rational::zero();
        }
        self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms as `(degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    pub fn to_poly(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.low < 0 {
            return None;
        }
        let mut c = vec![Rational::zero(); self.low as usize];
        c.extend(self.coeffs.iter().cloned());
        Some(Poly::new(c))
    }

    /// Reads `sum c_k v^k` as the polynomial `sum c_k h^{-k}` when all degrees are `<= 0`.
    pub fn to_poly_inverted(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let top = self.max_degree().unwrap();
        if top > 0 {
            return None;
        }
        let d = (-self.low) as usize;
        let mut c = vec![Rational::zero(); d + 1];
        for (k, v) in self.terms() {
            c[(-k) as usize] = v.clone();
        }
        Some(Poly::new(c))
    }

    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        (self.coeffs.len() == 1).then(|| (self.coeffs[0].clone(), self.low))
    }

    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// The Euler derivation `v d/dv`.
    pub fn euler(&self) -> LaurentPoly {
        LaurentPoly::new(
            self.low,
            self.coeffs.iter().enumerate().map(|(i, c)| c * int(self.low + i as i64)).collect(),
        )
    }

    pub fn eval_at_one(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |a, c| a + c)
    }

    /// Division by a nonzero monomial `c v^k`.
    pub fn div_monomial(&self, c: &Rational, k: i64) -> LaurentPoly {
        self.scale(&c.recip()).shift(-k)
    }

    fn add_ref(&self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(o.low);
        let hi = self.max_degree().unwrap().max(o.max_degree().unwrap());
        LaurentPoly::new(lo, (lo..=hi).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    fn sub_ref(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add_ref(&o.neg_ref())
    }

    fn mul_ref(&self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.low + o.low, out)
    }

    fn neg_ref(&self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

ring_ops!(LaurentPoly);

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        LaurentPoly::constant(c)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", format_rational(c))?;
            } else {
                write!(f, "{}*v^{k}", format_rational(c))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn normalization_strips_both_ends() {
        let p = LaurentPoly::new(-3, vec![int(0), int(2), int(0), int(1), int(0)]);
        assert_eq!(p.min_degree(), Some(-2));
        assert_eq!(p.max_degree(), Some(0));
        assert!(LaurentPoly::new(5, vec![int(0)]).is_zero());
    }

    #[test]
    fn inversion_of_polynomial_variable() {
        // 1 + 2h + 3h^2 with h = 1/v
        let p = Poly::from_ints(&[1, 2, 3]);
        let l = LaurentPoly::from_poly_inverted(&p);
        assert_eq!(l.coeff(-2), int(3));
        assert_eq!(l.coeff(0), int(1));
        assert_eq!(l.to_poly_inverted().unwrap(), p);
    }

    #[test]
    fn euler_derivation() {
        let p = LaurentPoly::new(-1, vec![int(1), int(5), rat(1, 2)]);
        let e = p.euler();
        assert_eq!(e.coeff(-1), int(-1));
        assert_eq!(e.coeff(0), int(0));
        assert_eq!(e.coeff(1), rat(1, 2));
    }

    #[test]
    fn products_of_monomials() {
        let a = LaurentPoly::monomial(int(2), -3);
        let b = LaurentPoly::monomial(rat(1, 2), 5);
        assert_eq!((&a * &b).as_monomial(), Some((int(1), 2)));
    }
}
