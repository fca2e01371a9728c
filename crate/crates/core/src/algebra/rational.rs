use alloc::format;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError { input: s.into(), reason };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |x: &str, signed: bool| {
        let digits = if signed { x.strip_prefix('-').unwrap_or(x) } else { x };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) {
        return Err(err("numerator is not an integer"));
    }
    if !valid(den, false) {
        return Err(err("denominator is not a positive integer"));
    }
    let n: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
    let d: BigInt = den.parse().map_err(|_| err("denominator is not a positive integer"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Canonical `"p/q"` text, denominator always present (`0/1`, `-3/2`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Floor as a machine integer. Panics on overflow, which cannot occur for the
/// desk-scale exponents handled here.
pub fn floor_i64(r: &Rational) -> i64 {
    let f = r.floor().to_integer();
    i64::try_from(f).expect("exponent out of i64 range")
}

pub fn ceil_i64(r: &Rational) -> i64 {
    let c = r.ceil().to_integer();
    i64::try_from(c).expect("exponent out of i64 range")
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub(crate) fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" 0/5 ").unwrap(), int(0));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["1/0", "", "a/2", "1/-2", "1.5", "/3", "2/"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(format_rational(&rat(4, -6)), "-2/3");
    }

    #[test]
    fn floor_ceil_frac() {
        assert_eq!(floor_i64(&rat(-1, 3)), -1);
        assert_eq!(ceil_i64(&rat(-1, 3)), 0);
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(&int(5)), int(0));
    }
}
