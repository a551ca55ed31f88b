//! Exact arithmetic substrate: rationals, univariate polynomials, reduced
//! rational functions and dense linear algebra over the rationals.

mod matrix;
mod poly;

pub use matrix::{QMatrix, Rref};
pub use poly::{Poly, RatFunc};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` (optional sign, surrounding whitespace ignored).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// n (n-1) ... (n-k+1); zero when k > n.
pub(crate) fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling(n, k) / factorial(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rat("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rat(" -3 ").unwrap(), rat(-3));
        assert_eq!(parse_rat("2/-4").unwrap(), ratio(-1, 2));
        assert_eq!(fmt_rat(&ratio(-6, 4)), "-3/2");
        assert_eq!(fmt_rat(&rat(7)), "7");
        assert_eq!(fmt_rat(&rat(0)), "0");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn combinatorial_helpers() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(2, 3), BigInt::zero());
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 0), BigInt::one());
    }
}
