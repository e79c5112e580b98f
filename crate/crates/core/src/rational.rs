//! Exact rational scalars.
//!
//! Everything in the crate computes over [`Rational`], an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or a bare integer. Decimal and scientific notation are
/// rejected. The result is normalized, so `"2/4"` parses to `1/2`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        s.parse::<BigInt>().map_err(|_| err())
    };
    match trimmed.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(parse_int(num)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(trimmed)?)),
    }
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// `base^exp` for a possibly negative exponent. Panics on `0^negative`.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = one();
    let mut sq = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient C(n, k) as a machine integer; zero when k > n.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_rational("2/4").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-6/-4").unwrap(), frac(3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
    }

    #[test]
    fn parse_rejects_inexact_forms() {
        for bad in ["1.5", "1e3", "", "3/0", "a/2", "1/", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(11, 3), 165);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow(&int(6), 3), int(216));
        assert_eq!(pow(&int(2), -2), frac(1, 4));
        assert_eq!(pow(&int(-3), 0), int(1));
    }
}
