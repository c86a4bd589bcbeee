//! Exact rational helpers on top of [`num_rational::BigRational`].

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Largest integer strictly less than `x`.
pub fn floor_strict(x: &Rational) -> BigInt {
    let f = x.floor().to_integer();
    if x.is_integer() {
        f - 1
    } else {
        f
    }
}

/// Smallest integer strictly greater than `x`.
pub fn ceil_strict(x: &Rational) -> BigInt {
    x.floor().to_integer() + 1
}

/// Integers in the open interval `(lower, upper)`, in increasing order.
pub fn open_interval_integers(lower: &Rational, upper: &Rational) -> Vec<i64> {
    let lo = ceil_strict(lower);
    let hi = floor_strict(upper);
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(to_i64(&x));
        x += 1;
    }
    out
}

pub fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("integer out of i64 range")
}

/// Reduced rendering: `p/q`, or `p` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn fmt_list(xs: &[Rational]) -> String {
    xs.iter().map(fmt_rational).collect::<Vec<_>>().join(",")
}

pub fn fmt_ints<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Parses a single `p/q` or `p` token.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let t = token.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {t:?}"));
    let (numer, denom) = match t.split_once('/') {
        Some((p, q)) => (p, q),
        None => (t, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| bad())?;
    let denom = BigInt::from_str(denom).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(Error::InvalidArgument(format!("zero denominator in {t:?}")));
    }
    Ok(Rational::new(numer, denom))
}

/// Parses a comma-separated list of `p/q` tokens.
pub fn parse_rational_list(list: &str) -> Result<Vec<Rational>> {
    list.split(',').map(parse_rational).collect()
}

pub fn parse_int_list(list: &str) -> Result<Vec<i64>> {
    list.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidArgument(format!("not an integer: {:?}", t.trim())))
        })
        .collect()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}
