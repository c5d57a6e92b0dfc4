//! Exact integer and rational arithmetic.
//!
//! Everything downstream (Bernoulli numbers, Â-genus coefficients, divisors)
//! is computed over these types; nothing in the crate touches floating point.
//! Rationals are always kept in lowest terms with a strictly positive
//! denominator, and zero is `0/1`.

use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use num_bigint::BigInt;

/// Reduced fraction of two big integers.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid integer literal {0:?}")]
    InvalidInteger(String),
    #[error("invalid fraction literal {0:?}")]
    InvalidFraction(String),
}

/// Builds `num/den` in lowest terms with a positive denominator.
pub fn reduce(num: BigInt, den: BigInt) -> Result<Rational, NumError> {
    if den.is_zero() {
        return Err(NumError::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

/// Denominator of `r` in lowest terms. `den(0) = 1`.
pub fn den(r: &Rational) -> BigInt {
    r.denom().clone()
}

pub fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// `m` choose `j`; zero when `j > m`.
pub fn binomial(m: u64, j: u64) -> BigInt {
    if j > m {
        return BigInt::zero();
    }
    let j = j.min(m - j);
    // Each partial product is itself a binomial coefficient, so the division is exact.
    (0..j).fold(BigInt::one(), |acc, i| acc * (m - i) / (i + 1))
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

/// True when `d` divides `x`; zero divides only zero.
pub fn divides(d: &BigInt, x: &BigInt) -> bool {
    if d.is_zero() {
        x.is_zero()
    } else {
        x.is_multiple_of(d)
    }
}

pub fn parse_int(s: &str) -> Result<BigInt, NumError> {
    let t = s.trim();
    let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(NumError::InvalidInteger(s.to_string()));
    }
    BigInt::from_str(t).map_err(|_| NumError::InvalidInteger(s.to_string()))
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, NumError> {
    match s.split_once('/') {
        None => parse_int(s).map(Rational::from_integer),
        Some((p, q)) => {
            let bad = |_| NumError::InvalidFraction(s.to_string());
            let p = parse_int(p).map_err(bad)?;
            let q = parse_int(q).map_err(bad)?;
            reduce(p, q)
        }
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use super::{parse_int, BigInt};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        parse_int(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.collect_str(v),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_int(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod fraction {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}
