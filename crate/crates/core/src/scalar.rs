//! Exact rational scalars and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms by `num-rational`.
pub type Scalar = BigRational;

/// Integer scalar.
pub fn q(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational scalar `n/d`. Panics if `d == 0`.
pub fn qr(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^k` as a scalar.
pub fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal {0:?}")]
pub struct ScalarParseError(pub String);

/// Parses `"p"` or `"p/q"` with optional leading minus. Decimal points and
/// exponents are rejected so that no float ever enters.
pub fn parse_scalar(s: &str) -> Result<Scalar, ScalarParseError> {
    let err = || ScalarParseError(s.to_string());
    let t = s.trim();
    let int = |x: &str| -> Result<BigInt, ScalarParseError> {
        let body = x.strip_prefix('-').unwrap_or(x);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        x.parse::<BigInt>().map_err(|_| err())
    };
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(int(t)?)),
        Some((n, d)) => {
            let n = int(n)?;
            let d = int(d)?;
            if d.is_zero() || d.is_negative() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Canonical text: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
