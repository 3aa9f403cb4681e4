//! Exact rational scalars used for coordinates and feature values.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Serialize, Serializer};

/// An exact rational number.
///
/// Parses integers (`3`), fractions (`-11/20`) and finite decimals (`0.55`).
/// Always displays in lowest terms as `p` or `p/q`, which is the canonical
/// text form used by the instance file format.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Scalar(pub BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ScalarParseError(pub String);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn new(numer: i64, denom: i64) -> Self {
        Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarParseError(s.to_string());
        if s.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.parse().map_err(|_| err())?;
            let d: BigInt = d.parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Scalar(BigRational::new(n, d)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (neg, int_digits) = match int_part.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
            };
            let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
            if !digits_ok(int_digits)
                || !digits_ok(frac_part)
                || (int_digits.is_empty() && frac_part.is_empty())
            {
                return Err(err());
            }
            let whole = if int_digits.is_empty() {
                BigInt::zero()
            } else {
                int_digits.parse::<BigInt>().map_err(|_| err())?
            };
            let mut denom = BigInt::one();
            let mut frac = BigInt::zero();
            for b in frac_part.bytes() {
                denom *= 10;
                frac = frac * 10 + BigInt::from(b - b'0');
            }
            let mut value = BigRational::new(whole * &denom + frac, denom);
            if neg {
                value = -value;
            }
            return Ok(Scalar(value));
        }
        let n: BigInt = s.parse().map_err(|_| err())?;
        Ok(Scalar(BigRational::from_integer(n)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
