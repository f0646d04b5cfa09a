//! Exact rational arithmetic and the present-bias parameter.
//!
//! Every cost, bias, reward and perceived value in this crate is a
//! [`Rational`]. Agent behaviour depends on exact ties, so nothing is ever
//! rounded.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `numer / denom`.
///
/// # Panics
///
/// Panics if `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    InvalidInteger(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed). The result is
/// reduced to lowest terms.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |s: &str| {
        let s = s.trim();
        BigInt::from_str(s).map_err(|_| ParseRationalError::InvalidInteger(s.to_string()))
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((p, q)) => {
            let numer = parse_int(p)?;
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Lossy conversion used only for human-readable output.
pub fn approx_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Integer ceiling of a rational.
pub fn ceil(value: &Rational) -> BigInt {
    value.ceil().to_integer()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_text {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod option {
        use serde::Serializer;

        use super::super::{format_rational, Rational};

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.serialize_some(&format_rational(v)),
                None => s.serialize_none(),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiasError {
    #[error("present bias must lie in (0, 1], got {0}")]
    OutOfRange(Rational),
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

/// Present bias `β ∈ (0, 1]`. Everything that is not paid immediately is
/// multiplied by β.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bias(Rational);

impl Bias {
    pub fn new(beta: Rational) -> Result<Self, BiasError> {
        if beta.is_positive() && beta <= Rational::one() {
            Ok(Bias(beta))
        } else {
            Err(BiasError::OutOfRange(beta))
        }
    }

    /// Shorthand for tests and examples; panics on out-of-range input.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Bias::new(rat(numer, denom)).expect("bias in (0, 1]")
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `1 - β`.
    pub fn complement(&self) -> Rational {
        Rational::one() - &self.0
    }

    /// True for β = 1, the time-consistent agent.
    pub fn is_unbiased(&self) -> bool {
        self.0.is_one()
    }

    /// `β · x`.
    pub fn discount(&self, x: &Rational) -> Rational {
        &self.0 * x
    }

    /// `x / β`, i.e. the reward whose perceived value is `x`.
    pub fn undiscount(&self, x: &Rational) -> Rational {
        x / &self.0
    }
}

impl fmt::Display for Bias {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Bias {
    type Err = BiasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Bias::new(parse_rational(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" 6 ").unwrap(), int(6));
        assert_eq!(parse_rational("-3/9").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("3/-9").unwrap(), rat(-1, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(parse_rational(""), Err(ParseRationalError::Empty)));
        assert!(matches!(
            parse_rational("0.5"),
            Err(ParseRationalError::InvalidInteger(_))
        ));
        assert!(matches!(
            parse_rational("1/2/3"),
            Err(ParseRationalError::InvalidInteger(_))
        ));
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&rat(6, 1)), "6");
        assert_eq!(format_rational(&rat(2, 6)), "1/3");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(format_rational(&rat(-4, 6)), "-2/3");
    }

    #[test]
    fn bias_range() {
        assert!(Bias::new(int(1)).is_ok());
        assert!(Bias::new(rat(1, 3)).is_ok());
        assert!(Bias::new(int(0)).is_err());
        assert!(Bias::new(rat(3, 2)).is_err());
        assert!(Bias::new(rat(-1, 2)).is_err());
        assert_eq!("1/5".parse::<Bias>().unwrap().complement(), rat(4, 5));
    }

    #[test]
    fn ceil_rounds_up() {
        assert_eq!(ceil(&rat(7, 2)), BigInt::from(4));
        assert_eq!(ceil(&int(32)), BigInt::from(32));
    }
}
