//! Shared numeric representations: exact rational parsing, fixed-point
//! decimals produced from exact rationals, and arbitrary-precision reals.

use std::cmp::Ordering;
use std::fmt;

use dashu::base::{Abs, Sign, UnsignedAbs};
use dashu::float::round::mode::HalfEven;
use dashu::float::FBig;
use dashu::integer::{IBig, UBig};
use dashu::rational::RBig;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Binary float used for transcendental evaluations.
pub type Real = FBig<HalfEven, 2>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"3"`, `"-7/8"`, `"0.125"` or `"1.5e-2"` into an exact rational.
/// Decimal literals are read exactly, so `"0.125"` is `1/8`.
pub fn parse_rational(text: &str) -> Result<RBig, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(s.to_string());

    if let Some((num, den)) = s.split_once('/') {
        let num: IBig = num.trim().parse().map_err(|_| invalid())?;
        let den: IBig = den.trim().parse().map_err(|_| invalid())?;
        if den == IBig::ZERO {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(RBig::from_parts_signed(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| invalid())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numerator: IBig = digits.parse().map_err(|_| invalid())?;
    if negative {
        numerator = -numerator;
    }
    let scale = exponent - frac_part.len() as i64;
    let value = if scale >= 0 {
        RBig::from(numerator * pow10(scale as usize))
    } else {
        RBig::from_parts(numerator, UBig::from(pow10((-scale) as usize).unsigned_abs()))
    };
    Ok(value)
}

pub(crate) fn pow10(exp: usize) -> IBig {
    IBig::from(10).pow(exp)
}

/// Integer division rounded to nearest, ties to even.
fn div_round_half_even(num: &IBig, den: &UBig) -> IBig {
    let den_i = IBig::from(den.clone());
    let quotient = num / &den_i;
    let remainder = num - &quotient * &den_i;
    let twice: IBig = remainder.clone().abs() * IBig::from(2);
    let step = if remainder.sign() == Sign::Negative {
        IBig::from(-1)
    } else {
        IBig::ONE
    };
    match twice.cmp(&den_i) {
        Ordering::Less => quotient,
        Ordering::Greater => quotient + step,
        Ordering::Equal => {
            if (&quotient % IBig::from(2)) == IBig::ZERO {
                quotient
            } else {
                quotient + step
            }
        }
    }
}

/// A fixed-point decimal `mantissa * 10^-digits`, obtained by correctly
/// rounding an exact rational (round half to even).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fixed {
    mantissa: IBig,
    digits: usize,
}

impl Fixed {
    pub fn from_rational(value: &RBig, digits: usize) -> Self {
        let scaled = value.numerator() * pow10(digits);
        Self {
            mantissa: div_round_half_even(&scaled, value.denominator()),
            digits,
        }
    }

    pub fn from_integer(value: i64, digits: usize) -> Self {
        Self {
            mantissa: IBig::from(value) * pow10(digits),
            digits,
        }
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn mantissa(&self) -> &IBig {
        &self.mantissa
    }

    /// Exact rational value of the rounded decimal.
    pub fn to_rational(&self) -> RBig {
        RBig::from_parts(self.mantissa.clone(), pow10(self.digits).unsigned_abs())
    }

    /// Re-rounds to fewer fractional digits.
    pub fn round_to(&self, digits: usize) -> Self {
        Self::from_rational(&self.to_rational(), digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().value()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == IBig::ZERO
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.clone().abs(),
            digits: self.digits,
        }
    }

    /// Difference `self - other` at the larger of the two precisions.
    pub fn sub(&self, other: &Self) -> Self {
        let digits = self.digits.max(other.digits);
        let lhs = &self.mantissa * pow10(digits - self.digits);
        let rhs = &other.mantissa * pow10(digits - other.digits);
        Self {
            mantissa: lhs - rhs,
            digits,
        }
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        let digits = self.digits.max(other.digits);
        let lhs = &self.mantissa * pow10(digits - self.digits);
        let rhs = &other.mantissa * pow10(digits - other.digits);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let negative = self.mantissa.sign() == Sign::Negative;
        let text = self.mantissa.clone().unsigned_abs().to_string();
        let sign = if negative { "-" } else { "" };
        if self.digits == 0 {
            return write!(f, "{sign}{text}");
        }
        let padded = if text.len() <= self.digits {
            format!("{}{}", "0".repeat(self.digits + 1 - text.len()), text)
        } else {
            text
        };
        let split = padded.len() - self.digits;
        write!(f, "{sign}{}.{}", &padded[..split], &padded[split..])
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Number of binary digits carried for a requested number of decimal
/// digits, with guard bits on top.
pub fn working_bits(decimal_digits: usize) -> usize {
    (decimal_digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

/// An arbitrary-precision real tagged with the number of significant decimal
/// digits it is meant to be reported at.
#[derive(Clone, Debug, PartialEq)]
pub struct HighPrecision {
    value: Real,
    digits: usize,
}

impl HighPrecision {
    pub fn new(value: Real, digits: usize) -> Self {
        Self { value, digits }
    }

    pub fn value(&self) -> &Real {
        &self.value
    }

    pub fn into_value(self) -> Real {
        self.value
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().value()
    }

    pub fn is_zero(&self) -> bool {
        self.value.repr().significand() == &IBig::ZERO
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.value.sign() == Sign::Negative {
            -1
        } else {
            1
        }
    }

    /// Scientific notation rounded to `digits` significant decimal digits.
    pub fn to_scientific(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let decimal = self
            .value
            .clone()
            .with_base_and_precision::<10>(self.digits.max(1))
            .value();
        format!("{decimal:e}")
    }
}

impl fmt::Display for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_scientific())
    }
}

impl Serialize for HighPrecision {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Context for working-precision float construction.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub decimal_digits: usize,
    pub bits: usize,
}

impl Precision {
    pub fn digits(decimal_digits: usize) -> Self {
        Self {
            decimal_digits,
            bits: working_bits(decimal_digits),
        }
    }

    pub fn int(&self, value: impl Into<IBig>) -> Real {
        Real::from(value.into()).with_precision(self.bits).value()
    }

    pub fn rational(&self, value: &RBig) -> Real {
        value.to_float::<HalfEven, 2>(self.bits).value()
    }

    pub fn from_f64(&self, value: f64) -> Real {
        Real::try_from(value)
            .expect("finite f64")
            .with_precision(self.bits)
            .value()
    }

    pub fn pi(&self) -> Real {
        Real::pi(self.bits)
    }

    pub fn wrap(&self, value: Real) -> HighPrecision {
        HighPrecision::new(value, self.decimal_digits)
    }
}
