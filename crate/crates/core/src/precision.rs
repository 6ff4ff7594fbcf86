//! Working-precision context for all big-float arithmetic.
//!
//! Every numeric routine takes a [`Precision`] describing the significant
//! decimal digits it must carry. Internally this becomes an MPFR bit
//! precision with a few guard bits on top.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

pub use rug::Float as Scalar;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 16;

/// Default digit budget for angle evaluation.
pub const DEFAULT_DIGITS: u32 = 60;
/// Default digit budget for catalog runs over all of K.
pub const DEFAULT_CATALOG_DIGITS: u32 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 10 {
            return Err(Error::Usage(format!("digits must be at least 10, got {digits}")));
        }
        if digits > 100_000 {
            return Err(Error::Usage(format!("digits {digits} is unreasonably large")));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// Same context with `extra` more digits.
    pub fn widened(&self, extra: u32) -> Self {
        Self { digits: self.digits + extra }
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn two_pi(&self) -> Float {
        self.pi() * 2u32
    }

    /// `10^-exp` at this precision.
    pub fn ten_pow_neg(&self, exp: i64) -> Float {
        let ten = Float::with_val(self.bits(), 10u32);
        let e = Float::with_val(self.bits(), -exp);
        ten.pow(e)
    }

    /// Residual bound for solved equations: `10^(-digits+10)`.
    pub fn residual_tolerance(&self) -> Float {
        self.ten_pow_neg(self.digits as i64 - 10)
    }

    /// Inequality gaps below `10^(-digits/2)` are not trusted.
    pub fn ambiguity_threshold(&self) -> Float {
        self.ten_pow_neg((self.digits / 2) as i64)
    }

    /// Parse a decimal string at this precision.
    pub fn parse(&self, text: &str) -> Result<Float> {
        let parsed = Float::parse(text.trim()).map_err(|e| Error::Parse(format!("not a decimal number {text:?}: {e}")))?;
        Ok(Float::with_val(self.bits(), parsed))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self { digits: DEFAULT_DIGITS }
    }
}

/// Decimal rendering with `digits` significant digits, e.g. `4.38405e-1`.
pub fn to_decimal(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_cover_digits() {
        let p = Precision::new(50).unwrap();
        assert!(p.bits() >= 167);
        assert!(Precision::new(3).is_err());
    }

    #[test]
    fn parse_and_render() {
        let p = Precision::new(30).unwrap();
        let x = p.parse("0.438405").unwrap();
        let s = to_decimal(&x, 6);
        assert!(s.starts_with("4.38405"), "{s}");
        assert!(p.parse("abc").is_err());
    }

    #[test]
    fn thresholds() {
        let p = Precision::new(50).unwrap();
        let t = p.ambiguity_threshold();
        assert!((t.to_f64() - 1e-25).abs() < 1e-35);
        let r = p.residual_tolerance();
        assert!((r.to_f64() / 1e-40 - 1.0).abs() < 1e-9);
    }
}
