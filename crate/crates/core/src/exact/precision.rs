use crate::error::{Error, Result};
use num_rational::Rational64;

/// MPFR-backed real number. Precision travels with each value.
pub type Real = rug::Float;

/// Decimal working precision plus the tolerances derived from it.
///
/// `int_tol` guards integer rounding, `null_tol` decides nullspace rank
/// and bounds reconstruction residuals. Both can be overridden after
/// construction when a test or caller knows better.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionConfig {
    digits: u32,
    pub int_tol: f64,
    pub null_tol: f64,
}

impl PrecisionConfig {
    pub const MIN_DIGITS: u32 = 15;

    pub fn with_digits(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidPrecision(digits));
        }
        let int_tol = if digits >= 25 { 1e-20 } else { 1e-9 };
        let null_tol = 10f64.powi(-((digits / 2) as i32));
        Ok(Self {
            digits,
            int_tol,
            null_tol,
        })
    }

    /// Machine-precision-like configuration (15 digits, loose tolerances).
    pub fn fast() -> Self {
        Self::with_digits(15).expect("15 digits is the minimum")
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Mantissa bits handed to the backend, with guard bits on top.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    /// Residual bound for validation checks: 10^(2 - digits).
    pub fn residual_bound(&self) -> f64 {
        10f64.powi(2 - self.digits as i32)
    }

    pub fn real_f64(&self, x: f64) -> Real {
        Real::with_val(self.bits(), x)
    }

    pub fn real_i64(&self, x: i64) -> Real {
        Real::with_val(self.bits(), x)
    }

    pub fn zero(&self) -> Real {
        Real::new(self.bits())
    }

    pub fn ratio(&self, r: Rational64) -> Real {
        Real::with_val(self.bits(), *r.numer()) / Real::with_val(self.bits(), *r.denom())
    }

    pub fn pi(&self) -> Real {
        Real::with_val(self.bits(), rug::float::Constant::Pi)
    }

    pub fn sqrt_u64(&self, n: u64) -> Real {
        Real::with_val(self.bits(), n).sqrt()
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self::with_digits(50).expect("default precision is valid")
    }
}
