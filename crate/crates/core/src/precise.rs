//! 256-bit binary floating point for the few irrational quantities (square
//! roots, non-integer powers). Everything polynomial stays exact rational.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;

/// Mantissa width used for every irrational evaluation.
pub const PRECISION_BITS: usize = 256;

/// Absolute slack allowed when comparing an exact quantity against an
/// irrational threshold.
pub const COMPARISON_SLACK: f64 = 1e-12;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone, Debug)]
pub struct Precise(BigFloat);

impl Precise {
    pub fn from_i64(v: i64) -> Self {
        Precise(BigFloat::from_i64(v, PRECISION_BITS))
    }

    pub fn from_f64(v: f64) -> Self {
        Precise(BigFloat::from_f64(v, PRECISION_BITS))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let num = parse_integer(&q.numer().to_string());
        let den = parse_integer(&q.denom().to_string());
        Precise(num.div(&den, PRECISION_BITS, RM))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        Precise(self.0.add(&o.0, PRECISION_BITS, RM))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Precise(self.0.sub(&o.0, PRECISION_BITS, RM))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Precise(self.0.mul(&o.0, PRECISION_BITS, RM))
    }

    pub fn div(&self, o: &Self) -> Self {
        Precise(self.0.div(&o.0, PRECISION_BITS, RM))
    }

    pub fn sqrt(&self) -> Self {
        Precise(self.0.sqrt(PRECISION_BITS, RM))
    }

    /// `self^exponent` for a positive base. A zero base gives zero for a
    /// positive exponent.
    pub fn pow(&self, exponent: &Self) -> Self {
        if self.0.is_zero() {
            return Self::zero();
        }
        with_consts(|cc| Precise(self.0.pow(&exponent.0, PRECISION_BITS, RM, cc)))
    }

    pub fn abs(&self) -> Self {
        Precise(self.0.abs())
    }

    pub fn is_nan(&self) -> bool {
        self.0.is_nan()
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        let s = with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// `self >= other - COMPARISON_SLACK`.
    pub fn ge_with_slack(&self, other: &Self) -> bool {
        let threshold = other.sub(&Self::from_f64(COMPARISON_SLACK));
        matches!(self.partial_cmp(&threshold), Some(Ordering::Greater | Ordering::Equal))
    }

    /// `self <= other + COMPARISON_SLACK`.
    pub fn le_with_slack(&self, other: &Self) -> bool {
        let threshold = other.add(&Self::from_f64(COMPARISON_SLACK));
        matches!(self.partial_cmp(&threshold), Some(Ordering::Less | Ordering::Equal))
    }
}

fn parse_integer(digits: &str) -> BigFloat {
    with_consts(|cc| BigFloat::parse(digits, Radix::Dec, PRECISION_BITS, RM, cc))
}

impl PartialEq for Precise {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Precise {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for Precise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_round_trip_to_f64() {
        assert_eq!(Precise::from_rational(&q(3, 8)).to_f64(), 0.375);
        assert!((Precise::from_rational(&q(1, 3)).to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn sqrt_two_squared() {
        let two = Precise::from_i64(2);
        let r = two.sqrt();
        let back = r.mul(&r).sub(&two).abs();
        assert!(back.to_f64() < 1e-70);
    }

    #[test]
    fn pow_matches_integer_power() {
        let half = Precise::from_rational(&q(1, 2));
        let cube = half.pow(&Precise::from_i64(3));
        assert_eq!(cube.to_f64(), 0.125);
        assert_eq!(Precise::zero().pow(&Precise::from_i64(2)).to_f64(), 0.0);
    }

    #[test]
    fn slack_comparisons() {
        let a = Precise::from_f64(1.0);
        let b = Precise::from_f64(1.0 + 1e-13);
        assert!(a.ge_with_slack(&b));
        assert!(b.le_with_slack(&a));
        assert!(!a.ge_with_slack(&Precise::from_f64(1.0 + 1e-9)));
    }
}
