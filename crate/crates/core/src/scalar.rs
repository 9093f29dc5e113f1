//! Scalar abstraction shared by spectra, distributions and the analysis
//! routines. Exact rationals are the default; `f64`/`f32` give fast
//! approximate evaluations of the same formulas.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::precise::Precise;

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact (equality tests are meaningful).
    const EXACT: bool;

    /// `num / den`. Panics on a zero denominator.
    fn ratio(num: i64, den: i64) -> Self;

    fn from_exact(q: &BigRational) -> Self;

    fn to_precise(&self) -> Precise;

    /// Equality for exact scalars; `1e-9` relative closeness for floats.
    fn approx_eq(&self, other: &Self) -> bool;

    fn from_u64_lossy(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable")
    }

    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("i64 is representable")
    }

    /// `2^-e`.
    fn inv_pow2(e: u32) -> Self {
        let mut out = Self::one();
        let half = Self::ratio(1, 2);
        for _ in 0..e {
            out = out * half.clone();
        }
        out
    }

    fn powi(&self, e: u32) -> Self {
        num_traits::pow::pow(self.clone(), e as usize)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_exact(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_precise(&self) -> Precise {
        Precise::from_rational(self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn inv_pow2(e: u32) -> Self {
        BigRational::new(BigInt::one(), BigInt::one() << e)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn ratio(num: i64, den: i64) -> Self {
                assert!(den != 0, "zero denominator");
                (num as f64 / den as f64) as $t
            }

            fn from_exact(q: &BigRational) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn to_precise(&self) -> Precise {
                Precise::from_f64(*self as f64)
            }

            fn approx_eq(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= 1e-9 * scale
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Inverse of [`parse_rational`]; integers print without a denominator.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
