use serde::Serialize;

use super::c1;
use crate::distributions::DistributionKind;
use crate::error::{Error, Result};

/// Degree thresholds of the decoding argument. Logarithms are natural.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub variant: String,
    /// `δ` for the hypergraph and set-splitting tests, `ε` for E3SAT.
    pub parameter: f64,
    pub eps: Option<f64>,
    pub c0: f64,
    pub c_prime: f64,
    pub r_real: f64,
    pub r: u64,
    pub t: u64,
}

/// Default exponent `c' = 2 + 2c₁` of the hypergraph schedule.
pub fn default_c_prime() -> f64 {
    2.0 + 2.0 * c1().to_f64()
}

/// `R` from the variant's formula, `T = ⌈R^{c0}⌉`, both rounded up.
pub fn parameter_schedule(variant: DistributionKind, parameter: f64, c0: f64, c_prime: Option<f64>) -> Result<Schedule> {
    let upper_ok = match variant {
        DistributionKind::Hypergraph => parameter <= 1.0,
        _ => parameter < 1.0,
    };
    if !(parameter > 0.0 && upper_ok) {
        return Err(Error::Config(format!("parameter {parameter} outside the domain of the {variant} schedule")));
    }
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(Error::Config(format!("c0 = {c0} must be positive")));
    }
    let c_prime = c_prime.unwrap_or_else(default_c_prime);
    if !(c_prime > 0.0 && c_prime.is_finite()) {
        return Err(Error::Config(format!("c' = {c_prime} must be positive")));
    }
    let (r_real, eps) = match variant {
        DistributionKind::Hypergraph => (8.0 / (parameter / 2.0).powf(c_prime / c0), None),
        DistributionKind::E3sat => ((4.0 / parameter * (1.0 / parameter).ln()).powf(1.0 / c0), Some(parameter)),
        DistributionKind::Fourss => ((2.0 / parameter * (1.0 / parameter).ln()).powf(1.0 / c0), Some(parameter)),
    };
    if !r_real.is_finite() || r_real > u64::MAX as f64 {
        return Err(Error::Config(format!("R = {r_real} is out of range")));
    }
    let r = (r_real - 1e-9).ceil().max(1.0) as u64;
    let t = ((r as f64).powf(c0) - 1e-9).ceil().max(1.0) as u64;
    Ok(Schedule {
        variant: variant.to_string(),
        parameter,
        eps,
        c0,
        c_prime,
        r_real,
        r,
        t,
    })
}
