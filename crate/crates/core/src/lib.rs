//! Long Code PCP reductions from Label Cover, computed exactly.
//!
//! The crate builds projection games, the three query distributions of the
//! hypergraph, E3SAT and set-splitting verifiers, evaluates proofs against
//! them and checks every closed-form Fourier identity against brute force.
//! Core numerics are generic over [`Scalar`]; [`Exact`] (arbitrary precision
//! rationals) is the default everywhere equality matters.

pub mod analysis;
pub mod boolean_fourier;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod label_cover;
pub mod precise;
pub mod projection;
pub mod reductions;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact scalar used for every equality-checked quantity.
pub type Exact = num_rational::BigRational;

/// Work limits. Exact routines refuse to enumerate more than `states`
/// states; tables above `table_dim` variables are rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Caps {
    pub states: u64,
    pub table_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            states: 1 << 24,
            table_dim: boolean_fourier::DEFAULT_TABLE_DIM_CAP,
        }
    }
}

impl Caps {
    /// Environment variable overriding the state cap.
    pub const STATES_ENV: &'static str = "PCPFORGE_CAP_STATES";

    /// Defaults, with the state cap taken from [`Caps::STATES_ENV`] when set.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(raw) = std::env::var(Self::STATES_ENV) {
            caps.states = raw
                .trim()
                .parse()
                .ok()
                .filter(|&n: &u64| n > 0)
                .ok_or_else(|| Error::Config(format!("{} = {raw:?} is not a positive integer", Self::STATES_ENV)))?;
        }
        Ok(caps)
    }
}
