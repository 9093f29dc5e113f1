//! Command-line front end: argument parsing, configuration validation and
//! dispatch of the `gen`, `reduce`, `eval`, `check`, `decode` and `params`
//! subcommands.

mod report;
mod run;
mod suites;

pub use report::{digest, Record, Summary};
pub use run::{dispatch, execute, Outcome};
pub use suites::Suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionKind;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::{Caps, Exact};

/// Sample count used when exact evaluation exceeds the caps.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

#[derive(Parser, Debug, Clone)]
#[command(name = "pcpforge", version, about = "Long Code PCP reductions from Label Cover, evaluated exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Flags shared by every subcommand. Values are kept as text so that
/// validation can report every bad flag at once.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Noise rate `p/q` of the E3SAT and set-splitting tests.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    /// Soundness gap `p/q` for the schedules.
    #[arg(long, global = true)]
    pub delta: Option<String>,
    /// `exact` or `sample`; exact when within the caps if omitted.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, visible_alias = "n", global = true)]
    pub samples: Option<String>,
    #[arg(long = "cap-states", global = true)]
    pub cap_states: Option<String>,
    #[arg(long = "cap-table-dim", global = true)]
    pub cap_table_dim: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub workers: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Generate a Label Cover instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Export a reduction as text: hypergraph, e3sat or 4ss.
    Reduce { variant: String },
    /// Evaluate a proof bundle against a verifier.
    Eval {
        #[arg(long, default_value = "e3sat")]
        variant: String,
        /// `longcode`, `random`, `ones` or a path to a proofs.v1 file.
        #[arg(long, default_value = "longcode")]
        proofs: String,
    },
    /// Run the lemma check suites.
    Check {
        /// `default` or a trial count applied to every suite.
        #[arg(long, default_value = "default")]
        trials: String,
        /// Comma-separated subset of suites.
        #[arg(long)]
        suites: Option<String>,
    },
    /// Decode a proof bundle into a labeling.
    Decode {
        #[arg(long, default_value = "e3sat")]
        variant: String,
        #[arg(long, default_value = "longcode")]
        proofs: String,
    },
    /// Print the degree thresholds R and T.
    Params {
        #[arg(long)]
        variant: String,
        #[arg(long, default_value = "1")]
        c0: String,
        #[arg(long = "c-prime")]
        c_prime: Option<String>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum GenCommand {
    /// Random instance with a planted satisfying labeling.
    Planted {
        #[arg(long = "u", default_value_t = 4)]
        u_count: usize,
        #[arg(long = "v", default_value_t = 4)]
        v_count: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Clause-variable game of a 3-CNF read from `--in` (DIMACS), or of the
    /// eight clauses on three variables.
    #[command(name = "3sat-base")]
    ThreeSatBase,
    /// Parallel repetition of the instance read from `--in`.
    Repeat {
        #[arg(long, default_value_t = 2)]
        r: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "hypergraph")]
    Hypergraph,
    #[serde(rename = "e3sat")]
    E3sat,
    #[serde(rename = "4ss")]
    Fourss,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hypergraph" => Some(Variant::Hypergraph),
            "e3sat" => Some(Variant::E3sat),
            "4ss" | "fourss" => Some(Variant::Fourss),
            _ => None,
        }
    }

    pub fn kind(self) -> DistributionKind {
        match self {
            Variant::Hypergraph => DistributionKind::Hypergraph,
            Variant::E3sat => DistributionKind::E3sat,
            Variant::Fourss => DistributionKind::Fourss,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Hypergraph => "hypergraph",
            Variant::E3sat => "e3sat",
            Variant::Fourss => "4ss",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    /// Exact when the work fits the caps, otherwise sampling.
    Auto,
    Exact,
    Sample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Task {
    GenPlanted { u_count: usize, v_count: usize, degree: usize, k: usize, m: usize },
    Gen3satBase,
    GenRepeat { r: u32 },
    Reduce { variant: Variant },
    Eval { variant: Variant, proofs: String },
    Check { trials: Option<u64>, suites: Vec<Suite> },
    Decode { variant: Variant, proofs: String },
    Params { variant: Variant, c0: f64, c_prime: Option<f64> },
}

/// A validated run. Rationals are stored in normalized `p/q` text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: Task,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub caps: Caps,
    pub eps: String,
    pub delta: String,
    pub mode: ModeChoice,
    pub samples: u64,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn eps(&self) -> Exact {
        parse_rational(&self.eps).expect("validated rational")
    }

    pub fn delta(&self) -> Exact {
        parse_rational(&self.delta).expect("validated rational")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Parses the command line, reporting clap errors as configuration errors.
pub fn parse_args<I, T>(args: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Normalizes flags into a [`RunConfig`]. `env_cap_states` is the value of
/// `PCPFORGE_CAP_STATES`, if set; an explicit `--cap-states` wins over it.
/// Every offending flag is listed in the error.
pub fn validate_config(cli: &Cli, env_cap_states: Option<&str>) -> Result<RunConfig> {
    let mut issues: Vec<String> = Vec::new();
    let f = &cli.flags;

    let mut uint = |name: &str, raw: &Option<String>, default: u64, positive: bool| -> u64 {
        match raw {
            None => default,
            Some(s) => match s.trim().parse::<u64>() {
                Ok(n) if !positive || n > 0 => n,
                _ => {
                    issues.push(format!("--{name} {s:?}: expected a {} integer", if positive { "positive" } else { "non-negative" }));
                    default
                }
            },
        }
    };
    let seed = uint("seed", &f.seed, 0, false);
    let samples = uint("samples", &f.samples, DEFAULT_SAMPLES, true);
    let mut caps = Caps::default();
    let env_cap = env_cap_states.map(|s| s.to_string());
    caps.states = uint(Caps::STATES_ENV, &env_cap, caps.states, true);
    caps.states = uint("cap-states", &f.cap_states, caps.states, true);
    caps.table_dim = uint("cap-table-dim", &f.cap_table_dim, caps.table_dim as u64, true) as usize;
    let workers = f.workers.as_ref().map(|_| uint("workers", &f.workers, 1, true) as usize);
    if caps.table_dim > crate::boolean_fourier::MAX_TABLE_DIM {
        issues.push(format!("--cap-table-dim {}: at most {}", caps.table_dim, crate::boolean_fourier::MAX_TABLE_DIM));
    }

    let mut rational = |name: &str, raw: &Option<String>, default: &str, allow_one: bool| -> String {
        let text = raw.as_deref().unwrap_or(default);
        match parse_rational(text) {
            Some(q) => {
                let zero = Exact::from_integer(0.into());
                let one = Exact::from_integer(1.into());
                if q <= zero || q > one || (!allow_one && q == one) {
                    let hi = if allow_one { "]" } else { ")" };
                    issues.push(format!("--{name} {text}: must lie in (0, 1{hi}"));
                }
                format_rational(&q)
            }
            None => {
                issues.push(format!("--{name} {text:?}: expected a rational p/q with q > 0"));
                default.to_string()
            }
        }
    };
    let eps = rational("eps", &f.eps, "1/4", false);
    let delta = rational("delta", &f.delta, "1/2", true);

    let mode = match f.mode.as_deref() {
        None => ModeChoice::Auto,
        Some("exact") => ModeChoice::Exact,
        Some("sample") => ModeChoice::Sample,
        Some("auto") => ModeChoice::Auto,
        Some(other) => {
            issues.push(format!("--mode {other:?}: expected exact or sample"));
            ModeChoice::Auto
        }
    };

    let mut variant = |raw: &str| -> Variant {
        Variant::parse(raw).unwrap_or_else(|| {
            issues.push(format!("variant {raw:?}: expected hypergraph, e3sat or 4ss"));
            Variant::E3sat
        })
    };
    let task = match &cli.command {
        Command::Gen(GenCommand::Planted { u_count, v_count, degree, k, m }) => Task::GenPlanted {
            u_count: *u_count,
            v_count: *v_count,
            degree: *degree,
            k: *k,
            m: *m,
        },
        Command::Gen(GenCommand::ThreeSatBase) => Task::Gen3satBase,
        Command::Gen(GenCommand::Repeat { r }) => Task::GenRepeat { r: *r },
        Command::Reduce { variant: v } => Task::Reduce { variant: variant(v) },
        Command::Eval { variant: v, proofs } => Task::Eval { variant: variant(v), proofs: proofs.clone() },
        Command::Decode { variant: v, proofs } => Task::Decode { variant: variant(v), proofs: proofs.clone() },
        Command::Params { variant: v, c0, c_prime } => {
            let v = variant(v);
            let mut real = |name: &str, s: &str| -> f64 {
                match s.trim().parse::<f64>() {
                    Ok(x) if x > 0.0 && x.is_finite() => x,
                    _ => {
                        issues.push(format!("--{name} {s:?}: expected a positive number"));
                        1.0
                    }
                }
            };
            let c0 = real("c0", c0);
            let c_prime = c_prime.as_deref().map(|s| real("c-prime", s));
            Task::Params { variant: v, c0, c_prime }
        }
        Command::Check { trials, suites } => {
            let trials = match trials.as_str() {
                "default" => None,
                s => match s.parse::<u64>() {
                    Ok(n) if n > 0 => Some(n),
                    _ => {
                        issues.push(format!("--trials {s:?}: expected `default` or a positive integer"));
                        None
                    }
                },
            };
            let suites = match suites {
                None => Suite::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .filter_map(|s| {
                        Suite::parse(s).or_else(|| {
                            issues.push(format!("--suites: unknown suite {s:?}"));
                            None
                        })
                    })
                    .collect(),
            };
            Task::Check { trials, suites }
        }
    };

    if !issues.is_empty() {
        return Err(Error::Config(issues.join("; ")));
    }
    Ok(RunConfig {
        task,
        input: f.input.clone(),
        output: f.out.clone(),
        seed,
        caps,
        eps,
        delta,
        mode,
        samples,
        workers,
    })
}

/// Entry point of the binary; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                // A closed pipe (`pcpforge --help | head`) is not an error.
                let _ = write!(std::io::stdout().lock(), "{e}");
                return 0;
            }
            report::emit_error("config", &e.to_string());
            return 2;
        }
    };
    let env = std::env::var(Caps::STATES_ENV).ok();
    let config = match validate_config(&cli, env.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            report::emit_error(e.kind(), &e.to_string());
            return 2;
        }
    };
    match execute(&config) {
        Ok(0) => 0,
        Ok(_) => 1,
        Err(e) => {
            report::emit_error(e.kind(), &e.to_string());
            2
        }
    }
}
