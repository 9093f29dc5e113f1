use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use serde_json::json;

use super::report::{Record, Summary};
use super::suites::run_suites;
use super::{ModeChoice, RunConfig, Task, Variant};
use crate::analysis::{decode_labeling, parameter_schedule};
use crate::boolean_fourier::TableMode;
use crate::error::{Error, Result};
use crate::label_cover::{
    from_3sat_base_game, generate_planted, lift_labeling, parallel_repetition, InstanceDocument, LabelCoverInstance, Labeling,
};
use crate::reductions::{
    build_hypergraph, e3sat_acceptance, export_4ss_instance, export_e3sat_cnf, fourss_rejection,
    independent_set_violations, monochromatic_fraction, yes_two_coloring, EvalMode, Probability, ProofAssignment,
    ProofDocument,
};
use crate::Exact;

/// What a subcommand produced: an artifact (instance or export text) or a
/// list of report records.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Artifact(String),
    Report(Vec<Record>),
}

/// Runs the configured subcommand, on a pool of `workers` threads when
/// given.
pub fn dispatch(config: &RunConfig) -> Result<Outcome> {
    match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?
            .install(|| dispatch_inner(config)),
        None => dispatch_inner(config),
    }
}

/// Dispatches and writes the output. Returns the number of failed records.
pub fn execute(config: &RunConfig) -> Result<usize> {
    let (text, failed) = match dispatch(config)? {
        Outcome::Artifact(mut s) => {
            if !s.ends_with('\n') {
                s.push('\n');
            }
            (s, 0)
        }
        Outcome::Report(records) => {
            let summary = Summary::of(&records);
            let mut s = String::new();
            for r in &records {
                s.push_str(&serde_json::to_string(r)?);
                s.push('\n');
            }
            s.push_str(&serde_json::to_string(&summary)?);
            s.push('\n');
            (s, summary.failed)
        }
    };
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(failed)
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn load_instance(config: &RunConfig) -> Result<(LabelCoverInstance, Option<Labeling>)> {
    InstanceDocument::from_json(&read_input(config.input.as_deref())?)?.to_instance()
}

fn cap(config: &RunConfig) -> u128 {
    config.caps.states as u128
}

/// Exact within the caps; `auto` falls back to sampling on a size error.
fn evaluate(config: &RunConfig, f: impl Fn(EvalMode) -> Result<Probability>) -> Result<Probability> {
    let exact = EvalMode::Exact { cap: cap(config) };
    let sample = EvalMode::Sample { samples: config.samples, seed: config.seed };
    match config.mode {
        ModeChoice::Exact => f(exact),
        ModeChoice::Sample => f(sample),
        ModeChoice::Auto => match f(exact) {
            Err(Error::Size { .. }) => f(sample),
            other => other,
        },
    }
}

fn probability_text(p: &Probability) -> String {
    match p {
        Probability::Exact(q) => format!("{}/{}", q.numer(), q.denom()),
        Probability::Estimate(e) => e.mean.to_string(),
    }
}

fn probability_detail(p: &Probability) -> serde_json::Value {
    match p {
        Probability::Exact(_) => json!({ "mode": "exact" }),
        Probability::Estimate(e) => json!({ "mode": "sample", "samples": e.samples, "std_err": e.std_err }),
    }
}

/// The eight clauses on three variables: every sign pattern once.
fn all_sign_patterns() -> Vec<[i64; 3]> {
    (0..8)
        .map(|s| {
            let lit = |t: i64| if s >> (t - 1) & 1 == 1 { -t } else { t };
            [lit(1), lit(2), lit(3)]
        })
        .collect()
}

/// DIMACS 3-CNF: `p cnf V C` then clauses of three literals ending in `0`.
fn parse_dimacs(text: &str) -> Result<Vec<[i64; 3]>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('p') {
            continue;
        }
        let lits: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Input(format!("line {}: not a clause", n + 1)))?;
        match lits.as_slice() {
            [a, b, c, 0] => out.push([*a, *b, *c]),
            _ => return Err(Error::Input(format!("line {}: expected three literals and 0", n + 1))),
        }
    }
    Ok(out)
}

fn load_proofs(
    source: &str,
    lc: &LabelCoverInstance,
    planted: Option<&Labeling>,
    variant: Variant,
    seed: u64,
) -> Result<ProofAssignment> {
    let with_left = variant == Variant::E3sat;
    match source {
        "longcode" => {
            let lab = planted.ok_or_else(|| Error::Input("`longcode` proofs need a planted labeling in the instance".into()))?;
            ProofAssignment::long_codes(lc, lab, with_left)
        }
        "random" => ProofAssignment::random(lc, seed, 0, with_left, variant == Variant::E3sat),
        "ones" => {
            let mut p = ProofAssignment::constant(lc, TableMode::Pm1, 1)?;
            if with_left {
                p.left = Some(vec![crate::boolean_fourier::BooleanTable::constant(lc.k(), TableMode::Pm1, 1)?; lc.u_count()]);
            }
            Ok(p)
        }
        path => {
            let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read proofs {path}: {e}")))?;
            let doc: ProofDocument = serde_json::from_str(&text)?;
            ProofAssignment::from_document(doc)
        }
    }
}

fn dispatch_inner(config: &RunConfig) -> Result<Outcome> {
    let seed = config.seed;
    match &config.task {
        Task::GenPlanted { u_count, v_count, degree, k, m } => {
            let (inst, lab) = generate_planted(*u_count, *v_count, *degree, *k, *m, seed)?;
            Ok(Outcome::Artifact(InstanceDocument::from_instance(&inst, Some(&lab)).to_json()))
        }
        Task::Gen3satBase => {
            let cnf = match &config.input {
                Some(p) => parse_dimacs(&read_input(Some(p))?)?,
                None => all_sign_patterns(),
            };
            let inst = from_3sat_base_game(&cnf)?;
            Ok(Outcome::Artifact(InstanceDocument::from_instance(&inst, None).to_json()))
        }
        Task::GenRepeat { r } => {
            let (inst, planted) = load_instance(config)?;
            let rep = parallel_repetition(&inst, *r, cap(config))?;
            let lifted = planted.map(|l| lift_labeling(&inst, &l, *r));
            Ok(Outcome::Artifact(InstanceDocument::from_instance(&rep, lifted.as_ref()).to_json()))
        }
        Task::Reduce { variant } => {
            let (lc, _) = load_instance(config)?;
            let text = match variant {
                Variant::Hypergraph => build_hypergraph(&lc)?.enumerate_edges(cap(config))?.to_text(),
                Variant::E3sat => export_e3sat_cnf(&lc, &config.eps(), cap(config))?.to_text(),
                Variant::Fourss => export_4ss_instance(&lc, &config.eps(), cap(config))?.to_text(),
            };
            Ok(Outcome::Artifact(text))
        }
        Task::Eval { variant, proofs } => {
            let (lc, planted) = load_instance(config)?;
            let eps = config.eps();
            let (check, value, expected) = match variant {
                Variant::E3sat => {
                    let p = load_proofs(proofs, &lc, planted.as_ref(), *variant, seed)?;
                    ("eval-e3sat-acceptance", evaluate(config, |m| e3sat_acceptance(&lc, &p, &eps, m))?, 1)
                }
                Variant::Fourss => {
                    let p = load_proofs(proofs, &lc, planted.as_ref(), *variant, seed)?;
                    ("eval-4ss-rejection", evaluate(config, |m| fourss_rejection(&lc, &p, &eps, m))?, 0)
                }
                Variant::Hypergraph => {
                    let h = build_hypergraph(&lc)?;
                    if proofs == "longcode" {
                        let lab = planted
                            .as_ref()
                            .ok_or_else(|| Error::Input("`longcode` proofs need a planted labeling in the instance".into()))?;
                        let coloring = yes_two_coloring(&lc, lab)?;
                        ("eval-hypergraph-monochromatic", evaluate(config, |m| monochromatic_fraction(&h, &coloring, m))?, 0)
                    } else {
                        let p = load_proofs(proofs, &lc, planted.as_ref(), *variant, seed)?;
                        let subset: Vec<_> = p.right.iter().map(|t| t.with_mode(TableMode::Indicator)).collect();
                        ("eval-hypergraph-violations", evaluate(config, |m| independent_set_violations(&h, &subset, m))?, 0)
                    }
                }
            };
            let inputs = format!("{check}|{}|{proofs}|eps={}|seed={seed}", config.input.as_ref().map(|p| p.display().to_string()).unwrap_or_default(), config.eps);
            // Completeness is a claim only for Long Code proofs of a planted labeling.
            let (rhs, pass) = if proofs == "longcode" {
                let want = Exact::from_integer(expected.into());
                let pass = match &value {
                    Probability::Exact(q) => *q == want,
                    Probability::Estimate(e) => e.mean == expected as f64,
                };
                (format!("{expected}/1"), pass)
            } else {
                (String::new(), true)
            };
            let detail = probability_detail(&value);
            Ok(Outcome::Report(vec![Record::new(check, &inputs, probability_text(&value), rhs, pass).with_detail(detail)]))
        }
        Task::Decode { variant, proofs } => {
            let (lc, planted) = load_instance(config)?;
            let p = load_proofs(proofs, &lc, planted.as_ref(), *variant, seed)?;
            let out = decode_labeling(&lc, &p, seed, variant.kind())?;
            let labels = |labels: &[usize], abstain: &[bool]| -> Vec<Option<usize>> {
                labels.iter().zip(abstain).map(|(&l, &a)| if a { None } else { Some(l + 1) }).collect()
            };
            let detail = json!({
                "left": labels(&out.labeling.left, &out.abstain_left),
                "right": labels(&out.labeling.right, &out.abstain_right),
            });
            let inputs = format!("decode|{}|{proofs}|seed={seed}", variant.name());
            let q = |x: &Exact| format!("{}/{}", x.numer(), x.denom());
            Ok(Outcome::Report(vec![Record::new(
                format!("decode-{}", variant.name()),
                &inputs,
                q(&out.satisfied_fraction),
                q(&out.expected_value),
                true,
            )
            .with_detail(detail)]))
        }
        Task::Params { variant, c0, c_prime } => {
            use num_traits::ToPrimitive;
            let param = match variant {
                Variant::E3sat => config.eps(),
                _ => config.delta(),
            };
            let s = parameter_schedule(variant.kind(), param.to_f64().unwrap_or(f64::NAN), *c0, *c_prime)?;
            let inputs = format!("params|{}|{}|{c0}|{c_prime:?}", variant.name(), format_args!("{}/{}", param.numer(), param.denom()));
            let detail = serde_json::to_value(&s)?;
            Ok(Outcome::Report(vec![Record::new(format!("params-{}", variant.name()), &inputs, s.r, s.t, true).with_detail(detail)]))
        }
        Task::Check { trials, suites } => Ok(Outcome::Report(run_suites(config, suites, *trials)?)),
    }
}
