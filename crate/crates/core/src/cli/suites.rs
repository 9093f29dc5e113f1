//! The `check` suites. Trial `t` of suite `s` draws from stream
//! `(seed, "check-<s>", t)`; records come back in trial order whatever the
//! thread count.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::Record;
use super::RunConfig;
use crate::analysis::{
    fourss_albeta_check, fourss_block_table_check, gamma, lemma_bb1_check, lemma_rt_bound, mixing_bound_check,
    p_measure_blockwise, p_measure_support,
};
use crate::boolean_fourier::{fold, parseval, wht, BooleanTable, TableMode};
use crate::distributions::{e3sat_joint, fourss_joint, hypergraph_joint, total_variation, BlockFactoredDistribution, ProductSpace, RhoCorrelated};
use crate::error::Result;
use crate::projection::{full_mask, submasks, Mask, Projection};
use crate::rng::{stream, StreamRng};
use crate::scalar::{format_rational, Scalar};
use crate::Exact;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Gamma,
    Bb1,
    Rt,
    FourssTables,
    Mixing,
    PMeasure,
    Parseval,
    SamplerTv,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Gamma,
        Suite::Bb1,
        Suite::Rt,
        Suite::FourssTables,
        Suite::Mixing,
        Suite::PMeasure,
        Suite::Parseval,
        Suite::SamplerTv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gamma => "gamma",
            Suite::Bb1 => "bb1",
            Suite::Rt => "rt",
            Suite::FourssTables => "4ss-tables",
            Suite::Mixing => "mixing",
            Suite::PMeasure => "p-measure",
            Suite::Parseval => "parseval",
            Suite::SamplerTv => "sampler-tv",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Trials run when `--trials default`.
    pub fn default_trials(self) -> u64 {
        match self {
            Suite::Gamma => 100,
            Suite::Bb1 => 200,
            Suite::Rt => 100,
            Suite::FourssTables => 1000,
            Suite::Mixing => 500,
            Suite::PMeasure => 200,
            Suite::Parseval => 100,
            Suite::SamplerTv => 3,
        }
    }
}

/// Upper end of the total variation accepted by the sampler suite.
pub const TV_THRESHOLD: f64 = 0.01;

pub(crate) fn run_suites(config: &RunConfig, suites: &[Suite], trials: Option<u64>) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for &s in suites {
        let n = trials.unwrap_or_else(|| s.default_trials());
        out.extend(run_suite(config, s, n)?);
    }
    Ok(out)
}

fn per_trial(n: u64, f: impl Fn(u64) -> Result<Vec<Record>> + Sync + Send) -> Result<Vec<Record>> {
    let parts = (0..n).into_par_iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn rng_for(config: &RunConfig, suite: Suite, t: u64) -> StreamRng {
    stream(config.seed, &format!("check-{}", suite.name()), t)
}

fn q(x: &Exact) -> String {
    format_rational(x)
}

fn random_table(dim: usize, rng: &mut StreamRng) -> Result<BooleanTable> {
    BooleanTable::from_fn(dim, TableMode::Pm1, |_| if rng.gen::<bool>() { 1 } else { -1 })
}

fn random_mask(bits: usize, rng: &mut StreamRng) -> Mask {
    rng.gen::<u64>() & full_mask(bits)
}

fn run_suite(config: &RunConfig, suite: Suite, n: u64) -> Result<Vec<Record>> {
    let cap = config.caps.states as u128;
    let name = suite.name();
    match suite {
        Suite::Gamma => per_trial(n, |t| {
            let mut rng = rng_for(config, suite, t);
            let k = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=5);
            let pi = Projection::random(k, m, &mut rng);
            let mut agree = 0u64;
            for alpha in submasks(full_mask(m)) {
                agree += u64::from(gamma(&pi, alpha)?.agrees());
            }
            let total = 1u64 << m;
            let inputs = format!("{name}|k={k}|pi={:?}", pi.map());
            Ok(vec![Record::new(name, &inputs, agree, total, agree == total)])
        }),
        Suite::Bb1 => per_trial(n, |t| {
            let mut rng = rng_for(config, suite, t);
            let m = rng.gen_range(1..=6);
            let k = rng.gen_range(1..=m);
            let eps = if t % 2 == 0 { Exact::ratio(1, 4) } else { Exact::ratio(1, 16) };
            let pi = Projection::random(k, m, &mut rng);
            let b = fold(&random_table(m, &mut rng)?)?;
            let rep = lemma_bb1_check(&b, &pi, &eps, cap)?;
            let inputs = format!("{name}|pi={:?}|eps={}|b={:?}", pi.map(), q(&eps), b.values());
            let pass = rep.pass && rep.value == rep.direct;
            Ok(vec![Record::new(name, &inputs, q(&rep.value.abs()), q(&rep.bound), pass)])
        }),
        Suite::Rt => per_trial(n, |t| {
            let mut rng = rng_for(config, suite, t);
            let k = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=5);
            let eps = Exact::ratio(1, 4);
            let pi = Projection::random(k, m, &mut rng);
            let a = fold(&random_table(k, &mut rng)?)?;
            let b = fold(&random_table(m, &mut rng)?)?;
            [(4, 2), (8, 2)]
                .into_iter()
                .map(|(r, tt)| {
                    let rep = lemma_rt_bound(&a, &b, &pi, &eps, r, tt)?;
                    let inputs = format!("{name}|pi={:?}|R={r}|T={tt}|a={:?}|b={:?}", pi.map(), a.values(), b.values());
                    Ok(Record::new(name, &inputs, q(&rep.lhs), rep.rhs.to_f64(), rep.pass))
                })
                .collect()
        }),
        Suite::FourssTables => {
            let mut out = Vec::new();
            for eps in [Exact::ratio(1, 4), Exact::ratio(1, 16)] {
                let rep = fourss_block_table_check(&eps, 4)?;
                let inputs = format!("4ss-block-table|eps={}|max_block=4", q(&eps));
                out.push(
                    Record::new("4ss-block-table", &inputs, rep.failures, 0, rep.failures == 0)
                        .with_detail(json!({ "cases": rep.cases })),
                );
            }
            out.extend(per_trial(n, |t| {
                let mut rng = rng_for(config, suite, t);
                let k = rng.gen_range(1..=3);
                let (m1, m2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
                let eps = if t % 2 == 0 { Exact::ratio(1, 4) } else { Exact::ratio(1, 16) };
                let pv = Projection::random(k, m1, &mut rng);
                let pw = Projection::random(k, m2, &mut rng);
                let (alpha, beta) = (random_mask(m1, &mut rng), random_mask(m2, &mut rng));
                let rep = fourss_albeta_check(&pv, &pw, alpha, beta, &eps)?;
                let inputs = format!("4ss-albeta|pv={:?}|pw={:?}|a={alpha}|b={beta}|eps={}", pv.map(), pw.map(), q(&eps));
                Ok(vec![Record::new("4ss-albeta", &inputs, q(&rep.value), q(&rep.bound), rep.pass)])
            })?);
            Ok(out)
        }
        Suite::Mixing => per_trial(n, |t| {
            let mut rng = rng_for(config, suite, t);
            let coords = rng.gen_range(1..=4);
            // integer weights in [1, 16] over at most 4 atoms keep every atom >= 1/64
            let measures: Vec<Vec<Exact>> = (0..coords)
                .map(|_| {
                    let size = rng.gen_range(2..=4);
                    let w: Vec<i64> = (0..size).map(|_| rng.gen_range(1..=16)).collect();
                    let total: i64 = w.iter().sum();
                    w.into_iter().map(|x| Exact::ratio(x, total)).collect()
                })
                .collect();
            let rho = Exact::ratio(rng.gen_range(0..4), 4);
            let space = ProductSpace::new(measures.clone())?;
            let size = space.size();
            let pick = |rng: &mut StreamRng| {
                let mut set: Vec<bool> = (0..size).map(|_| rng.gen()).collect();
                set[rng.gen_range(0..size)] = true;
                set
            };
            let (a, b) = (pick(&mut rng), pick(&mut rng));
            let rc = RhoCorrelated::new(space, rho.clone())?;
            let rep = mixing_bound_check(&rc, &a, &b)?;
            let shown: Vec<Vec<String>> = measures.iter().map(|m| m.iter().map(q).collect()).collect();
            let inputs = format!("{name}|mu={shown:?}|rho={}|a={a:?}|b={b:?}", q(&rho));
            Ok(vec![Record::new(name, &inputs, q(&rep.lhs), rep.rhs.to_f64(), rep.pass)])
        }),
        Suite::PMeasure => per_trial(n, |t| {
            let mut rng = rng_for(config, suite, t);
            let k = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=6);
            let pi = Projection::random(k, m, &mut rng);
            let beta = loop {
                let b = random_mask(m, &mut rng);
                if b != 0 {
                    break b;
                }
            };
            let den = rng.gen_range(2..=16);
            let eps = Exact::ratio(rng.gen_range(1..den), den);
            let support = p_measure_support(&pi, beta, &eps)?;
            let mut total = Exact::zero();
            let mut blockwise_ok = true;
            for (alpha, p) in &support {
                blockwise_ok &= *p == p_measure_blockwise(&pi, beta, *alpha, &eps)?;
                total += p;
            }
            let inputs = format!("{name}|pi={:?}|beta={beta}|eps={}", pi.map(), q(&eps));
            Ok(vec![Record::new(name, &inputs, q(&total), 1, total.is_one() && blockwise_ok)])
        }),
        Suite::Parseval => per_trial(n, |t| {
            let mut rng = rng_for(config, suite, t);
            let dim = rng.gen_range(1..=8);
            let table = random_table(dim, &mut rng)?;
            let pm = parseval(&wht::<Exact>(&table)?);
            let ind = table.with_mode(TableMode::Indicator);
            let mean = Exact::ratio(ind.ones() as i64, ind.len() as i64);
            let ind_ok = parseval(&wht::<Exact>(&ind)?) == mean;
            let inputs = format!("{name}|values={:?}", table.values());
            Ok(vec![Record::new(name, &inputs, q(&pm), 1, pm.is_one() && ind_ok)])
        }),
        Suite::SamplerTv => {
            let mut out = Vec::new();
            for t in 0..n {
                let mut rng = rng_for(config, suite, t);
                let eps = Exact::ratio(1, 4);
                let (label, dist): (&str, BlockFactoredDistribution<Exact>) = match t % 3 {
                    0 => {
                        let (pv, pw) = (Projection::random(2, 2, &mut rng), Projection::random(2, 2, &mut rng));
                        ("hypergraph", hypergraph_joint(&pv, &pw)?)
                    }
                    1 => ("e3sat", e3sat_joint(&Projection::random(2, 3, &mut rng), eps.clone())?),
                    _ => {
                        let (pv, pw) = (Projection::random(2, 2, &mut rng), Projection::random(2, 2, &mut rng));
                        ("4ss", fourss_joint(&pv, &pw, eps.clone())?)
                    }
                };
                let pmf = dist.exact_pmf(cap)?;
                let sample_seed = stream(config.seed, "check-sampler-tv-draws", t).gen::<u64>();
                let draws = dist.sample_many(sample_seed, config.samples);
                let tv = total_variation(&pmf, &draws);
                let inputs = format!("{name}|{label}|support={}|samples={}|t={t}", pmf.len(), config.samples);
                out.push(
                    Record::new(format!("{name}-{label}"), &inputs, tv, TV_THRESHOLD, tv < TV_THRESHOLD)
                        .with_detail(json!({ "support": pmf.len(), "samples": config.samples })),
                );
            }
            Ok(out)
        }
    }
}
