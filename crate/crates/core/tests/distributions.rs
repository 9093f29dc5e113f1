mod common;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use common::{Eps, Law};
use pcpforge::distributions::{
    char_expectation_4ss, char_expectation_e3sat, char_expectation_hypergraph, e3sat_joint, fourss_joint, hypergraph_joint, total_variation,
    BlockFactoredDistribution, ProductSpace, Query, RhoCorrelated,
};
use pcpforge::projection::Projection;
use pcpforge::{Error, Exact};

const CAP: u128 = 1 << 24;

fn projection_pairs(seed: u64) -> Vec<(Projection, Projection)> {
    let mut r = common::rng(seed);
    let mut out = Vec::new();
    for m in 1..=3 {
        for k in 1..=m {
            for _ in 0..2 {
                out.push((common::random_projection(k, m, &mut r), common::random_projection(k, m, &mut r)));
            }
        }
    }
    out
}

fn assert_law(dist: &BlockFactoredDistribution<Exact>, law: &Law) {
    let pmf = dist.exact_pmf(CAP).unwrap();
    assert_eq!(pmf, law.pmf());
    assert!(pmf.values().fold(Exact::zero(), |a, p| a + p).is_one());
    assert!(dist.branch_weight_total().is_one());
    assert!(dist.blocks_partition());
    assert!(dist.has_uniform_marginals());
    assert!(dist.single_coordinate_biases().iter().all(Zero::is_zero));
}

#[test]
fn exact_laws_match_enumeration() {
    for (pi_vu, pi_wu) in projection_pairs(31) {
        assert_law(&hypergraph_joint(&pi_vu, &pi_wu).unwrap(), &Law::hypergraph(&pi_vu, &pi_wu));
        for eps in [Eps::QUARTER, Eps::SIXTEENTH, Eps { p: 2, q: 3 }] {
            assert_law(&fourss_joint(&pi_vu, &pi_wu, eps.exact()).unwrap(), &Law::fourss(&pi_vu, &pi_wu, eps));
            assert_law(&e3sat_joint(&pi_vu, eps.exact()).unwrap(), &Law::e3sat(&pi_vu, eps));
        }
    }
}

#[test]
fn marginals_are_uniform_by_enumeration() {
    for (pi_vu, pi_wu) in projection_pairs(32) {
        let law = Law::fourss(&pi_vu, &pi_wu, Eps::QUARTER);
        let n = 1u64 << law.m;
        for slot in 0..4 {
            for point in 0..n {
                let p = law.expect(|t| i128::from(t[slot] == point));
                assert_eq!(p, common::q(1, n as i64));
            }
        }
    }
}

#[test]
fn single_block_hypergraph_atom() {
    let pi = Projection::identity(1);
    let dist = hypergraph_joint::<Exact>(&pi, &pi).unwrap();
    let pmf = dist.exact_pmf(CAP).unwrap();
    // (x, x', y, y') = (1, -1, 1, 1)
    let want = Law::hypergraph(&pi, &pi).expect(|t| i128::from(t == [0, 1, 0, 0]));
    assert_eq!(want, common::q(1, 16));
    assert_eq!(pmf[&[0, 1, 0, 0]], want);
}

#[test]
fn no_monochromatic_pattern_on_a_shared_block() {
    for (pi_vu, pi_wu) in projection_pairs(33) {
        let dist = hypergraph_joint::<Exact>(&pi_vu, &pi_wu).unwrap();
        let law = Law::hypergraph(&pi_vu, &pi_wu);
        for j in 0..pi_vu.m() {
            for j2 in 0..pi_wu.m() {
                for s in [1i8, -1] {
                    let p = dist.coordinate_pattern_probability(j, j2, [s; 4]).unwrap();
                    let bit = u64::from(s == -1);
                    let oracle = law.expect(|t| {
                        i128::from(t[0] >> j & 1 == bit && t[1] >> j & 1 == bit && t[2] >> j2 & 1 == bit && t[3] >> j2 & 1 == bit)
                    });
                    assert_eq!(p, oracle);
                    if pi_vu.apply(j) == pi_wu.apply(j2) {
                        assert!(p.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn hypergraph_character_examples() {
    let pi = Projection::new(2, vec![0, 1, 1]).unwrap();
    let dist = hypergraph_joint::<Exact>(&pi, &pi).unwrap();
    assert!(char_expectation_hypergraph(&dist, 0b001, 0b010, 0, 0).unwrap().is_zero());
    assert!(char_expectation_hypergraph(&dist, 0, 0, 0b100, 0).unwrap().is_zero());
    assert_eq!(char_expectation_hypergraph(&dist, 0b001, 0b001, 0, 0).unwrap(), common::q(-1, 2));
    // Two coordinates in one block: even, image size 1.
    assert_eq!(char_expectation_hypergraph(&dist, 0b110, 0b110, 0, 0).unwrap(), common::q(1, 2));
}

#[test]
fn e3sat_block_values() {
    for eps in [Eps::QUARTER, Eps::SIXTEENTH, Eps { p: 3, q: 5 }] {
        let e = eps.exact();
        let half = &e / common::q(2, 1);
        for size in 1..=4usize {
            let pi = Projection::new(1, vec![0; size]).unwrap();
            let dist = e3sat_joint(&pi, e.clone()).unwrap();
            let law = Law::e3sat(&pi, eps);
            for j in 1..1u64 << size {
                let odd = j.count_ones() % 2 == 1;
                let plain = char_expectation_e3sat(&dist, 0, j, j).unwrap();
                let with_x = char_expectation_e3sat(&dist, 1, j, j).unwrap();
                assert_eq!(plain, law.expect(|t| common::chi(j, t[2]) * common::chi(j, t[3])));
                assert_eq!(with_x, law.expect(|t| common::chi(1, t[0]) * common::chi(j, t[2]) * common::chi(j, t[3])));
                if odd {
                    assert_eq!(plain, -half.clone());
                    assert_eq!(with_x, half.clone() - Exact::one());
                } else {
                    assert_eq!(plain, Exact::one() - &half);
                    assert_eq!(with_x, half.clone());
                }
            }
        }
    }
}

#[test]
fn e3sat_vanishes_off_the_diagonal_and_outside_the_image() {
    let mut r = common::rng(34);
    for _ in 0..40 {
        let m = r.gen_range(1..=4);
        let k = r.gen_range(1..=m);
        let pi = common::random_projection(k, m, &mut r);
        let dist = e3sat_joint(&pi, common::q(1, 4)).unwrap();
        let (a, b, b2) = (r.gen_range(0..1u64 << k), r.gen_range(0..1u64 << m), r.gen_range(0..1u64 << m));
        let v = char_expectation_e3sat(&dist, a, b, b2).unwrap();
        if b != b2 || a & !pi.image(b) != 0 {
            assert!(v.is_zero(), "alpha {a:b} beta {b:b} beta' {b2:b}");
        }
        if b == b2 && b.count_ones() % 2 == 1 && a == 0 {
            assert!(v.abs() <= common::q(1, 8));
        }
    }
}

#[test]
fn fourss_odd_even_product() {
    let eps = common::q(1, 4);
    // α meets two blocks: {1,2} even in block 0, {3} odd in block 1.
    let pi = Projection::new(2, vec![0, 0, 1]).unwrap();
    let dist = fourss_joint(&pi, &pi, eps.clone()).unwrap();
    let half = &eps / common::q(2, 1);
    let want = (Exact::one() - &half) * -half.clone();
    assert_eq!(char_expectation_4ss(&dist, 0b111, 0b111, 0, 0).unwrap(), want);
    let law = Law::fourss(&pi, &pi, Eps::QUARTER);
    assert_eq!(law.expect(|t| common::chi(0b111, t[0]) * common::chi(0b111, t[1])), want);
}

#[test]
fn input_errors() {
    let a = Projection::new(2, vec![0, 1]).unwrap();
    let b = Projection::new(3, vec![0, 1, 2]).unwrap();
    assert!(matches!(hypergraph_joint::<Exact>(&a, &b), Err(Error::Input(_))));
    assert!(e3sat_joint(&a, Exact::zero()).is_err());
    assert!(e3sat_joint(&a, Exact::one()).is_err());
    assert!(fourss_joint(&a, &a, common::q(3, 2)).is_err());
    let dist = hypergraph_joint::<Exact>(&a, &a).unwrap();
    assert!(char_expectation_hypergraph(&dist, 0b100, 0, 0, 0).is_err());
    assert!(char_expectation_e3sat(&dist, 0, 0, 0).is_err());
}

#[test]
fn float_scalars_track_exact_values() {
    let pi = Projection::new(2, vec![0, 1, 1]).unwrap();
    let exact = fourss_joint(&pi, &pi, common::q(1, 4)).unwrap();
    let approx = fourss_joint::<f64>(&pi, &pi, 0.25).unwrap();
    for a in 0..8 {
        for b in 0..8 {
            let e = char_expectation_4ss(&exact, a, a, b, b).unwrap();
            let f = char_expectation_4ss(&approx, a, a, b, b).unwrap();
            assert!((common::to_f64(&e) - f).abs() < 1e-12);
        }
    }
}

#[test]
fn sampling_is_deterministic_and_unbiased() {
    let pi = Projection::new(2, vec![0, 1, 1]).unwrap();
    let dist = e3sat_joint(&pi, common::q(1, 4)).unwrap();
    assert_eq!(dist.sample(5, 17), dist.sample(5, 17));
    assert_eq!(dist.sample_many(5, 100), dist.sample_many(5, 100));
    let samples = dist.sample_many(9, 1_000_000);
    for j in 0..2 {
        let plus = samples
            .iter()
            .filter(|q| matches!(q, Query::Triple(t) if t.x >> j & 1 == 0))
            .count();
        let bias = 2.0 * plus as f64 / samples.len() as f64 - 1.0;
        assert!(bias.abs() < 0.005, "bias {bias}");
    }
}

#[test]
fn sampler_total_variation() {
    let pi = Projection::new(2, vec![0, 1]).unwrap();
    let dist = hypergraph_joint::<Exact>(&pi, &pi).unwrap();
    let pmf = Law::hypergraph(&pi, &pi).pmf();
    let tv = total_variation(&pmf, &dist.sample_many(4, 200_000));
    assert!(tv < 0.02, "tv {tv}");
}

#[test]
fn rho_correlated_examples() {
    let uniform_bit = || ProductSpace::new(vec![vec![common::q(1, 2), common::q(1, 2)]]).unwrap();
    let half = RhoCorrelated::new(uniform_bit(), common::q(1, 2)).unwrap();
    let same = half.joint_prob(0, 0) + half.joint_prob(1, 1);
    assert_eq!(same, common::q(3, 4));

    let weights = vec![vec![1i64, 3], vec![2, 5, 1]];
    let measures: Vec<Vec<Exact>> = weights
        .iter()
        .map(|w| {
            let s: i64 = w.iter().sum();
            w.iter().map(|&x| common::q(x, s)).collect()
        })
        .collect();
    let space = ProductSpace::new(measures).unwrap();
    let n = space.size();
    let all = vec![true; n];
    let one = RhoCorrelated::new(space.clone(), Exact::one()).unwrap();
    let zero = RhoCorrelated::new(space.clone(), Exact::zero()).unwrap();
    for x in 0..n {
        for y in 0..n {
            let diag = if x == y { space.prob(x) } else { Exact::zero() };
            assert_eq!(one.joint_prob(x, y), diag);
            assert_eq!(zero.joint_prob(x, y), space.prob(x) * space.prob(y));
        }
    }
    let rc = RhoCorrelated::new(space.clone(), common::q(3, 4)).unwrap();
    let pmf = rc.exact_pmf(CAP).unwrap();
    assert!(pmf.iter().fold(Exact::zero(), |a, p| a + p).is_one());
    for x in 0..n {
        let mut point = vec![false; n];
        point[x] = true;
        // Both marginals equal μ.
        assert_eq!(rc.prob_in(&point, &all).unwrap(), space.prob(x));
        assert_eq!(rc.prob_in(&all, &point).unwrap(), space.prob(x));
        assert_eq!(rc.prob_in(&point, &all).unwrap(), common::rho_prob_in(&weights, 3, &point, &all));
    }
    assert!(RhoCorrelated::new(space, common::q(5, 4)).is_err());
    assert!(ProductSpace::new(vec![vec![common::q(1, 2), common::q(1, 3)]]).is_err());
    assert!(ProductSpace::new(vec![vec![Exact::one(), Exact::zero()]]).is_err());
}

#[test]
fn rho_sampler_matches_law() {
    let space = ProductSpace::new(vec![vec![common::q(1, 4), common::q(3, 4)], vec![common::q(1, 2), common::q(1, 2)]]).unwrap();
    let rc = RhoCorrelated::new(space, common::q(1, 2)).unwrap();
    let pmf = rc.exact_pmf(CAP).unwrap();
    let n = 4;
    let draws = 200_000u64;
    let mut counts = vec![0u64; n * n];
    for i in 0..draws {
        let (x, y) = rc.sample(3, i);
        counts[x * n + y] += 1;
    }
    let tv: f64 = pmf
        .iter()
        .zip(&counts)
        .map(|(p, &c)| (common::to_f64(p) - c as f64 / draws as f64).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 0.01, "tv {tv}");
    assert_eq!(rc.sample(3, 11), rc.sample(3, 11));
}
