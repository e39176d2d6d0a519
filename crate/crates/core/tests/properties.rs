use std::collections::HashSet;

use num_traits::{One, Zero};
use proptest::prelude::*;

use wordprob_core::corpus::{catalog, GroupSpec};
use wordprob_core::group::LatticeLimits;
use wordprob_core::prob;
use wordprob_core::rational::{ratio, Rational};
use wordprob_core::theorems::{g_sn, verify_lemma1, verify_prop2, Budget, Delta, Epsilon, HypothesisStatus, Verdict};
use wordprob_core::word::Letter;
use wordprob_core::{FiniteGroup, SubgroupSet, Word};

const SMALL: &[&str] = &["C:6", "S:3", "D:4", "Dic:2", "A:4", "D:5", "P:[S:3,C:2]", "Dic:3", "S:4", "H:3"];

fn build(id: &str) -> FiniteGroup {
    id.parse::<GroupSpec>().unwrap().build().unwrap()
}

fn small_group() -> impl Strategy<Value = &'static str> {
    proptest::sample::select(SMALL)
}

fn arb_word(max_var: u32) -> impl Strategy<Value = Word> {
    let letter = (1..=max_var, -3i64..=3).prop_map(|(var, exp)| Letter { var, exp });
    let leaf = proptest::collection::vec(letter, 0..5).prop_map(Word::from_letters);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Word::commutator(&a, &b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            (inner, -2i64..=2).prop_map(|(a, e)| a.pow(e)),
        ]
    })
}

fn arb_chain() -> impl Strategy<Value = Word> {
    (prop_oneof![-3i64..=-1, 1i64..=3], proptest::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(3)], 0..3)).prop_map(
        |(base, steps)| {
            steps.iter().enumerate().fold(Word::power_of(1, base), |w, (i, &e)| {
                Word::commutator(&w, &Word::power_of(i as u32 + 2, e))
            })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn centralizer_times_class_is_order(id in small_group(), x in 0usize..1000) {
        let g = build(id);
        let x = x % g.order();
        let classes = g.conjugacy_classes();
        let c = classes.class_of(x);
        prop_assert_eq!(g.centralizer(x).order() * classes.size(c), g.order());
        for h in g.elements() {
            prop_assert_eq!(classes.class_of(g.conjugate(x, h)), c);
        }
    }

    #[test]
    fn fibers_are_class_functions(id in small_group(), w in arb_word(2)) {
        let g = build(id);
        let fibers = prob::fiber_counts_bruteforce(&g, &w, 5_000_000).unwrap();
        let classes = g.conjugacy_classes();
        for x in g.elements() {
            let rep = classes.representative(classes.class_of(x));
            prop_assert_eq!(fibers[x], fibers[rep]);
        }
        let total: u64 = fibers.iter().sum();
        prop_assert_eq!(total, (g.order() as u64).pow(w.arity() as u32));
    }

    #[test]
    fn word_maps_commute_with_conjugation(id in small_group(), w in arb_word(3), seed in any::<u64>()) {
        let g = build(id);
        let n = g.order();
        let pick = |i: u64| ((seed.rotate_left(i as u32 * 7) ^ (i * 0x9e37)) % n as u64) as usize;
        let tuple: Vec<usize> = (0..w.arity() as u64).map(pick).collect();
        let h = pick(99);
        let conj: Vec<usize> = tuple.iter().map(|&x| g.conjugate(x, h)).collect();
        prop_assert_eq!(w.evaluate(&g, &conj).unwrap(), g.conjugate(w.evaluate(&g, &tuple).unwrap(), h));
    }

    #[test]
    fn printed_words_parse_back(w in arb_word(4)) {
        let text = w.to_string();
        prop_assert_eq!(Word::parse(&text).unwrap(), w);
    }

    #[test]
    fn dp_matches_bruteforce_on_chains(id in small_group(), w in arb_chain()) {
        let g = build(id);
        prop_assume!((g.order() as u64).pow(w.arity() as u32) <= 2_000_000);
        let dp = prob::exact_distribution_dp(&g, &w).unwrap();
        let brute = prob::exact_distribution_bruteforce(&g, &w, u64::MAX).unwrap();
        prop_assert_eq!(dp, brute);
    }

    #[test]
    fn quotient_orders(id in small_group()) {
        let g = build(id);
        for n in g.lower_central_series().terms().iter().chain([&g.center()]) {
            let q = g.quotient(n).unwrap();
            prop_assert_eq!(q.group.order() * n.order(), g.order());
            for a in g.elements() {
                for b in [0, g.order() / 2, g.order() - 1] {
                    prop_assert_eq!(q.project(g.mul(a, b)), q.group.mul(q.project(a), q.project(b)));
                }
            }
        }
    }
}

#[test]
fn lattice_is_closed_under_intersection() {
    for id in ["S:4", "D:6", "Dic:3", "P:[C:2,C:4]", "A:4"] {
        let g = build(id);
        let lat = g.subgroup_lattice(&LatticeLimits::default()).unwrap();
        let set: HashSet<&SubgroupSet> = lat.iter().collect();
        for a in lat.iter() {
            assert_eq!(g.order() % a.order(), 0);
            for b in lat.iter() {
                assert!(set.contains(&a.intersection(&g, b)), "{id}");
            }
        }
    }
}

#[test]
fn residuals_shrink_and_match_coset_kernels() {
    let lim = LatticeLimits::default();
    for spec in catalog(48) {
        let g = spec.build().unwrap();
        let mut previous = g_sn(&g, 1, &lim).unwrap().residual;
        assert_eq!(previous.order(), g.order());
        for n in 2..=6u64 {
            let res = g_sn(&g, n, &lim).unwrap();
            assert!(res.residual.is_subgroup_of(&previous), "{spec} n={n}");
            assert!(res.residual.is_normal_in(&g));
            if n <= 5 {
                let mut kernels = SubgroupSet::whole(&g);
                for h in g.subgroups_of_index_at_most(n as usize, &lim).unwrap() {
                    kernels = kernels.intersection(&g, &g.coset_action_kernel(&h));
                }
                assert_eq!(res.residual, kernels, "{spec} n={n}");
            }
            previous = res.residual;
        }
    }
}

#[test]
fn pr_k_is_monotone_and_detects_class() {
    for spec in catalog(32) {
        let g = spec.build().unwrap();
        let class = g.nilpotency_class();
        let mut last = Rational::zero();
        for k in 1..=5 {
            let p = prob::pr_k(&g, k);
            assert!(p >= last, "{spec} k={k}");
            // Pr_k = 1 exactly when the group has class < k
            assert_eq!(p.is_one(), class.is_some_and(|c| c < k), "{spec} k={k}");
            last = p;
        }
    }
}

/// Direct tuple count of `Prob(|G:C_G(w(..))| < 1/δ)`, independent of the
/// class-function machinery.
fn tail_oracle(g: &FiniteGroup, w: &Word, delta: &Rational) -> Rational {
    let n = g.order();
    let arity = w.arity();
    let index: Vec<usize> = g.elements().map(|x| n / g.centralizer(x).order()).collect();
    let mut hits = 0u64;
    let total = (n as u64).pow(arity as u32);
    for t in 0..total {
        let tuple: Vec<usize> = (0..arity).map(|i| (t / (n as u64).pow(i as u32)) as usize % n).collect();
        let v = w.evaluate(g, &tuple).unwrap();
        if ratio(index[v] as i64, 1) * delta < Rational::one() {
            hits += 1;
        }
    }
    ratio(hits, total)
}

/// Largest point mass of `[w, x_fresh]` by nested loops.
fn max_point_oracle(g: &FiniteGroup, w: &Word) -> Rational {
    let wp = Word::commutator(w, &Word::var(w.arity() as u32 + 1));
    let n = g.order();
    let arity = wp.arity();
    let total = (n as u64).pow(arity as u32);
    let mut counts = vec![0u64; n];
    for t in 0..total {
        let tuple: Vec<usize> = (0..arity).map(|i| (t / (n as u64).pow(i as u32)) as usize % n).collect();
        counts[wp.evaluate(g, &tuple).unwrap()] += 1;
    }
    ratio(*counts.iter().max().unwrap(), total)
}

/// Both δ-statements, brute-forced under exactly their hypotheses on a grid
/// of (ε, δ), including boundary values of ε.
#[test]
fn delta_statements_hold_under_their_hypotheses() {
    let b = Budget::default();
    for id in ["S:3", "C:6", "D:4", "Dic:2"] {
        let g = build(id);
        for w in [Word::var(1), Word::lower_central(2), Word::power_of(1, 2)] {
            let best = max_point_oracle(&g, &w);
            let mut eps_grid: Vec<Rational> = (1..=8).map(|i| ratio(i, 8)).filter(|e| e <= &best).collect();
            eps_grid.push(best.clone());
            for eps in &eps_grid {
                for d in [2i64, 3, 4, 6, 10] {
                    let delta = eps / ratio(d, 1);
                    let e = Epsilon::Value(eps.clone());
                    let dl = Delta::Value(delta.clone());
                    let lemma = verify_lemma1(&g, id, &w, &e, &dl, &b).unwrap();
                    assert_eq!(lemma.hypothesis, HypothesisStatus::Satisfied);
                    assert_eq!(lemma.verdict, Verdict::Pass, "{id} {w} ε={eps} δ={delta}");
                    assert!(tail_oracle(&g, &w, &delta) > eps - &delta);
                    let prop = verify_prop2(&g, id, &w, &e, &dl, &b).unwrap();
                    assert_eq!(prop.verdict, Verdict::Pass, "{id} {w} ε={eps} δ={delta}");
                }
            }
            // above the attained maximum the hypothesis fails and nothing is claimed
            let over = Epsilon::Value(&best + ratio(1, 100));
            let r = verify_lemma1(&g, id, &w, &over, &Delta::EpsOver(2), &b).unwrap();
            assert_eq!(r.verdict, Verdict::Vacuous);
        }
    }
}

#[test]
fn monte_carlo_interval_covers_truth_for_several_words() {
    let g = build("D:4");
    for (w, seed) in [(Word::lower_central(2), 1u64), (Word::power_of(1, 2), 2), (Word::lower_central(3), 3)] {
        let truth = prob::prob_at(&g, &w, 0, u64::MAX).unwrap();
        let e = prob::monte_carlo(&g, &w, 0, 40_000, 0.001, seed).unwrap();
        assert!(e.covers(&truth), "{w}: {} vs {truth}", e.point_f64());
    }
}
