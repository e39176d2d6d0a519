//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Each criterion also returns a serialised artifact; criterion 9 recomputes
//! the artifacts of 1–7 with 1 and 8 workers and compares bytes.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::One;
use rayon::prelude::*;
use serde_json::json;

use wordprob_core::corpus::{catalog, GroupSpec};
use wordprob_core::group::LatticeLimits;
use wordprob_core::prob;
use wordprob_core::rational::{ratio, Rational};
use wordprob_core::spectrum::{sweep, ResultCache, SpectrumFilter};
use wordprob_core::theorems::{self, Budget, Delta, Epsilon, TheoremReport};
use wordprob_core::word::Letter;
use wordprob_core::{FiniteGroup, Word};

struct Outcome {
    pass: bool,
    summary: String,
    artifact: String,
}

fn build(id: &str) -> FiniteGroup {
    id.parse::<GroupSpec>().unwrap().build().unwrap()
}

/// Nested-loop count of tuples on which `[x1, …, xk]` is trivial.
fn pr_k_oracle(g: &FiniteGroup, k: usize) -> Rational {
    let n = g.order() as u64;
    let mut hits = 0u64;
    for t in 0..n.pow(k as u32) {
        let tuple: Vec<usize> = (0..k).map(|i| (t / n.pow(i as u32) % n) as usize).collect();
        if tuple[1..].iter().fold(tuple[0], |acc, &x| g.commutator(acc, x)) == 0 {
            hits += 1;
        }
    }
    ratio(hits, n.pow(k as u32))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut cache = ResultCache::in_memory();
    let (s, _) = sweep(&catalog(16), 2, 16, SpectrumFilter::NonGammaKTrivial, &mut cache, u64::MAX).unwrap();
    let elapsed = start.elapsed();
    let order8: BTreeSet<&str> = s
        .attained_by
        .iter()
        .filter(|id| id.parse::<GroupSpec>().unwrap().order() == Some(8))
        .map(|s| s.as_str())
        .collect();
    let oracle_ok = ["D:4", "Dic:2"].iter().all(|id| pr_k_oracle(&build(id), 2) == ratio(5, 8));
    let pass = s.maximum.as_deref() == Some("5/8")
        && order8 == BTreeSet::from(["D:4", "Dic:2"])
        && s.skipped.is_empty()
        && oracle_ok
        && elapsed < Duration::from_secs(1);
    Outcome {
        pass,
        summary: format!(
            "max Pr_2 over non-abelian catalog groups of order ≤ 16 = {} attained by {} ({:.3}s)",
            s.maximum.as_deref().unwrap_or("none"),
            s.attained_by.join(", "),
            elapsed.as_secs_f64()
        ),
        artifact: serde_json::to_string(&s).unwrap(),
    }
}

fn chain_words() -> Vec<Word> {
    let mut words = Vec::new();
    for base in [1i64, -1, 2, 3] {
        let mut layer = vec![Word::power_of(1, base)];
        words.extend(layer.clone());
        for var in 2..=4u32 {
            layer = layer
                .iter()
                .flat_map(|w| [1i64, -1, 2].map(|e| Word::commutator(w, &Word::from_letters([Letter { var, exp: e }]))))
                .collect();
            words.extend(layer.clone());
        }
    }
    words
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let words = chain_words();
    let per_group: Vec<(Vec<String>, String)> = catalog(24)
        .par_iter()
        .map(|spec| {
            let g = spec.build().unwrap();
            let mut bad = Vec::new();
            let mut artifact = String::new();
            for w in &words {
                let dp = prob::exact_distribution_dp(&g, w).unwrap();
                let brute = prob::exact_distribution_bruteforce(&g, w, u64::MAX).unwrap();
                if dp != brute {
                    bad.push(format!("{spec} {w}"));
                }
                artifact.push_str(&serde_json::to_string(&dp.to_record(&spec.to_string(), &w.to_string())).unwrap());
                artifact.push('\n');
            }
            (bad, artifact)
        })
        .collect();
    let compared = per_group.len() * words.len();
    let mismatches: Vec<String> = per_group.iter().flat_map(|(b, _)| b.clone()).collect();
    let artifact: String = per_group.into_iter().map(|(_, a)| a).collect();
    let elapsed = start.elapsed();
    Outcome {
        pass: mismatches.is_empty() && elapsed < Duration::from_secs(300),
        summary: format!(
            "DP = brute force on {compared} (group, chain word) pairs, |G| ≤ 24, arity ≤ 4; {} mismatches ({:.1}s)",
            mismatches.len(),
            elapsed.as_secs_f64()
        ),
        artifact,
    }
}

fn lines(reports: &[TheoremReport]) -> String {
    reports.iter().map(|r| r.to_json_line() + "\n").collect()
}

fn tally(reports: &[TheoremReport]) -> (usize, Vec<String>) {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed() || !r.recheck())
        .map(|r| format!("{} {}: {}", r.theorem, r.inputs.group, r.failure_detail.clone().unwrap_or_default()))
        .collect();
    (reports.len(), bad)
}

fn finite_reports() -> Vec<TheoremReport> {
    let b = Budget::default();
    let mut out = Vec::new();
    for spec in catalog(128) {
        let g = spec.build().unwrap();
        for k in 1..=4 {
            out.push(theorems::verify_theorem_finite(&g, &spec.to_string(), k, &Epsilon::Auto, &b).unwrap());
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let reports = finite_reports();
    let (n, bad) = tally(&reports);
    Outcome {
        pass: bad.is_empty(),
        summary: format!(
            "G(S_⌊k/ε⌋) class < k and exponent(G/N) | L(n): {} of {n} reports pass, order ≤ 128, k = 1..4 ({:.1}s){}",
            n - bad.len(),
            start.elapsed().as_secs_f64(),
            bad.first().map(|b| format!("; first failure {b}")).unwrap_or_default()
        ),
        artifact: lines(&reports),
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let mut reports = Vec::new();
    for spec in catalog(64) {
        let g = spec.build().unwrap();
        for k in 1..=3 {
            for d in [2, 4] {
                let w = Word::lower_central(k);
                reports.push(theorems::verify_lemma1(&g, &spec.to_string(), &w, &Epsilon::Auto, &Delta::EpsOver(d), &b).unwrap());
            }
        }
    }
    let (n, bad) = tally(&reports);
    Outcome {
        pass: bad.is_empty(),
        summary: format!(
            "centraliser-index tail > ε − δ: {} of {n} pass, order ≤ 64, w1..w3, δ ∈ {{ε/2, ε/4}} ({:.1}s){}",
            n - bad.len(),
            start.elapsed().as_secs_f64(),
            bad.first().map(|b| format!("; first failure {b}")).unwrap_or_default()
        ),
        artifact: lines(&reports),
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let mut structure = Vec::new();
    let mut squares = Vec::new();
    for spec in catalog(128) {
        let g = spec.build().unwrap();
        let id = spec.to_string();
        if g.order() <= 64 {
            for k in 1..=2 {
                structure.push(theorems::verify_theorem_structure(&g, &id, k, &Epsilon::Auto, &b).unwrap());
            }
        }
        squares.push(theorems::verify_squares_inequality(&g, &id, &b).unwrap());
    }
    let (n1, bad1) = tally(&structure);
    let (n2, bad2) = tally(&squares);
    Outcome {
        pass: bad1.is_empty() && bad2.is_empty(),
        summary: format!(
            "structure (order ≤ 64, k = 1, 2, δ = ε/2 schedule): {} of {n1} pass; Pr_2 ≥ ε² (order ≤ 128): {} of {n2} pass ({:.1}s)",
            n1 - bad1.len(),
            n2 - bad2.len(),
            start.elapsed().as_secs_f64()
        ),
        artifact: lines(&structure) + &lines(&squares),
    }
}

fn criterion_6(finite: &[TheoremReport]) -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let mut reports = Vec::new();
    let mut skipped = 0;
    for spec in catalog(128) {
        let g = spec.build().unwrap();
        for k in 1..=4 {
            let id = spec.to_string();
            let base = finite.iter().find(|r| r.inputs.group == id && r.inputs.k == Some(k));
            let eligible = base.is_some_and(|r| r.passed()) && (g.order() as u64).pow(2) <= b.max_ops;
            if !eligible {
                skipped += 1;
                continue;
            }
            reports.push(theorems::certify_identity(&g, &id, k, &Epsilon::Auto, &b).unwrap());
        }
    }
    let (n, bad) = tally(&reports);
    Outcome {
        pass: bad.is_empty() && skipped == 0,
        summary: format!(
            "[x1^c, …, xk^c] ≡ 1 with c = L(⌊k/ε⌋): {} of {n} pass, {skipped} ineligible ({:.1}s)",
            n - bad.len(),
            start.elapsed().as_secs_f64()
        ),
        artifact: lines(&reports),
    }
}

fn parity_even(label: &str) -> bool {
    // cycle notation: each cycle of length m contributes m − 1 transpositions
    let transpositions: usize = label
        .split(')')
        .filter(|c| c.contains('('))
        .map(|c| c.trim_start_matches([' ', '(']).split_whitespace().count().saturating_sub(1))
        .sum();
    transpositions.is_multiple_of(2)
}

fn criterion_7() -> Outcome {
    let mut facts: Vec<(String, bool)> = Vec::new();
    let mut check = |name: &str, ok: bool| facts.push((name.to_string(), ok));

    let s3 = build("S:3");
    let q8 = build("Dic:2");
    let h3 = build("H:3");
    for (name, g, k, want) in [
        ("Pr_2(S3) = 1/2", &s3, 2, ratio(1, 2)),
        ("Pr_3(S3) = 3/4", &s3, 3, ratio(3, 4)),
        ("Pr_2(Q8) = 5/8", &q8, 2, ratio(5, 8)),
        ("Pr_3(H:3) = 1", &h3, 3, Rational::one()),
    ] {
        let oracle = pr_k_oracle(g, k);
        check(name, oracle == want && prob::pr_k(g, k) == oracle);
    }

    let s4 = build("S:4");
    let lim = LatticeLimits::default();
    let even: BTreeSet<usize> = s4.elements().filter(|&x| parity_even(&s4.label(x))).collect();
    let a4: BTreeSet<usize> = theorems::g_sn(&s4, 2, &lim).unwrap().residual.iter().collect();
    check("g_sn(S4, 2) = A4", even.len() == 12 && a4 == even);
    let v4_oracle: BTreeSet<usize> = s4.elements().filter(|&x| s4.mul(x, x) == 0 && (x == 0 || even.contains(&x))).collect();
    let v4: BTreeSet<usize> = theorems::g_sn(&s4, 3, &lim).unwrap().residual.iter().collect();
    check("g_sn(S4, 3) = V4", v4_oracle.len() == 4 && v4 == v4_oracle);

    let naive_l6 = (1u64..).find(|m| (1..=6).all(|i| m % i == 0)).unwrap();
    check("L(6) = 60", naive_l6 == 60 && theorems::l_of_n(6) == 60u32.into());

    let ut = build("UT:4,2");
    let w3_fails = pr_k_oracle(&ut, 3) < Rational::one();
    let w4_holds = Word::lower_central(4).is_identity_exhaustive(&ut, u64::MAX).unwrap();
    check("class(UT:4,2) = 3", w3_fails && w4_holds && ut.nilpotency_class() == Some(3));

    let failed: Vec<&str> = facts.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
    let artifact = json!(facts.iter().map(|(n, ok)| json!({"fact": n, "ok": ok})).collect::<Vec<_>>()).to_string();
    Outcome {
        pass: failed.is_empty(),
        summary: format!(
            "{} of {} fixed values confirmed by brute force{}",
            facts.len() - failed.len(),
            facts.len(),
            if failed.is_empty() { String::new() } else { format!("; wrong: {}", failed.join(", ")) }
        ),
        artifact,
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let g = build("S:3");
    let w = Word::lower_central(2);
    let truth = ratio(1, 2);
    let run_all = || -> Vec<prob::Estimate> {
        (0..100u64).map(|seed| prob::monte_carlo(&g, &w, 0, 100_000, 0.05, seed).unwrap()).collect()
    };
    let runs = run_all();
    let misses = runs.iter().filter(|e| !e.covers(&truth)).count();
    let one = in_pool(1, || prob::monte_carlo(&g, &w, 0, 100_000, 0.05, 7).unwrap());
    let eight = in_pool(8, || prob::monte_carlo(&g, &w, 0, 100_000, 0.05, 7).unwrap());
    let identical = serde_json::to_string(&one).unwrap() == serde_json::to_string(&eight).unwrap();
    Outcome {
        pass: misses <= 10 && identical,
        summary: format!(
            "{misses} of 100 Hoeffding intervals (n = 1e5, α = 0.05) miss 1/2; 1 vs 8 workers identical: {identical} ({:.1}s)",
            start.elapsed().as_secs_f64()
        ),
        artifact: serde_json::to_string(&runs).unwrap(),
    }
}

fn artifacts_1_to_7() -> Vec<String> {
    let finite = criterion_3();
    let finite_reports: Vec<TheoremReport> =
        finite.artifact.lines().map(|l| TheoremReport::from_json_line(l).unwrap()).collect();
    vec![
        criterion_1().artifact,
        criterion_2().artifact,
        finite.artifact,
        criterion_4().artifact,
        criterion_5().artifact,
        criterion_6(&finite_reports).artifact,
        criterion_7().artifact,
    ]
}

fn report(n: usize, o: &Outcome) {
    println!("acceptance criterion {n}: {} — {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
}

fn main() -> ExitCode {
    let mut all = true;
    let mut first: Vec<String> = Vec::new();

    let c1 = criterion_1();
    report(1, &c1);
    let c2 = criterion_2();
    report(2, &c2);
    let c3 = criterion_3();
    report(3, &c3);
    let c4 = criterion_4();
    report(4, &c4);
    let c5 = criterion_5();
    report(5, &c5);
    let finite_reports: Vec<TheoremReport> = c3.artifact.lines().map(|l| TheoremReport::from_json_line(l).unwrap()).collect();
    let c6 = criterion_6(&finite_reports);
    report(6, &c6);
    let c7 = criterion_7();
    report(7, &c7);
    let c8 = criterion_8();
    report(8, &c8);
    for c in [&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8] {
        all &= c.pass;
        first.push(c.artifact.clone());
    }
    first.truncate(7);

    let start = Instant::now();
    let second = artifacts_1_to_7();
    let one = in_pool(1, artifacts_1_to_7);
    let eight = in_pool(8, artifacts_1_to_7);
    let differing: Vec<usize> = (0..7).filter(|&i| first[i] != second[i] || first[i] != one[i] || first[i] != eight[i]).map(|i| i + 1).collect();
    let bytes: usize = first.iter().map(|a| a.len()).sum();
    let c9 = Outcome {
        pass: differing.is_empty(),
        summary: format!(
            "artifacts of criteria 1–7 ({bytes} bytes) byte-identical across a rerun and 1 vs 8 workers{} ({:.1}s)",
            if differing.is_empty() { String::new() } else { format!("; differing: {differing:?}") },
            start.elapsed().as_secs_f64()
        ),
        artifact: String::new(),
    };
    report(9, &c9);
    all &= c9.pass;

    if all {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
