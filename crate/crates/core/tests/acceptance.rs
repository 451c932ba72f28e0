//! The nine acceptance criteria. Each prints one PASS/FAIL line; run with
//! `--nocapture` to see them.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use buchi_core::bench::{run_exact, DiffRanges};
use buchi_core::gen::{gen_nonacc_scc_chain, gen_trivial_accepting, random_gba, weak_random, GenConfig};
use buchi_core::invariants::debug_check;
use buchi_core::ndfs::bitstate::{bitstate_check, ApproxVerdict, BitstateAlgo};
use buchi_core::trace::NoTrace;
use buchi_core::{
    degeneralize, explicit_provider, gv_check, oracle_emptiness, run_differential, sd_check, validate_lasso,
    Algorithm, ExplicitGba, Metrics, Verdict,
};
use common::{exhaustive_nonempty, graph, injective_bits};
use rayon::prelude::*;

const DIFF_SEED: u64 = 2024;
const DIFF_COUNT: usize = 10_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn metrics(g: &ExplicitGba, algo: Algorithm) -> (bool, Metrics) {
    let o = run_exact(&mut explicit_provider(g), algo, &mut NoTrace).expect("check runs");
    (o.verdict.is_empty(), o.metrics)
}

/// The instances of criterion 1, regenerated from their configurations.
fn differential_instances() -> Vec<(GenConfig, ExplicitGba)> {
    let ranges = DiffRanges::default();
    (0..DIFF_COUNT as u64)
        .into_par_iter()
        .map(|i| {
            let c = ranges.sample(DIFF_SEED, i);
            let g = random_gba(&c).unwrap();
            (c, g)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let s = run_differential(DIFF_COUNT, &DiffRanges::default(), DIFF_SEED);
    ensure(s.passed(), || format!("{} disagreements, first: {:?}", s.disagreements.len(), s.disagreements.first()))?;
    ensure(s.instances == DIFF_COUNT, || format!("{} instances", s.instances))?;
    Ok(format!("{} instances, {} non-empty, {} checks, 0 disagreements", s.instances, s.nonempty, s.checks))
}

fn criterion_2() -> Outcome {
    let bad: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let c = GenConfig { n: 1 + (seed % 60) as usize, avg_out_degree: 0.5 + (seed % 6) as f64 * 0.5, k: 1, acc_density: 0.3, seed };
            let g = weak_random(&c).unwrap();
            let o = sd_check(&mut explicit_provider(&g), true).unwrap();
            let truth = oracle_emptiness(&g).is_empty();
            if o.verdict.is_empty() != truth {
                return Some(format!("seed {seed}: verdict"));
            }
            if !truth && !validate_lasso(&mut explicit_provider(&g), &o.verdict) {
                return Some(format!("seed {seed}: lasso"));
            }
            if truth && o.metrics.post_calls as usize != g.reachable().len() {
                return Some(format!("seed {seed}: {} post calls, {} reachable", o.metrics.post_calls, g.reachable().len()));
            }
            None
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} failures, first: {}", bad.len(), bad[0]))?;
    Ok("1000 weak instances, verdicts match, post calls equal reachable states on empty ones".into())
}

fn criterion_3(instances: &[(GenConfig, ExplicitGba)]) -> Outcome {
    let rows: Vec<Option<String>> = instances
        .par_iter()
        .filter(|(c, g)| c.k == 1 && !oracle_emptiness(g).is_empty())
        .map(|(c, g)| {
            let (_, gv) = metrics(g, Algorithm::Gv);
            let (_, ascc) = metrics(g, Algorithm::Ascc);
            (gv.transitions_explored != ascc.transitions_explored).then(|| {
                format!("seed {}: gv {} vs ascc {}", c.seed, gv.transitions_explored, ascc.transitions_explored)
            })
        })
        .collect();
    let bad: Vec<&String> = rows.iter().flatten().collect();
    ensure(bad.is_empty(), || format!("{} mismatches, first: {}", bad.len(), bad[0]))?;
    Ok(format!("{} non-empty k=1 instances, identical transitions at report", rows.len()))
}

fn criterion_4(instances: &[(GenConfig, ExplicitGba)]) -> Outcome {
    let rows: Vec<Option<String>> = instances
        .par_iter()
        .filter(|(_, g)| oracle_emptiness(g).is_empty())
        .map(|(c, g)| {
            let reach = g.reachable().len() as u64;
            let (_, ascc) = metrics(g, Algorithm::Ascc);
            if ascc.post_calls != reach {
                return Some(format!("seed {}: ascc {} post calls, {reach} reachable", c.seed, ascc.post_calls));
            }
            if c.k != 1 {
                return None;
            }
            let (_, gv) = metrics(g, Algorithm::Gv);
            let (_, and) = metrics(g, Algorithm::And);
            let (_, base) = metrics(g, Algorithm::Baseline);
            let ok = gv.post_calls == reach && and.post_calls <= base.post_calls && base.post_calls <= 2 * reach;
            (!ok).then(|| {
                format!(
                    "seed {}: gv {}, and {}, baseline {}, reachable {reach}",
                    c.seed, gv.post_calls, and.post_calls, base.post_calls
                )
            })
        })
        .collect();
    let bad: Vec<&String> = rows.iter().flatten().collect();
    ensure(bad.is_empty(), || format!("{} violations, first: {}", bad.len(), bad[0]))?;

    let mut chains = 0;
    for seed in 0..100u64 {
        let g = gen_nonacc_scc_chain(1 + (seed % 8) as usize, 2 + (seed % 9) as usize, seed).unwrap();
        let (_, ascc) = metrics(&g, Algorithm::Ascc);
        let (_, c99) = metrics(&g, Algorithm::C99);
        ensure(c99.post_calls > ascc.post_calls, || {
            format!("chain seed {seed}: c99 {} vs ascc {}", c99.post_calls, ascc.post_calls)
        })?;
        chains += 1;
    }
    Ok(format!("{} empty instances within bounds, c99 behind ascc on {chains} SCC chains", rows.len()))
}

/// States 0..9 accepting in a chain, then a non-accepting sink 10 with a
/// self-loop. Traced by hand: blue searches generate 11 successors; AND
/// adds one red search from 9 (2 successors) and marks 8..0 red through
/// the all-red rule; the baseline starts a red search at every accepting
/// state (2 + 9·1); C99's removal pass re-expands all 11 states.
fn hand_traced_instance() -> ExplicitGba {
    let mut edges: Vec<(usize, usize)> = (0..10).map(|s| (s, s + 1)).collect();
    edges.push((10, 10));
    let acc: Vec<(usize, usize)> = (0..10).map(|s| (s, 1)).collect();
    graph(11, 1, &edges, &acc)
}

fn criterion_5() -> Outcome {
    let g = hand_traced_instance();
    let expected = [
        (Algorithm::Gv, 11),
        (Algorithm::Sd, 11),
        (Algorithm::And, 13),
        (Algorithm::Baseline, 22),
        (Algorithm::C99, 22),
    ];
    for (algo, want) in expected {
        let (empty, m) = metrics(&g, algo);
        ensure(empty, || format!("{algo} found a counterexample"))?;
        ensure(m.successors_generated == want, || {
            format!("{algo}: {} successors, hand trace says {want}", m.successors_generated)
        })?;
    }
    let ratio = 22.0 / 13.0;
    ensure(ratio >= 1.5, || format!("ratio {ratio}"))?;

    let mut rows = 0;
    let mut sums = [0u64; 5];
    for size in [10usize, 20, 50, 100] {
        for seed in 0..25u64 {
            let g = gen_trivial_accepting(size, seed, false).unwrap();
            let got: Vec<u64> = expected.iter().map(|(a, _)| metrics(&g, *a).1.successors_generated).collect();
            let slow = got[3].min(got[4]);
            ensure(got[..3].iter().all(|&x| x < slow), || format!("size {size} seed {seed}: {got:?}"))?;
            for (s, x) in sums.iter_mut().zip(&got) {
                *s += x;
            }
            rows += 1;
        }
    }
    Ok(format!(
        "hand trace 11/11/13/22/22 (ratio {ratio:.2}); {rows} suite instances, totals gv {} sd {} and {} baseline {} c99 {}",
        sums[0], sums[1], sums[2], sums[3], sums[4]
    ))
}

/// An m-cycle whose entry state carries both conditions. The GBA check
/// closes the cycle after m states; the counter construction has to go
/// round twice, through copies 1 and 2, before it returns to (s0, 1).
fn criterion_6() -> Outcome {
    let m = 25;
    let edges: Vec<(usize, usize)> = (0..m).map(|s| (s, (s + 1) % m)).collect();
    let g = graph(m, 2, &edges, &[(0, 1), (0, 2)]);
    let o = run_exact(&mut explicit_provider(&g), Algorithm::Ascc, &mut NoTrace).unwrap();
    ensure(validate_lasso(&mut explicit_provider(&g), &o.verdict), || "invalid ascc lasso".into())?;
    let d = degeneralize(&g);
    let v = gv_check(&mut explicit_provider(&d)).unwrap();
    ensure(validate_lasso(&mut explicit_provider(&d), &v.verdict), || "invalid gv lasso".into())?;
    let (a, b) = (o.metrics.distinct_states, v.metrics.distinct_states);
    ensure(a == m as u64 && b == 2 * m as u64, || format!("ascc {a}, gv {b}, expected {m} and {}", 2 * m))?;
    Ok(format!("ascc on the GBA: {a} states, gv on the degeneralized BA: {b} states"))
}

fn criterion_7() -> Outcome {
    let ranges = DiffRanges { n: 1..=30, ..DiffRanges::default() };
    let bad: Vec<String> = (0..500u64)
        .into_par_iter()
        .flat_map_iter(|i| {
            let c = ranges.sample(77, i);
            let g = random_gba(&c).unwrap();
            let weak = weak_random(&GenConfig { k: 1, ..c.clone() }).unwrap();
            let mut runs: Vec<(&ExplicitGba, Algorithm)> = vec![(&g, Algorithm::Ascc), (&g, Algorithm::C99), (&weak, Algorithm::Sd)];
            if c.k == 1 {
                runs.extend([(&g, Algorithm::And), (&g, Algorithm::Gv), (&g, Algorithm::Sd)]);
            }
            runs.into_iter()
                .filter_map(|(h, algo)| debug_check(h, algo).err().map(|e| format!("instance {i}, {algo}: {e}")))
                .collect::<Vec<_>>()
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} violations, first: {}", bad.len(), bad[0]))?;
    Ok("500 instances, no invariant violations".into())
}

fn criterion_8(instances: &[(GenConfig, ExplicitGba)]) -> Outcome {
    let prone: Vec<(bool, bool, bool)> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let c = GenConfig { n: 4000, avg_out_degree: 2.0, k: 1, acc_density: 0.0005, seed };
            let g = random_gba(&c).unwrap();
            let valid = |v: &ApproxVerdict| match v {
                ApproxVerdict::Counterexample(l) => validate_lasso(&mut explicit_provider(&g), &Verdict::Counterexample(l.clone())),
                ApproxVerdict::ProbablyEmpty => true,
            };
            let one = bitstate_check(&mut explicit_provider(&g), BitstateAlgo::And, 10, 1, seed).unwrap();
            let three = bitstate_check(&mut explicit_provider(&g), BitstateAlgo::And, 10, 3, seed).unwrap();
            (
                valid(&one.verdict) && valid(&three.verdict),
                one.verdict.is_counterexample(),
                three.verdict.is_counterexample(),
            )
        })
        .collect();
    ensure(prone.iter().all(|r| r.0), || "a bitstate counterexample failed validation".into())?;
    let once = prone.iter().filter(|r| r.1).count();
    let thrice = prone.iter().filter(|r| r.2).count();
    ensure(thrice >= once, || format!("detections: runs=3 {thrice} < runs=1 {once}"))?;

    let rows: Vec<Option<String>> = instances
        .par_iter()
        .filter(|(c, g)| c.k == 1 && !oracle_emptiness(g).is_empty())
        .map(|(c, g)| {
            let exact = run_exact(&mut explicit_provider(g), Algorithm::And, &mut NoTrace).unwrap().verdict;
            let bits = injective_bits(g, c.seed);
            let approx = bitstate_check(&mut explicit_provider(g), BitstateAlgo::And, bits, 1, c.seed).unwrap().verdict;
            let same = matches!(&approx, ApproxVerdict::Counterexample(l) if Verdict::Counterexample(l.clone()) == exact);
            (!same).then(|| format!("seed {}", c.seed))
        })
        .collect();
    let bad: Vec<&String> = rows.iter().flatten().collect();
    ensure(bad.is_empty(), || format!("{} injective mismatches, first: {}", bad.len(), bad[0]))?;
    Ok(format!(
        "100 collision-prone runs valid, detections runs=1 {once} / runs=3 {thrice}; {} injective runs equal exact AND",
        rows.len()
    ))
}

fn criterion_9() -> Outcome {
    let ranges = DiffRanges { n: 1..=8, ..DiffRanges::default() };
    let bad: Vec<u64> = (0..2000u64)
        .into_par_iter()
        .filter(|&i| {
            let g = random_gba(&ranges.sample(9, i)).unwrap();
            oracle_emptiness(&g).is_empty() == exhaustive_nonempty(&g)
        })
        .collect();
    ensure(bad.is_empty(), || format!("{} disagreements, first index {}", bad.len(), bad[0]))?;
    Ok("2000 instances, oracle equals exhaustive cycle enumeration".into())
}

fn run(results: &mut Vec<bool>, n: usize, name: &str, f: impl FnOnce() -> Outcome) {
    let outcome = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    };
    match &outcome {
        Ok(msg) => println!("criterion {n} ({name}): PASS: {msg}"),
        Err(msg) => println!("criterion {n} ({name}): FAIL: {msg}"),
    }
    results.push(outcome.is_ok());
}

#[test]
fn acceptance_criteria() {
    let instances = differential_instances();
    let mut results = Vec::new();
    run(&mut results, 1, "differential correctness", criterion_1);
    run(&mut results, 2, "weak-case correctness", criterion_2);
    run(&mut results, 3, "early-detection equality", || criterion_3(&instances));
    run(&mut results, 4, "post-call bounds", || criterion_4(&instances));
    run(&mut results, 5, "trivial accepting SCC ordering", criterion_5);
    run(&mut results, 6, "generalized acceptance advantage", criterion_6);
    run(&mut results, 7, "invariant suites", criterion_7);
    run(&mut results, 8, "bitstate contract", || criterion_8(&instances));
    run(&mut results, 9, "oracle self-check", criterion_9);
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
