//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! The process fails when a criterion's outcome differs from its expected
//! status. Criterion 5 is expected to fail: the `C(j, s)` form of the legal
//! sequence bound is exceeded by exact enumeration (see README).

use std::process::Command;
use std::time::Instant;

use kklab_core::counting::special::{count_cliques, count_cycles, count_labeled_tree, count_paths};
use kklab_core::counting::{count_copies, count_labeled};
use kklab_core::exact::{parse_value, rational, Rational, RationalRoot};
use kklab_core::expectation::{expectation_threshold, q_min, required_l};
use kklab_core::graph::catalog::{catalog_up_to, trees_on};
use kklab_core::graph::families::*;
use kklab_core::montecarlo::{estimate_pc, generate_sparse, sample_gnp, stream, Family, TrialPlan};
use kklab_core::exact::Verdict;
use kklab_core::search::{exhaustive_sweep, extremal_search, SearchConfig};
use kklab_core::verifier::fit::verify_fit_partition;
use kklab_core::verifier::legal::count_legal_sequences;
use kklab_core::verifier::{verify_packing, verify_structure};
use kklab_core::{Error, Graph, Limits};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn lim() -> Limits {
    Limits::default()
}

fn falling(n: u64, k: u64) -> u64 {
    (0..k).map(|i| n - i).product()
}

fn criterion_1() -> Outcome {
    let catalog = catalog_up_to(7);
    let mut patterns: Vec<(String, Graph)> = vec![("K3".into(), complete(3)), ("K4".into(), complete(4))];
    patterns.extend((3..=6).map(|k| (format!("C{k}"), cycle(k))));
    patterns.extend((1..=4).map(|m| (format!("P{m}"), path(m))));
    for v in 2..=5 {
        patterns.extend(trees_on(v).into_iter().enumerate().map(|(i, t)| (format!("T{v}.{i}"), t)));
    }
    let l = lim();
    let mut checks = 0u64;
    let mut graphs = 0;
    for h in catalog.iter().flatten() {
        graphs += 1;
        for (name, p) in &patterns {
            let generic = count_copies(h, p, &l).unwrap();
            let special = match name.as_bytes()[0] {
                b'K' => count_cliques(h, p.vertex_count(), &l).unwrap(),
                b'C' => count_cycles(h, p.vertex_count(), &l).unwrap(),
                b'P' => count_paths(h, p.edge_count(), &l).unwrap(),
                _ => {
                    // labeled tree DP against the labeled generic counter
                    let dp = count_labeled_tree(h, p, &l).unwrap();
                    let lab = count_labeled(h, p, &l).unwrap();
                    if dp != lab {
                        return outcome(false, format!("labeled {name} in {}: {dp} vs {lab}", h.edge_string()));
                    }
                    checks += 1;
                    generic.clone()
                }
            };
            checks += 1;
            if special != generic {
                return outcome(false, format!("{name} in {}: {special} vs {generic}", h.edge_string()));
            }
        }
    }
    outcome(true, format!("{graphs} graphs x {} patterns, {checks} exact comparisons", patterns.len()))
}

fn criterion_2() -> Outcome {
    let l = lim();
    let mut checks = 0;
    for n in 1..=9u64 {
        let kn = complete(n as usize);
        for k in 3..=n {
            let want = falling(n, k) / (2 * k);
            let got = count_cycles(&kn, k as usize, &l).unwrap();
            checks += 1;
            if got != BigUint::from(want) {
                return outcome(false, format!("C{k} in K{n}: {got} vs {want}"));
            }
        }
        for v in 1..=n {
            for t in trees_on(v as usize) {
                let want = BigUint::from(falling(n, v));
                let generic = count_labeled(&kn, &t, &l).unwrap();
                let dp = count_labeled_tree(&kn, &t, &l).unwrap();
                checks += 1;
                if generic != want || dp != want {
                    return outcome(false, format!("tree {} in K{n}: {generic}/{dp} vs {want}", t.edge_string()));
                }
            }
        }
    }
    outcome(true, format!("{checks} closed forms for n <= 9"))
}

/// A random instance from `name`, certified sparse at some `q`.
fn sparse_instance(name: &str, seed: u64) -> Option<(Graph, usize, RationalRoot)> {
    let mut rng = stream(seed, 0);
    let l = lim();
    let family = Family::random(name, &mut rng).unwrap();
    let n = rng.gen_range(10..=30);
    let q_try = RationalRoot::from_rational(rational(1, rng.gen_range(2..=12)));
    let generated = match family {
        Family::GnpRepair { .. } => generate_sparse(n, &q_try, &family, 1000, &mut rng, &l).ok()?,
        _ => {
            let g = generate_sparse(n, &RationalRoot::one(), &family, 0, &mut rng, &l).ok()?.graph;
            let floor = q_min(&g, n, &l).ok()?.q_min;
            let q = if q_try >= floor { q_try } else { floor };
            generate_sparse(n, &q, &family, 0, &mut rng, &l).ok()?
        }
    };
    (generated.graph.edge_count() > 0).then_some((generated.graph, n, generated.q))
}

fn criterion_3() -> Outcome {
    let l = lim();
    let patterns = [path(1), path(2), complete(3), cycle(4)];
    let (mut instances, mut failures, mut inconclusive, mut reports) = (0, 0, 0, 0);
    let mut per_family = [0usize; 5];
    let mut seed = 0u64;
    while instances < 1000 {
        let k = seed as usize % Family::NAMES.len();
        seed += 1;
        let Some((g, n, q)) = sparse_instance(Family::NAMES[k], seed) else {
            continue;
        };
        let mut all = verify_structure(&g, n, &q, &l).unwrap();
        all.push(verify_packing(&g, &patterns[seed as usize % patterns.len()], n, &q, &l).unwrap());
        for r in &all {
            reports += 1;
            match r.verdict {
                Verdict::Fail => {
                    failures += 1;
                    eprintln!("  criterion 3 failure: {} on {}", r.prop_id, g.edge_string());
                }
                Verdict::Inconclusive => inconclusive += 1,
                _ => {}
            }
        }
        per_family[k] += 1;
        instances += 1;
    }
    outcome(
        failures == 0,
        format!(
            "{instances} instances {per_family:?} over {:?}, {reports} reports, {failures} failures, {inconclusive} inconclusive",
            Family::NAMES
        ),
    )
}

fn criterion_4() -> Outcome {
    let l = lim();
    let trees: Vec<Graph> = (2..=6).flat_map(trees_on).filter(|t| t.max_degree() <= 3).collect();
    let eps_choices = [rational(1, 4), rational(1, 3), rational(1, 2), rational(2, 3), rational(3, 4), rational(1, 1)];
    let (mut done, mut skipped, mut classes) = (0, 0, 0);
    let mut seed = 0u64;
    while done < 200 {
        seed += 1;
        let mut rng = stream(4, seed);
        let f = trees.choose(&mut rng).unwrap().clone();
        let delta = f.max_degree() as i64;
        let eps = eps_choices.choose(&mut rng).unwrap().clone();
        let d = Rational::from_integer(rng.gen_range(2..=8).into());
        if &eps * &d * &d <= Rational::from_integer((delta * delta).into()) {
            continue;
        }
        let v = rng.gen_range(f.vertex_count().max(5)..=12);
        let p = parse_value(["1/4", "1/3", "1/2", "2/3"].choose(&mut rng).unwrap()).unwrap();
        let h = sample_gnp(v, &p, &mut rng).unwrap();
        let res = verify_fit_partition(&h, &f, &eps, &d, &l);
        let part = match res {
            Ok(part) => part,
            Err(Error::ResourceGuard(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return outcome(false, format!("instance {seed}: {e}")),
        };
        // independent labeled count
        let oracle = count_labeled(&h, &f, &l).unwrap();
        if part.labeled_copies != oracle || part.class_total != oracle || part.verdict != Verdict::Pass || !part.unique {
            return outcome(
                false,
                format!("instance {seed}: labeled {} oracle {oracle} classes {}", part.labeled_copies, part.class_total),
            );
        }
        classes += part.classes.len();
        done += 1;
    }
    outcome(true, format!("{done} instances, {classes} fit classes, {skipped} skipped by the copy cap"))
}

fn criterion_5() -> Outcome {
    let (one, four) = (rational(1, 1), rational(4, 1));
    for (big_sum, want) in [(0usize, 1u32), (4, 3), (9, 9)] {
        let r = count_legal_sequences(&[1, 1, 0], &one, &four, big_sum, 9).unwrap();
        if r.threshold != 4 || r.count != BigUint::from(want) {
            return outcome(false, format!("hand value D = {big_sum}: got {} want {want}", r.count));
        }
    }
    let mut rng = stream(5, 0);
    let (mut cases, mut over_j, mut over) = (0, 0, 0);
    let mut example = String::new();
    for _ in 0..2000 {
        let t = rng.gen_range(1..=5u64);
        let len = rng.gen_range(1..=5);
        let f: Vec<usize> = (0..len).map(|_| rng.gen_range(0..t as usize)).collect();
        let big_sum = rng.gen_range(0..=20);
        let d_cap = rng.gen_range(big_sum.max(t as usize)..=24);
        // eps = 1, d = t gives threshold t
        let r = count_legal_sequences(&f, &one, &Rational::from_integer(t.into()), big_sum, d_cap).unwrap();
        cases += 1;
        if r.count > r.bound {
            over += 1;
        }
        if r.count > r.bound_j {
            if over_j == 0 {
                example = format!("f = {f:?}, t = {t}, D = {big_sum}: {} > {}", r.count, r.bound_j);
            }
            over_j += 1;
        }
    }
    let detail = format!(
        "hand values 1/3/9 ok; C(j,s) bound exceeded in {over_j}/{cases} sweep cases (first: {example}); C(j+1,s) bound exceeded in {over}"
    );
    if over > 0 {
        return outcome(false, format!("{detail}; the corrected bound also fails"));
    }
    outcome(over_j == 0, detail)
}

fn criterion_6() -> Outcome {
    let l = lim();
    let mut corpus: Vec<Graph> = catalog_up_to(5).into_iter().flatten().filter(|g| g.edge_count() > 0).collect();
    corpus.extend([
        petersen(),
        bowtie(),
        complete_bipartite(2, 3),
        cycle(6),
        star(4),
        path(5),
        theta(&[2, 2, 2]),
        path_power(5, 2),
    ]);
    let mut checks = 0;
    for g in &corpus {
        for n in [g.vertex_count().max(3), 10, 20] {
            let pe = expectation_threshold(g, n, &l).unwrap().q_min;
            let qm = q_min(g, n, &l).unwrap().q_min;
            checks += 1;
            if pe > qm {
                return outcome(false, format!("{} at n = {n}: p_E {pe} > q_min {qm}", g.edge_string()));
            }
        }
    }

    let start = Instant::now();
    let edge = estimate_pc(&TrialPlan::new(3, path(1), 6), &l).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let truth = 1.0 - 2f64.powf(-1.0 / 3.0);
    let (lo, hi) = (to_f64(&edge.interval.0), to_f64(&edge.interval.1));
    let edge_ok = lo <= truth && truth <= hi && secs <= 30.0;

    let mut parts = vec![format!(
        "p_E <= q_min on {checks} (graph, n) pairs; edge at n = 3: p_c in [{lo:.5}, {hi:.5}] (truth {truth:.5}) in {secs:.1}s"
    )];
    let mut ok = edge_ok;
    for (name, h) in [("K3", complete(3)), ("C4", cycle(4)), ("P3", path(3))] {
        let pe = expectation_threshold(&h, 20, &l).unwrap().q_min;
        let est = estimate_pc(&TrialPlan::new(20, h, 6), &l).unwrap();
        let hi = RationalRoot::from_rational(est.interval.1.clone());
        ok &= pe <= hi;
        parts.push(format!("{name}: p_E {:.5} <= hi {:.5}", pe.to_f64(), to_f64(&est.interval.1)));
    }
    outcome(ok, parts.join("; "))
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

fn criterion_7() -> Outcome {
    let l = lim();
    let n = 10;
    let mut parts = Vec::new();
    let mut ok = true;
    // (pattern, frozen maximizer copies, frozen score); the score is the
    // maximizer's own value of (N / E_q X_F)^(1/e_F)
    let frozen = [("K3", complete(3), 1u32), ("C4", cycle(4), 1), ("P3", path(3), 1)];
    for (name, f, copies) in frozen {
        let q = q_min(&f, n, &l).unwrap().q_min;
        let sweep = exhaustive_sweep(n, &q, &f, 6, &l).unwrap();
        let Some(best) = sweep.maximizer else {
            return outcome(false, format!("{name}: sweep found no sparse host"));
        };
        let mut cfg = SearchConfig::new(n, q.clone(), f.clone(), 100_000, 7);
        cfg.host_cap = 6;
        let found = extremal_search(&cfg, &l).unwrap();
        let top = &found.leaderboard[0];
        let this = best.copies == BigUint::from(copies)
            && best.score == RationalRoot::one()
            && top.copies == best.copies
            && top.score == best.score;
        ok &= this;
        parts.push(format!(
            "{name}: sweep {} (N = {}, score {}), annealer {} (N = {}, score {})",
            best.graph6, best.copies, best.score_enclosure, top.graph6, top.copies, top.score_enclosure
        ));
    }
    let k3 = complete(3);
    let q = q_min(&k3, n, &l).unwrap().q_min;
    let r = required_l(&k3, &k3, n, &q, &l).unwrap();
    ok &= r.value == RationalRoot::one();
    parts.push(format!("required_L(K3, K3, 10, q_min) = {}", r.value));
    outcome(ok, parts.join("; "))
}

fn kklab(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_kklab")).args(args).output().expect("run kklab");
    (out.status.code(), out.stdout)
}

fn criterion_8() -> Outcome {
    let commands: Vec<Vec<&str>> = vec![
        vec!["pc", "--pattern", "P1", "--n", "3", "--trials", "400", "--seed", "3"],
        vec!["pc", "--pattern", "K3", "--n", "12", "--trials", "200", "--seed", "4", "--format", "csv"],
        vec!["gen", "--family", "gnp-repair", "--params", "6,3", "--n", "12", "--q", "1/4", "--seed", "5"],
        vec!["gen", "--family", "theta", "--n", "20", "--q", "1/2", "--seed", "6"],
        vec!["gen", "--family", "spider", "--n", "20", "--q", "1/3", "--seed", "8"],
        vec!["search", "--pattern", "K3", "--n", "10", "--q", "root:120:3", "--host-cap", "6", "--budget", "5000", "--seed", "9", "--chains", "4"],
        vec!["search", "--pattern", "C4", "--n", "12", "--q", "1/4", "--host-cap", "6", "--budget", "3000", "--seed", "10", "--trace", "--format", "csv"],
        vec!["sweep", "--pattern", "C4", "--n", "10", "--q", "root:630:4", "--v-cap", "5"],
        vec!["qmin", "--graph", "g6:C~", "--n", "10", "--table"],
    ];
    let mut differing = Vec::new();
    for cmd in &commands {
        let mut runs = [1, 4].iter().map(|t| {
            let threads = t.to_string();
            let mut args: Vec<&str> = vec!["--threads", &threads];
            args.extend(cmd.iter().copied());
            kklab(&args)
        });
        let (a, b) = (runs.next().unwrap(), runs.next().unwrap());
        if a != b || a.1.is_empty() {
            differing.push(cmd.join(" "));
        }
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} commands byte-identical across --threads 1 and 4", commands.len())
        } else {
            format!("differing output: {}", differing.join(" | "))
        },
    )
}

fn main() {
    // (criterion, run, expected to pass)
    let criteria: [(u32, fn() -> Outcome, bool); 8] = [
        (1, criterion_1, true),
        (2, criterion_2, true),
        (3, criterion_3, true),
        (4, criterion_4, true),
        (5, criterion_5, false),
        (6, criterion_6, true),
        (7, criterion_7, true),
        (8, criterion_8, true),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for (k, run, expected) in criteria {
        if !filter.is_empty() && !filter.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let status = match (o.pass, expected) {
            (true, _) => "PASS",
            (false, false) => "FAIL (documented deviation)",
            (false, true) => "FAIL",
        };
        if o.pass != expected {
            unexpected += 1;
        }
        println!("criterion {k}: {status} [{:.1}s] {}", start.elapsed().as_secs_f64(), o.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} criteria differ from their expected status");
        std::process::exit(1);
    }
}
