use std::io::Read;

use kklab_core::counting::{count_pattern, gamma, packing_number, Pattern, PackingMode};
use kklab_core::exact::{parse_rational, parse_value, Rational, RationalRoot};
use kklab_core::expectation::{
    expectation_threshold, expected_copies, is_q_sparse, peel_threshold_a, q_min, required_l, sparsity_threshold,
    sparsity_threshold_heuristic, SparsityReport, Target,
};
use kklab_core::graph::aut::automorphism_count;
use kklab_core::graph::canon::canonical_graph6;
use kklab_core::graph::density::{density, max_density};
use kklab_core::graph::families;
use kklab_core::graph::io::{parse_graph, parse_graph6, to_graph6};
use kklab_core::montecarlo::{estimate_pc, generate_sparse, stream, Family, TrialPlan};
use kklab_core::search::{exhaustive_sweep, extremal_search, leaderboard_csv, SearchConfig};
use kklab_core::verifier::{
    count_legal_sequences, ell_hat, fit_decompose, peel_min_degree, verify_fit_partition, verify_main_inequality,
    verify_packing, verify_structure,
};
use kklab_core::{Error, Graph, Limits};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, FamilyName, Verify};
use crate::CliError;

/// A finished report: JSON body plus an optional native CSV rendering.
pub struct Report {
    pub command: &'static str,
    pub body: Value,
    pub csv: Option<String>,
}

fn report(command: &'static str, body: impl Serialize) -> Result<Report, CliError> {
    Ok(Report {
        command,
        body: serde_json::to_value(body).map_err(|e| CliError::Usage(e.to_string()))?,
        csv: None,
    })
}

pub fn read_graph(spec: &str) -> Result<Graph, CliError> {
    if let Some(g6) = spec.strip_prefix("g6:") {
        return Ok(parse_graph6(g6)?);
    }
    let text = if spec == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError::Io(format!("{spec}: {e}")))?
    };
    Ok(parse_graph(&text)?)
}

/// Pattern names: `K3`, `C4`, `P3`, `S3`, `clique:3`, ..., `g6:...` or a file.
pub fn read_pattern(spec: &str) -> Result<Graph, CliError> {
    let named = |kind: &str, k: usize| -> Option<Graph> {
        match kind {
            "K" | "clique" if k >= 1 => Some(families::complete(k)),
            "C" | "cycle" if k >= 3 => Some(families::cycle(k)),
            "P" | "path" if k >= 1 => Some(families::path(k)),
            "S" | "star" if k >= 1 => Some(families::star(k)),
            _ => None,
        }
    };
    let split = spec
        .split_once(':')
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .or_else(|| {
            let mut chars = spec.chars();
            let first = chars.next()?;
            let rest: String = chars.collect();
            (!rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())).then(|| (first.to_string(), rest))
        });
    if let Some((kind, k)) = split {
        if let Ok(k) = k.parse::<usize>() {
            if let Some(g) = named(&kind, k) {
                return Ok(g);
            }
            if ["K", "C", "P", "S", "clique", "cycle", "path", "star"].contains(&kind.as_str()) {
                return Err(CliError::Usage(format!("pattern size out of range in {spec:?}")));
            }
        }
    }
    read_graph(spec)
}

fn value(text: &str) -> Result<RationalRoot, CliError> {
    Ok(parse_value(text)?)
}

fn rational(text: &str) -> Result<Rational, CliError> {
    Ok(parse_rational(text)?)
}

fn list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("expected comma-separated integers, got {text:?}")))
        })
        .collect()
}

fn sparsity(r: SparsityReport, precision: u32) -> Value {
    let enc = r.q_min.enclosure(precision);
    let mut v = serde_json::to_value(&r).expect("serializable");
    v["q_min_enclosure"] = json!(enc);
    if r.table.is_empty() {
        v.as_object_mut().expect("object").remove("table");
    }
    v
}

pub fn run(command: &Command, precision: u32, limits: &Limits) -> Result<Report, CliError> {
    match command {
        Command::Count {
            host,
            family,
            param,
            pattern,
            labeled,
            generic,
        } => {
            let g = read_graph(&host.graph)?;
            let need = || param.ok_or_else(|| CliError::Usage("--family needs --param".into()));
            let pat = match (family, pattern) {
                (Some(FamilyName::Clique), None) => Pattern::Clique(need()?),
                (Some(FamilyName::Cycle), None) => Pattern::Cycle(need()?),
                (Some(FamilyName::Path), None) => Pattern::Path(need()?),
                (Some(FamilyName::Graph) | None, Some(p)) => Pattern::Graph(read_pattern(p)?),
                _ => return Err(CliError::Usage("give --family with --param, or --pattern".into())),
            };
            report("count", count_pattern(&g, &pat, *labeled, *generic, limits)?)
        }
        Command::Gamma { host, len } => {
            let g = read_graph(&host.graph)?;
            report("gamma", gamma(&g, *len, limits)?)
        }
        Command::Pack { host, pattern, greedy } => {
            let g = read_graph(&host.graph)?;
            let j = read_pattern(&pattern.pattern)?;
            let mode = if *greedy { PackingMode::Greedy } else { PackingMode::Exact };
            report("pack", packing_number(&g, &j, mode, limits)?)
        }
        Command::Density { host } => {
            let g = read_graph(&host.graph)?;
            let m = max_density(&g)?;
            report(
                "density",
                json!({
                    "density": kklab_core::exact::format_rational(&density(&g)?),
                    "max_density": kklab_core::exact::format_rational(&m.value()),
                    "witness": m.witness,
                }),
            )
        }
        Command::Aut { host } => {
            let g = read_graph(&host.graph)?;
            report(
                "aut",
                json!({
                    "aut": automorphism_count(&g).to_string(),
                    "canonical": canonical_graph6(&g),
                }),
            )
        }
        Command::Qmin { host, n, table, heuristic } | Command::Pe { host, n, table, heuristic } => {
            let g = read_graph(&host.graph)?;
            let (name, target) = match command {
                Command::Qmin { .. } => ("qmin", Target::One),
                _ => ("pe", Target::Half),
            };
            let r = if *heuristic {
                sparsity_threshold_heuristic(&g, *n, target, limits)?
            } else if *table {
                sparsity_threshold(&g, *n, target, true, limits)?
            } else if target == Target::One {
                q_min(&g, *n, limits)?
            } else {
                expectation_threshold(&g, *n, limits)?
            };
            report(name, sparsity(r, precision))
        }
        Command::SparseCheck { host, n, q } => {
            let g = read_graph(&host.graph)?;
            let q = value(q)?;
            let check = is_q_sparse(&g, *n, &q, limits)?;
            report(
                "sparse-check",
                json!({
                    "sparse": check.sparse,
                    "q": q,
                    "n": n,
                    "violation": check.violation.map(|v| json!({
                        "edges": v.edges,
                        "expectation": v.expectation,
                        "expectation_enclosure": v.expectation.enclosure(precision),
                    })),
                }),
            )
        }
        Command::Expect { pattern, n, p } => {
            let j = read_pattern(&pattern.pattern)?;
            let p = value(p)?;
            let e = expected_copies(*n, &p, &j)?;
            report(
                "expect",
                json!({
                    "pattern": to_graph6(&j),
                    "n": n,
                    "p": p,
                    "expectation": e,
                    "enclosure": e.enclosure(precision),
                }),
            )
        }
        Command::RequiredL { host, pattern, n, q } => {
            let g = read_graph(&host.graph)?;
            let f = read_pattern(&pattern.pattern)?;
            let r = required_l(&g, &f, *n, &value(q)?, limits)?;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["enclosure"] = json!(r.value.enclosure(precision));
            report("required-l", v)
        }
        Command::Verify(v) => verify(v, precision, limits),
        Command::Peel { host, pattern, a, n, p } => {
            let g = read_graph(&host.graph)?;
            let f = read_pattern(&pattern.pattern)?;
            let a = match (a, n, p) {
                (Some(a), None, None) => value(a)?,
                (None, Some(n), Some(p)) => peel_threshold_a(&f, *n, &value(p)?)?,
                _ => return Err(CliError::Usage("give --a, or --n with --p".into())),
            };
            let r = peel_min_degree(&g, &f, &a, limits)?;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["a"] = json!(a);
            report("peel", v)
        }
        Command::Ellhat { n, q, delta } => report("ellhat", ell_hat(*n, &value(q)?, &rational(delta)?)?),
        Command::Pc {
            pattern,
            n,
            trials,
            tolerance,
            confidence,
            seed,
        } => {
            let plan = TrialPlan {
                trials: *trials,
                tolerance: *tolerance,
                confidence: *confidence,
                ..TrialPlan::new(*n, read_pattern(&pattern.pattern)?, *seed)
            };
            let r = estimate_pc(&plan, limits)?;
            let mut rep = report("pc", &r)?;
            rep.csv = Some(r.trace_csv());
            Ok(rep)
        }
        Command::Gen {
            family,
            params,
            n,
            q,
            seed,
            repair_budget,
        } => {
            let mut rng = stream(*seed, 0);
            let fam = match params {
                Some(p) => Family::from_params(family, &list(p)?)?,
                None => Family::random(family, &mut rng)?,
            };
            let g = generate_sparse(*n, &value(q)?, &fam, *repair_budget, &mut rng, limits)?;
            let mut v = serde_json::to_value(&g).expect("serializable");
            v["edges"] = json!(g.graph.edges());
            report("gen", v)
        }
        Command::Search {
            pattern,
            n,
            q,
            budget,
            seed,
            host_cap,
            chains,
            top_k,
            trace,
        } => {
            let cfg = SearchConfig {
                host_cap: *host_cap,
                chains: *chains,
                top_k: *top_k,
                trace: *trace,
                ..SearchConfig::new(*n, value(q)?, read_pattern(&pattern.pattern)?, *budget, *seed)
            };
            let r = extremal_search(&cfg, limits)?;
            let mut rep = report("search", &r)?;
            rep.csv = Some(leaderboard_csv(&r.leaderboard));
            Ok(rep)
        }
        Command::Sweep { pattern, n, q, v_cap } => {
            let r = exhaustive_sweep(*n, &value(q)?, &read_pattern(&pattern.pattern)?, *v_cap, limits)?;
            let mut rep = report("sweep", &r)?;
            rep.csv = Some(leaderboard_csv(r.maximizer.as_slice()));
            Ok(rep)
        }
    }
}

fn verify(v: &Verify, precision: u32, limits: &Limits) -> Result<Report, CliError> {
    match v {
        Verify::Props { host, n, q, pattern } => {
            let g = read_graph(&host.graph)?;
            let q = value(q)?;
            let mut reports = verify_structure(&g, *n, &q, limits)?;
            if let Some(p) = pattern {
                reports.push(verify_packing(&g, &read_pattern(p)?, *n, &q, limits)?);
            }
            let all_pass = reports.iter().all(|r| !r.verdict.is_failure());
            report("verify props", json!({ "reports": reports, "all_pass": all_pass }))
        }
        Verify::Fit {
            host,
            pattern,
            eps,
            d,
            copy,
        } => {
            let g = read_graph(&host.graph)?;
            let f = read_pattern(&pattern.pattern)?;
            let (eps, d) = (rational(eps)?, rational(d)?);
            match copy {
                Some(c) => report("verify fit", fit_decompose(&g, &f, &list(c)?, &eps, &d)?),
                None => report("verify fit", verify_fit_partition(&g, &f, &eps, &d, limits)?),
            }
        }
        Verify::Legal {
            f,
            eps,
            d,
            big_sum,
            d_cap,
            graph,
        } => {
            let cap = match (d_cap, graph) {
                (Some(c), _) => *c,
                (None, Some(g)) => read_graph(g)?.max_degree(),
                (None, None) => return Err(CliError::Usage("give --d-cap or --graph".into())),
            };
            report(
                "verify legal",
                count_legal_sequences(&list(f)?, &rational(eps)?, &rational(d)?, *big_sum, cap)?,
            )
        }
        Verify::Main {
            host,
            pattern,
            n,
            q,
            l,
            p,
        } => {
            let g = read_graph(&host.graph)?;
            let f = read_pattern(&pattern.pattern)?;
            let q = value(q)?;
            let l = match (l, p) {
                (Some(l), None) => value(l)?,
                (None, Some(p)) => {
                    if q.is_zero() {
                        return Err(CliError::Core(Error::invalid("q must be positive")));
                    }
                    value(p)?.div(&q)
                }
                _ => return Err(CliError::Usage("give exactly one of --l or --p".into())),
            };
            let (rep, req) = verify_main_inequality(&g, &f, *n, &q, &l, limits)?;
            report(
                "verify main",
                json!({
                    "report": rep,
                    "required_l": req,
                    "required_l_enclosure": req.value.enclosure(precision),
                }),
            )
        }
    }
}
