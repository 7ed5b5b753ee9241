//! `G(n,p)` sampling, containment, `p_c` estimation and sparse instance
//! generation.
//!
//! Every random draw comes from a ChaCha8 stream selected by
//! `(master seed, task index)`, so results do not depend on how tasks are
//! scheduled across threads.

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::exact::{int, rational, Rational, RationalRoot};
use crate::expectation::is_q_sparse;
use crate::graph::families::{complete, disjoint_union, path_power, spider, theta};
use crate::graph::Graph;
use crate::limits::Limits;

pub use crate::counting::contains;

/// The RNG for task `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One draw of an exact `Bernoulli(p)`.
///
/// Rationals with 64-bit numerator and denominator use a single bounded draw;
/// anything else compares `p` against a uniform variable revealed one bit at
/// a time.
pub fn bernoulli<R: Rng>(p: &RationalRoot, rng: &mut R) -> bool {
    if let Some(r) = p.as_rational() {
        if let (Some(num), Some(den)) = (r.numer().to_u64(), r.denom().to_u64()) {
            return rng.gen_range(0..den) < num;
        }
    }
    let mut lo = Rational::zero();
    let mut width = Rational::one();
    loop {
        width /= int(2u32);
        if rng.gen::<bool>() {
            lo += &width;
        }
        if RationalRoot::from_rational(&lo + &width) <= *p {
            return true;
        }
        if RationalRoot::from_rational(lo.clone()) >= *p {
            return false;
        }
    }
}

/// `G(n,p)`: pairs visited in lexicographic order, one Bernoulli draw each.
pub fn sample_gnp<R: Rng>(n: usize, p: &RationalRoot, rng: &mut R) -> Result<Graph> {
    if *p > RationalRoot::one() {
        return Err(Error::invalid(format!("probability {p} exceeds 1")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if bernoulli(p, rng) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edge_set(n, edges))
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialPlan {
    pub n: usize,
    #[serde(serialize_with = "crate::report::graph6_string")]
    pub pattern: Graph,
    pub trials: u32,
    pub seed: u64,
    /// Bisection stops once the bracket on `p` is narrower than this.
    pub tolerance: f64,
    pub confidence: f64,
}

impl TrialPlan {
    pub fn new(n: usize, pattern: Graph, seed: u64) -> Self {
        TrialPlan {
            n,
            pattern,
            trials: 2000,
            seed,
            tolerance: 0.01,
            confidence: 0.95,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Probe {
    #[serde(serialize_with = "crate::report::rational_string")]
    pub p: Rational,
    pub successes: u32,
    pub trials: u32,
    /// Wilson interval for `Pr(G(n,p) ⊇ H)`.
    pub wilson: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    #[serde(serialize_with = "crate::report::rational_string")]
    pub p_hat: Rational,
    /// Largest probe confidently below 1/2 and smallest probe confidently
    /// above it (0 and 1 when there is none).
    #[serde(serialize_with = "crate::report::rational_pair")]
    pub interval: (Rational, Rational),
    pub probes: Vec<Probe>,
    pub plan: TrialPlan,
}

impl EstimateResult {
    /// Probe trace as CSV.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("p,p_approx,successes,trials,wilson_lo,wilson_hi\n");
        for pr in &self.probes {
            out.push_str(&format!(
                "{},{:.6},{},{},{:.6},{:.6}\n",
                crate::exact::format_rational(&pr.p),
                pr.p.to_f64().unwrap_or(f64::NAN),
                pr.successes,
                pr.trials,
                pr.wilson.0,
                pr.wilson.1
            ));
        }
        out
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u32, n: u32, confidence: f64) -> (f64, f64) {
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let (k, n) = (k as f64, n as f64);
    let phat = k / n;
    let denom = 1.0 + z * z / n;
    let center = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Trials that contain `H` at probability `p`; trial `t` of probe `k` uses
/// stream `k << 32 | t`.
fn run_probe(plan: &TrialPlan, k: u64, p: &Rational, limits: &Limits) -> Result<u32> {
    let p = RationalRoot::from_rational(p.clone());
    let hits = (0..plan.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(plan.seed, k << 32 | t as u64);
            let g = sample_gnp(plan.n, &p, &mut rng)?;
            contains(&g, &plan.pattern, limits)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(hits.into_iter().filter(|&b| b).count() as u32)
}

/// Bisection for the `p` at which `Pr(G(n,p) ⊇ H) = 1/2`.
pub fn estimate_pc(plan: &TrialPlan, limits: &Limits) -> Result<EstimateResult> {
    if plan.pattern.edge_count() == 0 {
        return Err(Error::invalid("pattern needs at least one edge"));
    }
    if plan.pattern.non_isolated().len() > plan.n {
        return Err(Error::invalid(format!(
            "pattern has {} non-isolated vertices but n = {}",
            plan.pattern.non_isolated().len(),
            plan.n
        )));
    }
    if plan.trials == 0 || !(plan.tolerance > 0.0) || !(plan.confidence > 0.0 && plan.confidence < 1.0) {
        return Err(Error::invalid("need trials >= 1, tolerance > 0 and 0 < confidence < 1"));
    }
    let half = rational(1, 2);
    let (mut lo, mut hi) = (Rational::zero(), Rational::one());
    let mut probes = Vec::new();
    let (mut ci_lo, mut ci_hi) = (Rational::zero(), Rational::one());
    while (&hi - &lo).to_f64().unwrap_or(0.0) >= plan.tolerance {
        let p = (&lo + &hi) * &half;
        let successes = run_probe(plan, probes.len() as u64, &p, limits)?;
        let w = wilson(successes, plan.trials, plan.confidence);
        if w.1 < 0.5 && p > ci_lo {
            ci_lo = p.clone();
        }
        if w.0 > 0.5 && p < ci_hi {
            ci_hi = p.clone();
        }
        if 2 * successes < plan.trials {
            lo = p.clone();
        } else {
            hi = p.clone();
        }
        probes.push(Probe {
            p,
            successes,
            trials: plan.trials,
            wilson: w,
        });
    }
    Ok(EstimateResult {
        p_hat: (lo + hi) * half,
        interval: (ci_lo, ci_hi),
        probes,
        plan: plan.clone(),
    })
}

/// Instance families for [`generate_sparse`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `G(vertices, min(1, q·kappa))`, then repaired.
    GnpRepair { vertices: usize, kappa: u32 },
    /// Disjoint cliques of the given orders.
    CliqueUnion(Vec<usize>),
    /// Internally disjoint paths of the given lengths between two poles.
    Theta(Vec<usize>),
    /// Legs of the given lengths from one center.
    Spider(Vec<usize>),
    /// `k`-th power of a path with `len` edges.
    PathPower { len: usize, k: usize },
}

impl Family {
    pub const NAMES: [&'static str; 5] = ["gnp-repair", "clique-union", "theta", "spider", "path-power"];

    pub fn name(&self) -> &'static str {
        match self {
            Family::GnpRepair { .. } => "gnp-repair",
            Family::CliqueUnion(_) => "clique-union",
            Family::Theta(_) => "theta",
            Family::Spider(_) => "spider",
            Family::PathPower { .. } => "path-power",
        }
    }

    /// Builds a family from its name and integer parameters. `gnp-repair`
    /// takes `[vertices, kappa]`, `path-power` takes `[len, k]`; the others
    /// take their size lists.
    pub fn from_params(name: &str, params: &[usize]) -> Result<Self> {
        let need = |k: usize| {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::invalid(format!("family {name} takes {k} parameters")))
            }
        };
        let family = match name {
            "gnp-repair" => {
                need(2)?;
                Family::GnpRepair {
                    vertices: params[0],
                    kappa: u32::try_from(params[1]).map_err(|_| Error::invalid("kappa too large"))?,
                }
            }
            "path-power" => {
                need(2)?;
                Family::PathPower {
                    len: params[0],
                    k: params[1],
                }
            }
            "clique-union" | "theta" | "spider" => {
                if params.is_empty() {
                    return Err(Error::invalid(format!("family {name} needs at least one size")));
                }
                match name {
                    "clique-union" => Family::CliqueUnion(params.to_vec()),
                    "theta" => Family::Theta(params.to_vec()),
                    _ => Family::Spider(params.to_vec()),
                }
            }
            _ => {
                return Err(Error::invalid(format!(
                    "unknown family {name}; expected one of {}",
                    Family::NAMES.join(", ")
                )))
            }
        };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            Family::GnpRepair { vertices, .. } => *vertices >= 2,
            Family::CliqueUnion(sizes) => sizes.iter().all(|&s| s >= 2),
            Family::Theta(lengths) => {
                lengths.len() >= 2 && lengths.iter().all(|&l| l >= 1) && lengths.iter().filter(|&&l| l == 1).count() <= 1
            }
            Family::Spider(legs) => legs.iter().all(|&l| l >= 1),
            Family::PathPower { len, k } => *len >= 1 && *k >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("bad parameters for family {}", self.name())))
        }
    }

    /// Random small parameters: at most 6 vertices for `gnp-repair`, at most
    /// 9 vertices and 16 edges otherwise.
    pub fn random<R: Rng>(name: &str, rng: &mut R) -> Result<Self> {
        let family = match name {
            "gnp-repair" => Family::GnpRepair {
                vertices: rng.gen_range(3..=6),
                kappa: rng.gen_range(1..=4),
            },
            "clique-union" => {
                let parts = rng.gen_range(1..=2);
                Family::CliqueUnion((0..parts).map(|_| rng.gen_range(2..=4)).collect())
            }
            "theta" => {
                let mut lengths: Vec<usize> = (0..rng.gen_range(2..=3)).map(|_| rng.gen_range(2..=3)).collect();
                if rng.gen::<bool>() {
                    lengths[0] = 1;
                }
                Family::Theta(lengths)
            }
            "spider" => Family::Spider((0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=2)).collect()),
            "path-power" => {
                let len = rng.gen_range(1..=6);
                Family::PathPower {
                    len,
                    k: rng.gen_range(1..=2),
                }
            }
            _ => return Family::from_params(name, &[]),
        };
        Ok(family)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Generated {
    pub family: Family,
    #[serde(serialize_with = "crate::report::graph6_string")]
    pub graph: Graph,
    pub n: usize,
    pub q: RationalRoot,
    /// Edges removed by repair, in order.
    pub removed: Vec<(usize, usize)>,
}

/// Among `candidates`, the edge with the largest `deg u + deg v` in `g`;
/// ties go to the lexicographically smallest edge.
fn heaviest_edge(g: &Graph, candidates: &[(usize, usize)]) -> (usize, usize) {
    let mut best = candidates[0];
    let weight = |(u, v): (usize, usize)| g.degree(u) + g.degree(v);
    for &e in &candidates[1..] {
        if weight(e) > weight(best) || (weight(e) == weight(best) && e < best) {
            best = e;
        }
    }
    best
}

/// A graph from `family` certified `q`-sparse for ambient `n`.
///
/// `gnp-repair` first trims the sample to the exact-check edge cap, then
/// removes one witness edge per violation until the check passes, failing
/// after `repair_budget` removals. Structured families are returned as built
/// or rejected with the violating subgraph.
pub fn generate_sparse<R: Rng>(
    n: usize,
    q: &RationalRoot,
    family: &Family,
    repair_budget: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<Generated> {
    family.validate()?;
    let mut removed = Vec::new();
    let mut g = match family {
        Family::GnpRepair { vertices, kappa } => {
            if *vertices > n {
                return Err(Error::invalid(format!("{vertices} vertices exceed n = {n}")));
            }
            let scaled = q.mul_rational(&int(*kappa));
            let p = if scaled > RationalRoot::one() { RationalRoot::one() } else { scaled };
            let mut g = sample_gnp(*vertices, &p, rng)?;
            while g.edge_count() > limits.exact_edge_cap {
                let e = heaviest_edge(&g, g.edges());
                g = g.without_edge(e.0, e.1);
                removed.push(e);
            }
            g
        }
        Family::CliqueUnion(sizes) => disjoint_union(&sizes.iter().map(|&s| complete(s)).collect::<Vec<_>>()),
        Family::Theta(lengths) => theta(lengths),
        Family::Spider(legs) => spider(legs),
        Family::PathPower { len, k } => path_power(*len, *k),
    };
    if g.non_isolated().len() > n {
        return Err(Error::invalid(format!(
            "generated graph has {} non-isolated vertices but n = {n}",
            g.non_isolated().len()
        )));
    }
    let mut repairs = 0;
    loop {
        let check = is_q_sparse(&g, n, q, limits)?;
        let Some(violation) = check.violation else {
            break;
        };
        if !matches!(family, Family::GnpRepair { .. }) {
            return Err(Error::precondition_with(
                format!("{} instance is not q-sparse at q = {q}", family.name()),
                format!(
                    "subgraph {} has expectation {}",
                    Graph::from_edge_set(g.vertex_count(), violation.edges.iter().copied()).edge_string(),
                    violation.expectation
                ),
            ));
        }
        if repairs == repair_budget {
            return Err(Error::ResourceGuard(format!("repair did not converge within {repair_budget} removals")));
        }
        let e = heaviest_edge(&g, &violation.edges);
        g = g.without_edge(e.0, e.1);
        removed.push(e);
        repairs += 1;
    }
    Ok(Generated {
        family: family.clone(),
        graph: g,
        n,
        q: q.clone(),
        removed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_value;
    use crate::expectation::q_min;
    use crate::graph::families::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn trivial_probabilities() {
        let mut rng = stream(1, 0);
        assert_eq!(sample_gnp(6, &RationalRoot::zero(), &mut rng).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(6, &RationalRoot::one(), &mut rng).unwrap().edge_count(), 15);
    }

    #[test]
    fn edge_count_concentrates() {
        let half = parse_value("1/2").unwrap();
        // C(100,2)/2 = 2475, sigma = sqrt(4950)/2
        let sigma = (4950f64).sqrt() / 2.0;
        for i in 0..100 {
            let g = sample_gnp(100, &half, &mut stream(5, i)).unwrap();
            assert!((g.edge_count() as f64 - 2475.0).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn irrational_bernoulli_mean() {
        // 120^(-1/3) = 0.20274...
        let q = parse_value("root:120:3").unwrap();
        let mut rng = stream(9, 0);
        let hits = (0..20000).filter(|_| bernoulli(&q, &mut rng)).count() as f64;
        let mean: f64 = 0.202740066519;
        let sigma = (mean * (1.0 - mean) / 20000.0).sqrt();
        assert!((hits / 20000.0 - mean).abs() < 5.0 * sigma);
    }

    #[test]
    fn containment_examples() {
        assert!(contains(&cycle(5), &path(3), &lim()).unwrap());
        assert!(!contains(&cycle(5), &complete(3), &lim()).unwrap());
        assert!(contains(&petersen(), &cycle(5), &lim()).unwrap());
    }

    #[test]
    fn wilson_matches_reference() {
        // k = 50, n = 100, z = 1.959964: center 0.5, half-width 0.0961
        let (lo, hi) = wilson(50, 100, 0.95);
        assert!((lo - 0.40383).abs() < 1e-4 && (hi - 0.59617).abs() < 1e-4);
    }

    #[test]
    fn edge_at_two_vertices() {
        let plan = TrialPlan::new(2, path(1), 11);
        let r = estimate_pc(&plan, &lim()).unwrap();
        let p = r.p_hat.to_f64().unwrap();
        assert!((p - 0.5).abs() <= 0.01 + 0.03, "{p}");
        assert!(r.interval.0 <= r.p_hat && r.p_hat <= r.interval.1);
    }

    #[test]
    fn deterministic_and_rejects_large_pattern() {
        let plan = TrialPlan {
            trials: 200,
            ..TrialPlan::new(5, complete(3), 3)
        };
        let a = serde_json::to_string(&estimate_pc(&plan, &lim()).unwrap()).unwrap();
        let b = serde_json::to_string(&estimate_pc(&plan, &lim()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(estimate_pc(&TrialPlan::new(2, complete(3), 1), &lim()).is_err());
    }

    #[test]
    fn generator_examples() {
        let quarter = parse_value("1/4").unwrap();
        let mut rng = stream(2, 0);
        let g = generate_sparse(10, &quarter, &Family::CliqueUnion(vec![3]), 0, &mut rng, &lim()).unwrap();
        assert_eq!(g.graph.edge_count(), 3);
        for name in Family::NAMES {
            let fam = Family::random(name, &mut rng).unwrap();
            assert!(generate_sparse(12, &RationalRoot::one(), &fam, 100, &mut rng, &lim()).is_ok());
        }
        let th = theta(&[2, 2, 2]);
        let qm = q_min(&th, 10, &lim()).unwrap().q_min;
        let below = qm.mul_rational(&rational(99, 100));
        let err = generate_sparse(10, &below, &Family::Theta(vec![2, 2, 2]), 0, &mut rng, &lim()).unwrap_err();
        assert!(matches!(err, Error::Precondition { witness: Some(_), .. }));
        assert!(generate_sparse(10, &qm, &Family::Theta(vec![2, 2, 2]), 0, &mut rng, &lim()).is_ok());
    }

    #[test]
    fn repair_yields_sparse_graphs() {
        let q = parse_value("1/5").unwrap();
        for i in 0..10 {
            let fam = Family::GnpRepair {
                vertices: 6,
                kappa: 4,
            };
            let g = generate_sparse(8, &q, &fam, 100, &mut stream(4, i), &lim()).unwrap();
            assert!(is_q_sparse(&g.graph, 8, &q, &lim()).unwrap().sparse);
        }
    }
}
