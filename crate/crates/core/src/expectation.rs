//! Expectations in `G(n,p)`, sparsity thresholds and the required constant.
//!
//! `E_p X_J = N(K_n, J) p^{e_J}` with `N(K_n, J) = (n)_{v_J} / aut(J)`.
//! A host `H` is `q`-sparse when `E_q X_I >= 1` for every subgraph `I`; only
//! subgraphs without isolated vertices need checking, since adding an
//! isolated vertex to `I` multiplies `N(K_n, I)` by a factor of at least one.
//! So the quantifier runs over nonempty edge subsets of `H`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::count_copies;
use crate::error::{Error, Result};
use crate::exact::{biguint_to_rational, binomial, falling, int, ln_biguint, Rational, RationalRoot};
use crate::graph::aut::automorphism_count;
use crate::graph::io::to_graph6;
use crate::graph::Graph;
use crate::limits::Limits;

/// Relative slack under which floating-point log comparisons defer to exact
/// arithmetic.
const LOG_SLACK: f64 = 1e-9;

/// Subset blocks handed to worker tasks.
const BLOCK: u64 = 1 << 12;

/// `N(K_n, J) = (n)_{v_J} / aut(J)`.
pub fn copies_in_complete(n: usize, j: &Graph) -> BigUint {
    falling(n as u64, j.vertex_count() as u64) / automorphism_count(j)
}

fn check_probability(p: &RationalRoot) -> Result<()> {
    if *p > RationalRoot::one() {
        return Err(Error::invalid(format!("probability {p} exceeds 1")));
    }
    Ok(())
}

/// `E_p X_J`; zero when `v_J > n`.
pub fn expected_copies(n: usize, p: &RationalRoot, j: &Graph) -> Result<RationalRoot> {
    if j.vertex_count() == 0 {
        return Err(Error::invalid("pattern must have at least one vertex"));
    }
    check_probability(p)?;
    let count = copies_in_complete(n, j);
    Ok(p.pow(j.edge_count() as u32).mul_rational(&biguint_to_rational(&count)))
}

/// `E_p X_{K_s} = C(n, s) p^{C(s,2)}`.
pub fn expected_cliques(n: usize, s: usize, p: &Rational) -> Rational {
    biguint_to_rational(&binomial(n as u64, s as u64)) * num_traits::pow(p.clone(), s * s.saturating_sub(1) / 2)
}

/// `E_p X_{C_k} = (n)_k / (2k) p^k` for `k >= 3`.
pub fn expected_cycles(n: usize, k: usize, p: &Rational) -> Rational {
    biguint_to_rational(&falling(n as u64, k as u64)) / int(2 * k as u64) * num_traits::pow(p.clone(), k)
}

/// Labeled copies of a tree with `j` edges: `(n)_{j+1} p^j`.
pub fn expected_labeled_tree(n: usize, j: usize, p: &Rational) -> Rational {
    biguint_to_rational(&falling(n as u64, j as u64 + 1)) * num_traits::pow(p.clone(), j)
}

/// `a = E_p X_F / n`, the peeling threshold.
pub fn peel_threshold_a(f: &Graph, n: usize, p: &RationalRoot) -> Result<RationalRoot> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    Ok(expected_copies(n, p, f)?.mul_rational(&Rational::new(1.into(), (n as u64).into())))
}

/// The normalization a subgraph expectation must reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `E X_I >= 1`: `q`-sparseness.
    One,
    /// `E X_I >= 1/2`: the expectation threshold.
    Half,
}

impl Target {
    fn value(self) -> Rational {
        match self {
            Target::One => Rational::one(),
            Target::Half => Rational::new(1.into(), 2.into()),
        }
    }
}

/// One row of the threshold table: a representative subgraph for each
/// distinct `(v_I, e_I, aut(I))`, which determines the threshold.
#[derive(Debug, Clone, Serialize)]
pub struct SubgraphThreshold {
    /// Edges of the first subgraph (in enumeration order) with this profile.
    pub edges: Vec<(usize, usize)>,
    pub e: usize,
    pub v: usize,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub aut: BigUint,
    /// `N(K_n, I)`.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub copies_in_kn: BigUint,
    pub threshold: RationalRoot,
}

#[derive(Debug, Clone, Serialize)]
pub struct SparsityReport {
    pub n: usize,
    pub target: Target,
    /// Least probability meeting the target for every enumerated subgraph.
    pub q_min: RationalRoot,
    /// Edges (host ids) of the binding subgraph.
    pub witness_edges: Vec<(usize, usize)>,
    #[serde(serialize_with = "graph6_string")]
    pub witness: Graph,
    pub table: Vec<SubgraphThreshold>,
    /// Set when only connected subgraphs up to a size bound were enumerated:
    /// `q_min` is then a lower bound, not a certificate.
    pub lower_bound: bool,
}

fn graph6_string<S: serde::Serializer>(g: &Graph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_graph6(g))
}

struct Candidate {
    edges: Vec<usize>,
    threshold: RationalRoot,
    log: f64,
}

/// Prefers the larger threshold, then the lexicographically smaller edge set.
fn better(a: &Candidate, b: &Candidate) -> bool {
    if a.log > b.log + LOG_SLACK * (1.0 + b.log.abs()) {
        return true;
    }
    if a.log < b.log - LOG_SLACK * (1.0 + b.log.abs()) {
        return false;
    }
    match a.threshold.cmp(&b.threshold) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.edges < b.edges,
    }
}

fn mask_edges(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Whether `N(K_n, I) q^{e_I} >= 1` for the graph `I` spanned by `edges`.
pub fn meets_one(edges: &[(usize, usize)], n: usize, q: &RationalRoot) -> bool {
    let mut vs: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vs.sort_unstable();
    vs.dedup();
    let qe = q.pow(edges.len() as u32);
    // aut <= v!
    let choose = binomial(n as u64, vs.len() as u64);
    if qe.mul_rational(&biguint_to_rational(&choose)) >= RationalRoot::one() {
        return true;
    }
    let at = |x: usize| vs.binary_search(&x).expect("endpoint");
    let sub = Graph::from_edge_set(vs.len(), edges.iter().map(|&(a, b)| (at(a), at(b))));
    let count = falling(n as u64, vs.len() as u64) / automorphism_count(&sub);
    qe.mul_rational(&biguint_to_rational(&count)) >= RationalRoot::one()
}

/// `(n)_v / aut` and the subgraph for an edge subset.
fn profile(h: &Graph, n: usize, ids: &[usize]) -> (Graph, BigUint, BigUint) {
    let (sub, _) = h.edge_subgraph(ids);
    let aut = automorphism_count(&sub);
    let count = falling(n as u64, sub.vertex_count() as u64) / &aut;
    (sub, aut, count)
}

fn threshold_of(count: &BigUint, e: usize, target: Target) -> (RationalRoot, f64) {
    let r = target.value() / biguint_to_rational(count);
    let log = (crate::exact::ln_rational(&r)) / e as f64;
    (RationalRoot::new(r, e as u32), log)
}

fn check_sizes(h: &Graph, n: usize) -> Result<()> {
    if h.edge_count() == 0 {
        return Err(Error::invalid("host needs at least one edge"));
    }
    if n < h.non_isolated().len() {
        return Err(Error::invalid(format!(
            "n = {n} is smaller than the {} non-isolated host vertices",
            h.non_isolated().len()
        )));
    }
    Ok(())
}

/// Least `q` with `N(K_n, I) q^{e_I} >= target` for all `I ⊆ H`, by exact
/// enumeration of edge subsets.
///
/// Without `table`, subsets whose threshold cannot beat the current best
/// even with `aut(I) = v_I!` are skipped before their automorphisms are
/// counted, and the returned table is empty.
pub fn sparsity_threshold(h: &Graph, n: usize, target: Target, table: bool, limits: &Limits) -> Result<SparsityReport> {
    check_sizes(h, n)?;
    let m = h.edge_count();
    if m > limits.exact_edge_cap || m > 63 {
        return Err(Error::ResourceGuard(format!(
            "exact enumeration covers at most {} host edges, got {m}; use heuristic mode",
            limits.exact_edge_cap.min(63)
        )));
    }
    let total = 1u64 << m;
    let target_ln = crate::exact::ln_rational(&target.value());
    // any real subset's threshold is a valid pruning floor
    let floor = if table {
        f64::NEG_INFINITY
    } else {
        sparsity_threshold_heuristic(h, n, target, limits)?.q_min.ln()
    };
    let ln_falling: Vec<f64> = (0..=h.vertex_count()).map(|v| ln_biguint(&falling(n as u64, v as u64))).collect();
    let blocks: Vec<u64> = (0..total.div_ceil(BLOCK)).collect();
    type Rows = BTreeMap<(usize, usize, BigUint), (u64, BigUint)>;
    let partial: Vec<(Option<Candidate>, Rows)> = blocks
        .par_iter()
        .map(|&b| {
            let mut best: Option<Candidate> = None;
            let mut rows: Rows = BTreeMap::new();
            for mask in (b * BLOCK).max(1)..((b + 1) * BLOCK).min(total) {
                let ids = mask_edges(mask, m);
                let e = ids.len();
                if !table {
                    let bound = best.as_ref().map_or(floor, |b| b.log.max(floor));
                    // aut(I) <= prod over degree classes of (class size)!
                    let (v, aut_ln) = degree_class_bound(h, &ids);
                    let ceiling = (target_ln + aut_ln - ln_falling[v]) / e as f64;
                    if ceiling < bound - LOG_SLACK * (1.0 + bound.abs()) {
                        continue;
                    }
                }
                let (sub, aut, count) = profile(h, n, &ids);
                let (threshold, log) = threshold_of(&count, e, target);
                if table {
                    rows.entry((sub.vertex_count(), e, aut)).or_insert((mask, count));
                }
                let cand = Candidate {
                    edges: ids,
                    threshold,
                    log,
                };
                if best.as_ref().is_none_or(|b| better(&cand, b)) {
                    best = Some(cand);
                }
            }
            (best, rows)
        })
        .collect();
    let mut best: Option<Candidate> = None;
    let mut rows: Rows = BTreeMap::new();
    for (cand, block_rows) in partial {
        if let Some(c) = cand {
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                best = Some(c);
            }
        }
        for (key, (mask, count)) in block_rows {
            let slot = rows.entry(key).or_insert((mask, count.clone()));
            if mask < slot.0 {
                *slot = (mask, count);
            }
        }
    }
    let best = best.expect("at least one nonempty edge subset");
    let table = rows
        .into_iter()
        .map(|((v, e, aut), (mask, count))| SubgraphThreshold {
            edges: mask_edges(mask, m).iter().map(|&i| h.edges()[i]).collect(),
            e,
            v,
            aut,
            threshold: threshold_of(&count, e, target).0,
            copies_in_kn: count,
        })
        .collect();
    Ok(report(h, n, target, best, table, false))
}

fn report(h: &Graph, n: usize, target: Target, best: Candidate, table: Vec<SubgraphThreshold>, lower_bound: bool) -> SparsityReport {
    let (witness, _) = h.edge_subgraph(&best.edges);
    SparsityReport {
        n,
        target,
        q_min: best.threshold,
        witness_edges: best.edges.iter().map(|&i| h.edges()[i]).collect(),
        witness,
        table,
        lower_bound,
    }
}

/// `q_min(H)` exactly.
pub fn q_min(h: &Graph, n: usize, limits: &Limits) -> Result<SparsityReport> {
    sparsity_threshold(h, n, Target::One, false, limits)
}

/// The expectation threshold `p_E(H)`.
pub fn expectation_threshold(h: &Graph, n: usize, limits: &Limits) -> Result<SparsityReport> {
    sparsity_threshold(h, n, Target::Half, false, limits)
}

/// Lower bound on the threshold from induced subgraphs on connected vertex
/// sets of at most `limits.heuristic_vertices` vertices.
pub fn sparsity_threshold_heuristic(h: &Graph, n: usize, target: Target, limits: &Limits) -> Result<SparsityReport> {
    check_sizes(h, n)?;
    let sets = connected_sets(h, limits.heuristic_vertices.max(2));
    let mut best: Option<Candidate> = None;
    for set in sets {
        let sub = h.induced(&set);
        if sub.edge_count() == 0 {
            continue;
        }
        let ids: Vec<usize> = sub
            .edges()
            .iter()
            .map(|&(a, b)| h.edge_index(set[a], set[b]).expect("induced edge"))
            .collect();
        let mut ids = ids;
        ids.sort_unstable();
        let count = falling(n as u64, sub.vertex_count() as u64) / automorphism_count(&sub);
        let (threshold, log) = threshold_of(&count, ids.len(), target);
        let cand = Candidate {
            edges: ids,
            threshold,
            log,
        };
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    }
    let best = best.expect("host has an edge");
    Ok(report(h, n, target, best, Vec::new(), true))
}

/// Connected vertex sets of size `2..=k`, each sorted, found by growing
/// from the smallest member with larger vertices only.
fn connected_sets(h: &Graph, k: usize) -> Vec<Vec<usize>> {
    let mut out = std::collections::BTreeSet::new();
    for s in 0..h.vertex_count() {
        let mut frontier = vec![vec![s]];
        for _ in 1..k {
            let mut next = Vec::new();
            for set in &frontier {
                for &x in set {
                    for y in h.neighbors(x).iter() {
                        if y > s && !set.contains(&y) {
                            let mut grown = set.clone();
                            grown.push(y);
                            grown.sort_unstable();
                            if out.insert(grown.clone()) {
                                next.push(grown);
                            }
                        }
                    }
                }
            }
            frontier = next;
        }
    }
    out.into_iter().collect()
}

/// A subgraph with expectation below one.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub edges: Vec<(usize, usize)>,
    pub expectation: RationalRoot,
}

#[derive(Debug, Clone, Serialize)]
pub struct SparsityCheck {
    pub sparse: bool,
    pub violation: Option<Violation>,
}

/// Decides `q`-sparseness exactly; a violation is the first failing edge
/// subset in enumeration order (subsets as bitmasks over edge ids).
pub fn is_q_sparse(h: &Graph, n: usize, q: &RationalRoot, limits: &Limits) -> Result<SparsityCheck> {
    scan_sparse(h, n, q, None, limits)
}

/// Like [`is_q_sparse`], but only subsets containing `edge` are examined;
/// enough when `H - edge` is already known to be `q`-sparse.
pub fn is_q_sparse_with_edge(h: &Graph, n: usize, q: &RationalRoot, edge: (usize, usize), limits: &Limits) -> Result<SparsityCheck> {
    let id = h
        .edge_index(edge.0, edge.1)
        .ok_or_else(|| Error::invalid(format!("({}, {}) is not an edge", edge.0, edge.1)))?;
    scan_sparse(h, n, q, Some(id), limits)
}

fn scan_sparse(h: &Graph, n: usize, q: &RationalRoot, required: Option<usize>, limits: &Limits) -> Result<SparsityCheck> {
    check_probability(q)?;
    // every nonempty I has N(K_n, I) >= 1
    if h.edge_count() == 0 || (*q == RationalRoot::one() && n >= h.non_isolated().len()) {
        return Ok(SparsityCheck {
            sparse: true,
            violation: None,
        });
    }
    check_sizes(h, n)?;
    let m = h.edge_count();
    if m > limits.exact_edge_cap || m > 63 {
        return Err(Error::ResourceGuard(format!(
            "exact sparsity check covers at most {} host edges, got {m}",
            limits.exact_edge_cap.min(63)
        )));
    }
    if q.is_zero() {
        return Ok(SparsityCheck {
            sparse: false,
            violation: Some(Violation {
                edges: vec![h.edges()[required.unwrap_or(0)]],
                expectation: RationalRoot::zero(),
            }),
        });
    }
    let ln_q = q.ln();
    let total = 1u64 << m;
    let span = h.non_isolated().len();
    let choose: Vec<BigUint> = (0..=span).map(|v| binomial(n as u64, v as u64)).collect();
    let ln_choose: Vec<f64> = choose.iter().map(ln_biguint).collect();
    let ln_falling: Vec<f64> = (0..=span).map(|v| ln_biguint(&falling(n as u64, v as u64))).collect();
    let powers: Vec<RationalRoot> = (0..=m as u32).map(|e| q.pow(e)).collect();
    let clear = |x: f64| x > LOG_SLACK * (1.0 + x.abs());
    let blocks: Vec<u64> = (0..total.div_ceil(BLOCK)).collect();
    let found = blocks.par_iter().find_map_first(|&b| {
        for mask in (b * BLOCK).max(1)..((b + 1) * BLOCK).min(total) {
            if required.is_some_and(|r| mask >> r & 1 == 0) {
                continue;
            }
            let ids = mask_edges(mask, m);
            let (v, aut_ln) = degree_class_bound(h, &ids);
            let e = ids.len() as f64;
            // cheap certificates: aut <= v! and aut <= product of degree-class sizes!
            if clear(ln_choose[v] + e * ln_q) || clear(ln_falling[v] - aut_ln + e * ln_q) {
                continue;
            }
            let cheap = powers[ids.len()].mul_rational(&biguint_to_rational(&choose[v]));
            if cheap >= RationalRoot::one() {
                continue;
            }
            let (_, _, count) = profile(h, n, &ids);
            let expectation = powers[ids.len()].mul_rational(&biguint_to_rational(&count));
            if expectation < RationalRoot::one() {
                return Some(Violation {
                    edges: ids.iter().map(|&i| h.edges()[i]).collect(),
                    expectation,
                });
            }
        }
        None
    });
    Ok(SparsityCheck {
        sparse: found.is_none(),
        violation: found,
    })
}

/// Vertex count of the edge subset and `ln` of the product of factorials of
/// its degree-class sizes.
fn degree_class_bound(h: &Graph, ids: &[usize]) -> (usize, f64) {
    static LN_FACT: OnceLock<Vec<f64>> = OnceLock::new();
    let ln_fact = LN_FACT.get_or_init(|| {
        let mut t = vec![0.0f64];
        for k in 1..=64 {
            t.push(t[k - 1] + (k as f64).ln());
        }
        t
    });
    let mut ends: Vec<usize> = ids.iter().flat_map(|&i| [h.edges()[i].0, h.edges()[i].1]).collect();
    ends.sort_unstable();
    let mut classes = [0usize; 64];
    let mut v = 0;
    for run in ends.chunk_by(|a, b| a == b) {
        classes[run.len().min(63)] += 1;
        v += 1;
    }
    (v, classes.iter().map(|&c| ln_fact[c.min(64)]).sum())
}

/// Fails with a precondition error naming the violating subgraph.
pub fn require_q_sparse(h: &Graph, n: usize, q: &RationalRoot, limits: &Limits) -> Result<()> {
    let check = is_q_sparse(h, n, q, limits)?;
    match check.violation {
        None => Ok(()),
        Some(v) => Err(Error::precondition_with(
            format!("host is not q-sparse at q = {q}"),
            format!(
                "subgraph {} has expectation {}",
                Graph::from_edge_set(h.vertex_count(), v.edges.iter().copied()).edge_string(),
                v.expectation
            ),
        )),
    }
}

/// The least `L` with `E_{Lq} X_F = N(H, F)`, i.e.
/// `(N(H,F) / E_q X_F)^{1/e_F}`.
#[derive(Debug, Clone, Serialize)]
pub struct RequiredL {
    pub value: RationalRoot,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub copies: BigUint,
    pub expectation: RationalRoot,
}

/// `required_L` from precomputed `N(H,F)`; no sparsity check.
pub fn required_l_from(copies: &BigUint, f: &Graph, n: usize, q: &RationalRoot) -> Result<RequiredL> {
    if f.edge_count() == 0 {
        return Err(Error::invalid("pattern F needs at least one edge"));
    }
    let expectation = expected_copies(n, q, f)?;
    if expectation.is_zero() {
        return Err(Error::precondition("E_q X_F is zero (F larger than n or q = 0)"));
    }
    let value = if copies.is_zero() {
        RationalRoot::zero()
    } else {
        RationalRoot::from_rational(biguint_to_rational(copies))
            .div(&expectation)
            .root(f.edge_count() as u32)
    };
    Ok(RequiredL {
        value,
        copies: copies.clone(),
        expectation,
    })
}

pub fn required_l(h: &Graph, f: &Graph, n: usize, q: &RationalRoot, limits: &Limits) -> Result<RequiredL> {
    require_q_sparse(h, n, q, limits)?;
    let copies = count_copies(h, f, limits)?;
    required_l_from(&copies, f, n, q)
}

/// Parameters of `G(n,p)` with `p = L q`.
#[derive(Debug, Clone, Serialize)]
pub struct ModelParams {
    pub n: usize,
    pub q: RationalRoot,
    pub p: RationalRoot,
    pub l: Option<RationalRoot>,
}

impl ModelParams {
    /// Exactly one of `p` or `l` must be given.
    pub fn new(n: usize, q: RationalRoot, p: Option<RationalRoot>, l: Option<RationalRoot>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        let p = match (p, &l) {
            (Some(p), None) => p,
            (None, Some(l)) => q.mul(l),
            _ => return Err(Error::invalid("give exactly one of p or L")),
        };
        check_probability(&p)?;
        if q > p {
            return Err(Error::invalid("need q <= p"));
        }
        Ok(ModelParams { n, q, p, l })
    }

    /// `d = n p`.
    pub fn d(&self) -> RationalRoot {
        self.p.mul_rational(&int(self.n as u64))
    }

    /// `eps = 1/L`, when `L` was given.
    pub fn eps(&self) -> Option<RationalRoot> {
        self.l.as_ref().filter(|l| !l.is_zero()).map(RationalRoot::recip)
    }

    /// `c` with `n q = n^c`; defined only for `1/n < q`.
    pub fn c(&self) -> Option<f64> {
        let nq = self.q.mul_rational(&int(self.n as u64));
        (nq > RationalRoot::one() && self.n > 1).then(|| nq.ln() / (self.n as f64).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_value, rational};
    use crate::graph::families::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn rr(s: &str) -> RationalRoot {
        parse_value(s).unwrap()
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expected_copies(3, &rr("1/2"), &complete(3)).unwrap(), rr("1/8"));
        assert_eq!(expected_copies(5, &rr("1"), &cycle(4)).unwrap(), rr("15"));
        assert_eq!(expected_copies(4, &rr("1"), &complete(5)).unwrap(), RationalRoot::zero());
        assert!(expected_copies(4, &rr("3/2"), &complete(2)).is_err());
        assert_eq!(expected_cliques(3, 3, &rational(1, 2)), rational(1, 8));
        assert_eq!(expected_cycles(5, 4, &rational(1, 1)), rational(15, 1));
    }

    #[test]
    fn q_min_examples() {
        let r = sparsity_threshold(&complete(3), 10, Target::One, true, &lim()).unwrap();
        assert_eq!(r.q_min, rr("root:120:3"));
        assert_eq!(r.witness_edges.len(), 3);
        assert_eq!(r.table.len(), 3);
        let edge = q_min(&path(1), 7, &lim()).unwrap();
        assert_eq!(edge.q_min, rr("1/21"));
        assert_eq!(q_min(&complete(3), 3, &lim()).unwrap().q_min, RationalRoot::one());
    }

    #[test]
    fn p_e_examples() {
        assert_eq!(expectation_threshold(&complete(3), 3, &lim()).unwrap().q_min, rr("root:2:3"));
        assert_eq!(expectation_threshold(&path(1), 3, &lim()).unwrap().q_min, rr("1/6"));
        assert_eq!(expectation_threshold(&complete(3), 10, &lim()).unwrap().q_min, rr("root:240:3"));
    }

    #[test]
    fn sparse_examples() {
        assert!(is_q_sparse(&complete(3), 10, &rr("1/4"), &lim()).unwrap().sparse);
        let c = is_q_sparse(&complete(3), 10, &rr("1/10"), &lim()).unwrap();
        assert!(!c.sparse);
        // single edges and 2-paths still pass at 1/10; the triangle fails
        assert_eq!(c.violation.unwrap().expectation, rr("3/25"));
        assert!(is_q_sparse(&petersen(), 10, &rr("1"), &lim()).unwrap().sparse);
        let qm = q_min(&bowtie(), 10, &lim()).unwrap().q_min;
        assert!(is_q_sparse(&bowtie(), 10, &qm, &lim()).unwrap().sparse);
    }

    #[test]
    fn required_l_examples() {
        let qm = q_min(&complete(3), 10, &lim()).unwrap().q_min;
        let r = required_l(&complete(3), &complete(3), 10, &qm, &lim()).unwrap();
        assert_eq!(r.value, RationalRoot::one());
        let none = required_l(&cycle(5), &complete(3), 10, &rr("1/2"), &lim()).unwrap();
        assert!(none.value.is_zero());
        assert!(required_l(&complete(3), &complete(3), 10, &rr("1/10"), &lim()).is_err());
    }

    #[test]
    fn peel_a_examples() {
        assert_eq!(peel_threshold_a(&complete(3), 3, &rr("1")).unwrap(), rr("1/3"));
        assert_eq!(peel_threshold_a(&path(1), 4, &rr("1/2")).unwrap(), rr("3/4"));
        assert!(peel_threshold_a(&path(1), 4, &rr("0")).unwrap().is_zero());
    }

    #[test]
    fn heuristic_is_a_lower_bound() {
        let h = bowtie();
        let exact = q_min(&h, 10, &lim()).unwrap().q_min;
        let lb = sparsity_threshold_heuristic(&h, 10, Target::One, &lim()).unwrap();
        assert!(lb.lower_bound);
        assert!(lb.q_min <= exact);
    }
}
