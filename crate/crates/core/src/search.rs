//! Search for `q`-sparse hosts with large `N(H,F)`.
//!
//! For fixed `(n, q, F)` the required constant
//! `L = (N(H,F) / E_q X_F)^{1/e_F}` is increasing in `N(H,F)`, so every score
//! comparison here is an exact comparison of copy counts.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::count_copies;
use crate::error::{Error, Result};
use crate::exact::{binomial, RationalRoot};
use crate::expectation::{copies_in_complete, is_q_sparse, meets_one, required_l_from};
use crate::graph::canon::canonical_graph6;
use crate::graph::catalog::catalog_up_to;
use crate::graph::io::to_graph6;
use crate::graph::Graph;
use crate::limits::Limits;
use crate::montecarlo::stream;

/// Temperature factor applied after each accepted move.
pub const COOLING: f64 = 0.999;

/// Toggles sampled (from their own stream) to set the initial temperature.
const PILOT_MOVES: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    /// Canonical graph6 of the host.
    pub graph6: String,
    pub score: RationalRoot,
    /// Decimal enclosure of the score.
    pub score_enclosure: String,
    #[serde(rename = "N", serialize_with = "crate::report::biguint_string")]
    pub copies: BigUint,
    #[serde(rename = "E_q")]
    pub expectation: RationalRoot,
    /// Move index at which the host was first reached (0 for sweeps).
    pub moves: u64,
    pub chain: usize,
    pub seed: u64,
}

fn entry(g6: String, copies: &BigUint, f: &Graph, n: usize, q: &RationalRoot, moves: u64, chain: usize, seed: u64) -> Result<Entry> {
    let r = required_l_from(copies, f, n, q)?;
    Ok(Entry {
        graph6: g6,
        score_enclosure: r.value.enclosure(12).to_string(),
        score: r.value,
        copies: r.copies,
        expectation: r.expectation,
        moves,
        chain,
        seed,
    })
}

/// Higher count first, then smaller canonical graph6.
fn rank(a: &Entry, b: &Entry) -> std::cmp::Ordering {
    b.copies.cmp(&a.copies).then_with(|| a.graph6.cmp(&b.graph6))
}

/// A single edge must itself be `q`-sparse: `C(n,2) q >= 1`.
fn check_feasible(n: usize, q: &RationalRoot) -> Result<()> {
    let single = q.mul_rational(&crate::exact::biguint_to_rational(&binomial(n as u64, 2)));
    if single < RationalRoot::one() {
        return Err(Error::precondition(format!(
            "infeasible: q = {q} is below 1/C(n,2), so no nonempty graph is q-sparse"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub q: RationalRoot,
    #[serde(serialize_with = "crate::report::graph6_string")]
    pub f: Graph,
    /// Proposed moves per chain.
    pub budget: u64,
    pub seed: u64,
    /// Vertices of the host.
    pub host_cap: usize,
    pub chains: usize,
    pub top_k: usize,
    /// Record every accepted state.
    pub trace: bool,
}

impl SearchConfig {
    pub fn new(n: usize, q: RationalRoot, f: Graph, budget: u64, seed: u64) -> Self {
        SearchConfig {
            n,
            q,
            f,
            budget,
            seed,
            host_cap: 12,
            chains: 2,
            top_k: 10,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainStats {
    pub chain: usize,
    pub initial_temperature: f64,
    pub final_temperature: f64,
    pub accepted: u64,
    pub rejected: u64,
    /// Moves that made the host non-sparse and were fixed by removing a
    /// witness edge.
    pub repaired: u64,
    /// Moves refused because the host would exceed the exact-check edge cap.
    pub over_cap: u64,
    /// Full sparsity re-checks on sampled accepted states (all passed).
    pub audits: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub chain: usize,
    pub step: u64,
    pub graph6: String,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub copies: BigUint,
    pub temperature: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub leaderboard: Vec<Entry>,
    pub config: SearchConfig,
    pub cooling: f64,
    pub chains: Vec<ChainStats>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRow>,
}

/// Leaderboard as CSV.
pub fn leaderboard_csv(entries: &[Entry]) -> String {
    let mut out = String::from("rank,graph6,score,score_enclosure,N,E_q,moves,chain,seed\n");
    for (i, e) in entries.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            i + 1,
            e.graph6,
            e.score,
            e.score_enclosure,
            e.copies,
            e.expectation,
            e.moves,
            e.chain,
            e.seed
        ));
    }
    out
}

/// Pair `(u, v)`, `u < v`, at each index of the edge mask.
fn pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect()
}

struct Chain<'a> {
    cfg: &'a SearchConfig,
    limits: &'a Limits,
    pairs: Vec<(usize, usize)>,
    /// Whether `E_q X_I >= 1` for the subgraph with this edge mask.
    subsets: HashMap<u128, bool>,
    copies: HashMap<u128, BigUint>,
    moves: HashMap<(u128, usize), Move>,
    canon: HashMap<u128, String>,
    audited: HashMap<u128, bool>,
}

#[derive(Clone, Copy)]
enum Move {
    To(u128, bool),
    OverCap,
    Refused,
}

impl<'a> Chain<'a> {
    fn graph(&self, mask: u128) -> Graph {
        let edges = (0..self.pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.pairs[i]);
        Graph::from_edge_set(self.cfg.host_cap, edges)
    }

    fn index(&self, e: (usize, usize)) -> usize {
        self.pairs.binary_search(&e).expect("host pair")
    }

    fn edges(&self, mask: u128) -> Vec<(usize, usize)> {
        (0..self.pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.pairs[i]).collect()
    }

    /// A subgraph of `mask` through pair `i` with `E_q X_I < 1`, smallest
    /// masks first.
    fn violation(&mut self, mask: u128, i: usize) -> Option<Vec<(usize, usize)>> {
        let bit = 1u128 << i;
        let rest = mask & !bit;
        let mut s = 0u128;
        loop {
            let sub = s | bit;
            let ok = match self.subsets.get(&sub) {
                Some(&ok) => ok,
                None => {
                    let ok = meets_one(&self.edges(sub), self.cfg.n, &self.cfg.q);
                    self.subsets.insert(sub, ok);
                    ok
                }
            };
            if !ok {
                return Some(self.edges(sub));
            }
            if s == rest {
                return None;
            }
            s = s.wrapping_sub(rest) & rest;
        }
    }

    fn count(&mut self, mask: u128) -> Result<BigUint> {
        if let Some(c) = self.copies.get(&mask) {
            return Ok(c.clone());
        }
        let c = count_copies(&self.graph(mask), &self.cfg.f, self.limits)?;
        self.copies.insert(mask, c.clone());
        Ok(c)
    }

    /// The state a toggle of pair `i` leads to, or `None` when the move is
    /// refused. The flag reports a repair.
    fn propose(&mut self, mask: u128, i: usize, stats: &mut ChainStats) -> Result<Option<(u128, bool)>> {
        let mv = match self.moves.get(&(mask, i)) {
            Some(&mv) => mv,
            None => {
                let mv = self.resolve(mask, i)?;
                self.moves.insert((mask, i), mv);
                mv
            }
        };
        Ok(match mv {
            Move::To(next, repaired) => Some((next, repaired)),
            Move::OverCap => {
                stats.over_cap += 1;
                None
            }
            Move::Refused => None,
        })
    }

    fn resolve(&mut self, mask: u128, i: usize) -> Result<Move> {
        let toggled = mask ^ (1u128 << i);
        if toggled & (1u128 << i) == 0 {
            return Ok(Move::To(toggled, false));
        }
        if toggled.count_ones() as usize > self.limits.exact_edge_cap {
            return Ok(Move::OverCap);
        }
        let added = self.pairs[i];
        let Some(witness) = self.violation(toggled, i) else {
            return Ok(Move::To(toggled, false));
        };
        let g = self.graph(toggled);
        let e = heaviest_edge(&g, &witness);
        if e == added {
            return Ok(Move::Refused);
        }
        let repaired = toggled & !(1u128 << self.index(e));
        // H + added - e is sparse iff no violating subset uses `added`
        if self.violation(repaired, i).is_none() {
            Ok(Move::To(repaired, true))
        } else {
            Ok(Move::Refused)
        }
    }

    /// Canonical graph6 of the host without its isolated vertices.
    fn key(&mut self, mask: u128) -> String {
        if let Some(k) = self.canon.get(&mask) {
            return k.clone();
        }
        let g = self.graph(mask);
        let k = canonical_graph6(&g.induced(&g.non_isolated()));
        self.canon.insert(mask, k.clone());
        k
    }

    /// Full sparseness check, independent of the move caches.
    fn audit(&mut self, mask: u128) -> Result<bool> {
        if let Some(&ok) = self.audited.get(&mask) {
            return Ok(ok);
        }
        let ok = is_q_sparse(&self.graph(mask), self.cfg.n, &self.cfg.q, self.limits)?.sparse;
        self.audited.insert(mask, ok);
        Ok(ok)
    }
}

fn heaviest_edge(g: &Graph, candidates: &[(usize, usize)]) -> (usize, usize) {
    let weight = |(u, v): (usize, usize)| g.degree(u) + g.degree(v);
    let mut best = candidates[0];
    for &e in &candidates[1..] {
        if weight(e) > weight(best) || (weight(e) == weight(best) && e < best) {
            best = e;
        }
    }
    best
}

fn energy(c: &BigUint) -> f64 {
    (c.to_f64().unwrap_or(f64::MAX) + 1.0).ln()
}

struct ChainOutput {
    found: BTreeMap<String, Entry>,
    stats: ChainStats,
    trace: Vec<TraceRow>,
}

fn run_chain(cfg: &SearchConfig, chain: usize, limits: &Limits) -> Result<ChainOutput> {
    let mut st = Chain {
        cfg,
        limits,
        pairs: pairs(cfg.host_cap),
        subsets: HashMap::new(),
        copies: HashMap::new(),
        moves: HashMap::new(),
        canon: HashMap::new(),
        audited: HashMap::new(),
    };
    let mut stats = ChainStats {
        chain,
        initial_temperature: 1.0,
        final_temperature: 1.0,
        accepted: 0,
        rejected: 0,
        repaired: 0,
        over_cap: 0,
        audits: 0,
    };
    let mut found: BTreeMap<String, Entry> = BTreeMap::new();
    let mut trace = Vec::new();
    let record = |found: &mut BTreeMap<String, Entry>, g6: String, c: &BigUint, step: u64| -> Result<()> {
        if !found.contains_key(&g6) {
            let e = entry(g6.clone(), c, &cfg.f, cfg.n, &cfg.q, step, chain, cfg.seed)?;
            found.insert(g6, e);
        }
        Ok(())
    };
    let mut mask = 0u128;
    let mut current = st.count(mask)?;
    let k = st.key(mask);
    record(&mut found, k, &current, 0)?;
    let m = st.pairs.len();
    if cfg.budget == 0 || m == 0 {
        return Ok(ChainOutput { found, stats, trace });
    }

    // pilot walk: temperature at which half of the downhill steps it saw
    // (the median one) would be accepted
    let mut pilot_rng = stream(cfg.seed, 1 << 32 | chain as u64);
    let mut drops = Vec::new();
    let (mut pm, mut pc) = (0u128, current.clone());
    let mut scratch = stats.clone();
    for _ in 0..PILOT_MOVES {
        let i = pilot_rng.gen_range(0..m);
        if let Some((next, _)) = st.propose(pm, i, &mut scratch)? {
            let c = st.count(next)?;
            let delta = energy(&c) - energy(&pc);
            if delta < 0.0 {
                drops.push(-delta);
            }
            pm = next;
            pc = c;
        }
    }
    drops.sort_by(f64::total_cmp);
    let mut temperature = drops.get(drops.len() / 2).map_or(1.0, |d| d / std::f64::consts::LN_2);
    stats.initial_temperature = temperature;

    let mut best = current.clone();
    let mut rng = stream(cfg.seed, chain as u64);
    for step in 1..=cfg.budget {
        let i = rng.gen_range(0..m);
        let u: f64 = rng.gen();
        let audit = rng.gen_bool(0.01);
        let Some((next, repaired)) = st.propose(mask, i, &mut stats)? else {
            stats.rejected += 1;
            continue;
        };
        let c = st.count(next)?;
        let delta = energy(&c) - energy(&current);
        if delta < 0.0 && u >= (delta / temperature).exp() {
            stats.rejected += 1;
            continue;
        }
        mask = next;
        current = c;
        stats.accepted += 1;
        stats.repaired += u64::from(repaired);
        temperature *= COOLING;
        if audit {
            stats.audits += 1;
            if !st.audit(mask)? {
                return Err(Error::precondition(format!("audit found a non-sparse state at step {step}")));
            }
        }
        if cfg.trace {
            trace.push(TraceRow {
                chain,
                step,
                graph6: to_graph6(&st.graph(mask)),
                copies: current.clone(),
                temperature,
            });
        }
        if current >= best || found.len() < cfg.top_k {
            let k = st.key(mask);
            record(&mut found, k, &current, step)?;
            if current > best {
                best = current.clone();
            }
        }
    }
    stats.final_temperature = temperature;
    Ok(ChainOutput { found, stats, trace })
}

/// Simulated annealing over hosts on `host_cap` vertices, starting from the
/// edgeless host; returns the best `top_k` distinct hosts seen.
pub fn extremal_search(cfg: &SearchConfig, limits: &Limits) -> Result<SearchResult> {
    check_feasible(cfg.n, &cfg.q)?;
    if cfg.f.edge_count() == 0 {
        return Err(Error::invalid("pattern F needs at least one edge"));
    }
    if cfg.host_cap < 1 || cfg.host_cap > cfg.n || cfg.host_cap > 16 {
        return Err(Error::invalid("host_cap must lie in 1..=min(n, 16)"));
    }
    if cfg.chains == 0 || cfg.top_k == 0 {
        return Err(Error::invalid("need at least one chain and top_k >= 1"));
    }
    let outputs = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_chain(cfg, c, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut merged: BTreeMap<String, Entry> = BTreeMap::new();
    let mut chains = Vec::new();
    let mut trace = Vec::new();
    for out in outputs {
        for (g6, e) in out.found {
            merged.entry(g6).or_insert(e);
        }
        chains.push(out.stats);
        trace.extend(out.trace);
    }
    let mut leaderboard: Vec<Entry> = merged.into_values().collect();
    leaderboard.sort_by(rank);
    leaderboard.truncate(cfg.top_k);
    Ok(SearchResult {
        leaderboard,
        config: cfg.clone(),
        cooling: COOLING,
        chains,
        trace,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub n: usize,
    pub q: RationalRoot,
    pub v_cap: usize,
    /// Non-isomorphic hosts with at least one edge that were examined.
    pub examined: usize,
    pub sparse: usize,
    pub maximizer: Option<Entry>,
    pub infeasible: bool,
}

/// Whether `h` is `q`-sparse; hosts above the exact edge cap are decided only
/// when `H` itself violates the condition.
fn sweep_sparse(h: &Graph, n: usize, q: &RationalRoot, limits: &Limits) -> Result<bool> {
    if h.edge_count() > limits.exact_edge_cap && *q < RationalRoot::one() {
        let whole = q
            .pow(h.edge_count() as u32)
            .mul_rational(&crate::exact::biguint_to_rational(&copies_in_complete(n, &h.induced(&h.non_isolated()))));
        if whole < RationalRoot::one() {
            return Ok(false);
        }
    }
    Ok(is_q_sparse(h, n, q, limits)?.sparse)
}

/// Exact maximizer of `required_L(H, F, n, q)` over all hosts on at most
/// `v_cap` vertices; ties go to the smaller canonical graph6.
pub fn exhaustive_sweep(n: usize, q: &RationalRoot, f: &Graph, v_cap: usize, limits: &Limits) -> Result<SweepResult> {
    if v_cap > 8 {
        return Err(Error::invalid("v_cap must be at most 8"));
    }
    if f.edge_count() == 0 {
        return Err(Error::invalid("pattern F needs at least one edge"));
    }
    let hosts: Vec<Graph> = catalog_up_to(v_cap.min(n))
        .into_iter()
        .flatten()
        .filter(|g| g.edge_count() > 0 && g.non_isolated().len() == g.vertex_count())
        .collect();
    let scored = hosts
        .par_iter()
        .map(|h| {
            if !sweep_sparse(h, n, q, limits)? {
                return Ok(None);
            }
            let c = count_copies(h, f, limits)?;
            Ok(Some(entry(canonical_graph6(h), &c, f, n, q, 0, 0, 0)?))
        })
        .collect::<Result<Vec<Option<Entry>>>>()?;
    let sparse: Vec<Entry> = scored.into_iter().flatten().collect();
    let count = sparse.len();
    let maximizer = sparse.into_iter().min_by(rank);
    Ok(SweepResult {
        n,
        q: q.clone(),
        v_cap,
        examined: hosts.len(),
        sparse: count,
        infeasible: maximizer.is_none(),
        maximizer,
    })
}
