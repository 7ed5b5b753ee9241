//! Counters specialized to cliques, cycles, paths and trees.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::embed::{Budget, Plan};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::limits::Limits;

fn sum_parts(parts: Vec<u128>) -> BigUint {
    parts.into_iter().map(BigUint::from).sum()
}

/// Vertices in degeneracy order (repeatedly a minimum-degree vertex,
/// smallest id on ties).
pub fn degeneracy_order(h: &Graph) -> Vec<usize> {
    let n = h.vertex_count();
    let mut deg = h.degrees();
    let mut gone = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !gone[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertex left");
        gone[v] = true;
        order.push(v);
        for w in h.neighbors(v).iter() {
            if !gone[w] {
                deg[w] -= 1;
            }
        }
    }
    order
}

/// `N(H, K_r)`.
pub fn count_cliques(h: &Graph, r: usize, limits: &Limits) -> Result<BigUint> {
    match r {
        0 => return Err(Error::invalid("clique size must be at least 1")),
        1 => return Ok(BigUint::from(h.vertex_count())),
        2 => return Ok(BigUint::from(h.edge_count())),
        _ => {}
    }
    let n = h.vertex_count();
    let order = degeneracy_order(h);
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let forward: Vec<VertexSet> = (0..n)
        .map(|v| VertexSet::from_iter_with_capacity(n, h.neighbors(v).iter().filter(|&w| rank[w] > rank[v])))
        .collect();
    let budget = Budget::new(limits.node_budget, "clique count");
    let parts: Vec<u128> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut ticks = 0;
            let c = clique_rec(&forward, &forward[v], r - 1, &budget, &mut ticks)?;
            budget.flush(&mut ticks)?;
            Ok(c)
        })
        .collect::<Result<_>>()?;
    Ok(sum_parts(parts))
}

fn clique_rec(forward: &[VertexSet], cand: &VertexSet, k: usize, budget: &Budget, ticks: &mut u64) -> Result<u128> {
    if k == 1 {
        return Ok(cand.len() as u128);
    }
    if cand.len() < k {
        return Ok(0);
    }
    let mut total = 0;
    for u in cand.iter() {
        budget.tick(ticks)?;
        let next = cand.intersection(&forward[u]);
        total += clique_rec(forward, &next, k - 1, budget, ticks)?;
    }
    Ok(total)
}

/// `N(H, C_k)`: each cycle is counted once from its smallest vertex `s`,
/// traversed toward the smaller of its two neighbors of `s`.
pub fn count_cycles(h: &Graph, k: usize, limits: &Limits) -> Result<BigUint> {
    if k < 3 {
        return Err(Error::invalid("cycle length must be at least 3"));
    }
    let n = h.vertex_count();
    if k > n {
        return Ok(BigUint::default());
    }
    let budget = Budget::new(limits.node_budget, "cycle count");
    let parts: Vec<u128> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut used = VertexSet::new(n);
            used.insert(s);
            let mut ticks = 0;
            let mut total = 0;
            for v1 in h.neighbors(s).iter().filter(|&v| v > s) {
                used.insert(v1);
                total += cycle_rec(h, s, v1, v1, k - 2, &mut used, &budget, &mut ticks)?;
                used.remove(v1);
            }
            budget.flush(&mut ticks)?;
            Ok(total)
        })
        .collect::<Result<_>>()?;
    Ok(sum_parts(parts))
}

#[allow(clippy::too_many_arguments)]
fn cycle_rec(
    h: &Graph,
    s: usize,
    first: usize,
    cur: usize,
    left: usize,
    used: &mut VertexSet,
    budget: &Budget,
    ticks: &mut u64,
) -> Result<u128> {
    if left == 0 {
        return Ok(u128::from(cur > first && h.has_edge(cur, s)));
    }
    let mut total = 0;
    for w in h.neighbors(cur).iter() {
        if w <= s || used.contains(w) {
            continue;
        }
        budget.tick(ticks)?;
        used.insert(w);
        total += cycle_rec(h, s, first, w, left - 1, used, budget, ticks)?;
        used.remove(w);
    }
    Ok(total)
}

/// Number of simple walks with `len` edges starting at `start`, added into
/// `ends[last vertex]`.
fn paths_from(
    h: &Graph,
    cur: usize,
    left: usize,
    used: &mut VertexSet,
    ends: &mut [u128],
    budget: &Budget,
    ticks: &mut u64,
) -> Result<()> {
    if left == 0 {
        ends[cur] += 1;
        return Ok(());
    }
    for w in h.neighbors(cur).iter() {
        if used.contains(w) {
            continue;
        }
        budget.tick(ticks)?;
        used.insert(w);
        paths_from(h, w, left - 1, used, ends, budget, ticks)?;
        used.remove(w);
    }
    Ok(())
}

fn endpoint_counts(h: &Graph, x: usize, len: usize, budget: &Budget) -> Result<Vec<u128>> {
    let n = h.vertex_count();
    let mut used = VertexSet::new(n);
    used.insert(x);
    let mut ends = vec![0u128; n];
    let mut ticks = 0;
    paths_from(h, x, len, &mut used, &mut ends, budget, &mut ticks)?;
    budget.flush(&mut ticks)?;
    Ok(ends)
}

/// `N(H, P_m)` for the path with `m` edges.
pub fn count_paths(h: &Graph, m: usize, limits: &Limits) -> Result<BigUint> {
    let n = h.vertex_count();
    if m == 0 {
        return Ok(BigUint::from(n));
    }
    let budget = Budget::new(limits.node_budget, "path count");
    let parts: Vec<u128> = (0..n)
        .into_par_iter()
        .map(|x| Ok(endpoint_counts(h, x, m, &budget)?.iter().sum()))
        .collect::<Result<_>>()?;
    Ok(sum_parts(parts) / 2u32)
}

/// Simple paths with `len` edges joining `x` and `y`.
pub fn count_xy_paths(h: &Graph, x: usize, y: usize, len: usize, limits: &Limits) -> Result<BigUint> {
    let n = h.vertex_count();
    if x == y {
        return Err(Error::invalid("path endpoints must differ"));
    }
    if x >= n || y >= n {
        return Err(Error::invalid(format!("endpoint out of range for {n} vertices")));
    }
    if len == 0 {
        return Err(Error::invalid("path length must be at least 1"));
    }
    let budget = Budget::new(limits.node_budget, "path count");
    Ok(BigUint::from(endpoint_counts(h, x, len, &budget)?[y]))
}

/// The path statistic `gamma(len)` with the lexicographically first pair
/// attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gamma {
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub value: BigUint,
    pub pair: Option<(usize, usize)>,
}

pub fn gamma(h: &Graph, len: usize, limits: &Limits) -> Result<Gamma> {
    if len == 0 {
        return Err(Error::invalid("path length must be at least 1"));
    }
    let n = h.vertex_count();
    if n < 2 {
        return Ok(Gamma {
            value: BigUint::default(),
            pair: None,
        });
    }
    let budget = Budget::new(limits.node_budget, "gamma");
    let best: Vec<(u128, usize)> = (0..n - 1)
        .into_par_iter()
        .map(|x| {
            let ends = endpoint_counts(h, x, len, &budget)?;
            let mut top = (0u128, x + 1);
            for (y, &c) in ends.iter().enumerate().skip(x + 1) {
                if c > top.0 {
                    top = (c, y);
                }
            }
            Ok(top)
        })
        .collect::<Result<_>>()?;
    let mut out = (0u128, 0usize, 1usize);
    for (x, &(c, y)) in best.iter().enumerate() {
        if c > out.0 {
            out = (c, x, y);
        }
    }
    Ok(Gamma {
        value: BigUint::from(out.0),
        pair: Some((out.1, out.2)),
    })
}

/// `Ñ(H, T)` for a tree `T`, pruning host vertices that do not admit even a
/// homomorphism of the pattern subtree hanging below each position.
pub fn count_labeled_tree(h: &Graph, t: &Graph, limits: &Limits) -> Result<BigUint> {
    if !t.is_tree() {
        return Err(Error::invalid("pattern is not a tree"));
    }
    let domains = subtree_domains(h, t);
    let plan = Plan::new(h, t, Some(&domains));
    plan.count(&Budget::new(limits.node_budget, "tree count"))
}

/// Per pattern vertex, the host vertices with a positive number of
/// homomorphisms of its subtree (rooted as in the placement order) that send
/// it there, after a degree filter.
fn subtree_domains(h: &Graph, t: &Graph) -> Vec<VertexSet> {
    let n = h.vertex_count();
    let (order, _) = super::embed::placement_order(t);
    let mut pos = vec![0; t.vertex_count()];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let mut homs: Vec<Vec<u128>> = vec![Vec::new(); t.vertex_count()];
    for &x in order.iter().rev() {
        let children: Vec<usize> = t.neighbors(x).iter().filter(|&c| pos[c] > pos[x]).collect();
        homs[x] = (0..n)
            .map(|y| {
                if h.degree(y) < t.degree(x) {
                    return 0;
                }
                children.iter().fold(1u128, |acc, &c| {
                    let s: u128 = h.neighbors(y).iter().fold(0u128, |a, z| a.saturating_add(homs[c][z]));
                    acc.saturating_mul(s)
                })
            })
            .collect();
    }
    homs.iter()
        .map(|row| VertexSet::from_iter_with_capacity(n, (0..n).filter(|&y| row[y] > 0)))
        .collect()
}
