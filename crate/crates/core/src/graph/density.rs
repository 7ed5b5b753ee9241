//! Density `e/v` and maximum density over subgraphs.
//!
//! The maximum of `e(U)/|U|` is found exactly: every achievable value is a
//! fraction `e/k` with `k <= v` and `e <= min(m, C(k,2))`, so we binary-search
//! that finite candidate list with a max-closure oracle. For a guess `a/b`
//! the oracle builds the network `s -> edge (cap b)`, `edge -> endpoints
//! (cap inf)`, `vertex -> t (cap a)`; the best closure has value
//! `max_U b*e(U) - a*|U| = b*m - maxflow`, which is positive iff some `U`
//! is strictly denser than `a/b`.

use num_bigint::BigInt;
use serde::Serialize;

use super::Graph;
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::exact::Rational;

/// A density value `numerator/denominator` attained by `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityValue {
    pub numerator: usize,
    pub denominator: usize,
    pub witness: Vec<usize>,
}

impl DensityValue {
    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.numerator), BigInt::from(self.denominator))
    }
}

/// `e_J / v_J`.
pub fn density(g: &Graph) -> Result<Rational> {
    if g.vertex_count() == 0 {
        return Err(Error::precondition("density of the empty graph is undefined"));
    }
    Ok(Rational::new(
        BigInt::from(g.edge_count()),
        BigInt::from(g.vertex_count()),
    ))
}

/// Maximum density via parametric max-flow.
pub fn max_density(g: &Graph) -> Result<DensityValue> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::precondition("maximum density of the empty graph is undefined"));
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(DensityValue {
            numerator: 0,
            denominator: 1,
            witness: vec![0],
        });
    }
    let candidates = density_candidates(n, m);
    // smallest index whose value is not beaten by any subgraph
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    // candidates[hi] = largest possible value; never beaten
    while lo < hi {
        let mid = (lo + hi) / 2;
        let (a, b) = candidates[mid];
        if closure_gain(g, a, b).0 > 0 {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let (a, b) = candidates[lo];
    // lo >= 1 since m > 0 beats density 0
    let (pa, pb) = candidates[lo - 1];
    let (_, witness) = closure_gain(g, pa, pb);
    let ids: Vec<usize> = witness.iter().collect();
    let e = g.edges_within(&witness);
    debug_assert_eq!(e * b, a * ids.len(), "witness must attain the optimum");
    Ok(DensityValue {
        numerator: e,
        denominator: ids.len(),
        witness: ids,
    })
}

/// Exhaustive maximum density over all nonempty vertex subsets (v <= 20).
pub fn max_density_enumerate(g: &Graph) -> Result<DensityValue> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::precondition("maximum density of the empty graph is undefined"));
    }
    if n > 20 {
        return Err(Error::ResourceGuard(format!(
            "subset enumeration limited to 20 vertices, got {n}"
        )));
    }
    let mut best = (0usize, 1usize, 1u32);
    for mask in 1u32..(1u32 << n) {
        let k = mask.count_ones() as usize;
        let e = g
            .edges()
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count();
        // strictly better, or equal density with a larger set
        let lhs = e * best.1;
        let rhs = best.0 * k;
        if lhs > rhs || (lhs == rhs && k > best.1) {
            best = (e, k, mask);
        }
    }
    let witness: Vec<usize> = (0..n).filter(|&v| best.2 >> v & 1 == 1).collect();
    Ok(DensityValue {
        numerator: best.0,
        denominator: best.1,
        witness,
    })
}

/// Sorted distinct fractions `e/k`.
fn density_candidates(n: usize, m: usize) -> Vec<(usize, usize)> {
    let mut c: Vec<(usize, usize)> = Vec::new();
    for k in 1..=n {
        let emax = m.min(k * (k - 1) / 2);
        c.extend((0..=emax).map(|e| (e, k)));
    }
    c.sort_by(|&(a, b), &(x, y)| (a * y).cmp(&(x * b)));
    c.dedup_by(|p, q| p.0 * q.1 == q.0 * p.1);
    c
}

/// `(max_U b*e(U) - a*|U|, maximizing U)` via max-flow / min-cut.
fn closure_gain(g: &Graph, a: usize, b: usize) -> (i64, VertexSet) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let source = 0;
    let sink = 1;
    let edge_node = |i: usize| 2 + i;
    let vertex_node = |v: usize| 2 + m + v;
    let mut net = FlowNetwork::new(2 + m + n);
    let inf = i64::MAX / 4;
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        net.add_edge(source, edge_node(i), b as i64);
        net.add_edge(edge_node(i), vertex_node(u), inf);
        net.add_edge(edge_node(i), vertex_node(v), inf);
    }
    for v in 0..n {
        net.add_edge(vertex_node(v), sink, a as i64);
    }
    let flow = net.max_flow(source, sink);
    let reach = net.reachable_from(source);
    let witness = VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| reach[vertex_node(v)]));
    ((b * m) as i64 - flow, witness)
}

/// Dinic's algorithm on an adjacency-list residual network.
struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<i32> {
        let mut level = vec![-1; self.head.len()];
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, pushed: i64, level: &[i32], it: &mut [usize]) -> i64 {
        if u == t {
            return pushed;
        }
        while it[u] < self.head[u].len() {
            let e = self.head[u][it[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let d = self.augment(v, t, pushed.min(self.cap[e]), level, it);
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return total;
            }
            let mut it = vec![0; self.head.len()];
            loop {
                let f = self.augment(s, t, i64::MAX, &level, &mut it);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }

    fn reachable_from(&self, s: usize) -> Vec<bool> {
        self.levels(s).iter().map(|&l| l >= 0).collect()
    }
}
