//! Backtracking enumeration of injective edge-preserving maps `J -> G`.
//!
//! Pattern vertices are placed one at a time; the candidates for a position
//! are the host vertices adjacent to the images of all earlier pattern
//! neighbors, intersected with a per-position mask (degree filter plus an
//! optional caller-supplied domain), minus the vertices already used.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::exact::falling;
use crate::graph::Graph;

const FLUSH_EVERY: u64 = 4096;

/// A node budget shared by all tasks of one computation.
///
/// Charges are flushed in batches, so whether the budget is exceeded depends
/// only on the total work, never on scheduling.
pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
    what: &'static str,
}

impl Budget {
    pub(crate) fn new(limit: u64, what: &'static str) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            what,
        }
    }

    pub(crate) fn charge(&self, n: u64) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before.saturating_add(n) > self.limit {
            return Err(Error::ResourceGuard(format!(
                "{} exceeded the node budget of {}",
                self.what, self.limit
            )));
        }
        Ok(())
    }

    pub(crate) fn tick(&self, local: &mut u64) -> Result<()> {
        *local += 1;
        if *local >= FLUSH_EVERY {
            let n = std::mem::take(local);
            self.charge(n)?;
        }
        Ok(())
    }

    pub(crate) fn flush(&self, local: &mut u64) -> Result<()> {
        let n = std::mem::take(local);
        if n > 0 {
            self.charge(n)?;
        }
        Ok(())
    }
}

/// Placement order: repeatedly the unplaced vertex with the most placed
/// neighbors, then highest degree, then smallest id. Isolated vertices last.
pub(crate) fn placement_order(j: &Graph) -> (Vec<usize>, usize) {
    let v = j.vertex_count();
    let core: Vec<usize> = j.non_isolated();
    let mut placed = VertexSet::new(v);
    let mut order = Vec::with_capacity(v);
    while order.len() < core.len() {
        let next = core
            .iter()
            .copied()
            .filter(|&x| !placed.contains(x))
            .max_by_key(|&x| {
                (
                    j.neighbors(x).intersection_len(&placed),
                    j.degree(x),
                    std::cmp::Reverse(x),
                )
            })
            .expect("unplaced core vertex");
        placed.insert(next);
        order.push(next);
    }
    let k = order.len();
    order.extend((0..v).filter(|&x| j.degree(x) == 0));
    (order, k)
}

pub(crate) struct Plan<'a> {
    g: &'a Graph,
    /// Pattern vertex at each position.
    pub(crate) order: Vec<usize>,
    /// Number of leading positions holding non-isolated pattern vertices.
    core: usize,
    /// Earlier positions adjacent (in the pattern) to each position.
    back: Vec<Vec<usize>>,
    allowed: Vec<VertexSet>,
}

impl<'a> Plan<'a> {
    /// `domains[x]`, when given, restricts the image of pattern vertex `x`.
    pub(crate) fn new(g: &'a Graph, j: &Graph, domains: Option<&[VertexSet]>) -> Self {
        let (order, core) = placement_order(j);
        let mut pos = vec![0; j.vertex_count()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let mut b: Vec<usize> = j.neighbors(x).iter().map(|y| pos[y]).filter(|&p| p < i).collect();
                b.sort_unstable();
                b
            })
            .collect();
        let n = g.vertex_count();
        let allowed = order
            .iter()
            .map(|&x| {
                let need = j.degree(x);
                let mut s = VertexSet::from_iter_with_capacity(n, (0..n).filter(|&y| g.degree(y) >= need));
                if let Some(d) = domains {
                    s.intersect_with(&d[x]);
                }
                s
            })
            .collect();
        Plan {
            g,
            order,
            core,
            back,
            allowed,
        }
    }

    fn candidates(&self, depth: usize, image: &[usize], used: &VertexSet, out: &mut VertexSet) {
        out.clone_from(&self.allowed[depth]);
        for &b in &self.back[depth] {
            out.intersect_with(self.g.neighbors(image[b]));
        }
        out.difference_with(used);
    }

    fn scratch(&self) -> (Vec<usize>, VertexSet, Vec<VertexSet>) {
        let n = self.g.vertex_count();
        (
            vec![0; self.order.len()],
            VertexSet::new(n),
            vec![VertexSet::new(n); self.order.len()],
        )
    }

    /// Number of injective homomorphisms, parallel over the first position.
    pub(crate) fn count(&self, budget: &Budget) -> Result<BigUint> {
        let n = self.g.vertex_count() as u64;
        let v = self.order.len() as u64;
        if v > n {
            return Ok(BigUint::default());
        }
        let tail = falling(n - self.core as u64, v - self.core as u64);
        if self.core == 0 {
            return Ok(tail);
        }
        let roots: Vec<usize> = self.allowed[0].iter().collect();
        if self.core == 1 {
            return Ok(tail * roots.len());
        }
        let parts: Vec<u128> = roots
            .par_iter()
            .map(|&r| {
                let (mut image, mut used, mut bufs) = self.scratch();
                let mut ticks = 0;
                image[0] = r;
                used.insert(r);
                let c = self.count_dfs(1, &mut image, &mut used, &mut bufs[1..], &mut ticks, budget)?;
                budget.flush(&mut ticks)?;
                Ok(c)
            })
            .collect::<Result<_>>()?;
        let total: BigUint = parts.into_iter().map(BigUint::from).sum();
        Ok(total * tail)
    }

    fn count_dfs(
        &self,
        depth: usize,
        image: &mut [usize],
        used: &mut VertexSet,
        bufs: &mut [VertexSet],
        ticks: &mut u64,
        budget: &Budget,
    ) -> Result<u128> {
        let (cur, rest) = bufs.split_first_mut().expect("buffer per position");
        self.candidates(depth, image, used, cur);
        if depth + 1 == self.core {
            return Ok(cur.len() as u128);
        }
        let mut total = 0u128;
        for x in cur.iter() {
            budget.tick(ticks)?;
            image[depth] = x;
            used.insert(x);
            total += self.count_dfs(depth + 1, image, used, rest, ticks, budget)?;
            used.remove(x);
        }
        Ok(total)
    }

    /// Visits every embedding sequentially as a map indexed by pattern vertex.
    pub(crate) fn for_each<F>(&self, budget: &Budget, f: &mut F) -> Result<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.order.len() > self.g.vertex_count() {
            return Ok(());
        }
        let (mut image, mut used, mut bufs) = self.scratch();
        let mut map = vec![0; self.order.len()];
        let mut ticks = 0;
        let _ = self.visit_dfs(0, &mut image, &mut used, &mut bufs, &mut map, &mut ticks, budget, f)?;
        budget.flush(&mut ticks)
    }

    #[allow(clippy::too_many_arguments)]
    fn visit_dfs<F>(
        &self,
        depth: usize,
        image: &mut [usize],
        used: &mut VertexSet,
        bufs: &mut [VertexSet],
        map: &mut [usize],
        ticks: &mut u64,
        budget: &Budget,
        f: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            for (i, &x) in self.order.iter().enumerate() {
                map[x] = image[i];
            }
            return Ok(f(map));
        }
        let (cur, rest) = bufs.split_first_mut().expect("buffer per position");
        self.candidates(depth, image, used, cur);
        for x in cur.iter() {
            budget.tick(ticks)?;
            image[depth] = x;
            used.insert(x);
            let flow = self.visit_dfs(depth + 1, image, used, rest, map, ticks, budget, f)?;
            used.remove(x);
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}
