//! Edge-disjoint packings of copies.

use serde::Serialize;

use super::embed::Budget;
use super::{copies, Copy};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Serialize)]
pub struct Packing {
    pub size: usize,
    pub mode: PackingMode,
    /// The chosen copies.
    pub copies: Vec<Copy>,
}

/// `nu(H, J)` (exact) or a greedy lower bound taking copies in discovery order.
pub fn packing_number(h: &Graph, j: &Graph, mode: PackingMode, limits: &Limits) -> Result<Packing> {
    if j.edge_count() == 0 {
        return Err(Error::invalid("packing pattern needs at least one edge"));
    }
    let all = copies(h, j, limits)?;
    let m = h.edge_count();
    let masks: Vec<VertexSet> = all
        .iter()
        .map(|c| VertexSet::from_iter_with_capacity(m, c.edges.iter().copied()))
        .collect();
    let chosen = match mode {
        PackingMode::Greedy => greedy(&masks, m),
        PackingMode::Exact => {
            let mut search = Search {
                masks: &masks,
                ej: j.edge_count(),
                m,
                best: greedy(&masks, m),
                budget: Budget::new(limits.node_budget, "exact packing"),
                ticks: 0,
            };
            let live: Vec<usize> = (0..masks.len()).collect();
            let mut taken = Vec::new();
            search.branch(&live, &VertexSet::new(m), &mut taken)?;
            search.budget.flush(&mut search.ticks)?;
            search.best
        }
    };
    Ok(Packing {
        size: chosen.len(),
        mode,
        copies: chosen.into_iter().map(|i| all[i].clone()).collect(),
    })
}

fn greedy(masks: &[VertexSet], m: usize) -> Vec<usize> {
    let mut used = VertexSet::new(m);
    let mut out = Vec::new();
    for (i, c) in masks.iter().enumerate() {
        if c.is_disjoint(&used) {
            used.union_with(c);
            out.push(i);
        }
    }
    out
}

struct Search<'a> {
    masks: &'a [VertexSet],
    ej: usize,
    m: usize,
    best: Vec<usize>,
    budget: Budget,
    ticks: u64,
}

impl Search<'_> {
    /// `live` are copies disjoint from every taken copy and from every
    /// banned edge; `blocked` is the union of taken and banned edges.
    fn branch(&mut self, live: &[usize], blocked: &VertexSet, taken: &mut Vec<usize>) -> Result<()> {
        self.budget.tick(&mut self.ticks)?;
        if taken.len() > self.best.len() {
            self.best = taken.clone();
        }
        if live.is_empty() {
            return Ok(());
        }
        let mut cover = VertexSet::new(self.m);
        for &c in live {
            cover.union_with(&self.masks[c]);
        }
        if taken.len() + cover.len() / self.ej <= self.best.len() {
            return Ok(());
        }
        let e = cover.first().expect("live copies cover an edge");
        for &c in live.iter().filter(|&&c| self.masks[c].contains(e)) {
            let mut next_blocked = blocked.clone();
            next_blocked.union_with(&self.masks[c]);
            let next: Vec<usize> = live
                .iter()
                .copied()
                .filter(|&d| self.masks[d].is_disjoint(&next_blocked))
                .collect();
            taken.push(c);
            self.branch(&next, &next_blocked, taken)?;
            taken.pop();
        }
        // leave `e` uncovered
        let mut next_blocked = blocked.clone();
        next_blocked.insert(e);
        let next: Vec<usize> = live.iter().copied().filter(|&d| !self.masks[d].contains(e)).collect();
        self.branch(&next, &next_blocked, taken)
    }
}
