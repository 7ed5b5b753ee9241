//! Peeling the copy hypergraph down to minimum degree `a`.

use rand::Rng;
use serde::Serialize;

use crate::counting::copies;
use crate::error::Result;
use crate::exact::{int, RationalRoot, Verdict};
use crate::graph::Graph;
use crate::limits::Limits;

#[derive(Debug, Clone, Serialize)]
pub struct PeelResult {
    /// Surviving vertices, sorted.
    pub survivors: Vec<usize>,
    /// Deleted vertices in deletion order.
    pub removed: Vec<usize>,
    /// Copies of `F` in `H` (hyperedges before peeling).
    pub copies: usize,
    /// Hyperedges left among the survivors.
    pub remaining: usize,
    /// Smallest hypergraph degree among survivors.
    pub min_degree: Option<usize>,
    /// `N(H,F) > a v_H`.
    pub hypothesis: bool,
    /// When the hypothesis holds, whether the survivors are nonempty.
    pub verdict: Verdict,
}

struct Hypergraph {
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    alive_edge: Vec<bool>,
    alive: Vec<bool>,
    degree: Vec<usize>,
}

impl Hypergraph {
    fn new(n: usize, edges: Vec<Vec<usize>>) -> Self {
        let mut incident = vec![Vec::new(); n];
        let mut degree = vec![0; n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incident[v].push(i);
                degree[v] += 1;
            }
        }
        Hypergraph {
            alive_edge: vec![true; edges.len()],
            edges,
            incident,
            alive: vec![true; n],
            degree,
        }
    }

    fn delete(&mut self, v: usize) {
        self.alive[v] = false;
        for k in 0..self.incident[v].len() {
            let e = self.incident[v][k];
            if std::mem::replace(&mut self.alive_edge[e], false) {
                for &w in &self.edges[e] {
                    self.degree[w] -= 1;
                }
            }
        }
    }

    fn low(&self, v: usize, a: &RationalRoot) -> bool {
        self.alive[v] && RationalRoot::from_integer(self.degree[v] as u64) < *a
    }
}

/// Deletes vertices of degree below `a` (smallest id first) from the
/// hypergraph whose edges are the vertex sets of copies of `F` in `H`.
pub fn peel_min_degree(h: &Graph, f: &Graph, a: &RationalRoot, limits: &Limits) -> Result<PeelResult> {
    peel_by(h, f, a, limits, |eligible| eligible[0])
}

/// Same peeling with a caller-chosen vertex among the eligible ones each
/// step; the surviving set does not depend on the choice.
pub fn peel_random_order<R: Rng>(h: &Graph, f: &Graph, a: &RationalRoot, limits: &Limits, rng: &mut R) -> Result<PeelResult> {
    peel_by(h, f, a, limits, |eligible| eligible[rng.gen_range(0..eligible.len())])
}

fn peel_by<P>(h: &Graph, f: &Graph, a: &RationalRoot, limits: &Limits, mut pick: P) -> Result<PeelResult>
where
    P: FnMut(&[usize]) -> usize,
{
    let n = h.vertex_count();
    let list = copies(h, f, limits)?;
    let total = list.len();
    let mut hg = Hypergraph::new(n, list.into_iter().map(|c| c.vertices).collect());
    let mut removed = Vec::new();
    loop {
        let eligible: Vec<usize> = (0..n).filter(|&v| hg.low(v, a)).collect();
        if eligible.is_empty() {
            break;
        }
        let v = pick(&eligible);
        hg.delete(v);
        removed.push(v);
    }
    let survivors: Vec<usize> = (0..n).filter(|&v| hg.alive[v]).collect();
    let remaining = hg.alive_edge.iter().filter(|&&x| x).count();
    let min_degree = survivors.iter().map(|&v| hg.degree[v]).min();
    let bound = a.mul_rational(&int(n as u64));
    let hypothesis = RationalRoot::from_integer(total as u64) > bound;
    let verdict = if hypothesis {
        Verdict::from_bool(!survivors.is_empty())
    } else {
        Verdict::NotApplicable
    };
    Ok(PeelResult {
        survivors,
        removed,
        copies: total,
        remaining,
        min_degree,
        hypothesis,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a(v: u64) -> RationalRoot {
        RationalRoot::from_integer(v)
    }

    #[test]
    fn peel_examples() {
        let lim = Limits::default();
        let r = peel_min_degree(&complete(4), &complete(3), &a(3), &lim).unwrap();
        assert_eq!(r.survivors, vec![0, 1, 2, 3]);
        assert_eq!(r.min_degree, Some(3));
        let r = peel_min_degree(&complete(4), &complete(3), &a(4), &lim).unwrap();
        assert!(r.survivors.is_empty());
        let tri_pendant = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let r = peel_min_degree(&tri_pendant, &complete(3), &a(1), &lim).unwrap();
        assert_eq!(r.survivors, vec![0, 1, 2]);
        assert_eq!(r.removed, vec![3]);
    }

    #[test]
    fn order_does_not_matter() {
        let lim = Limits::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = disjoint_union(&[complete(5), bowtie(), cycle(4)]);
        for num in 1..8u64 {
            let threshold = RationalRoot::from_rational(crate::exact::rational(num as i64, 2));
            let fixed = peel_min_degree(&h, &complete(3), &threshold, &lim).unwrap();
            for _ in 0..5 {
                let random = peel_random_order(&h, &complete(3), &threshold, &lim, &mut rng).unwrap();
                assert_eq!(fixed.survivors, random.survivors);
            }
        }
    }
}
