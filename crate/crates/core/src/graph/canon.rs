//! Canonical labeling by individualization-refinement.
//!
//! Every leaf of the search tree is a discrete coloring, i.e. a labeling;
//! the canonical form is the relabeled graph whose graph6 bit string is
//! lexicographically largest over all leaves. Subtrees are skipped when their
//! root is in the same orbit as an explored sibling under automorphisms found
//! so far that fix the current prefix pointwise.

use super::aut::{individualize, initial_coloring, is_discrete, Coloring};
use super::io::to_graph6;
use super::Graph;

#[derive(Debug, Clone)]
pub struct Canonical {
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    pub graph: Graph,
}

impl Canonical {
    pub fn graph6(&self) -> String {
        to_graph6(&self.graph)
    }

    /// The vertex placed last by the canonical labeling.
    pub fn last_vertex(&self) -> Option<usize> {
        let n = self.labeling.len();
        self.labeling.iter().position(|&p| p + 1 == n)
    }
}

pub fn canonical_form(g: &Graph) -> Canonical {
    let mut search = Search {
        g,
        first: None,
        best: None,
        autos: Vec::new(),
    };
    let mut prefix = Vec::new();
    search.visit(initial_coloring(g), &mut prefix);
    let (labeling, _) = search.best.expect("at least one leaf");
    let graph = g.permuted(&labeling);
    Canonical { labeling, graph }
}

/// Canonical graph6 string; equal for two graphs iff they are isomorphic.
pub fn canonical_graph6(g: &Graph) -> String {
    canonical_form(g).graph6()
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_graph6(a) == canonical_graph6(b)
}

type Certificate = Vec<u64>;

struct Search<'a> {
    g: &'a Graph,
    first: Option<(Vec<usize>, Certificate)>,
    best: Option<(Vec<usize>, Certificate)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, colors: Coloring, prefix: &mut Vec<usize>) {
        if is_discrete(&colors) {
            self.leaf(colors.iter().map(|&c| c as usize).collect());
            return;
        }
        let cell = target_cell(&colors);
        let mut explored: Vec<usize> = Vec::new();
        for &x in &cell {
            if !explored.is_empty() && self.equivalent_to_explored(x, &explored, prefix) {
                continue;
            }
            prefix.push(x);
            self.visit(individualize(self.g, &colors, x), prefix);
            prefix.pop();
            explored.push(x);
        }
    }

    fn equivalent_to_explored(&self, x: usize, explored: &[usize], prefix: &[usize]) -> bool {
        let n = self.g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut any = false;
        for gamma in &self.autos {
            if prefix.iter().any(|&v| gamma[v] != v) {
                continue;
            }
            any = true;
            for v in 0..n {
                let (a, b) = (find(&mut parent, v), find(&mut parent, gamma[v]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rx = find(&mut parent, x);
        explored.iter().any(|&y| find(&mut parent, y) == rx)
    }

    fn leaf(&mut self, labeling: Vec<usize>) {
        let cert = certificate(self.g, &labeling);
        let Some((first_lab, first_cert)) = &self.first else {
            self.first = Some((labeling.clone(), cert.clone()));
            self.best = Some((labeling, cert));
            return;
        };
        if cert == *first_cert {
            let gamma = automorphism_between(first_lab, &labeling);
            self.autos.push(gamma);
            return;
        }
        let (best_lab, best_cert) = self.best.as_ref().unwrap();
        match cert.cmp(best_cert) {
            std::cmp::Ordering::Equal => {
                let gamma = automorphism_between(best_lab, &labeling);
                self.autos.push(gamma);
            }
            std::cmp::Ordering::Greater => self.best = Some((labeling, cert)),
            std::cmp::Ordering::Less => {}
        }
    }
}

/// `v -> lab1^{-1}(lab2(v))`.
fn automorphism_between(lab1: &[usize], lab2: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; lab1.len()];
    for (v, &p) in lab1.iter().enumerate() {
        inv[p] = v;
    }
    lab2.iter().map(|&p| inv[p]).collect()
}

/// Smallest nontrivial cell, ties broken by color.
fn target_cell(colors: &[u32]) -> Vec<usize> {
    let k = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut sizes = vec![0usize; k];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    let c = (0..k)
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))
        .expect("non-discrete coloring has a nontrivial cell");
    (0..colors.len()).filter(|&v| colors[v] as usize == c).collect()
}

/// Upper-triangle adjacency bits of the relabeled graph in graph6 order,
/// packed most-significant-first so `Vec<u64>` order is bit-string order.
fn certificate(g: &Graph, labeling: &[usize]) -> Certificate {
    let n = g.vertex_count();
    let mut at = vec![0usize; n];
    for (v, &p) in labeling.iter().enumerate() {
        at[p] = v;
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut words = vec![0u64; bits.div_ceil(64)];
    let mut k = 0;
    for j in 1..n {
        let row = g.neighbors(at[j]);
        for i in 0..j {
            if row.contains(at[i]) {
                words[k / 64] |= 1u64 << (63 - k % 64);
            }
            k += 1;
        }
    }
    words
}
