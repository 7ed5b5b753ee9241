//! Exhaustive catalogs of small graphs up to isomorphism, by canonical
//! augmentation: a child `P + v` (new vertex `v` joined to a subset of `P`)
//! is kept only when `v` lies in the automorphism orbit of the vertex its
//! canonical labeling places last, so each isomorphism class arises from a
//! single parent class. Remaining duplicates (from one parent) are removed by
//! canonical form.

use std::collections::BTreeSet;

use super::aut::automorphism_mapping;
use super::canon::canonical_form;
use super::io::{parse_graph6, to_graph6};
use super::Graph;

/// One representative (in canonical labeling) of every graph on exactly `n`
/// vertices, ordered by edge count and then graph6.
pub fn graphs_on(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for _ in 0..n {
        level = augment(&level);
    }
    level
}

/// `catalog[k]` holds all graphs on exactly `k` vertices, `k <= max_n`.
pub fn catalog_up_to(max_n: usize) -> Vec<Vec<Graph>> {
    let mut out = vec![vec![Graph::empty(0)]];
    for _ in 0..max_n {
        let next = augment(out.last().unwrap());
        out.push(next);
    }
    out
}

fn augment(parents: &[Graph]) -> Vec<Graph> {
    let mut seen: BTreeSet<(usize, String)> = BTreeSet::new();
    for p in parents {
        let k = p.vertex_count();
        for mask in 0u64..(1u64 << k) {
            let mut edges: Vec<(usize, usize)> = p.edges().to_vec();
            edges.extend((0..k).filter(|&u| mask >> u & 1 == 1).map(|u| (u, k)));
            let child = Graph::from_edge_set(k + 1, edges);
            let canon = canonical_form(&child);
            let last = canon.last_vertex().expect("nonempty child");
            if last != k && automorphism_mapping(&child, k, last).is_none() {
                continue;
            }
            seen.insert((child.edge_count(), to_graph6(&canon.graph)));
        }
    }
    seen.into_iter()
        .map(|(_, s)| parse_graph6(&s).expect("own encoding"))
        .collect()
}

/// Non-isomorphic trees on exactly `n` vertices, by adding leaves to the
/// trees on `n - 1` vertices; ordered by graph6 like [`graphs_on`].
pub fn trees_on(n: usize) -> Vec<Graph> {
    if n <= 1 {
        return graphs_on(n);
    }
    let mut level = vec![Graph::empty(1)];
    for k in 1..n {
        let mut seen = BTreeSet::new();
        for t in &level {
            for u in 0..k {
                let child = Graph::from_edge_set(k + 1, t.edges().iter().copied().chain([(u, k)]));
                seen.insert(to_graph6(&canonical_form(&child).graph));
            }
        }
        level = seen.into_iter().map(|s| parse_graph6(&s).expect("own encoding")).collect();
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequence() {
        // number of graphs on n unlabeled vertices
        let expected = [1usize, 1, 2, 4, 11, 34, 156];
        let cat = catalog_up_to(6);
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(cat[n].len(), *want, "n = {n}");
        }
    }

    #[test]
    fn tree_counts() {
        let expected = [(1, 1), (2, 1), (3, 1), (4, 2), (5, 3), (6, 6), (7, 11), (8, 23), (9, 47), (10, 106)];
        for (n, want) in expected {
            let trees = trees_on(n);
            assert_eq!(trees.len(), want, "n = {n}");
            assert!(trees.iter().all(Graph::is_tree));
        }
        let filtered: Vec<Graph> = graphs_on(6).into_iter().filter(Graph::is_tree).collect();
        assert_eq!(trees_on(6), filtered);
    }
}
