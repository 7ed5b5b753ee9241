//! Named graph families used as patterns, hosts and generator outputs.

use super::Graph;

pub fn complete(n: usize) -> Graph {
    Graph::from_edge_set(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// Cycle `C_k` on vertices `0..k` (k >= 3).
pub fn cycle(k: usize) -> Graph {
    assert!(k >= 3, "cycle needs at least 3 vertices");
    Graph::from_edge_set(k, (0..k).map(|i| (i, (i + 1) % k)))
}

/// Path `P_m` with `m` edges (so `m + 1` vertices).
pub fn path(m: usize) -> Graph {
    Graph::from_edge_set(m + 1, (0..m).map(|i| (i, i + 1)))
}

/// Star `K_{1,k}` with center 0.
pub fn star(k: usize) -> Graph {
    Graph::from_edge_set(k + 1, (1..=k).map(|i| (0, i)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edge_set(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edge_set(10, outer.chain(spokes).chain(inner))
}

/// Two triangles sharing vertex 0.
pub fn bowtie() -> Graph {
    Graph::from_edge_set(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
}

/// Vertex-disjoint union, relabeling each part consecutively.
pub fn disjoint_union(parts: &[Graph]) -> Graph {
    let mut offset = 0;
    let mut edges = Vec::new();
    for g in parts {
        edges.extend(g.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
        offset += g.vertex_count();
    }
    Graph::from_edge_set(offset, edges)
}

/// Theta graph: two terminals (0 and 1) joined by internally disjoint paths
/// with the given edge lengths. At most one length may be 1.
pub fn theta(lengths: &[usize]) -> Graph {
    assert!(lengths.iter().all(|&l| l >= 1));
    assert!(lengths.iter().filter(|&&l| l == 1).count() <= 1);
    let mut edges = Vec::new();
    let mut next = 2;
    for &len in lengths {
        let mut prev = 0;
        for _ in 0..len - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    Graph::from_edge_set(next, edges)
}

/// Spider: center 0 with legs (paths) of the given edge lengths.
pub fn spider(legs: &[usize]) -> Graph {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in legs {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Graph::from_edge_set(next, edges)
}

/// `k`-th power of the path on `len + 1` vertices: `i ~ j` iff `0 < |i-j| <= k`.
pub fn path_power(len: usize, k: usize) -> Graph {
    let n = len + 1;
    Graph::from_edge_set(
        n,
        (0..n).flat_map(|i| (i + 1..n.min(i + k + 1)).map(move |j| (i, j))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(cycle(6).edge_count(), 6);
        assert_eq!(path(3).vertex_count(), 4);
        assert_eq!(petersen().edge_count(), 15);
        assert!(petersen().degrees().iter().all(|&d| d == 3));
        assert_eq!(theta(&[2, 2, 3]).vertex_count(), 6);
        assert_eq!(theta(&[2, 2, 3]).edge_count(), 7);
        assert_eq!(spider(&[1, 2, 3]).edge_count(), 6);
        assert_eq!(path_power(4, 2).edge_count(), 4 + 3);
        assert_eq!(disjoint_union(&[complete(3), complete(3)]).edge_count(), 6);
    }
}
