//! Simple undirected graphs on dense vertex ids `0..n`.

pub mod aut;
pub mod canon;
pub mod catalog;
pub mod density;
pub mod families;
pub mod io;

use std::collections::VecDeque;
use std::fmt;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// Largest vertex count accepted from untrusted text.
pub const MAX_VERTICES: usize = 1 << 14;

/// Immutable simple graph: bitset adjacency rows plus the sorted edge list.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically, so
/// two graphs are equal exactly when they have the same vertex count and
/// edge set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![VertexSet::new(n); n],
            edges: Vec::new(),
        }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if g.adj[a].contains(b) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
            g.adj[a].insert(b);
            g.adj[b].insert(a);
            g.edges.push((a.min(b), a.max(b)));
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but silently merges duplicates.
    pub fn from_edge_set<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            assert!(a != b && a < n && b < n, "invalid edge ({a}, {b})");
            if !g.adj[a].contains(b) {
                g.adj[a].insert(b);
                g.adj[b].insert(a);
                g.edges.push((a.min(b), a.max(b)));
            }
        }
        g.edges.sort_unstable();
        g
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    /// Position of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Vertices of positive degree.
    pub fn non_isolated(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Cross-checks the adjacency rows against the edge list.
    pub fn check_consistency(&self) -> bool {
        let from_adj: usize = self.adj.iter().map(VertexSet::len).sum();
        from_adj == 2 * self.edges.len()
            && self
                .edges
                .iter()
                .all(|&(u, v)| u < v && self.adj[u].contains(v) && self.adj[v].contains(u))
            && self.edges.windows(2).all(|w| w[0] < w[1])
            && (0..self.n).all(|v| !self.adj[v].contains(v))
    }

    /// Subgraph induced on `vertices`, relabeled to `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::from_edge_set(vertices.len(), edges)
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.adj[v].intersection_len(set)).sum::<usize>() / 2
    }

    /// The subgraph formed by a set of edges (given as indices into
    /// [`Graph::edges`]) and the vertices they span, relabeled compactly in
    /// increasing original id. Returns the graph and the original ids.
    pub fn edge_subgraph(&self, edge_ids: &[usize]) -> (Graph, Vec<usize>) {
        let mut verts: Vec<usize> = edge_ids
            .iter()
            .flat_map(|&i| [self.edges[i].0, self.edges[i].1])
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let pos = |x: usize| verts.binary_search(&x).unwrap();
        let edges: Vec<(usize, usize)> = edge_ids
            .iter()
            .map(|&i| (pos(self.edges[i].0), pos(self.edges[i].1)))
            .collect();
        (Graph::from_edge_set(verts.len(), edges), verts)
    }

    /// Relabels by `perm`, mapping vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        Graph::from_edge_set(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        if u != v && !g.adj[u].contains(v) {
            g.adj[u].insert(v);
            g.adj[v].insert(u);
            let e = (u.min(v), u.max(v));
            let at = g.edges.binary_search(&e).unwrap_err();
            g.edges.insert(at, e);
        }
        g
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        if let Some(i) = g.edge_index(u, v) {
            g.adj[u].remove(v);
            g.adj[v].remove(u);
            g.edges.remove(i);
        }
        g
    }

    pub fn with_edge_toggled(&self, u: usize, v: usize) -> Graph {
        if self.has_edge(u, v) {
            self.without_edge(u, v)
        } else {
            self.with_edge(u, v)
        }
    }

    /// Adds `extra` isolated vertices.
    pub fn with_isolated(&self, extra: usize) -> Graph {
        Graph::from_edge_set(self.n + extra, self.edges.iter().copied())
    }

    /// Connected components, each sorted, in order of smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for y in self.adj[x].iter() {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edge_count() == self.n - 1 && self.is_connected()
    }

    /// Breadth-first order from `root`, visiting neighbors in increasing id.
    pub fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in self.adj[x].iter() {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }

    /// Compact edge list representation `[(u,v), ...]` for diagnostics.
    pub fn edge_string(&self) -> String {
        let parts: Vec<String> = self.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        format!("[{}]", parts.join(" "))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {})", self.n, self.edge_string())
    }
}
