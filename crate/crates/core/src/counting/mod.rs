//! Exact subgraph counts.
//!
//! The generic oracle counts labeled copies (injective edge-preserving maps)
//! by backtracking and divides by `aut(J)`. Specialized counters for cliques,
//! cycles, paths and trees must agree with it.

pub(crate) mod embed;
pub mod packing;
pub mod special;

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

pub use packing::{packing_number, Packing, PackingMode};
pub use special::{
    count_cliques, count_cycles, count_labeled_tree, count_paths, count_xy_paths, degeneracy_order, gamma, Gamma,
};

use crate::error::{Error, Result};
use crate::graph::aut::automorphism_count;
use crate::graph::{families, Graph};
use crate::limits::Limits;
use embed::{Budget, Plan};

fn check_pattern(j: &Graph) -> Result<()> {
    if j.vertex_count() == 0 {
        return Err(Error::invalid("pattern must have at least one vertex"));
    }
    Ok(())
}

/// `Ñ(G, J)`: injective maps `V(J) -> V(G)` sending edges to edges.
pub fn count_labeled(g: &Graph, j: &Graph, limits: &Limits) -> Result<BigUint> {
    check_pattern(j)?;
    Plan::new(g, j, None).count(&Budget::new(limits.node_budget, "labeled count"))
}

/// `N(G, J)`: subgraphs of `G` isomorphic to `J`.
pub fn count_copies(g: &Graph, j: &Graph, limits: &Limits) -> Result<BigUint> {
    let labeled = count_labeled(g, j, limits)?;
    let aut = automorphism_count(j);
    let (q, r) = labeled.div_rem(&aut);
    debug_assert!(r == BigUint::default(), "aut(J) divides the labeled count");
    Ok(q)
}

/// Calls `f` with every labeled copy, as a map indexed by pattern vertex,
/// in a fixed order. Stops early when `f` breaks.
pub fn for_each_embedding<F>(g: &Graph, j: &Graph, limits: &Limits, mut f: F) -> Result<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    check_pattern(j)?;
    Plan::new(g, j, None).for_each(&Budget::new(limits.node_budget, "embedding search"), &mut f)
}

/// Whether `G` contains a copy of `J`; stops at the first embedding.
pub fn contains(g: &Graph, j: &Graph, limits: &Limits) -> Result<bool> {
    let mut found = false;
    for_each_embedding(g, j, limits, |_| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// An unlabeled copy: sorted host vertex ids and sorted host edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Copy {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// All copies of `J` in `G`, in order of first discovery.
pub fn copies(g: &Graph, j: &Graph, limits: &Limits) -> Result<Vec<Copy>> {
    let mut seen: HashSet<Copy> = HashSet::new();
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_embedding(g, j, limits, |map| {
        let mut vertices = map.to_vec();
        vertices.sort_unstable();
        let mut edges: Vec<usize> = j
            .edges()
            .iter()
            .map(|&(a, b)| g.edge_index(map[a], map[b]).expect("embedding maps edges to edges"))
            .collect();
        edges.sort_unstable();
        let c = Copy { vertices, edges };
        if seen.insert(c.clone()) {
            if out.len() == limits.copy_cap {
                overflow = true;
                return ControlFlow::Break(());
            }
            out.push(c);
        }
        ControlFlow::Continue(())
    })?;
    if overflow {
        return Err(Error::ResourceGuard(format!(
            "more than {} copies; raise the copy cap",
            limits.copy_cap
        )));
    }
    Ok(out)
}

/// A pattern to count: a named family or an explicit graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Clique(usize),
    Cycle(usize),
    /// Path with the given number of edges.
    Path(usize),
    Graph(Graph),
}

impl Pattern {
    pub fn graph(&self) -> Graph {
        match self {
            Pattern::Clique(r) => families::complete(*r),
            Pattern::Cycle(k) => families::cycle(*k),
            Pattern::Path(m) => families::path(*m),
            Pattern::Graph(g) => g.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Pattern::Clique(r) => format!("K_{r}"),
            Pattern::Cycle(k) => format!("C_{k}"),
            Pattern::Path(m) => format!("P_{m}"),
            Pattern::Graph(g) => format!("graph6:{}", crate::graph::io::to_graph6(g)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Specialized,
    GenericOracle,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountResult {
    pub pattern: String,
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub count: BigUint,
    pub labeled: bool,
    pub method: Method,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Counts `pattern` in `g`, with the specialized counter when one applies
/// unless `generic` is set. With `labeled`, counts labeled copies.
pub fn count_pattern(g: &Graph, pattern: &Pattern, labeled: bool, generic: bool, limits: &Limits) -> Result<CountResult> {
    let start = Instant::now();
    let j = pattern.graph();
    check_pattern(&j)?;
    let special = !generic && (j.is_tree() || !matches!(pattern, Pattern::Graph(_)));
    let count = if !special {
        if labeled {
            count_labeled(g, &j, limits)?
        } else {
            count_copies(g, &j, limits)?
        }
    } else {
        let unlabeled = match pattern {
            Pattern::Clique(r) => Some(count_cliques(g, *r, limits)?),
            Pattern::Cycle(k) => Some(count_cycles(g, *k, limits)?),
            Pattern::Path(m) => Some(count_paths(g, *m, limits)?),
            Pattern::Graph(_) => None,
        };
        match unlabeled {
            Some(c) if labeled => c * automorphism_count(&j),
            Some(c) => c,
            None => {
                let l = count_labeled_tree(g, &j, limits)?;
                if labeled {
                    l
                } else {
                    l / automorphism_count(&j)
                }
            }
        }
    };
    Ok(CountResult {
        pattern: pattern.describe(),
        count,
        labeled,
        method: if special { Method::Specialized } else { Method::GenericOracle },
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn copies_examples() {
        assert_eq!(count_copies(&complete(5), &complete(3), &lim()).unwrap(), big(10));
        assert_eq!(count_copies(&cycle(5), &complete(3), &lim()).unwrap(), big(0));
        assert_eq!(count_copies(&complete(4), &cycle(4), &lim()).unwrap(), big(3));
    }

    #[test]
    fn labeled_examples() {
        assert_eq!(count_labeled(&complete(3), &path(2), &lim()).unwrap(), big(6));
        assert_eq!(count_labeled(&path(2), &path(1), &lim()).unwrap(), big(4));
        assert_eq!(count_labeled(&star(3), &path(2), &lim()).unwrap(), big(6));
    }

    #[test]
    fn isolated_pattern_vertices() {
        // an edge plus an isolated vertex in K_4: 12 ordered edges, 2 spare vertices
        let j = path(1).with_isolated(1);
        assert_eq!(count_labeled(&complete(4), &j, &lim()).unwrap(), big(24));
        assert_eq!(count_copies(&complete(4), &j, &lim()).unwrap(), big(12));
        assert_eq!(count_copies(&complete(3), &Graph::empty(2), &lim()).unwrap(), big(3));
        assert_eq!(count_copies(&complete(3), &Graph::empty(4), &lim()).unwrap(), big(0));
    }

    #[test]
    fn special_examples() {
        assert_eq!(count_cliques(&complete(6), 4, &lim()).unwrap(), big(15));
        assert_eq!(count_cliques(&petersen(), 3, &lim()).unwrap(), big(0));
        assert_eq!(count_cliques(&bowtie(), 3, &lim()).unwrap(), big(2));
        assert_eq!(count_cycles(&complete(4), 4, &lim()).unwrap(), big(3));
        assert_eq!(count_cycles(&cycle(7), 7, &lim()).unwrap(), big(1));
        assert_eq!(count_cycles(&cycle(7), 5, &lim()).unwrap(), big(0));
        assert_eq!(count_xy_paths(&cycle(6), 0, 3, 3, &lim()).unwrap(), big(2));
        assert_eq!(count_xy_paths(&complete(3), 0, 1, 1, &lim()).unwrap(), big(1));
        assert_eq!(count_xy_paths(&complete(4), 1, 3, 2, &lim()).unwrap(), big(2));
        assert!(count_xy_paths(&complete(4), 1, 1, 2, &lim()).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&cycle(6), 3, &lim()).unwrap().value, big(2));
        assert_eq!(gamma(&cycle(6), 3, &lim()).unwrap().pair, Some((0, 3)));
        assert_eq!(gamma(&complete(4), 2, &lim()).unwrap().value, big(2));
        assert_eq!(gamma(&Graph::empty(5), 2, &lim()).unwrap().value, big(0));
        assert_eq!(gamma(&Graph::empty(1), 2, &lim()).unwrap().pair, None);
    }

    #[test]
    fn packing_examples() {
        let k3 = complete(3);
        let exact = |h: &Graph, j: &Graph| packing_number(h, j, PackingMode::Exact, &lim()).unwrap().size;
        assert_eq!(exact(&complete(4), &k3), 1);
        assert_eq!(exact(&complete(7), &k3), 7);
        assert_eq!(exact(&cycle(6), &path(2)), 3);
        assert_eq!(exact(&cycle(5), &k3), 0);
        let p = packing_number(&complete(7), &k3, PackingMode::Exact, &lim()).unwrap();
        let mut used = HashSet::new();
        for c in &p.copies {
            for e in &c.edges {
                assert!(used.insert(*e), "copies overlap");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Limits {
            node_budget: 10,
            ..Limits::default()
        };
        let err = count_labeled(&complete(9), &path(4), &tight).unwrap_err();
        assert!(matches!(err, Error::ResourceGuard(_)));
    }
}
