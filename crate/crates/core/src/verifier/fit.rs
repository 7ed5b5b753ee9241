//! Fit decomposition of labeled tree copies.
//!
//! For a labeled copy `w_0, ..., w_j` of a tree `F` (in breadth-first order)
//! the residual degree of index `i` is `|N_H(w_i) \ {w_0..w_{i-1}}|`. Index
//! `i` is big when the residual degree is at least `sqrt(eps) d` (decided as
//! `r^2 >= eps d^2`) and small otherwise. The fitting expansion `R̂` is the
//! copy plus every residual edge at a big index.
//!
//! The partially labeled shape of `R̂` is determined by: the degree vector,
//! the extra edges between labeled vertices, and for each unlabeled vertex
//! the set of big indices it is joined to. Two unlabeled vertices with the
//! same set are interchangeable, which fixes the symmetry factor when copies
//! of a shape are counted directly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{count_labeled, for_each_embedding};
use crate::error::{Error, Result};
use crate::exact::{factorial, int, Rational, Verdict};
use crate::graph::Graph;
use crate::limits::Limits;

/// A tree with a breadth-first labeling.
#[derive(Debug, Clone)]
pub struct TreeOrder {
    /// Original vertex at each index.
    pub order: Vec<usize>,
    /// Parent index (none for the root).
    pub parent: Vec<Option<usize>>,
    /// Child counts `f_i`.
    pub children: Vec<usize>,
    /// Whether the given labeling was already breadth-first.
    pub relabeled: bool,
}

impl TreeOrder {
    pub fn new(f: &Graph) -> Result<Self> {
        if !f.is_tree() {
            return Err(Error::invalid("F must be a tree"));
        }
        let v = f.vertex_count();
        let identity_ok = (1..v).all(|i| {
            let lower: Vec<usize> = f.neighbors(i).iter().filter(|&u| u < i).collect();
            lower.len() == 1 && (i == 1 || lower[0] >= smallest_lower(f, i - 1))
        });
        let order = if identity_ok { (0..v).collect() } else { f.bfs_order(0) };
        let mut pos = vec![0; v];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        let parent: Vec<Option<usize>> = order
            .iter()
            .enumerate()
            .map(|(i, &x)| f.neighbors(x).iter().map(|y| pos[y]).find(|&p| p < i))
            .collect();
        let mut children = vec![0; v];
        for p in parent.iter().flatten() {
            children[*p] += 1;
        }
        Ok(TreeOrder {
            order,
            parent,
            children,
            relabeled: !identity_ok,
        })
    }

    fn len(&self) -> usize {
        self.order.len()
    }
}

fn smallest_lower(f: &Graph, i: usize) -> usize {
    f.neighbors(i).iter().find(|&u| u < i).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    /// Child counts `f_i`.
    pub f: Vec<usize>,
    pub d: Vec<usize>,
    pub big: Vec<bool>,
    /// Sum of `d_i` over big indices.
    pub big_sum: usize,
}

/// Shape of a fitting expansion, up to relabeling of unlabeled vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FitClass {
    pub d: Vec<usize>,
    pub big: Vec<bool>,
    /// Non-tree edges `(i, k)`, `i < k`, between labeled vertices.
    pub labeled_extra: Vec<(usize, usize)>,
    /// Big-index neighbor sets of the unlabeled vertices, sorted.
    pub unlabeled: Vec<Vec<usize>>,
}

impl FitClass {
    /// The partially labeled graph: labeled vertices `0..=j` first, then the
    /// unlabeled ones in key order.
    pub fn graph(&self, tree: &TreeOrder) -> Graph {
        let labeled = self.d.len();
        let mut edges: Vec<(usize, usize)> = tree
            .parent
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.map(|p| (p, k)))
            .collect();
        edges.extend(self.labeled_extra.iter().copied());
        for (u, set) in self.unlabeled.iter().enumerate() {
            edges.extend(set.iter().map(|&i| (i, labeled + u)));
        }
        Graph::from_edge_set(labeled + self.unlabeled.len(), edges)
    }

    /// Automorphisms fixing every labeled vertex: permutations of unlabeled
    /// vertices with equal neighbor sets.
    pub fn symmetry(&self) -> BigUint {
        let mut runs: BTreeMap<&Vec<usize>, u64> = BTreeMap::new();
        for s in &self.unlabeled {
            *runs.entry(s).or_default() += 1;
        }
        runs.values().map(|&m| factorial(m)).product()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitRecord {
    /// `w_i`, the host vertex at each breadth-first index.
    pub copy: Vec<usize>,
    pub residual: Vec<usize>,
    pub profile: DegreeProfile,
    /// `b_i = |N_H(w_i) ∩ ({w_0..w_{i-1}} \ {p(w_i)})|`.
    pub back_edges: Vec<usize>,
    pub r_hat_vertices: Vec<usize>,
    pub r_hat_edges: Vec<(usize, usize)>,
    pub class: FitClass,
}

/// `eps d^2`, checked against `Δ_F^2`.
fn squared_threshold(f: &Graph, eps: &Rational, d: &Rational) -> Result<Rational> {
    if *eps <= int(0u32) || *d <= int(0u32) {
        return Err(Error::invalid("eps and d must be positive"));
    }
    let thr = eps * d * d;
    let delta = int(f.max_degree() as u64);
    if thr <= &delta * &delta {
        return Err(Error::invalid(format!(
            "need sqrt(eps) d > max degree of F = {}",
            f.max_degree()
        )));
    }
    Ok(thr)
}

fn is_big(residual: usize, thr: &Rational) -> bool {
    let r = int(residual as u64);
    &r * &r >= *thr
}

fn decompose(h: &Graph, tree: &TreeOrder, w: &[usize], thr: &Rational) -> FitRecord {
    let j1 = tree.len();
    let mut position = BTreeMap::new();
    for (i, &x) in w.iter().enumerate() {
        position.insert(x, i);
    }
    let mut residual = Vec::with_capacity(j1);
    let mut back_edges = Vec::with_capacity(j1);
    let mut big = Vec::with_capacity(j1);
    let mut d = Vec::with_capacity(j1);
    let mut extra: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut labeled_extra = Vec::new();
    let mut r_hat: BTreeSet<(usize, usize)> = BTreeSet::new();
    for k in 1..j1 {
        let p = tree.parent[k].expect("non-root index has a parent");
        let (a, b) = (w[p], w[k]);
        r_hat.insert((a.min(b), a.max(b)));
    }
    for i in 0..j1 {
        let earlier = |x: usize| position.get(&x).is_some_and(|&k| k < i);
        let res: Vec<usize> = h.neighbors(w[i]).iter().filter(|&x| !earlier(x)).collect();
        let parent_host = tree.parent[i].map(|p| w[p]);
        let b = h
            .neighbors(w[i])
            .iter()
            .filter(|&x| earlier(x) && Some(x) != parent_host)
            .count();
        let is_b = is_big(res.len(), thr);
        if is_b {
            for &u in &res {
                r_hat.insert((w[i].min(u), w[i].max(u)));
                match position.get(&u) {
                    Some(&k) if tree.parent[k] != Some(i) => labeled_extra.push((i, k)),
                    Some(_) => {}
                    None => extra.entry(u).or_default().push(i),
                }
            }
        }
        d.push(if is_b { res.len() } else { tree.children[i] });
        big.push(is_b);
        residual.push(res.len());
        back_edges.push(b);
    }
    labeled_extra.sort_unstable();
    let mut unlabeled: Vec<Vec<usize>> = extra.values().cloned().collect();
    unlabeled.sort();
    let mut r_hat_vertices: Vec<usize> = w.to_vec();
    r_hat_vertices.extend(extra.keys().copied());
    r_hat_vertices.sort_unstable();
    let big_sum = (0..j1).filter(|&i| big[i]).map(|i| d[i]).sum();
    FitRecord {
        copy: w.to_vec(),
        residual,
        profile: DegreeProfile {
            f: tree.children.clone(),
            d: d.clone(),
            big: big.clone(),
            big_sum,
        },
        back_edges,
        r_hat_vertices,
        r_hat_edges: r_hat.into_iter().collect(),
        class: FitClass {
            d,
            big,
            labeled_extra,
            unlabeled,
        },
    }
}

fn check_copy(h: &Graph, f: &Graph, copy: &[usize]) -> Result<()> {
    if copy.len() != f.vertex_count() {
        return Err(Error::invalid("copy must map every vertex of F"));
    }
    let mut seen = BTreeSet::new();
    for &x in copy {
        if x >= h.vertex_count() || !seen.insert(x) {
            return Err(Error::invalid("copy is not an injection into V(H)"));
        }
    }
    if let Some(&(a, b)) = f.edges().iter().find(|&&(a, b)| !h.has_edge(copy[a], copy[b])) {
        return Err(Error::invalid(format!("edge ({a}, {b}) of F is not mapped to an edge of H")));
    }
    Ok(())
}

/// The unique fitting expansion of the labeled copy `copy` (indexed by
/// vertices of `F`).
pub fn fit_decompose(h: &Graph, f: &Graph, copy: &[usize], eps: &Rational, d: &Rational) -> Result<FitRecord> {
    let tree = TreeOrder::new(f)?;
    let thr = squared_threshold(f, eps, d)?;
    check_copy(h, f, copy)?;
    let w: Vec<usize> = tree.order.iter().map(|&x| copy[x]).collect();
    Ok(decompose(h, &tree, &w, &thr))
}

/// The `(d, big)` profile a labeled image `w` forces on any class it fits:
/// big positions carry their residual degree, small ones their child count.
fn shape(h: &Graph, tree: &TreeOrder, w: &[usize], thr: &Rational) -> (Vec<usize>, Vec<bool>) {
    let mut d = Vec::with_capacity(w.len());
    let mut big = Vec::with_capacity(w.len());
    for (i, &x) in w.iter().enumerate() {
        let res = h.neighbors(x).iter().filter(|y| !w[..i].contains(y)).count();
        let b = is_big(res, thr);
        d.push(if b { res } else { tree.children[i] });
        big.push(b);
    }
    (d, big)
}

/// Ways to complete the labeled image `w` to an embedding of the class
/// graph: injective images for the unlabeled vertices, each adjacent to the
/// images of its neighbor set and outside `w`.
fn extensions(h: &Graph, class: &FitClass, w: &[usize]) -> BigUint {
    let candidates: Vec<Vec<usize>> = class
        .unlabeled
        .iter()
        .map(|set| {
            (0..h.vertex_count())
                .filter(|x| !w.contains(x) && set.iter().all(|&i| h.has_edge(w[i], *x)))
                .collect()
        })
        .collect();
    let mut pool: Vec<usize> = candidates.iter().flatten().copied().collect();
    pool.sort_unstable();
    pool.dedup();
    let local: Vec<Vec<usize>> = candidates
        .iter()
        .map(|c| c.iter().map(|x| pool.binary_search(x).expect("pooled")).collect())
        .collect();
    if local.iter().any(Vec::is_empty) {
        return BigUint::zero();
    }
    if pool.len() <= 128 {
        assign_masked(&local, 0, 0, &mut HashMap::new())
    } else {
        assign(&local, 0, &mut vec![false; pool.len()])
    }
}

fn assign_masked(cands: &[Vec<usize>], k: usize, used: u128, memo: &mut HashMap<(usize, u128), BigUint>) -> BigUint {
    if k == cands.len() {
        return BigUint::one();
    }
    if let Some(c) = memo.get(&(k, used)) {
        return c.clone();
    }
    let mut total = BigUint::zero();
    for &x in &cands[k] {
        if used >> x & 1 == 0 {
            total += assign_masked(cands, k + 1, used | 1 << x, memo);
        }
    }
    memo.insert((k, used), total.clone());
    total
}

fn assign(cands: &[Vec<usize>], k: usize, used: &mut [bool]) -> BigUint {
    if k == cands.len() {
        return BigUint::one();
    }
    let mut total = BigUint::zero();
    for &x in &cands[k] {
        if !used[x] {
            used[x] = true;
            total += assign(cands, k + 1, used);
            used[x] = false;
        }
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct FitClassCount {
    pub class: FitClass,
    /// Labeled copies of `F` whose fitting expansion has this shape.
    pub grouped: u64,
    /// `N*(H, R)`: copies of the shape that fit `H`, counted directly.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub direct: BigUint,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitPartition {
    /// `Ñ(H, F)` from the generic counter.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub labeled_copies: BigUint,
    /// `sum_R N*(H, R)` from the direct counts.
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub class_total: BigUint,
    pub classes: Vec<FitClassCount>,
    /// Every class's grouped count equals its direct count.
    pub unique: bool,
    pub relabeled: bool,
    pub verdict: Verdict,
}

/// Checks `Ñ(H,F) = sum_R N*(H,R)`: every labeled copy is decomposed and
/// grouped by shape. Each shape's fitting copies are also counted directly,
/// by embedding its labeled part into `H` and counting the injective
/// placements of its unlabeled vertices.
pub fn verify_fit_partition(h: &Graph, f: &Graph, eps: &Rational, d: &Rational, limits: &Limits) -> Result<FitPartition> {
    let tree = TreeOrder::new(f)?;
    let thr = squared_threshold(f, eps, d)?;
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut overflow = false;
    for_each_embedding(h, f, limits, |m| {
        if maps.len() == limits.copy_cap {
            overflow = true;
            return ControlFlow::Break(());
        }
        maps.push(tree.order.iter().map(|&x| m[x]).collect());
        ControlFlow::Continue(())
    })?;
    if overflow {
        return Err(Error::ResourceGuard(format!(
            "more than {} labeled copies; raise the copy cap",
            limits.copy_cap
        )));
    }
    let classes: Vec<FitClass> = maps.par_iter().map(|w| decompose(h, &tree, w, &thr).class).collect();
    let mut grouped: BTreeMap<FitClass, u64> = BTreeMap::new();
    for c in classes {
        *grouped.entry(c).or_default() += 1;
    }
    let grouped: Vec<(FitClass, u64)> = grouped.into_iter().collect();
    let mut by_shape: HashMap<(&[usize], &[bool]), Vec<usize>> = HashMap::new();
    for (idx, (class, _)) in grouped.iter().enumerate() {
        by_shape.entry((&class.d, &class.big)).or_default().push(idx);
    }
    let labeled = tree.order.len();
    let spine = Graph::from_edge_set(labeled, (1..labeled).map(|k| (tree.parent[k].expect("parent"), k)));
    let mut direct = vec![BigUint::zero(); grouped.len()];
    for_each_embedding(h, &spine, limits, |m| {
        let (d, big) = shape(h, &tree, m, &thr);
        for &idx in by_shape.get(&(&d[..], &big[..])).into_iter().flatten() {
            let class = &grouped[idx].0;
            if class.labeled_extra.iter().all(|&(i, k)| h.has_edge(m[i], m[k])) {
                direct[idx] += extensions(h, class, m);
            }
        }
        ControlFlow::Continue(())
    })?;
    let counted: Vec<FitClassCount> = grouped
        .into_iter()
        .zip(direct)
        .map(|((class, n), fitting)| FitClassCount {
            direct: fitting / class.symmetry(),
            class,
            grouped: n,
        })
        .collect();
    let labeled_copies = count_labeled(h, f, limits)?;
    let class_total: BigUint = counted.iter().map(|c| c.direct.clone()).sum();
    let unique = counted.iter().all(|c| c.direct == BigUint::from(c.grouped));
    let verdict = Verdict::from_bool(unique && class_total == labeled_copies && maps.len() as u64 == u64::try_from(&labeled_copies).unwrap_or(u64::MAX));
    Ok(FitPartition {
        labeled_copies,
        class_total,
        classes: counted,
        unique,
        relabeled: tree.relabeled,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;
    use crate::graph::families::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn star_edge_examples() {
        // sqrt(eps) d = 3 with eps = 1, d = 3
        let (eps, d) = (rational(1, 1), rational(3, 1));
        let h = star(4);
        let leaf_center = fit_decompose(&h, &path(1), &[1, 0], &eps, &d).unwrap();
        assert_eq!(leaf_center.residual, vec![1, 3]);
        assert_eq!(leaf_center.profile.big, vec![false, true]);
        assert_eq!(leaf_center.profile.d, vec![1, 3]);
        let center_leaf = fit_decompose(&h, &path(1), &[0, 1], &eps, &d).unwrap();
        assert_eq!(center_leaf.profile.big, vec![true, false]);
        assert_eq!(center_leaf.profile.d, vec![4, 0]);
        assert_eq!(center_leaf.residual[1], 0);
        assert_eq!(center_leaf.r_hat_edges.len(), 4);
        let single = fit_decompose(&path(1), &path(1), &[0, 1], &rational(1, 1), &rational(2, 1)).unwrap();
        assert_eq!(single.profile.big, vec![false, false]);
        assert_eq!(single.r_hat_edges, vec![(0, 1)]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (eps, d) = (rational(1, 1), rational(1, 1));
        assert!(fit_decompose(&star(4), &path(1), &[0, 1], &eps, &d).is_err());
        let (eps, d) = (rational(1, 1), rational(3, 1));
        assert!(fit_decompose(&star(4), &path(1), &[1, 2], &eps, &d).is_err());
        assert!(fit_decompose(&star(4), &cycle(3), &[0, 1, 2], &eps, &d).is_err());
    }

    #[test]
    fn partition_examples() {
        let (eps, d) = (rational(1, 1), rational(3, 1));
        let p = verify_fit_partition(&star(4), &path(1), &eps, &d, &lim()).unwrap();
        assert_eq!(p.labeled_copies, BigUint::from(8u32));
        assert_eq!(p.classes.len(), 2);
        assert_eq!(p.verdict, Verdict::Pass);
        let p = verify_fit_partition(&cycle(5), &path(2), &eps, &d, &lim()).unwrap();
        assert_eq!(p.labeled_copies, BigUint::from(10u32));
        assert_eq!(p.classes.len(), 1);
        assert!(p.classes[0].class.big.iter().all(|b| !b));
        let p = verify_fit_partition(&Graph::empty(4), &path(2), &eps, &d, &lim()).unwrap();
        assert_eq!(p.class_total, BigUint::default());
        assert_eq!(p.verdict, Verdict::Pass);
    }

    #[test]
    fn back_edges_sum_to_extra_induced_edges() {
        let h = petersen().with_edge(0, 2).with_edge(0, 7);
        let f = path(3);
        let (eps, d) = (rational(1, 2), rational(4, 1));
        for_each_embedding(&h, &f, &lim(), |m| {
            let rec = fit_decompose(&h, &f, m, &eps, &d).unwrap();
            let induced = h.induced(m).edge_count();
            assert_eq!(rec.back_edges.iter().sum::<usize>(), induced - f.edge_count());
            let again = fit_decompose(&h, &f, m, &eps, &d).unwrap();
            assert_eq!(again.r_hat_edges, rec.r_hat_edges);
            ControlFlow::Continue(())
        })
        .unwrap();
    }

    #[test]
    fn non_bfs_labeling_is_rederived() {
        // path 1-0-2 labeled with the middle vertex first is breadth-first;
        // path 0-2-1 is not
        let f = Graph::from_edges(3, [(0, 2), (2, 1)]).unwrap();
        let t = TreeOrder::new(&f).unwrap();
        assert!(t.relabeled);
        assert_eq!(t.order, vec![0, 2, 1]);
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        assert!(!TreeOrder::new(&g).unwrap().relabeled);
    }
}
