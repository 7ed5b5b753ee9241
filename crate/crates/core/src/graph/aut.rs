//! Color refinement and automorphism counting.
//!
//! Colorings are always canonically named: after each refinement round a
//! vertex's new color is the rank of its signature `(old color, sorted
//! neighbor colors)` among all distinct signatures. Two colorings of the same
//! graph related by an automorphism therefore refine to colorings related by
//! the same automorphism, with identical color ids. That lets a search match
//! source and target colorings cell-for-cell.

use num_bigint::BigUint;
use num_traits::One;

use super::Graph;

/// Colors are canonical ranks `0..k`.
pub type Coloring = Vec<u32>;

fn rename<T: Ord + Clone>(values: &[T]) -> Coloring {
    let mut distinct: Vec<T> = values.to_vec();
    distinct.sort();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).unwrap() as u32)
        .collect()
}

fn color_count(c: &[u32]) -> usize {
    c.iter().map(|&x| x as usize + 1).max().unwrap_or(0)
}

/// Refines `initial` (any isomorphism-invariant labels) to the coarsest
/// equitable coloring below it.
pub fn refine(g: &Graph, initial: &[u32]) -> Coloring {
    let mut colors = rename(initial);
    let mut k = color_count(&colors);
    loop {
        let signatures: Vec<(u32, Vec<u32>)> = (0..g.vertex_count())
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).iter().map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rename(&signatures);
        let nk = color_count(&next);
        colors = next;
        if nk == k {
            return colors;
        }
        k = nk;
    }
}

/// Degree coloring refined to equitability; orders vertices by degree and
/// then by neighbor-degree multiset.
pub fn initial_coloring(g: &Graph) -> Coloring {
    let degrees: Vec<u32> = g.degrees().iter().map(|&d| d as u32).collect();
    refine(g, &degrees)
}

/// Gives `v` its own color just above its former cell, then refines.
pub fn individualize(g: &Graph, colors: &[u32], v: usize) -> Coloring {
    let split: Vec<u32> = colors
        .iter()
        .enumerate()
        .map(|(u, &c)| 2 * c + u32::from(u == v))
        .collect();
    refine(g, &split)
}

pub fn is_discrete(colors: &[u32]) -> bool {
    color_count(colors) == colors.len()
}

fn histogram(colors: &[u32]) -> Vec<usize> {
    let mut h = vec![0; color_count(colors)];
    for &c in colors {
        h[c as usize] += 1;
    }
    h
}

/// Smallest color whose cell has more than one vertex, with its members.
pub(crate) fn first_nontrivial_cell(colors: &[u32]) -> Option<Vec<usize>> {
    let h = histogram(colors);
    let c = h.iter().position(|&s| s > 1)?;
    Some((0..colors.len()).filter(|&v| colors[v] as usize == c).collect())
}

/// Searches for an automorphism mapping each vertex of color `x` in `src` to
/// a vertex of color `x` in `tgt`.
fn extend(g: &Graph, src: &[u32], tgt: &[u32]) -> Option<Vec<usize>> {
    if histogram(src) != histogram(tgt) {
        return None;
    }
    if is_discrete(src) {
        let mut by_color = vec![0usize; src.len()];
        for (w, &c) in tgt.iter().enumerate() {
            by_color[c as usize] = w;
        }
        let map: Vec<usize> = src.iter().map(|&c| by_color[c as usize]).collect();
        let ok = g.edges().iter().all(|&(u, v)| g.has_edge(map[u], map[v]));
        return ok.then_some(map);
    }
    let cell = first_nontrivial_cell(src)?;
    let x = cell[0];
    let color = src[x];
    let s2 = individualize(g, src, x);
    for y in (0..tgt.len()).filter(|&y| tgt[y] == color) {
        let t2 = individualize(g, tgt, y);
        if let Some(m) = extend(g, &s2, &t2) {
            return Some(m);
        }
    }
    None
}

/// An automorphism mapping `v` to `w`, if one exists.
pub fn automorphism_mapping(g: &Graph, v: usize, w: usize) -> Option<Vec<usize>> {
    let base = initial_coloring(g);
    if base[v] != base[w] {
        return None;
    }
    extend(g, &individualize(g, &base, v), &individualize(g, &base, w))
}

/// `|Aut(g)|` by orbit-stabilizer: at each level, the orbit of the first
/// vertex of the first nontrivial cell under the pointwise stabilizer of the
/// vertices fixed so far.
pub fn automorphism_count(g: &Graph) -> BigUint {
    let mut total = BigUint::one();
    let mut current = initial_coloring(g);
    while let Some(cell) = first_nontrivial_cell(&current) {
        let v = cell[0];
        let fixed_v = individualize(g, &current, v);
        let mut orbit = vec![v];
        for &w in &cell[1..] {
            if orbit.contains(&w) {
                continue;
            }
            if let Some(gamma) = extend(g, &fixed_v, &individualize(g, &current, w)) {
                // close the orbit under the automorphism just found
                let mut frontier = vec![w];
                while let Some(x) = frontier.pop() {
                    if !orbit.contains(&x) {
                        orbit.push(x);
                    }
                    let y = gamma[x];
                    if !orbit.contains(&y) && cell.contains(&y) {
                        frontier.push(y);
                    }
                }
            }
        }
        total *= orbit.len();
        current = fixed_v;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn small_examples() {
        assert_eq!(automorphism_count(&families::complete(3)), BigUint::from(6u32));
        assert_eq!(automorphism_count(&families::cycle(4)), BigUint::from(8u32));
        assert_eq!(automorphism_count(&families::path(2)), BigUint::from(2u32));
        assert_eq!(automorphism_count(&families::petersen()), BigUint::from(120u32));
        assert_eq!(automorphism_count(&Graph::empty(12)), crate::exact::factorial(12));
        assert_eq!(automorphism_count(&families::bowtie()), BigUint::from(8u32));
        assert_eq!(automorphism_count(&Graph::empty(0)), BigUint::one());
    }

    #[test]
    fn mapping_respects_structure() {
        let p = families::path(3);
        assert!(automorphism_mapping(&p, 0, 3).is_some());
        assert!(automorphism_mapping(&p, 0, 1).is_none());
        let gamma = automorphism_mapping(&families::petersen(), 0, 7).unwrap();
        assert_eq!(gamma[0], 7);
    }
}
