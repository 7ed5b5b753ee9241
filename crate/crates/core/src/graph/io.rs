//! Text formats: header-free graph6 and plain edge lists.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by column
//! (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) into 6-bit groups, each written as
//! the byte `63 + group`. The vertex count is prefixed as one byte for
//! `n <= 62`, `126` plus three bytes for `n <= 258047`, and `126 126` plus six
//! bytes above that.
//!
//! Edge lists are lines `u v`. An optional first line `n=<k>` declares the
//! vertex count so trailing isolated vertices survive; blank lines and lines
//! starting with `#` are ignored.

use super::{Graph, MAX_VERTICES};
use crate::bitset::VertexSet;
use crate::error::{Error, Location, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Graph6,
    EdgeList,
}

/// Detects the format and parses. A single line made only of graph6 bytes
/// (`?`..`~`) is graph6; anything else is an edge list.
pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_graph_as(text, detect_format(text))
}

pub fn parse_graph_as(text: &str, format: Format) -> Result<Graph> {
    match format {
        Format::Graph6 => parse_graph6(text.trim()),
        Format::EdgeList => parse_edge_list(text),
    }
}

pub fn detect_format(text: &str) -> Format {
    let t = text.trim();
    if !t.is_empty() && t.bytes().all(|b| (63..=126).contains(&b)) {
        Format::Graph6
    } else {
        Format::EdgeList
    }
}

fn graph6_bit_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            group = (group << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Strict graph6 decoder: rejects bytes outside `?`..`~`, wrong lengths and
/// nonzero padding bits, so decoding then encoding is the identity.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(Location::Byte(i), format!("byte {b:#04x} is not graph6")));
        }
    }
    let value = |i: usize| -> Result<usize> {
        bytes
            .get(i)
            .map(|&b| (b - 63) as usize)
            .ok_or_else(|| Error::parse(Location::Byte(i), "truncated vertex count"))
    };
    let (n, mut pos) = match bytes.first() {
        None => return Err(Error::parse(Location::Byte(0), "empty graph6 string")),
        Some(126) if bytes.get(1) == Some(&126) => {
            let mut n = 0usize;
            for i in 2..8 {
                n = (n << 6) | value(i)?;
            }
            if n <= 258_047 {
                return Err(Error::parse(Location::Byte(0), "non-minimal vertex count encoding"));
            }
            (n, 8)
        }
        Some(126) => {
            let mut n = 0usize;
            for i in 1..4 {
                n = (n << 6) | value(i)?;
            }
            if n <= 62 {
                return Err(Error::parse(Location::Byte(0), "non-minimal vertex count encoding"));
            }
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    if n > MAX_VERTICES {
        return Err(Error::parse(
            Location::Byte(0),
            format!("{n} vertices exceeds the limit of {MAX_VERTICES}"),
        ));
    }
    let bits = graph6_bit_count(n);
    let needed = bits.div_ceil(6);
    let available = bytes.len() - pos;
    if available != needed {
        return Err(Error::parse(
            Location::Byte(pos + available.min(needed)),
            format!("expected {needed} adjacency bytes for n={n}, found {available}"),
        ));
    }
    let mut adj = vec![VertexSet::new(n); n];
    let mut edges = Vec::new();
    let mut bit = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6] - 63;
            if byte & (1 << (5 - bit % 6)) != 0 {
                adj[i].insert(j);
                adj[j].insert(i);
                edges.push((i, j));
            }
            bit += 1;
            if bit == bits {
                break 'outer;
            }
        }
    }
    if bits % 6 != 0 {
        let last = bytes[pos + needed - 1] - 63;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Error::parse(
                Location::Byte(pos + needed - 1),
                "nonzero padding bits",
            ));
        }
    }
    pos += needed;
    debug_assert_eq!(pos, bytes.len());
    Graph::from_edges(n, edges)
}

/// Parses a whitespace-separated edge list. The vertex count is the `n=`
/// header when present, else one more than the largest id.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen_content = false;
    let mut seen_pairs = std::collections::HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let at = Location::Line(lineno + 1);
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if let Some(rest) = line.strip_prefix("n=").or_else(|| line.strip_prefix("n =")) {
                let k: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(at, format!("bad vertex-count header {line:?}")))?;
                if k > MAX_VERTICES {
                    return Err(Error::parse(at, format!("{k} vertices exceeds the limit")));
                }
                declared = Some(k);
                continue;
            }
        }
        let mut parts = line.split_whitespace();
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(Error::parse(at, format!("expected \"u v\", got {line:?}"))),
        };
        let parse_id = |s: &str| -> Result<usize> {
            if !s.bytes().all(|c| c.is_ascii_digit()) {
                return Err(Error::parse(at, format!("vertex id {s:?} is not a nonnegative integer")));
            }
            let v: usize = s
                .parse()
                .map_err(|_| Error::parse(at, format!("vertex id {s:?} out of range")))?;
            if v >= MAX_VERTICES {
                return Err(Error::parse(at, format!("vertex id {v} exceeds the limit")));
            }
            Ok(v)
        };
        let (u, v) = (parse_id(a)?, parse_id(b)?);
        if u == v {
            return Err(Error::parse(at, format!("loop at vertex {u}")));
        }
        if let Some(k) = declared {
            if u >= k || v >= k {
                return Err(Error::parse(at, format!("edge ({u}, {v}) exceeds declared n={k}")));
            }
        }
        if !seen_pairs.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(at, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v));
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, edges)
}

/// Canonical edge list: sorted `u v` lines with `u < v`, preceded by an `n=`
/// header only when the vertex count is not implied by the edges.
pub fn to_edge_list(g: &Graph) -> String {
    let implied = g.edges().iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
    let mut out = String::new();
    if implied != g.vertex_count() {
        out.push_str(&format!("n={}\n", g.vertex_count()));
    }
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use proptest::prelude::*;

    #[test]
    fn triangle_edge_list() {
        let g = parse_graph("0 1\n1 2\n2 0").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g, families::complete(3));
    }

    #[test]
    fn loop_is_rejected_with_line() {
        let err = parse_graph("0 1\n0 0").unwrap_err();
        assert!(matches!(err, Error::Parse { location: Location::Line(2), .. }), "{err}");
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        assert!(matches!(
            parse_graph("0 1\n1 0").unwrap_err(),
            Error::Parse { location: Location::Line(2), .. }
        ));
        assert!(parse_graph("0 1 2").is_err());
        assert!(parse_graph("0 -1").is_err());
        assert!(parse_graph("n=2\n0 2").is_err());
    }

    #[test]
    fn header_keeps_isolated_vertices() {
        let g = parse_graph("n=5\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(to_edge_list(&g), "n=5\n0 1\n");
        assert_eq!(to_edge_list(&families::complete(3)), "0 1\n0 2\n1 2\n");
    }

    #[test]
    fn graph6_known_string() {
        // n=5, bits 000000 1111(00): the star centred at vertex 4
        let g = parse_graph("D?{").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edges(), &[(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(to_graph6(&g), "D?{");
        assert_eq!(to_graph6(&families::complete(4)), "C~");
        assert_eq!(to_graph6(&families::petersen()), "IheA@GUAo");
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("D?").is_err());
        assert!(parse_graph6("D?{?").is_err());
        // padding bit set: "D?}" has a 1 in the last two padding bits
        assert!(parse_graph6("D?}").is_err());
        assert!(parse_graph6("~??~").is_err());
    }

    #[test]
    fn graph6_long_header() {
        let g = Graph::empty(63);
        let s = to_graph6(&g);
        assert_eq!(&s[..4], "~??~");
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..70).prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::from_edge_set(n, edges)
            })
        })
    }

    proptest! {
        #[test]
        fn graph6_round_trip(g in arb_graph()) {
            let s = to_graph6(&g);
            prop_assert_eq!(&parse_graph(&s).unwrap(), &g);
            prop_assert_eq!(to_graph6(&parse_graph6(&s).unwrap()), s);
        }

        #[test]
        fn edge_list_round_trip(g in arb_graph()) {
            let s = to_edge_list(&g);
            let back = parse_graph(&s).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_edge_list(&back), s);
        }
    }
}
