//! Simple undirected graphs stored as bit-packed adjacency rows.
//!
//! Besides the [`Graph`] type this module holds the two text formats the
//! crate reads and writes (graph6 and a plain edge list), the structural
//! predicates the certification pipeline needs, a seeded generator of
//! even-degree graphs, and a backtracking isomorphism test for tiny orders.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest order accepted by [`Graph`].
pub const MAX_ORDER: usize = 1 << 16;

/// Largest order [`is_isomorphic_bruteforce`] will attempt.
pub const ISOMORPHISM_GUARD: usize = 10;

/// Largest order encodable by the graph6 forms we support (4-byte header).
pub const GRAPH6_MAX_ORDER: usize = 258_047;

const GRAPH6_HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("order {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} listed more than once")]
    DuplicateEdge(usize, usize),
    #[error("malformed edge line {line}: {text:?}")]
    MalformedEdge { line: usize, text: String },
    #[error("invalid graph6 byte {byte:#04x} at position {pos}")]
    InvalidGraph6Byte { byte: u8, pos: usize },
    #[error("truncated graph6 bit stream: expected {expected} data bytes, found {found}")]
    TruncatedGraph6 { expected: usize, found: usize },
    #[error("graph6 data has {found} bytes, expected {expected}")]
    TrailingGraph6 { expected: usize, found: usize },
    #[error("nonzero padding bits in graph6 data")]
    Graph6Padding,
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("adjacency matrix has a nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("adjacency entry ({0}, {1}) is not 0 or 1")]
    NonBinary(usize, usize),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("order {n} exceeds the brute-force guard of {max}")]
    SizeGuard { n: usize, max: usize },
    #[error("no connected even-degree graph found after {retries} retries")]
    GenerationFailed { retries: usize },
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Input/output text format for graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Graph6,
    EdgeList,
}

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is kept symmetric with an empty diagonal; every constructor
/// enforces this.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_ORDER {
            return Err(GraphError::TooLarge { n, max: MAX_ORDER });
        }
        let words = n.div_ceil(64);
        Ok(Graph { n, words, bits: vec![0; n * words] })
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Ok(Graph::empty(n)?.complement())
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The star K_{1,n-1} centred at vertex 0.
    pub fn star(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Builds a graph from an edge list, rejecting loops and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from a dense 0/1 adjacency matrix.
    pub fn from_adjacency<R: AsRef<[u8]>>(rows: &[R]) -> Result<Graph> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(GraphError::OrderMismatch(n, row.len()));
            }
            for (j, &a) in row.iter().enumerate() {
                if a > 1 {
                    return Err(GraphError::NonBinary(i, j));
                }
                if i == j && a != 0 {
                    return Err(GraphError::NonzeroDiagonal(i));
                }
                if a != rows[j].as_ref()[i] {
                    return Err(GraphError::Asymmetric(i, j));
                }
                if a == 1 && i < j {
                    g.set_edge(i, j, true);
                }
            }
        }
        Ok(g)
    }

    /// Builds the graph on `n` vertices whose upper triangle, read in
    /// graph6 (column-major) order, is given by the low bits of `mask`.
    pub fn from_upper_mask(n: usize, mask: u64) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        let mut bit = 0;
        for j in 1..n {
            for i in 0..j {
                if bit < 64 && (mask >> bit) & 1 == 1 {
                    g.set_edge(i, j, true);
                }
                bit += 1;
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.bits[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        debug_assert!(u != v);
        for (a, b) in [(u, v), (v, u)] {
            let w = &mut self.bits[a * self.words + b / 64];
            if on {
                *w |= 1 << (b % 64);
            } else {
                *w &= !(1 << (b % 64));
            }
        }
    }

    fn toggle_edge(&mut self, u: usize, v: usize) {
        let on = !self.has_edge(u, v);
        self.set_edge(u, v, on);
    }

    /// Bit-packed adjacency row of vertex `v` (`ceil(n/64)` words).
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn all_degrees_even(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) % 2 == 0)
    }

    pub fn all_degrees_odd(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) % 2 == 1)
    }

    /// Vertices of odd degree, in increasing order.
    pub fn odd_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) % 2 == 1).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![0u64; self.words];
        seen[0] = 1;
        let mut count = 1;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                let (wi, b) = (u / 64, 1u64 << (u % 64));
                if seen[wi] & b == 0 {
                    seen[wi] |= b;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Connected with every degree even.
    pub fn is_eulerian(&self) -> bool {
        self.all_degrees_even() && self.is_connected()
    }

    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..self.n {
            let row = &mut g.bits[v * self.words..(v + 1) * self.words];
            for w in row.iter_mut() {
                *w = !*w;
            }
            if self.n % 64 != 0 {
                row[self.words - 1] &= (1u64 << (self.n % 64)) - 1;
            }
            row[v / 64] &= !(1u64 << (v % 64));
        }
        g
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(GraphError::OrderMismatch(self.n, perm.len()));
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n, &edges)
    }

    /// Disjoint union, with `other`'s vertices shifted past ours.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        let mut edges: Vec<_> = self.edges().collect();
        edges.extend(other.edges().map(|(u, v)| (u + self.n, v + self.n)));
        Graph::from_edges(n, &edges)
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_edge(i, j) as u8).collect())
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({})", write_graph6(self).unwrap_or_else(|_| format!("n={}", self.n)))
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph> {
    match format {
        Format::Graph6 => parse_graph6(text),
        Format::EdgeList => parse_edge_list(text),
    }
}

pub fn write_graph(g: &Graph, format: Format) -> Result<String> {
    match format {
        Format::Graph6 => write_graph6(g),
        Format::EdgeList => Ok(write_edge_list(g)),
    }
}

/// Guesses the format of `text`: an edge list starts with a decimal order
/// on its own line, anything else is treated as graph6.
pub fn detect_format(text: &str) -> Format {
    let first = text.trim_start().lines().next().unwrap_or("").trim();
    if !first.is_empty() && first.bytes().all(|b| b.is_ascii_digit()) && text.trim().contains('\n') {
        Format::EdgeList
    } else if !first.is_empty() && first.bytes().all(|b| b.is_ascii_digit()) && first.len() > 1 {
        // a lone multi-digit number is an edgeless edge list, never graph6
        Format::EdgeList
    } else {
        Format::Graph6
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(GRAPH6_HEADER).unwrap_or(s).as_bytes();
    if s.is_empty() {
        return Err(GraphError::MalformedHeader("empty input".into()));
    }
    for (pos, &byte) in s.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(GraphError::InvalidGraph6Byte { byte, pos });
        }
    }
    let (n, data) = if s[0] != 126 {
        ((s[0] - 63) as usize, &s[1..])
    } else if s.len() >= 2 && s[1] == 126 {
        return Err(GraphError::MalformedHeader("8-byte graph6 order form is not supported".into()));
    } else if s.len() < 4 {
        return Err(GraphError::MalformedHeader("truncated 4-byte order".into()));
    } else {
        let n = s[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        if n <= 62 {
            return Err(GraphError::MalformedHeader(format!("order {n} must use the 1-byte form")));
        }
        (n, &s[4..])
    };
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if n > MAX_ORDER {
        return Err(GraphError::TooLarge { n, max: MAX_ORDER });
    }
    let nbits = n * (n - 1) / 2;
    let expected = nbits.div_ceil(6);
    if data.len() < expected {
        return Err(GraphError::TruncatedGraph6 { expected, found: data.len() });
    }
    if data.len() > expected {
        return Err(GraphError::TrailingGraph6 { expected, found: data.len() });
    }
    let mut g = Graph::empty(n)?;
    let bit = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.set_edge(i, j, true);
            }
            k += 1;
        }
    }
    for pad in nbits..expected * 6 {
        if bit(pad) {
            return Err(GraphError::Graph6Padding);
        }
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.n;
    if n > GRAPH6_MAX_ORDER {
        return Err(GraphError::TooLarge { n, max: GRAPH6_MAX_ORDER });
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Parses `n` on the first line followed by one `u v` pair per line.
/// Blank lines and `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| GraphError::MalformedHeader("empty input".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| GraphError::MalformedHeader(format!("expected vertex count, found {header:?}")))?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let mut it = l.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(GraphError::MalformedEdge { line, text: l.to_string() }),
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n);
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Seeded random graph in which every vertex has even degree.
///
/// Each edge is drawn with probability 1/2; the odd-degree vertices are then
/// paired in increasing order and the edge inside each pair toggled. When
/// `require_connected` is set the whole draw is repeated until the result is
/// connected.
pub fn random_even_graph(n: usize, seed: u64, require_connected: bool) -> Result<Graph> {
    const MAX_RETRIES: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let mut g = Graph::empty(n)?;
        for j in 1..n {
            for i in 0..j {
                if rng.gen::<bool>() {
                    g.set_edge(i, j, true);
                }
            }
        }
        let odd = g.odd_vertices();
        for pair in odd.chunks_exact(2) {
            g.toggle_edge(pair[0], pair[1]);
        }
        debug_assert!(g.all_degrees_even());
        if !require_connected || g.is_connected() {
            return Ok(g);
        }
    }
    Err(GraphError::GenerationFailed { retries: MAX_RETRIES })
}

/// Exhaustive isomorphism test for graphs on at most [`ISOMORPHISM_GUARD`]
/// vertices.
///
/// Vertices of `g` are mapped one at a time onto unused vertices of `h` of
/// equal degree, backtracking as soon as adjacency to the already mapped
/// vertices disagrees.
pub fn is_isomorphic_bruteforce(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n != h.n {
        return Err(GraphError::OrderMismatch(g.n, h.n));
    }
    if g.n > ISOMORPHISM_GUARD {
        return Err(GraphError::SizeGuard { n: g.n, max: ISOMORPHISM_GUARD });
    }
    Ok(isomorphic_unchecked(g, h))
}

/// Backtracking isomorphism without the order guard; callers bound `n`.
pub(crate) fn isomorphic_unchecked(g: &Graph, h: &Graph) -> bool {
    if g.n != h.n || g.edge_count() != h.edge_count() {
        return false;
    }
    let dg = g.degrees();
    let dh = h.degrees();
    let mut sg = dg.clone();
    let mut sh = dh.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return false;
    }
    // map high-degree vertices first; they constrain the search most
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(dg[v]));
    let mut map = vec![usize::MAX; g.n];
    let mut used = vec![false; g.n];
    extend_mapping(g, h, &dg, &dh, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend_mapping(
    g: &Graph,
    h: &Graph,
    dg: &[usize],
    dh: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..h.n {
        if used[w] || dh[w] != dg[v] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend_mapping(g, h, dg, dh, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
    }
    map[v] = usize::MAX;
    false
}
