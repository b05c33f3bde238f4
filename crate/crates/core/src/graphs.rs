//! Simple undirected graphs: construction, text formats and the
//! cluster / complete-multipartite classification.
//!
//! Two input formats are supported. The edge-list format is a node count on
//! the first non-empty line followed by one `u v` pair per line (`#` starts a
//! comment). graph6 is supported in its short form only (n <= 62).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Largest order representable by the short graph6 header.
pub const GRAPH6_MAX_ORDER: usize = 62;

/// Simple undirected graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    /// Edgeless graph on `n` nodes. Panics if `n == 0`.
    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "a graph needs at least one node");
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.set(i, j, true);
            }
        }
        g
    }

    /// Cycle `C_n` with edges `i -- i+1 (mod n)`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three nodes");
        let mut g = Self::empty(n);
        for i in 0..n {
            g.set(i, (i + 1) % n, true);
        }
        g
    }

    /// Builds a graph from an edge iterator, rejecting loops and out-of-range ids.
    /// Repeated edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidInput("node count must be positive".into()));
        }
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Disjoint union, relabelling the parts consecutively.
    pub fn disjoint_union(parts: &[Graph]) -> Self {
        let n = parts.iter().map(Graph::order).sum();
        let mut g = Self::empty(n);
        let mut offset = 0;
        for p in parts {
            for (u, v) in p.edges() {
                g.set(u + offset, v + offset, true);
            }
            offset += p.order();
        }
        g
    }

    /// `K_{n_1,...,n_s}`: nodes are adjacent iff they lie in different parts.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let cliques: Vec<Graph> = parts.iter().map(|&s| Graph::complete(s)).collect();
        Graph::disjoint_union(&cliques).complement()
    }

    /// Graph whose edge set is read from the low bits of `bits`, in graph6
    /// pair order (column-major upper triangle). Used to enumerate all labelled
    /// graphs of a given order.
    pub fn from_pair_bits(n: usize, bits: u64) -> Self {
        let mut g = Self::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bits >> k & 1 == 1 {
                    g.set(i, j, true);
                }
                k += 1;
            }
        }
        g
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidInput(format!(
                "node id out of range: {u} {v} (n = {})",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidInput(format!("loop edge at node {u}")));
        }
        self.set(u, v, true);
        Ok(())
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        self.adj[u * self.n + v] = on;
        self.adj[v * self.n + u] = on;
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn degree(&self, u: usize) -> usize {
        (0..self.n).filter(|&v| self.has_edge(u, v)).count()
    }

    /// `Some(k)` when every node has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.degree(0);
        (1..self.n).all(|u| self.degree(u) == k).then_some(k)
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                g.set(i, j, !self.has_edge(i, j));
            }
        }
        g
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    pub fn is_null(&self) -> bool {
        self.adj.iter().all(|&b| !b)
    }

    /// Complete or null: no two-distance representation exists.
    pub fn is_degenerate(&self) -> bool {
        self.is_complete() || self.is_null()
    }

    /// Sizes of the connected components, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut sizes = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut size = 0;
            while let Some(u) = stack.pop() {
                size += 1;
                let mut next = (0..self.n).filter(|&v| self.has_edge(u, v) && !seen[v]).collect::<Vec<_>>();
                for &v in &next {
                    seen[v] = true;
                }
                stack.append(&mut next);
            }
            sizes.push(size);
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// True iff some node has two non-adjacent neighbours (an induced `P_3`).
    pub fn has_induced_p3(&self) -> bool {
        let n = self.n;
        (0..n).any(|v| {
            (0..n).any(|u| {
                u != v
                    && self.has_edge(u, v)
                    && ((u + 1)..n).any(|w| w != v && self.has_edge(v, w) && !self.has_edge(u, w))
            })
        })
    }
}

/// Classification label, most specific first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassTag {
    Complete,
    Null,
    Cluster,
    CompleteMultipartite,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClass {
    pub tag: ClassTag,
    /// Clique sizes for cluster graphs, independent-set sizes for complete
    /// multipartite graphs (largest first). `[n]` for complete and null
    /// graphs, empty for general graphs.
    pub partition: Vec<usize>,
    pub is_cluster: bool,
    pub is_multipartite: bool,
}

impl GraphClass {
    /// Number of parts attaining the maximum part size.
    pub fn max_part_count(&self) -> usize {
        match self.partition.first() {
            Some(&m) => self.partition.iter().filter(|&&s| s == m).count(),
            None => 0,
        }
    }
}

/// Classifies `g` as complete, null, cluster (P3-free), complete
/// multipartite (complement is P3-free) or general.
pub fn classify(g: &Graph) -> GraphClass {
    let co = g.complement();
    let is_cluster = !g.has_induced_p3();
    let is_multipartite = !co.has_induced_p3();
    let n = g.order();
    let (tag, partition) = if g.is_complete() {
        (ClassTag::Complete, vec![n])
    } else if g.is_null() {
        (ClassTag::Null, vec![n])
    } else if is_cluster {
        (ClassTag::Cluster, g.component_sizes())
    } else if is_multipartite {
        (ClassTag::CompleteMultipartite, co.component_sizes())
    } else {
        (ClassTag::General, Vec::new())
    };
    GraphClass {
        tag,
        partition,
        is_cluster,
        is_multipartite,
    }
}

pub fn complement(g: &Graph) -> Graph {
    g.complement()
}

/// 0/1 adjacency matrix with zero diagonal.
pub fn adjacency_matrix(g: &Graph) -> SymMatrix {
    SymMatrix::from_fn(g.order(), |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
}

/// Parses the edge-list format. Errors carry 1-based line numbers.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing node count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: header_line,
        msg: format!("expected a node count, found {header:?}"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: header_line,
            msg: "node count must be positive".into(),
        });
    }

    let mut g = Graph::empty(n);
    for (line, content) in lines {
        let toks: Vec<&str> = content.split_whitespace().collect();
        let parse = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid node id {t:?}"),
            })
        };
        let [u, v] = toks[..] else {
            return Err(Error::Parse {
                line,
                msg: format!("expected \"u v\", found {content:?}"),
            });
        };
        let (u, v) = (parse(u)?, parse(v)?);
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                msg: format!("node id out of range: {u} {v} (n = {n})"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                msg: format!("loop edge at node {u}"),
            });
        }
        g.set(u, v, true);
    }
    Ok(g)
}

/// Decodes a short-form graph6 string. Surrounding whitespace is ignored.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim().as_bytes();
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!(
            "invalid character {:?} at byte {pos}",
            bytes[pos] as char
        )));
    }
    let (&header, body) = bytes
        .split_first()
        .ok_or_else(|| Error::Graph6("truncated: empty input".into()))?;
    if header == 126 {
        return Err(Error::Graph6(format!(
            "long-form header (n > {GRAPH6_MAX_ORDER}) is not supported"
        )));
    }
    let n = usize::from(header - 63);
    if n == 0 {
        return Err(Error::Graph6("graph has no nodes".into()));
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    if body.len() < nbytes {
        return Err(Error::Graph6(format!(
            "truncated: expected {nbytes} data bytes, found {}",
            body.len()
        )));
    }
    if body.len() > nbytes {
        return Err(Error::Graph6(format!(
            "{} trailing bytes after the edge data",
            body.len() - nbytes
        )));
    }

    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.set(i, j, true);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes `g` as short-form graph6.
pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(Error::Graph6(format!(
            "order {n} exceeds the short-form limit {GRAPH6_MAX_ORDER}"
        )));
    }
    let mut out = vec![n as u8 + 63];
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = chunk << 1 | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(chunk + 63);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}
