//! Compressed sparse row adjacency plus the edge-list and degree-file formats.

use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Node identifier. Graphs are capped at 2^32 nodes.
pub type Node = u32;

/// Unweighted graph in CSR form.
///
/// Invariants: `offsets` has `n + 1` entries ending at `neighbors.len()`;
/// each adjacency run is strictly increasing (no duplicate arcs, no self
/// loops); undirected graphs store both orientations of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    offsets: Vec<usize>,
    neighbors: Vec<Node>,
}

impl Graph {
    /// Builds a graph from arc pairs. Self loops are dropped, duplicates are
    /// collapsed, and undirected input is symmetrized. The node count is
    /// `min_n` or one past the largest endpoint, whichever is larger.
    pub fn from_edges(
        min_n: usize,
        arcs: impl IntoIterator<Item = (Node, Node)>,
        directed: bool,
    ) -> Graph {
        let mut all: Vec<(Node, Node)> = Vec::new();
        let mut top: Option<Node> = None;
        for (u, v) in arcs {
            let hi = u.max(v);
            top = Some(top.map_or(hi, |t| t.max(hi)));
            if u == v {
                continue;
            }
            all.push((u, v));
            if !directed {
                all.push((v, u));
            }
        }
        let n = min_n.max(top.map_or(0, |t| t as usize + 1));
        all.sort_unstable();
        all.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &all {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = all.into_iter().map(|(_, v)| v).collect();
        Graph {
            directed,
            offsets,
            neighbors,
        }
    }

    /// Parses whitespace-separated node-id pairs, one arc per line. Lines
    /// whose first non-blank character is `#` and blank lines are skipped.
    /// The node count is one past the largest id mentioned, so a self loop
    /// (otherwise dropped) still pins the id range.
    pub fn read_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<Graph> {
        let mut arcs: Vec<(Node, Node)> = Vec::new();
        let mut top: Option<Node> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let mut tokens = text.split_whitespace();
            let u = parse_node(tokens.next(), lineno)?;
            let v = parse_node(tokens.next(), lineno)?;
            if let Some(extra) = tokens.next() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unexpected trailing token {extra:?}"),
                });
            }
            top = Some(top.map_or(u.max(v), |t| t.max(u).max(v)));
            arcs.push((u, v));
        }
        let n = top.map_or(0, |t| t as usize + 1);
        Ok(Graph::from_edges(n, arcs, directed))
    }

    pub fn load_edge_list<P: AsRef<Path>>(path: P, directed: bool) -> Result<Graph> {
        let file = std::fs::File::open(path)?;
        Graph::read_edge_list(BufReader::new(file), directed)
    }

    /// Writes the graph back in the edge-list format. Undirected edges come
    /// out once, as `u v` with `u < v`. A trailing node with no incident arc
    /// would vanish on reload, so its id is recorded as a self loop (which
    /// the reader drops after noting the id).
    pub fn write_edge_list<W: Write>(&self, mut writer: W) -> io::Result<()> {
        let n = self.num_nodes();
        let mut top: Option<Node> = None;
        for u in 0..n {
            let u = u as Node;
            for &v in self.neighbors(u) {
                if !self.directed && v < u {
                    continue;
                }
                writeln!(writer, "{u}\t{v}")?;
                top = Some(top.map_or(u.max(v), |t| t.max(u).max(v)));
            }
        }
        if n > 0 {
            let last = (n - 1) as Node;
            if top.is_none_or(|t| t < last) {
                writeln!(writer, "{last}\t{last}")?;
            }
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Arc count. Each undirected edge contributes two.
    pub fn num_arcs(&self) -> u64 {
        self.neighbors.len() as u64
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn neighbors(&self, u: Node) -> &[Node] {
        &self.neighbors[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    pub fn out_degree(&self, u: Node) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.num_nodes())
            .map(|u| self.out_degree(u as Node))
            .max()
            .unwrap_or(0)
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut degs = vec![0usize; self.num_nodes()];
        for &v in &self.neighbors {
            degs[v as usize] += 1;
        }
        degs
    }

    /// Graph with every arc reversed. For undirected graphs this is the
    /// adjacency itself, but the copy keeps callers uniform.
    pub fn transpose(&self) -> Graph {
        let n = self.num_nodes();
        let mut offsets = vec![0usize; n + 1];
        for &v in &self.neighbors {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0 as Node; self.neighbors.len()];
        // u ascends, so each reversed run comes out sorted.
        for u in 0..n {
            for &v in self.neighbors(u as Node) {
                neighbors[cursor[v as usize]] = u as Node;
                cursor[v as usize] += 1;
            }
        }
        Graph {
            directed: self.directed,
            offsets,
            neighbors,
        }
    }

    /// Out-degrees sorted into non-increasing order.
    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(
            (0..self.num_nodes())
                .map(|u| self.out_degree(u as Node) as u64)
                .collect(),
        )
    }

    /// Deletes the given nodes and every arc touching them. Survivors are
    /// renumbered compactly in their original order; the returned map sends
    /// each old id to its new id, or `None` if deleted.
    pub fn remove_nodes(&self, nodes: &[Node]) -> Result<(Graph, Vec<Option<Node>>)> {
        let n = self.num_nodes();
        let mut dead = vec![false; n];
        for &v in nodes {
            if (v as usize) >= n {
                return Err(Error::Range(format!(
                    "cannot remove node {v}: graph has {n} nodes"
                )));
            }
            dead[v as usize] = true;
        }
        let mut remap: Vec<Option<Node>> = vec![None; n];
        let mut next: Node = 0;
        for u in 0..n {
            if !dead[u] {
                remap[u] = Some(next);
                next += 1;
            }
        }
        let mut offsets = Vec::with_capacity(next as usize + 1);
        offsets.push(0usize);
        let mut neighbors = Vec::new();
        for (u, &gone) in dead.iter().enumerate() {
            if gone {
                continue;
            }
            for &v in self.neighbors(u as Node) {
                if let Some(nv) = remap[v as usize] {
                    neighbors.push(nv);
                }
            }
            offsets.push(neighbors.len());
        }
        Ok((
            Graph {
                directed: self.directed,
                offsets,
                neighbors,
            },
            remap,
        ))
    }
}

fn parse_node(token: Option<&str>, line: usize) -> Result<Node> {
    let token = token.ok_or(Error::Parse {
        line,
        msg: "expected two node ids".into(),
    })?;
    let wide: u64 = token.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid node id {token:?}"),
    })?;
    Node::try_from(wide)
        .map_err(|_| Error::Range(format!("node id {wide} at line {line} exceeds 32 bits")))
}

/// Degree multiset in non-increasing order, the shape the bound machinery
/// consumes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
}

impl DegreeSequence {
    pub fn new(mut degrees: Vec<u64>) -> DegreeSequence {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence { degrees }
    }

    /// Parses one nonnegative integer per line; `#` comment lines and blank
    /// lines are skipped. Input order does not matter.
    pub fn read<R: BufRead>(reader: R) -> Result<DegreeSequence> {
        let mut degrees = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let d: u64 = text.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("invalid degree {text:?}"),
            })?;
            degrees.push(d);
        }
        Ok(DegreeSequence::new(degrees))
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<DegreeSequence> {
        let file = std::fs::File::open(path)?;
        DegreeSequence::read(BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Σ dᵢ. Equals the arc count when built from a graph's out-degrees.
    pub fn total(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).sum()
    }

    /// Σ dᵢ².
    pub fn sum_of_squares(&self) -> u128 {
        self.degrees
            .iter()
            .map(|&d| (d as u128) * (d as u128))
            .sum()
    }
}
