//! Finite simple undirected graphs and the matrices that define a walk on them.
//!
//! Vertices are 0-indexed. For a graph with adjacency `A` and degree matrix
//! `D` we provide the Laplacian `L = D - A` and the column-stochastic
//! transition matrix `M = A D^-1`, i.e. `M[j][k] = 1/deg(k)` on edges.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::format::fmt_g17;

/// Dense real matrix used for `A`, `D`, `L`, `M` and probability data.
pub type RealMatrix = DMatrix<f64>;

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored once as ordered pairs `(j, k)` with `j < k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cycle,
    Path,
    Star,
    Complete,
}

impl Family {
    pub fn min_size(self) -> usize {
        match self {
            Family::Cycle => 3,
            Family::Path | Family::Complete => 2,
            Family::Star => 1,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "star" => Ok(Family::Star),
            "complete" => Ok(Family::Complete),
            other => Err(Error::InvalidArgument(format!(
                "unknown graph family '{other}' (expected cycle, path, star or complete)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Star => "star",
            Family::Complete => "complete",
        };
        f.write_str(s)
    }
}

/// Structural classification relevant to steady-state behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClass {
    pub connected: bool,
    pub regular: bool,
    /// Every row of `M` sums to 1. False when `M` is undefined.
    pub doubly_stochastic_m: bool,
}

impl Graph {
    /// Builds a graph, normalizing each pair to `(min, max)` and dropping
    /// duplicates. Self-loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) has an endpoint outside 0..{n}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n, edges: set })
    }

    /// Parses the edge-list text format.
    ///
    /// Each line is `j k`; blank lines and lines starting with `#` are
    /// skipped. An optional `n <count>` header before the first edge fixes
    /// the vertex count, otherwise it is one more than the largest index.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut edges = Vec::new();
        let mut max_index: Option<usize> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] == "n" {
                if tokens.len() != 2 {
                    return Err(parse_err(line_no, "header must be 'n <count>'"));
                }
                if declared.is_some() {
                    return Err(parse_err(line_no, "duplicate 'n' header"));
                }
                if !edges.is_empty() {
                    return Err(parse_err(line_no, "'n' header must precede all edges"));
                }
                let count = parse_index(tokens[1], line_no)?;
                if count == 0 {
                    return Err(parse_err(line_no, "vertex count must be positive"));
                }
                declared = Some(count);
                continue;
            }
            if tokens.len() != 2 {
                return Err(parse_err(line_no, &format!("expected 'j k', found {} tokens", tokens.len())));
            }
            let j = parse_index(tokens[0], line_no)?;
            let k = parse_index(tokens[1], line_no)?;
            if j == k {
                return Err(parse_err(line_no, &format!("self-loop at vertex {j}")));
            }
            if let Some(n) = declared {
                if j >= n || k >= n {
                    return Err(parse_err(
                        line_no,
                        &format!("vertex index {} is not below declared n = {n}", j.max(k)),
                    ));
                }
            }
            max_index = Some(max_index.map_or(j.max(k), |m| m.max(j).max(k)));
            edges.push((j, k));
        }

        let n = match (declared, max_index) {
            (Some(n), _) => n,
            (None, Some(m)) => m + 1,
            (None, None) => return Err(Error::InvalidGraph("edge list has neither edges nor an 'n' header".into())),
        };
        Self::new(n, edges)
    }

    /// Canonical labelled member of a family. For stars `size` is the
    /// number of edges and vertex 0 is the hub.
    pub fn generate(family: Family, size: usize) -> Result<Self> {
        if size < family.min_size() {
            return Err(Error::InvalidArgument(format!("{family} requires size >= {}, got {size}", family.min_size())));
        }
        match family {
            Family::Path => Self::new(size, (0..size - 1).map(|j| (j, j + 1))),
            Family::Cycle => Self::new(size, (0..size).map(|j| (j, (j + 1) % size))),
            Family::Star => Self::new(size + 1, (1..=size).map(|j| (0, j))),
            Family::Complete => Self::new(size, (0..size).flat_map(|j| (j + 1..size).map(move |k| (j, k)))),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(j, k)` with `j < k`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn isolated_vertex(&self) -> Option<usize> {
        self.degrees().iter().position(|&d| d == 0)
    }

    /// Component label per vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.neighbors();
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn is_regular(&self) -> bool {
        let deg = self.degrees();
        deg.windows(2).all(|w| w[0] == w[1])
    }

    pub fn adjacency(&self) -> RealMatrix {
        let mut a = RealMatrix::zeros(self.n, self.n);
        for &(j, k) in &self.edges {
            a[(j, k)] = 1.0;
            a[(k, j)] = 1.0;
        }
        a
    }

    pub fn degree_matrix(&self) -> RealMatrix {
        let deg: Vec<f64> = self.degrees().into_iter().map(|d| d as f64).collect();
        RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(deg))
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> RealMatrix {
        self.degree_matrix() - self.adjacency()
    }

    /// `M = A D^-1`; rejects graphs with an isolated vertex.
    pub fn transition_matrix(&self) -> Result<RealMatrix> {
        if let Some(v) = self.isolated_vertex() {
            return Err(Error::IsolatedVertex(v));
        }
        let deg = self.degrees();
        let mut m = RealMatrix::zeros(self.n, self.n);
        for &(j, k) in &self.edges {
            m[(j, k)] = 1.0 / deg[k] as f64;
            m[(k, j)] = 1.0 / deg[j] as f64;
        }
        Ok(m)
    }

    pub fn classify(&self) -> GraphClass {
        self.classify_with(&Tolerances::default())
    }

    pub fn classify_with(&self, tol: &Tolerances) -> GraphClass {
        let deg = self.degrees();
        let doubly_stochastic_m = !deg.contains(&0)
            && self.neighbors().iter().all(|nbrs| {
                let row: f64 = nbrs.iter().map(|&k| 1.0 / deg[k] as f64).sum();
                (row - 1.0).abs() <= tol.stochastic
            });
        GraphClass { connected: self.is_connected(), regular: self.is_regular(), doubly_stochastic_m }
    }

    /// Serializes to the edge-list format with an explicit `n` header.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(j, k) in &self.edges {
            out.push_str(&format!("{j} {k}\n"));
        }
        out
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse { line, msg: msg.to_string() }
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| parse_err(line, &format!("'{tok}' is not a non-negative integer")))
}

/// Row-major CSV with `%.17g` entries.
pub fn real_matrix_csv(m: &RealMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| fmt_g17(m[(r, c)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
