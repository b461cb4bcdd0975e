//! Regular bipartite graphs and the pieces of the path-decomposition pipeline.
//!
//! Vertices are `x0..x{n-1}` on one side and `y0..y{n-1}` on the other.

mod attach;
mod euler;
mod matching;
mod p4;

pub use attach::{
    attach_matching, extract_avoidance_function, extract_end_avoidance_function, verify_p5_decomposition, Defect, Side,
    Verification, Walk,
};
pub use euler::{eulerian_orientation, Arc, Orientation};
pub use matching::{one_factorization, perfect_matching, Matching};
pub use p4::{p4_decompose, p4_decompose_exhaustive, p4_decompose_with, DirectedPath, P4Config, PathDecomposition};

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;

use crate::error::GraphError;
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    X(usize),
    Y(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::X(i) => write!(f, "x{i}"),
            Vertex::Y(j) => write!(f, "y{j}"),
        }
    }
}

/// Simple bipartite graph on `n + n` vertices in which every vertex has
/// degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n: usize,
    degree: usize,
    x_adj: Vec<Vec<usize>>,
    y_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a `d`-regular graph from `(x, y)` pairs.
    pub fn new(n: usize, degree: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut x_adj = vec![Vec::new(); n];
        let mut y_adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (x, y) in edges {
            if x >= n || y >= n {
                return Err(GraphError::IndexOutOfRange {
                    line: 0,
                    index: x.max(y),
                    n,
                });
            }
            if !seen.insert((x, y)) {
                return Err(GraphError::DuplicateEdge { x, y });
            }
            x_adj[x].push(y);
            y_adj[y].push(x);
        }
        let graph = Self::from_adjacency(n, degree, x_adj, y_adj);
        graph.check_regular()?;
        Ok(graph)
    }

    fn from_adjacency(n: usize, degree: usize, mut x_adj: Vec<Vec<usize>>, mut y_adj: Vec<Vec<usize>>) -> Self {
        x_adj.iter_mut().for_each(|a| a.sort_unstable());
        y_adj.iter_mut().for_each(|a| a.sort_unstable());
        Self {
            n,
            degree,
            x_adj,
            y_adj,
        }
    }

    fn check_regular(&self) -> Result<(), GraphError> {
        let sides = [(&self.x_adj, 'x'), (&self.y_adj, 'y')];
        for (adj, side) in sides {
            for (i, nbrs) in adj.iter().enumerate() {
                if nbrs.len() != self.degree {
                    return Err(GraphError::NotRegular {
                        vertex: format!("{side}{i}"),
                        degree: nbrs.len(),
                        expected: self.degree,
                    });
                }
            }
        }
        Ok(())
    }

    /// `K_{n,n}`.
    pub fn complete(n: usize) -> Self {
        let all: Vec<usize> = (0..n).collect();
        Self::from_adjacency(n, n, vec![all.clone(); n], vec![all; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.degree
    }

    /// Sorted `y` neighbours of `x`.
    pub fn x_neighbors(&self, x: usize) -> &[usize] {
        &self.x_adj[x]
    }

    /// Sorted `x` neighbours of `y`.
    pub fn y_neighbors(&self, y: usize) -> &[usize] {
        &self.y_adj[y]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.n && self.x_adj[x].binary_search(&y).is_ok()
    }

    /// Edges in lexicographic `(x, y)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.x_adj
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    /// The `(d-1)`-regular graph left after deleting a perfect matching.
    pub fn without_matching(&self, m: &Matching) -> Result<Self, GraphError> {
        m.check_perfect_in(self)?;
        let mut x_adj = self.x_adj.clone();
        let mut y_adj = self.y_adj.clone();
        for (x, y) in m.pairs() {
            x_adj[x].retain(|&v| v != y);
            y_adj[y].retain(|&v| v != x);
        }
        Ok(Self::from_adjacency(self.n, self.degree - 1, x_adj, y_adj))
    }

    /// Writes the edge-list format read by [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.degree);
        for (x, y) in self.edges() {
            out.push_str(&format!("{x} {y}\n"));
        }
        out
    }
}

/// Reads `n d` followed by one `i j` edge per line (0-based); `#` starts a
/// comment, blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<BipartiteGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::MalformedLine {
                line: line_no,
                reason: format!("expected two fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::MalformedLine {
                line: line_no,
                reason: format!("'{s}' is not a nonnegative integer"),
            })
        };
        let (a, b) = (parse(fields[0])?, parse(fields[1])?);
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                for index in [a, b] {
                    if index >= n {
                        return Err(GraphError::IndexOutOfRange {
                            line: line_no,
                            index,
                            n,
                        });
                    }
                }
                if !seen.insert((a, b)) {
                    return Err(GraphError::DuplicateEdge { x: a, y: b });
                }
                edges.push((a, b));
            }
        }
    }
    let (n, d) = header.ok_or(GraphError::MalformedLine {
        line: 0,
        reason: "missing 'n d' header".into(),
    })?;
    BipartiteGraph::new(n, d, edges)
}

/// Resamples allowed per permutation layer in [`random_regular_bipartite`].
pub const LAYER_REJECTION_BUDGET: usize = 1000;

/// Union of `d` random permutations. Each layer is redrawn until it avoids
/// every edge placed so far; the leftover graph is always regular, so a
/// compatible layer exists.
pub fn random_regular_bipartite(n: usize, d: usize, seed: u64) -> Result<BipartiteGraph, GraphError> {
    if d > n {
        return Err(GraphError::DegreeTooLarge { n, d });
    }
    let mut rng = rng_from_seed(seed);
    let mut x_adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    let mut y_adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    let mut perm: Vec<usize> = (0..n).collect();
    for _layer in 0..d {
        let mut placed = false;
        for _ in 0..LAYER_REJECTION_BUDGET {
            perm.shuffle(&mut rng);
            if perm.iter().enumerate().all(|(x, y)| !x_adj[x].contains(y)) {
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(GraphError::RejectionBudgetExceeded {
                attempts: LAYER_REJECTION_BUDGET,
            });
        }
        for (x, &y) in perm.iter().enumerate() {
            x_adj[x].push(y);
            y_adj[y].push(x);
        }
    }
    Ok(BipartiteGraph::from_adjacency(n, d, x_adj, y_adj))
}
