use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::GraphError;
use crate::seed::rng_from_seed;

use super::{BipartiteGraph, Vertex};

/// One oriented edge between `x` and `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub x: usize,
    pub y: usize,
    pub x_to_y: bool,
}

impl Arc {
    pub fn tail(&self) -> Vertex {
        if self.x_to_y {
            Vertex::X(self.x)
        } else {
            Vertex::Y(self.y)
        }
    }

    pub fn head(&self) -> Vertex {
        if self.x_to_y {
            Vertex::Y(self.y)
        } else {
            Vertex::X(self.x)
        }
    }
}

/// An orientation of every edge of a bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    n: usize,
    arcs: Vec<Arc>,
}

impl Orientation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.arcs.iter().filter(|a| a.tail() == v).count()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.arcs.iter().filter(|a| a.head() == v).count()
    }

    /// Whether every vertex has equal in- and out-degree.
    pub fn is_balanced(&self) -> bool {
        let mut balance = vec![0i64; 2 * self.n];
        let idx = |v: Vertex| match v {
            Vertex::X(i) => i,
            Vertex::Y(j) => self.n + j,
        };
        for a in &self.arcs {
            balance[idx(a.tail())] += 1;
            balance[idx(a.head())] -= 1;
        }
        balance.iter().all(|&b| b == 0)
    }
}

/// Orients each component along an Eulerian circuit (Hierholzer). The start
/// vertex of each component and the order neighbours are tried in are drawn
/// from `seed`.
pub fn eulerian_orientation(g: &BipartiteGraph, seed: u64) -> Result<Orientation, GraphError> {
    let n = g.n();
    if !g.degree().is_multiple_of(2) && n > 0 {
        return Err(GraphError::OddDegree {
            vertex: "x0".into(),
            degree: g.degree(),
        });
    }
    let mut rng = rng_from_seed(seed);
    // vertices 0..n are X, n..2n are Y; edge e joins x and y
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for (e, &(x, y)) in edges.iter().enumerate() {
        incident[x].push(e);
        incident[n + y].push(e);
    }
    for list in incident.iter_mut() {
        list.shuffle(&mut rng);
    }
    let mut used = vec![false; edges.len()];
    let mut next = vec![0usize; 2 * n];
    let mut direction: Vec<Option<bool>> = vec![None; edges.len()];

    let mut starts: Vec<usize> = (0..2 * n).collect();
    let offset = if n == 0 { 0 } else { rng.gen_range(0..2 * n) };
    starts.rotate_left(offset);

    for start in starts {
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            let list = &incident[v];
            while next[v] < list.len() && used[list[next[v]]] {
                next[v] += 1;
            }
            if next[v] == list.len() {
                stack.pop();
                continue;
            }
            let e = list[next[v]];
            used[e] = true;
            let (x, y) = edges[e];
            let from_x = v == x;
            direction[e] = Some(from_x);
            stack.push(if from_x { n + y } else { x });
        }
    }

    let arcs = edges
        .iter()
        .zip(direction)
        .map(|(&(x, y), d)| Arc {
            x,
            y,
            x_to_y: d.expect("every edge traversed"),
        })
        .collect();
    Ok(Orientation { n, arcs })
}
