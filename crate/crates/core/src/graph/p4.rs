//! Directed decompositions of a 4-regular bipartite graph into paths
//! `x -> y -> x -> y -> x` in which every `x` is the start of one path, the
//! center of one and the end of one.
//!
//! Any such decomposition orients the graph with in-degree = out-degree = 2
//! everywhere, so the randomized search works inside an Eulerian orientation:
//!
//! 1. at every `y`, pair its two in-arcs with its two out-arcs, giving `2n`
//!    two-edge paths `a -> y -> b`;
//! 2. at every `x`, one incoming two-edge path is joined to one outgoing one
//!    (the center passage); the other incoming one ends at `x`, the other
//!    outgoing one starts there.
//!
//! The second step is consistent exactly when each two-edge path is joined at one end
//! only. Viewing the "in" and "out" sides of each `x` as nodes and the
//! two-edge paths as edges between them gives a union of even cycles, and the
//! consistent choices are one alternating sign per cycle. The only remaining
//! constraint is that a joined path does not return to its own start.
//!
//! Attempts are restarted with fresh pairings, re-orienting periodically. Small
//! graphs fall back to an exhaustive backtracking search.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::GraphError;
use crate::seed::{derive_seed, rng_from_seed};

use super::{eulerian_orientation, BipartiteGraph, Vertex};

/// Path `start -> first_y -> center -> second_y -> end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedPath {
    pub start: usize,
    pub first_y: usize,
    pub center: usize,
    pub second_y: usize,
    pub end: usize,
}

impl DirectedPath {
    pub fn new(start: usize, first_y: usize, center: usize, second_y: usize, end: usize) -> Self {
        Self {
            start,
            first_y,
            center,
            second_y,
            end,
        }
    }

    pub fn vertices(&self) -> [Vertex; 5] {
        [
            Vertex::X(self.start),
            Vertex::Y(self.first_y),
            Vertex::X(self.center),
            Vertex::Y(self.second_y),
            Vertex::X(self.end),
        ]
    }

    /// Edges as `(x, y)` pairs in path order.
    pub fn edges(&self) -> [(usize, usize); 4] {
        [
            (self.start, self.first_y),
            (self.center, self.first_y),
            (self.center, self.second_y),
            (self.end, self.second_y),
        ]
    }
}

impl fmt::Display for DirectedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.vertices();
        write!(f, "{} {} {} {} {}", v[0], v[1], v[2], v[3], v[4])
    }
}

/// `n` directed paths, sorted by start vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    paths: Vec<DirectedPath>,
}

impl PathDecomposition {
    /// Wraps `paths` and checks it against `g4`.
    pub fn new(g4: &BipartiteGraph, mut paths: Vec<DirectedPath>) -> Result<Self, GraphError> {
        paths.sort();
        let d = Self { paths };
        d.validate(g4)?;
        Ok(d)
    }

    pub fn paths(&self) -> &[DirectedPath] {
        &self.paths
    }

    pub fn n(&self) -> usize {
        self.paths.len()
    }

    /// The path starting at `x`.
    pub fn starting_at(&self, x: usize) -> Option<&DirectedPath> {
        self.paths.iter().find(|p| p.start == x)
    }

    /// Edge partition of `g4` plus one start, one center and one end role per
    /// `x`.
    pub fn validate(&self, g4: &BipartiteGraph) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidDecomposition(msg));
        let n = g4.n();
        if self.paths.len() != n {
            return bad(format!("{} paths for {} start vertices", self.paths.len(), n));
        }
        let mut roles = vec![[0usize; 3]; n];
        let mut covered = BTreeSet::new();
        for p in &self.paths {
            for x in [p.start, p.center, p.end] {
                if x >= n {
                    return bad(format!("path {p} leaves the graph"));
                }
            }
            if p.start == p.end {
                return bad(format!("path {p} is closed"));
            }
            roles[p.start][0] += 1;
            roles[p.center][1] += 1;
            roles[p.end][2] += 1;
            for (x, y) in p.edges() {
                if !g4.has_edge(x, y) {
                    return bad(format!("path {p} uses non-edge (x{x}, y{y})"));
                }
                if !covered.insert((x, y)) {
                    return bad(format!("edge (x{x}, y{y}) used twice"));
                }
            }
        }
        if covered.len() != g4.edge_count() {
            return bad(format!("{} of {} edges covered", covered.len(), g4.edge_count()));
        }
        if let Some(x) = roles.iter().position(|r| *r != [1, 1, 1]) {
            return bad(format!("x{x} has start/center/end counts {:?}", roles[x]));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct P4Config {
    /// Randomized attempts before giving up (or falling back).
    pub restarts: usize,
    /// A fresh Eulerian orientation is drawn after this many attempts.
    pub reorient_every: usize,
    /// Graphs with at most this many vertices per side get an exhaustive
    /// search once the randomized attempts run out.
    pub exhaustive_max_n: usize,
}

impl Default for P4Config {
    fn default() -> Self {
        Self {
            restarts: 10_000,
            reorient_every: 100,
            exhaustive_max_n: 10,
        }
    }
}

pub fn p4_decompose(g4: &BipartiteGraph, seed: u64, budget: usize) -> Result<PathDecomposition, GraphError> {
    p4_decompose_with(
        g4,
        seed,
        P4Config {
            restarts: budget,
            ..P4Config::default()
        },
    )
}

pub fn p4_decompose_with(g4: &BipartiteGraph, seed: u64, config: P4Config) -> Result<PathDecomposition, GraphError> {
    if g4.degree() != 4 {
        return Err(GraphError::NotFourRegular(g4.degree()));
    }
    let n = g4.n();
    let mut rng = rng_from_seed(derive_seed(seed, u64::MAX));
    let reorient_every = config.reorient_every.max(1);
    let mut frame = None;
    for attempt in 0..config.restarts {
        if attempt % reorient_every == 0 {
            let o = eulerian_orientation(g4, derive_seed(seed, (attempt / reorient_every) as u64))?;
            frame = Some(Frame::new(n, o.arcs()));
        }
        let frame = frame.as_ref().expect("orientation drawn on first attempt");
        if let Some(paths) = frame.attempt(&mut rng) {
            return PathDecomposition::new(g4, paths);
        }
    }
    if n <= config.exhaustive_max_n {
        if let Some(d) = p4_decompose_exhaustive(g4)? {
            return Ok(d);
        }
    }
    Err(GraphError::BudgetExhausted {
        restarts: config.restarts,
    })
}

/// Arcs of one orientation grouped around each `y`.
struct Frame {
    n: usize,
    /// `x` with an arc into `y`
    y_in: Vec<[usize; 2]>,
    /// `x` reached by an arc out of `y`
    y_out: Vec<[usize; 2]>,
}

impl Frame {
    fn new(n: usize, arcs: &[super::Arc]) -> Self {
        let mut y_in = vec![Vec::with_capacity(2); n];
        let mut y_out = vec![Vec::with_capacity(2); n];
        for a in arcs {
            if a.x_to_y {
                y_in[a.y].push(a.x);
            } else {
                y_out[a.y].push(a.x);
            }
        }
        let pair = |v: Vec<usize>| -> [usize; 2] { [v[0], v[1]] };
        Self {
            n,
            y_in: y_in.into_iter().map(pair).collect(),
            y_out: y_out.into_iter().map(pair).collect(),
        }
    }

    fn attempt(&self, rng: &mut impl rand::Rng) -> Option<Vec<DirectedPath>> {
        let n = self.n;
        // two-edge paths (tail, y, head); index 2y + k
        let mut halves = Vec::with_capacity(2 * n);
        for y in 0..n {
            let swap = rng.gen_bool(0.5) as usize;
            halves.push((self.y_in[y][0], y, self.y_out[y][swap]));
            halves.push((self.y_in[y][1], y, self.y_out[y][1 - swap]));
        }
        let mut into = vec![Vec::with_capacity(2); n];
        let mut out_of = vec![Vec::with_capacity(2); n];
        for (t, &(tail, _, head)) in halves.iter().enumerate() {
            out_of[tail].push(t);
            into[head].push(t);
        }
        let other = |list: &Vec<usize>, t: usize| if list[0] == t { list[1] } else { list[0] };

        // leading[t]: t is joined at its head, i.e. it is the first half of a path
        let mut leading: Vec<Option<bool>> = vec![None; 2 * n];
        for t0 in 0..2 * n {
            if leading[t0].is_some() {
                continue;
            }
            leading[t0] = Some(rng.gen_bool(0.5));
            let mut cur = t0;
            let mut via_head = true;
            loop {
                let list = if via_head {
                    &into[halves[cur].2]
                } else {
                    &out_of[halves[cur].0]
                };
                let nxt = other(list, cur);
                let want = !leading[cur].expect("assigned");
                match leading[nxt] {
                    Some(v) => {
                        debug_assert_eq!(v, want, "alternating cycles are even");
                        break;
                    }
                    None => leading[nxt] = Some(want),
                }
                cur = nxt;
                via_head = !via_head;
            }
        }

        let mut paths = Vec::with_capacity(n);
        for x in 0..n {
            let first = *into[x].iter().find(|&&t| leading[t] == Some(true))?;
            let second = *out_of[x].iter().find(|&&t| leading[t] == Some(false))?;
            let (start, first_y, _) = halves[first];
            let (_, second_y, end) = halves[second];
            if start == end {
                return None;
            }
            paths.push(DirectedPath::new(start, first_y, x, second_y, end));
        }
        Some(paths)
    }
}

/// Complete backtracking search: paths are placed in order of their start
/// vertex, so every decomposition is reachable. `Ok(None)` means none exists.
pub fn p4_decompose_exhaustive(g4: &BipartiteGraph) -> Result<Option<PathDecomposition>, GraphError> {
    if g4.degree() != 4 {
        return Err(GraphError::NotFourRegular(g4.degree()));
    }
    let n = g4.n();
    let mut state = Search {
        g: g4,
        free: vec![vec![false; n]; n],
        centered: vec![false; n],
        ended: vec![false; n],
        paths: Vec::with_capacity(n),
    };
    for (x, y) in g4.edges() {
        state.free[x][y] = true;
    }
    if state.place(0) {
        Ok(Some(PathDecomposition::new(g4, state.paths)?))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    g: &'a BipartiteGraph,
    free: Vec<Vec<bool>>,
    centered: Vec<bool>,
    ended: Vec<bool>,
    paths: Vec<DirectedPath>,
}

impl Search<'_> {
    fn place(&mut self, start: usize) -> bool {
        if start == self.g.n() {
            return true;
        }
        let g = self.g;
        for &y1 in g.x_neighbors(start) {
            if !self.free[start][y1] {
                continue;
            }
            self.free[start][y1] = false;
            for &center in g.y_neighbors(y1) {
                if !self.free[center][y1] || self.centered[center] {
                    continue;
                }
                self.free[center][y1] = false;
                self.centered[center] = true;
                for &y2 in g.x_neighbors(center) {
                    if !self.free[center][y2] {
                        continue;
                    }
                    self.free[center][y2] = false;
                    for &end in g.y_neighbors(y2) {
                        if end == start || !self.free[end][y2] || self.ended[end] {
                            continue;
                        }
                        self.free[end][y2] = false;
                        self.ended[end] = true;
                        self.paths.push(DirectedPath::new(start, y1, center, y2, end));
                        if self.place(start + 1) {
                            return true;
                        }
                        self.paths.pop();
                        self.ended[end] = false;
                        self.free[end][y2] = true;
                    }
                    self.free[center][y2] = true;
                }
                self.centered[center] = false;
                self.free[center][y1] = true;
            }
            self.free[start][y1] = true;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{perfect_matching, random_regular_bipartite, Matching};

    /// K5,5 minus {1A, 2B, 3C, 4D, 5E}, 0-based.
    fn k55_minus_diagonal() -> BipartiteGraph {
        let k = BipartiteGraph::complete(5);
        k.without_matching(&Matching::from_pairs((0..5).collect()).unwrap())
            .unwrap()
    }

    /// Labels 1..5 -> x0..x4, A..E -> y0..y4.
    fn path(s: &str) -> DirectedPath {
        let t: Vec<&str> = s.split(',').collect();
        let x = |v: &str| v.parse::<usize>().unwrap() - 1;
        let y = |v: &str| (v.as_bytes()[0] - b'A') as usize;
        DirectedPath::new(x(t[0]), y(t[1]), x(t[2]), y(t[3]), x(t[4]))
    }

    #[test]
    fn reference_listings_validate() {
        let g = k55_minus_diagonal();
        let good = ["1,B,3,D,5", "5,C,1,D,2", "2,A,4,E,3", "3,A,5,B,4", "4,C,2,E,1"];
        let bad = ["1,B,5,A,2", "2,D,3,A,4", "4,E,2,C,1", "3,E,1,D,5", "5,C,4,B,3"];
        PathDecomposition::new(&g, good.iter().map(|s| path(s)).collect()).unwrap();
        PathDecomposition::new(&g, bad.iter().map(|s| path(s)).collect()).unwrap();
    }

    #[test]
    fn checker_rejects_broken_listings() {
        let g = k55_minus_diagonal();
        let mut paths: Vec<DirectedPath> = ["1,B,3,D,5", "5,C,1,D,2", "2,A,4,E,3", "3,A,5,B,4", "4,C,2,E,1"]
            .iter()
            .map(|s| path(s))
            .collect();
        paths[0] = path("1,B,3,D,4");
        assert!(PathDecomposition::new(&g, paths.clone()).is_err());
        paths.pop();
        assert!(PathDecomposition::new(&g, paths).is_err());
    }

    #[test]
    fn solver_handles_k55_minus_matching() {
        let g = k55_minus_diagonal();
        for seed in 0..20 {
            let d = p4_decompose(&g, seed, 10_000).unwrap();
            d.validate(&g).unwrap();
            assert_eq!(d, p4_decompose(&g, seed, 10_000).unwrap());
        }
    }

    #[test]
    fn complete_four_by_four() {
        let g = BipartiteGraph::complete(4);
        let d = p4_decompose_exhaustive(&g).unwrap().expect("decomposition exists");
        d.validate(&g).unwrap();
        // randomized search with no restarts goes straight to the fallback
        let config = P4Config {
            restarts: 0,
            ..P4Config::default()
        };
        p4_decompose_with(&g, 0, config).unwrap().validate(&g).unwrap();
        p4_decompose(&g, 1, 10_000).unwrap().validate(&g).unwrap();
    }

    #[test]
    fn wrong_degree() {
        assert!(matches!(
            p4_decompose(&BipartiteGraph::complete(3), 0, 10),
            Err(GraphError::NotFourRegular(3))
        ));
        assert!(matches!(
            p4_decompose_exhaustive(&BipartiteGraph::complete(5)),
            Err(GraphError::NotFourRegular(5))
        ));
    }

    #[test]
    fn random_remainders_decompose() {
        for seed in 0..40 {
            let g = random_regular_bipartite(12, 5, seed).unwrap();
            let g4 = g.without_matching(&perfect_matching(&g).unwrap()).unwrap();
            let config = P4Config {
                exhaustive_max_n: 0,
                ..P4Config::default()
            };
            p4_decompose_with(&g4, seed, config).unwrap();
        }
    }

    #[test]
    fn disconnected_remainder() {
        // two disjoint copies of K4,4
        let mut edges = Vec::new();
        for x in 0..4 {
            for y in 0..4 {
                edges.push((x, y));
                edges.push((x + 4, y + 4));
            }
        }
        let g = BipartiteGraph::new(8, 4, edges).unwrap();
        p4_decompose(&g, 0, 10_000).unwrap().validate(&g).unwrap();
    }
}
