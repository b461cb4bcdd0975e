use std::collections::BTreeSet;
use std::fmt;

use crate::error::GraphError;
use crate::function::PartialFunctionSpec;

use super::{BipartiteGraph, Matching, PathDecomposition, Vertex};

/// Vertex sequence of a walk; consecutive vertices are joined by an edge.
pub type Walk = Vec<Vertex>;

/// Which end of each path receives its matching edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Start,
    End,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Start => "start",
            Side::End => "end",
        })
    }
}

/// `f(start) = second_y`: prepending the matching edge of `start` breaks the
/// path exactly when its partner is this vertex.
pub fn extract_avoidance_function(paths: &PathDecomposition) -> PartialFunctionSpec {
    let mut images = vec![None; paths.n()];
    for p in paths.paths() {
        images[p.start] = Some(p.second_y);
    }
    PartialFunctionSpec::from_zero_based(images).expect("targets are y indices below n")
}

/// `f(end) = first_y`, the counterpart of [`extract_avoidance_function`] for
/// appending at the end.
pub fn extract_end_avoidance_function(paths: &PathDecomposition) -> PartialFunctionSpec {
    let mut images = vec![None; paths.n()];
    for p in paths.paths() {
        images[p.end] = Some(p.first_y);
    }
    PartialFunctionSpec::from_zero_based(images).expect("targets are y indices below n")
}

/// Extends every path by the matching edge at its start (`y, start, ...`) or
/// at its end (`..., end, y`).
pub fn attach_matching(paths: &PathDecomposition, m: &Matching, side: Side) -> Result<Vec<Walk>, GraphError> {
    if m.n() != paths.n() {
        return Err(GraphError::InvalidMatching(format!(
            "matching has {} pairs for {} paths",
            m.n(),
            paths.n()
        )));
    }
    let used: BTreeSet<(usize, usize)> = paths.paths().iter().flat_map(|p| p.edges()).collect();
    if let Some((x, y)) = m.pairs().find(|e| used.contains(e)) {
        return Err(GraphError::NotDisjoint { x, y });
    }
    Ok(paths
        .paths()
        .iter()
        .map(|p| {
            let mut walk: Walk = Vec::with_capacity(6);
            match side {
                Side::Start => {
                    walk.push(Vertex::Y(m.partner(p.start)));
                    walk.extend(p.vertices());
                }
                Side::End => {
                    walk.extend(p.vertices());
                    walk.push(Vertex::Y(m.partner(p.end)));
                }
            }
            walk
        })
        .collect())
}

/// First problem found by [`verify_p5_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    WrongLength { subgraph: usize, edges: usize },
    NotAnEdge { subgraph: usize, from: Vertex, to: Vertex },
    RepeatedVertex { subgraph: usize, vertex: Vertex },
    EdgeReused { subgraph: usize, x: usize, y: usize },
    Uncovered { missing: usize },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::WrongLength { subgraph, edges } => {
                write!(f, "subgraph {subgraph} has {edges} edges, expected 5")
            }
            Defect::NotAnEdge { subgraph, from, to } => {
                write!(f, "subgraph {subgraph} steps {from}-{to}, which is not an edge")
            }
            Defect::RepeatedVertex { subgraph, vertex } => {
                write!(f, "subgraph {subgraph}: vertex {vertex} repeated")
            }
            Defect::EdgeReused { subgraph, x, y } => {
                write!(f, "subgraph {subgraph} reuses edge x{x}-y{y}")
            }
            Defect::Uncovered { missing } => write!(f, "{missing} edges not covered"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub defect: Option<Defect>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.defect.is_none()
    }
}

/// Checks that `subgraphs` are simple 5-edge paths that partition `E(g)`.
/// Subgraphs are scanned in order; the first defect is reported.
pub fn verify_p5_decomposition(g: &BipartiteGraph, subgraphs: &[Walk]) -> Verification {
    let fail = |d| Verification { defect: Some(d) };
    let mut covered = BTreeSet::new();
    for (i, walk) in subgraphs.iter().enumerate() {
        let edges = walk.len().saturating_sub(1);
        if edges != 5 {
            return fail(Defect::WrongLength { subgraph: i, edges });
        }
        let mut seen = BTreeSet::new();
        for &v in walk {
            if !seen.insert(v) {
                return fail(Defect::RepeatedVertex { subgraph: i, vertex: v });
            }
        }
        for step in walk.windows(2) {
            let edge = match (step[0], step[1]) {
                (Vertex::X(x), Vertex::Y(y)) | (Vertex::Y(y), Vertex::X(x)) if g.has_edge(x, y) => (x, y),
                (from, to) => return fail(Defect::NotAnEdge { subgraph: i, from, to }),
            };
            if !covered.insert(edge) {
                return fail(Defect::EdgeReused {
                    subgraph: i,
                    x: edge.0,
                    y: edge.1,
                });
            }
        }
    }
    let missing = g.edge_count() - covered.len();
    if missing > 0 {
        return fail(Defect::Uncovered { missing });
    }
    Verification { defect: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{multiplicity_profile, PartialFunctionSpec};
    use crate::graph::DirectedPath;

    fn path(s: &str) -> DirectedPath {
        let t: Vec<&str> = s.split(',').collect();
        let x = |v: &str| v.parse::<usize>().unwrap() - 1;
        let y = |v: &str| (v.as_bytes()[0] - b'A') as usize;
        DirectedPath::new(x(t[0]), y(t[1]), x(t[2]), y(t[3]), x(t[4]))
    }

    fn setup(listing: &[&str]) -> (BipartiteGraph, Matching, PathDecomposition) {
        let k = BipartiteGraph::complete(5);
        let m = Matching::from_pairs((0..5).collect()).unwrap();
        let g4 = k.without_matching(&m).unwrap();
        let d = PathDecomposition::new(&g4, listing.iter().map(|s| path(s)).collect()).unwrap();
        (k, m, d)
    }

    const GOOD: [&str; 5] = ["1,B,3,D,5", "5,C,1,D,2", "2,A,4,E,3", "3,A,5,B,4", "4,C,2,E,1"];
    const BAD: [&str; 5] = ["1,B,5,A,2", "2,D,3,A,4", "4,E,2,C,1", "3,E,1,D,5", "5,C,4,B,3"];

    /// A..E written as 1..5
    fn total(images: &[usize]) -> PartialFunctionSpec {
        PartialFunctionSpec::total(images).unwrap()
    }

    #[test]
    fn avoidance_functions_from_listings() {
        let (_, _, bad) = setup(&BAD);
        // f(1)=A, f(2)=A, f(3)=D, f(4)=C, f(5)=B
        assert_eq!(extract_avoidance_function(&bad), total(&[1, 1, 4, 3, 2]));
        let (_, _, good) = setup(&GOOD);
        // f(1)=D, f(2)=E, f(3)=B, f(4)=E, f(5)=D
        assert_eq!(extract_avoidance_function(&good), total(&[4, 5, 2, 5, 4]));
        for d in [&bad, &good] {
            assert!(multiplicity_profile(&extract_avoidance_function(d)).is_two_max());
            assert!(multiplicity_profile(&extract_end_avoidance_function(d)).is_two_max());
        }
    }

    #[test]
    fn good_listing_verifies() {
        let (k, m, d) = setup(&GOOD);
        let walks = attach_matching(&d, &m, Side::Start).unwrap();
        assert_eq!(
            walks[0],
            vec![
                Vertex::Y(0),
                Vertex::X(0),
                Vertex::Y(1),
                Vertex::X(2),
                Vertex::Y(3),
                Vertex::X(4)
            ]
        );
        assert!(verify_p5_decomposition(&k, &walks).is_valid());
    }

    #[test]
    fn bad_listing_repeats_a() {
        let (k, m, d) = setup(&BAD);
        let walks = attach_matching(&d, &m, Side::Start).unwrap();
        let v = verify_p5_decomposition(&k, &walks);
        assert_eq!(
            v.defect,
            Some(Defect::RepeatedVertex {
                subgraph: 0,
                vertex: Vertex::Y(0)
            })
        );
        assert_eq!(v.defect.unwrap().to_string(), "subgraph 0: vertex y0 repeated");
    }

    #[test]
    fn end_attachment() {
        let (k, m, d) = setup(&GOOD);
        let walks = attach_matching(&d, &m, Side::End).unwrap();
        assert_eq!(walks[0][5], Vertex::Y(4));
        let f_end = extract_end_avoidance_function(&d);
        let ok = crate::function::is_f_derangement(&m.as_permutation(), &f_end).unwrap();
        assert_eq!(verify_p5_decomposition(&k, &walks).is_valid(), ok);
    }

    #[test]
    fn coverage_and_disjointness() {
        let (k, m, d) = setup(&GOOD);
        let mut walks = attach_matching(&d, &m, Side::Start).unwrap();
        walks.pop();
        assert_eq!(
            verify_p5_decomposition(&k, &walks).defect,
            Some(Defect::Uncovered { missing: 5 })
        );
        let mut short = attach_matching(&d, &m, Side::Start).unwrap();
        short[4].pop();
        assert!(matches!(
            verify_p5_decomposition(&k, &short).defect,
            Some(Defect::WrongLength { subgraph: 4, edges: 4 })
        ));
        let twice = vec![walks[0].clone(), walks[0].clone()];
        assert!(matches!(
            verify_p5_decomposition(&k, &twice).defect,
            Some(Defect::EdgeReused { subgraph: 1, .. })
        ));
        // a matching that overlaps the paths
        let overlapping = Matching::from_pairs(vec![1, 0, 3, 4, 2]).unwrap();
        assert!(matches!(
            attach_matching(&d, &overlapping, Side::Start),
            Err(GraphError::NotDisjoint { .. })
        ));
    }
}
