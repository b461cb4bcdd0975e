use crate::error::GraphError;
use crate::function::Permutation;

use super::BipartiteGraph;

/// Perfect matching `x -> y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    x_to_y: Vec<usize>,
}

impl Matching {
    pub fn from_pairs(x_to_y: Vec<usize>) -> Result<Self, GraphError> {
        let mut seen = vec![false; x_to_y.len()];
        for &y in &x_to_y {
            if y >= x_to_y.len() || seen[y] {
                return Err(GraphError::InvalidMatching(format!("{x_to_y:?} is not injective")));
            }
            seen[y] = true;
        }
        Ok(Self { x_to_y })
    }

    pub fn n(&self) -> usize {
        self.x_to_y.len()
    }

    pub fn partner(&self, x: usize) -> usize {
        self.x_to_y[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.x_to_y.iter().copied().enumerate()
    }

    /// The matching read as a permutation `g` with `g(x) = y`.
    pub fn as_permutation(&self) -> Permutation {
        Permutation::from_zero_based(self.x_to_y.clone()).expect("matching is a bijection")
    }

    pub(crate) fn check_perfect_in(&self, g: &BipartiteGraph) -> Result<(), GraphError> {
        if self.n() != g.n() {
            return Err(GraphError::InvalidMatching(format!(
                "matching covers {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        for (x, y) in self.pairs() {
            if !g.has_edge(x, y) {
                return Err(GraphError::InvalidMatching(format!("(x{x}, y{y}) is not an edge")));
            }
        }
        Ok(())
    }
}

/// Augmenting-path matching. Each `x` in index order first takes its
/// lowest-index free neighbour; only if none is free does it search for an
/// augmenting path, again trying neighbours in index order.
pub fn perfect_matching(g: &BipartiteGraph) -> Result<Matching, GraphError> {
    let n = g.n();
    let mut y_mate: Vec<Option<usize>> = vec![None; n];
    let mut x_mate: Vec<Option<usize>> = vec![None; n];
    for x in 0..n {
        let mut visited = vec![false; n];
        if !augment(g, x, &mut visited, &mut x_mate, &mut y_mate) {
            return Err(GraphError::NoPerfectMatching);
        }
    }
    Ok(Matching {
        x_to_y: x_mate.into_iter().map(|m| m.expect("all matched")).collect(),
    })
}

fn augment(
    g: &BipartiteGraph,
    x: usize,
    visited: &mut [bool],
    x_mate: &mut [Option<usize>],
    y_mate: &mut [Option<usize>],
) -> bool {
    if let Some(&y) = g.x_neighbors(x).iter().find(|&&y| y_mate[y].is_none()) {
        visited[y] = true;
        y_mate[y] = Some(x);
        x_mate[x] = Some(y);
        return true;
    }
    for &y in g.x_neighbors(x) {
        if visited[y] {
            continue;
        }
        visited[y] = true;
        let other = y_mate[y].expect("free neighbours handled above");
        if augment(g, other, visited, x_mate, y_mate) {
            y_mate[y] = Some(x);
            x_mate[x] = Some(y);
            return true;
        }
    }
    false
}

/// Splits a `d`-regular bipartite graph into `d` disjoint perfect matchings
/// by repeated extraction.
pub fn one_factorization(g: &BipartiteGraph) -> Result<Vec<Matching>, GraphError> {
    let mut rest = g.clone();
    let mut out = Vec::with_capacity(g.degree());
    for _ in 0..g.degree() {
        let m = perfect_matching(&rest)?;
        rest = rest.without_matching(&m)?;
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_regular_bipartite;
    use std::collections::BTreeSet;

    #[test]
    fn complete_graph_gets_identity() {
        let m = perfect_matching(&BipartiteGraph::complete(5)).unwrap();
        assert_eq!(
            m.pairs().collect::<Vec<_>>(),
            (0..5).map(|i| (i, i)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn single_edge_and_cycle() {
        let g = BipartiteGraph::new(1, 1, [(0, 0)]).unwrap();
        assert_eq!(perfect_matching(&g).unwrap().partner(0), 0);
        let c4 = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let m = perfect_matching(&c4).unwrap();
        m.check_perfect_in(&c4).unwrap();
    }

    #[test]
    fn needs_augmenting_path() {
        // x0 greedily takes y0, which x1 needs
        let g = BipartiteGraph::from_adjacency(2, 1, vec![vec![0, 1], vec![0]], vec![vec![0, 1], vec![0]]);
        let m = perfect_matching(&g).unwrap();
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
    }

    fn assert_factorization(g: &BipartiteGraph, ms: &[Matching]) {
        assert_eq!(ms.len(), g.degree());
        let mut covered = BTreeSet::new();
        for m in ms {
            m.check_perfect_in(g).unwrap();
            for e in m.pairs() {
                assert!(covered.insert(e), "edge {e:?} reused");
            }
        }
        assert_eq!(covered, g.edges().collect());
    }

    #[test]
    fn factorizations() {
        let k55 = BipartiteGraph::complete(5);
        assert_factorization(&k55, &one_factorization(&k55).unwrap());
        let k44 = BipartiteGraph::complete(4);
        assert_factorization(&k44, &one_factorization(&k44).unwrap());
        let single = BipartiteGraph::new(3, 1, [(0, 2), (1, 0), (2, 1)]).unwrap();
        let ms = one_factorization(&single).unwrap();
        assert_eq!(ms[0].pairs().collect::<Vec<_>>(), vec![(0, 2), (1, 0), (2, 1)]);
        for seed in 0..20 {
            let g = random_regular_bipartite(12, 5, seed).unwrap();
            assert_factorization(&g, &one_factorization(&g).unwrap());
        }
    }

    #[test]
    fn rejects_bad_matchings() {
        assert!(Matching::from_pairs(vec![0, 0]).is_err());
        let g = BipartiteGraph::new(2, 1, [(0, 0), (1, 1)]).unwrap();
        let m = Matching::from_pairs(vec![1, 0]).unwrap();
        assert!(g.without_matching(&m).is_err());
    }
}
