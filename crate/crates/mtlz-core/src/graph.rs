//! Simple undirected graphs on up to 16 vertices, with the structural
//! queries the classification pipeline is built on: distances, common
//! neighbors, 4-cycles, bipartiteness and layer decompositions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on vertex count; adjacency rows are `u16` bitmasks.
pub const MAX_VERTICES: usize = 16;

/// Distance sentinel for disconnected pairs, strictly larger than any
/// possible path length.
pub const UNREACHABLE: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph has more than {MAX_VERTICES} vertices: {0}")]
    TooManyVertices(usize),
}

/// A simple undirected graph with vertices `0..n`.
///
/// Two graphs compare equal iff they have the same vertex count and the
/// same edge set; edge insertion order never matters.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<u16>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops and
    /// out-of-range endpoints. Duplicate edges are merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut adj = vec![0u16; n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { n, adj })
    }

    pub fn empty(n: usize) -> Graph {
        assert!(n <= MAX_VERTICES);
        Graph { n, adj: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Neighbor bitmask of `v`.
    pub fn adj(&self, v: usize) -> u16 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    /// Adds a new vertex adjacent to the vertices in `nbrs` and returns
    /// its index.
    pub fn add_vertex(&mut self, nbrs: u16) -> usize {
        let v = self.n;
        assert!(v < MAX_VERTICES);
        assert_eq!(nbrs >> v, 0);
        self.n += 1;
        self.adj.push(nbrs);
        for u in BitIter(nbrs) {
            self.adj[u] |= 1 << v;
        }
        v
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in BitIter(self.adj[u] & !((1 << (u + 1)) - 1)) {
                out.push((u, v));
            }
        }
        out
    }

    /// Applies a relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u16; self.n];
        for v in 0..self.n {
            let mut row = 0u16;
            for u in BitIter(self.adj[v]) {
                row |= 1 << perm[u];
            }
            adj[perm[v]] = row;
        }
        Graph { n: self.n, adj }
    }

    /// Checks that `perm` maps the graph onto itself.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        (0..self.n).all(|v| {
            let mut row = 0u16;
            for u in BitIter(self.adj[v]) {
                row |= 1 << perm[u];
            }
            row == self.adj[perm[v]]
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u16;
        loop {
            let mut next = seen;
            for v in BitIter(seen) {
                next |= self.adj[v];
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        seen.count_ones() as usize == self.n
    }

    /// Sorted list of vertices adjacent to both `u` and `w`.
    pub fn common_neighbors(&self, u: usize, w: usize) -> Vec<usize> {
        BitIter(self.adj[u] & self.adj[w]).collect()
    }

    pub fn common_neighbor_count(&self, u: usize, w: usize) -> usize {
        (self.adj[u] & self.adj[w]).count_ones() as usize
    }

    /// BFS distances from `src`; `UNREACHABLE` for other components.
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHABLE; self.n];
        dist[src] = 0;
        let mut frontier = 1u16 << src;
        let mut seen = frontier;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0u16;
            for v in BitIter(frontier) {
                next |= self.adj[v];
            }
            next &= !seen;
            for v in BitIter(next) {
                dist[v] = d;
            }
            seen |= next;
            frontier = next;
        }
        dist
    }

    /// All-pairs hop counts; symmetric with zero diagonal.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.distances_from(v)).collect()
    }

    /// Largest finite pairwise distance.
    pub fn diameter(&self) -> usize {
        let dm = self.distance_matrix();
        dm.iter()
            .flatten()
            .copied()
            .filter(|&d| d != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }

    pub fn contains_triangle(&self) -> Option<(usize, usize, usize)> {
        for (u, v) in self.edges() {
            let both = self.adj[u] & self.adj[v];
            if both != 0 {
                let w = both.trailing_zeros() as usize;
                return Some((u, v, w));
            }
        }
        None
    }

    /// All distinct 4-cycles, each reported once in normalized form.
    pub fn four_cycles(&self) -> Vec<FourCycle> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for c in a + 1..self.n {
                // only neighbors above a may serve as the b/d corners
                let mask = self.adj[a] & self.adj[c] & !((1u16 << (a + 1)) - 1);
                let nbrs: Vec<usize> = BitIter(mask).collect();
                for i in 0..nbrs.len() {
                    for j in i + 1..nbrs.len() {
                        out.push(FourCycle {
                            corners: [a, nbrs[i], c, nbrs[j]],
                        });
                    }
                }
            }
        }
        out
    }

    /// Two-coloring if bipartite, otherwise an odd-cycle witness.
    pub fn bipartition(&self) -> BipartiteResult {
        let mut color = vec![u8::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for root in 0..self.n {
            if color[root] != u8::MAX {
                continue;
            }
            color[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for u in BitIter(self.adj[v]) {
                    if color[u] == u8::MAX {
                        color[u] = 1 - color[v];
                        parent[u] = v;
                        queue.push_back(u);
                    } else if color[u] == color[v] {
                        return BipartiteResult::OddCycle(odd_cycle(&parent, v, u));
                    }
                }
            }
        }
        BipartiteResult::Bipartite(color)
    }

    pub fn is_bipartite(&self) -> bool {
        matches!(self.bipartition(), BipartiteResult::Bipartite(_))
    }

    /// BFS layering rooted at an endpoint of a diameter-realizing path.
    ///
    /// For a connected bipartite graph every edge joins consecutive
    /// layers and the number of layers is diameter + 1.
    pub fn layer_decomposition(&self) -> Result<Layering, LayeringError> {
        if !self.is_connected() {
            return Err(LayeringError::Disconnected);
        }
        if let BipartiteResult::OddCycle(cycle) = self.bipartition() {
            return Err(LayeringError::NotBipartite(cycle));
        }
        let dm = self.distance_matrix();
        let diameter = dm.iter().flatten().copied().max().unwrap_or(0);
        let origin = (0..self.n)
            .find(|&v| dm[v].iter().any(|&d| d == diameter))
            .unwrap_or(0);
        let mut layers = vec![Vec::new(); diameter + 1];
        for v in 0..self.n {
            layers[dm[origin][v]].push(v);
        }
        Ok(Layering { origin, layers })
    }
}

/// Rebuilds the odd cycle closed by the non-tree edge `(v, u)` from BFS
/// parent pointers.
fn odd_cycle(parent: &[usize], v: usize, u: usize) -> Vec<usize> {
    let path_to_root = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pv = path_to_root(v);
    let pu = path_to_root(u);
    // trim the common tail past the lowest common ancestor
    let mut i = pv.len();
    let mut j = pu.len();
    while i > 1 && j > 1 && pv[i - 2] == pu[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut cycle = pv[..i].to_vec();
    cycle.extend(pu[..j - 1].iter().rev());
    cycle
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BipartiteResult {
    Bipartite(Vec<u8>),
    OddCycle(Vec<usize>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayeringError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not bipartite (odd cycle {0:?})")]
    NotBipartite(Vec<usize>),
}

/// A 4-cycle `a-b-c-d` stored as its corner sequence, normalized so that
/// `a` is the smallest corner and `b < d`. The diagonals are `(a, c)`
/// and `(b, d)`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct FourCycle {
    pub corners: [usize; 4],
}

impl FourCycle {
    pub fn a(&self) -> usize {
        self.corners[0]
    }
    pub fn b(&self) -> usize {
        self.corners[1]
    }
    pub fn c(&self) -> usize {
        self.corners[2]
    }
    pub fn d(&self) -> usize {
        self.corners[3]
    }

    /// The four cycle edges as sorted pairs.
    pub fn edges(&self) -> [(usize, usize); 4] {
        let [a, b, c, d] = self.corners;
        [sorted(a, b), sorted(b, c), sorted(c, d), sorted(d, a)]
    }

    /// Renormalizes an arbitrary corner sequence of a 4-cycle.
    pub fn normalize(corners: [usize; 4]) -> FourCycle {
        let pos = (0..4).min_by_key(|&i| corners[i]).unwrap();
        let at = |i: usize| corners[(pos + i) % 4];
        let (a, mut b, c, mut d) = (at(0), at(1), at(2), at(3));
        if b > d {
            std::mem::swap(&mut b, &mut d);
        }
        FourCycle {
            corners: [a, b, c, d],
        }
    }
}

fn sorted(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Ordered partition of the vertices into BFS layers from `origin`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    pub origin: usize,
    pub layers: Vec<Vec<usize>>,
}

impl Layering {
    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.len()).collect()
    }
}

/// Iterates set bit positions of a mask in increasing order.
#[derive(Clone, Copy)]
pub struct BitIter(pub u16);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Graph {
        Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn cube() -> Graph {
        let mut edges = Vec::new();
        for u in 0..8usize {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(8, &edges).unwrap()
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Graph::new(3, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange(2, 2))
        );
    }

    #[test]
    fn edge_set_is_order_independent() {
        let g1 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let g2 = Graph::new(4, &[(3, 0), (2, 1), (0, 1), (2, 3), (1, 0)]).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn square_distances() {
        let g = square();
        let dm = g.distance_matrix();
        assert_eq!(dm[0][2], 2);
        assert_eq!(dm[1][3], 2);
        assert_eq!(g.diameter(), 2);
    }

    #[test]
    fn cube_distances() {
        let g = cube();
        let dm = g.distance_matrix();
        assert_eq!(dm[0][7], 3);
        assert_eq!(g.diameter(), 3);
    }

    #[test]
    fn disconnected_distance_is_sentinel() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.distance_matrix()[0][2], UNREACHABLE);
        assert!(!g.is_connected());
    }

    #[test]
    fn common_neighbors_square_and_k25() {
        let g = square();
        assert_eq!(g.common_neighbors(0, 2), vec![1, 3]);
        // K_{2,5}: hubs 0,1 / spokes 2..7
        let edges: Vec<_> = (2..7).flat_map(|s| [(0, s), (1, s)]).collect();
        let k25 = Graph::new(7, &edges).unwrap();
        assert_eq!(k25.common_neighbors(0, 1).len(), 5);
    }

    #[test]
    fn four_cycle_counts() {
        assert_eq!(square().four_cycles().len(), 1);
        assert_eq!(cube().four_cycles().len(), 6);
        // K_{3,3}
        let edges: Vec<_> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
        let k33 = Graph::new(6, &edges).unwrap();
        assert_eq!(k33.four_cycles().len(), 9);
    }

    #[test]
    fn four_cycles_are_normalized_and_unique() {
        for g in [square(), cube()] {
            let cs = g.four_cycles();
            let mut seen = std::collections::HashSet::new();
            for q in &cs {
                assert_eq!(FourCycle::normalize(q.corners), *q);
                let mut set = q.corners;
                set.sort();
                assert!(seen.insert((set, q.corners[0], q.corners[2])));
                for (u, v) in q.edges() {
                    assert!(g.has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn bipartite_and_odd_cycle() {
        assert!(cube().is_bipartite());
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        match c5.bipartition() {
            BipartiteResult::OddCycle(c) => assert_eq!(c.len(), 5),
            _ => panic!("C5 should not be bipartite"),
        }
    }

    #[test]
    fn layering_of_1221() {
        let g = Graph::new(
            6,
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        let lay = g.layer_decomposition().unwrap();
        assert_eq!(lay.layer_sizes(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn layering_of_k23_rooted_at_hub() {
        let edges: Vec<_> = (2..5).flat_map(|s| [(0, s), (1, s)]).collect();
        let g = Graph::new(5, &edges).unwrap();
        let lay = g.layer_decomposition().unwrap();
        assert_eq!(lay.layer_sizes(), vec![1, 3, 1]);
    }

    #[test]
    fn layering_rejects_odd_cycle_and_disconnected() {
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(matches!(
            c5.layer_decomposition(),
            Err(LayeringError::NotBipartite(_))
        ));
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.layer_decomposition(), Err(LayeringError::Disconnected));
    }
}
