//! Edge orientations (the coupling signs s^{ab}), 4-cycle orientation
//! types, and enumeration of valid orientations up to graph
//! automorphisms and global arrow reversal.

use crate::canon::automorphisms;
use crate::graph::{FourCycle, Graph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A direction per edge of a graph.
///
/// Edges are indexed in the sorted order of `Graph::edges()`. For edge
/// `(u, v)` with `u < v`, bit 0 means the arrow points u -> v, i.e.
/// `s(u, v) = -1`; bit 1 means v -> u, i.e. `s(u, v) = +1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub edges: Vec<(usize, usize)>,
    pub dirs: u32,
}

impl Orientation {
    pub fn new(g: &Graph, dirs: u32) -> Orientation {
        let edges = g.edges();
        assert!(edges.len() <= 32);
        Orientation { edges, dirs }
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    /// The sign s^{uv} = -s^{vu} of the edge (u, v).
    pub fn sign(&self, u: usize, v: usize) -> i8 {
        let idx = self.edge_index(u, v).expect("not an edge");
        let bit = self.dirs >> idx & 1;
        // bit 0: arrow min->max, s^{min,max} = -1
        let s = if bit == 0 { -1 } else { 1 };
        if u < v {
            s
        } else {
            -s
        }
    }

    /// True if the arrow on edge (u, v) points u -> v.
    pub fn arrow_from(&self, u: usize, v: usize) -> bool {
        self.sign(u, v) == -1
    }

    pub fn reversed(&self) -> Orientation {
        Orientation {
            edges: self.edges.clone(),
            dirs: self.dirs ^ low_mask(self.edges.len()),
        }
    }

    /// Image under a vertex permutation (`perm[v]` is the new label).
    pub fn permuted(&self, perm: &[usize]) -> Orientation {
        let mut new_edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| sorted(perm[u], perm[v]))
            .collect();
        new_edges.sort();
        let mut dirs = 0u32;
        for (idx, &(u, v)) in self.edges.iter().enumerate() {
            let (pu, pv) = (perm[u], perm[v]);
            let key = sorted(pu, pv);
            let new_idx = new_edges.binary_search(&key).unwrap();
            let arrow_to_max = if pu < pv {
                // arrow u->v keeps direction pu->pv
                self.dirs >> idx & 1 == 1
            } else {
                self.dirs >> idx & 1 == 0
            };
            if arrow_to_max {
                dirs |= 1 << new_idx;
            }
        }
        Orientation {
            edges: new_edges,
            dirs,
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

fn low_mask(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Orientation pattern of a single 4-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleType {
    /// One source and one sink at opposite corners.
    NonBipartite,
    /// Two sources at opposite corners, two sinks at the other two.
    Bipartite,
    /// Any other pattern (cyclic, or adjacent source/sink).
    Forbidden,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrientationError {
    #[error("4-cycle {0:?} has a forbidden orientation")]
    ForbiddenCycle([usize; 4]),
    #[error("graph has more than 32 edges")]
    TooManyEdges,
}

/// Classifies a 4-cycle from the in/out degrees of its corners
/// restricted to the cycle edges.
pub fn cycle_type(o: &Orientation, q: &FourCycle) -> CycleType {
    let [a, b, c, d] = q.corners;
    let ring = [a, b, c, d];
    // out-degree of each corner within the cycle
    let mut out = [0u8; 4];
    for i in 0..4 {
        let u = ring[i];
        for v in [ring[(i + 1) % 4], ring[(i + 3) % 4]] {
            if o.arrow_from(u, v) {
                out[i] += 1;
            }
        }
    }
    let sources: Vec<usize> = (0..4).filter(|&i| out[i] == 2).collect();
    let sinks: Vec<usize> = (0..4).filter(|&i| out[i] == 0).collect();
    match (sources.as_slice(), sinks.as_slice()) {
        ([s], [t]) if s.abs_diff(*t) == 2 => CycleType::NonBipartite,
        ([s1, s2], [t1, t2]) if s2 - s1 == 2 && t2 - t1 == 2 => CycleType::Bipartite,
        _ => CycleType::Forbidden,
    }
}

/// Number of 4-cycles in the bipartite orientation; errors if any cycle
/// is forbidden.
pub fn bipartite_cycle_count(g: &Graph, o: &Orientation) -> Result<usize, OrientationError> {
    let mut count = 0;
    for q in g.four_cycles() {
        match cycle_type(o, &q) {
            CycleType::Bipartite => count += 1,
            CycleType::NonBipartite => {}
            CycleType::Forbidden => return Err(OrientationError::ForbiddenCycle(q.corners)),
        }
    }
    Ok(count)
}

/// All orientations with no forbidden 4-cycle, before any symmetry
/// reduction, enumerated with incremental pruning.
pub fn all_valid_orientations(g: &Graph) -> Vec<Orientation> {
    let edges = g.edges();
    assert!(edges.len() <= 32, "orientation enumeration limited to 32 edges");
    let edge_idx = |u: usize, v: usize| edges.binary_search(&sorted(u, v)).unwrap();
    // for each cycle: its edge indices and the position of its last edge
    let cycles: Vec<(FourCycle, [usize; 4], usize)> = g
        .four_cycles()
        .into_iter()
        .map(|q| {
            let idx = q.edges().map(|(u, v)| edge_idx(u, v));
            let last = *idx.iter().max().unwrap();
            (q, idx, last)
        })
        .collect();
    let mut out = Vec::new();
    let mut scratch = Orientation {
        edges: edges.clone(),
        dirs: 0,
    };
    fn rec(
        cycles: &[(FourCycle, [usize; 4], usize)],
        pos: usize,
        scratch: &mut Orientation,
        out: &mut Vec<Orientation>,
    ) {
        if pos == scratch.edges.len() {
            out.push(scratch.clone());
            return;
        }
        for bit in 0..2u32 {
            if bit == 0 {
                scratch.dirs &= !(1 << pos);
            } else {
                scratch.dirs |= 1 << pos;
            }
            let ok = cycles
                .iter()
                .filter(|(_, _, last)| *last == pos)
                .all(|(q, _, _)| cycle_type(scratch, q) != CycleType::Forbidden);
            if ok {
                rec(cycles, pos + 1, scratch, out);
            }
        }
        scratch.dirs &= !(1 << pos);
    }
    rec(&cycles, 0, &mut scratch, &mut out);
    out
}

/// One representative per equivalence class of valid orientations,
/// where equivalence is generated by graph automorphisms and global
/// arrow reversal. Representatives are the minimal `dirs` masks of
/// their orbits, in increasing order.
pub fn valid_orientations(g: &Graph) -> Vec<Orientation> {
    let autos = automorphisms(g);
    let all = all_valid_orientations(g);
    let mut reps = Vec::new();
    for o in &all {
        let mut orbit_min = u32::MAX;
        for p in &autos {
            let img = o.permuted(p);
            orbit_min = orbit_min.min(img.dirs).min(img.reversed().dirs);
        }
        if o.dirs == orbit_min {
            reps.push(o.clone());
        }
    }
    reps.sort_by_key(|o| o.dirs);
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::known_graph;

    /// Square with the source-figure labeling: vertices 1..4 are 0..3,
    /// edges 13, 14, 23, 24.
    fn paper_square() -> Graph {
        Graph::new(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    fn orient(g: &Graph, arrows: &[(usize, usize)]) -> Orientation {
        let edges = g.edges();
        let mut dirs = 0u32;
        for &(u, v) in arrows {
            let key = if u < v { (u, v) } else { (v, u) };
            let idx = edges.binary_search(&key).unwrap();
            if u > v {
                dirs |= 1 << idx;
            }
        }
        Orientation { edges, dirs }
    }

    #[test]
    fn sign_convention() {
        let g = paper_square();
        let o = orient(&g, &[(0, 2), (0, 3), (2, 1), (3, 1)]);
        assert_eq!(o.sign(0, 2), -1);
        assert_eq!(o.sign(2, 0), 1);
        assert_eq!(o.sign(2, 1), -1);
        assert_eq!(o.sign(1, 2), 1);
    }

    #[test]
    fn figure_cycle_types() {
        let g = paper_square();
        let q = g.four_cycles()[0];
        // non-bipartite: 1->3, 1->4, 3->2, 4->2 (0-based: 0->2, 0->3, 2->1, 3->1)
        let nb = orient(&g, &[(0, 2), (0, 3), (2, 1), (3, 1)]);
        assert_eq!(cycle_type(&nb, &q), CycleType::NonBipartite);
        // bipartite: 1->3, 1->4, 2->3, 2->4
        let b = orient(&g, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(cycle_type(&b, &q), CycleType::Bipartite);
        // cyclic: 1->3, 3->2, 2->4, 4->1
        let cyc = orient(&g, &[(0, 2), (2, 1), (1, 3), (3, 0)]);
        assert_eq!(cycle_type(&cyc, &q), CycleType::Forbidden);
    }

    #[test]
    fn isolated_square_census() {
        // all 16 orientations of a lone 4-cycle: 4 non-bipartite,
        // 2 bipartite, 10 forbidden
        let g = paper_square();
        let q = g.four_cycles()[0];
        let mut counts = [0usize; 3];
        for dirs in 0..16u32 {
            let o = Orientation::new(&g, dirs);
            match cycle_type(&o, &q) {
                CycleType::NonBipartite => counts[0] += 1,
                CycleType::Bipartite => counts[1] += 1,
                CycleType::Forbidden => counts[2] += 1,
            }
        }
        assert_eq!(counts, [4, 2, 10]);
        assert_eq!(all_valid_orientations(&g).len(), 6);
    }

    #[test]
    fn reversal_preserves_cycle_type() {
        let g = known_graph("cube").unwrap();
        for o in all_valid_orientations(&g).iter().take(50) {
            let r = o.reversed();
            for q in g.four_cycles() {
                assert_eq!(cycle_type(o, &q), cycle_type(&r, &q));
            }
        }
    }

    #[test]
    fn orientation_class_counts() {
        assert_eq!(valid_orientations(&known_graph("square").unwrap()).len(), 2);
        assert_eq!(valid_orientations(&known_graph("K3,3").unwrap()).len(), 2);
    }

    #[test]
    fn k33_bipartite_counts() {
        let g = known_graph("K3,3").unwrap();
        let classes = valid_orientations(&g);
        let mut counts: Vec<usize> = classes
            .iter()
            .map(|o| bipartite_cycle_count(&g, o).unwrap())
            .collect();
        counts.sort();
        assert_eq!(counts, vec![3, 9]);
    }

    #[test]
    fn k33_bipartite_count_always_odd() {
        let g = known_graph("K3,3").unwrap();
        for o in all_valid_orientations(&g) {
            assert_eq!(bipartite_cycle_count(&g, &o).unwrap() % 2, 1);
        }
    }

    #[test]
    fn permutation_respects_arrows() {
        let g = paper_square();
        let o = orient(&g, &[(0, 2), (0, 3), (2, 1), (3, 1)]);
        let autos = crate::canon::automorphisms(&g);
        for p in autos.iter().take(8) {
            let img = o.permuted(p);
            for &(u, v) in &g.edges() {
                assert_eq!(o.arrow_from(u, v), img.arrow_from(p[u], p[v]));
            }
        }
    }
}
