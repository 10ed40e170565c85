//! Canonical labeling by iterated partition refinement with backtracking
//! over non-singleton cells, plus automorphism group computation.

use crate::graph::{BitIter, Graph};
use serde::{Deserialize, Serialize};

/// Total-order key identifying a graph up to isomorphism.
///
/// Two graphs have equal `CanonicalForm` iff they are isomorphic. The
/// bytes are the graph6 encoding of the canonically relabeled graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
}

impl std::fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CanonicalForm({})", String::from_utf8_lossy(&self.bytes))
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", String::from_utf8_lossy(&self.bytes))
    }
}

/// Canonical form plus the relabeling permutation that realizes it
/// (`perm[v]` is the canonical label of vertex `v`).
pub fn canonical_form(g: &Graph) -> (CanonicalForm, Vec<usize>) {
    let perm = canonical_labeling(g);
    let canon = g.relabel(&perm);
    (
        CanonicalForm {
            bytes: crate::graph6::encode(&canon).into_bytes(),
        },
        perm,
    )
}

/// The canonically relabeled copy of `g`.
pub fn canonicalize(g: &Graph) -> Graph {
    g.relabel(&canonical_labeling(g))
}

/// Finds the relabeling that minimizes the adjacency encoding over all
/// labelings reachable by refinement + individualization.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let mut best: Option<(Vec<u16>, Vec<usize>)> = None;
    let initial = refine(g, degree_partition(g));
    search(g, initial, &mut best);
    let (_, labeling) = best.unwrap();
    // labeling[i] = old vertex placed at canonical position i; invert
    let mut perm = vec![0usize; n];
    for (pos, &v) in labeling.iter().enumerate() {
        perm[v] = pos;
    }
    perm
}

fn search(g: &Graph, partition: Vec<Vec<usize>>, best: &mut Option<(Vec<u16>, Vec<usize>)>) {
    if let Some(cell_idx) = partition.iter().position(|c| c.len() > 1) {
        for &v in &partition[cell_idx] {
            let mut next = Vec::with_capacity(partition.len() + 1);
            for (i, cell) in partition.iter().enumerate() {
                if i == cell_idx {
                    next.push(vec![v]);
                    next.push(cell.iter().copied().filter(|&u| u != v).collect());
                } else {
                    next.push(cell.clone());
                }
            }
            search(g, refine(g, next), best);
        }
    } else {
        let labeling: Vec<usize> = partition.into_iter().map(|c| c[0]).collect();
        let enc = encode_rows(g, &labeling);
        match best {
            Some((b, _)) if *b <= enc => {}
            _ => *best = Some((enc, labeling)),
        }
    }
}

/// Adjacency rows of `g` relabeled so `labeling[i]` gets label `i`.
fn encode_rows(g: &Graph, labeling: &[usize]) -> Vec<u16> {
    let n = g.n();
    let mut pos = vec![0usize; n];
    for (i, &v) in labeling.iter().enumerate() {
        pos[v] = i;
    }
    let mut rows = vec![0u16; n];
    for (i, &v) in labeling.iter().enumerate() {
        let mut row = 0u16;
        for u in BitIter(g.adj(v)) {
            row |= 1 << pos[u];
        }
        rows[i] = row;
    }
    rows
}

fn degree_partition(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        by_degree[g.degree(v)].push(v);
    }
    by_degree.into_iter().filter(|c| !c.is_empty()).collect()
}

/// Equitable refinement: repeatedly split cells by neighbor counts into
/// every other cell until stable. Deterministic.
fn refine(g: &Graph, mut partition: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u16> = partition
            .iter()
            .map(|cell| cell.iter().fold(0u16, |m, &v| m | 1 << v))
            .collect();
        let mut changed = false;
        let mut next = Vec::with_capacity(partition.len());
        for cell in &partition {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let key = |v: usize| -> Vec<u32> {
                masks.iter().map(|&m| (g.adj(v) & m).count_ones()).collect()
            };
            let mut keyed: Vec<(Vec<u32>, usize)> =
                cell.iter().map(|&v| (key(v), v)).collect();
            keyed.sort();
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for (k, v) in keyed {
                match groups.last_mut() {
                    Some(last) if key(last[0]) == k => last.push(v),
                    _ => groups.push(vec![v]),
                }
            }
            if groups.len() > 1 {
                changed = true;
            }
            next.extend(groups);
        }
        partition = next;
        if !changed {
            return partition;
        }
    }
}

/// All automorphisms of `g` (the full group, which is trivially a
/// generating set; the group order is its length).
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = 0u16;
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    fn extend(
        g: &Graph,
        degrees: &[usize],
        v: usize,
        map: &mut Vec<usize>,
        used: &mut u16,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = g.n();
        if v == n {
            out.push(map.clone());
            return;
        }
        for t in 0..n {
            if *used >> t & 1 == 1 || degrees[t] != degrees[v] {
                continue;
            }
            // adjacency with the already-mapped prefix must be preserved
            let ok = (0..v).all(|u| g.has_edge(u, v) == g.has_edge(map[u], t));
            if !ok {
                continue;
            }
            map[v] = t;
            *used |= 1 << t;
            extend(g, degrees, v + 1, map, used, out);
            *used &= !(1 << t);
            map[v] = usize::MAX;
        }
    }
    extend(g, &degrees, 0, &mut map, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_bipartite(m: usize, n: usize) -> Graph {
        let edges: Vec<_> = (0..m)
            .flat_map(|u| (m..m + n).map(move |v| (u, v)))
            .collect();
        Graph::new(m + n, &edges).unwrap()
    }

    #[test]
    fn relabeled_squares_share_form() {
        let g1 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let g2 = Graph::new(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(canonical_form(&g1).0, canonical_form(&g2).0);
    }

    #[test]
    fn square_and_path_differ() {
        let sq = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_ne!(canonical_form(&sq).0, canonical_form(&p4).0);
    }

    #[test]
    fn perm_realizes_form() {
        let g = Graph::new(5, &[(0, 3), (3, 1), (1, 4), (4, 0), (2, 3)]).unwrap();
        let (form, perm) = canonical_form(&g);
        let relabeled = g.relabel(&perm);
        assert_eq!(crate::graph6::encode(&relabeled).into_bytes(), form.bytes);
    }

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(automorphisms(&complete_bipartite(1, 1)).len(), 2);
        let sq = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(automorphisms(&sq).len(), 8);
        assert_eq!(automorphisms(&complete_bipartite(3, 3)).len(), 72);
    }

    #[test]
    fn k33_automorphisms_match_brute_force() {
        let g = complete_bipartite(3, 3);
        let mut count = 0;
        let mut perm: Vec<usize> = (0..6).collect();
        // iterate all 6! permutations via Heap's algorithm
        fn heap(k: usize, perm: &mut Vec<usize>, g: &Graph, count: &mut usize) {
            if k == 1 {
                if g.is_automorphism(perm) {
                    *count += 1;
                }
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, g, count);
                if k % 2 == 0 {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        heap(6, &mut perm, &g, &mut count);
        assert_eq!(count, 72);
        assert_eq!(automorphisms(&g).len(), count);
    }
}
