//! Structural properties and the two no-go rules, with witnesses.

use crate::graph::Graph;
use serde::{Deserialize, Serialize};

/// Staged classification result. Stages are checked in order and the
/// first failure is reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    RejectedDisconnected,
    /// A triangle (u, v, w).
    Rejected3Cycle([usize; 3]),
    /// A vertex pair with exactly one common neighbor.
    RejectedLength2Path {
        pair: (usize, usize),
        only_path_via: usize,
    },
    /// A K_{3,3} embedding: a triple and three of its common neighbors.
    RejectedK33 {
        triple: [usize; 3],
        common: [usize; 3],
    },
    /// A 1221 embedding in which all four outer pairs have exactly two
    /// common neighbors.
    Rejected1221(Embedding1221),
    Allowed,
}

impl Verdict {
    pub fn stage_name(&self) -> &'static str {
        match self {
            Verdict::RejectedDisconnected => "rejected-disconnected",
            Verdict::Rejected3Cycle(_) => "rejected-3-cycle",
            Verdict::RejectedLength2Path { .. } => "rejected-length-2-path",
            Verdict::RejectedK33 { .. } => "rejected-k33",
            Verdict::Rejected1221(_) => "rejected-1221",
            Verdict::Allowed => "allowed",
        }
    }

    pub fn is_allowed(&self) -> bool {
        matches!(self, Verdict::Allowed)
    }

    /// Passes the basic properties (everything before the no-go rules).
    pub fn passes_properties(&self) -> bool {
        !matches!(
            self,
            Verdict::RejectedDisconnected
                | Verdict::Rejected3Cycle(_)
                | Verdict::RejectedLength2Path { .. }
        )
    }
}

/// A 1221 layer subgraph: apex `a`, middle 4-cycle `{b,c} x {d,e}`,
/// tail `f`, with the common-neighbor counts of the four outer pairs
/// (a,d), (a,e), (b,f), (c,f).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding1221 {
    pub a: usize,
    pub bc: (usize, usize),
    pub de: (usize, usize),
    pub f: usize,
    pub outer_pair_counts: [usize; 4],
}

/// Pass iff the graph has no triangle; otherwise one triangle witness.
pub fn check_no_3cycle(g: &Graph) -> Result<(), [usize; 3]> {
    match g.contains_triangle() {
        None => Ok(()),
        Some((u, v, w)) => Err([u, v, w]),
    }
}

/// Pass iff every vertex pair with at least one common neighbor has at
/// least two. Expects a triangle-free graph.
pub fn check_length2_path(g: &Graph) -> Result<(), ((usize, usize), usize)> {
    for u in 0..g.n() {
        for w in u + 1..g.n() {
            let common = g.common_neighbors(u, w);
            if common.len() == 1 {
                return Err(((u, w), common[0]));
            }
        }
    }
    Ok(())
}

/// Searches for a K_{3,3} subgraph: some vertex triple with at least 3
/// common neighbors.
pub fn detect_k33(g: &Graph) -> Option<([usize; 3], [usize; 3])> {
    let n = g.n();
    for x in 0..n {
        for y in x + 1..n {
            let xy = g.adj(x) & g.adj(y);
            if (xy.count_ones() as usize) < 3 {
                continue;
            }
            for z in y + 1..n {
                let all = xy & g.adj(z);
                if all.count_ones() >= 3 {
                    let common: Vec<usize> = crate::graph::BitIter(all).take(3).collect();
                    return Some(([x, y, z], [common[0], common[1], common[2]]));
                }
            }
        }
    }
    None
}

/// Enumerates every 1221 embedding, deduplicated by the symmetries
/// b<->c, d<->e and (a, bc, de, f) <-> (f, de, bc, a).
pub fn embeddings_1221(g: &Graph) -> Vec<Embedding1221> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for q in g.four_cycles() {
        // the middle 4-cycle b-d-c-e: diagonal pairs {b,c} and {d,e}
        let diagonals = [
            ((q.a(), q.c()), (q.b(), q.d())),
            ((q.b(), q.d()), (q.a(), q.c())),
        ];
        for ((b, c), (d, e)) in diagonals {
            let exclude = 1u16 << b | 1 << c | 1 << d | 1 << e;
            let apexes = g.adj(b) & g.adj(c) & !exclude;
            let tails = g.adj(d) & g.adj(e) & !exclude;
            for a in crate::graph::BitIter(apexes) {
                for f in crate::graph::BitIter(tails) {
                    if a == f {
                        continue;
                    }
                    let fwd = (a, (b, c), (d, e), f);
                    let rev = (f, (d, e), (b, c), a);
                    if !seen.insert(fwd.min(rev)) {
                        continue;
                    }
                    out.push(Embedding1221 {
                        a,
                        bc: (b, c),
                        de: (d, e),
                        f,
                        outer_pair_counts: [
                            g.common_neighbor_count(a, d),
                            g.common_neighbor_count(a, e),
                            g.common_neighbor_count(b, f),
                            g.common_neighbor_count(c, f),
                        ],
                    });
                }
            }
        }
    }
    out
}

/// Pass iff no 1221 embedding has all four outer pairs with exactly two
/// common neighbors. Expects a triangle-free graph.
pub fn check_1221_rule(g: &Graph) -> Result<(), Embedding1221> {
    for emb in embeddings_1221(g) {
        if emb.outer_pair_counts.iter().all(|&c| c == 2) {
            return Err(emb);
        }
    }
    Ok(())
}

/// Runs all stages in order and reports the first failure.
pub fn classify(g: &Graph) -> Verdict {
    if !g.is_connected() {
        return Verdict::RejectedDisconnected;
    }
    if let Err(t) = check_no_3cycle(g) {
        return Verdict::Rejected3Cycle(t);
    }
    if let Err((pair, via)) = check_length2_path(g) {
        return Verdict::RejectedLength2Path {
            pair,
            only_path_via: via,
        };
    }
    if let Some((triple, common)) = detect_k33(g) {
        return Verdict::RejectedK33 { triple, common };
    }
    if let Err(emb) = check_1221_rule(g) {
        return Verdict::Rejected1221(emb);
    }
    Verdict::Allowed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::known_graph;

    #[test]
    fn triangle_witness() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(check_no_3cycle(&g), Err([0, 1, 2]));
        assert!(check_no_3cycle(&known_graph("K3,3").unwrap()).is_ok());
        assert!(check_no_3cycle(&known_graph("cube+1").unwrap()).is_ok());
    }

    #[test]
    fn length2_path_examples() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(check_length2_path(&p3), Err(((0, 2), 1)));
        assert!(check_length2_path(&known_graph("square").unwrap()).is_ok());
        assert!(check_length2_path(&known_graph("K1,1").unwrap()).is_ok());
    }

    #[test]
    fn k33_detection() {
        assert!(detect_k33(&known_graph("K3,3").unwrap()).is_some());
        assert!(detect_k33(&known_graph("K3,4").unwrap()).is_some());
        assert!(detect_k33(&known_graph("cube").unwrap()).is_none());
        if let Some((triple, common)) = detect_k33(&known_graph("K3,3").unwrap()) {
            let g = known_graph("K3,3").unwrap();
            for &t in &triple {
                for &c in &common {
                    assert!(g.has_edge(t, c));
                }
            }
        }
    }

    #[test]
    fn rule_1221_examples() {
        assert!(check_1221_rule(&known_graph("1221").unwrap()).is_err());
        assert!(check_1221_rule(&known_graph("1222").unwrap()).is_err());
        assert!(check_1221_rule(&known_graph("cube").unwrap()).is_ok());
    }

    #[test]
    fn cube_has_no_1221_embedding() {
        assert!(embeddings_1221(&known_graph("cube").unwrap()).is_empty());
    }

    #[test]
    fn classify_examples() {
        assert!(matches!(
            classify(&known_graph("K3,3").unwrap()),
            Verdict::RejectedK33 { .. }
        ));
        assert!(matches!(
            classify(&known_graph("12221").unwrap()),
            Verdict::Rejected1221(_)
        ));
        assert_eq!(classify(&known_graph("cube+1").unwrap()), Verdict::Allowed);
        assert_eq!(
            classify(&Graph::new(4, &[(0, 1), (2, 3)]).unwrap()),
            Verdict::RejectedDisconnected
        );
    }
}
