//! Sign-level solvability of an oriented graph.
//!
//! For every pair of vertices at distance 2 the two-path interference
//! terms carry relative signs, one per common neighbor. Each 4-cycle
//! couples four of these signs through a parity equation whose right
//! hand side depends on the cycle's orientation type, and each pair
//! additionally needs its signs to not all agree so the interference
//! sum can cancel. Everything lives over GF(2): sign +1 is 0, sign -1
//! is 1. The first sign of every pair is gauge-fixed to +1.

use crate::graph::{FourCycle, Graph};
use crate::orient::{cycle_type, CycleType, Orientation};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// A vertex pair at distance 2 together with its common neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPair {
    pub ends: (usize, usize),
    pub vias: Vec<usize>,
}

/// Where an equation of the sign system came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquationSource {
    /// Parity constraint of one 4-cycle.
    Cycle(FourCycle),
    /// A pair with exactly two common neighbors: its two signs must
    /// differ, and the first is gauged to +1.
    PairSplit { ends: (usize, usize) },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignSystemError {
    #[error("4-cycle {0:?} has a forbidden orientation")]
    ForbiddenCycle([usize; 4]),
    #[error("pair {0:?} has a single common neighbor; its interference term cannot cancel")]
    SinglePath((usize, usize)),
}

#[derive(Debug, Clone)]
struct Equation {
    lhs: Vec<u64>,
    rhs: bool,
    source: EquationSource,
}

/// The GF(2) parity system of one oriented graph, before solving.
#[derive(Debug, Clone)]
pub struct SignSystem {
    pub pairs: Vec<PathPair>,
    /// column index -> (pair index, via index >= 1)
    cols: Vec<(usize, usize)>,
    col_of: HashMap<(usize, usize), usize>,
    equations: Vec<Equation>,
}

/// Result of solving a sign system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SignVerdict {
    Feasible(SignWitness),
    Infeasible(Certificate),
}

impl SignVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SignVerdict::Feasible(_))
    }
}

/// A concrete sign assignment: `signs[p][i]` is the sign of the i-th
/// common neighbor of pair `p`, with `signs[p][0] == 1` by gauge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignWitness {
    pub signs: Vec<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// A subset of equations that sums to the contradiction 0 = 1.
    Parity { sources: Vec<EquationSource> },
    /// Pairs whose signs are forced to all agree, so their interference
    /// sums cannot cancel.
    AllEqual { pairs: Vec<(usize, usize)> },
}

/// Whether a GF(2) combination of sign variables is pinned down by the
/// parity equations alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationStatus {
    Forced(i8),
    Undetermined,
}

impl SignSystem {
    /// Builds the full system: cycle equations plus the split equations
    /// of every two-path pair. Expects a triangle-free graph.
    pub fn build(g: &Graph, o: &Orientation) -> Result<SignSystem, SignSystemError> {
        Self::build_inner(g, o, true)
    }

    /// Cycle equations only. Useful for asking which relations the
    /// cycles force before the cancellation requirements are imposed.
    pub fn build_cycles_only(g: &Graph, o: &Orientation) -> Result<SignSystem, SignSystemError> {
        Self::build_inner(g, o, false)
    }

    fn build_inner(
        g: &Graph,
        o: &Orientation,
        with_pair_splits: bool,
    ) -> Result<SignSystem, SignSystemError> {
        let n = g.n();
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(u, v) {
                    continue;
                }
                let vias = g.common_neighbors(u, v);
                match vias.len() {
                    0 => {}
                    1 => return Err(SignSystemError::SinglePath((u, v))),
                    _ => pairs.push(PathPair { ends: (u, v), vias }),
                }
            }
        }
        let mut cols = Vec::new();
        let mut col_of = HashMap::new();
        for (p, pair) in pairs.iter().enumerate() {
            for i in 1..pair.vias.len() {
                col_of.insert((p, i), cols.len());
                cols.push((p, i));
            }
        }
        let pair_index: HashMap<(usize, usize), usize> = pairs
            .iter()
            .enumerate()
            .map(|(p, pair)| (pair.ends, p))
            .collect();
        let words = cols.len().div_ceil(64).max(1);
        let mut sys = SignSystem {
            pairs,
            cols,
            col_of,
            equations: Vec::new(),
        };
        for q in g.four_cycles() {
            let tau = match cycle_type(o, &q) {
                CycleType::NonBipartite => false,
                CycleType::Bipartite => true,
                CycleType::Forbidden => {
                    return Err(SignSystemError::ForbiddenCycle(q.corners))
                }
            };
            let [a, b, c, d] = q.corners;
            let mut lhs = vec![0u64; words];
            for (ends, via) in [((a, c), b), ((a, c), d), ((b, d), a), ((b, d), c)] {
                let p = pair_index[&ends];
                if let Some(col) = sys.var_col(p, via) {
                    lhs[col / 64] ^= 1 << (col % 64);
                }
            }
            sys.equations.push(Equation {
                lhs,
                rhs: tau,
                source: EquationSource::Cycle(q),
            });
        }
        if with_pair_splits {
            for p in 0..sys.pairs.len() {
                if sys.pairs[p].vias.len() == 2 {
                    let col = sys.col_of[&(p, 1)];
                    let mut lhs = vec![0u64; words];
                    lhs[col / 64] |= 1 << (col % 64);
                    sys.equations.push(Equation {
                        lhs,
                        rhs: true,
                        source: EquationSource::PairSplit {
                            ends: sys.pairs[p].ends,
                        },
                    });
                }
            }
        }
        Ok(sys)
    }

    /// Column of the variable for (pair, via vertex); None if the via is
    /// the pair's gauge-fixed first neighbor.
    fn var_col(&self, p: usize, via: usize) -> Option<usize> {
        let i = self.pairs[p].vias.iter().position(|&m| m == via).unwrap();
        if i == 0 {
            None
        } else {
            Some(self.col_of[&(p, i)])
        }
    }

    pub fn num_vars(&self) -> usize {
        self.cols.len()
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    fn eliminate(&self) -> Elimination {
        let words = self.cols.len().div_ceil(64).max(1);
        let combo_words = self.equations.len().div_ceil(64).max(1);
        struct Row {
            lhs: Vec<u64>,
            rhs: bool,
            combo: Vec<u64>,
        }
        let mut rows: Vec<Row> = self
            .equations
            .iter()
            .enumerate()
            .map(|(i, eq)| {
                let mut combo = vec![0u64; combo_words];
                combo[i / 64] |= 1 << (i % 64);
                Row {
                    lhs: eq.lhs.clone(),
                    rhs: eq.rhs,
                    combo,
                }
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (col, row)
        let mut rank = 0;
        for col in 0..self.cols.len() {
            let Some(r) = (rank..rows.len())
                .find(|&r| rows[r].lhs[col / 64] >> (col % 64) & 1 == 1)
            else {
                continue;
            };
            rows.swap(rank, r);
            for r2 in 0..rows.len() {
                if r2 != rank && rows[r2].lhs[col / 64] >> (col % 64) & 1 == 1 {
                    let (a, b) = if r2 < rank {
                        let (lo, hi) = rows.split_at_mut(rank);
                        (&mut lo[r2], &hi[0])
                    } else {
                        let (lo, hi) = rows.split_at_mut(r2);
                        (&mut hi[0], &lo[rank])
                    };
                    for w in 0..words {
                        a.lhs[w] ^= b.lhs[w];
                    }
                    a.rhs ^= b.rhs;
                    for w in 0..combo_words {
                        a.combo[w] ^= b.combo[w];
                    }
                }
            }
            pivots.push((col, rank));
            rank += 1;
        }
        // any all-zero row with rhs 1 is a contradiction
        let contradiction = rows[rank..]
            .iter()
            .find(|row| row.rhs)
            .map(|row| {
                (0..self.equations.len())
                    .filter(|&i| row.combo[i / 64] >> (i % 64) & 1 == 1)
                    .map(|i| self.equations[i].source.clone())
                    .collect()
            });
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols.len()];
            for &(col, row) in &pivots {
                v[col] = Some(row);
            }
            v
        };
        Elimination {
            rows: rows
                .into_iter()
                .take(rank)
                .map(|r| (r.lhs, r.rhs))
                .collect(),
            pivot_of_col,
            contradiction,
        }
    }

    /// Solves the system: a sign witness if one exists, otherwise a
    /// certificate of infeasibility.
    pub fn solve(&self) -> SignVerdict {
        let elim = self.eliminate();
        if let Some(sources) = elim.contradiction {
            return SignVerdict::Infeasible(Certificate::Parity { sources });
        }
        let free_cols: Vec<usize> = (0..self.cols.len())
            .filter(|&c| elim.pivot_of_col[c].is_none())
            .collect();
        // blocks that still need a -1 somewhere: pairs with >= 3 vias
        // (two-via pairs are handled by their split equations)
        let blocks: Vec<usize> = (0..self.pairs.len())
            .filter(|&p| self.pairs[p].vias.len() >= 3)
            .collect();
        // a block is dead if every one of its variables reduces to the
        // constant 0 regardless of the free variables
        let mut dead = Vec::new();
        for &p in &blocks {
            let all_const_zero = (1..self.pairs[p].vias.len()).all(|i| {
                let col = self.col_of[&(p, i)];
                match elim.pivot_of_col[col] {
                    None => false,
                    Some(row) => {
                        let (lhs, rhs) = &elim.rows[row];
                        let depends_on_free = free_cols
                            .iter()
                            .any(|&fc| lhs[fc / 64] >> (fc % 64) & 1 == 1);
                        !depends_on_free && !rhs
                    }
                }
            });
            if all_const_zero {
                dead.push(self.pairs[p].ends);
            }
        }
        if !dead.is_empty() {
            return SignVerdict::Infeasible(Certificate::AllEqual { pairs: dead });
        }
        assert!(
            free_cols.len() <= 26,
            "sign system has too many free variables to search"
        );
        let mut failed_last = Vec::new();
        for assign in 0u64..1 << free_cols.len() {
            let values = self.evaluate(&elim, &free_cols, assign);
            failed_last = blocks
                .iter()
                .copied()
                .filter(|&p| {
                    (1..self.pairs[p].vias.len())
                        .all(|i| !values[self.col_of[&(p, i)]])
                })
                .collect();
            if failed_last.is_empty() {
                let signs = self
                    .pairs
                    .iter()
                    .enumerate()
                    .map(|(p, pair)| {
                        (0..pair.vias.len())
                            .map(|i| {
                                if i > 0 && values[self.col_of[&(p, i)]] {
                                    -1
                                } else {
                                    1
                                }
                            })
                            .collect()
                    })
                    .collect();
                return SignVerdict::Feasible(SignWitness { signs });
            }
        }
        SignVerdict::Infeasible(Certificate::AllEqual {
            pairs: failed_last
                .into_iter()
                .map(|p| self.pairs[p].ends)
                .collect(),
        })
    }

    fn evaluate(&self, elim: &Elimination, free_cols: &[usize], assign: u64) -> Vec<bool> {
        let mut values = vec![false; self.cols.len()];
        for (bit, &fc) in free_cols.iter().enumerate() {
            values[fc] = assign >> bit & 1 == 1;
        }
        for col in 0..self.cols.len() {
            if let Some(row) = elim.pivot_of_col[col] {
                let (lhs, rhs) = &elim.rows[row];
                let mut v = *rhs;
                for &fc in free_cols {
                    if lhs[fc / 64] >> (fc % 64) & 1 == 1 {
                        v ^= values[fc];
                    }
                }
                values[col] = v;
            }
        }
        values
    }

    /// Tests whether the product of the listed sign variables is forced
    /// by the parity equations. Each entry names one sign as (pair
    /// ends, via vertex); gauge-fixed signs are fine and contribute +1.
    pub fn forced_relation(&self, vars: &[((usize, usize), usize)]) -> RelationStatus {
        let words = self.cols.len().div_ceil(64).max(1);
        let mut target = vec![0u64; words];
        for &(ends, via) in vars {
            let p = self
                .pairs
                .iter()
                .position(|pair| pair.ends == ends)
                .expect("not a two-path pair");
            if let Some(col) = self.var_col(p, via) {
                target[col / 64] ^= 1 << (col % 64);
            }
        }
        let elim = self.eliminate();
        if elim.contradiction.is_some() {
            // an inconsistent system forces nothing meaningful
            return RelationStatus::Undetermined;
        }
        let mut value = false;
        for col in 0..self.cols.len() {
            if target[col / 64] >> (col % 64) & 1 != 1 {
                continue;
            }
            let Some(row) = elim.pivot_of_col[col] else {
                continue;
            };
            let (lhs, rhs) = &elim.rows[row];
            for w in 0..words {
                target[w] ^= lhs[w];
            }
            value ^= rhs;
        }
        // reduction only clears pivot columns; leftover bits are free
        // variables the relation still depends on
        if target.iter().any(|&w| w != 0) {
            RelationStatus::Undetermined
        } else {
            RelationStatus::Forced(if value { -1 } else { 1 })
        }
    }
}

struct Elimination {
    /// reduced rows (lhs bitset, rhs), indexed by pivot row
    rows: Vec<(Vec<u64>, bool)>,
    pivot_of_col: Vec<Option<usize>>,
    contradiction: Option<Vec<EquationSource>>,
}

/// Solves the sign system of every orientation class of `g`.
pub fn orientation_sign_verdicts(
    g: &Graph,
) -> Result<Vec<(Orientation, SignVerdict)>, SignSystemError> {
    crate::orient::valid_orientations(g)
        .into_iter()
        .map(|o| {
            let v = SignSystem::build(g, &o)?.solve();
            Ok((o, v))
        })
        .collect()
}

/// True if at least one orientation class admits a sign assignment.
pub fn graph_sign_feasible(g: &Graph) -> Result<bool, SignSystemError> {
    Ok(orientation_sign_verdicts(g)?
        .iter()
        .any(|(_, v)| v.is_feasible()))
}
