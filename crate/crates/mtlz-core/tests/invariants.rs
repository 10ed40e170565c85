//! Randomized invariants: encoding round trips, labeling independence,
//! orientation symmetries, and the partner-form wedge relations.

use mtlz_core::canon::canonical_form;
use mtlz_core::forms::{partner_forms, wedge, LinearForm};
use mtlz_core::graph::{FourCycle, Graph};
use mtlz_core::orient::{valid_orientations, CycleType};
use mtlz_core::signs::SignSystem;
use proptest::prelude::*;

/// Arbitrary graph on `n` vertices from an edge bitmask.
fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let slots = n * (n - 1) / 2;
        proptest::bits::u64::masked((1u64 << slots) - 1).prop_map(move |mask| {
            let mut g = Graph::empty(n);
            let mut bit = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask >> bit & 1 == 1 {
                        g.add_edge(u, v);
                    }
                    bit += 1;
                }
            }
            g
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), permutation(n))
    })
}

proptest! {
    #[test]
    fn graph6_round_trip(g in graph_strategy(10)) {
        let encoded = mtlz_core::graph6::encode(&g);
        let decoded = mtlz_core::graph6::decode(&encoded).unwrap();
        prop_assert_eq!(g, decoded);
    }

    #[test]
    fn canonical_form_is_label_invariant((g, perm) in graph_and_perm(8)) {
        let relabeled = g.relabel(&perm);
        prop_assert_eq!(canonical_form(&g).0, canonical_form(&relabeled).0);
    }

    #[test]
    fn canonical_perm_is_valid((g, _) in graph_and_perm(8)) {
        let (form, perm) = canonical_form(&g);
        let canon = g.relabel(&perm);
        prop_assert_eq!(form.to_string(), mtlz_core::graph6::encode(&canon));
    }

    #[test]
    fn four_cycles_match_under_relabeling((g, perm) in graph_and_perm(8)) {
        let mut direct: Vec<FourCycle> = g.relabel(&perm).four_cycles();
        let mut mapped: Vec<FourCycle> = g
            .four_cycles()
            .iter()
            .map(|q| FourCycle::normalize(q.corners.map(|v| perm[v])))
            .collect();
        direct.sort();
        mapped.sort();
        prop_assert_eq!(direct, mapped);
    }

    #[test]
    fn orientation_reversal_involution(g in graph_strategy(7)) {
        for o in valid_orientations(&g) {
            prop_assert_eq!(o.reversed().reversed().dirs, o.dirs);
            for &(u, v) in &o.edges {
                prop_assert_eq!(o.sign(u, v), -o.sign(v, u));
                prop_assert_eq!(o.reversed().sign(u, v), -o.sign(u, v));
                prop_assert_ne!(o.arrow_from(u, v), o.arrow_from(v, u));
            }
        }
    }

    #[test]
    fn sign_feasibility_survives_reversal(g in graph_strategy(6)) {
        // sign systems only exist for triangle-free graphs
        prop_assume!(g.contains_triangle().is_none());
        // global sign flip maps valid orientations to valid orientations
        // without changing any 4-cycle type
        for o in valid_orientations(&g) {
            let a = SignSystem::build(&g, &o).map(|s| s.solve().is_feasible());
            let b = SignSystem::build(&g, &o.reversed()).map(|s| s.solve().is_feasible());
            prop_assert_eq!(a.is_ok(), b.is_ok());
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn partner_wedge_relations(
        c13 in prop::array::uniform2(-3.0f64..3.0),
        c14 in prop::array::uniform2(-3.0f64..3.0),
        theta in -2.0f64..2.0,
        p in prop::bool::ANY,
        r in prop::bool::ANY,
        bipartite in prop::bool::ANY,
    ) {
        let a13 = LinearForm::new(c13.to_vec());
        let a14 = LinearForm::new(c14.to_vec());
        let w0 = wedge(&a13, &a14)[0];
        prop_assume!(w0.abs() > 1e-3);
        let p = if p { 1i8 } else { -1 };
        let r = if r { 1i8 } else { -1 };
        let ty = if bipartite { CycleType::Bipartite } else { CycleType::NonBipartite };
        let (a23, a24) = partner_forms(&a13, &a14, theta, p, r, ty).unwrap();
        let rf = r as f64;
        let scale = w0.abs().max(1.0) * theta.cosh().powi(2);
        prop_assert!((wedge(&a23, &a24)[0] - rf * w0).abs() < 1e-9 * scale);
        let cross = wedge(&a14, &a24)[0];
        let base = rf * wedge(&a13, &a23)[0];
        match ty {
            CycleType::NonBipartite => prop_assert!((cross - base).abs() < 1e-9 * scale),
            CycleType::Bipartite => prop_assert!((cross + base).abs() < 1e-9 * scale),
            CycleType::Forbidden => unreachable!(),
        }
    }
}
