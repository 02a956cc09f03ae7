//! Property tests of the enumeration engine against the brute-force oracle.

mod common;

use kplane::{enumerate_drawings, Dedup, Drawing, EdgeTag, EnumerateOptions, LabeledGraph};
use proptest::prelude::*;

/// A connected graph on `n` vertices: a random spanning tree plus extra edges.
fn connected_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = LabeledGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
        let extra = proptest::collection::vec((0..n, 0..n), 0..=max_extra);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut g = LabeledGraph::with_vertices(n);
            for (v, p) in parents.into_iter().enumerate() {
                g.add_edge(p as u32, v as u32 + 1, false, EdgeTag::Plain)
                    .unwrap();
            }
            for (a, b) in extra {
                if a != b && !g.has_edge(a as u32, b as u32) {
                    g.add_edge(a as u32, b as u32, false, EdgeTag::Plain)
                        .unwrap();
                }
            }
            g
        })
    })
}

fn labeled(g: &LabeledGraph) -> Vec<Drawing> {
    enumerate_drawings(g, &EnumerateOptions::new(2, Dedup::Labeled))
        .unwrap()
        .drawings
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_match_the_oracle(g in connected_graph(6, 3)) {
        prop_assume!(g.m() <= 6);
        let edges: Vec<(u32, u32)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        prop_assert_eq!(labeled(&g).len(), common::brute_force_drawings(g.n(), &edges));
    }

    #[test]
    fn drawings_are_closed_under_mirroring(g in connected_graph(5, 4)) {
        let ds = labeled(&g);
        let keys: std::collections::BTreeSet<String> =
            ds.iter().map(|d| d.canonical_form_labeled_oriented()).collect();
        for d in &ds {
            let m = d.mirrored();
            prop_assert!(m.validate().is_empty());
            common::dcel_invariants(&m).unwrap();
            prop_assert!(keys.contains(&m.canonical_form_labeled_oriented()));
        }
    }

    #[test]
    fn json_round_trip_preserves_the_drawing(g in connected_graph(6, 5)) {
        let mut opts = EnumerateOptions::new(2, Dedup::Labeled);
        opts.limit = Some(3);
        for d in enumerate_drawings(&g, &opts).unwrap().drawings {
            let back = Drawing::from_json_str(&d.to_json_string()).unwrap();
            prop_assert!(back.validate().is_empty());
            prop_assert_eq!(back.canonical_form_labeled_oriented(), d.canonical_form_labeled_oriented());
        }
    }

    #[test]
    fn mirror_dedup_halves_at_most(g in connected_graph(5, 4)) {
        let oriented = labeled(&g).len();
        let mirror = enumerate_drawings(&g, &EnumerateOptions::new(2, Dedup::LabeledMirror))
            .unwrap()
            .drawings
            .len();
        prop_assert!(mirror <= oriented && 2 * mirror >= oriented);
    }
}
