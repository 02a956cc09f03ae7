//! Decorating the outer cycles of a drawing of `G_k^-` into a drawing of
//! `G_k`, and the extra edge admitted by one such drawing of `G_4`.

mod common;

use std::collections::BTreeSet;

use kplane::graphs::{are_isomorphic, gen_gk, gen_gk_minus};
use kplane::saturation::{addable_edges, can_add_edge, decorate_outer_cycles};
use kplane::{Drawing, LabeledGraph};

const OPEN_G4_MINUS: &str = include_str!("fixtures/g4_minus_open.json");

fn labeled_edges(g: &LabeledGraph) -> BTreeSet<(String, String)> {
    g.edges()
        .iter()
        .map(|e| {
            let (a, b) = (g.label(e.u).to_string(), g.label(e.v).to_string());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

fn decorated() -> Drawing {
    let d = Drawing::from_json_str(OPEN_G4_MINUS).unwrap();
    assert!(d.validate().is_empty());
    let want = gen_gk_minus(4, true).unwrap();
    assert!(are_isomorphic(&d.to_graph(), &want));
    decorate_outer_cycles(d, 4).unwrap()
}

#[test]
fn decoration_yields_g4() {
    let d = decorated();
    assert!(d.validate().is_empty());
    common::dcel_invariants(&d).unwrap();
    assert_eq!(
        labeled_edges(&d.to_graph()),
        labeled_edges(&gen_gk(4).unwrap())
    );
}

#[test]
fn g4_drawing_admits_an_extra_edge() {
    let d = decorated();
    let g = d.to_graph();
    let u = g.vertex_by_label("v_0^1").unwrap();
    let v = g.vertex_by_label("v_1^2").unwrap();
    assert!(!g.has_edge(u, v));
    assert!(can_add_edge(&d, &d.face_index(), u, v, 2));
    let add = addable_edges(&d, 2);
    assert!(add.contains(&(u.min(v), u.max(v))));

    // draw it and check the result independently
    let fi = d.face_index();
    let routes = kplane::enumerate::routes_between(&d, &fi, u, v, 2, 2, &Default::default());
    let mut plus = d.clone();
    let e = plus.add_edge(u, v, false);
    let drawn = routes
        .iter()
        .find_map(|r| {
            let mut q = plus.clone();
            q.apply_route(e, r).then_some(q)
        })
        .expect("a route for the extra edge");
    assert!(drawn.validate().is_empty());
    common::dcel_invariants(&drawn).unwrap();
    let h = drawn.to_graph();
    assert_eq!(h.m(), g.m() + 1);
    assert!(h.has_edge(u, v));
}
