//! Saturation of fixed drawings and maximality of abstract graphs.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::dcel::{Drawing, FaceIndex, MAX_CROSSINGS};
use crate::enumerate::{
    enumerate_from, k_planarity, routes_between, Decision, Dedup, EnumerateOptions, RegionRules,
};
use crate::error::{Error, Result};
use crate::graphs::{cycle_vertex, gen_gadget_x, EdgeId, VertexId};
use crate::pipeline::{
    base_case, extend_with_cycle, extension_order, faces_at, Dual, ExtendOptions,
};

fn adjacency(d: &Drawing) -> HashSet<(VertexId, VertexId)> {
    d.edges()
        .iter()
        .filter(|s| !s.spoke && s.u != u32::MAX && s.v != u32::MAX)
        .map(|s| (s.u.min(s.v), s.u.max(s.v)))
        .collect()
}

/// Whether a new edge `u`-`v` can be drawn into `d` with at most `k`
/// crossings, keeping the drawing simple.
pub fn can_add_edge(d: &Drawing, fi: &FaceIndex, u: VertexId, v: VertexId, k: u8) -> bool {
    let routes = routes_between(d, fi, u, v, MAX_CROSSINGS, k, &RegionRules::default());
    let mut probe = d.clone();
    let e = probe.add_edge(u, v, false);
    routes.iter().any(|r| probe.clone().apply_route(e, r))
}

/// Non-adjacent pairs of placed vertices that can be joined by a new edge.
pub fn addable_edges(d: &Drawing, k: u8) -> Vec<(VertexId, VertexId)> {
    let fi = d.face_index();
    let adj = adjacency(d);
    let placed = d.placed_vertices();
    let mut out: Vec<(VertexId, VertexId)> = placed
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &u)| {
            let (fi, adj) = (&fi, &adj);
            placed[i + 1..]
                .iter()
                .filter(move |&&v| !adj.contains(&(u.min(v), u.max(v))))
                .filter(move |&&v| can_add_edge(d, fi, u, v, k))
                .map(move |&v| (u, v))
        })
        .collect();
    out.sort_unstable();
    out
}

pub fn drawing_saturated(d: &Drawing, k: u8) -> bool {
    addable_edges(d, k).is_empty()
}

/// Whether no edge can be added to `g` keeping it `k`-planar. Graphs that
/// are not `k`-planar themselves are reported as not maximal. Each non-edge
/// is checked by enumerating drawings of the supergraph from scratch.
pub fn graph_maximal(
    g: &crate::graphs::LabeledGraph,
    k: u8,
    node_budget: Option<u64>,
) -> Result<Decision> {
    match k_planarity(g, k, node_budget)? {
        Decision::No => return Ok(Decision::No),
        Decision::Inconclusive => return Ok(Decision::Inconclusive),
        Decision::Yes => {}
    }
    let answers: Vec<Decision> = g
        .non_edges()
        .into_par_iter()
        .map(|(u, v)| k_planarity(&g.with_edge(u, v)?, k, node_budget))
        .collect::<Result<_>>()?;
    Ok(if answers.contains(&Decision::Yes) {
        Decision::No
    } else if answers.contains(&Decision::Inconclusive) {
        Decision::Inconclusive
    } else {
        Decision::Yes
    })
}

/// Whether no dual path of positive capacity joins a face at `u` to a face
/// at `v`, i.e. the two are separated by edges without remaining budget.
pub fn doubly_crossed_separation(d: &Drawing, u: VertexId, v: VertexId) -> bool {
    let fi = d.face_index();
    let dual = Dual::new(d, &fi);
    let mut net = dual.network(2);
    let big = 2 * (d.edge_count() as i64 + 1);
    for f in faces_at(d, &fi, u, &dual.sealed) {
        net.add_arc(0, 2 + f, big);
    }
    for f in faces_at(d, &fi, v, &dual.sealed) {
        net.add_arc(2 + f, 1, big);
    }
    net.max_flow(0, 1, Some(1)) == 0
}

// ---------------------------------------------------------------------------
// Scripted drawing of G_2
// ---------------------------------------------------------------------------

/// Faces whose boundary consists of darts of the given edges only.
fn faces_bounded_by(d: &Drawing, fi: &FaceIndex, edges: &[EdgeId]) -> Vec<usize> {
    (0..fi.len())
        .filter(|&f| fi.walks[f].iter().all(|&x| edges.contains(&d.dart_edge(x))))
        .collect()
}

fn edges_tagged(d: &Drawing, pred: impl Fn(VertexId, VertexId) -> bool) -> Vec<EdgeId> {
    (0..d.edge_count() as EdgeId)
        .filter(|&e| {
            let s = d.edge(e);
            pred(s.u, s.v)
        })
        .collect()
}

/// Draws the undrawn edges `edges` inside the faces flagged in `allowed`
/// (face ids of the current stamp), returning the first drawing found.
fn route_inside(d: Drawing, edges: &[EdgeId], allowed: &[bool], what: &str) -> Result<Drawing> {
    let mut d = d;
    d.stamp_regions();
    let rules = RegionRules {
        enterable: allowed.to_vec(),
        vertex_ok: allowed.to_vec(),
    };
    let order = extension_order(&d, edges);
    let mut opts = EnumerateOptions::new(2, Dedup::Raw);
    opts.limit = Some(1);
    enumerate_from(d, &order, &opts, &rules)
        .drawings
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal(format!("no drawing of {what} in the prescribed faces")))
}

/// The drawing of `G_2` from the construction: nested ten-cycles joined by
/// the braided matching, length-two chords outside `D_1` and inside `D_2`,
/// and one gadget in the face beyond each cycle edge. Vertex ids agree with
/// [`gen_gk`](crate::graphs::gen_gk)`(2)`.
pub fn canonical_g2_drawing() -> Result<Drawing> {
    let nested = extend_with_cycle(&base_case(), true, &ExtendOptions::default())?;
    let d = nested
        .children
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("no nested drawing".into()))?
        .drawing;
    decorate_outer_cycles(d, 2)
}

/// Completes a drawing of `G_k^-` (vertex ids as in
/// [`gen_gk_minus`](crate::graphs::gen_gk_minus), first and last cycle
/// bounding an empty face each) to a drawing of `G_k`: length-two chords
/// and a gadget on every edge of the first and last cycle, all inside those
/// empty faces. The outer cycles become crossable again afterwards.
pub fn decorate_outer_cycles(mut d: Drawing, k: u32) -> Result<Drawing> {
    let n = 10 * k;
    let on_cycle = |i: u32| {
        move |a: VertexId, b: VertexId| a / 10 == i - 1 && b / 10 == i - 1 && a < n && b < n
    };
    for i in [1, k] {
        for e in edges_tagged(&d, on_cycle(i)) {
            d.make_uncrossable(e);
        }
    }
    let d1 = edges_tagged(&d, on_cycle(1));
    let d2 = edges_tagged(&d, on_cycle(k));

    // chords in the empty faces
    let fi = d.face_index();
    let mut allowed = vec![false; fi.len()];
    for f in faces_bounded_by(&d, &fi, &d1)
        .into_iter()
        .chain(faces_bounded_by(&d, &fi, &d2))
    {
        allowed[f] = true;
    }
    let mut chords = Vec::new();
    for i in [1, k] {
        for j in 0..10 {
            chords.push(d.add_edge(cycle_vertex(i, j), cycle_vertex(i, j + 2), false));
        }
    }
    let mut d = route_inside(d, &chords, &allowed, "the chords")?;

    // gadgets, in the face beyond each cycle edge (away from the matching)
    let matching: Vec<EdgeId> = edges_tagged(&d, |a, b| a < n && b < n && a / 10 != b / 10);
    let gadget = gen_gadget_x();
    let mut copy = 0;
    for (i, cycle) in [(1u32, &d1), (k, &d2)] {
        for j in 0..10 {
            let (a, b) = (cycle_vertex(i, j), cycle_vertex(i, j + 1));
            let e = *cycle
                .iter()
                .find(|&&e| {
                    let s = d.edge(e);
                    (s.u == a && s.v == b) || (s.u == b && s.v == a)
                })
                .expect("cycle edge");
            let fi = d.face_index();
            let first = d.edge(e).first;
            let side = [first, d.twin(first)]
                .into_iter()
                .map(|x| fi.face_of[x as usize] as usize)
                .find(|&f| {
                    !fi.walks[f]
                        .iter()
                        .any(|&x| matching.contains(&d.dart_edge(x)))
                })
                .ok_or_else(|| Error::Internal("cycle edge without an outer face".into()))?;
            let mut allowed = vec![false; fi.len()];
            allowed[side] = true;
            let mut map = [0 as VertexId; 9];
            map[6] = a.min(b);
            map[7] = a.max(b);
            for t in [0, 1, 2, 3, 4, 5, 8] {
                map[t] = d.add_vertex(format!("x_{t}#{copy}"));
            }
            let mut new_edges = Vec::new();
            for ge in gadget.edges() {
                let (u, v) = (map[ge.u as usize], map[ge.v as usize]);
                if (u.min(v), u.max(v)) != (map[6], map[7]) {
                    new_edges.push(d.add_edge(u, v, false));
                }
            }
            d = route_inside(d, &new_edges, &allowed, &format!("gadget {copy}"))?;
            copy += 1;
        }
    }
    for e in d1.iter().chain(&d2) {
        d.make_crossable(*e);
    }
    let v = d.validate();
    if let Some(x) = v.first() {
        return Err(Error::Internal(format!(
            "scripted drawing invalid: {}: {}",
            x.kind, x.detail
        )));
    }
    Ok(d)
}
