//! Planarized spherical drawings stored as a doubly-connected edge list.
//!
//! A [`Drawing`] is the planarization of a partial drawing: real vertices
//! and degree-4 crossing nodes joined by segments. Every segment is a pair
//! of darts. The rotation at a node is the cyclic order of its outgoing
//! darts (`next` is the counterclockwise successor). Faces are the orbits
//! of `d -> next(twin(d))`; the face of a dart lies on its right.
//!
//! Corners are addressed by darts: the corner "at" dart `c` is the angle
//! between `prev(c)` and `c` at `origin(c)`, and it belongs to the face
//! whose boundary walk contains `c`.

mod canon;
mod cleanup;
mod io;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graphs::{EdgeId, EdgeTag, LabeledGraph, VertexId};

pub use canon::{braided_cycle_maps, cycle_maps, CycleMap};
pub use cleanup::{CleanupStats, SEALED};
pub use io::DrawingJson;

pub type NodeId = u32;
pub type DartId = u32;

/// Sentinel for "no dart / no node / no vertex".
pub const NIL: u32 = u32::MAX;

/// Crossing budget of every edge in a 2-plane drawing.
pub const MAX_CROSSINGS: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Vertex(VertexId),
    /// Crossing of the two abstract edges.
    Crossing(EdgeId, EdgeId),
    /// Node left behind by region cleanup: a truncated crossing or a
    /// boundary point that carries star spokes.
    Junction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Dart {
    pub origin: NodeId,
    pub twin: DartId,
    pub next: DartId,
    pub prev: DartId,
    pub edge: EdgeId,
    pub region: u32,
}

/// Per abstract edge bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeState {
    /// Endpoints; `NIL` for a star spoke ending at a non-vertex node.
    pub u: VertexId,
    pub v: VertexId,
    /// Dart leaving `u` that starts the chain, `NIL` while undrawn.
    pub first: DartId,
    /// Crossing nodes currently on the chain.
    pub crossings: u8,
    /// Crossings that were removed together with an irrelevant region.
    pub hidden: u8,
    /// Fake crossings charged to uncrossable edges (0 or 2).
    pub fake: u8,
    pub uncrossable: bool,
    pub spoke: bool,
}

impl EdgeState {
    /// Remaining crossings allowed on this edge.
    pub fn budget(&self) -> u8 {
        MAX_CROSSINGS.saturating_sub(self.crossings + self.hidden + self.fake)
    }

    pub fn is_incident(&self, x: VertexId) -> bool {
        x != NIL && (self.u == x || self.v == x)
    }

    pub fn drawn(&self) -> bool {
        self.first != NIL
    }
}

/// Where a routed edge ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Landing {
    /// Land in the corner at this dart of the (already placed) target.
    Corner(DartId),
    /// Place the (unplaced) target vertex inside the final face.
    NewVertex,
}

/// A concrete way to draw one edge: leave the source at corner `start`,
/// cross the listed darts in order (each from its own face into the face of
/// its twin), then land.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Route {
    pub start: DartId,
    crossed: [DartId; 2],
    len: u8,
    pub landing: Landing,
}

impl Route {
    pub fn new(start: DartId, crossed: &[DartId], landing: Landing) -> Route {
        assert!(crossed.len() <= 2, "a route crosses at most two segments");
        let mut buf = [NIL; 2];
        buf[..crossed.len()].copy_from_slice(crossed);
        Route {
            start,
            crossed: buf,
            len: crossed.len() as u8,
            landing,
        }
    }

    pub fn crossed(&self) -> &[DartId] {
        &self.crossed[..self.len as usize]
    }
}

/// Face partition of a drawing.
#[derive(Clone, Debug)]
pub struct FaceIndex {
    /// Face id of each dart (the face on its right).
    pub face_of: Vec<u32>,
    /// Boundary walk of each face, starting at its smallest dart.
    pub walks: Vec<Vec<DartId>>,
}

impl FaceIndex {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

/// A face with its incident real vertices and abstract edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub boundary: Vec<DartId>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// One failed invariant reported by [`Drawing::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Drawing {
    labels: Arc<Vec<String>>,
    vertex_node: Vec<NodeId>,
    nodes: Vec<NodeKind>,
    node_dart: Vec<DartId>,
    darts: Vec<Dart>,
    edges: Vec<EdgeState>,
}

/// Starts a drawing of `g` with only edge `first` drawn.
pub fn init_drawing(g: &LabeledGraph, first: EdgeId) -> Result<Drawing> {
    let mut d = Drawing::empty(g);
    d.draw_first_edge(first)?;
    Ok(d)
}

impl Drawing {
    /// Drawing of `g` with nothing placed yet. Uncrossable edges are charged
    /// with their fake crossings up front.
    pub fn empty(g: &LabeledGraph) -> Drawing {
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeState {
                u: e.u,
                v: e.v,
                first: NIL,
                crossings: 0,
                hidden: 0,
                fake: if e.uncrossable { MAX_CROSSINGS } else { 0 },
                uncrossable: e.uncrossable,
                spoke: false,
            })
            .collect();
        Drawing {
            labels: Arc::new(g.labels().to_vec()),
            vertex_node: vec![NIL; g.n()],
            nodes: Vec::new(),
            node_dart: Vec::new(),
            darts: Vec::new(),
            edges,
        }
    }

    /// Draws `e` as the first, isolated segment of the drawing.
    pub fn draw_first_edge(&mut self, e: EdgeId) -> Result<()> {
        let Some(edge) = self.edges.get(e as usize) else {
            return invalid(format!("unknown edge {e}"));
        };
        let (u, v) = (edge.u, edge.v);
        if u == v {
            return invalid("loop edge");
        }
        if !self.darts.is_empty() {
            return invalid("drawing already initialized");
        }
        let a = self.new_node(NodeKind::Vertex(u));
        let b = self.new_node(NodeKind::Vertex(v));
        self.vertex_node[u as usize] = a;
        self.vertex_node[v as usize] = b;
        let (da, _) = self.new_segment(a, b, e, 0);
        self.darts[da as usize].next = da;
        self.darts[da as usize].prev = da;
        let db = self.darts[da as usize].twin;
        self.darts[db as usize].next = db;
        self.darts[db as usize].prev = db;
        self.node_dart[a as usize] = da;
        self.node_dart[b as usize] = db;
        self.edges[e as usize].first = da;
        Ok(())
    }

    // ----- accessors -------------------------------------------------------

    pub fn vertex_count(&self) -> usize {
        self.vertex_node.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn node_kind(&self, x: NodeId) -> NodeKind {
        self.nodes[x as usize]
    }

    pub fn vertex_node(&self, v: VertexId) -> Option<NodeId> {
        match self.vertex_node.get(v as usize) {
            Some(&x) if x != NIL => Some(x),
            _ => None,
        }
    }

    pub fn is_placed(&self, v: VertexId) -> bool {
        self.vertex_node(v).is_some()
    }

    pub fn placed_vertices(&self) -> Vec<VertexId> {
        (0..self.vertex_node.len() as VertexId)
            .filter(|&v| self.is_placed(v))
            .collect()
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeState {
        &self.edges[e as usize]
    }

    pub fn edges(&self) -> &[EdgeState] {
        &self.edges
    }

    pub fn origin(&self, d: DartId) -> NodeId {
        self.darts[d as usize].origin
    }

    pub fn twin(&self, d: DartId) -> DartId {
        self.darts[d as usize].twin
    }

    pub fn next(&self, d: DartId) -> DartId {
        self.darts[d as usize].next
    }

    pub fn prev(&self, d: DartId) -> DartId {
        self.darts[d as usize].prev
    }

    pub fn dart_edge(&self, d: DartId) -> EdgeId {
        self.darts[d as usize].edge
    }

    pub fn region(&self, d: DartId) -> u32 {
        self.darts[d as usize].region
    }

    pub fn head(&self, d: DartId) -> NodeId {
        self.origin(self.twin(d))
    }

    /// Next dart along the boundary of the face on the right of `d`.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.next(self.twin(d))
    }

    /// Outgoing darts of a node in rotation order, starting at its anchor.
    pub fn rotation(&self, x: NodeId) -> Vec<DartId> {
        let start = self.node_dart[x as usize];
        let mut out = Vec::new();
        if start == NIL {
            return out;
        }
        let mut d = start;
        loop {
            out.push(d);
            d = self.next(d);
            if d == start {
                break;
            }
        }
        out
    }

    pub fn node_degree(&self, x: NodeId) -> usize {
        self.rotation(x).len()
    }

    /// Real crossings on the chain of `e` (fake crossings excluded).
    pub fn crossing_count(&self, e: EdgeId) -> Result<u8> {
        match self.edges.get(e as usize) {
            Some(s) => Ok(s.crossings),
            None => invalid(format!("unknown edge {e}")),
        }
    }

    /// Whether a new edge `e` may cross a segment of `f` under the
    /// local-crossing bound `k`: budget left, not adjacent, not the same edge.
    pub fn can_cross(&self, e: EdgeId, f: EdgeId, k: u8) -> bool {
        let es = &self.edges[e as usize];
        e != f && self.can_cross_new((es.u, es.v), f, k)
    }

    /// As [`can_cross`](Self::can_cross) for a prospective edge given by
    /// its endpoints.
    pub fn can_cross_new(&self, ends: (VertexId, VertexId), f: EdgeId, k: u8) -> bool {
        let fs = &self.edges[f as usize];
        fs.budget() > 0
            && fs.crossings + fs.hidden + fs.fake < k
            && !fs.is_incident(ends.0)
            && !fs.is_incident(ends.1)
    }

    /// Capacity of the segment of dart `d` for dual flows: the remaining
    /// budget of its edge, zero for segments bordering a sealed region.
    pub fn segment_capacity(&self, d: DartId) -> u8 {
        let e = self.dart_edge(d);
        if self.dart_edge(self.twin(d)) != e {
            return 0;
        }
        self.edges[e as usize].budget()
    }

    /// The same drawing seen in a mirror (all rotations reversed).
    pub fn mirrored(&self) -> Drawing {
        let mut m = self.clone();
        for d in &mut m.darts {
            std::mem::swap(&mut d.next, &mut d.prev);
        }
        m
    }

    /// Darts of the chain of a drawn edge from `u` towards `v`; walking
    /// straight through crossing nodes. Stops early at junctions.
    pub fn chain(&self, e: EdgeId) -> Vec<DartId> {
        let mut out = Vec::new();
        let mut d = self.edges[e as usize].first;
        if d == NIL {
            return out;
        }
        loop {
            out.push(d);
            let h = self.head(d);
            match self.nodes[h as usize] {
                NodeKind::Crossing(..) => d = self.straight(self.twin(d)),
                _ => break,
            }
            if out.len() > self.darts.len() {
                break;
            }
        }
        out
    }

    /// The dart leaving a crossing node opposite to `d`, skipping spokes.
    fn straight(&self, d: DartId) -> DartId {
        let mut x = d;
        for _ in 0..2 {
            x = self.next(x);
            while self.edges[self.dart_edge(x) as usize].spoke {
                x = self.next(x);
            }
        }
        x
    }

    /// Rotation of `x` without spoke darts.
    pub(crate) fn real_rotation(&self, x: NodeId) -> Vec<DartId> {
        let mut r = self.rotation(x);
        r.retain(|&d| !self.edges[self.dart_edge(d) as usize].spoke);
        r
    }

    /// Abstract edges around a placed vertex in rotation order.
    pub fn edge_rotation(&self, v: VertexId) -> Vec<EdgeId> {
        match self.vertex_node(v) {
            Some(x) => self
                .rotation(x)
                .into_iter()
                .map(|d| self.dart_edge(d))
                .collect(),
            None => Vec::new(),
        }
    }

    /// The abstract graph of the drawing (spokes and other auxiliary edges
    /// left out).
    pub fn to_graph(&self) -> LabeledGraph {
        let mut g = LabeledGraph::default();
        for l in self.labels.iter() {
            g.add_vertex(l.clone()).expect("labels are unique");
        }
        for s in &self.edges {
            if !s.spoke && s.u != NIL && s.v != NIL {
                g.add_edge(s.u, s.v, s.uncrossable, EdgeTag::Plain)
                    .expect("simple graph");
            }
        }
        g
    }

    /// Turns an uncrossable edge into an ordinary one (used after scripted
    /// constructions that keep some edges fixed while others are routed).
    /// Charges an uncrossed edge with fake crossings so no route crosses it.
    pub fn make_uncrossable(&mut self, e: EdgeId) {
        let s = &mut self.edges[e as usize];
        debug_assert_eq!(s.crossings + s.hidden, 0, "edge already crossed");
        s.uncrossable = true;
        s.fake = MAX_CROSSINGS;
    }

    pub fn make_crossable(&mut self, e: EdgeId) {
        let s = &mut self.edges[e as usize];
        s.uncrossable = false;
        s.fake = 0;
    }

    // ----- faces -----------------------------------------------------------

    pub fn face_index(&self) -> FaceIndex {
        let mut face_of = vec![NIL; self.darts.len()];
        let mut walks = Vec::new();
        for s in 0..self.darts.len() as DartId {
            if face_of[s as usize] != NIL {
                continue;
            }
            let id = walks.len() as u32;
            let mut walk = Vec::new();
            let mut d = s;
            loop {
                face_of[d as usize] = id;
                walk.push(d);
                d = self.face_next(d);
                if d == s {
                    break;
                }
            }
            walks.push(walk);
        }
        // A drawing with a single placed vertex and no darts has one face.
        FaceIndex { face_of, walks }
    }

    pub fn faces(&self) -> Vec<Face> {
        let index = self.face_index();
        index
            .walks
            .iter()
            .enumerate()
            .map(|(id, walk)| {
                let mut vertices: Vec<VertexId> = walk
                    .iter()
                    .filter_map(|&d| match self.nodes[self.origin(d) as usize] {
                        NodeKind::Vertex(v) => Some(v),
                        _ => None,
                    })
                    .collect();
                vertices.sort_unstable();
                vertices.dedup();
                let mut edges: Vec<EdgeId> = walk.iter().map(|&d| self.dart_edge(d)).collect();
                edges.sort_unstable();
                edges.dedup();
                Face {
                    id,
                    boundary: walk.clone(),
                    vertices,
                    edges,
                }
            })
            .collect()
    }

    pub fn face_count(&self) -> usize {
        if self.darts.is_empty() {
            return 1;
        }
        self.face_index().len()
    }

    /// Number of planarization segments.
    pub fn segment_count(&self) -> usize {
        self.darts.len() / 2
    }

    /// Stamps every dart with the id of its current face. Routes inserted
    /// later inherit the stamp of the face they are drawn in, so each face
    /// of an extension can be traced back to the face it subdivides. Sealed
    /// faces stay sealed.
    pub fn stamp_regions(&mut self) -> FaceIndex {
        let index = self.face_index();
        for walk in &index.walks {
            if walk.iter().any(|&d| self.is_sealed(d)) {
                for &d in walk {
                    self.darts[d as usize].region = SEALED;
                }
            }
        }
        for (d, &f) in index.face_of.iter().enumerate() {
            if self.darts[d].region != SEALED {
                self.darts[d].region = f;
            }
        }
        index
    }

    // ----- growth ----------------------------------------------------------

    /// Adds an unplaced vertex (used when extending a drawing).
    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        Arc::make_mut(&mut self.labels).push(label.into());
        self.vertex_node.push(NIL);
        (self.vertex_node.len() - 1) as VertexId
    }

    /// Adds an undrawn abstract edge.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, uncrossable: bool) -> EdgeId {
        self.edges.push(EdgeState {
            u,
            v,
            first: NIL,
            crossings: 0,
            hidden: 0,
            fake: if uncrossable { MAX_CROSSINGS } else { 0 },
            uncrossable,
            spoke: false,
        });
        (self.edges.len() - 1) as EdgeId
    }

    fn new_node(&mut self, kind: NodeKind) -> NodeId {
        self.nodes.push(kind);
        self.node_dart.push(NIL);
        (self.nodes.len() - 1) as NodeId
    }

    /// Allocates a dart pair `a -> b` / `b -> a` with unset rotation links.
    fn new_segment(&mut self, a: NodeId, b: NodeId, e: EdgeId, region: u32) -> (DartId, DartId) {
        let da = self.darts.len() as DartId;
        let db = da + 1;
        self.darts.push(Dart {
            origin: a,
            twin: db,
            next: NIL,
            prev: NIL,
            edge: e,
            region,
        });
        self.darts.push(Dart {
            origin: b,
            twin: da,
            next: NIL,
            prev: NIL,
            edge: e,
            region,
        });
        (da, db)
    }

    /// Inserts `n` into the rotation of `origin(at)` just before `at`.
    fn insert_before(&mut self, n: DartId, at: DartId) {
        let p = self.prev(at);
        self.darts[n as usize].prev = p;
        self.darts[n as usize].next = at;
        self.darts[p as usize].next = n;
        self.darts[at as usize].prev = n;
    }

    /// Whether the corners at darts `a` and `b` lie in the same face.
    fn same_face(&self, a: DartId, b: DartId) -> bool {
        let mut d = a;
        loop {
            if d == b {
                return true;
            }
            d = self.face_next(d);
            if d == a {
                return false;
            }
        }
    }

    /// Joins the corners at `a` and `b` by a new segment of `e`; returns the
    /// dart leaving `origin(a)`, or `None` if the corners are in different
    /// faces (the segment would not be planar).
    fn connect(&mut self, a: DartId, b: DartId, e: EdgeId) -> Option<DartId> {
        if !self.same_face(a, b) {
            return None;
        }
        let region = self.region(a);
        let (n, m) = self.new_segment(self.origin(a), self.origin(b), e, region);
        self.insert_before(n, a);
        self.insert_before(m, b);
        Some(n)
    }

    /// Joins the corner at `a` to the newly placed vertex `w`.
    fn attach_new_vertex(&mut self, a: DartId, w: VertexId, e: EdgeId) -> DartId {
        let x = self.new_node(NodeKind::Vertex(w));
        self.vertex_node[w as usize] = x;
        let region = self.region(a);
        let (n, m) = self.new_segment(self.origin(a), x, e, region);
        self.insert_before(n, a);
        self.darts[m as usize].next = m;
        self.darts[m as usize].prev = m;
        self.node_dart[x as usize] = m;
        n
    }

    /// Splits the segment of dart `d` by a crossing with `e`. Returns the
    /// entry corner (facing the face of `d`) and the exit corner (facing the
    /// face of its twin) at the new crossing node.
    fn split(&mut self, d: DartId, e: EdgeId) -> (DartId, DartId) {
        let t = self.twin(d);
        let f = self.dart_edge(d);
        let x = self.new_node(Crossing(f, e));
        let a = self.origin(d);
        let b = self.origin(t);
        let (rd, rt) = (self.region(d), self.region(t));
        // p: x -> b (twin t), q: x -> a (twin d)
        let (p, q) = self.new_segment(x, x, f, rd);
        self.darts[p as usize].twin = t;
        self.darts[q as usize].twin = d;
        self.darts[q as usize].region = rt;
        self.darts[t as usize].twin = p;
        self.darts[d as usize].twin = q;
        debug_assert_eq!(self.origin(d), a);
        debug_assert_eq!(self.origin(t), b);
        self.darts[p as usize].next = q;
        self.darts[p as usize].prev = q;
        self.darts[q as usize].next = p;
        self.darts[q as usize].prev = p;
        self.node_dart[x as usize] = p;
        self.edges[f as usize].crossings += 1;
        self.edges[e as usize].crossings += 1;
        (p, q)
    }

    /// Draws the abstract edge `e` along `route`. Returns `false` if the
    /// route turns out to be non-planar (its pieces re-enter a face that an
    /// earlier piece already split); the drawing is then left in an
    /// inconsistent state and must be discarded.
    pub fn apply_route(&mut self, e: EdgeId, route: &Route) -> bool {
        let src_node = self.origin(route.start);
        let NodeKind::Vertex(src) = self.nodes[src_node as usize] else {
            return false;
        };
        let edge = self.edges[e as usize].clone();
        let tgt = if edge.u == src { edge.v } else { edge.u };

        let mut corners = Vec::with_capacity(route.crossed().len());
        for &d in route.crossed() {
            corners.push(self.split(d, e));
        }
        let mut from = route.start;
        let mut src_dart = NIL;
        for &(entry, exit) in &corners {
            let Some(n) = self.connect(from, entry, e) else {
                return false;
            };
            if src_dart == NIL {
                src_dart = n;
            }
            from = exit;
        }
        let tgt_dart;
        match route.landing {
            Landing::Corner(c) => {
                let Some(n) = self.connect(from, c, e) else {
                    return false;
                };
                if src_dart == NIL {
                    src_dart = n;
                }
                tgt_dart = self.twin(n);
            }
            Landing::NewVertex => {
                let n = self.attach_new_vertex(from, tgt, e);
                if src_dart == NIL {
                    src_dart = n;
                }
                tgt_dart = self.twin(n);
            }
        }
        self.edges[e as usize].first = if src == edge.u { src_dart } else { tgt_dart };
        true
    }

    // ----- validation ------------------------------------------------------

    /// Checks every structural invariant; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |kind: &'static str, detail: String| out.push(Violation { kind, detail });
        let nd = self.darts.len() as DartId;

        for d in 0..nd {
            let dart = &self.darts[d as usize];
            if dart.twin >= nd || dart.twin == d || self.twin(dart.twin) != d {
                push("twin-involution", format!("dart {d}"));
            }
            if dart.next >= nd || dart.prev >= nd {
                push("rotation", format!("dart {d} has dangling rotation links"));
                continue;
            }
            if self.prev(dart.next) != d || self.next(dart.prev) != d {
                push("rotation", format!("dart {d}: next/prev are not inverse"));
            }
            if self.origin(dart.next) != dart.origin {
                push("rotation", format!("dart {d}: rotation leaves its node"));
            }
        }
        if !out.is_empty() {
            return out;
        }

        // Every dart belongs to exactly the rotation of its origin.
        let mut seen = vec![false; self.darts.len()];
        for x in 0..self.nodes.len() as NodeId {
            for d in self.rotation(x) {
                if self.origin(d) != x || seen[d as usize] {
                    out.push(Violation {
                        kind: "rotation",
                        detail: format!("dart {d} listed at node {x}"),
                    });
                }
                seen[d as usize] = true;
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            out.push(Violation {
                kind: "rotation",
                detail: format!("dart {d} missing from its node's rotation"),
            });
        }

        // Crossing nodes: four darts alternating between the two edges
        // (spokes of a sealed region may sit in its corners).
        let mut crossing_pairs = std::collections::HashSet::new();
        let mut visible = vec![0u8; self.edges.len()];
        for x in 0..self.nodes.len() as NodeId {
            if let NodeKind::Crossing(a, b) = self.nodes[x as usize] {
                let rot = self.real_rotation(x);
                let es: Vec<EdgeId> = rot.iter().map(|&d| self.dart_edge(d)).collect();
                let ok = es.len() == 4
                    && es[0] == es[2]
                    && es[1] == es[3]
                    && es[0] != es[1]
                    && ((es[0] == a && es[1] == b) || (es[0] == b && es[1] == a));
                if !ok {
                    out.push(Violation {
                        kind: "crossing-degree",
                        detail: format!("node {x} rotation edges {es:?}"),
                    });
                }
                visible[a as usize] += 1;
                visible[b as usize] += 1;
                let key = (a.min(b), a.max(b));
                if !crossing_pairs.insert(key) {
                    out.push(Violation {
                        kind: "simple",
                        detail: format!("edges {} and {} cross twice", key.0, key.1),
                    });
                }
                let (ea, eb) = (&self.edges[a as usize], &self.edges[b as usize]);
                if ea.is_incident(eb.u) || ea.is_incident(eb.v) {
                    out.push(Violation {
                        kind: "simple",
                        detail: format!("adjacent edges {a} and {b} cross"),
                    });
                }
            }
        }

        for (e, s) in self.edges.iter().enumerate() {
            if s.crossings != visible[e] {
                out.push(Violation {
                    kind: "budget",
                    detail: format!(
                        "edge {e}: {} crossing nodes but counter says {}",
                        visible[e], s.crossings
                    ),
                });
            }
            if s.fake != 0 && s.fake != MAX_CROSSINGS {
                out.push(Violation {
                    kind: "budget",
                    detail: format!("edge {e}: fake crossings {}", s.fake),
                });
            }
            if s.crossings + s.hidden + s.fake > MAX_CROSSINGS {
                out.push(Violation {
                    kind: "budget",
                    detail: format!("edge {e} is crossed more than twice"),
                });
            }
            if s.drawn() && s.hidden == 0 && !s.spoke {
                let chain = self.chain(e as EdgeId);
                let start_ok = self.nodes[self.origin(chain[0]) as usize] == NodeKind::Vertex(s.u);
                let end = self.head(*chain.last().unwrap());
                let end_ok = self.nodes[end as usize] == NodeKind::Vertex(s.v);
                if !start_ok || !end_ok || chain.len() != s.crossings as usize + 1 {
                    out.push(Violation {
                        kind: "chain",
                        detail: format!("edge {e} chain of {} darts is broken", chain.len()),
                    });
                }
            }
        }

        for (v, &x) in self.vertex_node.iter().enumerate() {
            if x != NIL && self.nodes.get(x as usize) != Some(&NodeKind::Vertex(v as VertexId)) {
                out.push(Violation {
                    kind: "vertex",
                    detail: format!("vertex {v} maps to node {x} of another kind"),
                });
            }
        }

        if !self.darts.is_empty() {
            let comps = self.node_components();
            let v = self.nodes.len() as i64;
            let e = self.segment_count() as i64;
            let f = self.face_index().len() as i64;
            if comps != 1 {
                out.push(Violation {
                    kind: "connected",
                    detail: format!("planarization has {comps} components"),
                });
            } else if v - e + f != 2 {
                out.push(Violation {
                    kind: "euler",
                    detail: format!("V - E + F = {v} - {e} + {f} != 2"),
                });
            }
        }
        out
    }

    fn node_components(&self) -> usize {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut comps = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            comps += 1;
            let mut stack = vec![s as NodeId];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for d in self.rotation(x) {
                    let h = self.head(d) as usize;
                    if !seen[h] {
                        seen[h] = true;
                        stack.push(h as NodeId);
                    }
                }
            }
        }
        comps
    }

    /// Euler characteristic `V - E + F` of the planarization.
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.segment_count() as i64 + self.face_count() as i64
    }

    #[cfg(test)]
    pub(crate) fn corrupt_twin(&mut self, d: DartId) {
        self.darts[d as usize].twin = d;
    }
}

use NodeKind::Crossing;

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graphs::{gen_complete, gen_cycle, LabeledGraph};

    fn path_graph() -> LabeledGraph {
        let mut g = LabeledGraph::with_vertices(3);
        g.add_edge(0, 1, false, crate::graphs::EdgeTag::Plain)
            .unwrap();
        g.add_edge(1, 2, false, crate::graphs::EdgeTag::Plain)
            .unwrap();
        g
    }

    #[test]
    fn init_single_edge() {
        let g = path_graph();
        let d = init_drawing(&g, 0).unwrap();
        assert_eq!(d.node_count(), 2);
        assert_eq!(d.segment_count(), 1);
        assert_eq!(d.face_count(), 1);
        assert_eq!(d.euler_characteristic(), 2);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn init_rejects_loops_and_unknown_edges() {
        let g = path_graph();
        assert!(init_drawing(&g, 7).is_err());
        let mut d = Drawing::empty(&g);
        d.edges[0].v = d.edges[0].u;
        assert!(d.draw_first_edge(0).is_err());
    }

    /// Draws the cycle plane by attaching vertices one at a time and closing.
    pub(crate) fn plane_cycle(n: usize) -> Drawing {
        let g = gen_cycle(n).unwrap();
        let mut d = init_drawing(&g, 0).unwrap();
        for e in 1..n as EdgeId - 1 {
            let src = g.edge(e).u;
            let start = d.rotation(d.vertex_node(src).unwrap())[0];
            assert!(d.apply_route(e, &Route::new(start, &[], Landing::NewVertex)));
        }
        let last = n as EdgeId - 1;
        let src = g.edge(last).u;
        let tgt = g.edge(last).v;
        let start = d.rotation(d.vertex_node(src).unwrap())[0];
        let land = d.rotation(d.vertex_node(tgt).unwrap())[0];
        assert!(d.apply_route(last, &Route::new(start, &[], Landing::Corner(land))));
        d
    }

    #[test]
    fn plane_cycle_has_two_faces() {
        let d = plane_cycle(10);
        assert_eq!(d.face_count(), 2);
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        for e in 0..10 {
            assert_eq!(d.crossing_count(e).unwrap(), 0);
            assert_eq!(d.chain(e).len(), 1);
        }
        assert!(d.crossing_count(10).is_err());
    }

    #[test]
    fn crossing_in_k4_path() {
        // Draw the 4-cycle 0-1-2-3 plane, then chord 0-2 inside and chord
        // 1-3 crossing it.
        let mut g = gen_cycle(4).unwrap();
        g.add_edge(0, 2, false, crate::graphs::EdgeTag::Plain)
            .unwrap();
        g.add_edge(1, 3, false, crate::graphs::EdgeTag::Plain)
            .unwrap();
        let mut d = init_drawing(&g, 0).unwrap();
        for e in 1..3 {
            let src = g.edge(e).u;
            let start = d.rotation(d.vertex_node(src).unwrap())[0];
            assert!(d.apply_route(e, &Route::new(start, &[], Landing::NewVertex)));
        }
        let n3 = d.vertex_node(3).unwrap();
        let n0 = d.vertex_node(0).unwrap();
        assert!(d.apply_route(
            3,
            &Route::new(d.rotation(n3)[0], &[], Landing::Corner(d.rotation(n0)[0]))
        ));
        assert_eq!(d.face_count(), 2);
        // chord 0-2 in the face of some corner at 0
        let n2 = d.vertex_node(2).unwrap();
        let fi = d.face_index();
        let c0 = d.rotation(n0)[0];
        let c2 = *d
            .rotation(n2)
            .iter()
            .find(|&&c| fi.face_of[c as usize] == fi.face_of[c0 as usize])
            .unwrap();
        assert!(d.apply_route(4, &Route::new(c0, &[], Landing::Corner(c2))));
        assert_eq!(d.face_count(), 3);
        // chord 1-3 crossing 0-2: find a face at 1 bordered by edge 4
        let n1 = d.vertex_node(1).unwrap();
        let fi = d.face_index();
        let mut done = false;
        for c1 in d.rotation(n1) {
            let f = fi.face_of[c1 as usize] as usize;
            let Some(&x) = fi.walks[f].iter().find(|&&x| d.dart_edge(x) == 4) else {
                continue;
            };
            let g2 = fi.face_of[d.twin(x) as usize] as usize;
            let Some(&c3) = fi.walks[g2].iter().find(|&&c| d.origin(c) == n3) else {
                continue;
            };
            let mut trial = d.clone();
            assert!(trial.apply_route(5, &Route::new(c1, &[x], Landing::Corner(c3))));
            assert!(trial.validate().is_empty(), "{:?}", trial.validate());
            assert_eq!(trial.crossing_count(4).unwrap(), 1);
            assert_eq!(trial.crossing_count(5).unwrap(), 1);
            assert_eq!(trial.face_count(), 5);
            done = true;
            break;
        }
        assert!(done);
        let _ = gen_complete(4);
    }

    #[test]
    fn corrupted_twin_is_reported() {
        let mut d = plane_cycle(5);
        d.corrupt_twin(3);
        let report = d.validate();
        assert!(report.iter().any(|v| v.kind == "twin-involution"));
    }

    #[test]
    fn faces_partition_darts() {
        let d = plane_cycle(7);
        let faces = d.faces();
        let mut all: Vec<DartId> = faces.iter().flat_map(|f| f.boundary.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..d.dart_count() as DartId).collect::<Vec<_>>());
        assert!(faces.iter().all(|f| f.vertices.len() == 7));
    }
}
