//! Checks of the degree-counting argument on concrete drawings: admissible
//! drawings, vertex types, the structural predicates, the charging scheme and
//! the resulting degree inequalities.
//!
//! A halfedge is the incidence of an edge at one endpoint; [`HalfEdge`]
//! `{ at: v, from: u }` is the end of `uv` at `v`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::dcel::{Drawing, NodeKind};
use crate::enumerate::{enumerate_drawings, Decision, Dedup, EnumerateOptions, Outcome};
use crate::error::{Error, Result};
use crate::graphs::{EdgeId, LabeledGraph, VertexId};
use crate::saturation::graph_maximal;

/// Degree from which a vertex serves claims.
pub const HIGH: usize = 5;

/// Maps with non-string keys are written as lists of `[key, value]`.
fn as_pairs<K: Serialize, V: Serialize, S: serde::Serializer>(
    m: &BTreeMap<K, V>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HalfEdge {
    pub at: VertexId,
    pub from: VertexId,
}

impl HalfEdge {
    pub fn new(from: VertexId, at: VertexId) -> Self {
        HalfEdge { at, from }
    }

    /// The other end of the same edge.
    pub fn reverse(self) -> Self {
        HalfEdge {
            at: self.from,
            from: self.at,
        }
    }

    fn edge(self) -> (VertexId, VertexId) {
        (self.at.min(self.from), self.at.max(self.from))
    }
}

// ---------------------------------------------------------------------------
// Drawing facts
// ---------------------------------------------------------------------------

/// Combinatorial data of a complete drawing used by all audits.
#[derive(Clone, Debug)]
pub struct DrawingFacts {
    pub graph: LabeledGraph,
    pub degree: Vec<usize>,
    /// Edges crossing each edge, in order from its `u` end.
    pub partners: Vec<Vec<EdgeId>>,
    /// Neighbors of each vertex in rotation order.
    pub rotation: Vec<Vec<VertexId>>,
    /// Real vertices on each face boundary.
    pub face_vertices: Vec<Vec<VertexId>>,
}

impl DrawingFacts {
    pub fn new(d: &Drawing) -> Result<Self> {
        if d.edges().iter().any(|s| s.spoke || !s.drawn()) {
            return Err(Error::InvalidInput(
                "audits need a complete drawing without auxiliary edges".into(),
            ));
        }
        let graph = d.to_graph();
        let partners = (0..d.edge_count() as EdgeId)
            .map(|e| {
                d.chain(e)
                    .into_iter()
                    .filter_map(|x| match d.node_kind(d.head(x)) {
                        NodeKind::Crossing(a, b) => Some(if a == e { b } else { a }),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let rotation = (0..d.vertex_count() as VertexId)
            .map(|v| {
                d.edge_rotation(v)
                    .into_iter()
                    .map(|e| {
                        let s = d.edge(e);
                        if s.u == v {
                            s.v
                        } else {
                            s.u
                        }
                    })
                    .collect()
            })
            .collect();
        let face_vertices = d.faces().into_iter().map(|f| f.vertices).collect();
        Ok(DrawingFacts {
            degree: graph.degrees(),
            graph,
            partners,
            rotation,
            face_vertices,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.graph.edge_id(u, v)
    }

    pub fn crossings(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.edge(u, v).map(|e| self.partners[e as usize].len())
    }

    fn uncrossed(&self, u: VertexId, v: VertexId) -> bool {
        self.crossings(u, v) == Some(0)
    }

    pub fn total_crossings(&self) -> usize {
        self.partners.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn doubly_crossed(&self) -> usize {
        self.partners.iter().filter(|p| p.len() == 2).count()
    }

    fn crossing_pairs(&self) -> BTreeSet<(EdgeId, EdgeId)> {
        let mut out = BTreeSet::new();
        for (e, ps) in self.partners.iter().enumerate() {
            for &f in ps {
                let e = e as EdgeId;
                out.insert((e.min(f), e.max(f)));
            }
        }
        out
    }

    fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.graph.neighbors(v)
    }

    fn hermits_at(&self, v: VertexId) -> Vec<VertexId> {
        self.neighbors(v)
            .iter()
            .copied()
            .filter(|&h| self.degree[h as usize] == 2)
            .collect()
    }

    /// Neighbors of `w` just before and after `u` in the rotation at `w`,
    /// ignoring the neighbors in `skip`.
    fn rotation_neighbors(
        &self,
        w: VertexId,
        u: VertexId,
        skip: &[VertexId],
    ) -> Option<(VertexId, VertexId)> {
        let rot: Vec<VertexId> = self.rotation[w as usize]
            .iter()
            .copied()
            .filter(|x| !skip.contains(x))
            .collect();
        let i = rot.iter().position(|&x| x == u)?;
        let k = rot.len();
        (k >= 3).then(|| (rot[(i + k - 1) % k], rot[(i + 1) % k]))
    }

    /// Halfedge of `ab` at `a` is peripheral for a common neighbor of `a`
    /// and `b` when `a` has high degree and `b` has degree at least four.
    pub fn peripheral(&self, from: VertexId, at: VertexId) -> bool {
        self.edge(from, at).is_some()
            && self.degree[at as usize] >= HIGH
            && self.degree[from as usize] >= 4
    }
}

// ---------------------------------------------------------------------------
// Admissible drawings
// ---------------------------------------------------------------------------

/// Crossing-minimal 2-plane drawings of `g` that, among those, have the
/// fewest doubly crossed edges (one per mirror pair).
pub fn admissible_drawings(
    g: &LabeledGraph,
    node_budget: Option<u64>,
) -> Result<(Vec<Drawing>, Outcome)> {
    let mut opts = EnumerateOptions::new(2, Dedup::LabeledMirror);
    opts.node_budget = node_budget;
    let all = enumerate_drawings(g, &opts)?;
    let scored: Vec<(usize, usize, Drawing)> = all
        .drawings
        .into_iter()
        .map(|d| {
            let f = DrawingFacts::new(&d)?;
            Ok((f.total_crossings(), f.doubly_crossed(), d))
        })
        .collect::<Result<_>>()?;
    let best = scored.iter().map(|s| (s.0, s.1)).min();
    let out = scored
        .into_iter()
        .filter(|s| Some((s.0, s.1)) == best)
        .map(|s| s.2)
        .collect();
    Ok((out, all.outcome))
}

// ---------------------------------------------------------------------------
// Vertex classes
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    /// Degree at most one (impossible in maximal graphs).
    Degenerate,
    Hermit,
    /// Degree three without an uncrossed incident edge.
    T3_0,
    T3_1,
    T3_2,
    T3_3Hermit,
    T3_3Mingler,
    T4H,
    Plain4,
    High(usize),
}

impl VertexClass {
    pub fn is_low(self) -> bool {
        matches!(
            self,
            VertexClass::Hermit
                | VertexClass::T3_0
                | VertexClass::T3_1
                | VertexClass::T3_2
                | VertexClass::T3_3Hermit
                | VertexClass::T3_3Mingler
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexInfo {
    pub vertex: VertexId,
    pub degree: usize,
    pub class: VertexClass,
    /// Crossings on each incident edge, by neighbor.
    pub crossed: Vec<(VertexId, usize)>,
    /// For hermits: the two neighbors (the base edge).
    pub host: Option<(VertexId, VertexId)>,
}

pub fn classify_vertex(f: &DrawingFacts, v: VertexId) -> VertexInfo {
    let deg = f.degree[v as usize];
    let crossed: Vec<(VertexId, usize)> = f
        .neighbors(v)
        .iter()
        .map(|&w| (w, f.crossings(v, w).unwrap_or(0)))
        .collect();
    let uncrossed = crossed.iter().filter(|c| c.1 == 0).count();
    let all_uncrossed_deg3 = |x: VertexId| {
        f.degree[x as usize] == 3 && f.neighbors(x).iter().all(|&y| f.uncrossed(x, y))
    };
    let class = match deg {
        0 | 1 => VertexClass::Degenerate,
        2 => VertexClass::Hermit,
        3 => match uncrossed {
            0 => VertexClass::T3_0,
            1 => VertexClass::T3_1,
            2 => VertexClass::T3_2,
            _ if f.neighbors(v).iter().any(|&x| all_uncrossed_deg3(x)) => VertexClass::T3_3Hermit,
            _ => VertexClass::T3_3Mingler,
        },
        4 if !f.hermits_at(v).is_empty() => VertexClass::T4H,
        4 => VertexClass::Plain4,
        d => VertexClass::High(d),
    };
    let host = (deg == 2).then(|| {
        let n = f.neighbors(v);
        (n[0].min(n[1]), n[0].max(n[1]))
    });
    VertexInfo {
        vertex: v,
        degree: deg,
        class,
        crossed,
        host,
    }
}

// ---------------------------------------------------------------------------
// Structural predicates
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct Predicate {
    pub id: char,
    pub name: &'static str,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralReport {
    /// Whether the drawing is known to be admissible; the predicates are
    /// only promised for admissible drawings of maximal graphs.
    pub admissible: Option<bool>,
    pub predicates: Vec<Predicate>,
}

impl StructuralReport {
    pub fn all_pass(&self) -> bool {
        self.predicates.iter().all(|p| p.pass)
    }

    pub fn get(&self, id: char) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.id == id)
    }
}

fn two_connected(g: &LabeledGraph) -> Option<VertexId> {
    if g.n() < 3 {
        return None;
    }
    if !g.is_connected() {
        return Some(VertexId::MAX);
    }
    (0..g.n() as VertexId).find(|&x| {
        let rest: Vec<VertexId> = (0..g.n() as VertexId).filter(|&y| y != x).collect();
        !g.induced(&rest).is_connected()
    })
}

pub fn structural_report(d: &Drawing, admissible: Option<bool>) -> Result<StructuralReport> {
    let f = DrawingFacts::new(d)?;
    let n = f.n() as VertexId;
    let info: Vec<VertexInfo> = (0..n).map(|v| classify_vertex(&f, v)).collect();
    let lbl = |v: VertexId| f.graph.label(v).to_string();
    let mut preds = Vec::new();
    let mut push = |id, name, witnesses: Vec<String>| {
        preds.push(Predicate {
            id,
            name,
            pass: witnesses.is_empty(),
            witnesses,
        })
    };

    // (a) vertices sharing a face are adjacent by an uncrossed edge
    let mut w = BTreeSet::new();
    for face in &f.face_vertices {
        for (i, &a) in face.iter().enumerate() {
            for &b in &face[i + 1..] {
                if a != b && !f.uncrossed(a, b) {
                    w.insert(format!("{}-{}", lbl(a.min(b)), lbl(a.max(b))));
                }
            }
        }
    }
    push('a', "common_face_uncrossed_edge", w.into_iter().collect());

    // (b) every vertex has an uncrossed incident edge
    let w = (0..n)
        .filter(|&v| f.degree[v as usize] > 0 && info[v as usize].crossed.iter().all(|c| c.1 > 0))
        .map(lbl)
        .collect();
    push('b', "uncrossed_incident_edge", w);

    // (c) 2-connectivity
    let w = match two_connected(&f.graph) {
        None => Vec::new(),
        Some(VertexId::MAX) => vec!["disconnected".into()],
        Some(x) => vec![format!("cut vertex {}", lbl(x))],
    };
    push('c', "two_connected", w);

    let hermits: Vec<&VertexInfo> = info
        .iter()
        .filter(|i| i.class == VertexClass::Hermit)
        .collect();

    // (d) hermit triangles are uncrossed
    let mut w = Vec::new();
    for h in &hermits {
        let (x, y) = h.host.expect("hermit host");
        if !(f.uncrossed(x, y) && f.uncrossed(h.vertex, x) && f.uncrossed(h.vertex, y)) {
            w.push(lbl(h.vertex));
        }
    }
    push('d', "hermit_triangle_uncrossed", w);

    // (e) an edge hosts at most one hermit
    let mut hosts: BTreeMap<(VertexId, VertexId), Vec<VertexId>> = BTreeMap::new();
    for h in &hermits {
        hosts
            .entry(h.host.expect("hermit host"))
            .or_default()
            .push(h.vertex);
    }
    let w = hosts
        .iter()
        .filter(|(_, hs)| hs.len() > 1)
        .map(|(&(x, y), _)| format!("{}-{}", lbl(x), lbl(y)))
        .collect();
    push('e', "one_hermit_per_edge", w);

    // (f) neighbors of hermits have degree at least four
    let w = hermits
        .iter()
        .filter(|h| {
            let (x, y) = h.host.expect("hermit host");
            f.degree[x as usize] < 4 || f.degree[y as usize] < 4
        })
        .map(|h| lbl(h.vertex))
        .collect();
    push('f', "hermit_neighbor_degree", w);

    // (g) a degree-i vertex has at most floor(i/3) hermits
    let w = (0..n)
        .filter(|&v| f.hermits_at(v).len() > f.degree[v as usize] / 3)
        .map(lbl)
        .collect();
    push('g', "hermits_per_vertex", w);

    // (h) T4-H: the other two edges are doubly crossed; deg(v) >= 6, and
    // if deg(v) = 6 the hermit is the only one at v
    let mut w = Vec::new();
    for i in info.iter().filter(|i| i.class == VertexClass::T4H) {
        let u = i.vertex;
        for h in f.hermits_at(u) {
            let v = f
                .neighbors(h)
                .iter()
                .copied()
                .find(|&x| x != u)
                .expect("hermit has two neighbors");
            let others: Vec<VertexId> = f
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&x| x != h && x != v)
                .collect();
            let dv = f.degree[v as usize];
            let ok = others.iter().all(|&x| f.crossings(u, x) == Some(2))
                && dv >= 6
                && (dv > 6 || f.hermits_at(v).len() == 1);
            if !ok {
                w.push(lbl(u));
            }
        }
    }
    push('h', "t4h_structure", w);

    // (i) T3-1: the uncrossed neighbor has degree at least five
    let w = info
        .iter()
        .filter(|i| i.class == VertexClass::T3_1)
        .filter(|i| {
            let v = i
                .crossed
                .iter()
                .find(|c| c.1 == 0)
                .expect("one uncrossed")
                .0;
            f.degree[v as usize] < HIGH
        })
        .map(|i| lbl(i.vertex))
        .collect();
    push('i', "t31_neighbor_degree", w);

    // (j), (k) T3-2 structure and degrees
    let mut wj = Vec::new();
    let mut wk = Vec::new();
    for i in info.iter().filter(|i| i.class == VertexClass::T3_2) {
        match t32_roles(&f, i.vertex) {
            Ok(r) => {
                if f.degree[r.w as usize] < HIGH
                    || f.degree[r.v as usize].min(f.degree[r.x as usize]) < 4
                {
                    wk.push(lbl(i.vertex));
                }
            }
            Err(_) => wj.push(lbl(i.vertex)),
        }
    }
    push('j', "t32_crossing_structure", wj);
    push('k', "t32_degrees", wk);

    // (l) inefficient hermits: common neighbors joined by an uncrossed edge,
    // both of degree at least five
    let mut w = Vec::new();
    for i in info.iter().filter(|i| i.class == VertexClass::T3_3Hermit) {
        match ineff_pair(&f, &info, i.vertex) {
            Some((_, x, y)) => {
                if !f.uncrossed(x, y) || f.degree[x as usize] < HIGH || f.degree[y as usize] < HIGH
                {
                    w.push(lbl(i.vertex));
                }
            }
            None => w.push(lbl(i.vertex)),
        }
    }
    push('l', "inefficient_hermit_neighbors", w);

    // (m) minglers: neighbors of degree >= 4, and one of degree >= 6 or two
    // of degree >= 5
    let w = info
        .iter()
        .filter(|i| i.class == VertexClass::T3_3Mingler)
        .filter(|i| {
            let ds: Vec<usize> = f
                .neighbors(i.vertex)
                .iter()
                .map(|&x| f.degree[x as usize])
                .collect();
            let ok = ds.iter().all(|&d| d >= 4)
                && (ds.iter().any(|&d| d >= 6) || ds.iter().filter(|&&d| d >= 5).count() >= 2);
            !ok
        })
        .map(|i| lbl(i.vertex))
        .collect();
    push('m', "mingler_degrees", w);

    Ok(StructuralReport {
        admissible,
        predicates: preds,
    })
}

/// Roles around a T3-2 vertex `u`: `uv` is crossed by `wb`; `x` is the
/// third neighbor.
#[derive(Clone, Copy, Debug)]
struct T32Roles {
    v: VertexId,
    w: VertexId,
    x: VertexId,
    b: VertexId,
}

fn t32_roles(f: &DrawingFacts, u: VertexId) -> Result<T32Roles> {
    let bad = |why: &str| {
        Err(Error::StructuralViolation(format!(
            "T3-2 vertex {}: {why}",
            f.graph.label(u)
        )))
    };
    let nb = f.neighbors(u);
    let Some(&v) = nb.iter().find(|&&y| !f.uncrossed(u, y)) else {
        return bad("no crossed edge");
    };
    let e = f.edge(u, v).expect("edge");
    let ps = &f.partners[e as usize];
    if ps.len() != 1 {
        return bad("crossed edge is not singly crossed");
    }
    let c = f.graph.edge(ps[0]);
    if f.partners[ps[0] as usize].len() != 2 {
        return bad("crossing edge is not doubly crossed");
    }
    let Some(&w) = nb.iter().find(|&&y| y != v && c.is_incident(y)) else {
        return bad("crossing edge avoids the other neighbors");
    };
    let b = c.other(w);
    // the part of wb between w and the crossing with uv is uncrossed
    let from_w: Vec<EdgeId> = if c.u == w {
        f.partners[ps[0] as usize].clone()
    } else {
        f.partners[ps[0] as usize].iter().rev().copied().collect()
    };
    if from_w.first() != Some(&e) {
        return bad("crossing is not the first one along the crossing edge");
    }
    let x = *nb
        .iter()
        .find(|&&y| y != v && y != w)
        .expect("three neighbors");
    Ok(T32Roles { v, w, x, b })
}

/// For a T3-3 hermit: its partner and their two common neighbors.
fn ineff_pair(
    f: &DrawingFacts,
    info: &[VertexInfo],
    z: VertexId,
) -> Option<(VertexId, VertexId, VertexId)> {
    let nb = f.neighbors(z);
    let zp = *nb
        .iter()
        .find(|&&y| matches!(info[y as usize].class, VertexClass::T3_3Hermit))?;
    let mut common: Vec<VertexId> = nb.iter().copied().filter(|&y| y != zp).collect();
    common.sort_unstable();
    let mut other: Vec<VertexId> = f
        .neighbors(zp)
        .iter()
        .copied()
        .filter(|&y| y != z)
        .collect();
    other.sort_unstable();
    (common.len() == 2 && common == other).then(|| (zp, common[0], common[1]))
}

// ---------------------------------------------------------------------------
// Charging scheme
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// Hermit claims at high-degree neighbors.
    C1,
    /// T3-1 claims.
    C2,
    /// T4-H claims.
    C3,
    T32,
    T33,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub by: VertexId,
    pub rule: Rule,
}

/// What a low-degree vertex still has to choose.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Pending {
    /// A T3-2 vertex needs one of two peripheral halfedges at `w`.
    T32 { w: VertexId, options: [HalfEdge; 2] },
    /// A T3-3 vertex needs its two peripheral halfedges at one high-degree
    /// neighbor (together with its own halfedge there).
    Mingler { neighbors: [VertexId; 3] },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClaimLedger {
    pub degree: Vec<usize>,
    #[serde(serialize_with = "as_pairs")]
    pub claims: BTreeMap<HalfEdge, Claim>,
    /// Halfedges that two claims asked for (kept out of `claims`).
    pub double_claims: Vec<(HalfEdge, VertexId, VertexId)>,
    /// Peripheral halfedges assessed by each T3-2 or T3-3 vertex.
    pub assessed: BTreeMap<VertexId, BTreeSet<HalfEdge>>,
    pub pending: BTreeMap<VertexId, Pending>,
    /// Number of halfedges each claiming vertex must end up with.
    pub quota: BTreeMap<VertexId, usize>,
    /// Vertices whose choice could not be made by the greedy procedures.
    pub unresolved: Vec<VertexId>,
    /// Vertices resolved by the exhaustive fallback instead.
    pub fallback: Vec<VertexId>,
}

impl ClaimLedger {
    pub fn new(degree: Vec<usize>) -> Self {
        ClaimLedger {
            degree,
            ..Default::default()
        }
    }

    pub fn claim(&mut self, h: HalfEdge, by: VertexId, rule: Rule) {
        match self.claims.get(&h) {
            Some(c) if c.by == by => {}
            Some(c) => self.double_claims.push((h, c.by, by)),
            None => {
                self.claims.insert(h, Claim { by, rule });
            }
        }
    }

    fn is_free(&self, h: HalfEdge) -> bool {
        !self.claims.contains_key(&h)
    }

    /// Registers a T3-2 vertex `u` with neighbors `v, w, x` where `uv` is
    /// crossed by `wb`.
    pub fn add_t32(&mut self, u: VertexId, w: VertexId, b: VertexId, options: [VertexId; 2]) {
        self.claim(HalfEdge::new(u, w), u, Rule::T32);
        self.claim(HalfEdge::new(b, w), u, Rule::T32);
        let opts = [HalfEdge::new(options[0], w), HalfEdge::new(options[1], w)];
        self.assessed.insert(u, opts.into_iter().collect());
        self.pending.insert(u, Pending::T32 { w, options: opts });
        self.quota.insert(u, 3);
    }

    /// Registers a T3-3 mingler `u` assessing the given halfedges.
    pub fn add_mingler(
        &mut self,
        u: VertexId,
        neighbors: [VertexId; 3],
        assessed: BTreeSet<HalfEdge>,
    ) {
        self.assessed.insert(u, assessed);
        self.pending.insert(u, Pending::Mingler { neighbors });
        self.quota.insert(u, 3);
    }

    pub fn claims_by(&self, u: VertexId) -> Vec<HalfEdge> {
        self.claims
            .iter()
            .filter(|(_, c)| c.by == u)
            .map(|(h, _)| *h)
            .collect()
    }

    /// Vertices assessing a halfedge of the edge `{a, b}`.
    pub fn assessors_of_edge(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let key = (a.min(b), a.max(b));
        self.assessed
            .iter()
            .filter(|(_, hs)| hs.iter().any(|h| h.edge() == key))
            .map(|(&u, _)| u)
            .collect()
    }

    fn assessors_of(&self, h: HalfEdge) -> Vec<VertexId> {
        self.assessed
            .iter()
            .filter(|(_, hs)| hs.contains(&h))
            .map(|(&u, _)| u)
            .collect()
    }

    /// Largest number of vertices assessing a single edge.
    pub fn max_assessors(&self) -> usize {
        let mut count: HashMap<(VertexId, VertexId), BTreeSet<VertexId>> = HashMap::new();
        for (&u, hs) in &self.assessed {
            for h in hs {
                count.entry(h.edge()).or_default().insert(u);
            }
        }
        count.values().map(BTreeSet::len).max().unwrap_or(0)
    }
}

/// Fixed claims and assessments of every hermit, degree-three and T4-H
/// vertex of an admissible drawing.
pub fn assessments(d: &Drawing) -> Result<ClaimLedger> {
    let f = DrawingFacts::new(d)?;
    assessments_from(&f)
}

fn assessments_from(f: &DrawingFacts) -> Result<ClaimLedger> {
    let n = f.n() as VertexId;
    let info: Vec<VertexInfo> = (0..n).map(|v| classify_vertex(f, v)).collect();
    let mut led = ClaimLedger::new(f.degree.clone());
    let high = |x: VertexId| f.degree[x as usize] >= HIGH;
    let bad = |u: VertexId, why: &str| {
        Err(Error::StructuralViolation(format!(
            "vertex {}: {why}",
            f.graph.label(u)
        )))
    };
    for i in &info {
        let u = i.vertex;
        match i.class {
            VertexClass::Degenerate | VertexClass::T3_0 => {
                return bad(u, "outside the charging scheme")
            }
            VertexClass::Hermit => {
                let (x, y) = i.host.expect("hermit host");
                let mut q = 0;
                for (a, b) in [(x, y), (y, x)] {
                    if high(a) {
                        led.claim(HalfEdge::new(u, a), u, Rule::C1);
                        led.claim(HalfEdge::new(b, a), u, Rule::C1);
                        q += 2;
                    }
                }
                led.quota.insert(u, q);
            }
            VertexClass::T3_1 => {
                let v = i
                    .crossed
                    .iter()
                    .find(|c| c.1 == 0)
                    .expect("one uncrossed")
                    .0;
                let Some((p, s)) = f.rotation_neighbors(v, u, &[]) else {
                    return bad(u, "uncrossed neighbor has degree below three");
                };
                for from in [u, p, s] {
                    led.claim(HalfEdge::new(from, v), u, Rule::C2);
                }
                led.quota.insert(u, 3);
            }
            VertexClass::T4H => {
                let h = f.hermits_at(u)[0];
                let v = *f
                    .neighbors(h)
                    .iter()
                    .find(|&&x| x != u)
                    .expect("hermit has two neighbors");
                let Some((p, s)) = f.rotation_neighbors(v, u, &[h]) else {
                    return bad(u, "hermit neighbor has too small degree");
                };
                led.claim(HalfEdge::new(p, v), u, Rule::C3);
                led.claim(HalfEdge::new(s, v), u, Rule::C3);
                led.quota.insert(u, 2);
            }
            VertexClass::T3_2 => {
                let r = t32_roles(f, u)?;
                for o in [r.v, r.x] {
                    if !f.peripheral(o, r.w) {
                        return bad(u, "assessed halfedge is not peripheral");
                    }
                }
                led.add_t32(u, r.w, r.b, [r.v, r.x]);
            }
            VertexClass::T3_3Hermit => {
                let Some((zp, x, y)) = ineff_pair(f, &info, u) else {
                    return bad(u, "T3-3 hermit without a partner");
                };
                // the smaller of the pair claims at the smaller neighbor
                let at = if (u < zp) == (x < y) {
                    x.min(y)
                } else {
                    x.max(y)
                };
                let other = if at == x { y } else { x };
                for from in [u, zp, other] {
                    led.claim(HalfEdge::new(from, at), u, Rule::T33);
                }
                led.assessed.insert(u, peripheral_among(f, &[zp, x, y]));
                led.quota.insert(u, 3);
            }
            VertexClass::T3_3Mingler => {
                let nb = f.neighbors(u);
                let ns = [nb[0], nb[1], nb[2]];
                led.add_mingler(u, ns, peripheral_among(f, &ns));
            }
            VertexClass::Plain4 | VertexClass::High(_) => {}
        }
    }
    Ok(led)
}

fn peripheral_among(f: &DrawingFacts, ns: &[VertexId]) -> BTreeSet<HalfEdge> {
    let mut out = BTreeSet::new();
    for &a in ns {
        for &b in ns {
            if a != b && f.peripheral(b, a) {
                out.insert(HalfEdge::new(b, a));
            }
        }
    }
    out
}

/// The pair of halfedges a mingler with `neighbors` claims at `a`, plus
/// its own halfedge there.
fn mingler_triple(u: VertexId, neighbors: [VertexId; 3], a: VertexId) -> [HalfEdge; 3] {
    let mut others = neighbors.into_iter().filter(|&x| x != a);
    let (b, c) = (
        others.next().expect("three neighbors"),
        others.next().expect("three neighbors"),
    );
    [
        HalfEdge::new(u, a),
        HalfEdge::new(b, a),
        HalfEdge::new(c, a),
    ]
}

struct Resolver {
    led: ClaimLedger,
}

impl Resolver {
    fn pending_t32(&self, u: VertexId) -> Option<[HalfEdge; 2]> {
        match self.led.pending.get(&u) {
            Some(Pending::T32 { options, .. }) => Some(*options),
            _ => None,
        }
    }

    fn pending_mingler(&self, u: VertexId) -> Option<[VertexId; 3]> {
        match self.led.pending.get(&u) {
            Some(Pending::Mingler { neighbors }) => Some(*neighbors),
            _ => None,
        }
    }

    fn mingler_can_take(&self, u: VertexId, a: VertexId) -> bool {
        let Some(ns) = self.pending_mingler(u) else {
            return false;
        };
        let t = mingler_triple(u, ns, a);
        let assessed = &self.led.assessed[&u];
        self.led.degree[a as usize] >= HIGH
            && t[1..]
                .iter()
                .all(|h| assessed.contains(h) && self.led.is_free(*h))
    }

    fn take_mingler(&mut self, u: VertexId, a: VertexId) {
        let ns = self.pending_mingler(u).expect("pending mingler");
        for h in mingler_triple(u, ns, a) {
            self.led.claim(h, u, Rule::T33);
        }
        self.led.pending.remove(&u);
    }

    fn take_t32(&mut self, u: VertexId, h: HalfEdge) {
        self.led.claim(h, u, Rule::T32);
        self.led.pending.remove(&u);
    }

    /// Follows the chain started by claiming the contested halfedge `h`.
    fn chain(&mut self, mut h: HalfEdge, mut claimer: VertexId) {
        loop {
            let next = self
                .led
                .assessors_of(h)
                .into_iter()
                .find(|&x| x != claimer && self.led.pending.contains_key(&x));
            let Some(x) = next else {
                return;
            };
            if let Some(opts) = self.pending_t32(x) {
                let other = if opts[0] == h { opts[1] } else { opts[0] };
                if !self.led.is_free(other) {
                    return;
                }
                self.take_t32(x, other);
                h = other;
                claimer = x;
            } else {
                // a mingler: take the pair at the far end of h's edge
                let a = h.from;
                if !self.mingler_can_take(x, a) {
                    return;
                }
                let ns = self.pending_mingler(x).expect("pending mingler");
                let t = mingler_triple(x, ns, a);
                self.take_mingler(x, a);
                let Some(&nh) = t[1..].iter().find(|&&y| y != h.reverse()) else {
                    return;
                };
                h = nh;
                claimer = x;
            }
        }
    }

    fn assessed_by_others(&self, u: VertexId, h: HalfEdge, within: &BTreeSet<VertexId>) -> bool {
        self.led
            .assessors_of(h)
            .into_iter()
            .any(|x| x != u && within.contains(&x))
    }

    fn is_tricky(&self, u: VertexId, within: &BTreeSet<VertexId>) -> bool {
        let Some([v, w, x]) = self.pending_mingler(u) else {
            return false;
        };
        let assessed = &self.led.assessed[&u];
        if assessed.len() < 6 {
            return false;
        }
        let contested =
            |a: VertexId, b: VertexId| self.assessed_by_others(u, HalfEdge::new(a, b), within);
        (contested(v, w) && contested(w, x) && contested(x, v))
            || (contested(v, x) && contested(x, w) && contested(w, v))
    }

    fn resolve_t32(&mut self) {
        let verts: Vec<VertexId> = self
            .led
            .pending
            .iter()
            .filter(|(_, p)| matches!(p, Pending::T32 { .. }))
            .map(|(&u, _)| u)
            .collect();
        for u in verts {
            let Some(opts) = self.pending_t32(u) else {
                continue;
            };
            let Some(h) = opts.into_iter().filter(|&h| self.led.is_free(h)).min() else {
                continue;
            };
            self.take_t32(u, h);
            self.chain(h, u);
        }
    }

    fn resolve_minglers(&mut self) {
        loop {
            let mut within: BTreeSet<VertexId> = self
                .led
                .pending
                .iter()
                .filter(|(_, p)| matches!(p, Pending::Mingler { .. }))
                .map(|(&u, _)| u)
                .collect();
            // drop easy minglers until only tricky ones remain
            loop {
                let easy: Vec<VertexId> = within
                    .iter()
                    .copied()
                    .filter(|&u| !self.is_tricky(u, &within))
                    .collect();
                if easy.is_empty() {
                    break;
                }
                for u in easy {
                    within.remove(&u);
                }
            }
            let Some(&u) = within.iter().next() else {
                break;
            };
            let before = self.led.pending.len();
            if !self.resolve_tricky(u, &within) || self.led.pending.len() == before {
                break;
            }
        }
        let easy: Vec<VertexId> = self
            .led
            .pending
            .iter()
            .filter(|(_, p)| matches!(p, Pending::Mingler { .. }))
            .map(|(&u, _)| u)
            .collect();
        for u in easy {
            let ns = self.pending_mingler(u).expect("pending mingler");
            let mut cand: Vec<VertexId> = ns.to_vec();
            cand.sort_unstable();
            if let Some(a) = cand.into_iter().find(|&a| self.mingler_can_take(u, a)) {
                self.take_mingler(u, a);
            }
        }
    }

    /// Handles the cycle of tricky minglers around the smallest high-degree
    /// neighbor of `u`. Returns false when no progress was made.
    fn resolve_tricky(&mut self, u: VertexId, within: &BTreeSet<VertexId>) -> bool {
        let ns = self.pending_mingler(u).expect("pending mingler");
        let Some(v) = ns
            .iter()
            .copied()
            .filter(|&a| self.led.degree[a as usize] >= HIGH)
            .min()
        else {
            return false;
        };
        // walk the cycle u_1 = u, u_2, ... of tricky minglers sharing the
        // halfedges at v
        let mut cycle = vec![u];
        let mut shared = Vec::new();
        let first_pair = mingler_triple(u, ns, v);
        let mut h = first_pair[2];
        loop {
            let cur = *cycle.last().expect("nonempty");
            let next = self
                .led
                .assessors_of(h)
                .into_iter()
                .find(|&x| x != cur && within.contains(&x));
            shared.push(h);
            match next {
                Some(x) if x == u => break,
                Some(x) if !cycle.contains(&x) => {
                    let nx = self.pending_mingler(x).expect("pending mingler");
                    let t = mingler_triple(x, nx, v);
                    let Some(&nh) = t[1..].iter().find(|&&y| y != h) else {
                        return false;
                    };
                    cycle.push(x);
                    h = nh;
                }
                _ => return false,
            }
            if cycle.len() > self.led.degree.len() {
                return false;
            }
        }
        let k = cycle.len();
        let odd_upto = if k % 2 == 0 { k } else { k - 1 };
        for i in (0..odd_upto).step_by(2) {
            if self.mingler_can_take(cycle[i], v) {
                self.take_mingler(cycle[i], v);
            }
        }
        if k % 2 == 1 {
            // the last one claims at the far end of the edge it shares with
            // u_1, then the chain from its second halfedge there
            let uk = cycle[k - 1];
            let xk = shared[k - 1].from;
            if self.mingler_can_take(uk, xk) {
                let nk = self.pending_mingler(uk).expect("pending mingler");
                let t = mingler_triple(uk, nk, xk);
                self.take_mingler(uk, xk);
                if let Some(&bold) = t[1..].iter().find(|&&y| y.from != v) {
                    self.chain(bold, uk);
                }
            }
        }
        true
    }

    /// Exhaustive assignment for whatever the greedy steps left open.
    fn fallback(&mut self) {
        let open: Vec<VertexId> = self.led.pending.keys().copied().collect();
        if open.is_empty() {
            return;
        }
        let mut choices: Vec<Vec<Vec<HalfEdge>>> = Vec::new();
        for &u in &open {
            let c = match &self.led.pending[&u] {
                Pending::T32 { options, .. } => options.iter().map(|&h| vec![h]).collect(),
                Pending::Mingler { neighbors } => {
                    let mut ns = neighbors.to_vec();
                    ns.sort_unstable();
                    let assessed = &self.led.assessed[&u];
                    ns.into_iter()
                        .filter(|&a| self.led.degree[a as usize] >= HIGH)
                        .map(|a| mingler_triple(u, *neighbors, a).to_vec())
                        .filter(|t| t[1..].iter().all(|h| assessed.contains(h)))
                        .collect()
                }
            };
            choices.push(c);
        }
        let taken: BTreeSet<HalfEdge> = self.led.claims.keys().copied().collect();
        let mut pick = vec![0usize; open.len()];
        if assign(&choices, 0, &mut taken.clone(), &mut pick) {
            for (i, &u) in open.iter().enumerate() {
                let rule = match self.led.pending[&u] {
                    Pending::T32 { .. } => Rule::T32,
                    Pending::Mingler { .. } => Rule::T33,
                };
                for &h in &choices[i][pick[i]] {
                    self.led.claim(h, u, rule);
                }
                self.led.fallback.push(u);
            }
            self.led.pending.clear();
        } else {
            self.led.unresolved = open;
        }
    }
}

/// Backtracking over the remaining choices; used as the last resort of
/// [`resolve_claims`] and as the oracle in tests.
pub fn assign(
    choices: &[Vec<Vec<HalfEdge>>],
    i: usize,
    taken: &mut BTreeSet<HalfEdge>,
    pick: &mut [usize],
) -> bool {
    if i == choices.len() {
        return true;
    }
    for (j, c) in choices[i].iter().enumerate() {
        // a vertex's own halfedge is never contested, but guard anyway
        if c.iter().any(|h| taken.contains(h)) {
            continue;
        }
        for h in c {
            taken.insert(*h);
        }
        pick[i] = j;
        if assign(choices, i + 1, taken, pick) {
            return true;
        }
        for h in c {
            taken.remove(h);
        }
    }
    false
}

/// Resolves the open choices of T3-2 vertices and T3-3 minglers: greedy
/// T3-2 chains, then cycles of tricky minglers, then the easy minglers.
/// Anything left is settled by exhaustive search and reported in
/// `fallback` (or `unresolved` when impossible).
pub fn resolve_claims(ledger: &ClaimLedger) -> Result<ClaimLedger> {
    if ledger.max_assessors() > 2 {
        return Err(Error::StructuralViolation(
            "an edge is assessed by three or more vertices".into(),
        ));
    }
    let mut r = Resolver {
        led: ledger.clone(),
    };
    r.resolve_t32();
    r.resolve_minglers();
    r.fallback();
    Ok(r.led)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LedgerCheck {
    pub double_claims: usize,
    pub quota_unmet: Vec<VertexId>,
    pub max_assessors: usize,
    /// Degree-five vertices serving more than one low-degree vertex.
    pub degree_five_shared: Vec<VertexId>,
}

impl LedgerCheck {
    pub fn ok(&self) -> bool {
        self.double_claims == 0
            && self.quota_unmet.is_empty()
            && self.max_assessors <= 2
            && self.degree_five_shared.is_empty()
    }
}

pub fn check_ledger(led: &ClaimLedger) -> LedgerCheck {
    let quota_unmet = led
        .quota
        .iter()
        .filter(|(&u, &q)| led.claims_by(u).len() != q)
        .map(|(&u, _)| u)
        .chain(led.unresolved.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut served: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for (h, c) in &led.claims {
        if led.degree[h.at as usize] == 5 && led.degree[c.by as usize] <= 3 {
            served.entry(h.at).or_default().insert(c.by);
        }
    }
    LedgerCheck {
        double_claims: led.double_claims.len(),
        quota_unmet,
        max_assessors: led.max_assessors(),
        degree_five_shared: served
            .into_iter()
            .filter(|(_, s)| s.len() > 1)
            .map(|(v, _)| v)
            .collect(),
    }
}

/// For every T3-2 vertex of `d`, whether the drawing with the crossing edge
/// moved from `uv` to `ux` is among `admissible` (compared by crossing pairs).
pub fn t32_alternatives(d: &Drawing, admissible: &[Drawing]) -> Result<Vec<(VertexId, bool)>> {
    let f = DrawingFacts::new(d)?;
    let others: Vec<BTreeSet<(EdgeId, EdgeId)>> = admissible
        .iter()
        .map(|a| DrawingFacts::new(a).map(|x| x.crossing_pairs()))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for u in 0..f.n() as VertexId {
        if classify_vertex(&f, u).class != VertexClass::T3_2 {
            continue;
        }
        let r = t32_roles(&f, u)?;
        let key = |a: EdgeId, b: EdgeId| (a.min(b), a.max(b));
        let wb = f.edge(r.w, r.b).expect("edge");
        let mut want = f.crossing_pairs();
        want.remove(&key(wb, f.edge(u, r.v).expect("edge")));
        want.insert(key(wb, f.edge(u, r.x).expect("edge")));
        out.push((u, others.contains(&want)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Degree counting
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct DegreeProfile {
    pub n: usize,
    pub m: usize,
    /// `v[i]`: vertices of degree `i`.
    pub v: Vec<usize>,
    /// `(i, j) -> ` vertices of degree `i` adjacent to `j` hermits.
    #[serde(serialize_with = "as_pairs")]
    pub vh: BTreeMap<(usize, usize), usize>,
}

impl DegreeProfile {
    pub fn of(g: &LabeledGraph) -> Self {
        let deg = g.degrees();
        let maxd = deg.iter().copied().max().unwrap_or(0);
        let mut v = vec![0; maxd.max(10) + 1];
        let mut vh = BTreeMap::new();
        for x in 0..g.n() as VertexId {
            let i = deg[x as usize];
            v[i] += 1;
            let j = g
                .neighbors(x)
                .iter()
                .filter(|&&y| deg[y as usize] == 2)
                .count();
            *vh.entry((i, j)).or_insert(0) += 1;
        }
        DegreeProfile {
            n: g.n(),
            m: g.m(),
            v,
            vh,
        }
    }

    fn vi(&self, i: usize) -> i64 {
        self.v.get(i).copied().unwrap_or(0) as i64
    }

    fn h(&self, i: usize, j: usize) -> i64 {
        self.vh.get(&(i, j)).copied().unwrap_or(0) as i64
    }

    fn tail(&self) -> i64 {
        (10..self.v.len())
            .map(|i| (i / 3) as i64 * self.vi(i))
            .sum()
    }
}

/// One relation of the counting argument, evaluated as `lhs <= rhs` (or
/// `lhs == rhs` for identities). Values are doubled to stay integral.
#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub name: &'static str,
    pub identity: bool,
    pub lhs2: i64,
    pub rhs2: i64,
}

impl Relation {
    pub fn holds(&self) -> bool {
        if self.identity {
            self.lhs2 == self.rhs2
        } else {
            self.lhs2 <= self.rhs2
        }
    }

    pub fn slack(&self) -> f64 {
        (self.rhs2 - self.lhs2) as f64 / 2.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub profile: DegreeProfile,
    pub relations: Vec<Relation>,
    /// `m - 2n`.
    pub excess: i64,
    /// Informational note for inputs outside the promise (non-maximal).
    pub note: Option<String>,
}

impl DegreeReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(Relation::holds)
    }
}

pub fn degree_inequalities(g: &LabeledGraph) -> DegreeReport {
    let p = DegreeProfile::of(g);
    let n = p.n as i64;
    let m = p.m as i64;
    let sum_v: i64 = p.v.iter().map(|&x| x as i64).sum();
    let sum_iv: i64 =
        p.v.iter()
            .enumerate()
            .map(|(i, &x)| i as i64 * x as i64)
            .sum();
    let mut rel = vec![
        Relation {
            name: "vertex_count",
            identity: true,
            lhs2: 2 * n,
            rhs2: 2 * sum_v,
        },
        Relation {
            name: "handshake",
            identity: true,
            lhs2: 4 * m,
            rhs2: 2 * sum_iv,
        },
    ];
    // refinement by hermit count, with j at most floor(i/3)
    let refined_ok = (3..p.v.len()).all(|i| (0..=i / 3).map(|j| p.h(i, j)).sum::<i64>() == p.vi(i));
    rel.push(Relation {
        name: "hermit_refinement",
        identity: true,
        lhs2: if refined_ok { 0 } else { 1 },
        rhs2: 0,
    });
    let t = p.tail();
    let hermit_rhs = p.h(4, 1)
        + p.h(5, 1)
        + p.h(6, 1)
        + 2 * p.h(6, 2)
        + p.h(7, 1)
        + 2 * p.h(7, 2)
        + 2 * p.vi(8)
        + p.h(9, 1)
        + 2 * p.h(9, 2)
        + 3 * p.h(9, 3)
        + t;
    rel.push(Relation {
        name: "hermit_neighbors",
        identity: false,
        lhs2: 2 * 2 * p.vi(2),
        rhs2: 2 * hermit_rhs,
    });
    let served_rhs = p.h(5, 0)
        + 2 * p.h(6, 0)
        + p.h(6, 1)
        + 2 * p.h(7, 0)
        + 2 * p.h(7, 1)
        + p.h(7, 2)
        + 2 * p.vi(8)
        + 3 * p.h(9, 0)
        + 2 * p.h(9, 1)
        + 2 * p.h(9, 2)
        + p.h(9, 3)
        + t;
    rel.push(Relation {
        name: "served_claims",
        identity: false,
        lhs2: 2 * (p.vi(3) + p.h(4, 1)),
        rhs2: 2 * served_rhs,
    });
    // v2 + v3/2 <= v5/2 + v6 + 3/2 v7 + 2 v8 + 2 v9 + tail, doubled
    rel.push(Relation {
        name: "combined",
        identity: false,
        lhs2: 2 * p.vi(2) + p.vi(3),
        rhs2: p.vi(5) + 2 * p.vi(6) + 3 * p.vi(7) + 4 * p.vi(8) + 4 * p.vi(9) + 2 * t,
    });
    // m - 2n = sum (i-4)/2 v_i
    let excess2: i64 =
        p.v.iter()
            .enumerate()
            .map(|(i, &x)| (i as i64 - 4) * x as i64)
            .sum();
    rel.push(Relation {
        name: "excess",
        identity: true,
        lhs2: 2 * (m - 2 * n),
        rhs2: excess2,
    });
    let note = rel.iter().any(|r| !r.holds()).then(|| {
        "some relation fails; they are only promised for maximal 2-planar graphs".to_string()
    });
    DegreeReport {
        profile: p,
        relations: rel,
        excess: m - 2 * n,
        note,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityVerdict {
    pub n: usize,
    pub m: usize,
    pub margin: i64,
    pub maximal: Decision,
    /// `Yes` when maximality is confirmed and `m >= 2n`.
    pub verdict: Decision,
}

pub fn density_verdict(g: &LabeledGraph, node_budget: Option<u64>) -> Result<DensityVerdict> {
    let margin = g.m() as i64 - 2 * g.n() as i64;
    let maximal = if g.n() < 5 {
        Decision::Inconclusive
    } else {
        graph_maximal(g, 2, node_budget)?
    };
    let verdict = match maximal {
        Decision::Yes if margin >= 0 => Decision::Yes,
        Decision::Yes => Decision::No,
        _ => Decision::Inconclusive,
    };
    Ok(DensityVerdict {
        n: g.n(),
        m: g.m(),
        margin,
        maximal,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DrawingAudit {
    pub crossings: usize,
    pub doubly_crossed: usize,
    pub structural: StructuralReport,
    pub ledger: Option<ClaimLedger>,
    pub ledger_check: Option<LedgerCheck>,
    /// Why no ledger could be built.
    pub ledger_error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub verdict: DensityVerdict,
    pub inequalities: DegreeReport,
    pub admissible_outcome: Outcome,
    pub drawings: Vec<DrawingAudit>,
}

/// Full audit of a graph over its admissible drawings (all of them, or the
/// first when `all` is false).
pub fn audit_graph(g: &LabeledGraph, all: bool, node_budget: Option<u64>) -> Result<AuditReport> {
    let verdict = density_verdict(g, node_budget)?;
    let (drawings, outcome) = admissible_drawings(g, node_budget)?;
    let take = if all {
        drawings.len()
    } else {
        drawings.len().min(1)
    };
    let mut audits = Vec::with_capacity(take);
    for d in drawings.iter().take(take) {
        audits.push(audit_drawing(d, Some(outcome == Outcome::Complete))?);
    }
    Ok(AuditReport {
        verdict,
        inequalities: degree_inequalities(g),
        admissible_outcome: outcome,
        drawings: audits,
    })
}

pub fn audit_drawing(d: &Drawing, admissible: Option<bool>) -> Result<DrawingAudit> {
    let f = DrawingFacts::new(d)?;
    let structural = structural_report(d, admissible)?;
    let (ledger, ledger_check, ledger_error) =
        match assessments_from(&f).and_then(|l| resolve_claims(&l)) {
            Ok(l) => {
                let c = check_ledger(&l);
                (Some(l), Some(c), None)
            }
            Err(e) => (None, None, Some(e.to_string())),
        };
    Ok(DrawingAudit {
        crossings: f.total_crossings(),
        doubly_crossed: f.doubly_crossed(),
        structural,
        ledger,
        ledger_check,
        ledger_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::gen_complete;

    fn k5_with_hermit() -> LabeledGraph {
        let mut g = gen_complete(5);
        let h = g.add_vertex("h").unwrap();
        g.add_edge(0, h, false, crate::EdgeTag::Plain).unwrap();
        g.add_edge(1, h, false, crate::EdgeTag::Plain).unwrap();
        g
    }

    #[test]
    fn k5_admissible_drawings_pass_all_predicates() {
        let (ds, outcome) = admissible_drawings(&gen_complete(5), None).unwrap();
        assert_eq!(outcome, Outcome::Complete);
        assert!(!ds.is_empty());
        for d in &ds {
            let a = audit_drawing(d, Some(true)).unwrap();
            assert_eq!(a.crossings, 1);
            assert!(a.structural.all_pass());
            assert!(a.ledger_check.unwrap().ok());
        }
    }

    #[test]
    fn hermit_claims_at_both_high_neighbors() {
        let g = k5_with_hermit();
        let (ds, _) = admissible_drawings(&g, None).unwrap();
        let f = DrawingFacts::new(&ds[0]).unwrap();
        assert_eq!(classify_vertex(&f, 5).class, VertexClass::Hermit);
        assert_eq!(classify_vertex(&f, 0).class, VertexClass::High(5));
        let led = resolve_claims(&assessments(&ds[0]).unwrap()).unwrap();
        let mine = led.claims_by(5);
        assert_eq!(mine.len(), 4);
        assert!(mine.contains(&HalfEdge::new(5, 0)) && mine.contains(&HalfEdge::new(1, 0)));
        assert!(check_ledger(&led).ok());
    }

    #[test]
    fn crossed_hermit_triangle_is_flagged() {
        let g = k5_with_hermit();
        let mut opts = EnumerateOptions::new(2, Dedup::LabeledMirror);
        opts.limit = None;
        let all = enumerate_drawings(&g, &opts).unwrap();
        let min = admissible_drawings(&g, None).unwrap().0;
        let min_cr = DrawingFacts::new(&min[0]).unwrap().total_crossings();
        let bad = all
            .drawings
            .iter()
            .find(|d| {
                let f = DrawingFacts::new(d).unwrap();
                !f.uncrossed(5, 0) && f.total_crossings() > min_cr
            })
            .expect("a drawing crossing the hermit edge");
        let r = structural_report(bad, Some(false)).unwrap();
        assert!(!r.get('d').unwrap().pass);
        assert_eq!(r.admissible, Some(false));
    }

    #[test]
    fn degree_three_vertex_is_classified_by_uncrossed_edges() {
        let mut g = gen_complete(5);
        let t = g.add_vertex("t").unwrap();
        for x in 0..3 {
            g.add_edge(x, t, false, crate::EdgeTag::Plain).unwrap();
        }
        let (ds, _) = admissible_drawings(&g, None).unwrap();
        for d in &ds {
            let f = DrawingFacts::new(d).unwrap();
            let info = classify_vertex(&f, t);
            let unc = info.crossed.iter().filter(|c| c.1 == 0).count();
            let expected = match unc {
                0 => VertexClass::T3_0,
                1 => VertexClass::T3_1,
                2 => VertexClass::T3_2,
                _ => VertexClass::T3_3Mingler,
            };
            assert_eq!(info.class, expected);
        }
    }

    fn oracle_ok(led: &ClaimLedger) -> bool {
        let open: Vec<VertexId> = led.pending.keys().copied().collect();
        let choices: Vec<Vec<Vec<HalfEdge>>> = open
            .iter()
            .map(|&u| match &led.pending[&u] {
                Pending::T32 { options, .. } => options.iter().map(|&h| vec![h]).collect(),
                Pending::Mingler { neighbors } => neighbors
                    .iter()
                    .filter(|&&a| led.degree[a as usize] >= HIGH)
                    .map(|&a| mingler_triple(u, *neighbors, a).to_vec())
                    .filter(|t| t[1..].iter().all(|h| led.assessed[&u].contains(h)))
                    .collect(),
            })
            .collect();
        let mut taken: BTreeSet<HalfEdge> = led.claims.keys().copied().collect();
        assign(&choices, 0, &mut taken, &mut vec![0; open.len()])
    }

    #[test]
    fn t32_chain_is_resolved_greedily() {
        // u1, u2 at w = 10 share the halfedge from 20; u3 at w' = 11 is
        // unrelated
        let mut degree = vec![3; 30];
        degree[10] = 6;
        degree[11] = 6;
        for x in 20..24 {
            degree[x] = 5;
        }
        let mut led = ClaimLedger::new(degree);
        led.add_t32(1, 10, 25, [20, 21]);
        led.add_t32(2, 10, 26, [21, 22]);
        led.add_t32(3, 11, 27, [22, 23]);
        assert!(oracle_ok(&led));
        let r = resolve_claims(&led).unwrap();
        let c = check_ledger(&r);
        assert!(c.ok(), "{c:?}");
        assert!(r.fallback.is_empty());
    }

    #[test]
    fn triple_assessment_is_a_violation() {
        let mut degree = vec![3; 30];
        degree[10] = 6;
        let mut led = ClaimLedger::new(degree);
        led.add_t32(1, 10, 25, [20, 21]);
        led.add_t32(2, 10, 26, [20, 22]);
        led.add_t32(3, 10, 27, [20, 23]);
        assert!(matches!(
            resolve_claims(&led),
            Err(Error::StructuralViolation(_))
        ));
    }

    #[test]
    fn tricky_mingler_cycle_is_resolved() {
        // three minglers around v = 0 with neighbors w_i = 1, 2, 3 on a
        // triangle; each assesses all six halfedges among its neighbors
        let mut degree = vec![3; 10];
        for x in 0..4 {
            degree[x] = 7;
        }
        let mut led = ClaimLedger::new(degree);
        let minglers = [(4, [0, 1, 2]), (5, [0, 2, 3]), (6, [0, 3, 1])];
        for (u, ns) in minglers {
            let mut a = BTreeSet::new();
            for &x in &ns {
                for &y in &ns {
                    if x != y {
                        a.insert(HalfEdge::new(x, y));
                    }
                }
            }
            led.add_mingler(u, ns, a);
        }
        assert!(led.max_assessors() <= 2);
        assert!(oracle_ok(&led));
        let r = resolve_claims(&led).unwrap();
        let c = check_ledger(&r);
        assert!(c.ok(), "{c:?}");
        assert!(r.fallback.is_empty(), "greedy left {:?}", r.fallback);
    }

    #[test]
    fn relations_hold_for_k5() {
        let r = degree_inequalities(&gen_complete(5));
        assert!(r.all_hold());
        assert_eq!(r.excess, 0);
    }
}
