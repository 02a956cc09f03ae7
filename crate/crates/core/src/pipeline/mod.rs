//! Iterative exploration of drawings of nested ten-cycles.
//!
//! Starting from the plane (uncrossable) cycle `D_1`, every partial drawing
//! is extended by a new ten-cycle joined to the current frontier cycle by a
//! braided matching. Each extension is pruned with dual flows, reduced by
//! cleanup and deduplicated up to maps of the frontier cycle.

pub mod flow;
mod state;

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::dcel::{init_drawing, Drawing, FaceIndex, Landing, Route};
use crate::enumerate::{enumerate_pruned, Dedup, EnumerateOptions, Outcome, RegionRules};
use crate::error::Result;
use crate::graphs::{braided_partner, EdgeId, EdgeTag, LabeledGraph, VertexId};
pub use flow::{max_flow, FlowNetwork};
pub use state::{load_state, save_state};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceClass {
    PotentialFinal,
    Active,
    Passive,
    Transit,
    Irrelevant,
}

impl FaceClass {
    pub fn is_active(self) -> bool {
        matches!(self, FaceClass::PotentialFinal | FaceClass::Active)
    }

    pub fn is_relevant(self) -> bool {
        self != FaceClass::Irrelevant
    }
}

/// Classes of the faces of one drawing (indexed like its [`FaceIndex`]).
#[derive(Clone, Debug, Serialize)]
pub struct FaceClassMap {
    pub classes: Vec<FaceClass>,
    /// Flow from the frontier cycle into each face.
    pub final_flow: Vec<i64>,
    /// For active faces: a potential final face receiving a flow of three.
    pub witness: Vec<Option<usize>>,
    /// Dual arcs that are parallel to another arc between the same faces.
    pub parallel_arcs: usize,
}

impl FaceClassMap {
    pub fn potential_final(&self) -> Vec<usize> {
        self.faces_in(FaceClass::PotentialFinal)
    }

    pub fn faces_in(&self, class: FaceClass) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&f| self.classes[f] == class)
            .collect()
    }

    pub fn relevant(&self) -> Vec<bool> {
        self.classes.iter().map(|c| c.is_relevant()).collect()
    }
}

/// Raised when a drawing has no potential final face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeadDrawing;

#[derive(Clone, Copy, Debug)]
pub(crate) struct DualArc {
    pub(crate) to: usize,
    pub(crate) cap: i64,
    edge: EdgeId,
}

/// Dual multigraph of the non-sealed faces, one arc per segment side.
pub(crate) struct Dual {
    pub(crate) arcs: Vec<Vec<DualArc>>,
    pub(crate) sealed: Vec<bool>,
    parallel: usize,
}

impl Dual {
    pub(crate) fn new(d: &Drawing, fi: &FaceIndex) -> Dual {
        let nf = fi.len();
        let sealed: Vec<bool> = fi
            .walks
            .iter()
            .map(|w| w.iter().any(|&x| d.is_sealed(x)))
            .collect();
        let mut arcs = vec![Vec::new(); nf];
        let mut parallel = 0;
        for (f, walk) in fi.walks.iter().enumerate() {
            if sealed[f] {
                continue;
            }
            for &x in walk {
                let g = fi.face_of[d.twin(x) as usize] as usize;
                if g == f || sealed[g] {
                    continue;
                }
                let cap = d.segment_capacity(x) as i64;
                if cap == 0 {
                    continue;
                }
                if arcs[f].iter().any(|a: &DualArc| a.to == g) {
                    parallel += 1;
                }
                arcs[f].push(DualArc {
                    to: g,
                    cap,
                    edge: d.dart_edge(x),
                });
            }
        }
        Dual {
            arcs,
            sealed,
            parallel,
        }
    }

    pub(crate) fn network(&self, extra: usize) -> FlowNetwork {
        let mut net = FlowNetwork::new(extra + self.arcs.len());
        for (f, out) in self.arcs.iter().enumerate() {
            for a in out {
                // each segment is seen from both sides, so one arc per side
                net.add_arc(extra + f, extra + a.to, a.cap);
            }
        }
        net
    }
}

/// Frontier vertex -> distinct non-sealed faces at its corners.
pub(crate) fn faces_at(d: &Drawing, fi: &FaceIndex, v: VertexId, sealed: &[bool]) -> Vec<usize> {
    let Some(x) = d.vertex_node(v) else {
        return Vec::new();
    };
    let mut fs: Vec<usize> = d
        .rotation(x)
        .into_iter()
        .map(|c| fi.face_of[c as usize] as usize)
        .filter(|&f| !sealed[f])
        .collect();
    fs.sort_unstable();
    fs.dedup();
    fs
}

/// Flow from the frontier vertices into each face (unit supply per vertex).
fn final_flows(d: &Drawing, fi: &FaceIndex, dual: &Dual, frontier: &[VertexId]) -> Vec<i64> {
    let base = 1 + frontier.len();
    let mut net = dual.network(base);
    for (i, &v) in frontier.iter().enumerate() {
        net.add_arc(0, 1 + i, 1);
        for f in faces_at(d, fi, v, &dual.sealed) {
            net.add_arc(1 + i, base + f, 1);
        }
    }
    (0..fi.len())
        .map(|f| {
            if dual.sealed[f] {
                0
            } else {
                net.clone()
                    .max_flow(0, base + f, Some(frontier.len() as i64))
            }
        })
        .collect()
}

/// Whether some face receives one curve from every vertex of `vs`.
fn has_common_face(d: &Drawing, vs: &[VertexId]) -> bool {
    let fi = d.face_index();
    let dual = Dual::new(d, &fi);
    let nf = fi.len();
    // cheap necessary condition first: a face reachable from every vertex
    let mut common = vec![true; nf];
    let mut starts = Vec::with_capacity(vs.len());
    for &v in vs {
        let s = faces_at(d, &fi, v, &dual.sealed);
        let mut reach = vec![false; nf];
        let mut stack = s.clone();
        for &f in &s {
            reach[f] = true;
        }
        while let Some(f) = stack.pop() {
            for a in &dual.arcs[f] {
                if !reach[a.to] {
                    reach[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        for f in 0..nf {
            common[f] &= reach[f];
        }
        starts.push(s);
    }
    let candidates: Vec<usize> = (0..nf).filter(|&f| common[f]).collect();
    if candidates.is_empty() {
        return false;
    }
    let base = 1 + vs.len();
    let mut net = dual.network(base);
    for (i, s) in starts.iter().enumerate() {
        net.add_arc(0, 1 + i, 1);
        for &f in s {
            net.add_arc(1 + i, base + f, 1);
        }
    }
    let want = vs.len() as i64;
    candidates
        .into_iter()
        .any(|f| net.clone().max_flow(0, base + f, Some(want)) == want)
}

/// Faces that can receive one curve from every frontier vertex without any
/// edge exceeding two crossings.
pub fn potential_final_faces(d: &Drawing, frontier: &[VertexId]) -> Vec<usize> {
    let fi = d.face_index();
    let dual = Dual::new(d, &fi);
    final_flows(d, &fi, &dual, frontier)
        .into_iter()
        .enumerate()
        .filter(|&(_, fl)| fl == frontier.len() as i64)
        .map(|(f, _)| f)
        .collect()
}

/// Classifies the faces of `d` (with face index `fi`) for frontier cycle
/// `frontier`.
pub fn classify_faces(
    d: &Drawing,
    fi: &FaceIndex,
    frontier: &[VertexId],
) -> std::result::Result<FaceClassMap, DeadDrawing> {
    let nf = fi.len();
    let dual = Dual::new(d, fi);
    let final_flow = final_flows(d, fi, &dual, frontier);
    let pf: Vec<usize> = (0..nf)
        .filter(|&f| final_flow[f] == frontier.len() as i64)
        .collect();
    if pf.is_empty() {
        return Err(DeadDrawing);
    }
    let mut classes = vec![FaceClass::Irrelevant; nf];
    let mut witness = vec![None; nf];
    let net = dual.network(0);
    for f in 0..nf {
        if dual.sealed[f] {
            continue;
        }
        if pf.contains(&f) {
            classes[f] = FaceClass::PotentialFinal;
            witness[f] = Some(f);
            continue;
        }
        for &p in &pf {
            if net.clone().max_flow(f, p, Some(3)) >= 3 {
                classes[f] = FaceClass::Active;
                witness[f] = Some(p);
                break;
            }
        }
    }
    let active: Vec<bool> = classes.iter().map(|c| c.is_active()).collect();

    // passive: a frontier vertex on the boundary and a dual path of
    // length at most two to an active face, starting with an arc whose
    // edge avoids that vertex
    let mut passive = vec![false; nf];
    for f in 0..nf {
        if dual.sealed[f] || active[f] {
            continue;
        }
        let on_boundary: Vec<VertexId> = frontier
            .iter()
            .copied()
            .filter(|&v| faces_at(d, fi, v, &dual.sealed).contains(&f))
            .collect();
        passive[f] = on_boundary.iter().any(|&v| {
            dual.arcs[f].iter().any(|a1| {
                let e = d.edge(a1.edge);
                !e.is_incident(v)
                    && (active[a1.to] || dual.arcs[a1.to].iter().any(|a2| active[a2.to]))
            })
        });
        if passive[f] {
            classes[f] = FaceClass::Passive;
        }
    }
    for f in 0..nf {
        if dual.sealed[f] || active[f] || passive[f] {
            continue;
        }
        let arcs = &dual.arcs[f];
        let transit = arcs.iter().enumerate().any(|(i, a1)| {
            active[a1.to]
                && arcs
                    .iter()
                    .enumerate()
                    .any(|(j, a2)| j != i && (active[a2.to] || passive[a2.to]))
        });
        if transit {
            classes[f] = FaceClass::Transit;
        }
    }
    Ok(FaceClassMap {
        classes,
        final_flow,
        witness,
        parallel_arcs: dual.parallel,
    })
}

fn has_relevant_face(d: &Drawing, fi: &FaceIndex, cls: &FaceClassMap, v: VertexId) -> bool {
    d.vertex_node(v).is_some_and(|x| {
        d.rotation(x)
            .iter()
            .any(|&c| cls.classes[fi.face_of[c as usize] as usize].is_relevant())
    })
}

/// A reduced drawing with its frontier cycle (vertex ids in cycle order).
#[derive(Clone, Debug)]
pub struct PartialDrawing {
    pub drawing: Drawing,
    pub frontier: Vec<VertexId>,
    pub level: u32,
    /// Canonical form with the frontier fixed up to braid-preserving maps.
    pub key: String,
}

impl PartialDrawing {
    pub fn new(drawing: Drawing, frontier: Vec<VertexId>, level: u32) -> Self {
        let key = drawing.canonical_form(Some(&frontier), true);
        PartialDrawing {
            drawing,
            frontier,
            level,
            key,
        }
    }

    /// 1 if the drawing equals its mirror image under the same maps, else 2.
    pub fn orientations(&self) -> usize {
        let a = self
            .drawing
            .canonical_form_oriented(Some(&self.frontier), true, false);
        let b = self
            .drawing
            .mirrored()
            .canonical_form_oriented(Some(&self.frontier), true, false);
        if a == b {
            1
        } else {
            2
        }
    }
}

/// The plane drawing of `D_1` with uncrossable edges.
pub fn base_case() -> PartialDrawing {
    let mut g = LabeledGraph::default();
    for j in 0..10 {
        g.add_vertex(format!("v_{j}^1")).expect("unique labels");
    }
    for j in 0..10u32 {
        g.add_edge(j, (j + 1) % 10, true, EdgeTag::Cycle(1))
            .expect("cycle edge");
    }
    let mut d = init_drawing(&g, 0).expect("first edge");
    for e in 1..10u32 {
        let start = d.rotation(d.vertex_node(e).expect("placed"))[0];
        let landing = if e == 9 {
            Landing::Corner(d.rotation(d.vertex_node(0).expect("placed"))[0])
        } else {
            Landing::NewVertex
        };
        assert!(d.apply_route(e, &Route::new(start, &[], landing)));
    }
    PartialDrawing::new(d, (0..10).collect(), 1)
}

/// Greedy insertion order for edges added to an existing drawing.
pub fn extension_order(d: &Drawing, edges: &[EdgeId]) -> Vec<EdgeId> {
    let mut placed: Vec<bool> = (0..d.vertex_count() as VertexId)
        .map(|v| d.is_placed(v))
        .collect();
    let mut left: Vec<EdgeId> = edges.to_vec();
    let mut order = Vec::with_capacity(edges.len());
    while !left.is_empty() {
        let mut best: Option<(bool, usize)> = None;
        for (i, &e) in left.iter().enumerate() {
            let s = d.edge(e);
            let (pu, pv) = (placed[s.u as usize], placed[s.v as usize]);
            if !pu && !pv {
                continue;
            }
            if best.is_none_or(|(b, _)| (pu && pv) && !b) {
                best = Some((pu && pv, i));
            }
        }
        let Some((_, i)) = best else {
            break;
        };
        let e = left.remove(i);
        let s = d.edge(e);
        placed[s.u as usize] = true;
        placed[s.v as usize] = true;
        order.push(e);
    }
    order
}

#[derive(Clone, Debug, Default)]
pub struct ExtendOptions {
    pub limit: Option<usize>,
    pub node_budget: Option<u64>,
    pub parallel: bool,
    /// Keep live children unreduced (for tracing a lineage on full drawings).
    pub keep_full: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExtendStats {
    pub completions: usize,
    pub dead: usize,
    pub nodes_expanded: u64,
    pub budget_exhausted: bool,
    pub search_ms: u128,
    pub reduce_ms: u128,
}

#[derive(Clone, Debug, Default)]
pub struct Extension {
    /// Reduced children keyed by canonical form (crossable extensions), or
    /// the raw completions (uncrossable extensions).
    pub children: Vec<PartialDrawing>,
    pub stats: ExtendStats,
}

/// Adds the next ten-cycle and its braided matching to `p` in every
/// possible way. Crossable extensions are classified, cleaned and
/// deduplicated; uncrossable extensions are returned as drawn.
pub fn extend_with_cycle(
    p: &PartialDrawing,
    uncrossable: bool,
    opts: &ExtendOptions,
) -> Result<Extension> {
    let mut d = p.drawing.clone();
    let fi = d.stamp_regions();
    let Ok(classes) = classify_faces(&d, &fi, &p.frontier) else {
        return Ok(Extension::default());
    };
    let rules = RegionRules {
        enterable: classes.classes.iter().map(|c| c.is_relevant()).collect(),
        vertex_ok: classes.classes.iter().map(|c| c.is_active()).collect(),
    };
    let level = p.level + 1;
    let new: Vec<VertexId> = (0..10)
        .map(|j| d.add_vertex(format!("v_{j}^{level}")))
        .collect();
    let mut edges = Vec::with_capacity(20);
    for j in 0..10u32 {
        edges.push(d.add_edge(
            p.frontier[j as usize],
            new[braided_partner(j) as usize],
            false,
        ));
    }
    for j in 0..10usize {
        edges.push(d.add_edge(new[j], new[(j + 1) % 10], uncrossable));
    }
    let order = extension_order(&d, &edges);
    let eopts = EnumerateOptions {
        k: 2,
        dedup: Dedup::Raw,
        limit: opts.limit,
        node_budget: opts.node_budget,
        parallel: opts.parallel,
        seed: None,
    };
    // Flow into a common face only shrinks as edges are added, so a partial
    // drawing whose placed new vertices cannot all reach one face is dead.
    let keep = |c: &Drawing| -> bool {
        let placed: Vec<VertexId> = new.iter().copied().filter(|&v| c.is_placed(v)).collect();
        placed.len() < 2 || has_common_face(c, &placed)
    };
    let run = enumerate_pruned(d, &order, &eopts, &rules, &keep);
    let mut stats = ExtendStats {
        completions: run.drawings.len(),
        nodes_expanded: run.stats.nodes_expanded,
        budget_exhausted: run.outcome == Outcome::BudgetExhausted,
        search_ms: run.stats.wall_ms,
        ..Default::default()
    };
    if uncrossable {
        let children = run
            .drawings
            .into_iter()
            .map(|c| PartialDrawing::new(c, new.clone(), level))
            .collect();
        return Ok(Extension { children, stats });
    }
    let reduce = |c: Drawing| reduce_drawing(c, &new, level, opts.keep_full);
    let t0 = Instant::now();
    let reduced: Vec<Result<Option<PartialDrawing>>> = if opts.parallel {
        run.drawings.into_par_iter().map(reduce).collect()
    } else {
        run.drawings.into_iter().map(reduce).collect()
    };
    stats.reduce_ms = t0.elapsed().as_millis();
    let mut by_key: BTreeMap<String, PartialDrawing> = BTreeMap::new();
    for r in reduced {
        match r? {
            None => stats.dead += 1,
            Some(pd) => {
                by_key.entry(pd.key.clone()).or_insert(pd);
            }
        }
    }
    Ok(Extension {
        children: by_key.into_values().collect(),
        stats,
    })
}

/// Classifies the faces of a completed extension and removes the irrelevant
/// ones. `None` when the drawing is dead: no potential final face, or a
/// frontier vertex without a relevant face (the next matching edge at it
/// must start in an active or passive face).
pub fn reduce_drawing(
    c: Drawing,
    frontier: &[VertexId],
    level: u32,
    keep_full: bool,
) -> Result<Option<PartialDrawing>> {
    let fi = c.face_index();
    let Ok(cls) = classify_faces(&c, &fi, frontier) else {
        return Ok(None);
    };
    if !frontier
        .iter()
        .all(|&v| has_relevant_face(&c, &fi, &cls, v))
    {
        return Ok(None);
    }
    if keep_full {
        return Ok(Some(PartialDrawing::new(c, frontier.to_vec(), level)));
    }
    let (reduced, _) = c.remove_region(&fi, &cls.relevant(), frontier)?;
    Ok(Some(PartialDrawing::new(reduced, frontier.to_vec(), level)))
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Number of BFS levels to expand; `None` runs to closure.
    pub max_iter: Option<u32>,
    pub parallel: bool,
    /// Node budget per single extension.
    pub node_budget: Option<u64>,
    pub state_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct IterationReport {
    pub iteration: u32,
    pub processed: usize,
    pub completions: usize,
    pub dead: usize,
    pub new_drawings: usize,
    pub final_hits: usize,
    pub budget_exhausted: usize,
}

#[derive(Clone, Debug, Default, Serialize, serde::Deserialize)]
pub struct PipelineReport {
    /// Distinct reduced drawings, base case included, mirror images identified.
    pub discovered: usize,
    /// The same count with mirror images kept apart.
    pub discovered_oriented: usize,
    /// Keys of the drawings admitting an uncrossable extension.
    pub final_hits: Vec<String>,
    pub iterations: Vec<IterationReport>,
    /// Whether the BFS ran out of drawings to expand.
    pub closed: bool,
    /// Parallel dual arcs met during classification (counted separately).
    pub parallel_arcs: usize,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineRun {
    pub drawings: Vec<PartialDrawing>,
    /// Index into `drawings` of the unexpanded BFS level.
    pub frontier_start: usize,
    pub report: PipelineReport,
}

/// Runs the BFS over reduced drawings, resuming from `state_dir` when it
/// holds a saved run.
pub fn run_pipeline(opts: &PipelineOptions) -> Result<PipelineRun> {
    let mut run = match &opts.state_dir {
        Some(dir) if dir.join(state::INDEX).exists() => load_state(dir)?,
        _ => {
            let base = base_case();
            let report = PipelineReport {
                discovered: 1,
                discovered_oriented: base.orientations(),
                ..Default::default()
            };
            PipelineRun {
                drawings: vec![base],
                frontier_start: 0,
                report,
            }
        }
    };
    let mut seen: HashSet<String> = run.drawings.iter().map(|p| p.key.clone()).collect();
    let eopts = ExtendOptions {
        limit: None,
        node_budget: opts.node_budget,
        parallel: opts.parallel,
        keep_full: false,
    };
    let final_opts = ExtendOptions {
        limit: Some(1),
        ..eopts.clone()
    };
    let done = run.report.iterations.len() as u32;
    let mut iteration = done;
    loop {
        if opts.max_iter.is_some_and(|m| iteration >= m) {
            break;
        }
        let level: Vec<PartialDrawing> = run.drawings[run.frontier_start..].to_vec();
        if level.is_empty() {
            run.report.closed = true;
            break;
        }
        iteration += 1;
        let mut it = IterationReport {
            iteration,
            processed: level.len(),
            ..Default::default()
        };
        let next = Mutex::new(Vec::new());
        let mut hits = Vec::new();
        for p in &level {
            let ext = extend_with_cycle(p, false, &eopts)?;
            it.completions += ext.stats.completions;
            it.dead += ext.stats.dead;
            it.budget_exhausted += ext.stats.budget_exhausted as usize;
            let has_child = !ext.children.is_empty();
            next.lock().expect("queue lock").extend(ext.children);
            if has_child {
                let fin = extend_with_cycle(p, true, &final_opts)?;
                if !fin.children.is_empty() {
                    hits.push(p.key.clone());
                }
            }
        }
        let fi = level.iter().map(|p| {
            let d = &p.drawing;
            let fi = d.face_index();
            classify_faces(d, &fi, &p.frontier)
                .map(|c| c.parallel_arcs)
                .unwrap_or(0)
        });
        run.report.parallel_arcs += fi.sum::<usize>();
        let mut next = next.into_inner().expect("queue lock");
        next.sort_by(|a, b| a.key.cmp(&b.key));
        run.frontier_start = run.drawings.len();
        for p in next {
            if seen.insert(p.key.clone()) {
                run.report.discovered_oriented += p.orientations();
                run.drawings.push(p);
                it.new_drawings += 1;
            }
        }
        it.final_hits = hits.len();
        run.report.final_hits.extend(hits);
        run.report.discovered = run.drawings.len();
        run.report.iterations.push(it);
        if let Some(dir) = &opts.state_dir {
            save_state(dir, &run)?;
        }
    }
    if run.drawings.len() == run.frontier_start && iteration > 0 {
        run.report.closed = true;
    }
    if let Some(dir) = &opts.state_dir {
        save_state(dir, &run)?;
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_faces_are_potential_final() {
        let b = base_case();
        assert!(b.drawing.validate().is_empty());
        assert_eq!(b.drawing.face_count(), 2);
        let pf = potential_final_faces(&b.drawing, &b.frontier);
        assert_eq!(pf, vec![0, 1]);
        let fi = b.drawing.face_index();
        let cls = classify_faces(&b.drawing, &fi, &b.frontier).unwrap();
        assert!(cls.classes.iter().all(|c| *c == FaceClass::PotentialFinal));
    }

    #[test]
    fn enclosed_frontier_is_dead() {
        // all cycle edges uncrossable and the frontier is a different,
        // unplaced set: no flow reaches any face
        let b = base_case();
        let fi = b.drawing.face_index();
        let r = classify_faces(&b.drawing, &fi, &[10, 11, 12, 13, 14, 15, 16, 17, 18, 19]);
        assert!(r.is_err());
    }

    #[test]
    fn extension_order_touches_placed_vertices() {
        let b = base_case();
        let mut d = b.drawing.clone();
        let w = d.add_vertex("w");
        let x = d.add_vertex("x");
        let e1 = d.add_edge(w, x, false);
        let e0 = d.add_edge(0, w, false);
        let e2 = d.add_edge(x, 5, false);
        assert_eq!(extension_order(&d, &[e1, e0, e2]), vec![e0, e1, e2]);
    }
}
