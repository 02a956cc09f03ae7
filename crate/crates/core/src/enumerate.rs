//! Backtracking enumeration of simple k-plane drawings.
//!
//! Edges are inserted one at a time in an order where every edge after the
//! first touches an already placed vertex. Each insertion tries every corner
//! at the source, every face walk with at most `k` crossings, and every
//! landing corner at the target (or one placement of a new target vertex
//! per reachable face).

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::dcel::{DartId, Drawing, FaceIndex, Landing, Route, SEALED};
use crate::error::{invalid, Result};
use crate::graphs::{EdgeId, LabeledGraph, VertexId};

/// One way to insert an edge; an alias kept for the vocabulary of callers.
pub type InsertionPlan = Route;

/// How enumerated drawings are identified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dedup {
    /// Every rotation system the search produces (mirror images distinct).
    Raw,
    /// Labeled drawings; mirror images are distinct.
    Labeled,
    /// Labeled drawings up to mirror image.
    LabeledMirror,
    /// Unlabeled except for an optional fixed cycle (see
    /// [`Drawing::canonical_form`]).
    Canonical {
        cycle: Option<Vec<VertexId>>,
        parity: bool,
    },
    /// Labeled drawings up to the given vertex permutations and mirror image.
    Permutations(Vec<Vec<VertexId>>),
}

impl Dedup {
    fn key(&self, d: &Drawing) -> Option<String> {
        match self {
            Dedup::Raw => None,
            Dedup::Labeled => Some(d.canonical_form_labeled_oriented()),
            Dedup::LabeledMirror => Some(d.canonical_form_labeled()),
            Dedup::Canonical { cycle, parity } => Some(d.canonical_form(cycle.as_deref(), *parity)),
            Dedup::Permutations(p) => Some(d.canonical_form_under(p)),
        }
    }
}

/// Where new routes may go, by region stamp (see [`Drawing::stamp_regions`]).
/// Regions outside the vectors are unrestricted; sealed regions are always
/// off limits.
#[derive(Clone, Debug, Default)]
pub struct RegionRules {
    pub enterable: Vec<bool>,
    pub vertex_ok: Vec<bool>,
}

impl RegionRules {
    fn can_enter(&self, r: u32) -> bool {
        r != SEALED && self.enterable.get(r as usize).copied().unwrap_or(true)
    }

    fn can_place(&self, r: u32) -> bool {
        self.can_enter(r) && self.vertex_ok.get(r as usize).copied().unwrap_or(true)
    }
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub k: u8,
    pub dedup: Dedup,
    /// Stop after this many (deduplicated) drawings.
    pub limit: Option<usize>,
    /// Cap on successful insertions; exceeding it yields
    /// [`Outcome::BudgetExhausted`].
    pub node_budget: Option<u64>,
    pub parallel: bool,
    /// Edge drawn first; defaults to the smallest edge (or the smallest
    /// uncrossable edge when one exists).
    pub seed: Option<EdgeId>,
}

impl EnumerateOptions {
    pub fn new(k: u8, dedup: Dedup) -> Self {
        EnumerateOptions {
            k,
            dedup,
            limit: None,
            node_budget: None,
            parallel: false,
            seed: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Complete,
    LimitReached,
    BudgetExhausted,
}

/// Three-valued answer of budgeted decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub plans_rejected: u64,
    pub drawings_found: u64,
    pub distinct: u64,
    pub wall_ms: u128,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub drawings: Vec<Drawing>,
    /// Dedup key of each drawing (empty for [`Dedup::Raw`]).
    pub keys: Vec<String>,
    pub stats: SearchStats,
    pub outcome: Outcome,
}

/// Insertion order: `seed` first, then repeatedly the eligible edge that
/// closes a cycle (both ends placed), preferring edges whose endpoints have
/// the most already ordered edges; ties go to the smaller id.
pub fn edge_order(g: &LabeledGraph, seed: EdgeId) -> Result<Vec<EdgeId>> {
    if seed as usize >= g.m() {
        return invalid(format!("seed edge {seed} out of range"));
    }
    if !g.is_connected() {
        return invalid("graph is disconnected");
    }
    let covered: Vec<VertexId> = (0..g.n() as VertexId)
        .filter(|&v| g.degree(v) > 0)
        .collect();
    if covered.len() != g.n() {
        return invalid("graph has isolated vertices");
    }
    let mut placed = vec![false; g.n()];
    let mut done = vec![false; g.m()];
    let mut ordered_deg = vec![0usize; g.n()];
    let mut order = Vec::with_capacity(g.m());
    let mut next = Some(seed);
    while let Some(e) = next {
        let edge = g.edge(e);
        for x in [edge.u, edge.v] {
            placed[x as usize] = true;
            ordered_deg[x as usize] += 1;
        }
        done[e as usize] = true;
        order.push(e);
        next = None;
        let mut best_key = (false, 0usize);
        for (f, edge) in g.edges().iter().enumerate() {
            let (pu, pv) = (placed[edge.u as usize], placed[edge.v as usize]);
            if done[f] || (!pu && !pv) {
                continue;
            }
            let key = (
                pu && pv,
                ordered_deg[edge.u as usize] + ordered_deg[edge.v as usize],
            );
            if next.is_none() || key > best_key {
                best_key = key;
                next = Some(f as EdgeId);
            }
        }
    }
    Ok(order)
}

/// Default seed edge: the smallest uncrossable edge, else edge 0.
pub fn default_seed(g: &LabeledGraph) -> EdgeId {
    g.edges().iter().position(|e| e.uncrossable).unwrap_or(0) as EdgeId
}

/// All legal ways to draw the (undrawn) edge `e` into `d` with at most `k`
/// crossings on every edge.
pub fn insertion_plans(d: &Drawing, e: EdgeId, k: u8) -> Vec<InsertionPlan> {
    insertion_plans_with(d, e, k, &RegionRules::default())
}

pub fn insertion_plans_with(
    d: &Drawing,
    e: EdgeId,
    k: u8,
    rules: &RegionRules,
) -> Vec<InsertionPlan> {
    let es = d.edge(e);
    let (src, tgt) = if d.is_placed(es.u) {
        (es.u, es.v)
    } else {
        (es.v, es.u)
    };
    let fi = d.face_index();
    routes_between(d, &fi, src, tgt, es.budget(), k, rules)
}

/// Routes for a new edge `src`-`tgt` with crossing budget `budget`, for a
/// drawing whose face index is `fi`. `src` must be placed; if `tgt` is not,
/// routes end with a new-vertex placement.
pub fn routes_between(
    d: &Drawing,
    fi: &FaceIndex,
    src: VertexId,
    tgt: VertexId,
    budget: u8,
    k: u8,
    rules: &RegionRules,
) -> Vec<Route> {
    let Some(sn) = d.vertex_node(src) else {
        return Vec::new();
    };
    let mut w = PlanWalker {
        d,
        fi,
        rules,
        ends: (src, tgt),
        k,
        max_cross: k.min(budget) as usize,
        target: d.vertex_node(tgt),
        start: 0,
        crossed: Vec::with_capacity(2),
        crossed_edges: Vec::with_capacity(2),
        seen: HashSet::new(),
        out: Vec::new(),
    };
    for start in d.rotation(sn) {
        let f0 = fi.face_of[start as usize] as usize;
        if !rules.can_enter(d.region(fi.walks[f0][0])) {
            continue;
        }
        w.start = start;
        w.visit(f0);
    }
    w.out
}

/// Depth-first walk over (face, crossed darts) from one start corner.
struct PlanWalker<'a> {
    d: &'a Drawing,
    fi: &'a FaceIndex,
    rules: &'a RegionRules,
    ends: (VertexId, VertexId),
    k: u8,
    max_cross: usize,
    target: Option<u32>,
    start: DartId,
    crossed: Vec<DartId>,
    crossed_edges: Vec<EdgeId>,
    seen: HashSet<Route>,
    out: Vec<Route>,
}

impl PlanWalker<'_> {
    fn emit(&mut self, landing: Landing) {
        let r = Route::new(self.start, &self.crossed, landing);
        if self.seen.insert(r) {
            self.out.push(r);
        }
    }

    fn visit(&mut self, f: usize) {
        let (d, fi) = (self.d, self.fi);
        let walk = &fi.walks[f];
        match self.target {
            Some(t) => {
                for &c in walk {
                    if d.origin(c) == t {
                        self.emit(Landing::Corner(c));
                    }
                }
            }
            None => {
                if self.rules.can_place(d.region(walk[0])) {
                    self.emit(Landing::NewVertex);
                }
            }
        }
        if self.crossed.len() >= self.max_cross {
            return;
        }
        for &x in walk {
            let f_edge = d.dart_edge(x);
            let t = d.twin(x);
            // segments whose darts disagree only border sealed regions
            if d.dart_edge(t) != f_edge
                || self.crossed_edges.contains(&f_edge)
                || !d.can_cross_new(self.ends, f_edge, self.k)
            {
                continue;
            }
            let g = fi.face_of[t as usize] as usize;
            if !self.rules.can_enter(d.region(fi.walks[g][0])) {
                continue;
            }
            self.crossed.push(x);
            self.crossed_edges.push(f_edge);
            self.visit(g);
            self.crossed.pop();
            self.crossed_edges.pop();
        }
    }
}

struct Ctx<'a> {
    order: &'a [EdgeId],
    k: u8,
    rules: &'a RegionRules,
    keep: &'a Prune<'a>,
    dedup: &'a Dedup,
    limit: Option<usize>,
    budget: Option<u64>,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    exhausted: &'a AtomicBool,
}

#[derive(Default)]
struct Found {
    drawings: Vec<(Option<String>, Drawing)>,
    keys: HashSet<String>,
    rejected: u64,
    raw: u64,
}

impl Found {
    fn push(&mut self, key: Option<String>, d: Drawing) {
        self.raw += 1;
        if let Some(k) = &key {
            if !self.keys.insert(k.clone()) {
                return;
            }
        }
        self.drawings.push((key, d));
    }
}

fn search(ctx: &Ctx, d: Drawing, pos: usize, found: &mut Found) {
    if ctx.stop.load(Ordering::Relaxed) {
        return;
    }
    if pos == ctx.order.len() {
        let key = ctx.dedup.key(&d);
        found.push(key, d);
        if ctx.limit.is_some_and(|l| found.drawings.len() >= l) {
            ctx.stop.store(true, Ordering::Relaxed);
        }
        return;
    }
    let e = ctx.order[pos];
    let plans = insertion_plans_with(&d, e, ctx.k, ctx.rules);
    let last = plans.len().saturating_sub(1);
    let mut d = Some(d);
    for (i, plan) in plans.iter().enumerate() {
        let mut child = if i == last {
            d.take().unwrap()
        } else {
            d.as_ref().unwrap().clone()
        };
        if !child.apply_route(e, plan) {
            found.rejected += 1;
            continue;
        }
        let n = ctx.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if ctx.budget.is_some_and(|b| n > b) {
            ctx.exhausted.store(true, Ordering::Relaxed);
            ctx.stop.store(true, Ordering::Relaxed);
            return;
        }
        if !(ctx.keep)(&child) {
            continue;
        }
        search(ctx, child, pos + 1, found);
        if ctx.stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

/// Enumerates every completion of `start` obtained by drawing the edges of
/// `order` (all undrawn in `start`) in sequence.
pub fn enumerate_from(
    start: Drawing,
    order: &[EdgeId],
    opts: &EnumerateOptions,
    rules: &RegionRules,
) -> Enumeration {
    enumerate_pruned(start, order, opts, rules, &|_: &Drawing| true)
}

/// Partial drawing test; returning false cuts the branch.
pub type Prune<'a> = dyn Fn(&Drawing) -> bool + Sync + 'a;

/// As [`enumerate_from`], dropping every partial drawing rejected by `keep`.
pub fn enumerate_pruned(
    start: Drawing,
    order: &[EdgeId],
    opts: &EnumerateOptions,
    rules: &RegionRules,
    keep: &Prune,
) -> Enumeration {
    let t0 = Instant::now();
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let exhausted = AtomicBool::new(false);
    let ctx = Ctx {
        order,
        k: opts.k,
        rules,
        keep,
        dedup: &opts.dedup,
        limit: opts.limit,
        budget: opts.node_budget,
        nodes: &nodes,
        stop: &stop,
        exhausted: &exhausted,
    };
    let mut found = Found::default();
    // With a limit the sequential order defines which drawings are kept.
    if opts.parallel && opts.limit.is_none() && !order.is_empty() {
        // Split on the first two insertion levels.
        let mut frontier: Vec<(Drawing, usize)> = vec![(start, 0)];
        for _ in 0..2 {
            let mut next = Vec::new();
            for (d, pos) in frontier {
                if pos == order.len() {
                    next.push((d, pos));
                    continue;
                }
                let e = order[pos];
                for plan in insertion_plans_with(&d, e, opts.k, rules) {
                    let mut c = d.clone();
                    if c.apply_route(e, &plan) {
                        nodes.fetch_add(1, Ordering::Relaxed);
                        if keep(&c) {
                            next.push((c, pos + 1));
                        }
                    } else {
                        found.rejected += 1;
                    }
                }
            }
            frontier = next;
        }
        let parts: Vec<Found> = frontier
            .into_par_iter()
            .map(|(d, pos)| {
                let mut f = Found::default();
                search(&ctx, d, pos, &mut f);
                f
            })
            .collect();
        for p in parts {
            found.rejected += p.rejected;
            for (k, d) in p.drawings {
                found.push(k, d);
            }
            // raw counts of parts include drawings already counted above
        }
    } else {
        search(&ctx, start, 0, &mut found);
    }

    let mut items = found.drawings;
    if !matches!(opts.dedup, Dedup::Raw) {
        items.sort_by(|a, b| a.0.cmp(&b.0));
    }
    let outcome = if exhausted.load(Ordering::Relaxed) {
        Outcome::BudgetExhausted
    } else if stop.load(Ordering::Relaxed) {
        Outcome::LimitReached
    } else {
        Outcome::Complete
    };
    let stats = SearchStats {
        nodes_expanded: nodes.load(Ordering::Relaxed),
        plans_rejected: found.rejected,
        drawings_found: found.raw,
        distinct: items.len() as u64,
        wall_ms: t0.elapsed().as_millis(),
    };
    let (keys, drawings) = items
        .into_iter()
        .map(|(k, d)| (k.unwrap_or_default(), d))
        .unzip();
    Enumeration {
        drawings,
        keys,
        stats,
        outcome,
    }
}

/// All simple `k`-plane drawings of a connected graph on the sphere.
pub fn enumerate_drawings(g: &LabeledGraph, opts: &EnumerateOptions) -> Result<Enumeration> {
    if opts.k > 2 {
        return invalid("only k <= 2 is supported");
    }
    if g.m() == 0 {
        if g.n() > 1 {
            return invalid("graph is disconnected");
        }
        let mut d = Drawing::empty(g);
        let key = opts.dedup.key(&d).unwrap_or_default();
        if g.n() == 1 {
            d = Drawing::empty(g);
        }
        return Ok(Enumeration {
            drawings: vec![d],
            keys: vec![key],
            stats: SearchStats {
                drawings_found: 1,
                distinct: 1,
                ..Default::default()
            },
            outcome: Outcome::Complete,
        });
    }
    let seed = opts.seed.unwrap_or_else(|| default_seed(g));
    let order = edge_order(g, seed)?;
    let d = crate::dcel::init_drawing(g, order[0])?;
    Ok(enumerate_from(
        d,
        &order[1..],
        opts,
        &RegionRules::default(),
    ))
}

/// Largest edge count of a simple `k`-planar graph on `n` vertices.
pub fn edge_bound(n: usize, k: u8) -> Option<usize> {
    if n < 3 {
        return None;
    }
    Some(match k {
        0 => 3 * n - 6,
        1 => 4 * n - 8,
        _ => 5 * n - 10,
    })
}

/// Whether `g` admits a `k`-plane drawing. Components are decided
/// separately; `node_budget` caps the search of each component.
pub fn k_planarity(g: &LabeledGraph, k: u8, node_budget: Option<u64>) -> Result<Decision> {
    if k > 2 {
        return invalid("only k <= 2 is supported");
    }
    if edge_bound(g.n(), k).is_some_and(|b| g.m() > b) {
        return Ok(Decision::No);
    }
    let comps = g.components();
    let mut inconclusive = false;
    for comp in comps {
        if comp.len() < 5 {
            continue;
        }
        let h = g.induced(&comp);
        if edge_bound(h.n(), k).is_some_and(|b| h.m() > b) {
            return Ok(Decision::No);
        }
        let mut opts = EnumerateOptions::new(k, Dedup::Raw);
        opts.limit = Some(1);
        opts.node_budget = node_budget;
        let r = enumerate_drawings(&h, &opts)?;
        match r.outcome {
            Outcome::BudgetExhausted => inconclusive = true,
            _ if r.drawings.is_empty() => return Ok(Decision::No),
            _ => {}
        }
    }
    Ok(if inconclusive {
        Decision::Inconclusive
    } else {
        Decision::Yes
    })
}

/// Unbudgeted k-planarity test.
pub fn is_k_planar(g: &LabeledGraph, k: u8) -> bool {
    matches!(k_planarity(g, k, None), Ok(Decision::Yes))
}

/// Groups drawings by a key, preserving first occurrence order.
pub fn group_by_key(keys: &[String]) -> BTreeMap<String, Vec<usize>> {
    let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        out.entry(k.clone()).or_default().push(i);
    }
    out
}
