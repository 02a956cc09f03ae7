//! Abstract labeled graphs and the generators for the braided cylinder
//! family, its gadget, and the complete-graph variants used to probe it.
//!
//! Vertex ids are dense (`0..n`). Every edge carries an `uncrossable` flag,
//! which the drawing engine honours by pre-charging the edge with its full
//! crossing budget, and a role tag recording where the edge came from.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

/// Role of an edge inside the generated families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeTag {
    /// Edge of the ten-cycle `D_i` (1-based index).
    Cycle(u32),
    /// Braided matching edge between `D_i` and `D_{i+1}`.
    Matching(u32),
    /// Length-two chord `v_j v_{j+2}` along `D_i`.
    LengthTwo(u32),
    /// Edge of the gadget copy with the given id.
    Gadget(u32),
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub uncrossable: bool,
    pub tag: EdgeTag,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_incident(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.is_incident(other.u) || self.is_incident(other.v)
    }
}

/// A simple undirected graph with unique vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<(VertexId, VertexId), EdgeId>,
    adjacency: Vec<Vec<VertexId>>,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl LabeledGraph {
    /// Graph on `n` vertices labeled `"0".."n-1"` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = LabeledGraph::default();
        for i in 0..n {
            g.labels.push(i.to_string());
            g.adjacency.push(Vec::new());
        }
        g
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<VertexId> {
        let label = label.into();
        if self.labels.iter().any(|l| *l == label) {
            return invalid(format!("duplicate vertex label {label}"));
        }
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        Ok((self.labels.len() - 1) as VertexId)
    }

    pub fn add_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        uncrossable: bool,
        tag: EdgeTag,
    ) -> Result<EdgeId> {
        let n = self.n() as VertexId;
        if u >= n || v >= n {
            return invalid(format!("edge {u}-{v} references a missing vertex"));
        }
        if u == v {
            return invalid(format!("loop at vertex {u}"));
        }
        if self.index.contains_key(&key(u, v)) {
            return invalid(format!("multi-edge {u}-{v}"));
        }
        let id = self.edges.len() as EdgeId;
        self.edges.push(Edge {
            u,
            v,
            uncrossable,
            tag,
        });
        self.index.insert(key(u, v), id);
        self.adjacency[u as usize].push(v);
        self.adjacency[v as usize].push(u);
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e as usize]
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.index.contains_key(&key(u, v))
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n() as VertexId).map(|v| self.degree(v)).collect()
    }

    pub fn set_uncrossable(&mut self, e: EdgeId, flag: bool) {
        self.edges[e as usize].uncrossable = flag;
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([s as VertexId]);
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Unordered vertex pairs `(u, v)` with `u < v` that are not edges.
    pub fn non_edges(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.n() as VertexId;
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Copy of the graph with one extra plain edge.
    pub fn with_edge(&self, u: VertexId, v: VertexId) -> Result<LabeledGraph> {
        let mut g = self.clone();
        g.add_edge(u, v, false, EdgeTag::Plain)?;
        Ok(g)
    }

    /// Subgraph induced by `vertices` (relabeled densely in the given order).
    pub fn induced(&self, vertices: &[VertexId]) -> LabeledGraph {
        let mut pos = vec![u32::MAX; self.n()];
        let mut g = LabeledGraph::default();
        for (i, &v) in vertices.iter().enumerate() {
            pos[v as usize] = i as u32;
            g.labels.push(self.labels[v as usize].clone());
            g.adjacency.push(Vec::new());
        }
        for e in &self.edges {
            let (a, b) = (pos[e.u as usize], pos[e.v as usize]);
            if a != u32::MAX && b != u32::MAX {
                g.add_edge(a, b, e.uncrossable, e.tag)
                    .expect("induced edge is simple");
            }
        }
        g
    }

    /// Serializes to the text edge-list format:
    /// a header `n <count>`, then one `u v` line per edge, with a trailing
    /// ` !` on uncrossable edges.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {}", self.n()).unwrap();
        for e in &self.edges {
            if e.uncrossable {
                writeln!(out, "{} {} !", e.u, e.v).unwrap();
            } else {
                writeln!(out, "{} {}", e.u, e.v).unwrap();
            }
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<LabeledGraph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| crate::Error::InvalidInput("empty edge list".into()))?;
        let mut parts = header.split_whitespace();
        let n = match (parts.next(), parts.next(), parts.next()) {
            (Some("n"), Some(count), None) => count
                .parse::<usize>()
                .map_err(|_| crate::Error::InvalidInput(format!("bad vertex count {count}")))?,
            _ => return invalid(format!("expected header `n <count>`, got `{header}`")),
        };
        let mut g = LabeledGraph::with_vertices(n);
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let (u, v, flag) = match fields.as_slice() {
                [u, v] => (u, v, false),
                [u, v, "!"] => (u, v, true),
                _ => return invalid(format!("line {}: malformed edge `{line}`", lineno + 1)),
            };
            let parse = |s: &str| {
                s.parse::<VertexId>().map_err(|_| {
                    crate::Error::InvalidInput(format!("line {}: bad vertex `{s}`", lineno + 1))
                })
            };
            g.add_edge(parse(u)?, parse(v)?, flag, EdgeTag::Plain)?;
        }
        Ok(g)
    }
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// The cycle `C_n` with all edges tagged `Cycle(1)`.
pub fn gen_cycle(n: usize) -> Result<LabeledGraph> {
    if n < 3 {
        return invalid(format!("cycle needs at least 3 vertices, got {n}"));
    }
    let mut g = LabeledGraph::default();
    for j in 0..n {
        g.add_vertex(format!("v_{j}"))?;
    }
    for j in 0..n {
        g.add_edge(
            j as VertexId,
            ((j + 1) % n) as VertexId,
            false,
            EdgeTag::Cycle(1),
        )?;
    }
    Ok(g)
}

/// The complete graph `K_n`.
pub fn gen_complete(n: usize) -> LabeledGraph {
    let mut g = LabeledGraph::with_vertices(n);
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            g.add_edge(u, v, false, EdgeTag::Plain).unwrap();
        }
    }
    g
}

/// Edges removed from `K_9` to obtain the gadget: two disjoint `K_2`s
/// (`x2x3`, `x4x5`) and the path `x6 x8 x7`.
pub const GADGET_REMOVED: [(VertexId, VertexId); 4] = [(2, 3), (4, 5), (6, 8), (7, 8)];

/// Gadget `X = K_9 \ (K_2 + K_2 + P_3)` on `x_0..x_8`.
pub fn gen_gadget_x() -> LabeledGraph {
    let mut g = LabeledGraph::default();
    for i in 0..9 {
        g.add_vertex(format!("x_{i}")).unwrap();
    }
    for u in 0..9 {
        for v in u + 1..9 {
            if !GADGET_REMOVED.contains(&(u, v)) {
                g.add_edge(u, v, false, EdgeTag::Gadget(0)).unwrap();
            }
        }
    }
    g
}

/// `K_9` minus the listed edges (at most four).
pub fn gen_k9_minus(removed: &[(VertexId, VertexId)]) -> Result<LabeledGraph> {
    if removed.len() > 4 {
        return invalid("at most four edges may be removed from K9");
    }
    let mut drop = BTreeSet::new();
    for &(u, v) in removed {
        if u == v || u >= 9 || v >= 9 {
            return invalid(format!("{u}-{v} is not an edge of K9"));
        }
        if !drop.insert(key(u, v)) {
            return invalid(format!("edge {u}-{v} listed twice"));
        }
    }
    let mut g = LabeledGraph::with_vertices(9);
    for u in 0..9 {
        for v in u + 1..9 {
            if !drop.contains(&(u, v)) {
                g.add_edge(u, v, false, EdgeTag::Plain)?;
            }
        }
    }
    Ok(g)
}

/// Gadget plus a padding vertex `x'` joined to `x_3`, `x_4`, `x_6`.
pub fn gen_x_plus() -> LabeledGraph {
    let mut g = gen_gadget_x();
    let xp = g.add_vertex("x'").unwrap();
    for t in [3, 4, 6] {
        g.add_edge(xp, t, false, EdgeTag::Gadget(0)).unwrap();
    }
    g
}

/// Vertex id of `v_j^i` (1-based cycle index) in the cycle-first layout.
pub fn cycle_vertex(i: u32, j: u32) -> VertexId {
    10 * (i - 1) + (j % 10)
}

/// Index on `D_{i+1}` that `v_j^i` is matched to by the braided matching.
pub fn braided_partner(j: u32) -> u32 {
    if j % 2 == 0 {
        (j + 8) % 10
    } else {
        (j + 2) % 10
    }
}

fn add_cycles_and_matchings(g: &mut LabeledGraph, k: u32, uncrossable: impl Fn(u32) -> bool) {
    for i in 1..=k {
        for j in 0..10 {
            g.add_vertex(format!("v_{j}^{i}")).unwrap();
        }
    }
    for i in 1..=k {
        for j in 0..10 {
            g.add_edge(
                cycle_vertex(i, j),
                cycle_vertex(i, j + 1),
                uncrossable(i),
                EdgeTag::Cycle(i),
            )
            .unwrap();
        }
    }
    for i in 1..k {
        for j in 0..10 {
            g.add_edge(
                cycle_vertex(i, j),
                cycle_vertex(i + 1, braided_partner(j)),
                false,
                EdgeTag::Matching(i),
            )
            .unwrap();
        }
    }
}

/// `G_k^-`: the ten-cycles `D_1..D_k` joined by braided matchings, without
/// gadgets and chords. `D_1` is uncrossable; `D_k` is uncrossable iff
/// `last_uncrossable`.
pub fn gen_gk_minus(k: u32, last_uncrossable: bool) -> Result<LabeledGraph> {
    if k < 1 {
        return invalid("G_k^- needs k >= 1");
    }
    let mut g = LabeledGraph::default();
    add_cycles_and_matchings(&mut g, k, |i| i == 1 || (i == k && last_uncrossable));
    Ok(g)
}

/// The full graph `G_k` with gadget copies on every edge of `D_1` and `D_k`
/// and length-two chords along both boundary cycles.
pub fn gen_gk(k: u32) -> Result<LabeledGraph> {
    if k < 2 {
        return invalid(format!("G_k needs k >= 2, got {k}"));
    }
    let mut g = LabeledGraph::default();
    add_cycles_and_matchings(&mut g, k, |_| false);
    let gadget = gen_gadget_x();
    let mut copy = 0u32;
    for i in [1, k] {
        for j in 0..10 {
            let (a, b) = (cycle_vertex(i, j), cycle_vertex(i, j + 1));
            let (x6, x7) = (a.min(b), a.max(b));
            let mut map = [0 as VertexId; 9];
            map[6] = x6;
            map[7] = x7;
            for t in [0, 1, 2, 3, 4, 5, 8] {
                map[t] = g.add_vertex(format!("x_{t}#{copy}")).unwrap();
            }
            for e in gadget.edges() {
                let (u, v) = (map[e.u as usize], map[e.v as usize]);
                if key(u, v) == (x6, x7) {
                    continue;
                }
                g.add_edge(u, v, false, EdgeTag::Gadget(copy)).unwrap();
            }
            copy += 1;
        }
    }
    for i in [1, k] {
        for j in 0..10 {
            g.add_edge(
                cycle_vertex(i, j),
                cycle_vertex(i, j + 2),
                false,
                EdgeTag::LengthTwo(i),
            )
            .unwrap();
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// Small-graph isomorphism
// ---------------------------------------------------------------------------

/// All automorphisms of `g` as vertex permutations (`perm[v]` is the image
/// of `v`). Backtracking with degree pruning; meant for graphs of a few
/// dozen vertices at most.
pub fn automorphisms(g: &LabeledGraph) -> Vec<Vec<VertexId>> {
    isomorphisms(g, g, usize::MAX)
}

/// Whether `g` and `h` are isomorphic as unlabeled graphs.
pub fn are_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    g.n() == h.n() && g.m() == h.m() && !isomorphisms(g, h, 1).is_empty()
}

fn isomorphisms(g: &LabeledGraph, h: &LabeledGraph, limit: usize) -> Vec<Vec<VertexId>> {
    let n = g.n();
    if n != h.n() || g.m() != h.m() {
        return Vec::new();
    }
    let mut gd = g.degrees();
    let mut hd = h.degrees();
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    // Most constrained first: high degree, then neighbours of already chosen.
    order.sort_by_key(|&v| (std::cmp::Reverse(gd[v as usize]), v));
    gd.sort_unstable();
    hd.sort_unstable();
    if gd != hd {
        return Vec::new();
    }
    let gdeg = g.degrees();
    let hdeg = h.degrees();
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();

    fn rec(
        depth: usize,
        order: &[VertexId],
        g: &LabeledGraph,
        h: &LabeledGraph,
        gdeg: &[usize],
        hdeg: &[usize],
        map: &mut [VertexId],
        used: &mut [bool],
        out: &mut Vec<Vec<VertexId>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if depth == order.len() {
            out.push(map.to_vec());
            return;
        }
        let v = order[depth];
        for w in 0..h.n() as VertexId {
            if used[w as usize] || gdeg[v as usize] != hdeg[w as usize] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&p| g.has_edge(v, p) == h.has_edge(w, map[p as usize]));
            if !consistent {
                continue;
            }
            map[v as usize] = w;
            used[w as usize] = true;
            rec(depth + 1, order, g, h, gdeg, hdeg, map, used, out, limit);
            used[w as usize] = false;
            map[v as usize] = u32::MAX;
        }
    }

    rec(
        0, &order, g, h, &gdeg, &hdeg, &mut map, &mut used, &mut out, limit,
    );
    out
}

/// Canonical adjacency bitmask of a graph on at most 11 vertices: the
/// lexicographically largest upper-triangle bit string over all
/// degree-respecting relabelings. Equal for isomorphic graphs.
pub fn small_canonical_code(g: &LabeledGraph) -> u64 {
    let n = g.n();
    assert!(n <= 11, "small_canonical_code supports n <= 11");
    let deg = g.degrees();
    // Positions are filled in order of non-increasing degree, so only
    // vertices of the matching degree class are tried at each position.
    let mut class_order: Vec<usize> = deg.clone();
    class_order.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = 0u64;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn code_of(g: &LabeledGraph, perm: &[VertexId]) -> u64 {
        let n = perm.len();
        let mut code = 0u64;
        for a in 0..n {
            for b in a + 1..n {
                code <<= 1;
                if g.has_edge(perm[a], perm[b]) {
                    code |= 1;
                }
            }
        }
        code
    }

    fn rec(
        g: &LabeledGraph,
        deg: &[usize],
        class_order: &[usize],
        perm: &mut Vec<VertexId>,
        used: &mut [bool],
        best: &mut u64,
    ) {
        if perm.len() == class_order.len() {
            *best = (*best).max(code_of(g, perm));
            return;
        }
        let want = class_order[perm.len()];
        for v in 0..g.n() {
            if used[v] || deg[v] != want {
                continue;
            }
            used[v] = true;
            perm.push(v as VertexId);
            rec(g, deg, class_order, perm, used, best);
            perm.pop();
            used[v] = false;
        }
    }

    rec(g, &deg, &class_order, &mut perm, &mut used, &mut best);
    best
}

/// One representative per isomorphism class of graphs on `n` vertices
/// (`n <= 7`), ordered by edge count and then canonical code.
pub fn graph_classes(n: usize) -> Vec<LabeledGraph> {
    assert!(n <= 7, "graph_classes supports n <= 7");
    let pairs: Vec<(VertexId, VertexId)> = (0..n as VertexId)
        .flat_map(|u| (u + 1..n as VertexId).map(move |v| (u, v)))
        .collect();
    let mut seen = std::collections::BTreeMap::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut g = LabeledGraph::with_vertices(n);
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v, false, EdgeTag::Plain).unwrap();
            }
        }
        let code = small_canonical_code(&g);
        seen.entry((g.m(), code)).or_insert(g);
    }
    seen.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_sizes() {
        let c10 = gen_cycle(10).unwrap();
        assert_eq!((c10.n(), c10.m()), (10, 10));
        let c3 = gen_cycle(3).unwrap();
        assert_eq!((c3.n(), c3.m()), (3, 3));
        assert!(gen_cycle(2).is_err());
        assert!(c10
            .edges()
            .iter()
            .all(|e| e.tag == EdgeTag::Cycle(1) && !e.uncrossable));
    }

    #[test]
    fn gadget_shape() {
        let x = gen_gadget_x();
        assert_eq!(x.m(), 32);
        assert_eq!(x.degrees(), vec![8, 8, 7, 7, 7, 7, 7, 7, 6]);
        let non: Vec<_> = (0..8).filter(|&v| !x.has_edge(8, v)).collect();
        assert_eq!(non, vec![6, 7]);
        assert_eq!(x.label(8), "x_8");
    }

    #[test]
    fn gadget_automorphism_group_has_order_32() {
        let auts = automorphisms(&gen_gadget_x());
        assert_eq!(auts.len(), 32);
        // Each automorphism preserves the four vertex classes.
        let class = |v: u32| match v {
            8 => 0,
            6 | 7 => 1,
            0 | 1 => 2,
            _ => 3,
        };
        for a in &auts {
            for v in 0..9 {
                assert_eq!(class(v), class(a[v as usize]));
            }
        }
        // Transitive inside each class.
        for cls in [vec![6, 7], vec![0, 1], vec![2, 3, 4, 5]] {
            for &v in &cls {
                for &w in &cls {
                    assert!(auts.iter().any(|a| a[v as usize] == w));
                }
            }
        }
    }

    #[test]
    fn k9_minus() {
        assert_eq!(gen_k9_minus(&[]).unwrap().m(), 36);
        assert_eq!(gen_k9_minus(&[(0, 1)]).unwrap().m(), 35);
        assert!(gen_k9_minus(&[(0, 9)]).is_err());
        assert!(gen_k9_minus(&[(3, 3)]).is_err());
        let pattern = gen_k9_minus(&[(0, 1), (2, 3), (4, 5), (5, 6)]).unwrap();
        assert!(are_isomorphic(&pattern, &gen_gadget_x()));
        let not_pattern = gen_k9_minus(&[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(!are_isomorphic(&not_pattern, &gen_gadget_x()));
    }

    #[test]
    fn x_plus() {
        let g = gen_x_plus();
        assert_eq!((g.n(), g.m()), (10, 35));
        assert_eq!(g.degree(9), 3);
        let mut nb = g.neighbors(9).to_vec();
        nb.sort_unstable();
        assert_eq!(nb, vec![3, 4, 6]);
    }

    #[test]
    fn gk_counts() {
        for k in 2..=10u32 {
            let g = gen_gk(k).unwrap();
            assert_eq!(g.n(), 10 * k as usize + 140, "k={k}");
            assert_eq!(g.m(), 20 * k as usize + 630, "k={k}");
        }
        assert!(gen_gk(1).is_err());
    }

    #[test]
    fn gk_structure() {
        let g = gen_gk(3).unwrap();
        // Braided matching between D_1 and D_2.
        assert!(g.has_edge(cycle_vertex(1, 0), cycle_vertex(2, 8)));
        assert!(g.has_edge(cycle_vertex(1, 1), cycle_vertex(2, 3)));
        assert!(g.has_edge(cycle_vertex(2, 9), cycle_vertex(3, 1)));
        // Chords only on the boundary cycles.
        assert!(g.has_edge(cycle_vertex(1, 0), cycle_vertex(1, 2)));
        assert!(g.has_edge(cycle_vertex(3, 9), cycle_vertex(3, 1)));
        assert!(!g.has_edge(cycle_vertex(2, 0), cycle_vertex(2, 2)));
        assert_eq!(g.label(cycle_vertex(2, 3)), "v_3^2");
        // Every gadget copy is a labeled copy of X on its cycle edge.
        let gadget = gen_gadget_x();
        for copy in 0..20u32 {
            let base = 30 + 7 * copy;
            let mut verts: Vec<VertexId> = (base..base + 7).collect();
            let cyc = if copy < 10 { 1 } else { 3 };
            let j = copy % 10;
            verts.push(cycle_vertex(cyc, j));
            verts.push(cycle_vertex(cyc, j + 1));
            assert!(are_isomorphic(&g.induced(&verts), &gadget), "copy {copy}");
        }
        assert!(g.edges().iter().all(|e| !e.uncrossable));
    }

    #[test]
    fn gk_minus() {
        let g = gen_gk_minus(1, false).unwrap();
        assert_eq!((g.n(), g.m()), (10, 10));
        assert!(g.edges().iter().all(|e| e.uncrossable));
        let g = gen_gk_minus(3, false).unwrap();
        assert_eq!((g.n(), g.m()), (30, 50));
        let unc: Vec<_> = g.edges().iter().filter(|e| e.uncrossable).collect();
        assert_eq!(unc.len(), 10);
        assert!(unc.iter().all(|e| e.tag == EdgeTag::Cycle(1)));
        let g = gen_gk_minus(2, true).unwrap();
        assert_eq!(g.edges().iter().filter(|e| e.uncrossable).count(), 20);
        assert!(g
            .edges()
            .iter()
            .filter(|e| matches!(e.tag, EdgeTag::Matching(_)))
            .all(|e| !e.uncrossable));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_gk(4).unwrap(), gen_gk(4).unwrap());
        assert_eq!(gen_gadget_x(), gen_gadget_x());
        assert_eq!(gen_x_plus().to_edge_list(), gen_x_plus().to_edge_list());
    }

    #[test]
    fn edge_list_format() {
        let g = gen_gk_minus(2, false).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("n 20\n0 1 !\n"));
        let back = LabeledGraph::from_edge_list(&text).unwrap();
        assert_eq!(back.to_edge_list(), text);
        assert!(LabeledGraph::from_edge_list("n 2\n0 0\n").is_err());
        assert!(LabeledGraph::from_edge_list("3\n0 1\n").is_err());
        assert!(LabeledGraph::from_edge_list("n 3\n0 1 ?\n").is_err());
        assert!(LabeledGraph::from_edge_list("n 3\n0 1\n1 0\n").is_err());
    }

    #[test]
    fn small_classes() {
        assert_eq!(graph_classes(4).len(), 11);
        assert_eq!(graph_classes(5).len(), 34);
    }
}
