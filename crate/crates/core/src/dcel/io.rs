use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Dart, DartId, Drawing, EdgeState, NodeId, NodeKind, MAX_CROSSINGS, NIL};
use crate::error::{invalid, Error, Result};

/// Serialized form of a drawing. Fields are declared in alphabetical order
/// so the JSON output has sorted keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawingJson {
    pub budgets: BTreeMap<String, u8>,
    pub crossings: Vec<CrossingJson>,
    /// Per dart: `[origin node, abstract edge]`; darts `2i` and `2i+1` are twins.
    pub darts: Vec<[u32; 2]>,
    pub edges: Vec<EdgeJson>,
    pub nodes: Vec<NodeJson>,
    pub rotations: BTreeMap<String, Vec<DartId>>,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingJson {
    pub a: u32,
    pub b: u32,
    /// Position of the crossing along the chain of `a` (resp. `b`).
    pub ia: u32,
    pub ib: u32,
    pub node: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub first: Option<DartId>,
    pub hidden: u8,
    pub spoke: bool,
    pub u: Option<u32>,
    pub uncrossable: bool,
    pub v: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeJson {
    Vertex { vertex: u32 },
    Crossing { a: u32, b: u32 },
    Junction,
}

fn opt(x: u32) -> Option<u32> {
    (x != NIL).then_some(x)
}

impl Drawing {
    /// Deterministic serialization. Darts are renumbered edge by edge along
    /// their chains and nodes in order of first appearance, so two drawings
    /// built by the same operations serialize identically.
    pub fn to_json(&self) -> DrawingJson {
        // dart order: each edge's chain, then leftover segments of that edge
        let mut seg_order: Vec<DartId> = Vec::with_capacity(self.dart_count() / 2);
        let mut taken = vec![false; self.dart_count()];
        for e in 0..self.edge_count() as u32 {
            for d in self.chain(e) {
                if !taken[d as usize] {
                    taken[d as usize] = true;
                    taken[self.twin(d) as usize] = true;
                    seg_order.push(d);
                }
            }
        }
        let mut by_edge: Vec<Vec<DartId>> = vec![Vec::new(); self.edge_count()];
        for d in 0..self.dart_count() as DartId {
            if !taken[d as usize] {
                let t = self.twin(d);
                taken[d as usize] = true;
                taken[t as usize] = true;
                by_edge[self.dart_edge(d) as usize].push(d.min(t));
            }
        }
        // leftover segments are appended after all chains, by edge
        for segs in by_edge {
            seg_order.extend(segs);
        }
        let mut new_id = vec![NIL; self.dart_count()];
        for (i, &d) in seg_order.iter().enumerate() {
            new_id[d as usize] = 2 * i as u32;
            new_id[self.twin(d) as usize] = 2 * i as u32 + 1;
        }
        let mut old_of_new = vec![NIL; self.dart_count()];
        for (old, &n) in new_id.iter().enumerate() {
            old_of_new[n as usize] = old as DartId;
        }

        let mut node_id = vec![NIL; self.node_count()];
        let mut node_order = Vec::with_capacity(self.node_count());
        for v in 0..self.vertex_count() as u32 {
            if let Some(x) = self.vertex_node(v) {
                node_id[x as usize] = node_order.len() as u32;
                node_order.push(x);
            }
        }
        for &old in &old_of_new {
            let x = self.origin(old);
            if node_id[x as usize] == NIL {
                node_id[x as usize] = node_order.len() as u32;
                node_order.push(x);
            }
        }

        let darts = old_of_new
            .iter()
            .map(|&d| [node_id[self.origin(d) as usize], self.dart_edge(d)])
            .collect();

        let mut rotations = BTreeMap::new();
        let mut nodes = Vec::with_capacity(node_order.len());
        for (i, &x) in node_order.iter().enumerate() {
            let rot = self.rotation(x);
            // start each rotation at its smallest new dart id
            let k = (0..rot.len())
                .min_by_key(|&k| new_id[rot[k] as usize])
                .unwrap_or(0);
            let list: Vec<DartId> = (0..rot.len())
                .map(|j| new_id[rot[(k + j) % rot.len()] as usize])
                .collect();
            rotations.insert(format!("{i:04}"), list);
            nodes.push(match self.node_kind(x) {
                NodeKind::Vertex(v) => NodeJson::Vertex { vertex: v },
                NodeKind::Crossing(a, b) => NodeJson::Crossing { a, b },
                NodeKind::Junction => NodeJson::Junction,
            });
        }

        let mut crossings = Vec::new();
        let mut pos: BTreeMap<(u32, NodeId), u32> = BTreeMap::new();
        for e in 0..self.edge_count() as u32 {
            for (i, d) in self.chain(e).into_iter().enumerate().skip(1) {
                pos.insert((e, self.origin(d)), i as u32 - 1);
            }
        }
        for (i, &x) in node_order.iter().enumerate() {
            if let NodeKind::Crossing(a, b) = self.node_kind(x) {
                crossings.push(CrossingJson {
                    a,
                    b,
                    ia: pos.get(&(a, x)).copied().unwrap_or(NIL),
                    ib: pos.get(&(b, x)).copied().unwrap_or(NIL),
                    node: i as NodeId,
                });
            }
        }

        let edges = self
            .edges()
            .iter()
            .map(|s| EdgeJson {
                first: opt(s.first).map(|d| new_id[d as usize]),
                hidden: s.hidden,
                spoke: s.spoke,
                u: opt(s.u),
                uncrossable: s.uncrossable,
                v: opt(s.v),
            })
            .collect();
        let budgets = self
            .edges()
            .iter()
            .enumerate()
            .map(|(e, s)| (format!("{e:04}"), s.budget()))
            .collect();

        DrawingJson {
            budgets,
            crossings,
            darts,
            edges,
            nodes,
            rotations,
            vertices: self.labels().to_vec(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("drawing serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Drawing> {
        let j: DrawingJson = serde_json::from_str(text)?;
        Drawing::from_json(&j)
    }

    /// Rebuilds a drawing and validates it.
    pub fn from_json(j: &DrawingJson) -> Result<Drawing> {
        let nd = j.darts.len();
        if nd % 2 != 0 {
            return invalid("odd number of darts");
        }
        let n_nodes = j.nodes.len();
        let n_edges = j.edges.len();
        let mut vertex_node = vec![NIL; j.vertices.len()];
        let mut nodes = Vec::with_capacity(n_nodes);
        for (i, nj) in j.nodes.iter().enumerate() {
            nodes.push(match *nj {
                NodeJson::Vertex { vertex } => {
                    let Some(slot) = vertex_node.get_mut(vertex as usize) else {
                        return invalid(format!("node {i}: unknown vertex {vertex}"));
                    };
                    *slot = i as NodeId;
                    NodeKind::Vertex(vertex)
                }
                NodeJson::Crossing { a, b } => {
                    if a as usize >= n_edges || b as usize >= n_edges {
                        return invalid(format!("node {i}: unknown crossing edge"));
                    }
                    NodeKind::Crossing(a, b)
                }
                NodeJson::Junction => NodeKind::Junction,
            });
        }
        let mut darts = Vec::with_capacity(nd);
        for (d, &[origin, edge]) in j.darts.iter().enumerate() {
            if origin as usize >= n_nodes || edge as usize >= n_edges {
                return invalid(format!("dart {d} out of range"));
            }
            darts.push(Dart {
                origin,
                twin: (d ^ 1) as DartId,
                next: NIL,
                prev: NIL,
                edge,
                region: 0,
            });
        }
        let mut node_dart = vec![NIL; n_nodes];
        for (key, rot) in &j.rotations {
            let x: usize = key
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad rotation key {key}")))?;
            if x >= n_nodes {
                return invalid(format!("rotation for unknown node {x}"));
            }
            for (i, &d) in rot.iter().enumerate() {
                let nx = rot[(i + 1) % rot.len()];
                if d as usize >= nd || nx as usize >= nd {
                    return invalid(format!("rotation of node {x} names unknown dart"));
                }
                darts[d as usize].next = nx;
                darts[nx as usize].prev = d;
            }
            node_dart[x] = rot.first().copied().unwrap_or(NIL);
        }
        if darts.iter().any(|d| d.next == NIL) {
            return invalid("dart missing from rotations");
        }
        let mut crossings = vec![0u8; n_edges];
        for k in &nodes {
            if let NodeKind::Crossing(a, b) = *k {
                crossings[a as usize] += 1;
                crossings[b as usize] += 1;
            }
        }
        let mut edges = Vec::with_capacity(n_edges);
        for (e, ej) in j.edges.iter().enumerate() {
            let first = ej.first.unwrap_or(NIL);
            if first != NIL && first as usize >= nd {
                return invalid(format!("edge {e}: unknown first dart"));
            }
            edges.push(EdgeState {
                u: ej.u.unwrap_or(NIL),
                v: ej.v.unwrap_or(NIL),
                first,
                crossings: crossings[e],
                hidden: ej.hidden,
                fake: if ej.uncrossable { MAX_CROSSINGS } else { 0 },
                uncrossable: ej.uncrossable,
                spoke: ej.spoke,
            });
        }
        let mut d = Drawing {
            labels: Arc::new(j.vertices.clone()),
            vertex_node,
            nodes,
            node_dart,
            darts,
            edges,
        };
        let violations = d.validate();
        if let Some(v) = violations.first() {
            return invalid(format!("{}: {}", v.kind, v.detail));
        }
        for (e, s) in d.edges().iter().enumerate() {
            if j.budgets
                .get(&format!("{e:04}"))
                .is_some_and(|&b| b != s.budget())
            {
                return invalid(format!("edge {e}: budget does not match crossings"));
            }
        }
        d.reseal();
        Ok(d)
    }

    /// Graphviz rendering of the planarization (layout is left to dot).
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph planarization {\n  node [shape=circle, fontsize=10];\n");
        for x in 0..self.node_count() as NodeId {
            let _ = match self.node_kind(x) {
                NodeKind::Vertex(v) => writeln!(s, "  n{x} [label=\"{}\"];", self.label(v)),
                NodeKind::Crossing(a, b) => {
                    writeln!(s, "  n{x} [label=\"\", shape=point, xlabel=\"{a}x{b}\"];")
                }
                NodeKind::Junction => writeln!(s, "  n{x} [label=\"\", shape=square, width=0.1];"),
            };
        }
        for d in (0..self.dart_count() as DartId).filter(|&d| d < self.twin(d)) {
            let e = self.edge(self.dart_edge(d));
            let style = if e.uncrossable {
                "bold"
            } else if e.spoke {
                "dotted"
            } else {
                "solid"
            };
            let _ = writeln!(
                s,
                "  n{} -- n{} [label=\"e{}\", style={style}];",
                self.origin(d),
                self.head(d),
                self.dart_edge(d)
            );
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcel::tests::plane_cycle;

    #[test]
    fn json_round_trip_is_bit_exact() {
        let d = plane_cycle(6);
        let text = d.to_json_string();
        let back = Drawing::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        assert_eq!(back.face_count(), 2);
        assert_eq!(back.canonical_form_labeled(), d.canonical_form_labeled());
    }

    #[test]
    fn json_rejects_broken_twins() {
        let d = plane_cycle(4);
        let mut j = d.to_json();
        j.darts.pop();
        assert!(Drawing::from_json(&j).is_err());
        let mut j = d.to_json();
        j.rotations.clear();
        assert!(Drawing::from_json(&j).is_err());
    }

    #[test]
    fn dot_mentions_every_segment() {
        let d = plane_cycle(5);
        let dot = d.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.starts_with("graph planarization"));
    }
}
