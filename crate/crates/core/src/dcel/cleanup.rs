//! Removal of irrelevant faces and nodes, followed by sealing each evacuated
//! region with an uncrossable star.

use super::{DartId, Drawing, EdgeState, FaceIndex, NodeId, NodeKind, MAX_CROSSINGS, NIL};
use crate::error::{Error, Result};
use crate::graphs::VertexId;

/// Region stamp of darts inside a sealed (evacuated) region.
pub const SEALED: u32 = u32::MAX - 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CleanupStats {
    pub faces_removed: usize,
    pub nodes_removed: usize,
    pub nodes_contracted: usize,
    pub hubs: usize,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Drawing {
    /// Whether `d` lies in a sealed region (no route may enter its face).
    pub fn is_sealed(&self, d: DartId) -> bool {
        self.region(d) == SEALED
    }

    /// Restores the sealed stamps (lost in serialization): a face is sealed
    /// exactly when it has a spoke on its boundary.
    pub(crate) fn reseal(&mut self) {
        let index = self.face_index();
        for walk in &index.walks {
            if walk.iter().any(|&x| self.edge(self.dart_edge(x)).spoke) {
                for &x in walk {
                    self.darts[x as usize].region = SEALED;
                }
            }
        }
    }

    /// Deletes the faces with `relevant[f] == false` (face ids of `index`,
    /// which must describe `self`), drops or contracts nodes that no longer
    /// separate relevant faces, and fills every evacuated region with an
    /// uncrossable star. Vertices in `protected` are always kept.
    pub fn remove_region(
        &self,
        index: &FaceIndex,
        relevant: &[bool],
        protected: &[VertexId],
    ) -> Result<(Drawing, CleanupStats)> {
        let mut stats = CleanupStats::default();
        if relevant.len() != index.len() {
            return Err(Error::Internal(
                "face classification does not match drawing".into(),
            ));
        }
        if relevant.iter().all(|&r| r) {
            return Ok((self.clone(), stats));
        }
        stats.faces_removed = relevant.iter().filter(|&&r| !r).count();

        let nd = self.dart_count();
        let face_of = &index.face_of;
        let mut dsu = Dsu((0..index.len()).collect());
        let mut dead = vec![false; nd];
        for d in 0..nd as DartId {
            let t = self.twin(d);
            let (fd, ft) = (face_of[d as usize] as usize, face_of[t as usize] as usize);
            if !relevant[fd] && !relevant[ft] {
                dead[d as usize] = true;
                dsu.union(fd, ft);
            }
        }
        let mut is_protected = vec![false; self.node_count()];
        for &v in protected {
            if let Some(x) = self.vertex_node(v) {
                if self.rotation(x).iter().all(|&c| dead[c as usize]) {
                    return Err(Error::Internal(format!(
                        "cleanup would isolate protected vertex {}",
                        self.label(v)
                    )));
                }
                is_protected[x as usize] = true;
            }
        }

        let mut g = self.clone();
        for d in 0..nd as DartId {
            if dead[d as usize] {
                g.unlink(d);
            }
        }

        // Contract irrelevant boundary nodes in node order.
        let mut node_dead = vec![false; g.node_count()];
        for x in 0..g.node_count() as NodeId {
            let live = g.rotation(x);
            if live.is_empty() {
                node_dead[x as usize] = true;
                continue;
            }
            if is_protected[x as usize] {
                continue;
            }
            let mut rel: Vec<u32> = self
                .rotation(x)
                .iter()
                .map(|&c| face_of[c as usize])
                .filter(|&f| relevant[f as usize])
                .collect();
            rel.sort_unstable();
            rel.dedup();
            if rel.len() != 1 || live.len() != 2 {
                continue;
            }
            let rel_corners: Vec<DartId> = live
                .iter()
                .copied()
                .filter(|&c| relevant[face_of[c as usize] as usize])
                .collect();
            if rel_corners.len() != 1 {
                continue;
            }
            let walk_len = g.walk_len(rel_corners[0]);
            let (c1, c2) = (live[0], live[1]);
            let (t1, t2) = (g.twin(c1), g.twin(c2));
            if walk_len <= 3 || g.origin(t1) == g.origin(t2) {
                // contracting would leave a lens (or a loop)
                continue;
            }
            g.darts[t1 as usize].twin = t2;
            g.darts[t2 as usize].twin = t1;
            dead[c1 as usize] = true;
            dead[c2 as usize] = true;
            g.node_dart[x as usize] = NIL;
            node_dead[x as usize] = true;
            stats.nodes_contracted += 1;
        }

        // Update edge bookkeeping for everything that disappeared.
        let mut touched = vec![false; g.edge_count()];
        for d in 0..nd {
            if dead[d] {
                touched[g.darts[d].edge as usize] = true;
            }
        }
        for x in 0..g.node_count() {
            if let NodeKind::Crossing(a, b) = g.nodes[x] {
                let intact = !node_dead[x] && g.real_rotation(x as NodeId).len() == 4;
                if !intact {
                    g.edges[a as usize].hidden += 1;
                    g.edges[b as usize].hidden += 1;
                    g.edges[a as usize].crossings -= 1;
                    g.edges[b as usize].crossings -= 1;
                    touched[a as usize] = true;
                    touched[b as usize] = true;
                    g.nodes[x] = NodeKind::Junction;
                }
            }
        }
        for (e, t) in touched.iter().enumerate() {
            if *t {
                g.edges[e].first = NIL;
            }
        }
        stats.nodes_removed = node_dead.iter().filter(|&&d| d).count() - stats.nodes_contracted;

        let orig_face: Vec<u32> = face_of.clone();
        let (mut g, old_of_new) = g.compacted(&dead, &node_dead);
        let orig_face: Vec<u32> = old_of_new.iter().map(|&d| orig_face[d as usize]).collect();

        // Seal each evacuated region with a star.
        let fi = g.face_index();
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (w, walk) in fi.walks.iter().enumerate() {
            let f = orig_face[walk[0] as usize] as usize;
            if relevant[f] {
                continue;
            }
            let root = dsu.find(f);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, ws)) => ws.push(w),
                None => groups.push((root, vec![w])),
            }
        }
        for (_, ws) in &groups {
            let corners: Vec<Vec<DartId>> = ws.iter().map(|&w| fi.walks[w].clone()).collect();
            g.insert_star(&corners);
            stats.hubs += 1;
        }
        let violations = g.validate();
        if let Some(v) = violations.first() {
            return Err(Error::Internal(format!(
                "cleanup broke the drawing: {}: {}",
                v.kind, v.detail
            )));
        }
        Ok((g, stats))
    }

    fn unlink(&mut self, d: DartId) {
        let x = self.origin(d) as usize;
        let (p, n) = (self.prev(d), self.next(d));
        if p == d {
            self.node_dart[x] = NIL;
        } else {
            self.darts[p as usize].next = n;
            self.darts[n as usize].prev = p;
            if self.node_dart[x] == d {
                self.node_dart[x] = n;
            }
        }
    }

    fn walk_len(&self, start: DartId) -> usize {
        let mut len = 0;
        let mut d = start;
        loop {
            len += 1;
            d = self.face_next(d);
            if d == start {
                return len;
            }
        }
    }

    /// Drops dead darts and nodes and renumbers the rest in order. Returns
    /// the old id of every new dart.
    fn compacted(&self, dead: &[bool], node_dead: &[bool]) -> (Drawing, Vec<DartId>) {
        let mut new_dart = vec![NIL; self.dart_count()];
        let mut old_of_new = Vec::new();
        for d in 0..self.dart_count() {
            if !dead[d] {
                new_dart[d] = old_of_new.len() as DartId;
                old_of_new.push(d as DartId);
            }
        }
        let mut new_node = vec![NIL; self.node_count()];
        let mut nodes = Vec::new();
        let mut node_dart = Vec::new();
        for x in 0..self.node_count() {
            if !node_dead[x] {
                new_node[x] = nodes.len() as NodeId;
                nodes.push(self.nodes[x]);
                node_dart.push(new_dart[self.node_dart[x] as usize]);
            }
        }
        let darts = old_of_new
            .iter()
            .map(|&d| {
                let o = self.darts[d as usize];
                super::Dart {
                    origin: new_node[o.origin as usize],
                    twin: new_dart[o.twin as usize],
                    next: new_dart[o.next as usize],
                    prev: new_dart[o.prev as usize],
                    edge: o.edge,
                    region: o.region,
                }
            })
            .collect();
        let vertex_node = self
            .vertex_node
            .iter()
            .map(|&x| if x == NIL { NIL } else { new_node[x as usize] })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|s| EdgeState {
                first: if s.first == NIL {
                    NIL
                } else {
                    new_dart[s.first as usize]
                },
                ..s.clone()
            })
            .collect();
        (
            Drawing {
                labels: self.labels.clone(),
                vertex_node,
                nodes,
                node_dart,
                darts,
                edges,
            },
            old_of_new,
        )
    }

    fn new_spoke(&mut self, at: NodeId) -> u32 {
        let u = match self.nodes[at as usize] {
            NodeKind::Vertex(v) => v,
            _ => NIL,
        };
        self.edges.push(EdgeState {
            u,
            v: NIL,
            first: NIL,
            crossings: 0,
            hidden: 0,
            fake: MAX_CROSSINGS,
            uncrossable: true,
            spoke: true,
        });
        (self.edges.len() - 1) as u32
    }

    /// Adds one hub joined by spokes to every corner of the given boundary
    /// walks (all bounding the same region), then seals the star's faces.
    fn insert_star(&mut self, walks: &[Vec<DartId>]) {
        let hub = self.new_node(NodeKind::Junction);
        // Attach the first corner of every walk through the hub's first
        // corner; this also reconnects boundaries of an annular region.
        for (i, walk) in walks.iter().enumerate() {
            let c = walk[0];
            let e = self.new_spoke(self.origin(c));
            let (h, m) = self.new_segment(hub, self.origin(c), e, SEALED);
            self.insert_before(m, c);
            if i == 0 {
                self.darts[h as usize].next = h;
                self.darts[h as usize].prev = h;
                self.node_dart[hub as usize] = h;
            } else {
                let anchor = self.node_dart[hub as usize];
                self.insert_before(h, anchor);
            }
            self.edges[e as usize].first = h;
        }
        for walk in walks {
            for &c in &walk[1..] {
                let Some(hd) = self
                    .rotation(hub)
                    .into_iter()
                    .find(|&hd| self.same_face(hd, c))
                else {
                    continue;
                };
                let e = self.new_spoke(self.origin(c));
                let (h, m) = self.new_segment(hub, self.origin(c), e, SEALED);
                self.insert_before(h, hd);
                self.insert_before(m, c);
                self.edges[e as usize].first = h;
            }
        }
        for hd in self.rotation(hub) {
            let mut d = hd;
            loop {
                self.darts[d as usize].region = SEALED;
                d = self.face_next(d);
                if d == hd {
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcel::tests::plane_cycle;

    #[test]
    fn all_relevant_is_identity() {
        let d = plane_cycle(6);
        let fi = d.face_index();
        let (c, stats) = d.remove_region(&fi, &vec![true; fi.len()], &[]).unwrap();
        assert_eq!(c.to_json_string(), d.to_json_string());
        assert_eq!(stats, CleanupStats::default());
    }

    #[test]
    fn sealing_one_side_of_a_cycle() {
        let d = plane_cycle(6);
        let fi = d.face_index();
        let relevant = vec![true, false];
        let (c, stats) = d
            .remove_region(&fi, &relevant, &[0, 1, 2, 3, 4, 5])
            .unwrap();
        assert!(c.validate().is_empty(), "{:?}", c.validate());
        assert_eq!(stats.hubs, 1);
        // one relevant face plus six star triangles
        assert_eq!(c.face_count(), 7);
        let sealed_faces = c
            .face_index()
            .walks
            .iter()
            .filter(|w| w.iter().all(|&x| c.is_sealed(x)))
            .count();
        assert_eq!(sealed_faces, 6);
    }

    #[test]
    fn contraction_respects_lens_rule() {
        // Nothing is protected: the cycle keeps three nodes so the relevant
        // face is still bounded by a triangle, never by a lens.
        let d = plane_cycle(6);
        let fi = d.face_index();
        let (c, stats) = d.remove_region(&fi, &[true, false], &[]).unwrap();
        assert!(c.validate().is_empty(), "{:?}", c.validate());
        assert_eq!(stats.nodes_contracted, 3);
        let real = (0..c.node_count() as NodeId)
            .filter(|&x| matches!(c.node_kind(x), NodeKind::Vertex(_)))
            .count();
        assert_eq!(real, 3);
    }
}
