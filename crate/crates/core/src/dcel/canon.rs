//! Canonical serialization of planarized drawings.
//!
//! A drawing is serialized by a breadth-first walk from one start dart,
//! visiting each node's rotation from the dart it was entered by. The
//! walk is fully determined by the start dart and the orientation, so the
//! lexicographically smallest serialization over all admissible start
//! darts, orientations and vertex relabelings is an isomorphism invariant.

use sha2::{Digest, Sha256};

use super::{DartId, Drawing, NodeKind, NIL};
use crate::graphs::VertexId;

/// Index permutation of a labeled cycle: position `j` maps to `map[j]`.
pub type CycleMap = Vec<u32>;

/// All dihedral maps of an `n`-cycle (rotations, then reflections).
pub fn cycle_maps(n: usize) -> Vec<CycleMap> {
    let n32 = n as u32;
    let mut out = Vec::with_capacity(2 * n);
    for r in 0..n32 {
        out.push((0..n32).map(|j| (j + r) % n32).collect());
    }
    for c in 0..n32 {
        out.push((0..n32).map(|j| (c + n32 - j) % n32).collect());
    }
    out
}

/// Maps of a ten-cycle that carry the braided matching onto itself: the
/// even rotations and the reflections `j -> c - j` with `c` odd. These are
/// exactly the dihedral maps sending even positions to even positions'
/// matching pattern (`j -> j+8` for even `j`, `j -> j+2` for odd `j`).
pub fn braided_cycle_maps() -> Vec<CycleMap> {
    cycle_maps(10)
        .into_iter()
        .filter(|m| preserves_braid(m))
        .collect()
}

fn preserves_braid(m: &[u32]) -> bool {
    // The matching on indices, viewed as a map from the old cycle to the
    // new one, must be conjugated to itself by applying `m` to both sides.
    (0..10u32).all(|j| {
        let partner = crate::graphs::braided_partner(j);
        m[partner as usize] == crate::graphs::braided_partner(m[j as usize])
    })
}

const ANON: u32 = u32::MAX;

impl Drawing {
    /// Canonical string for labeled drawings: vertex labels must match
    /// exactly, mirror images are identified.
    pub fn canonical_form_labeled(&self) -> String {
        let tokens: Vec<u32> = (0..self.vertex_count() as u32).collect();
        self.canonical_with(&[tokens], true)
    }

    /// Canonical string for labeled drawings that keeps mirror images
    /// apart (the count reported for the gadget is of this kind).
    pub fn canonical_form_labeled_oriented(&self) -> String {
        let tokens: Vec<u32> = (0..self.vertex_count() as u32).collect();
        self.canonical_with(&[tokens], false)
    }

    /// Canonical string modulo the given vertex permutations (each maps a
    /// vertex id to its image) and mirror images.
    pub fn canonical_form_under(&self, perms: &[Vec<VertexId>]) -> String {
        self.canonical_with(perms, true)
    }

    /// Canonical string where only the vertices of `fixed_cycle` keep an
    /// identity, up to dihedral maps of that cycle (restricted to the ones
    /// preserving the braided matching when `parity` is set). Without a
    /// cycle every vertex is anonymous. Mirror images are identified.
    pub fn canonical_form(&self, fixed_cycle: Option<&[VertexId]>, parity: bool) -> String {
        self.canonical_form_oriented(fixed_cycle, parity, true)
    }

    /// As [`canonical_form`](Self::canonical_form), optionally keeping
    /// mirror images apart.
    pub fn canonical_form_oriented(
        &self,
        fixed_cycle: Option<&[VertexId]>,
        parity: bool,
        quotient_mirror: bool,
    ) -> String {
        let maps = self.cycle_token_maps(fixed_cycle, parity);
        self.canonical_with(&maps, quotient_mirror)
    }

    fn cycle_token_maps(&self, fixed_cycle: Option<&[VertexId]>, parity: bool) -> Vec<Vec<u32>> {
        let n = self.vertex_count();
        let Some(cycle) = fixed_cycle else {
            return vec![vec![ANON; n]];
        };
        let group = if parity && cycle.len() == 10 {
            braided_cycle_maps()
        } else {
            cycle_maps(cycle.len())
        };
        group
            .iter()
            .map(|m| {
                let mut t = vec![ANON; n];
                for (j, &v) in cycle.iter().enumerate() {
                    t[v as usize] = m[j];
                }
                t
            })
            .collect()
    }

    /// Short stable digest of a canonical string, for file names.
    pub fn canonical_hash(form: &str) -> String {
        let digest = Sha256::digest(form.as_bytes());
        hex::encode(&digest[..12])
    }

    fn canonical_with(&self, maps: &[Vec<u32>], quotient_mirror: bool) -> String {
        if self.dart_count() == 0 {
            let mut placed: Vec<u32> = Vec::new();
            let mut best: Option<Vec<u32>> = None;
            for m in maps {
                placed.clear();
                placed.extend(self.placed_vertices().iter().map(|&v| m[v as usize]));
                placed.sort_unstable();
                if best.as_ref().is_none_or(|b| placed < *b) {
                    best = Some(placed.clone());
                }
            }
            return format!("empty:{:?}", best.unwrap_or_default());
        }
        let orientations: &[bool] = if quotient_mirror {
            &[false, true]
        } else {
            &[false]
        };
        let mut best: Option<Vec<u32>> = None;
        let mut buf = Vec::new();
        let mut scratch = Scratch::new(self);
        for tokens in maps {
            for start in self.start_darts(tokens) {
                for &mirror in orientations {
                    buf.clear();
                    self.serialize(
                        start,
                        mirror,
                        tokens,
                        &mut scratch,
                        &mut buf,
                        best.as_deref(),
                    );
                    if best.as_ref().is_none_or(|b| buf < *b) {
                        best = Some(buf.clone());
                    }
                }
            }
        }
        let best = best.unwrap_or_default();
        let mut s = String::with_capacity(best.len() * 3);
        for (i, t) in best.iter().enumerate() {
            if i > 0 {
                s.push('.');
            }
            if *t == ANON {
                s.push('*');
            } else {
                s.push_str(&t.to_string());
            }
        }
        s
    }

    /// Darts at the real vertices with the smallest (token, degree) key.
    fn start_darts(&self, tokens: &[u32]) -> Vec<DartId> {
        let mut best_key = (u32::MAX, usize::MAX);
        let mut nodes = Vec::new();
        for x in 0..self.node_count() as u32 {
            let NodeKind::Vertex(v) = self.node_kind(x) else {
                continue;
            };
            let key = (tokens[v as usize], usize::MAX - self.node_degree(x));
            if key < best_key {
                best_key = key;
                nodes.clear();
            }
            if key == best_key {
                nodes.push(x);
            }
        }
        if nodes.is_empty() {
            // Only reachable for degenerate drawings without real vertices.
            return (0..self.dart_count() as DartId).collect();
        }
        nodes.into_iter().flat_map(|x| self.rotation(x)).collect()
    }

    /// Appends the serialization from `start` to `out`. Stops early once
    /// the prefix exceeds `bound`.
    fn serialize(
        &self,
        start: DartId,
        mirror: bool,
        tokens: &[u32],
        s: &mut Scratch,
        out: &mut Vec<u32>,
        bound: Option<&[u32]>,
    ) {
        s.reset();
        let step = |d: DartId| if mirror { self.prev(d) } else { self.next(d) };
        let mut queue: Vec<u32> = Vec::with_capacity(self.node_count());
        let root = self.origin(start);
        s.number[root as usize] = 0;
        s.entry[root as usize] = start;
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            match self.node_kind(x) {
                NodeKind::Vertex(v) => {
                    out.push(1);
                    out.push(tokens[v as usize]);
                }
                NodeKind::Crossing(..) => out.push(2),
                NodeKind::Junction => out.push(3),
            }
            let entry = s.entry[x as usize];
            out.push(self.node_degree(x) as u32);
            let mut d = entry;
            loop {
                let t = self.twin(d);
                let y = self.origin(t);
                if s.number[y as usize] == NIL {
                    s.number[y as usize] = queue.len() as u32;
                    s.entry[y as usize] = t;
                    queue.push(y);
                }
                // position of the twin in y's rotation, counted from y's entry
                let mut pos = 0u32;
                let mut c = s.entry[y as usize];
                while c != t {
                    c = step(c);
                    pos += 1;
                }
                let e = self.edge(self.dart_edge(d));
                let flags = e.budget() as u32 | (e.uncrossable as u32) << 2 | (e.spoke as u32) << 3;
                out.push(s.number[y as usize]);
                out.push(pos);
                out.push(flags);
                d = step(d);
                if d == entry {
                    break;
                }
            }
            if let Some(b) = bound {
                let n = out.len().min(b.len());
                if out[..n] > b[..n] {
                    return;
                }
            }
        }
        // Unreached nodes (other components) are not expected in valid
        // drawings; mark their count so such drawings never collide.
        out.push(u32::MAX - (self.node_count() - queue.len()) as u32);
    }
}

struct Scratch {
    number: Vec<u32>,
    entry: Vec<DartId>,
}

impl Scratch {
    fn new(d: &Drawing) -> Scratch {
        Scratch {
            number: vec![NIL; d.node_count()],
            entry: vec![NIL; d.node_count()],
        }
    }

    fn reset(&mut self) {
        self.number.fill(NIL);
        self.entry.fill(NIL);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_group_sizes() {
        assert_eq!(cycle_maps(10).len(), 20);
        let b = braided_cycle_maps();
        assert_eq!(b.len(), 10);
        // identity and the even rotations are in; odd rotations are not
        assert!(b.contains(&(0..10).collect::<Vec<u32>>()));
        assert!(b.contains(&(0..10).map(|j| (j + 2) % 10).collect::<Vec<u32>>()));
        assert!(!b.contains(&(0..10).map(|j| (j + 1) % 10).collect::<Vec<u32>>()));
        // reflections j -> c - j with c odd
        for c in [1u32, 3, 5, 7, 9] {
            assert!(b.contains(&(0..10).map(|j| (c + 10 - j) % 10).collect::<Vec<u32>>()));
        }
    }

    #[test]
    fn cycle_maps_are_permutations() {
        for m in cycle_maps(7) {
            let mut s = m.clone();
            s.sort_unstable();
            assert_eq!(s, (0..7).collect::<Vec<u32>>());
        }
    }
}
