//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use kplane::Drawing;

/// Number of labeled simple 2-plane drawings of a connected graph on the
/// sphere, mirror images counted apart. Every set of crossing pairs and
/// every order of crossings along an edge is planarized, and every rotation
/// system of the planarization is kept when it has genus zero.
pub fn brute_force_drawings(n: usize, edges: &[(u32, u32)]) -> usize {
    let m = edges.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            let (p, q) = (edges[a], edges[b]);
            p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
        })
        .collect();
    let mut total = 0;
    for mask in 0u32..(1 << pairs.len()) {
        let chosen: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let mut on_edge = vec![Vec::new(); m];
        for (c, &(a, b)) in chosen.iter().enumerate() {
            on_edge[a].push(c);
            on_edge[b].push(c);
        }
        if on_edge.iter().any(|l| l.len() > 2) {
            continue;
        }
        let twos: Vec<usize> = (0..m).filter(|&e| on_edge[e].len() == 2).collect();
        for flips in 0u32..(1 << twos.len()) {
            let mut order = on_edge.clone();
            for (i, &e) in twos.iter().enumerate() {
                if flips >> i & 1 == 1 {
                    order[e].reverse();
                }
            }
            total += planar_rotations(n, edges, &chosen, &order);
        }
    }
    total
}

/// Genus-zero rotation systems of the planarization given by the crossing
/// pairs and the order of crossings along each edge.
fn planar_rotations(
    n: usize,
    edges: &[(u32, u32)],
    chosen: &[(usize, usize)],
    order: &[Vec<usize>],
) -> usize {
    // nodes: vertices, then crossings; darts 2s and 2s+1 form segment s
    let nodes = n + chosen.len();
    let mut tail = Vec::new();
    // per crossing: (edge, dart leaving towards the edge's first end or last end)
    let mut at_crossing: Vec<Vec<(usize, bool, usize)>> = vec![Vec::new(); chosen.len()];
    for (e, &(u, v)) in edges.iter().enumerate() {
        let mut path = vec![u as usize];
        path.extend(order[e].iter().map(|&c| n + c));
        path.push(v as usize);
        for w in path.windows(2) {
            let s = tail.len();
            tail.push(w[0]);
            tail.push(w[1]);
            if w[0] >= n {
                at_crossing[w[0] - n].push((e, true, s));
            }
            if w[1] >= n {
                at_crossing[w[1] - n].push((e, false, s + 1));
            }
        }
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (d, &t) in tail.iter().enumerate() {
        out[t].push(d);
    }
    // choices of cyclic order per node
    let mut options: Vec<Vec<Vec<usize>>> = Vec::with_capacity(nodes);
    for x in 0..nodes {
        if x < n {
            options.push(cyclic_orders(&out[x]));
        } else {
            let c = &at_crossing[x - n];
            let (a, b) = chosen[x - n];
            let find = |e: usize, fwd: bool| c.iter().find(|t| t.0 == e && t.1 == fwd).unwrap().2;
            let (a0, a1, b0, b1) = (find(a, false), find(a, true), find(b, false), find(b, true));
            options.push(vec![vec![a0, b0, a1, b1], vec![a0, b1, a1, b0]]);
        }
    }
    let darts = tail.len();
    let target = 2 + darts / 2;
    let mut count = 0;
    let mut pick = vec![0usize; nodes];
    loop {
        let mut next = vec![0usize; darts];
        for (x, opts) in options.iter().enumerate() {
            let r = &opts[pick[x]];
            for i in 0..r.len() {
                next[r[i]] = r[(i + 1) % r.len()];
            }
        }
        let mut seen = vec![false; darts];
        let mut faces = 0;
        for s in 0..darts {
            if seen[s] {
                continue;
            }
            faces += 1;
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                d = next[d ^ 1];
            }
        }
        if nodes + faces == target {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == nodes {
                return count;
            }
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Cyclic orders of `items`, each listed once with the first item fixed.
fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 2 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    let mut rest = items[1..].to_vec();
    permute(&mut rest, 0, &mut |p| {
        let mut r = vec![items[0]];
        r.extend_from_slice(p);
        out.push(r);
    });
    out
}

fn permute(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, f);
        v.swap(i, j);
    }
}

/// Twin involution, origin/head consistency and Euler's formula, recomputed
/// from the raw dart operations.
pub fn dcel_invariants(d: &Drawing) -> Result<(), String> {
    let darts = d.dart_count() as u32;
    for x in 0..darts {
        let t = d.twin(x);
        if t == x || d.twin(t) != x {
            return Err(format!("twin of dart {x} is not an involution"));
        }
        if d.head(x) != d.origin(t) || d.dart_edge(x) != d.dart_edge(t) {
            return Err(format!("dart {x} and its twin disagree"));
        }
        if d.prev(d.next(x)) != x || d.origin(d.next(x)) != d.origin(x) {
            return Err(format!("rotation at dart {x} is broken"));
        }
    }
    let mut seen = vec![false; darts as usize];
    let mut faces = 0i64;
    for s in 0..darts {
        if seen[s as usize] {
            continue;
        }
        faces += 1;
        let mut x = s;
        while !seen[x as usize] {
            seen[x as usize] = true;
            x = d.face_next(x);
        }
    }
    let nodes = (0..d.node_count() as u32)
        .filter(|&x| d.node_degree(x) > 0)
        .count() as i64;
    let chi = nodes - darts as i64 / 2 + faces.max(1);
    if darts > 0 && chi != 2 {
        return Err(format!("Euler characteristic {chi}"));
    }
    Ok(())
}
