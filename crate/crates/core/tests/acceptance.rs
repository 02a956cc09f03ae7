//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines are always shown.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use kplane::audit::{admissible_drawings, assessments, check_ledger, resolve_claims};
use kplane::enumerate::{edge_bound, enumerate_drawings, k_planarity};
use kplane::graphs::{
    are_isomorphic, automorphisms, gen_complete, gen_gadget_x, gen_gk, gen_k9_minus, graph_classes,
};
use kplane::pipeline::{
    base_case, extend_with_cycle, reduce_drawing, run_pipeline, ExtendOptions, PipelineOptions,
};
use kplane::saturation::{
    addable_edges, canonical_g2_drawing, doubly_crossed_separation, drawing_saturated,
    graph_maximal,
};
use kplane::{Decision, Dedup, EnumerateOptions, LabeledGraph, Outcome};
use rand::seq::SliceRandom;
use rand::SeedableRng;

/// Exact counts pinned by the criteria.
const GADGET_DRAWINGS: usize = 32;
const SEPARATION_SAMPLES: usize = 20;
const SAMPLE_SEED: u64 = 2;
const MAX_ORACLE_EDGES: usize = 6;

type Verdict = Result<String, String>;

fn edge_set(g: &LabeledGraph) -> BTreeSet<(String, String)> {
    g.edges()
        .iter()
        .map(|e| {
            let (a, b) = (g.label(e.u).to_string(), g.label(e.v).to_string());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn gadget_uniqueness() -> Verdict {
    let x = gen_gadget_x();
    let mut opts = EnumerateOptions::new(2, Dedup::Labeled);
    opts.parallel = true;
    let r = enumerate_drawings(&x, &opts).map_err(|e| e.to_string())?;
    check(r.outcome == Outcome::Complete, "search incomplete")?;
    check(
        r.drawings.len() == GADGET_DRAWINGS,
        format!("{} labeled drawings", r.drawings.len()),
    )?;
    for d in &r.drawings {
        check(d.validate().is_empty(), "invalid drawing")?;
        check(drawing_saturated(d, 2), "unsaturated drawing")?;
    }
    let aut = automorphisms(&x);
    let classes: BTreeSet<String> = r
        .drawings
        .iter()
        .map(|d| d.canonical_form_under(&aut))
        .collect();
    check(
        classes.len() == 1,
        format!("{} classes under Aut(X)", classes.len()),
    )?;
    Ok(format!(
        "{} labeled drawings, all saturated, one class under {} automorphisms",
        r.drawings.len(),
        aut.len()
    ))
}

fn k9_robustness() -> Verdict {
    let k9 = gen_complete(9);
    check(
        edge_bound(9, 2).is_some_and(|b| k9.m() > b),
        "K9 passes the edge bound",
    )?;
    let t = Instant::now();
    check(
        k_planarity(&k9, 2, None).map_err(|e| e.to_string())? == Decision::No,
        "K9 accepted",
    )?;
    check(
        t.elapsed().as_secs() < 5,
        "K9 not rejected by the pre-filter",
    )?;
    // one removal set per isomorphism class of graphs with 1 to 3 edges
    let removals: [&[(u32, u32)]; 8] = [
        &[(0, 1)],
        &[(0, 1), (1, 2)],
        &[(0, 1), (2, 3)],
        &[(0, 1), (1, 2), (0, 2)],
        &[(0, 1), (1, 2), (2, 3)],
        &[(0, 1), (0, 2), (0, 3)],
        &[(0, 1), (1, 2), (3, 4)],
        &[(0, 1), (2, 3), (4, 5)],
    ];
    let mut shapes: Vec<LabeledGraph> = Vec::new();
    for r in removals {
        let mut h = LabeledGraph::with_vertices(9);
        for &(u, v) in r {
            h.add_edge(u, v, false, kplane::EdgeTag::Plain).unwrap();
        }
        check(
            !shapes
                .iter()
                .any(|s| s.m() == h.m() && are_isomorphic(s, &h)),
            "duplicate removal class",
        )?;
        shapes.push(h);
        let g = gen_k9_minus(r).map_err(|e| e.to_string())?;
        let d = k_planarity(&g, 2, None).map_err(|e| e.to_string())?;
        check(d == Decision::No, format!("K9 minus {r:?}: {d:?}"))?;
    }
    Ok(format!(
        "K9 rejected by 36 > 35, all {} removal classes not 2-planar",
        removals.len()
    ))
}

fn construction_counts() -> Verdict {
    for k in 2..=10u32 {
        let g = gen_gk(k).map_err(|e| e.to_string())?;
        let (n, m) = (10 * k as usize + 140, 20 * k as usize + 630);
        check(
            g.n() == n && g.m() == m,
            format!("k={k}: n={} m={}", g.n(), g.m()),
        )?;
    }
    Ok("n = 10k+140 and m = 20k+630 for k = 2..10".into())
}

fn canonical_drawing_saturated() -> Verdict {
    let d = canonical_g2_drawing().map_err(|e| e.to_string())?;
    check(d.validate().is_empty(), "invalid drawing")?;
    let g = d.to_graph();
    let want = gen_gk(2).map_err(|e| e.to_string())?;
    check(edge_set(&g) == edge_set(&want), "drawn graph is not G_2")?;
    let add = addable_edges(&d, 2);
    check(add.is_empty(), format!("{} addable edges", add.len()))?;
    let mut pairs = g.non_edges();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    pairs.shuffle(&mut rng);
    for &(u, v) in pairs.iter().take(SEPARATION_SAMPLES) {
        check(
            doubly_crossed_separation(&d, u, v),
            format!("{} and {} not separated", g.label(u), g.label(v)),
        )?;
    }
    Ok(format!(
        "G_2 drawing saturated, {SEPARATION_SAMPLES} sampled pairs separated"
    ))
}

/// The reduced key of the drawing whose second cycle is nested with the
/// matching uncrossed.
fn nested_class() -> Result<(String, kplane::pipeline::PartialDrawing), String> {
    let ext = extend_with_cycle(&base_case(), true, &ExtendOptions::default())
        .map_err(|e| e.to_string())?;
    let p = ext.children.into_iter().next().ok_or("no nested drawing")?;
    let mut d = p.drawing.clone();
    for e in 0..d.edge_count() as u32 {
        let s = d.edge(e);
        if s.u >= 10 && s.v >= 10 && s.u < 20 && s.v < 20 {
            d.make_crossable(e);
        }
    }
    let reduced = reduce_drawing(d, &p.frontier, 2, false)
        .map_err(|e| e.to_string())?
        .ok_or("nested drawing is dead")?;
    Ok((reduced.key.clone(), reduced))
}

fn pipeline_desk_run() -> Verdict {
    let run = run_pipeline(&PipelineOptions {
        max_iter: Some(2),
        parallel: true,
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let rep = &run.report;
    check(run.drawings.len() > 1, "no drawing beyond the base case")?;
    for p in &run.drawings {
        check(p.drawing.validate().is_empty(), "invalid reduced drawing")?;
    }
    let (key, nested) = nested_class()?;
    check(
        run.drawings.iter().any(|p| p.key == key),
        "nested class missing",
    )?;
    check(rep.final_hits.contains(&key), "nested class is not a hit")?;
    let fin = extend_with_cycle(
        &nested,
        true,
        &ExtendOptions {
            limit: Some(1),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    check(
        !fin.children.is_empty(),
        "nested class has no final extension",
    )?;
    let per: Vec<String> = rep
        .iterations
        .iter()
        .map(|i| format!("{}:{}+{}", i.iteration, i.new_drawings, i.final_hits))
        .collect();
    Ok(format!(
        "{} reduced drawings ({} oriented), {} hits, iterations {}",
        rep.discovered,
        rep.discovered_oriented,
        rep.final_hits.len(),
        per.join(" ")
    ))
}

fn maximal_fixtures() -> Result<Vec<LabeledGraph>, String> {
    let mut out = Vec::new();
    for n in [5, 6] {
        for g in graph_classes(n) {
            if graph_maximal(&g, 2, None).map_err(|e| e.to_string())? == Decision::Yes {
                out.push(g);
            }
        }
    }
    Ok(out)
}

fn density_small_n(maximal: &[LabeledGraph]) -> Verdict {
    check(!maximal.is_empty(), "no maximal graph found")?;
    for g in maximal {
        check(
            g.m() >= 2 * g.n(),
            format!("n={} m={} below 2n", g.n(), g.m()),
        )?;
    }
    check(
        maximal.iter().any(|g| g.n() == 5 && g.m() == 10),
        "K5 missing",
    )?;
    let sizes: Vec<String> = maximal
        .iter()
        .map(|g| format!("(n={}, m={})", g.n(), g.m()))
        .collect();
    Ok(format!(
        "{} classes swept, maximal: {}",
        graph_classes(5).len() + graph_classes(6).len(),
        sizes.join(" ")
    ))
}

fn charging_scheme(maximal: &[LabeledGraph]) -> Verdict {
    let mut drawings = 0;
    let mut low = 0;
    for g in maximal {
        let (ds, outcome) = admissible_drawings(g, None).map_err(|e| e.to_string())?;
        check(outcome == Outcome::Complete, "admissible search incomplete")?;
        check(!ds.is_empty(), "no admissible drawing")?;
        for d in &ds {
            let led = assessments(d).map_err(|e| e.to_string())?;
            let led = resolve_claims(&led).map_err(|e| e.to_string())?;
            let c = check_ledger(&led);
            check(c.double_claims == 0, "doubly claimed halfedge")?;
            check(c.quota_unmet.is_empty(), "quota unmet")?;
            check(c.max_assessors <= 2, "edge assessed by three vertices")?;
            check(
                c.degree_five_shared.is_empty(),
                "degree-5 vertex serves two low-degree vertices",
            )?;
            low += led.quota.len();
            drawings += 1;
        }
    }
    Ok(format!(
        "{drawings} admissible drawings, {low} low-degree vertices"
    ))
}

fn engine_soundness() -> Verdict {
    let mut graphs = 0;
    let mut drawings = 0;
    for n in 2..=MAX_ORACLE_EDGES + 1 {
        for g in graph_classes(n) {
            if g.m() > MAX_ORACLE_EDGES || !g.is_connected() {
                continue;
            }
            let edges: Vec<(u32, u32)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
            let want = common::brute_force_drawings(n, &edges);
            let r = enumerate_drawings(&g, &EnumerateOptions::new(2, Dedup::Labeled))
                .map_err(|e| e.to_string())?;
            check(
                r.drawings.len() == want,
                format!(
                    "n={n} edges {edges:?}: engine {} oracle {want}",
                    r.drawings.len()
                ),
            )?;
            for d in &r.drawings {
                common::dcel_invariants(d)?;
                check(d.validate().is_empty(), "invalid drawing")?;
            }
            graphs += 1;
            drawings += r.drawings.len();
        }
    }
    Ok(format!(
        "{graphs} connected graphs, {drawings} drawings match the oracle"
    ))
}

fn report(id: u32, name: &str, f: impl FnOnce() -> Verdict) -> bool {
    let t = Instant::now();
    let r = f();
    let secs = t.elapsed().as_secs_f64();
    match &r {
        Ok(msg) => println!("criterion {id} ({name}): PASS [{secs:.1}s] {msg}"),
        Err(msg) => println!("criterion {id} ({name}): FAIL [{secs:.1}s] {msg}"),
    }
    r.is_ok()
}

fn main() {
    let mut ok = true;
    ok &= report(1, "gadget uniqueness", gadget_uniqueness);
    ok &= report(2, "K9 robustness", k9_robustness);
    ok &= report(3, "construction counts", construction_counts);
    ok &= report(
        4,
        "canonical drawing saturated",
        canonical_drawing_saturated,
    );
    ok &= report(5, "pipeline desk run", pipeline_desk_run);
    let maximal = maximal_fixtures();
    ok &= report(6, "density at small n", || {
        density_small_n(maximal.as_ref()?)
    });
    ok &= report(7, "charging scheme", || charging_scheme(maximal.as_ref()?));
    ok &= report(8, "engine soundness", engine_soundness);
    if !ok {
        std::process::exit(1);
    }
}
