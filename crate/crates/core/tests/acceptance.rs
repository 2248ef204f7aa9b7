//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use depthcut::arrangement::build_segment_map;
use depthcut::baselines::{acyclic_under_rotations, bsp_standalone, prism_decompose};
use depthcut::cutter::{CutParams, CutPlan, DEFAULT_C_TARGET};
use depthcut::depth::{audit_pair, compare_pieces, find_cycle, pieces_from_triangles, build_relation, CycleResult, DepthRelation, Piece};
use depthcut::geom::polygon::{area2, contains, contains_strict, intersect, Lin2};
use depthcut::geom::{BBox, Plane, Point2, Point3, Scene, Triangle};
use depthcut::num::{dyadic, parse_rational, q, qi, sign, Q};
use depthcut::partition::{decompose_cells, edge_segments, Located};
use depthcut::poly::{level, restrict_to_plane, resultant_z, xyz, Poly, TriPoly};
use depthcut::scenes::experiment::{run_strategy, RunOutput, Strategy};
use depthcut::scenes::{gen_grid, gen_random_disjoint, shipped_scenes};
use depthcut::slices::{
    convex_chunk_graph, order_slices, replay_consistent, replay_order, voxel_chunk_count, voxel_chunk_graph, SliceRecord,
    VoxelSlice,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const DEGREES: [usize; 3] = [2, 3, 4];
const PAIR_COUNT: usize = 1000;
const PAIR_SAMPLES: usize = 1000;
const ROTATIONS: usize = 16;
const SEGMENT_SAMPLES: i64 = 48;
const CELL_SAMPLES: usize = 500;
const MAX_ORACLE_NODES: usize = 12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Run {
    scene: String,
    strategy: Strategy,
    degree: usize,
    result: Result<RunOutput, String>,
}

fn run_all(scenes: &[(String, Scene)]) -> Vec<Run> {
    let mut jobs: Vec<(usize, Strategy, usize)> = Vec::new();
    for i in 0..scenes.len() {
        jobs.push((i, Strategy::Prism, 0));
        jobs.push((i, Strategy::Bsp, 0));
        for d in DEGREES {
            jobs.push((i, Strategy::Partition, d));
        }
    }
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(2).min(8);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let out = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(&(i, st, d)) = jobs.get(k) else { break };
                let params = CutParams::new(d.max(1));
                let result = run_strategy(&scenes[i].1, st, &params);
                out.lock().unwrap().push((k, Run { scene: scenes[i].0.clone(), strategy: st, degree: d, result }));
            });
        }
    });
    let mut runs = out.into_inner().unwrap();
    runs.sort_by_key(|r| r.0);
    runs.into_iter().map(|r| r.1).collect()
}

fn label(r: &Run) -> String {
    match r.strategy {
        Strategy::Partition => format!("{}/partition D={}", r.scene, r.degree),
        s => format!("{}/{}", r.scene, s.name()),
    }
}

fn plans(runs: &[Run]) -> impl Iterator<Item = (&Run, &CutPlan)> {
    runs.iter().filter_map(|r| r.result.as_ref().ok().and_then(|o| o.plan.as_ref()).map(|p| (r, p)))
}

fn criterion_1(runs: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    for r in runs {
        match &r.result {
            Ok(o) if o.acyclic => {}
            Ok(_) => bad.push(format!("{} cyclic", label(r))),
            Err(e) => bad.push(format!("{}: {e}", label(r))),
        }
    }
    let detail = if bad.is_empty() { format!("{} runs certified acyclic", runs.len()) } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

fn synthetic_slices() -> Vec<SliceRecord> {
    // Three disjoint, nearly horizontal planes spanning a box cell.
    let square = vec![Point2::new(qi(0), qi(0)), Point2::new(qi(4), qi(0)), Point2::new(qi(4), qi(4)), Point2::new(qi(0), qi(4))];
    (0..3)
        .map(|i| SliceRecord {
            id: i,
            owner: i,
            cell: 0,
            plane: Plane::new(q(1, 50 + i as i64), q(-1, 70), qi(i as i64)),
            poly: square.clone(),
        })
        .collect()
}

fn criterion_2(runs: &[Run]) -> Outcome {
    let mut rows = 0;
    let mut bad = Vec::new();
    for (r, plan) in plans(runs) {
        for rep in &plan.slice_reports {
            rows += 1;
            if rep.non_disconnecting + rep.v != rep.e + rep.x {
                bad.push(format!("{} cell {}", label(r), rep.cell));
            }
        }
    }
    let slices = synthetic_slices();
    let chunks = convex_chunk_graph(&slices).expect("disjoint slices");
    let ord = order_slices(&chunks.graph).expect("forest");
    let counts = replay_order(&chunks.graph, &ord.order);
    let g = &chunks.graph;
    let mut present = BTreeSet::new();
    let mut recount_ok = chunks.recount(&present) == counts[0];
    for (k, &s) in ord.order.iter().enumerate() {
        present.insert(s);
        recount_ok &= chunks.recount(&present) == counts[k + 1];
    }
    let synthetic_ok = replay_consistent(&ord, &counts)
        && recount_ok
        && g.chunks == 4
        && ord.non_disconnecting.len() + g.v() == g.e() + g.x()
        && ord.non_disconnecting.is_empty();
    if !synthetic_ok {
        bad.push(format!("synthetic cell: chunks {} non-disconnecting {} replay {:?}", g.chunks, ord.non_disconnecting.len(), counts));
    }
    let detail = if bad.is_empty() { format!("{rows} cell reports plus a 3-slice synthetic cell") } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

fn pt(x: i64, y: i64) -> Point2 {
    Point2::new(qi(x), qi(y))
}

fn voxel_non_disconnecting(d: &depthcut::partition::CellDecomposition, cell: usize, slices: &[VoxelSlice]) -> Result<usize, String> {
    let g = voxel_chunk_graph(d, cell, slices).map_err(|e| e.to_string())?;
    let o = order_slices(&g).map_err(|e| e.to_string())?;
    let counts = replay_order(&g, &o.order);
    if !replay_consistent(&o, &counts) {
        return Err("replay".into());
    }
    let mut present = BTreeSet::new();
    for (k, &s) in o.order.iter().enumerate() {
        present.insert(s);
        if voxel_chunk_count(d, cell, slices, &present) != counts[k + 1] {
            return Err("re-flood disagrees with replay".into());
        }
    }
    Ok(o.non_disconnecting.len())
}

fn criterion_3() -> Outcome {
    let (x, y, z) = xyz();
    let ball = TriPoly::new(&(&(&x * &x) + &(&y * &y)) + &(&(&z * &z) - &Poly::one(3))).unwrap();
    let d = decompose_cells(&ball, &BBox::cube(2), &q(1, 16));
    let ball_nd = match d.locate_f64([0.01, 0.02, 0.03]) {
        Located::Cell(c) => {
            let big = vec![pt(-3, -3), pt(3, -3), pt(0, 3)];
            let s = VoxelSlice { plane: Plane::new(q(1, 10), Q::zero(), q(1, 3)), proj: big };
            voxel_non_disconnecting(&d, c, &[s])
        }
        _ => Err("ball centre not in a cell".into()),
    };
    let rho2 = &(&x * &x) + &(&y * &y);
    let inner = &(&rho2 + &(&z * &z)) + &Poly::constant(3, qi(3));
    let torus = TriPoly::new(&(&inner * &inner) - &rho2.scale(&qi(16))).unwrap();
    let bbox = BBox { lo: [qi(-4), qi(-4), qi(-2)], hi: [qi(4), qi(4), qi(2)] };
    let d = decompose_cells(&torus, &bbox, &q(1, 12));
    let torus_nd = match d.locate_f64([2.01, 0.02, 0.03]) {
        Located::Cell(c) => {
            let proj = vec![pt(0, -1), Point2::new(q(9, 2), qi(-1)), Point2::new(q(11, 5), qi(2))];
            let s = VoxelSlice { plane: Plane::new(Q::zero(), qi(4), Q::zero()), proj };
            voxel_non_disconnecting(&d, c, &[s])
        }
        _ => Err("torus tube not in a cell".into()),
    };
    let pass = ball_nd == Ok(0) && torus_nd == Ok(1);
    outcome(pass, format!("ball slice non-disconnecting {ball_nd:?} (want 0), torus meridian {torus_nd:?} (want 1)"))
}

fn sample_q(rng: &mut ChaCha8Rng, lo: &Q, hi: &Q) -> Q {
    lo + (hi - lo) * dyadic(rng.gen_range(0.0..1.0), 20)
}

fn criterion_4(runs: &[Run], scenes: &[(String, Scene)]) -> Outcome {
    let c_target = qi(DEFAULT_C_TARGET);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut worst_cw = Q::zero();
    let mut worst_c = Q::zero();
    let mut bad = Vec::new();
    for (r, plan) in plans(runs) {
        let scene = &scenes.iter().find(|s| s.0 == r.scene).unwrap().1;
        for node in &plan.nodes {
            let Some(part) = &node.partition else { continue };
            checked += 1;
            let a = &part.audit;
            let d = part.degree();
            let d2 = qi((d * d) as i64);
            if qi(a.max_crossings as i64) * &d2 > &c_target * qi(a.n as i64) {
                bad.push(format!("{} node {}: {} crossings, N {}", label(r), node.id, a.max_crossings, a.n));
            }
            if a.cell_count > d.pow(3) || a.c_w > Q::one() {
                bad.push(format!("{} node {}: {} cells", label(r), node.id, a.cell_count));
            }
            worst_cw = worst_cw.max(a.c_w.clone());
            worst_c = worst_c.max(a.measured_c.clone());
            // Sampled incidences must appear in the exact crossing table.
            let tris: Vec<&Triangle> = node.tris.iter().map(|&i| scene.get(i).unwrap()).collect();
            let segs = edge_segments(&tris, &node.region);
            if segs.len() != a.n {
                bad.push(format!("{} node {}: {} segments, audit has {}", label(r), node.id, segs.len(), a.n));
                continue;
            }
            for (i, s) in segs.iter().enumerate() {
                for k in 1..SEGMENT_SAMPLES {
                    let p = s.p.lerp(&s.q, &q(k, SEGMENT_SAMPLES));
                    let v: Vec<i8> = part.planes.iter().map(|pl| sign(&pl.height(&p)) as i8).collect();
                    if v.contains(&0) {
                        continue;
                    }
                    if !a.crossings.get(&v).is_some_and(|l| l.contains(&i)) {
                        bad.push(format!("{} node {}: segment {i} misses a sampled cell", label(r), node.id));
                        break;
                    }
                }
            }
            // Sampled sign vectors bound the exact cell count from below.
            let b = &node.region.bbox;
            let mut seen = BTreeSet::new();
            for _ in 0..CELL_SAMPLES {
                let p = Point3::new(sample_q(&mut rng, &b.lo[0], &b.hi[0]), sample_q(&mut rng, &b.lo[1], &b.hi[1]), sample_q(&mut rng, &b.lo[2], &b.hi[2]));
                if node.region.contains(&p) {
                    seen.insert(part.planes.iter().map(|pl| sign(&pl.height(&p)) as i8).collect::<Vec<_>>());
                }
            }
            if seen.len() > a.cell_count {
                bad.push(format!("{} node {}: sampled {} cells, exact {}", label(r), node.id, seen.len(), a.cell_count));
            }
        }
    }
    bad.truncate(8);
    let detail = if bad.is_empty() {
        format!(
            "{checked} partitions, max measured c {} <= {}, max C_W {} <= 1",
            depthcut::num::format_rational(&worst_c),
            DEFAULT_C_TARGET,
            depthcut::num::format_rational(&worst_cw)
        )
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty() && checked > 0, detail)
}

fn random_tri_proj(rng: &mut ChaCha8Rng) -> Vec<Point2> {
    loop {
        let p: Vec<Point2> = (0..3).map(|_| Point2::new(dyadic(rng.gen_range(0.0..1.0), 10), dyadic(rng.gen_range(0.0..1.0), 10))).collect();
        let a = area2(&p);
        if a > q(1, 50) {
            return p;
        }
        if a < -q(1, 50) {
            return vec![p[0].clone(), p[2].clone(), p[1].clone()];
        }
    }
}

fn random_plane(rng: &mut ChaCha8Rng) -> Plane {
    Plane::new(dyadic(rng.gen_range(-1.0..1.0), 8), dyadic(rng.gen_range(-1.0..1.0), 8), dyadic(rng.gen_range(-1.0..1.0), 8))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut pairs, mut label_bad, mut audit_bad) = (0, 0, 0);
    while pairs < PAIR_COUNT {
        let (pa, pb) = (random_tri_proj(&mut rng), random_tri_proj(&mut rng));
        let ov = intersect(&pa, &pb);
        if ov.len() < 3 || area2(&ov) <= Q::zero() {
            continue;
        }
        let (fa, fb) = (random_plane(&mut rng), random_plane(&mut rng));
        // Oracle: the sign of the height difference at the overlap vertices.
        let s: BTreeSet<i32> = ov.iter().map(|v| sign(&(fa.z_at(&v.x, &v.y) - fb.z_at(&v.x, &v.y)))).collect();
        if s.len() != 1 || s.contains(&0) {
            continue;
        }
        let a_lower = s.contains(&-1);
        pairs += 1;
        let a = Piece::new(0, 0, fa, pa);
        let b = Piece::new(1, 1, fb, pb);
        if compare_pieces(&a, &b).ok().flatten() != Some(a_lower) {
            label_bad += 1;
        }
        audit_bad += audit_pair(&a, &b, a_lower, PAIR_SAMPLES, &mut rng);
    }
    outcome(
        label_bad == 0 && audit_bad == 0,
        format!("{pairs} pairs x {PAIR_SAMPLES} samples: {label_bad} label and {audit_bad} sample disagreements"),
    )
}

fn baseline_constants() -> (Q, Q) {
    let text = include_str!("../baseline_constants.tsv");
    let get = |key: &str| {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .find_map(|l| l.split_once('\t').filter(|(k, _)| *k == key).and_then(|(_, v)| parse_rational(v.trim())))
            .unwrap_or_else(|| panic!("missing constant {key}"))
    };
    (get("C1"), get("C2"))
}

fn criterion_6() -> Outcome {
    let (c1, c2) = baseline_constants();
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    for k in 2..=6 {
        let scene = gen_grid(k).unwrap();
        let n = qi(scene.len() as i64);
        let prism = match prism_decompose(&scene) {
            Ok(p) => p.pieces,
            Err(e) => {
                bad.push(format!("grid{k} prism: {e}"));
                continue;
            }
        };
        let bsp = bsp_standalone(&scene).pieces;
        if qi(prism.len() as i64) > &c1 * &n * &n * &n {
            bad.push(format!("grid{k}: prism {} pieces", prism.len()));
        }
        if qi(bsp.len() as i64) > &c2 * &n * &n {
            bad.push(format!("grid{k}: bsp {} pieces", bsp.len()));
        }
        for (name, p) in [("prism", &prism), ("bsp", &bsp)] {
            match acyclic_under_rotations(p, ROTATIONS, k as u64) {
                Ok((c, ok)) if c == ROTATIONS && ok == c => {}
                Ok((c, ok)) => bad.push(format!("grid{k} {name}: {ok}/{c} views acyclic")),
                Err(e) => bad.push(format!("grid{k} {name}: {e}")),
            }
        }
        rows.push(format!("k={k} prism {} bsp {}", prism.len(), bsp.len()));
    }
    let detail = if bad.is_empty() { format!("{}; {ROTATIONS} views each", rows.join(", ")) } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

/// Shortest simple cycle by exhaustive path enumeration, as a node list.
fn brute_shortest_cycle(adj: &[Vec<usize>]) -> Option<usize> {
    fn dfs(adj: &[Vec<usize>], start: usize, v: usize, len: usize, on: &mut [bool], best: &mut Option<usize>) {
        for &w in &adj[v] {
            if w == start {
                if best.map_or(true, |b| len < b) {
                    *best = Some(len);
                }
            } else if w > start && !on[w] && best.map_or(true, |b| len + 1 < b) {
                on[w] = true;
                dfs(adj, start, w, len + 1, on, best);
                on[w] = false;
            }
        }
    }
    let mut best = None;
    let mut on = vec![false; adj.len()];
    for s in 0..adj.len() {
        on[s] = true;
        dfs(adj, s, s, 1, &mut on, &mut best);
        on[s] = false;
    }
    best
}

fn check_cycle_oracle(rel: &DepthRelation) -> Result<(), String> {
    let adj = rel.adjacency();
    let brute = brute_shortest_cycle(&adj);
    match (find_cycle(rel), brute) {
        (CycleResult::Acyclic(order), None) => {
            let mut pos = vec![usize::MAX; rel.len()];
            for (k, &v) in order.iter().enumerate() {
                pos[v] = k;
            }
            if order.len() != rel.len() || pos.contains(&usize::MAX) {
                return Err("order is not a permutation".into());
            }
            if rel.edges.iter().any(|&(i, j)| pos[i] >= pos[j]) {
                return Err("order violates an edge".into());
            }
            Ok(())
        }
        (CycleResult::Cycle(c), Some(len)) => {
            let distinct: BTreeSet<usize> = c.iter().copied().collect();
            if distinct.len() != c.len() || (0..c.len()).any(|k| !rel.has_edge(c[k], c[(k + 1) % c.len()])) {
                return Err(format!("invalid witness {c:?}"));
            }
            if c.len() < len {
                return Err(format!("witness shorter than the shortest cycle {len}"));
            }
            Ok(())
        }
        (CycleResult::Acyclic(_), Some(len)) => Err(format!("missed a {len}-cycle")),
        (CycleResult::Cycle(c), None) => Err(format!("reported cycle {c:?} in an acyclic graph")),
    }
}

fn criterion_7(scenes: &[(String, Scene)]) -> Outcome {
    let mut graphs: Vec<(String, DepthRelation)> = Vec::new();
    for (name, s) in scenes {
        let pieces = pieces_from_triangles(&s.triangles);
        for (w, win) in pieces.chunks(MAX_ORACLE_NODES).enumerate() {
            graphs.push((format!("{name} window {w}"), build_relation(win).unwrap()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in 0..300 {
        let n = rng.gen_range(1..=MAX_ORACLE_NODES);
        let p = rng.gen_range(0.02..0.35);
        let mut rel = DepthRelation::new((0..n).collect());
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(p) {
                    rel.edges.insert((i, j));
                }
            }
        }
        graphs.push((format!("random digraph {g}"), rel));
    }
    let mut bad = Vec::new();
    let mut cyclic = 0;
    for (name, rel) in &graphs {
        if brute_shortest_cycle(&rel.adjacency()).is_some() {
            cyclic += 1;
        }
        if let Err(e) = check_cycle_oracle(rel) {
            bad.push(format!("{name}: {e}"));
        }
    }
    let detail = if bad.is_empty() { format!("{} graphs ({cyclic} cyclic) agree with enumeration", graphs.len()) } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Q::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let v = &m[c][k] * &f;
                m[r][k] -= v;
            }
        }
    }
    d
}

/// Coefficients of `f(x, y, z)` in `z`, lowest first, at a fixed `(x, y)`.
fn z_coeffs(f: &Poly, x: &Q, y: &Q) -> Vec<Q> {
    let u = f.eval_partial(&[Some(x.clone()), Some(y.clone()), None]);
    (0..=f.degree_in(2)).map(|k| u.coeff(&[0, 0, k])).collect()
}

fn sylvester_det(f: &[Q], g: &[Q]) -> Q {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::new();
    for i in 0..n {
        let mut r = vec![Q::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![Q::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    det(rows)
}

fn random_tripoly(rng: &mut ChaCha8Rng, zdeg: u32) -> TriPoly {
    let mut terms = vec![(vec![0, 0, zdeg], qi(rng.gen_range(1..4)))];
    for _ in 0..6 {
        let e = vec![rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..zdeg)];
        terms.push((e, qi(rng.gen_range(-5..=5))));
    }
    TriPoly::from_terms(terms).unwrap()
}

fn segment_map_failures(rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut bad = Vec::new();
    for trial in 0..30 {
        let region = vec![pt(0, 0), pt(8, 0), pt(3, 7)];
        let segs: Vec<(Point2, Point2)> = (0..rng.gen_range(1..8))
            .map(|_| {
                let r = |rng: &mut ChaCha8Rng| Point2::new(dyadic(rng.gen_range(-1.0..9.0), 6), dyadic(rng.gen_range(-1.0..8.0), 6));
                (r(rng), r(rng))
            })
            .filter(|(a, b)| a != b)
            .collect();
        let map = match build_segment_map(&region, &segs, trial) {
            Ok(m) => m,
            Err(e) => {
                bad.push(format!("map {trial}: {e}"));
                continue;
            }
        };
        let total: Q = map.trapezoids.iter().map(|t| area2(&t.poly)).sum();
        if total != area2(&region) || map.trapezoids.iter().any(|t| area2(&t.poly) <= Q::zero()) {
            bad.push(format!("map {trial}: areas do not tile"));
        }
        for _ in 0..200 {
            let p = depthcut::depth::random_interior_point(&region, rng);
            let inside = map.trapezoids.iter().filter(|t| contains_strict(&t.poly, &p)).count();
            let touching = map.trapezoids.iter().filter(|t| contains(&t.poly, &p)).count();
            if inside > 1 || touching == 0 {
                bad.push(format!("map {trial}: point located {inside} times"));
                break;
            }
        }
        for t in &map.trapezoids {
            for (a, b) in &segs {
                if segment_enters(&t.poly, a, b) {
                    bad.push(format!("map {trial}: a segment crosses a trapezoid"));
                }
            }
        }
    }
    bad
}

/// Whether the open segment `ab` meets the interior of the convex polygon.
fn segment_enters(poly: &[Point2], a: &Point2, b: &Point2) -> bool {
    let (mut lo, mut hi) = (Q::zero(), Q::one());
    let n = poly.len();
    for i in 0..n {
        let h = Lin2::left_of(&poly[i], &poly[(i + 1) % n]);
        let (fa, fb) = (h.eval(a), h.eval(b));
        let slope = &fb - &fa;
        if slope.is_zero() {
            if fa <= Q::zero() {
                return false;
            }
            continue;
        }
        let t = -&fa / &slope;
        if slope > Q::zero() {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
    }
    lo < hi
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    for trial in 0..20 {
        let f = random_tripoly(&mut rng, 1 + trial % 3);
        let g = random_tripoly(&mut rng, 1 + (trial / 3) % 2);
        let r = resultant_z(&f, &g);
        for _ in 0..10 {
            let (x, y) = (q(rng.gen_range(-20..20), rng.gen_range(1..7)), q(rng.gen_range(-20..20), rng.gen_range(1..7)));
            let want = sylvester_det(&z_coeffs(f.poly(), &x, &y), &z_coeffs(g.poly(), &x, &y));
            let got = r.as_ref().map(|r| r.poly().eval(&[x.clone(), y.clone()])).unwrap_or_else(|_| Q::zero());
            if got != want {
                bad.push(format!("resultant trial {trial}"));
                break;
            }
        }
        let (a, b, c) = (q(rng.gen_range(-9..9), 4), q(rng.gen_range(-9..9), 3), q(rng.gen_range(-9..9), 2));
        let rest = restrict_to_plane(&f, &a, &b, &c);
        for _ in 0..100 {
            let (x, y) = (q(rng.gen_range(-50..50), 7), q(rng.gen_range(-50..50), 5));
            let z = &a * &x + &b * &y + &c;
            let want = f.poly().eval(&[x.clone(), y.clone(), z]);
            let got = match &rest {
                depthcut::poly::Restriction::Contained => Q::zero(),
                depthcut::poly::Restriction::Empty => f.poly().eval(&[qi(0), qi(0), c.clone()]),
                depthcut::poly::Restriction::Curve(cv) => cv.poly().eval(&[x.clone(), y.clone()]),
            };
            if got != want {
                bad.push(format!("restriction trial {trial}"));
                break;
            }
        }
    }
    // Level of a plane product: planes strictly below the point.
    for trial in 0..50 {
        let planes: Vec<Plane> = (0..rng.gen_range(1..5)).map(|_| random_plane(&mut rng)).collect();
        let f = depthcut::partition::plane_product(&planes);
        let p = [dyadic(rng.gen_range(-1.0..1.0), 6), dyadic(rng.gen_range(-1.0..1.0), 6), dyadic(rng.gen_range(-2.0..2.0), 6)];
        let want = planes.iter().filter(|pl| pl.z_at(&p[0], &p[1]) < p[2]).count();
        if level(&p, &f).ok() != Some(want) {
            bad.push(format!("plane level trial {trial}"));
        }
    }
    // Level of the unit sphere: roots at z = +-sqrt(1 - r^2).
    let (x, y, z) = xyz();
    let sphere = TriPoly::new(&(&(&x * &x) + &(&y * &y)) + &(&(&z * &z) - &Poly::one(3))).unwrap();
    for trial in 0..50 {
        let p = [dyadic(rng.gen_range(-1.2..1.2), 6), dyadic(rng.gen_range(-1.2..1.2), 6), dyadic(rng.gen_range(-1.5..1.5), 6)];
        let r2 = &p[0] * &p[0] + &p[1] * &p[1];
        let s2 = Q::one() - &r2;
        let want = if s2 < Q::zero() {
            0
        } else if s2.is_zero() {
            if p[2] > Q::zero() { 2 } else { 0 }
        } else {
            // -s < z and s < z, compared by squares.
            let z2 = &p[2] * &p[2];
            let above_neg = p[2] >= Q::zero() || z2 < s2;
            let above_pos = p[2] > Q::zero() && z2 > s2;
            above_neg as usize + above_pos as usize
        };
        if level(&p, &sphere).ok() != Some(want) {
            bad.push(format!("sphere level trial {trial}"));
        }
    }
    bad.extend(segment_map_failures(&mut rng));
    bad.truncate(8);
    let detail = if bad.is_empty() {
        "resultants, restrictions, levels and segment maps agree with their oracles".to_string()
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty(), detail)
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    for n in [10usize, 20, 40] {
        for d in [2usize, 3] {
            let (mut curves, mut pieces, mut b, mut over, mut runs) = (0.0, 0.0, 0.0f64, 0.0f64, 0.0);
            for seed in 0..3 {
                let Ok(scene) = gen_random_disjoint(n, seed) else { continue };
                let Ok(out) = run_strategy(&scene, Strategy::Partition, &CutParams::new(d)) else { continue };
                let plan = out.plan.unwrap();
                let rep = depthcut::cutter::recurrence_audit(&plan);
                curves += plan.curve_count() as f64;
                pieces += out.pieces.len() as f64;
                b = b.max(rep.b);
                over = over.max(rep.overhead);
                runs += 1.0;
            }
            if runs == 0.0 {
                continue;
            }
            let nf = n as f64;
            lines.push(format!(
                "n={n} D={d}: curves/n^1.5 {:.3} curves/n^2 {:.3} pieces/n^1.5 {:.3} pieces/n^2 {:.3} b {:.3} overhead {:.4}",
                curves / runs / nf.powf(1.5),
                curves / runs / (nf * nf),
                pieces / runs / nf.powf(1.5),
                pieces / runs / (nf * nf),
                b,
                over
            ));
        }
    }
    outcome(true, format!("(reported, not gated)\n    {}", lines.join("\n    ")))
}

fn main() {
    let scenes = shipped_scenes();
    let start = std::time::Instant::now();
    let runs = run_all(&scenes);
    println!("{} strategy runs in {:.1}s", runs.len(), start.elapsed().as_secs_f64());
    let checks: [&dyn Fn() -> Outcome; 9] = [
        &|| criterion_1(&runs),
        &|| criterion_2(&runs),
        &criterion_3,
        &|| criterion_4(&runs, &scenes),
        &criterion_5,
        &criterion_6,
        &|| criterion_7(&scenes),
        &criterion_8,
        &criterion_9,
    ];
    let mut failed = 0;
    for (i, check) in checks.iter().enumerate() {
        let t = std::time::Instant::now();
        let r = check();
        println!("criterion {}: {} {} [{:.1}s]", i + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail, t.elapsed().as_secs_f64());
        failed += (!r.pass) as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
