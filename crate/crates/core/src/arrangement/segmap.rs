//! Exact planar map of straight segments inside a convex region, with its
//! vertical (trapezoidal) decomposition in a sheared chart.
//!
//! The chart is `s = x + mu y`, `t = y`; walls are lines of constant `s`.

use crate::geom::polygon::{self, Lin2};
use crate::geom::{line_intersection, orient2d, Point2};
use crate::num::{dyadic, qi, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("no generic sweep direction found in {0} attempts")]
    NonGeneric(usize),
    #[error("region is degenerate")]
    EmptyRegion,
    #[error("face count {union} disagrees with Euler count {euler}")]
    Euler { union: usize, euler: usize },
}

#[derive(Clone, Debug)]
pub struct Arc {
    /// Vertex indices, left end first (in the sheared chart).
    pub a: usize,
    pub b: usize,
    pub boundary: bool,
    /// Indices of the input segments covering this arc.
    pub sources: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Trapezoid {
    pub bottom: usize,
    pub top: usize,
    pub s_left: Q,
    pub s_right: Q,
    /// Counter-clockwise polygon in `(x, y)`.
    pub poly: Vec<Point2>,
    pub face: usize,
}

#[derive(Clone, Debug)]
pub struct SegmentMap {
    pub mu: Q,
    pub region: Vec<Point2>,
    /// Vertices in `(x, y)`.
    pub vertices: Vec<Point2>,
    pub arcs: Vec<Arc>,
    pub components: usize,
    pub faces: usize,
    pub face_touches_boundary: Vec<bool>,
    pub trapezoids: Vec<Trapezoid>,
    pub attempts: usize,
}

impl SegmentMap {
    /// Euler count of bounded faces: `E - V + C`.
    pub fn euler_faces(&self) -> usize {
        self.arcs.len() + self.components - self.vertices.len()
    }

    /// An exact interior point of each face.
    pub fn face_samples(&self) -> Vec<Point2> {
        let mut out: Vec<Option<Point2>> = vec![None; self.faces];
        for t in &self.trapezoids {
            if out[t.face].is_none() {
                out[t.face] = Some(polygon::vertex_average(&t.poly));
            }
        }
        out.into_iter().map(|p| p.expect("every face has a trapezoid")).collect()
    }

    pub fn interior_vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| polygon::contains_strict(&self.region, v)).count()
    }
}

struct Uf(Vec<usize>);

impl Uf {
    fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Clips a closed segment to a closed convex region.
pub fn clip_to_region(region: &[Point2], a: &Point2, b: &Point2) -> Option<(Point2, Point2)> {
    let mut lo = Q::zero();
    let mut hi = Q::one();
    let n = region.len();
    for i in 0..n {
        let h = Lin2::left_of(&region[i], &region[(i + 1) % n]);
        let fa = h.eval(a);
        let fb = h.eval(b);
        let slope = &fb - &fa;
        if slope.is_zero() {
            if fa < Q::zero() {
                return None;
            }
            continue;
        }
        let t = -&fa / &slope;
        if slope > Q::zero() {
            if t > lo {
                lo = t;
            }
        } else if t < hi {
            hi = t;
        }
    }
    if lo >= hi {
        return None;
    }
    Some((a.lerp(b, &lo), a.lerp(b, &hi)))
}

fn to_chart(p: &Point2, mu: &Q) -> Point2 {
    Point2::new(&p.x + mu * &p.y, p.y.clone())
}

fn from_chart(p: &Point2, mu: &Q) -> Point2 {
    Point2::new(&p.x - mu * &p.y, p.y.clone())
}

struct ChartArc {
    a: Point2,
    b: Point2,
    slope: Q,
}

impl ChartArc {
    fn t_at(&self, s: &Q) -> Q {
        &self.a.y + (s - &self.a.x) * &self.slope
    }
}

/// Builds the map; `seed` fixes the pseudo-random sweep directions tried.
pub fn build_segment_map(region: &[Point2], segs: &[(Point2, Point2)], seed: u64) -> Result<SegmentMap, MapError> {
    let region = polygon::make_ccw(polygon::dedup(region.to_vec()));
    if region.len() < 3 || polygon::area2(&region) <= Q::zero() {
        return Err(MapError::EmptyRegion);
    }
    let mut input: Vec<(Point2, Point2, Option<usize>)> = Vec::new();
    for i in 0..region.len() {
        input.push((region[i].clone(), region[(i + 1) % region.len()].clone(), None));
    }
    for (k, (a, b)) in segs.iter().enumerate() {
        if let Some((p, q)) = clip_to_region(&region, a, b) {
            if p != q {
                input.push((p, q, Some(k)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const BUDGET: usize = 8;
    for attempt in 1..=BUDGET {
        let mu = dyadic(rng.gen_range(-0.5..0.5), 12);
        if mu.is_zero() {
            continue;
        }
        let generic = input.iter().all(|(a, b, _)| &a.x + &mu * &a.y != &b.x + &mu * &b.y);
        if !generic {
            continue;
        }
        let mut m = sweep(&region, &input, &mu)?;
        m.attempts = attempt;
        return Ok(m);
    }
    Err(MapError::NonGeneric(BUDGET))
}

fn sweep(region: &[Point2], input: &[(Point2, Point2, Option<usize>)], mu: &Q) -> Result<SegmentMap, MapError> {
    // Split every input segment at all incidences with the others.
    let n = input.len();
    let boxes: Vec<[f64; 4]> = input
        .iter()
        .map(|(a, b, _)| {
            let (a, b) = (a.to_f64(), b.to_f64());
            [a[0].min(b[0]), a[1].min(b[1]), a[0].max(b[0]), a[1].max(b[1])]
        })
        .collect();
    let mut cuts: Vec<Vec<Q>> = vec![vec![Q::zero(), Q::one()]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (boxes[i], boxes[j]);
            let m = 1e-9;
            if p[0] > q[2] + m || q[0] > p[2] + m || p[1] > q[3] + m || q[1] > p[3] + m {
                continue;
            }
            let (a, b, _) = &input[i];
            let (c, d, _) = &input[j];
            let o1 = orient2d(a, b, c);
            let o2 = orient2d(a, b, d);
            if o1 == 0 && o2 == 0 {
                // Collinear: each endpoint lying on the other segment is a cut.
                for (x, y, z, w, idx) in [(a, b, c, d, i), (c, d, a, b, j)] {
                    for p in [z, w] {
                        if crate::geom::on_segment(x, y, p) {
                            cuts[idx].push(param_on(x, y, p));
                        }
                    }
                }
                continue;
            }
            if o1 * o2 > 0 {
                continue;
            }
            if orient2d(c, d, a) * orient2d(c, d, b) > 0 {
                continue;
            }
            if let Some((_, t, u)) = line_intersection(a, b, c, d) {
                cuts[i].push(t);
                cuts[j].push(u);
            }
        }
    }
    let mut vid: BTreeMap<Point2, usize> = BTreeMap::new();
    let mut verts: Vec<Point2> = Vec::new();
    let mut arc_ix: HashMap<(usize, usize), usize> = HashMap::new();
    let mut arcs: Vec<Arc> = Vec::new();
    for (k, (a, b, src)) in input.iter().enumerate() {
        let mut ts = std::mem::take(&mut cuts[k]);
        ts.sort();
        ts.dedup();
        let mut prev: Option<usize> = None;
        for t in &ts {
            let p = a.lerp(b, t);
            let id = *vid.entry(p.clone()).or_insert_with(|| {
                verts.push(p);
                verts.len() - 1
            });
            if let Some(pv) = prev {
                if pv != id {
                    let key = (pv.min(id), pv.max(id));
                    let ai = *arc_ix.entry(key).or_insert_with(|| {
                        arcs.push(Arc { a: key.0, b: key.1, boundary: false, sources: vec![] });
                        arcs.len() - 1
                    });
                    match src {
                        None => arcs[ai].boundary = true,
                        Some(s) => {
                            if !arcs[ai].sources.contains(s) {
                                arcs[ai].sources.push(*s);
                            }
                        }
                    }
                }
            }
            prev = Some(id);
        }
    }
    // Orient arcs left to right in the chart.
    let chart: Vec<Point2> = verts.iter().map(|p| to_chart(p, mu)).collect();
    for arc in &mut arcs {
        if chart[arc.a].x > chart[arc.b].x {
            std::mem::swap(&mut arc.a, &mut arc.b);
        }
    }
    let carcs: Vec<ChartArc> = arcs
        .iter()
        .map(|r| {
            let (a, b) = (chart[r.a].clone(), chart[r.b].clone());
            let slope = (&b.y - &a.y) / (&b.x - &a.x);
            ChartArc { a, b, slope }
        })
        .collect();
    let mut events: Vec<Q> = chart.iter().map(|p| p.x.clone()).collect();
    events.sort();
    events.dedup();
    let ev_index = |s: &Q| events.binary_search(s).expect("event");
    let mut starts: Vec<Vec<usize>> = vec![Vec::new(); events.len()];
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); events.len()];
    for (i, c) in carcs.iter().enumerate() {
        starts[ev_index(&c.a.x)].push(i);
        ends[ev_index(&c.b.x)].push(i);
    }

    let mut status: Vec<usize> = Vec::new();
    let mut open: HashMap<(usize, usize), usize> = HashMap::new();
    struct Open {
        bottom: usize,
        top: usize,
        s_left: Q,
        s_right: Option<Q>,
    }
    let mut traps: Vec<Open> = Vec::new();
    let mut face_uf = Uf::new(0);
    let mut prev_cells: Vec<usize> = Vec::new();
    for k in 0..events.len() {
        let s = &events[k];
        // Left-slab cell intervals at this wall, before the update.
        let left_iv: Vec<(Q, Q, usize)> = prev_cells
            .iter()
            .map(|&ti| (carcs[traps[ti].bottom].t_at(s), carcs[traps[ti].top].t_at(s), ti))
            .collect();
        status.retain(|a| !ends[k].contains(a));
        if k + 1 == events.len() {
            for ti in prev_cells.drain(..) {
                traps[ti].s_right = Some(s.clone());
            }
            break;
        }
        let mid = (s + &events[k + 1]) / qi(2);
        for &na in &starts[k] {
            let tv = carcs[na].t_at(&mid);
            let pos = status.partition_point(|&a| carcs[a].t_at(&mid) < tv);
            status.insert(pos, na);
        }
        let mut new_open: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cells = Vec::with_capacity(status.len().saturating_sub(1));
        for w in status.windows(2) {
            let key = (w[0], w[1]);
            let ti = match open.get(&key) {
                Some(&ti) => ti,
                None => {
                    traps.push(Open { bottom: w[0], top: w[1], s_left: s.clone(), s_right: None });
                    face_uf.0.push(face_uf.0.len());
                    traps.len() - 1
                }
            };
            new_open.insert(key, ti);
            cells.push(ti);
        }
        for (key, ti) in &open {
            if !new_open.contains_key(key) {
                traps[*ti].s_right = Some(s.clone());
            }
        }
        // Faces continue across the wall wherever open intervals overlap.
        let right_iv: Vec<(Q, Q, usize)> = cells
            .iter()
            .map(|&ti| (carcs[traps[ti].bottom].t_at(s), carcs[traps[ti].top].t_at(s), ti))
            .collect();
        let (mut i, mut j) = (0, 0);
        while i < left_iv.len() && j < right_iv.len() {
            let lo = if left_iv[i].0 > right_iv[j].0 { &left_iv[i].0 } else { &right_iv[j].0 };
            let hi = if left_iv[i].1 < right_iv[j].1 { &left_iv[i].1 } else { &right_iv[j].1 };
            if lo < hi {
                face_uf.union(left_iv[i].2, right_iv[j].2);
            }
            if left_iv[i].1 < right_iv[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        open = new_open;
        prev_cells = cells;
    }

    let mut face_of_root: HashMap<usize, usize> = HashMap::new();
    let mut trapezoids = Vec::with_capacity(traps.len());
    let mut touches: Vec<bool> = Vec::new();
    for (ti, t) in traps.iter().enumerate() {
        let root = face_uf.find(ti);
        let next = face_of_root.len();
        let face = *face_of_root.entry(root).or_insert(next);
        if face == touches.len() {
            touches.push(false);
        }
        if arcs[t.bottom].boundary || arcs[t.top].boundary {
            touches[face] = true;
        }
        let sr = t.s_right.clone().expect("closed trapezoid");
        let (b, u) = (&carcs[t.bottom], &carcs[t.top]);
        let pts = vec![
            Point2::new(t.s_left.clone(), b.t_at(&t.s_left)),
            Point2::new(sr.clone(), b.t_at(&sr)),
            Point2::new(sr.clone(), u.t_at(&sr)),
            Point2::new(t.s_left.clone(), u.t_at(&t.s_left)),
        ];
        let poly: Vec<Point2> = polygon::dedup(pts).iter().map(|p| from_chart(p, mu)).collect();
        trapezoids.push(Trapezoid { bottom: t.bottom, top: t.top, s_left: t.s_left.clone(), s_right: sr, poly, face });
    }
    let mut vuf = Uf::new(verts.len());
    let mut components = verts.len();
    for a in &arcs {
        if vuf.union(a.a, a.b) {
            components -= 1;
        }
    }
    let map = SegmentMap {
        mu: mu.clone(),
        region: region.to_vec(),
        vertices: verts,
        arcs,
        components,
        faces: face_of_root.len(),
        face_touches_boundary: touches,
        trapezoids,
        attempts: 0,
    };
    if map.euler_faces() != map.faces {
        return Err(MapError::Euler { union: map.faces, euler: map.euler_faces() });
    }
    Ok(map)
}

fn param_on(a: &Point2, b: &Point2, p: &Point2) -> Q {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}
