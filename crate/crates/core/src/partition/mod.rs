//! Partitioning polynomials built as products of non-vertical planes, with an
//! exact crossing audit, and a voxel decomposition for general polynomials.

pub(crate) mod voxel;

pub use voxel::{refinement_counts, audit_poly, decompose_cells, CellDecomposition, Located};

use crate::geom::polygon::{self, Lin2};
use crate::geom::polyhedron::{clip_segment, HalfSpace};
use crate::geom::{BBox, Plane, Point2, Point3, Triangle};
use crate::num::{dyadic, qi, sign, to_f64, Q};
use crate::poly::{Poly, TriPoly};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Sign vector of a cell: entry `i` is the side of plane `i` (`+1` above).
pub type Signs = Vec<i8>;

/// One side of a plane: `sign * (z - plane(x, y)) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub plane: Plane,
    pub sign: i8,
}

impl Side {
    pub fn halfspace(&self) -> HalfSpace {
        let s = qi(self.sign as i64);
        let p = &self.plane;
        HalfSpace::new(-&p.c * &s, vec![-&p.a * &s, -&p.b * &s, s], true)
    }

    /// The side restricted to a triangle's plane, as `h(x, y) > 0`.
    pub fn on_plane(&self, plane: &Plane) -> Lin2 {
        let l = Lin2::from_array(plane.diff(&self.plane));
        if self.sign > 0 {
            l
        } else {
            l.neg()
        }
    }
}

/// Open convex region: the bounding box intersected with plane sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub bbox: BBox,
    pub sides: Vec<Side>,
}

impl Region {
    pub fn new(bbox: BBox) -> Self {
        Self { bbox, sides: vec![] }
    }

    pub fn with(&self, planes: &[Plane], signs: &[i8]) -> Region {
        let mut r = self.clone();
        for (p, &s) in planes.iter().zip(signs) {
            r.sides.push(Side { plane: p.clone(), sign: s });
        }
        r
    }

    pub fn halfspaces(&self) -> Vec<HalfSpace> {
        let mut out = Vec::with_capacity(self.sides.len() + 6);
        for i in 0..3 {
            let mut a = vec![Q::zero(); 3];
            a[i] = Q::one();
            out.push(HalfSpace::new(-&self.bbox.lo[i], a.clone(), true));
            a[i] = -Q::one();
            out.push(HalfSpace::new(self.bbox.hi[i].clone(), a, true));
        }
        out.extend(self.sides.iter().map(|s| s.halfspace()));
        out
    }

    pub fn contains(&self, p: &Point3) -> bool {
        let c = p.coords();
        self.bbox.contains_strict(p) && self.sides.iter().all(|s| s.halfspace().satisfied(&c))
    }

    /// Closure of `t ∩ region` projected to the plane (may be degenerate).
    pub fn on_triangle(&self, t: &Triangle) -> Vec<Point2> {
        self.clip_on_plane(t.proj().to_vec(), &t.plane)
    }

    pub fn clip_on_plane(&self, mut poly: Vec<Point2>, plane: &Plane) -> Vec<Point2> {
        for s in &self.sides {
            if poly.is_empty() {
                break;
            }
            poly = polygon::clip(&poly, &s.on_plane(plane));
        }
        poly
    }

    /// Whether `t` meets the open region in a set of positive area.
    pub fn meets_triangle(&self, t: &Triangle) -> bool {
        let p = self.on_triangle(t);
        p.len() >= 3 && polygon::area2(&p) > Q::zero()
    }

    /// Closed polygon where the plane meets the closed region, in `(x, y)`.
    fn plane_section(&self, plane: &Plane) -> Vec<Point2> {
        let b = &self.bbox;
        let mut poly = vec![
            Point2::new(b.lo[0].clone(), b.lo[1].clone()),
            Point2::new(b.hi[0].clone(), b.lo[1].clone()),
            Point2::new(b.hi[0].clone(), b.hi[1].clone()),
            Point2::new(b.lo[0].clone(), b.hi[1].clone()),
        ];
        let z = Lin2::new(plane.c.clone(), plane.a.clone(), plane.b.clone());
        poly = polygon::clip(&poly, &Lin2::new(&z.c - &b.lo[2], z.a.clone(), z.b.clone()));
        poly = polygon::clip(&poly, &Lin2::new(&b.hi[2] - &z.c, -&z.a, -&z.b));
        self.clip_on_plane(poly, plane)
    }
}

/// Triangle edge clipped to a region; the open part inside is `p -> q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSeg {
    pub tri: usize,
    pub edge: usize,
    pub p: Point3,
    pub q: Point3,
}

impl EdgeSeg {
    pub fn at(&self, t: &Q) -> Point3 {
        self.p.lerp(&self.q, t)
    }
}

/// Edges of `tris` clipped to `region`; edges not meeting it in a segment are dropped.
pub fn edge_segments(tris: &[&Triangle], region: &Region) -> Vec<EdgeSeg> {
    let hs = region.halfspaces();
    let mut out = Vec::new();
    for t in tris {
        for (k, (a, b)) in t.edges().into_iter().enumerate() {
            let iv = clip_segment(&a.coords(), &b.coords(), &hs);
            if iv.has_interior() {
                out.push(EdgeSeg { tri: t.id, edge: k, p: a.lerp(&b, &iv.lo), q: a.lerp(&b, &iv.hi) });
            }
        }
    }
    out
}

/// Height of a point above a plane along a segment, as `g0 + t g1`.
fn along(plane: &Plane, s: &EdgeSeg) -> (Q, Q) {
    let g0 = plane.height(&s.p);
    let g1 = plane.height(&s.q) - &g0;
    (g0, g1)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("no edge segments to partition")]
    Empty,
    #[error("degree must be at least 1")]
    Degree,
    #[error("partition not found within retry budget (best measured c = {best_c})")]
    NotFound { best_c: String, best: Box<Option<PlanePartition>> },
}

/// Product of `D` planes; cells are the realised sign vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanePartition {
    pub planes: Vec<Plane>,
    pub audit: PartitionAudit,
}

impl PlanePartition {
    pub fn degree(&self) -> usize {
        self.planes.len()
    }

    pub fn audited_c(&self) -> &Q {
        &self.audit.measured_c
    }

    /// `prod_i (z - a_i x - b_i y - c_i)`.
    pub fn poly(&self) -> TriPoly {
        plane_product(&self.planes)
    }

    /// Vertical projections of the pairwise plane intersections.
    pub fn curtain_lines(&self) -> Vec<(usize, usize, Lin2)> {
        let mut out = Vec::new();
        for i in 0..self.planes.len() {
            for j in i + 1..self.planes.len() {
                let l = Lin2::from_array(self.planes[i].diff(&self.planes[j]));
                if !l.is_constant() {
                    out.push((i, j, l));
                }
            }
        }
        out
    }
}

pub fn plane_product(planes: &[Plane]) -> TriPoly {
    let mut f = Poly::one(3);
    for p in planes {
        f = &f * &Poly::affine(&[-&p.c, -&p.a, -&p.b, Q::one()]);
    }
    TriPoly::new(f).expect("product of planes is nonzero")
}

/// Crossing table of a plane product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionAudit {
    pub n: usize,
    pub degree: usize,
    /// Edge segments crossing each cell (cells crossed by none are omitted).
    pub crossings: BTreeMap<Signs, Vec<usize>>,
    pub max_crossings: usize,
    /// `max_crossings * D^2 / N`.
    pub measured_c: Q,
    /// Cells of the open region minus the planes.
    pub cell_count: usize,
    /// `cell_count / D^3`.
    pub c_w: Q,
}

impl PartitionAudit {
    pub fn passes(&self, c_target: &Q) -> bool {
        self.measured_c <= *c_target
    }

    /// `cell_id crossings` rows followed by `measured_c`.
    pub fn table(&self) -> String {
        let mut s = String::from("cell_id\tcrossings\n");
        for (i, v) in self.crossings.values().enumerate() {
            s.push_str(&format!("{i}\t{}\n", v.len()));
        }
        s.push_str(&format!("measured_c\t{:.4}\n", to_f64(&self.measured_c)));
        s
    }
}

/// Splits every segment at the planes and tallies the cells of its open pieces.
pub fn audit_partition(planes: &[Plane], segs: &[EdgeSeg], region: &Region) -> Result<PartitionAudit, AuditError> {
    let mut crossings: BTreeMap<Signs, Vec<usize>> = BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        let mut cuts = vec![Q::zero(), Q::one()];
        for (k, pl) in planes.iter().enumerate() {
            let (g0, g1) = along(pl, s);
            if g1.is_zero() {
                if g0.is_zero() {
                    return Err(AuditError::SegmentInZeroSet { segment: i, plane: k });
                }
                continue;
            }
            let t = -&g0 / &g1;
            if t > Q::zero() && t < Q::one() {
                cuts.push(t);
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let m = s.at(&((&w[0] + &w[1]) / qi(2)));
            let signs: Signs = planes.iter().map(|p| sign(&p.height(&m)) as i8).collect();
            let e = crossings.entry(signs).or_default();
            if e.last() != Some(&i) {
                e.push(i);
            }
        }
    }
    let d = planes.len();
    let max_crossings = crossings.values().map(|v| v.len()).max().unwrap_or(0);
    let n = segs.len().max(1);
    let measured_c = qi((max_crossings * d * d) as i64) / qi(n as i64);
    let cell_count = count_cells(planes, region);
    let c_w = qi(cell_count as i64) / qi(d.max(1).pow(3) as i64);
    Ok(PartitionAudit { n: segs.len(), degree: d, crossings, max_crossings, measured_c, cell_count, c_w })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error("edge segment {segment} lies in plane {plane} of the zero set")]
    SegmentInZeroSet { segment: usize, plane: usize },
}

/// Regions cut from an open convex body by planes in general position:
/// one plus the planes, lines and points meeting its interior.
pub fn count_cells(planes: &[Plane], region: &Region) -> usize {
    let hs = region.halfspaces();
    let mut count = 1;
    for p in planes {
        let sec = region.plane_section(p);
        if sec.len() >= 3 && polygon::area2(&sec) > Q::zero() {
            count += 1;
        }
    }
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            // Inside plane j, the trace of plane i is a line; clip it to the section.
            let Some((a, b)) = pair_line(&planes[i], &planes[j], &region.bbox) else { continue };
            let pa = planes[j].lift(&a).coords();
            let pb = planes[j].lift(&b).coords();
            if clip_segment(&pa, &pb, &hs).has_interior() {
                count += 1;
            }
            for k in j + 1..planes.len() {
                if let Some(p) = triple_point(&planes[i], &planes[j], &planes[k]) {
                    if hs.iter().all(|h| h.satisfied(&p.coords())) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// The xy-line where two planes meet, cut to a long segment over the box.
fn pair_line(p: &Plane, q: &Plane, bbox: &BBox) -> Option<(Point2, Point2)> {
    let l = Lin2::from_array(p.diff(q));
    if l.is_constant() {
        return None;
    }
    let span: Q = (0..2).map(|i| &bbox.hi[i] - &bbox.lo[i]).sum::<Q>() * qi(4)
        + (0..2).map(|i| crate::num::abs(&bbox.lo[i]) + crate::num::abs(&bbox.hi[i])).sum::<Q>();
    // Point on the line closest to the origin in the direction of the normal.
    let nn = &l.a * &l.a + &l.b * &l.b;
    let base = Point2::new(-&l.c * &l.a / &nn, -&l.c * &l.b / &nn);
    let dirx = -&l.b;
    let diry = l.a.clone();
    let dn = crate::num::abs(&dirx) + crate::num::abs(&diry);
    let s = &span / dn;
    Some((
        Point2::new(&base.x - &dirx * &s, &base.y - &diry * &s),
        Point2::new(&base.x + &dirx * &s, &base.y + &diry * &s),
    ))
}

fn triple_point(p: &Plane, q: &Plane, r: &Plane) -> Option<Point3> {
    let l1 = Lin2::from_array(p.diff(q));
    let l2 = Lin2::from_array(p.diff(r));
    let det = &l1.a * &l2.b - &l1.b * &l2.a;
    if det.is_zero() {
        return None;
    }
    let x = (-&l1.c * &l2.b + &l2.c * &l1.b) / &det;
    let y = (-&l2.c * &l1.a + &l1.c * &l2.a) / &det;
    Some(p.lift(&Point2::new(x, y)))
}

/// Search parameters for [`build_partition`].
#[derive(Clone, Debug)]
pub struct PartitionParams {
    pub degree: usize,
    pub c_target: Q,
    pub seed: u64,
    /// Candidate planes per greedy step.
    pub candidates: usize,
    pub retries: usize,
}

impl PartitionParams {
    pub fn new(degree: usize, c_target: Q, seed: u64) -> Self {
        Self { degree, c_target, seed, candidates: 12, retries: 6 }
    }
}

/// Greedy product of planes: each new plane bisects the segments of the
/// currently heaviest cell, picked among random slopes to minimise the
/// largest cell. The audit decides acceptance.
pub fn build_partition(segs: &[EdgeSeg], region: &Region, params: &PartitionParams) -> Result<PlanePartition, PartitionError> {
    if segs.is_empty() {
        return Err(PartitionError::Empty);
    }
    if params.degree == 0 {
        return Err(PartitionError::Degree);
    }
    let mut best: Option<PlanePartition> = None;
    for attempt in 0..params.retries.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_mul(0x9e37_79b9).wrapping_add(attempt as u64));
        let planes = greedy(segs, params, &mut rng);
        let Ok(audit) = audit_partition(&planes, segs, region) else { continue };
        let cand = PlanePartition { planes, audit };
        if cand.audit.passes(&params.c_target) {
            return Ok(cand);
        }
        if best.as_ref().map(|b| cand.audit.measured_c < b.audit.measured_c).unwrap_or(true) {
            best = Some(cand);
        }
    }
    let best_c = best.as_ref().map(|b| format!("{:.4}", to_f64(&b.audit.measured_c))).unwrap_or_else(|| "n/a".into());
    Err(PartitionError::NotFound { best_c, best: Box::new(best) })
}

/// Open piece `(lo, hi)` of segment `seg` with its current sign vector.
#[derive(Clone)]
struct Piece {
    seg: usize,
    lo: Q,
    hi: Q,
    signs: Signs,
}

fn split_pieces(pieces: &[Piece], segs: &[EdgeSeg], plane: &Plane) -> Option<Vec<Piece>> {
    let mut out = Vec::with_capacity(pieces.len() + pieces.len() / 2);
    for pc in pieces {
        let (g0, g1) = along(plane, &segs[pc.seg]);
        if g1.is_zero() && g0.is_zero() {
            return None;
        }
        let val = |t: &Q| sign(&(&g0 + &g1 * t)) as i8;
        let cut = if g1.is_zero() { None } else { Some(-&g0 / &g1) };
        match cut {
            Some(t) if t > pc.lo && t < pc.hi => {
                for (lo, hi) in [(pc.lo.clone(), t.clone()), (t.clone(), pc.hi.clone())] {
                    let m = (&lo + &hi) / qi(2);
                    let mut signs = pc.signs.clone();
                    signs.push(val(&m));
                    out.push(Piece { seg: pc.seg, lo, hi, signs });
                }
            }
            _ => {
                let m = (&pc.lo + &pc.hi) / qi(2);
                let mut signs = pc.signs.clone();
                signs.push(val(&m));
                out.push(Piece { signs, ..pc.clone() });
            }
        }
    }
    Some(out)
}

fn heaviest(pieces: &[Piece]) -> (Signs, usize) {
    let mut count: BTreeMap<&Signs, usize> = BTreeMap::new();
    for p in pieces {
        *count.entry(&p.signs).or_default() += 1;
    }
    count.into_iter().max_by_key(|(_, c)| *c).map(|(s, c)| (s.clone(), c)).unwrap_or_default()
}

fn greedy(segs: &[EdgeSeg], params: &PartitionParams, rng: &mut ChaCha8Rng) -> Vec<Plane> {
    let mut pieces: Vec<Piece> = (0..segs.len())
        .map(|i| Piece { seg: i, lo: Q::zero(), hi: Q::one(), signs: vec![] })
        .collect();
    let mut planes = Vec::new();
    let slope_scale = {
        let mut m = 0.5f64;
        for s in segs {
            let (p, q) = (s.p.to_f64(), s.q.to_f64());
            let h = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
            if h > 1e-12 {
                m = m.max(((q[2] - p[2]) / h).abs());
            }
        }
        m.min(8.0)
    };
    for _ in 0..params.degree {
        let (target, _) = heaviest(&pieces);
        let members: Vec<&Piece> = pieces.iter().filter(|p| p.signs == target).collect();
        let mut best: Option<(usize, Plane, Vec<Piece>)> = None;
        for _ in 0..params.candidates.max(1) {
            let a = dyadic(rng.gen_range(-slope_scale..slope_scale), 10);
            let b = dyadic(rng.gen_range(-slope_scale..slope_scale), 10);
            // Median of `z - a x - b y` over points of the heaviest cell's pieces.
            let mut vals: Vec<f64> = members
                .iter()
                .flat_map(|pc| {
                    let s = &segs[pc.seg];
                    let (lo, hi) = (to_f64(&pc.lo), to_f64(&pc.hi));
                    let (p, q) = (s.p.to_f64(), s.q.to_f64());
                    [0.25, 0.75].map(|w| {
                        let t = lo + w * (hi - lo);
                        let x = p[0] + t * (q[0] - p[0]);
                        let y = p[1] + t * (q[1] - p[1]);
                        let z = p[2] + t * (q[2] - p[2]);
                        z - to_f64(&a) * x - to_f64(&b) * y
                    })
                })
                .collect();
            vals.sort_by(f64::total_cmp);
            let med = vals[vals.len() / 2];
            let jitter = rng.gen_range(-1e-3..1e-3) * (1.0 + med.abs());
            let plane = Plane::new(a, b, dyadic(med + jitter, 24));
            if planes.contains(&plane) {
                continue;
            }
            let Some(next) = split_pieces(&pieces, segs, &plane) else { continue };
            let (_, score) = heaviest(&next);
            if best.as_ref().map(|(s, _, _)| score < *s).unwrap_or(true) {
                best = Some((score, plane, next));
            }
        }
        let Some((_, plane, next)) = best else { break };
        planes.push(plane);
        pieces = next;
    }
    planes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point3;
    use crate::num::q;

    fn seg(p: [i64; 3], q: [i64; 3]) -> EdgeSeg {
        EdgeSeg { tri: 0, edge: 0, p: Point3::ints(p[0], p[1], p[2]), q: Point3::ints(q[0], q[1], q[2]) }
    }

    fn root() -> Region {
        Region::new(BBox::cube(10))
    }

    #[test]
    fn parallel_planes() {
        let planes: Vec<Plane> = (1..=3).map(|k| Plane::new(Q::zero(), Q::zero(), qi(k))).collect();
        assert_eq!(count_cells(&planes, &root()), 4);
        let segs = vec![seg([0, 0, 0], [1, 1, 5]), seg([2, 0, 0], [3, 1, 5])];
        let a = audit_partition(&planes, &segs, &root()).unwrap();
        assert_eq!(a.crossings.len(), 4);
        assert!(a.crossings.values().all(|v| v.len() == 2));
    }

    #[test]
    fn generic_planes_count() {
        // Three generic planes through a common box: 8 cells when they meet inside.
        let planes = vec![
            Plane::new(q(1, 3), Q::zero(), Q::zero()),
            Plane::new(Q::zero(), q(1, 2), q(1, 7)),
            Plane::new(q(-1, 5), q(-1, 4), q(-1, 3)),
        ];
        assert_eq!(count_cells(&planes, &root()), 8);
    }

    #[test]
    fn single_line() {
        let segs = vec![seg([0, 0, 0], [1, 2, 1])];
        let p = build_partition(&segs, &root(), &PartitionParams::new(1, qi(1), 3)).unwrap();
        assert_eq!(p.audit.cell_count, 2);
        assert!(p.audit.max_crossings <= 1);
    }

    #[test]
    fn segment_in_plane_is_reported() {
        let planes = vec![Plane::new(Q::zero(), Q::zero(), qi(1))];
        let segs = vec![seg([0, 0, 1], [3, 1, 1])];
        assert!(audit_partition(&planes, &segs, &root()).is_err());
    }
}
