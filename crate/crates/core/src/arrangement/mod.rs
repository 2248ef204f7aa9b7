//! Curves drawn on triangles, clipping to ancestral cells, and the planar
//! maps they induce.
//!
//! Every triangle uses its vertical projection as chart: a point `(x, y)`
//! of the chart is the point `(x, y, z(x, y))` of the triangle's plane.

pub mod segmap;
pub mod slab;
pub mod svg;

pub use segmap::{build_segment_map, clip_to_region, MapError, SegmentMap, Trapezoid};
pub use slab::{slab_decompose, PseudoTrapezoid, SlabError, SlabMap};

use crate::geom::polygon::Lin2;
use crate::geom::{Plane, Point2, Point3, Triangle};
use crate::num::{qi, sign, Q};
use crate::partition::{CellDecomposition, Located, Side};
use crate::poly::{partial_z, resultant_z, restrict_to_plane, roots_along_segment, AlgebraError, BiPoly, Poly, Restriction, TriPoly};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    ZeroSet,
    Curtain,
    PlaneTrace,
    CylinderTrace,
    LeafBsp,
}

impl Origin {
    pub fn tag(self) -> &'static str {
        match self {
            Origin::ZeroSet => "zero",
            Origin::Curtain => "curtain",
            Origin::PlaneTrace => "trace",
            Origin::CylinderTrace => "cylinder",
            Origin::LeafBsp => "bsp",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveGeom {
    /// Straight piece in the chart.
    Segment(Point2, Point2),
    /// The whole zero set of the defining polynomial inside the triangle.
    Algebraic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrawnCurve {
    pub tri: usize,
    pub origin: Origin,
    pub node: usize,
    pub poly: BiPoly,
    pub geom: CurveGeom,
}

impl DrawnCurve {
    pub fn segment(tri: usize, origin: Origin, node: usize, a: Point2, b: Point2) -> Self {
        let l = Lin2::left_of(&a, &b);
        let poly = BiPoly::new(Poly::affine(&[l.c, l.a, l.b])).expect("distinct endpoints");
        DrawnCurve { tri, origin, node, poly, geom: CurveGeom::Segment(a, b) }
    }

    pub fn as_segment(&self) -> Option<(&Point2, &Point2)> {
        match &self.geom {
            CurveGeom::Segment(a, b) => Some((a, b)),
            CurveGeom::Algebraic => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DrawError {
    #[error("triangle {0} lies in the zero set")]
    Contained(usize),
    #[error("zero set contains a vertical cylinder")]
    VerticalComponent,
    #[error("curtain resultant vanishes identically")]
    CurtainVanishes,
}

/// Chord of a convex polygon on the line `l = 0`, if it has positive length.
pub fn line_chord(l: &Lin2, poly: &[Point2]) -> Option<(Point2, Point2)> {
    if l.is_constant() {
        return None;
    }
    let n = poly.len();
    let vals: Vec<Q> = poly.iter().map(|p| l.eval(p)).collect();
    let mut pts: Vec<Point2> = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (si, sj) = (sign(&vals[i]), sign(&vals[j]));
        if si == 0 {
            pts.push(poly[i].clone());
        }
        if si * sj < 0 {
            let t = &vals[i] / (&vals[i] - &vals[j]);
            pts.push(poly[i].lerp(&poly[j], &t));
        }
    }
    // Order along the line direction (-b, a).
    let key = |p: &Point2| -&l.b * &p.x + &l.a * &p.y;
    let lo = pts.iter().min_by(|p, q| key(p).cmp(&key(q)))?.clone();
    let hi = pts.iter().max_by(|p, q| key(p).cmp(&key(q)))?.clone();
    (lo != hi).then_some((lo, hi))
}

/// `t ∩ Z(f)` in the chart of `t`.
pub fn draw_zero_set(t: &Triangle, f: &TriPoly, node: usize) -> Result<Option<DrawnCurve>, DrawError> {
    match restrict_to_plane(f, &t.plane.a, &t.plane.b, &t.plane.c) {
        Restriction::Contained => Err(DrawError::Contained(t.id)),
        Restriction::Empty => Ok(None),
        Restriction::Curve(p) => Ok(Some(chart_curve(t, Origin::ZeroSet, node, p))),
    }
}

/// A chart curve; lines become chords of the triangle, others stay algebraic.
fn chart_curve(t: &Triangle, origin: Origin, node: usize, p: BiPoly) -> DrawnCurve {
    if p.degree() == 1 {
        let g = p.poly();
        let l = Lin2::new(g.coeff(&[0, 0]), g.coeff(&[1, 0]), g.coeff(&[0, 1]));
        if let Some((a, b)) = line_chord(&l, &t.proj()) {
            return DrawnCurve { tri: t.id, origin, node, poly: p, geom: CurveGeom::Segment(a, b) };
        }
    }
    DrawnCurve { tri: t.id, origin, node, poly: p, geom: CurveGeom::Algebraic }
}

/// Curtain `Res_z(f, f_z)`; since the chart is the projection it is read directly in `(x, y)`.
pub fn draw_curtain(t: &Triangle, f: &TriPoly, node: usize) -> Result<Option<DrawnCurve>, DrawError> {
    let fz = partial_z(f).ok_or(DrawError::VerticalComponent)?;
    let r = match resultant_z(f, &fz) {
        Ok(r) => r,
        Err(AlgebraError::CommonFactor) => return Err(DrawError::CurtainVanishes),
        Err(_) => return Err(DrawError::CurtainVanishes),
    };
    if r.degree() == 0 {
        return Ok(None);
    }
    Ok(Some(chart_curve(t, Origin::Curtain, node, r)))
}

/// One chord per plane crossing `t`; planes parallel or equal to it give none.
pub fn draw_plane_traces(t: &Triangle, planes: &[Plane], node: usize) -> Vec<DrawnCurve> {
    planes
        .iter()
        .filter_map(|p| {
            let l = Lin2::from_array(t.plane.diff(p));
            let (a, b) = line_chord(&l, &t.proj())?;
            Some(DrawnCurve::segment(t.id, Origin::PlaneTrace, node, a, b))
        })
        .collect()
}

/// Boundary of a slice in the chart: straight pieces and algebraic arcs.
#[derive(Clone, Debug, Default)]
pub struct SliceBoundary {
    pub owner: usize,
    pub segments: Vec<(Point2, Point2)>,
    pub curves: Vec<BiPoly>,
}

/// Trace of the vertical cylinder over a slice boundary on another triangle.
pub fn draw_cylinder_trace(t: &Triangle, b: &SliceBoundary, node: usize) -> Vec<DrawnCurve> {
    if t.id == b.owner {
        return vec![];
    }
    let proj = t.proj();
    let mut out: Vec<DrawnCurve> = b
        .segments
        .iter()
        .filter_map(|(p, q)| clip_to_region(&proj, p, q))
        .map(|(p, q)| DrawnCurve::segment(t.id, Origin::CylinderTrace, node, p, q))
        .collect();
    for c in &b.curves {
        out.push(DrawnCurve { tri: t.id, origin: Origin::CylinderTrace, node, poly: c.clone(), geom: CurveGeom::Algebraic });
    }
    out
}

/// One ancestral cell constraint.
#[derive(Clone, Debug)]
pub enum ChainLink {
    /// Side of a plane of a plane-product partition.
    Side(Side),
    /// A voxel cell of a general partitioning polynomial.
    Voxel { f: TriPoly, decomp: Arc<CellDecomposition>, cell: usize },
}

pub type CellChain = Vec<ChainLink>;

/// Result of clipping a segment: kept open parameter intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Clipped {
    pub arcs: Vec<(Q, Q)>,
    /// Pieces dropped because every probe hit a buffer voxel.
    pub ambiguous: usize,
}

/// Pieces of the segment `p -> q` inside every cell of the chain.
pub fn clip_curve(p: &Point3, q: &Point3, chain: &[ChainLink]) -> Result<Clipped, AlgebraError> {
    let mut cuts = vec![Q::zero(), Q::one()];
    let (pc, qc) = (p.coords(), q.coords());
    for link in chain {
        match link {
            ChainLink::Side(s) => {
                let g0 = s.plane.height(p);
                let g1 = s.plane.height(q) - &g0;
                if !g1.is_zero() {
                    let t = -&g0 / &g1;
                    if t > Q::zero() && t < Q::one() {
                        cuts.push(t);
                    }
                }
            }
            ChainLink::Voxel { f, .. } => {
                let r = roots_along_segment(f.poly(), &pc, &qc)?;
                for root in r.roots {
                    if root.is_exact() {
                        cuts.push(root.lo);
                    } else {
                        cuts.push(root.lo);
                        cuts.push(root.hi);
                    }
                }
            }
        }
    }
    cuts.retain(|t| *t >= Q::zero() && *t <= Q::one());
    cuts.sort();
    cuts.dedup();
    let mut out = Clipped::default();
    let (pf, qf) = (p.to_f64(), q.to_f64());
    for w in cuts.windows(2) {
        let m = (&w[0] + &w[1]) / qi(2);
        let mp = p.lerp(q, &m);
        let mut keep = true;
        let mut unsure = false;
        for link in chain {
            match link {
                ChainLink::Side(s) => {
                    if sign(&s.plane.height(&mp)) != s.sign as i32 {
                        keep = false;
                    }
                }
                ChainLink::Voxel { decomp, cell, .. } => {
                    let (a, b) = (crate::num::to_f64(&w[0]), crate::num::to_f64(&w[1]));
                    let mut hit = None;
                    for f in [0.5, 0.25, 0.75, 0.125, 0.875] {
                        let t = a + f * (b - a);
                        let x = [0, 1, 2].map(|c| pf[c] + t * (qf[c] - pf[c]));
                        if let Located::Cell(c) = decomp.locate_f64(x) {
                            hit = Some(c);
                            break;
                        }
                    }
                    match hit {
                        Some(c) if c == *cell => {}
                        Some(_) => keep = false,
                        None => unsure = true,
                    }
                }
            }
        }
        if keep && unsure {
            out.ambiguous += 1;
        } else if keep {
            out.arcs.push((w[0].clone(), w[1].clone()));
        }
    }
    // Adjacent kept pieces split only by a cut of a dropped constraint are merged.
    let mut merged: Vec<(Q, Q)> = Vec::new();
    for (a, b) in out.arcs.drain(..) {
        if let Some(last) = merged.last_mut() {
            if last.1 == a && point_inside(&p.lerp(q, &a), chain) {
                last.1 = b;
                continue;
            }
        }
        merged.push((a, b));
    }
    out.arcs = merged;
    Ok(out)
}

fn point_inside(x: &Point3, chain: &[ChainLink]) -> bool {
    chain.iter().all(|l| match l {
        ChainLink::Side(s) => sign(&s.plane.height(x)) == s.sign as i32,
        ChainLink::Voxel { f, decomp, cell } => {
            !f.eval(&x.coords()).is_zero() && decomp.locate_cell(x) == Located::Cell(*cell)
        }
    })
}

/// Lifts a chart point to the triangle's plane.
pub fn lift(t: &Triangle, p: &Point2) -> Point3 {
    t.plane.lift(p)
}

/// Face classification on a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceKind {
    Piercing,
    Slicing,
}

/// Classifies the faces of a segment map whose region is the triangle itself,
/// or a sub-polygon of it: a face is piercing when a trapezoid of it has a
/// side on an edge of the triangle.
pub fn classify_faces(t: &Triangle, map: &SegmentMap) -> Vec<FaceKind> {
    let proj = t.proj();
    let on_edge: Vec<bool> = map
        .arcs
        .iter()
        .map(|a| {
            let (u, v) = (&map.vertices[a.a], &map.vertices[a.b]);
            (0..3).any(|k| {
                let (e0, e1) = (&proj[k], &proj[(k + 1) % 3]);
                crate::geom::orient2d(e0, e1, u) == 0 && crate::geom::orient2d(e0, e1, v) == 0
            })
        })
        .collect();
    let mut kind = vec![FaceKind::Slicing; map.faces];
    for tr in &map.trapezoids {
        if on_edge[tr.bottom] || on_edge[tr.top] {
            kind[tr.face] = FaceKind::Piercing;
        }
    }
    kind
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;
    use crate::poly::xyz;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tri(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> Triangle {
        Triangle::new(0, Point3::ints(a[0], a[1], a[2]), Point3::ints(b[0], b[1], b[2]), Point3::ints(c[0], c[1], c[2])).unwrap()
    }

    fn zf() -> TriPoly {
        TriPoly::new(xyz().2).unwrap()
    }

    #[test]
    fn zero_set_of_a_horizontal_plane() {
        let flat = tri([0, 0, 1], [4, 0, 1], [0, 4, 1]);
        assert_eq!(draw_zero_set(&flat, &zf(), 0).unwrap(), None);
        let tilted = tri([0, 0, -1], [4, 0, 3], [0, 4, -1]);
        let c = draw_zero_set(&tilted, &zf(), 0).unwrap().unwrap();
        let (a, b) = c.as_segment().unwrap();
        assert_eq!(a.x, qi(1));
        assert_eq!(b.x, qi(1));
        let inside = tri([0, 0, 0], [4, 0, 0], [0, 4, 0]);
        assert_eq!(draw_zero_set(&inside, &zf(), 0), Err(DrawError::Contained(0)));
    }

    #[test]
    fn sphere_on_a_horizontal_triangle_is_a_circle() {
        let (x, y, z) = xyz();
        let f = TriPoly::new(&(&(&x * &x) + &(&y * &y)) + &(&(&z * &z) - &Poly::one(3))).unwrap();
        let t = tri([-3, -3, 0], [3, -3, 0], [0, 4, 0]);
        let c = draw_zero_set(&t, &f, 0).unwrap().unwrap();
        assert_eq!(c.geom, CurveGeom::Algebraic);
        // Membership oracle: the curve vanishes exactly on the unit circle.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (a, b) = (rng.gen_range(-40..40), rng.gen_range(-40..40));
            let p = [q(a, 20), q(b, 20)];
            let on = &p[0] * &p[0] + &p[1] * &p[1] == qi(1);
            assert_eq!(c.poly.eval(&p).is_zero(), on);
        }
        assert!(c.poly.eval(&[q(3, 5), q(4, 5)]).is_zero());
    }

    #[test]
    fn curtains() {
        let (x, _, z) = xyz();
        let t = tri([-1, -1, 5], [1, -1, 5], [0, 1, 5]);
        let f = TriPoly::new(&(&z * &z) - &x).unwrap();
        let c = draw_curtain(&t, &f, 0).unwrap().unwrap();
        let (a, b) = c.as_segment().unwrap();
        assert!(a.x.is_zero() && b.x.is_zero());
        assert_eq!(draw_curtain(&t, &zf(), 0).unwrap(), None);
        let two = TriPoly::new(&(&z * &z) - &Poly::one(3)).unwrap();
        assert_eq!(draw_curtain(&t, &two, 0).unwrap(), None);
    }

    #[test]
    fn plane_traces() {
        let t = tri([0, 0, 0], [4, 0, 2], [0, 4, 1]);
        let planes = [Plane::new(qi(0), qi(0), qi(1)), Plane::new(qi(0), qi(0), qi(5)), t.plane.clone()];
        assert_eq!(draw_plane_traces(&t, &planes, 0).len(), 1);
    }

    #[test]
    fn cylinder_trace_of_a_square_slice() {
        let other = tri([-4, -4, 3], [4, -4, 3], [0, 4, 3]);
        let sq = [(0, 0), (1, 0), (1, 1), (0, 1)].map(|(a, b)| Point2::new(qi(a), qi(b)));
        let b = SliceBoundary {
            owner: 9,
            segments: (0..4).map(|i| (sq[i].clone(), sq[(i + 1) % 4].clone())).collect(),
            curves: vec![],
        };
        assert_eq!(draw_cylinder_trace(&other, &b, 0).len(), 4);
        let far = tri([10, 10, 3], [14, 10, 3], [10, 14, 3]);
        assert!(draw_cylinder_trace(&far, &b, 0).is_empty());
    }

    #[test]
    fn clip_to_a_plane_side() {
        let p = Point3::ints(0, 0, -1);
        let r = Point3::ints(0, 0, 3);
        assert_eq!(clip_curve(&p, &r, &[]).unwrap().arcs, vec![(Q::zero(), Q::one())]);
        let side = Side { plane: Plane::new(qi(0), qi(0), qi(0)), sign: 1 };
        let c = clip_curve(&p, &r, &[ChainLink::Side(side)]).unwrap();
        assert_eq!(c.arcs, vec![(q(1, 4), Q::one())]);
    }

    #[test]
    fn face_classes() {
        let t = tri([0, 0, 0], [10, 0, 0], [0, 10, 0]);
        let proj = t.proj();
        let m = build_segment_map(&proj, &[], 1).unwrap();
        assert_eq!(classify_faces(&t, &m), vec![FaceKind::Piercing]);
        let cut = [(Point2::new(qi(2), qi(-1)), Point2::new(qi(2), qi(11)))];
        let m = build_segment_map(&proj, &cut, 1).unwrap();
        assert_eq!(classify_faces(&t, &m), vec![FaceKind::Piercing; 2]);
        // Three chords enclosing a small interior triangle.
        let pt = |a: i64, b: i64| Point2::new(qi(a), qi(b));
        let chords: Vec<_> = [
            Lin2::left_of(&pt(1, 1), &pt(5, 1)),
            Lin2::left_of(&pt(5, 1), &pt(1, 5)),
            Lin2::left_of(&pt(1, 5), &pt(1, 1)),
        ]
        .iter()
        .map(|l| line_chord(l, &proj).unwrap())
        .collect();
        let m = build_segment_map(&proj, &chords, 1).unwrap();
        let kinds = classify_faces(&t, &m);
        assert_eq!(kinds.iter().filter(|k| **k == FaceKind::Slicing).count(), 1);
        assert_eq!(kinds.len(), 7);
    }
}
