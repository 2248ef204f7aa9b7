//! Exact points, planes and triangles.

mod intersect;
pub mod polygon;
pub mod polyhedron;
mod position;
mod scene;
mod tilt;

pub use intersect::{above_below, projections_overlap, tri_tri_intersect, DepthOrderLabel};
pub use position::{verify_general_position, GpReport, Violation};
pub use scene::{parse_scene, write_scene, BBox, Scene, SceneParseError};
pub use tilt::{tilt_frame, Rotation, TiltError, TiltOutcome};

use crate::num::{qi, to_f64, Q};
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("triangle {0} is degenerate")]
    Degenerate(usize),
    #[error("triangle {0} lies in a vertical plane")]
    Vertical(usize),
    #[error("self comparison of triangle {0}")]
    SelfComparison(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Q,
    pub y: Q,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point3 {
    pub x: Q,
    pub y: Q,
    pub z: Q,
}

impl Point2 {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.x), to_f64(&self.y)]
    }

    pub fn lerp(&self, o: &Point2, t: &Q) -> Point2 {
        Point2 { x: &self.x + (&o.x - &self.x) * t, y: &self.y + (&o.y - &self.y) * t }
    }
}

impl Point3 {
    pub fn new(x: Q, y: Q, z: Q) -> Self {
        Self { x, y, z }
    }

    pub fn ints(x: i64, y: i64, z: i64) -> Self {
        Self { x: qi(x), y: qi(y), z: qi(z) }
    }

    pub fn xy(&self) -> Point2 {
        Point2 { x: self.x.clone(), y: self.y.clone() }
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [to_f64(&self.x), to_f64(&self.y), to_f64(&self.z)]
    }

    pub fn coords(&self) -> [Q; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn sub(&self, o: &Point3) -> [Q; 3] {
        [&self.x - &o.x, &self.y - &o.y, &self.z - &o.z]
    }

    pub fn lerp(&self, o: &Point3, t: &Q) -> Point3 {
        Point3 {
            x: &self.x + (&o.x - &self.x) * t,
            y: &self.y + (&o.y - &self.y) * t,
            z: &self.z + (&o.z - &self.z) * t,
        }
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.to_f64();
        write!(f, "({x:.4}, {y:.4})")
    }
}

impl fmt::Debug for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.to_f64();
        write!(f, "({x:.4}, {y:.4}, {z:.4})")
    }
}

/// Sign of the signed area of `(a, b, c)`: `1` for counter-clockwise.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> i32 {
    crate::num::sign(&cross2(a, b, c))
}

pub fn cross2(a: &Point2, b: &Point2, c: &Point2) -> Q {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

pub fn orient2d_f64(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Sign of the determinant of `(b - a, c - a, d - a)`.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> i32 {
    let u = b.sub(a);
    let v = c.sub(a);
    let w = d.sub(a);
    let det = &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
        + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0]);
    crate::num::sign(&det)
}

/// Closed-segment intersection test in the plane.
pub fn segments_intersect(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let o1 = orient2d(a, b, c);
    let o2 = orient2d(a, b, d);
    let o3 = orient2d(c, d, a);
    let o4 = orient2d(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// For collinear `p`, whether it lies on the closed segment `ab`.
pub fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    crate::num::min(&a.x, &b.x) <= p.x
        && p.x <= crate::num::max(&a.x, &b.x)
        && crate::num::min(&a.y, &b.y) <= p.y
        && p.y <= crate::num::max(&a.y, &b.y)
}

/// Intersection point of the lines through `ab` and `cd`, if they are not parallel.
pub fn line_intersection(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Option<(Point2, Q, Q)> {
    let r = [&b.x - &a.x, &b.y - &a.y];
    let s = [&d.x - &c.x, &d.y - &c.y];
    let den = &r[0] * &s[1] - &r[1] * &s[0];
    if den.is_zero() {
        return None;
    }
    let qp = [&c.x - &a.x, &c.y - &a.y];
    let t = (&qp[0] * &s[1] - &qp[1] * &s[0]) / &den;
    let u = (&qp[0] * &r[1] - &qp[1] * &r[0]) / &den;
    Some((a.lerp(b, &t), t, u))
}

/// Non-vertical plane `z = a x + b y + c`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Plane {
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl Plane {
    pub fn new(a: Q, b: Q, c: Q) -> Self {
        Self { a, b, c }
    }

    pub fn through(p: &Point3, q: &Point3, r: &Point3) -> Option<Plane> {
        let u = q.sub(p);
        let v = r.sub(p);
        let nx = &u[1] * &v[2] - &u[2] * &v[1];
        let ny = &u[2] * &v[0] - &u[0] * &v[2];
        let nz = &u[0] * &v[1] - &u[1] * &v[0];
        if nz.is_zero() {
            return None;
        }
        let a = -(&nx / &nz);
        let b = -(&ny / &nz);
        let c = &p.z - &a * &p.x - &b * &p.y;
        Some(Plane { a, b, c })
    }

    pub fn z_at(&self, x: &Q, y: &Q) -> Q {
        &self.a * x + &self.b * y + &self.c
    }

    pub fn z_at_f64(&self, x: f64, y: f64) -> f64 {
        to_f64(&self.a) * x + to_f64(&self.b) * y + to_f64(&self.c)
    }

    /// Signed height of `p` above the plane.
    pub fn height(&self, p: &Point3) -> Q {
        &p.z - self.z_at(&p.x, &p.y)
    }

    pub fn lift(&self, p: &Point2) -> Point3 {
        Point3 { x: p.x.clone(), y: p.y.clone(), z: self.z_at(&p.x, &p.y) }
    }

    /// `self - other` as an affine function `[c, a, b]` of `(x, y)`.
    pub fn diff(&self, o: &Plane) -> [Q; 3] {
        [&self.c - &o.c, &self.a - &o.a, &self.b - &o.b]
    }
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "z = {}x + {}y + {}",
            crate::num::format_rational(&self.a),
            crate::num::format_rational(&self.b),
            crate::num::format_rational(&self.c)
        )
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Triangle {
    pub id: usize,
    pub v: [Point3; 3],
    pub plane: Plane,
}

impl Triangle {
    pub fn new(id: usize, a: Point3, b: Point3, c: Point3) -> Result<Self, GeomError> {
        let u = b.sub(&a);
        let w = c.sub(&a);
        let n = [
            &u[1] * &w[2] - &u[2] * &w[1],
            &u[2] * &w[0] - &u[0] * &w[2],
            &u[0] * &w[1] - &u[1] * &w[0],
        ];
        if n.iter().all(|x| x.is_zero()) {
            return Err(GeomError::Degenerate(id));
        }
        let plane = Plane::through(&a, &b, &c).ok_or(GeomError::Vertical(id))?;
        Ok(Self { id, v: [a, b, c], plane })
    }

    /// Projected vertices in counter-clockwise order.
    pub fn proj(&self) -> [Point2; 3] {
        let p = [self.v[0].xy(), self.v[1].xy(), self.v[2].xy()];
        if orient2d(&p[0], &p[1], &p[2]) > 0 {
            p
        } else {
            [p[0].clone(), p[2].clone(), p[1].clone()]
        }
    }

    pub fn edges(&self) -> [(Point3, Point3); 3] {
        [
            (self.v[0].clone(), self.v[1].clone()),
            (self.v[1].clone(), self.v[2].clone()),
            (self.v[2].clone(), self.v[0].clone()),
        ]
    }

    /// Closed containment of the projection.
    pub fn contains_xy(&self, p: &Point2) -> bool {
        let [a, b, c] = self.proj();
        orient2d(&a, &b, p) >= 0 && orient2d(&b, &c, p) >= 0 && orient2d(&c, &a, p) >= 0
    }

    pub fn area2_xy(&self) -> Q {
        let [a, b, c] = self.proj();
        cross2(&a, &b, &c)
    }

    pub fn centroid(&self) -> Point3 {
        let three = qi(3);
        Point3 {
            x: (&self.v[0].x + &self.v[1].x + &self.v[2].x) / &three,
            y: (&self.v[0].y + &self.v[1].y + &self.v[2].y) / &three,
            z: (&self.v[0].z + &self.v[1].z + &self.v[2].z) / &three,
        }
    }
}

impl fmt::Debug for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}[{:?} {:?} {:?}]", self.id, self.v[0], self.v[1], self.v[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn plane_through_points() {
        let t = Triangle::new(0, Point3::ints(0, 0, 1), Point3::ints(1, 0, 3), Point3::ints(0, 1, 0)).unwrap();
        assert_eq!(t.plane, Plane::new(qi(2), qi(-1), qi(1)));
        assert_eq!(t.plane.z_at(&q(1, 2), &q(1, 2)), q(3, 2));
        assert!(matches!(
            Triangle::new(1, Point3::ints(0, 0, 0), Point3::ints(1, 0, 0), Point3::ints(0, 0, 1)),
            Err(GeomError::Vertical(1))
        ));
        assert!(matches!(
            Triangle::new(2, Point3::ints(0, 0, 0), Point3::ints(1, 1, 1), Point3::ints(2, 2, 2)),
            Err(GeomError::Degenerate(2))
        ));
    }

    #[test]
    fn segment_predicates() {
        let p = |x, y| Point2::new(qi(x), qi(y));
        assert!(segments_intersect(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
        assert!(segments_intersect(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 5)));
        assert!(!segments_intersect(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)));
        let (x, t, u) = line_intersection(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)).unwrap();
        assert_eq!((x, t, u), (p(1, 1), q(1, 2), q(1, 2)));
    }
}
