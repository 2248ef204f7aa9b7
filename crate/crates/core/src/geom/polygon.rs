//! Convex polygons in the plane, exact and with a float broad phase.

use super::{cross2, orient2d, Point2};
use crate::num::{qi, sign, to_f64, Q};
use num_traits::Zero;

/// Affine function `c + a x + b y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lin2 {
    pub c: Q,
    pub a: Q,
    pub b: Q,
}

impl Lin2 {
    pub fn new(c: Q, a: Q, b: Q) -> Self {
        Self { c, a, b }
    }

    pub fn from_array(v: [Q; 3]) -> Self {
        let [c, a, b] = v;
        Self { c, a, b }
    }

    pub fn eval(&self, p: &Point2) -> Q {
        &self.c + &self.a * &p.x + &self.b * &p.y
    }

    pub fn eval_f64(&self, p: [f64; 2]) -> f64 {
        to_f64(&self.c) + to_f64(&self.a) * p[0] + to_f64(&self.b) * p[1]
    }

    pub fn neg(&self) -> Lin2 {
        Lin2 { c: -&self.c, a: -&self.a, b: -&self.b }
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Positive on the left of the directed line `p -> q`.
    pub fn left_of(p: &Point2, q: &Point2) -> Lin2 {
        let a = -(&q.y - &p.y);
        let b = &q.x - &p.x;
        let c = -(&a * &p.x + &b * &p.y);
        Lin2 { c, a, b }
    }
}

pub fn dedup(mut poly: Vec<Point2>) -> Vec<Point2> {
    poly.dedup();
    while poly.len() > 1 && poly.first() == poly.last() {
        poly.pop();
    }
    poly
}

/// Keeps the part where `h >= 0` (closed half-plane).
pub fn clip(poly: &[Point2], h: &Lin2) -> Vec<Point2> {
    let n = poly.len();
    if n == 0 {
        return vec![];
    }
    let vals: Vec<Q> = poly.iter().map(|p| h.eval(p)).collect();
    if vals.iter().all(|v| sign(v) >= 0) {
        return poly.to_vec();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (si, sj) = (sign(&vals[i]), sign(&vals[j]));
        if si >= 0 {
            out.push(poly[i].clone());
        }
        if si * sj < 0 {
            let t = &vals[i] / (&vals[i] - &vals[j]);
            out.push(poly[i].lerp(&poly[j], &t));
        }
    }
    dedup(out)
}

/// Closed intersection of two counter-clockwise convex polygons.
pub fn intersect(p: &[Point2], q: &[Point2]) -> Vec<Point2> {
    let mut cur = p.to_vec();
    let n = q.len();
    for i in 0..n {
        if cur.is_empty() {
            break;
        }
        let h = Lin2::left_of(&q[i], &q[(i + 1) % n]);
        cur = clip(&cur, &h);
    }
    cur
}

/// Twice the signed area.
pub fn area2(poly: &[Point2]) -> Q {
    let mut s = Q::zero();
    if poly.len() < 3 {
        return s;
    }
    for i in 1..poly.len() - 1 {
        s += cross2(&poly[0], &poly[i], &poly[i + 1]);
    }
    s
}

pub fn area2_f64(poly: &[[f64; 2]]) -> f64 {
    let mut s = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    s
}

pub fn vertex_average(poly: &[Point2]) -> Point2 {
    let n = qi(poly.len() as i64);
    let mut x = Q::zero();
    let mut y = Q::zero();
    for p in poly {
        x += &p.x;
        y += &p.y;
    }
    Point2 { x: x / &n, y: y / n }
}

/// Closed containment in a counter-clockwise convex polygon.
pub fn contains(poly: &[Point2], p: &Point2) -> bool {
    let n = poly.len();
    (0..n).all(|i| orient2d(&poly[i], &poly[(i + 1) % n], p) >= 0)
}

pub fn contains_strict(poly: &[Point2], p: &Point2) -> bool {
    let n = poly.len();
    n >= 3 && (0..n).all(|i| orient2d(&poly[i], &poly[(i + 1) % n], p) > 0)
}

/// Puts a convex vertex list into counter-clockwise order.
pub fn make_ccw(mut poly: Vec<Point2>) -> Vec<Point2> {
    if sign(&area2(&poly)) < 0 {
        poly.reverse();
    }
    poly
}

/// Fan triangulation from the first vertex.
pub fn fan(poly: &[Point2]) -> Vec<[Point2; 3]> {
    (1..poly.len().saturating_sub(1))
        .map(|i| [poly[0].clone(), poly[i].clone(), poly[i + 1].clone()])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlap {
    Disjoint,
    Overlapping,
    Unsure,
}

/// Separating-axis test on float images of two convex polygons.
///
/// `Disjoint` and `Overlapping` are only returned when every axis clears
/// the margin; the caller falls back to exact clipping on `Unsure`.
pub fn sat_f64(p: &[[f64; 2]], q: &[[f64; 2]], margin: f64) -> Overlap {
    let mut min_pen = f64::INFINITY;
    for (a, b) in [(p, q), (q, p)] {
        let n = a.len();
        for i in 0..n {
            let e0 = a[i];
            let e1 = a[(i + 1) % n];
            let nx = -(e1[1] - e0[1]);
            let ny = e1[0] - e0[0];
            let len = (nx * nx + ny * ny).sqrt();
            if len == 0.0 {
                continue;
            }
            let proj = |v: &[f64; 2]| (nx * v[0] + ny * v[1]) / len;
            let (amin, amax) = a.iter().map(proj).fold((f64::INFINITY, f64::NEG_INFINITY), |m, v| (m.0.min(v), m.1.max(v)));
            let (bmin, bmax) = b.iter().map(proj).fold((f64::INFINITY, f64::NEG_INFINITY), |m, v| (m.0.min(v), m.1.max(v)));
            let pen = amax.min(bmax) - amin.max(bmin);
            if pen < -margin {
                return Overlap::Disjoint;
            }
            min_pen = min_pen.min(pen);
        }
    }
    if min_pen > margin {
        Overlap::Overlapping
    } else {
        Overlap::Unsure
    }
}

pub fn to_f64_poly(poly: &[Point2]) -> Vec<[f64; 2]> {
    poly.iter().map(|p| p.to_f64()).collect()
}
